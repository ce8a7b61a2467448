#pragma once

#include <stdexcept>
#include <string>

namespace wlopt {

enum class Errc {
  empty_table,
  length_mismatch,
  non_finite_length,
  negative_length,
  zero_frequency,
  duplicate_form,
  missing_forms,
  missing_duration,
  too_few_points,
  zero_variance,
  all_pairs_tied,
  degenerate_sample,
  degenerate_table,
  zero_length,
  out_of_range_p,
  malformed_row,
  non_utf8,
  negative_duration,
  empty_alphabet,
  label_mismatch,
  bad_transform,
  bad_argument,
  io_error,
};

inline const char* errc_name(Errc c) {
  switch (c) {
    case Errc::empty_table: return "empty_table";
    case Errc::length_mismatch: return "length_mismatch";
    case Errc::non_finite_length: return "non_finite_length";
    case Errc::negative_length: return "negative_length";
    case Errc::zero_frequency: return "zero_frequency";
    case Errc::duplicate_form: return "duplicate_form";
    case Errc::missing_forms: return "missing_forms";
    case Errc::missing_duration: return "missing_duration";
    case Errc::too_few_points: return "too_few_points";
    case Errc::zero_variance: return "zero_variance";
    case Errc::all_pairs_tied: return "all_pairs_tied";
    case Errc::degenerate_sample: return "degenerate_sample";
    case Errc::degenerate_table: return "degenerate_table";
    case Errc::zero_length: return "zero_length";
    case Errc::out_of_range_p: return "out_of_range_p";
    case Errc::malformed_row: return "malformed_row";
    case Errc::non_utf8: return "non_utf8";
    case Errc::negative_duration: return "negative_duration";
    case Errc::empty_alphabet: return "empty_alphabet";
    case Errc::label_mismatch: return "label_mismatch";
    case Errc::bad_transform: return "bad_transform";
    case Errc::bad_argument: return "bad_argument";
    case Errc::io_error: return "io_error";
  }
  return "unknown";
}

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& message)
      : std::runtime_error(std::string(errc_name(code)) + ": " + message), code_(code) {}

  Errc code() const { return code_; }

 private:
  Errc code_;
};

[[noreturn]] inline void fail(Errc code, const std::string& message) {
  throw Error(code, message);
}

}  // namespace wlopt
