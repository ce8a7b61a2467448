#include "wlopt/table.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_set>

#include "wlopt/error.hpp"
#include "wlopt/summation.hpp"

namespace wlopt {

FrequencyLengthTable::FrequencyLengthTable(std::vector<TypeEntry> entries)
    : entries_(std::move(entries)) {
  if (entries_.empty()) fail(Errc::empty_table, "a table needs at least one type");
  std::unordered_set<std::string> seen;
  has_forms_ = true;
  for (const TypeEntry& e : entries_) {
    if (e.frequency == 0) {
      fail(Errc::zero_frequency, "type '" + e.form + "' has frequency 0");
    }
    if (!std::isfinite(e.length)) {
      fail(Errc::non_finite_length, "type '" + e.form + "' has a non-finite length");
    }
    if (e.length < 0.0) {
      fail(Errc::negative_length, "type '" + e.form + "' has a negative length");
    }
    if (e.form.empty()) {
      has_forms_ = false;
    } else if (!seen.insert(e.form).second) {
      fail(Errc::duplicate_form, "type '" + e.form + "' appears twice");
    }
    total_ += e.frequency;
  }
}

std::vector<double> FrequencyLengthTable::probabilities() const {
  std::vector<double> p;
  p.reserve(entries_.size());
  for (std::size_t i = 0; i < entries_.size(); ++i) p.push_back(probability(i));
  return p;
}

std::vector<double> FrequencyLengthTable::lengths() const {
  std::vector<double> l;
  l.reserve(entries_.size());
  for (const TypeEntry& e : entries_) l.push_back(e.length);
  return l;
}

double mean_token_length(const FrequencyLengthTable& table) {
  CompensatedSum s;
  for (const TypeEntry& e : table.entries()) {
    s.add(static_cast<double>(e.frequency) * e.length);
  }
  return s.total() / static_cast<double>(table.total_tokens());
}

double random_baseline(const FrequencyLengthTable& table) {
  CompensatedSum s;
  for (const TypeEntry& e : table.entries()) s.add(e.length);
  return s.total() / static_cast<double>(table.size());
}

MinimumBaseline minimum_baseline(const FrequencyLengthTable& table) {
  MinArrangement arr;
  arr.probabilities = table.probabilities();
  arr.lengths = table.lengths();
  std::stable_sort(arr.probabilities.begin(), arr.probabilities.end(),
                   std::greater<double>());
  std::stable_sort(arr.lengths.begin(), arr.lengths.end());

  // Same evaluation scheme as mean_token_length: weight by counts, divide by
  // T once. Frequencies are re-sorted alongside the probabilities.
  std::vector<std::uint64_t> freqs;
  freqs.reserve(table.size());
  for (const TypeEntry& e : table.entries()) freqs.push_back(e.frequency);
  std::stable_sort(freqs.begin(), freqs.end(), std::greater<std::uint64_t>());

  CompensatedSum s;
  for (std::size_t i = 0; i < freqs.size(); ++i) {
    s.add(static_cast<double>(freqs[i]) * arr.lengths[i]);
  }
  MinimumBaseline out;
  out.value = s.total() / static_cast<double>(table.total_tokens());
  out.arrangement = std::move(arr);
  return out;
}

FrequencyLengthTable apply_length_transform(const FrequencyLengthTable& table,
                                            const LengthMap& map) {
  std::vector<TypeEntry> entries = table.entries();
  for (TypeEntry& e : entries) {
    double mapped = map(e.length);
    if (!std::isfinite(mapped) || mapped < 0.0) {
      fail(Errc::bad_transform,
           "length " + std::to_string(e.length) + " maps to an invalid value");
    }
    e.length = mapped;
  }
  return FrequencyLengthTable(std::move(entries));
}

LengthMap affine_map(double scale, double shift) {
  return [scale, shift](double l) { return scale * l + shift; };
}

LengthMap power_map(double base) {
  return [base](double l) { return std::pow(base, l); };
}

}  // namespace wlopt
