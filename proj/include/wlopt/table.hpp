#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace wlopt {

struct TypeEntry {
  std::string form;               // empty for anonymous, pre-aggregated rows
  std::uint64_t frequency = 0;    // absolute count, at least 1
  double length = 0.0;            // non-negative and finite
};

// Immutable word list: one row per type, with absolute frequency and length.
// Probabilities are always derived from the counts on demand, never stored.
class FrequencyLengthTable {
 public:
  explicit FrequencyLengthTable(std::vector<TypeEntry> entries);

  std::size_t size() const { return entries_.size(); }
  const TypeEntry& entry(std::size_t i) const { return entries_[i]; }
  const std::vector<TypeEntry>& entries() const { return entries_; }

  std::uint64_t total_tokens() const { return total_; }
  double probability(std::size_t i) const {
    return static_cast<double>(entries_[i].frequency) / static_cast<double>(total_);
  }
  std::vector<double> probabilities() const;
  std::vector<double> lengths() const;

  // True when every row carries a surface form; operations that need the
  // written form (alphabets, vowel recoding) reject tables without it.
  bool has_forms() const { return has_forms_; }

 private:
  std::vector<TypeEntry> entries_;
  std::uint64_t total_ = 0;
  bool has_forms_ = false;
};

// L, the frequency-weighted mean token length: sum p_i l_i, evaluated as
// (sum f_i l_i) / T so the only division happens once.
double mean_token_length(const FrequencyLengthTable& table);

// L_r, the unweighted mean type length. Equals the expectation of L when the
// length column is paired with the types uniformly at random.
double random_baseline(const FrequencyLengthTable& table);

// The pairing that minimises L: probabilities descending against lengths
// ascending. Kept because the minimal correlation levels are read off it.
struct MinArrangement {
  std::vector<double> probabilities;  // non-increasing
  std::vector<double> lengths;        // non-decreasing
};

struct MinimumBaseline {
  double value = 0.0;  // L_min
  MinArrangement arrangement;
};

MinimumBaseline minimum_baseline(const FrequencyLengthTable& table);

// Pointwise re-coding of the length column. The map must produce finite,
// non-negative values for every length in the table.
using LengthMap = std::function<double(double)>;

FrequencyLengthTable apply_length_transform(const FrequencyLengthTable& table,
                                            const LengthMap& map);

LengthMap affine_map(double scale, double shift);
LengthMap power_map(double base);  // l -> base^l

}  // namespace wlopt
