#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "wlopt/nullmodel.hpp"
#include "wlopt/table.hpp"

namespace wlopt {

struct TokenRecord {
  enum class Tag { none, punct, unknown, null };
  std::string surface;
  std::optional<double> duration;  // seconds, from aligned input
  Tag tag = Tag::none;
};

// One token per line. Blank lines are skipped, "<unk>" is tagged unknown.
std::vector<TokenRecord> read_token_list(std::istream& in);

// Header "token\tduration_seconds", one occurrence per row.
std::vector<TokenRecord> read_aligned_durations(std::istream& in);

// Header "type\tfrequency\tlength"; "-" marks an anonymous type.
FrequencyLengthTable read_fl_table(std::istream& in);

struct FilterOptions {
  // Code points removed from surfaces after lowercasing.
  std::u32string strip_chars = U"=";
};

// Drops tagged tokens and anything containing an ASCII digit, lowercases the
// rest per code point, strips the configured special characters, and drops
// tokens that end up empty. Idempotent.
std::vector<TokenRecord> mandatory_filter(std::vector<TokenRecord> tokens,
                                          const FilterOptions& options = {});

struct CharStat {
  char32_t ch = 0;
  std::uint64_t count = 0;  // occurrences across the corpus
  double log_count = 0.0;
};

// Split of the observed characters into a high-frequency working set and a
// low-frequency residue: the exact minimum-SSE two-cluster split of the
// log counts. When every character has the same count, everything is kept
// and there is no split.
struct WorkingAlphabet {
  std::vector<CharStat> kept;      // count descending, then code point
  std::vector<CharStat> excluded;  // count descending, then code point
  std::optional<double> threshold;  // log-count midpoint between the clusters
  std::optional<double> sse;        // within-cluster sum of squares
};

WorkingAlphabet working_alphabet(const std::vector<TokenRecord>& tokens);
WorkingAlphabet working_alphabet(const FrequencyLengthTable& table);

// Drops tokens containing any excluded character.
std::vector<TokenRecord> apply_alphabet_filter(std::vector<TokenRecord> tokens,
                                               const WorkingAlphabet& alphabet);

bool is_cjk(char32_t cp);

// Alternate working-set rule for Chinese and Japanese: drop tokens with any
// character outside the CJK ranges.
std::vector<TokenRecord> apply_cjk_filter(std::vector<TokenRecord> tokens);

enum class LengthMode { chars, duration_median, duration_mean };

// Groups occurrences by surface form. Lengths are code point counts or,
// for aligned input, the median or mean duration of the occurrences.
FrequencyLengthTable aggregate(const std::vector<TokenRecord>& tokens, LengthMode mode);

const std::u32string& default_vowels();
std::u32string read_vowel_set(std::istream& in);

// Weak recoding: lengths become the count of non-vowel code points in each
// form. Types, forms and frequencies are untouched; zero lengths are legal.
FrequencyLengthTable drop_vowels(const FrequencyLengthTable& table,
                                 const std::u32string& vowels);
FrequencyLengthTable drop_vowels(const FrequencyLengthTable& table);

struct ConvergencePoint {
  std::uint64_t sample_tokens = 0;  // t
  ScoreStat eta, psi, omega;
};

struct ConvergenceCurve {
  std::vector<ConvergencePoint> points;
  std::uint64_t replicates = 0;  // per point
  std::uint64_t seed = 0;
};

// Score stability under subsampling: t runs over powers of two below the
// corpus size, plus the full corpus, with `replicates` samples drawn without
// replacement at each t. Replicates whose sample makes a score undefined are
// excluded from that score's summary and counted out of `valid`.
ConvergenceCurve convergence_curve(const std::vector<TokenRecord>& tokens, LengthMode mode,
                                   std::uint64_t replicates, std::uint64_t seed,
                                   Execution ex = Execution::parallel);

}  // namespace wlopt
