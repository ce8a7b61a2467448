#include "wlopt/ingest.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <istream>
#include <iterator>
#include <map>
#include <numeric>
#include <unordered_map>
#include <unordered_set>

#include "wlopt/correlation.hpp"
#include "wlopt/error.hpp"
#include "wlopt/summation.hpp"
#include "wlopt/utf8.hpp"

namespace wlopt {

namespace {

// Reads one line, tolerating CRLF input. Returns false at end of stream.
bool next_line(std::istream& in, std::string& line) {
  if (!std::getline(in, line)) return false;
  if (!line.empty() && line.back() == '\r') line.pop_back();
  return true;
}

[[noreturn]] void bad_row(std::size_t line_no, const std::string& what) {
  fail(Errc::malformed_row, "line " + std::to_string(line_no) + ": " + what);
}

std::vector<std::string> split_tabs(const std::string& line) {
  std::vector<std::string> fields;
  std::size_t start = 0;
  for (;;) {
    std::size_t tab = line.find('\t', start);
    if (tab == std::string::npos) {
      fields.push_back(line.substr(start));
      return fields;
    }
    fields.push_back(line.substr(start, tab - start));
    start = tab + 1;
  }
}

std::uint64_t parse_count(const std::string& s, std::size_t line_no) {
  std::uint64_t value = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc() || ptr != s.data() + s.size() || s.empty()) {
    bad_row(line_no, "'" + s + "' is not a count");
  }
  return value;
}

double parse_number(const std::string& s, std::size_t line_no) {
  double value = 0.0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc() || ptr != s.data() + s.size() || s.empty()) {
    bad_row(line_no, "'" + s + "' is not a number");
  }
  return value;
}

void validate_utf8(const std::string& s, std::size_t line_no) {
  try {
    utf8::decode(s);
  } catch (const Error& e) {
    fail(Errc::non_utf8, "line " + std::to_string(line_no) + ": " + e.what());
  }
}

TokenRecord make_record(std::string surface) {
  TokenRecord rec;
  rec.tag = surface == "<unk>" ? TokenRecord::Tag::unknown : TokenRecord::Tag::none;
  rec.surface = std::move(surface);
  return rec;
}

}  // namespace

std::vector<TokenRecord> read_token_list(std::istream& in) {
  std::vector<TokenRecord> tokens;
  std::string line;
  std::size_t line_no = 0;
  while (next_line(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    validate_utf8(line, line_no);
    tokens.push_back(make_record(line));
  }
  return tokens;
}

std::vector<TokenRecord> read_aligned_durations(std::istream& in) {
  std::string line;
  if (!next_line(in, line) || line != "token\tduration_seconds") {
    bad_row(1, "expected header 'token\tduration_seconds'");
  }
  std::vector<TokenRecord> tokens;
  std::size_t line_no = 1;
  while (next_line(in, line)) {
    ++line_no;
    std::vector<std::string> fields = split_tabs(line);
    if (fields.size() != 2) bad_row(line_no, "expected 2 tab-separated fields");
    if (fields[0].empty()) bad_row(line_no, "empty token");
    validate_utf8(fields[0], line_no);
    double duration = parse_number(fields[1], line_no);
    if (std::isnan(duration) || std::isinf(duration)) {
      bad_row(line_no, "duration must be finite");
    }
    if (duration < 0.0) {
      fail(Errc::negative_duration,
           "line " + std::to_string(line_no) + ": negative duration " + fields[1]);
    }
    TokenRecord rec = make_record(std::move(fields[0]));
    rec.duration = duration;
    tokens.push_back(std::move(rec));
  }
  return tokens;
}

FrequencyLengthTable read_fl_table(std::istream& in) {
  std::string line;
  if (!next_line(in, line) || line != "type\tfrequency\tlength") {
    bad_row(1, "expected header 'type\tfrequency\tlength'");
  }
  std::vector<TypeEntry> entries;
  std::size_t line_no = 1;
  while (next_line(in, line)) {
    ++line_no;
    std::vector<std::string> fields = split_tabs(line);
    if (fields.size() != 3) bad_row(line_no, "expected 3 tab-separated fields");
    TypeEntry e;
    if (fields[0] != "-") {
      if (fields[0].empty()) bad_row(line_no, "empty type; use '-' for anonymous rows");
      validate_utf8(fields[0], line_no);
      e.form = std::move(fields[0]);
    }
    e.frequency = parse_count(fields[1], line_no);
    e.length = parse_number(fields[2], line_no);
    entries.push_back(std::move(e));
  }
  return FrequencyLengthTable(std::move(entries));
}

std::vector<TokenRecord> mandatory_filter(std::vector<TokenRecord> tokens,
                                          const FilterOptions& options) {
  std::unordered_set<char32_t> strip(options.strip_chars.begin(), options.strip_chars.end());
  std::vector<TokenRecord> kept;
  kept.reserve(tokens.size());
  for (TokenRecord& rec : tokens) {
    if (rec.tag != TokenRecord::Tag::none) continue;
    std::u32string cps = utf8::decode(rec.surface);
    bool has_digit = false;
    for (char32_t cp : cps) {
      if (cp >= U'0' && cp <= U'9') {
        has_digit = true;
        break;
      }
    }
    if (has_digit) continue;
    std::u32string cleaned;
    cleaned.reserve(cps.size());
    for (char32_t cp : cps) {
      char32_t lower = lowercase_codepoint(cp);
      if (!strip.contains(lower)) cleaned.push_back(lower);
    }
    if (cleaned.empty()) continue;
    rec.surface = utf8::encode(cleaned);
    kept.push_back(std::move(rec));
  }
  return kept;
}

namespace {

std::map<char32_t, std::uint64_t> char_counts_from(const std::vector<TokenRecord>& tokens) {
  std::map<char32_t, std::uint64_t> counts;
  for (const TokenRecord& rec : tokens) {
    for (char32_t cp : utf8::decode(rec.surface)) counts[cp] += 1;
  }
  return counts;
}

std::map<char32_t, std::uint64_t> char_counts_from(const FrequencyLengthTable& table) {
  if (!table.has_forms()) {
    fail(Errc::missing_forms, "alphabets need the surface forms");
  }
  std::map<char32_t, std::uint64_t> counts;
  for (const TypeEntry& e : table.entries()) {
    for (char32_t cp : utf8::decode(e.form)) counts[cp] += e.frequency;
  }
  return counts;
}

WorkingAlphabet split_alphabet(const std::map<char32_t, std::uint64_t>& counts) {
  if (counts.empty()) fail(Errc::empty_alphabet, "no characters to cluster");

  // One point per character, ordered by count (log is monotone, so the
  // log values are sorted too). Ties break by code point for determinism.
  std::vector<CharStat> stats;
  stats.reserve(counts.size());
  for (auto [cp, count] : counts) {
    stats.push_back(CharStat{cp, count, std::log(static_cast<double>(count))});
  }
  std::sort(stats.begin(), stats.end(), [](const CharStat& a, const CharStat& b) {
    if (a.count != b.count) return a.count < b.count;
    return a.ch < b.ch;
  });

  const std::size_t m = stats.size();
  std::vector<double> prefix(m + 1, 0.0), prefix_sq(m + 1, 0.0);
  for (std::size_t i = 0; i < m; ++i) {
    prefix[i + 1] = prefix[i] + stats[i].log_count;
    prefix_sq[i + 1] = prefix_sq[i] + stats[i].log_count * stats[i].log_count;
  }
  auto segment_sse = [&](std::size_t lo, std::size_t hi) {
    double s = prefix[hi] - prefix[lo];
    double sq = prefix_sq[hi] - prefix_sq[lo];
    return sq - s * s / static_cast<double>(hi - lo);
  };

  // Exact two-cluster solution: scan every boundary between distinct
  // values. Splitting inside a run of equal values is never strictly
  // better, and skipping those keeps the clusters separated in value.
  std::size_t best_split = 0;
  double best_sse = 0.0;
  for (std::size_t k = 1; k < m; ++k) {
    if (stats[k - 1].count == stats[k].count) continue;
    double sse = segment_sse(0, k) + segment_sse(k, m);
    if (best_split == 0 || sse < best_sse) {
      best_split = k;
      best_sse = sse;
    }
  }

  WorkingAlphabet out;
  auto by_count_desc = [](const CharStat& a, const CharStat& b) {
    if (a.count != b.count) return a.count > b.count;
    return a.ch < b.ch;
  };
  if (best_split == 0) {
    // Every character has the same count; keep the full set.
    out.kept.assign(stats.begin(), stats.end());
    std::sort(out.kept.begin(), out.kept.end(), by_count_desc);
    return out;
  }
  out.excluded.assign(stats.begin(), stats.begin() + best_split);
  out.kept.assign(stats.begin() + best_split, stats.end());
  std::sort(out.excluded.begin(), out.excluded.end(), by_count_desc);
  std::sort(out.kept.begin(), out.kept.end(), by_count_desc);
  out.threshold =
      0.5 * (stats[best_split - 1].log_count + stats[best_split].log_count);
  out.sse = best_sse;
  return out;
}

}  // namespace

WorkingAlphabet working_alphabet(const std::vector<TokenRecord>& tokens) {
  return split_alphabet(char_counts_from(tokens));
}

WorkingAlphabet working_alphabet(const FrequencyLengthTable& table) {
  return split_alphabet(char_counts_from(table));
}

std::vector<TokenRecord> apply_alphabet_filter(std::vector<TokenRecord> tokens,
                                               const WorkingAlphabet& alphabet) {
  std::unordered_set<char32_t> excluded;
  for (const CharStat& c : alphabet.excluded) excluded.insert(c.ch);
  std::erase_if(tokens, [&](const TokenRecord& rec) {
    for (char32_t cp : utf8::decode(rec.surface)) {
      if (excluded.contains(cp)) return true;
    }
    return false;
  });
  return tokens;
}

bool is_cjk(char32_t cp) {
  return (cp >= 0x3400 && cp <= 0x4DBF) ||    // Han extension A
         (cp >= 0x4E00 && cp <= 0x9FFF) ||    // Han
         (cp >= 0xF900 && cp <= 0xFAFF) ||    // Han compatibility
         (cp >= 0x20000 && cp <= 0x2A6DF) ||  // Han extension B
         (cp >= 0x3040 && cp <= 0x30FF) ||    // hiragana, katakana
         (cp >= 0x31F0 && cp <= 0x31FF) ||    // katakana extensions
         (cp >= 0xFF66 && cp <= 0xFF9D) ||    // halfwidth katakana
         cp == 0x3005;                        // iteration mark
}

std::vector<TokenRecord> apply_cjk_filter(std::vector<TokenRecord> tokens) {
  std::erase_if(tokens, [](const TokenRecord& rec) {
    for (char32_t cp : utf8::decode(rec.surface)) {
      if (!is_cjk(cp)) return true;
    }
    return false;
  });
  return tokens;
}

FrequencyLengthTable aggregate(const std::vector<TokenRecord>& tokens, LengthMode mode) {
  struct Group {
    std::uint64_t count = 0;
    std::vector<double> durations;
  };
  std::map<std::string, Group> groups;
  for (const TokenRecord& rec : tokens) {
    if (rec.surface.empty()) fail(Errc::bad_argument, "token with an empty surface");
    Group& g = groups[rec.surface];
    g.count += 1;
    if (mode != LengthMode::chars) {
      if (!rec.duration) {
        fail(Errc::missing_duration, "token '" + rec.surface + "' has no duration");
      }
      g.durations.push_back(*rec.duration);
    }
  }

  std::vector<TypeEntry> entries;
  entries.reserve(groups.size());
  for (auto& [form, g] : groups) {
    TypeEntry e;
    e.form = form;
    e.frequency = g.count;
    switch (mode) {
      case LengthMode::chars:
        e.length = static_cast<double>(utf8::count(form));
        break;
      case LengthMode::duration_median: {
        std::sort(g.durations.begin(), g.durations.end());
        std::size_t k = g.durations.size();
        e.length = k % 2 == 1 ? g.durations[k / 2]
                              : 0.5 * (g.durations[k / 2 - 1] + g.durations[k / 2]);
        break;
      }
      case LengthMode::duration_mean:
        e.length = compensated_total(g.durations) / static_cast<double>(g.durations.size());
        break;
    }
    entries.push_back(std::move(e));
  }
  std::stable_sort(entries.begin(), entries.end(), [](const TypeEntry& a, const TypeEntry& b) {
    if (a.frequency != b.frequency) return a.frequency > b.frequency;
    return a.form < b.form;
  });
  return FrequencyLengthTable(std::move(entries));
}

const std::u32string& default_vowels() {
  static const std::u32string vowels = [] {
    std::u32string v = U"aeiou";
    v += U"àáâãäåæ";        // a variants
    v += U"èéêë";                          // e variants
    v += U"ìíîï";                          // i variants
    v += U"òóôõöø";              // o variants
    v += U"ùúûü";                          // u variants
    v += U"āăą";                                // a with macron, breve, ogonek
    v += U"ēĕėęě";                    // e row
    v += U"ĩīĭįı";                    // i row
    v += U"ōŏőœ";                          // o row
    v += U"ũūŭůűų";              // u row
    std::sort(v.begin(), v.end());
    return v;
  }();
  return vowels;
}

std::u32string read_vowel_set(std::istream& in) {
  std::string all(std::istreambuf_iterator<char>(in), {});
  std::u32string set;
  for (char32_t cp : utf8::decode(all)) {
    if (cp == U' ' || cp == U'\t' || cp == U'\r' || cp == U'\n') continue;
    set.push_back(cp);
  }
  std::sort(set.begin(), set.end());
  set.erase(std::unique(set.begin(), set.end()), set.end());
  if (set.empty()) fail(Errc::bad_argument, "the vowel set is empty");
  return set;
}

FrequencyLengthTable drop_vowels(const FrequencyLengthTable& table,
                                 const std::u32string& vowels) {
  if (!table.has_forms()) fail(Errc::missing_forms, "vowel recoding needs the surface forms");
  std::unordered_set<char32_t> vowel_set(vowels.begin(), vowels.end());
  std::vector<TypeEntry> entries = table.entries();
  for (TypeEntry& e : entries) {
    std::uint64_t consonants = 0;
    for (char32_t cp : utf8::decode(e.form)) {
      if (!vowel_set.contains(cp)) ++consonants;
    }
    e.length = static_cast<double>(consonants);
  }
  return FrequencyLengthTable(std::move(entries));
}

FrequencyLengthTable drop_vowels(const FrequencyLengthTable& table) {
  return drop_vowels(table, default_vowels());
}

namespace {

// Scores of one subsample, computed from per-type counts and lengths.
// Mirrors score_report, but degeneracies become empty optionals directly
// so the sampling loops stay exception-free.
struct SampleScores {
  std::optional<double> eta, psi, omega;
};

SampleScores score_sample(std::vector<double> counts, std::vector<double> lengths,
                          double sample_size) {
  SampleScores out;
  const std::size_t n = counts.size();

  CompensatedSum weighted, plain;
  for (std::size_t i = 0; i < n; ++i) {
    weighted.add(counts[i] * lengths[i]);
    plain.add(lengths[i]);
  }
  double L = weighted.total() / sample_size;
  double L_r = plain.total() / static_cast<double>(n);

  std::vector<double> counts_desc = counts;
  std::vector<double> lengths_asc = lengths;
  std::stable_sort(counts_desc.begin(), counts_desc.end(), std::greater<double>());
  std::stable_sort(lengths_asc.begin(), lengths_asc.end());
  CompensatedSum min_sum;
  for (std::size_t i = 0; i < n; ++i) min_sum.add(counts_desc[i] * lengths_asc[i]);
  double L_min = min_sum.total() / sample_size;

  if (L > 0.0) out.eta = L_min / L;
  if (L_r > L_min) out.psi = (L_r - L) / (L_r - L_min);
  if (n >= 2) {
    PairCounts minimal = pair_counts(counts_desc, lengths_asc);
    if (minimal.discordant > 0) {
      double tau = kendall_tau(pair_counts(counts, lengths));
      out.omega = tau / kendall_tau(minimal);
    }
  }
  return out;
}

std::vector<std::uint64_t> powers_of_two_grid(std::uint64_t total) {
  std::vector<std::uint64_t> grid;
  for (std::uint64_t t = 2; t < total; t *= 2) grid.push_back(t);
  grid.push_back(total);  // the last point is always the full corpus
  return grid;
}

}  // namespace

ConvergenceCurve convergence_curve(const std::vector<TokenRecord>& tokens, LengthMode mode,
                                   std::uint64_t replicates, std::uint64_t seed,
                                   Execution ex) {
  if (tokens.empty()) fail(Errc::empty_table, "no tokens to sample");
  if (replicates == 0) fail(Errc::bad_argument, "at least one replicate is required");

  // Intern the types once; samples then only juggle integer ids.
  std::unordered_map<std::string, std::uint32_t> ids;
  std::vector<std::uint32_t> token_type;
  std::vector<double> token_duration;
  std::vector<double> type_chars;
  token_type.reserve(tokens.size());
  const bool durations = mode != LengthMode::chars;
  for (const TokenRecord& rec : tokens) {
    if (rec.surface.empty()) fail(Errc::bad_argument, "token with an empty surface");
    auto [it, fresh] = ids.emplace(rec.surface, static_cast<std::uint32_t>(ids.size()));
    if (fresh) type_chars.push_back(static_cast<double>(utf8::count(rec.surface)));
    token_type.push_back(it->second);
    if (durations) {
      if (!rec.duration) {
        fail(Errc::missing_duration, "token '" + rec.surface + "' has no duration");
      }
      token_duration.push_back(*rec.duration);
    }
  }

  const std::uint64_t total = tokens.size();
  std::vector<std::uint64_t> grid = powers_of_two_grid(total);

  ConvergenceCurve curve;
  curve.replicates = replicates;
  curve.seed = seed;

  std::vector<std::uint64_t> indices_all(total);
  std::iota(indices_all.begin(), indices_all.end(), 0);

  for (std::size_t ti = 0; ti < grid.size(); ++ti) {
    const std::uint64_t t = grid[ti];
    const std::int64_t R = static_cast<std::int64_t>(replicates);
    std::vector<SampleScores> results(replicates);

    auto run_replicate = [&](std::int64_t r) {
      Rng rng = replicate_stream(seed, ti * replicates + static_cast<std::uint64_t>(r));

      // Floyd's sampling: t distinct token indices, uniform over subsets.
      std::unordered_set<std::uint64_t> picked;
      const std::uint64_t* sample = nullptr;
      std::vector<std::uint64_t> sampled;
      if (t == total) {
        sample = indices_all.data();
      } else {
        picked.reserve(static_cast<std::size_t>(t) * 2);
        for (std::uint64_t j = total - t; j < total; ++j) {
          std::uint64_t x = rng.below(j + 1);
          if (!picked.insert(x).second) picked.insert(j);
        }
        sampled.assign(picked.begin(), picked.end());
        sample = sampled.data();
      }

      // Per-type tallies for this sample.
      std::unordered_map<std::uint32_t, std::uint64_t> counts;
      std::unordered_map<std::uint32_t, std::vector<double>> per_type_durations;
      for (std::uint64_t k = 0; k < t; ++k) {
        std::uint64_t idx = sample[k];
        std::uint32_t id = token_type[idx];
        counts[id] += 1;
        if (durations) per_type_durations[id].push_back(token_duration[idx]);
      }

      std::vector<std::uint32_t> present;
      present.reserve(counts.size());
      for (auto [id, c] : counts) present.push_back(id);
      std::sort(present.begin(), present.end());

      std::vector<double> c_vec, l_vec;
      c_vec.reserve(present.size());
      l_vec.reserve(present.size());
      for (std::uint32_t id : present) {
        c_vec.push_back(static_cast<double>(counts[id]));
        if (!durations) {
          l_vec.push_back(type_chars[id]);
        } else {
          std::vector<double>& d = per_type_durations[id];
          std::sort(d.begin(), d.end());
          if (mode == LengthMode::duration_median) {
            std::size_t k = d.size();
            l_vec.push_back(k % 2 == 1 ? d[k / 2] : 0.5 * (d[k / 2 - 1] + d[k / 2]));
          } else {
            l_vec.push_back(compensated_total(d) / static_cast<double>(d.size()));
          }
        }
      }
      results[r] = score_sample(std::move(c_vec), std::move(l_vec), static_cast<double>(t));
    };

    if (ex == Execution::parallel) {
#pragma omp parallel for schedule(static)
      for (std::int64_t r = 0; r < R; ++r) run_replicate(r);
    } else {
      for (std::int64_t r = 0; r < R; ++r) run_replicate(r);
    }

    ConvergencePoint point;
    point.sample_tokens = t;
    std::vector<double> values;
    values.reserve(replicates);
    auto collect = [&](auto field) {
      values.clear();
      for (const SampleScores& s : results) {
        if (s.*field) values.push_back(*(s.*field));
      }
      return summarize_values(values);
    };
    point.eta = collect(&SampleScores::eta);
    point.psi = collect(&SampleScores::psi);
    point.omega = collect(&SampleScores::omega);
    curve.points.push_back(point);
  }
  return curve;
}

}  // namespace wlopt
