#include <cmath>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "oracles.hpp"
#include "wlopt/error.hpp"
#include "wlopt/ingest.hpp"
#include "wlopt/scores.hpp"
#include "wlopt/utf8.hpp"

using namespace wlopt;

namespace {

std::vector<TokenRecord> tokens_from(const std::string& text) {
  std::istringstream in(text);
  return read_token_list(in);
}

std::vector<TokenRecord> plain_tokens(std::initializer_list<const char*> words) {
  std::vector<TokenRecord> out;
  for (const char* w : words) out.push_back({w, std::nullopt, TokenRecord::Tag::none});
  return out;
}

}  // namespace

TEST_CASE("token list reader") {
  std::vector<TokenRecord> tokens = tokens_from("the\ncat\n\n<unk>\nsat\n");
  REQUIRE(tokens.size() == 4);
  CHECK(tokens[0].surface == "the");
  CHECK(tokens[1].surface == "cat");
  CHECK(tokens[2].tag == TokenRecord::Tag::unknown);
  CHECK(tokens[2].surface == "<unk>");
  CHECK(tokens[3].surface == "sat");
  CHECK(!tokens[0].duration.has_value());

  SUBCASE("carriage returns are stripped") {
    std::vector<TokenRecord> crlf = tokens_from("one\r\ntwo\r\n");
    REQUIRE(crlf.size() == 2);
    CHECK(crlf[0].surface == "one");
    CHECK(crlf[1].surface == "two");
  }

  SUBCASE("invalid byte sequences are rejected with the offending line") {
    std::istringstream in("good\n\xC3" "(bad\n");
    try {
      read_token_list(in);
      FAIL("expected a decoding error");
    } catch (const Error& e) {
      CHECK(e.code() == Errc::non_utf8);
      CHECK(std::string(e.what()).find("line 2") != std::string::npos);
    }
  }
}

TEST_CASE("aligned duration reader") {
  std::istringstream in(
      "token\tduration_seconds\n"
      "the\t0.12\n"
      "cat\t0.31\n"
      "the\t0.18\n");
  std::vector<TokenRecord> tokens = read_aligned_durations(in);
  REQUIRE(tokens.size() == 3);
  CHECK(tokens[0].surface == "the");
  CHECK(tokens[0].duration == 0.12);
  CHECK(tokens[2].duration == 0.18);

  SUBCASE("the header is mandatory") {
    std::istringstream bad("the\t0.12\n");
    CHECK_THROWS_AS(read_aligned_durations(bad), Error);
  }

  SUBCASE("negative durations carry their line number") {
    std::istringstream bad(
        "token\tduration_seconds\n"
        "the\t0.12\n"
        "cat\t-0.50\n");
    try {
      read_aligned_durations(bad);
      FAIL("expected a validation error");
    } catch (const Error& e) {
      CHECK(e.code() == Errc::negative_duration);
      CHECK(std::string(e.what()).find("line 3") != std::string::npos);
    }
  }

  SUBCASE("missing or junk fields are malformed rows") {
    std::istringstream missing("token\tduration_seconds\nthe\n");
    CHECK_THROWS_AS(read_aligned_durations(missing), Error);
    std::istringstream junk("token\tduration_seconds\nthe\tfast\n");
    try {
      read_aligned_durations(junk);
      FAIL("expected a parse error");
    } catch (const Error& e) {
      CHECK(e.code() == Errc::malformed_row);
      CHECK(std::string(e.what()).find("line 2") != std::string::npos);
    }
  }
}

TEST_CASE("frequency-length table reader") {
  std::istringstream in(
      "type\tfrequency\tlength\n"
      "the\t100\t2\n"
      "-\t20\t1\n"
      "-\t5\t3.5\n");
  FrequencyLengthTable t = read_fl_table(in);
  REQUIRE(t.size() == 3);
  CHECK(t.entry(0).form == "the");
  CHECK(t.entry(0).frequency == 100);
  CHECK(t.entry(1).form.empty());
  CHECK(t.entry(2).length == 3.5);
  CHECK(t.total_tokens() == 125);

  SUBCASE("header and field count are enforced") {
    std::istringstream headerless("the\t100\t2\n");
    CHECK_THROWS_AS(read_fl_table(headerless), Error);
    std::istringstream short_row("type\tfrequency\tlength\nthe\t100\n");
    CHECK_THROWS_AS(read_fl_table(short_row), Error);
  }

  SUBCASE("numbers are parsed strictly") {
    std::istringstream bad_freq("type\tfrequency\tlength\nthe\t1e2\t2\n");
    CHECK_THROWS_AS(read_fl_table(bad_freq), Error);
    std::istringstream trailing("type\tfrequency\tlength\nthe\t100x\t2\n");
    try {
      read_fl_table(trailing);
      FAIL("expected a parse error");
    } catch (const Error& e) {
      CHECK(e.code() == Errc::malformed_row);
      CHECK(std::string(e.what()).find("line 2") != std::string::npos);
    }
  }
}

TEST_CASE("mandatory filter") {
  std::vector<TokenRecord> raw = plain_tokens({"The", "cat", "４cats", "x2", "=ÀLA=", "＝"});
  raw.push_back({".", std::nullopt, TokenRecord::Tag::punct});
  raw.push_back({"<unk>", std::nullopt, TokenRecord::Tag::unknown});

  FilterOptions options;
  options.strip_chars = U"=＝";
  std::vector<TokenRecord> kept = mandatory_filter(raw, options);

  // "４cats" holds a fullwidth digit and survives; ASCII digits knock out "x2";
  // "＝" strips to nothing and is dropped with the tagged tokens.
  REQUIRE(kept.size() == 4);
  CHECK(kept[0].surface == "the");
  CHECK(kept[1].surface == "cat");
  CHECK(kept[2].surface == "４cats");
  CHECK(kept[3].surface == "àla");

  SUBCASE("filtering twice changes nothing") {
    std::vector<TokenRecord> again = mandatory_filter(kept, options);
    REQUIRE(again.size() == kept.size());
    for (std::size_t i = 0; i < kept.size(); ++i) CHECK(again[i].surface == kept[i].surface);
  }

  SUBCASE("default strip set removes the equals sign") {
    std::vector<TokenRecord> defaults = mandatory_filter(plain_tokens({"a=b"}));
    REQUIRE(defaults.size() == 1);
    CHECK(defaults[0].surface == "ab");
  }

  SUBCASE("durations ride along") {
    std::vector<TokenRecord> timed = {{"Word", 0.5, TokenRecord::Tag::none}};
    std::vector<TokenRecord> out = mandatory_filter(timed);
    REQUIRE(out.size() == 1);
    CHECK(out[0].surface == "word");
    CHECK(out[0].duration == 0.5);
  }
}

TEST_CASE("working alphabet split") {
  SUBCASE("planted bimodal counts separate exactly") {
    // 'a','b','c' appear ~1000 times, 'x','y' once or twice
    std::vector<TokenRecord> tokens;
    for (int i = 0; i < 500; ++i) tokens.push_back({"abc", std::nullopt, TokenRecord::Tag::none});
    for (int i = 0; i < 250; ++i) tokens.push_back({"cab", std::nullopt, TokenRecord::Tag::none});
    tokens.push_back({"axy", std::nullopt, TokenRecord::Tag::none});
    tokens.push_back({"ayx", std::nullopt, TokenRecord::Tag::none});

    WorkingAlphabet alphabet = working_alphabet(tokens);
    std::set<char32_t> kept, excluded;
    for (const CharStat& s : alphabet.kept) kept.insert(s.ch);
    for (const CharStat& s : alphabet.excluded) excluded.insert(s.ch);
    CHECK(kept == std::set<char32_t>{U'a', U'b', U'c'});
    CHECK(excluded == std::set<char32_t>{U'x', U'y'});
    REQUIRE(alphabet.threshold.has_value());

    // counts: a 752, b 750, c 750, x 2, y 2
    for (const CharStat& s : alphabet.kept) CHECK(s.log_count > *alphabet.threshold);
    for (const CharStat& s : alphabet.excluded) CHECK(s.log_count < *alphabet.threshold);

    std::vector<TokenRecord> filtered = apply_alphabet_filter(tokens, alphabet);
    CHECK(filtered.size() == 750);
  }

  SUBCASE("kept characters are ordered by count, then code point") {
    std::vector<TokenRecord> tokens = plain_tokens({"aab", "ab", "b", "zz"});
    // counts: a 3, b 3, z 2
    WorkingAlphabet alphabet = working_alphabet(tokens);
    std::vector<CharStat> all = alphabet.kept;
    all.insert(all.end(), alphabet.excluded.begin(), alphabet.excluded.end());
    REQUIRE(all.size() == 3);
    CHECK(all[0].ch == U'a');
    CHECK(all[1].ch == U'b');
    CHECK(all[2].ch == U'z');
    CHECK(all[0].count == 3);
    CHECK(all[2].count == 2);
  }

  SUBCASE("uniform counts keep everything") {
    std::vector<TokenRecord> tokens = plain_tokens({"ab", "ba"});
    WorkingAlphabet alphabet = working_alphabet(tokens);
    CHECK(alphabet.excluded.empty());
    CHECK(alphabet.kept.size() == 2);
    CHECK(!alphabet.threshold.has_value());
    CHECK(!alphabet.sse.has_value());
  }

  SUBCASE("split minimizes the within-cluster sum of squares") {
    Rng rng(515);
    for (int trial = 0; trial < 200; ++trial) {
      // counts drawn from two overlapping scales, with deliberate repeats
      std::size_t n_chars = 2 + rng.below(12);
      std::vector<TokenRecord> tokens;
      std::vector<double> logs;
      bool uniform = true;
      std::vector<std::uint64_t> counts(n_chars);
      for (std::size_t c = 0; c < n_chars; ++c) {
        std::uint64_t count = 1 + rng.below(rng.below(2) ? 6 : 400);
        counts[c] = count;
        if (count != counts[0]) uniform = false;
        logs.push_back(std::log(static_cast<double>(count)));
        std::string ch = utf8::encode(std::u32string(1, static_cast<char32_t>(U'a' + c)));
        for (std::uint64_t k = 0; k < count; ++k)
          tokens.push_back({ch, std::nullopt, TokenRecord::Tag::none});
      }
      WorkingAlphabet alphabet = working_alphabet(tokens);
      if (uniform) {
        CHECK(!alphabet.sse.has_value());
        continue;
      }
      REQUIRE(alphabet.sse.has_value());
      testutil::SplitResult truth = testutil::best_split(logs);
      CHECK(*alphabet.sse == doctest::Approx(truth.sse).epsilon(1e-9));
      CHECK(alphabet.excluded.size() == truth.boundary);
    }
  }

  SUBCASE("table variant weights characters by type frequency") {
    FrequencyLengthTable t({{"aa", 400, 2.0}, {"ab", 100, 2.0}, {"q", 1, 1.0}});
    WorkingAlphabet alphabet = working_alphabet(t);
    // counts: a 900, b 100, q 1
    REQUIRE(alphabet.kept.size() >= 1);
    CHECK(alphabet.kept.front().ch == U'a');
    CHECK(alphabet.kept.front().count == 900);
    std::set<char32_t> excluded;
    for (const CharStat& s : alphabet.excluded) excluded.insert(s.ch);
    CHECK(excluded.count(U'q') == 1);

    FrequencyLengthTable anonymous({{"", 4, 2.0}, {"", 1, 1.0}});
    CHECK_THROWS_AS(working_alphabet(anonymous), Error);
  }
}

TEST_CASE("CJK working set") {
  CHECK(is_cjk(U'中'));
  CHECK(is_cjk(U'の'));
  CHECK(is_cjk(U'カ'));
  CHECK(is_cjk(U'々'));
  CHECK(!is_cjk(U'a'));
  CHECK(!is_cjk(U'à'));

  std::vector<TokenRecord> tokens = plain_tokens({"中国", "日本語", "中abc", "ｶﾀ"});
  std::vector<TokenRecord> kept = apply_cjk_filter(tokens);
  REQUIRE(kept.size() == 3);
  CHECK(kept[0].surface == "中国");
  CHECK(kept[1].surface == "日本語");
  CHECK(kept[2].surface == "ｶﾀ");
}

TEST_CASE("aggregation into a frequency-length table") {
  SUBCASE("code point lengths, not byte lengths") {
    std::vector<TokenRecord> tokens = plain_tokens({"naïve", "the", "naïve", "à"});
    FrequencyLengthTable t = aggregate(tokens, LengthMode::chars);
    REQUIRE(t.size() == 3);
    // rows come out frequency-descending, ties broken by form
    CHECK(t.entry(0).form == "naïve");
    CHECK(t.entry(0).frequency == 2);
    CHECK(t.entry(0).length == 5.0);
    CHECK(t.entry(1).form == "the");
    CHECK(t.entry(2).form == "à");
    CHECK(t.entry(2).length == 1.0);
    CHECK(t.total_tokens() == 4);
  }

  SUBCASE("median duration averages the middle pair on even counts") {
    std::vector<TokenRecord> tokens = {
        {"the", 0.10, TokenRecord::Tag::none},
        {"the", 0.40, TokenRecord::Tag::none},
        {"the", 0.20, TokenRecord::Tag::none},
        {"the", 0.80, TokenRecord::Tag::none},
        {"cat", 0.50, TokenRecord::Tag::none},
    };
    FrequencyLengthTable median = aggregate(tokens, LengthMode::duration_median);
    CHECK(median.entry(0).form == "the");
    CHECK(median.entry(0).length == doctest::Approx(0.30).epsilon(1e-15));
    CHECK(median.entry(1).length == 0.50);

    FrequencyLengthTable mean = aggregate(tokens, LengthMode::duration_mean);
    CHECK(mean.entry(0).length == doctest::Approx(1.50 / 4.0).epsilon(1e-15));
  }

  SUBCASE("durations are required when a duration mode is chosen") {
    std::vector<TokenRecord> tokens = plain_tokens({"the"});
    CHECK_THROWS_AS(aggregate(tokens, LengthMode::duration_median), Error);
    CHECK_THROWS_AS(aggregate({}, LengthMode::chars), Error);
  }
}

TEST_CASE("vowel removal recoding") {
  FrequencyLengthTable t({{"casa", 10, 4.0}, {"sol", 5, 3.0}, {"aia", 2, 3.0}});
  FrequencyLengthTable recoded = drop_vowels(t);
  REQUIRE(recoded.size() == 3);
  CHECK(recoded.entry(0).form == "casa");
  CHECK(recoded.entry(0).frequency == 10);
  CHECK(recoded.entry(0).length == 2.0);
  CHECK(recoded.entry(1).length == 2.0);
  // an all-vowel form keeps its row at length zero
  CHECK(recoded.entry(2).length == 0.0);
  CHECK(recoded.total_tokens() == t.total_tokens());

  SUBCASE("accented vowels are in the default set") {
    FrequencyLengthTable accented({{"às", 3, 2.0}, {"œuf", 1, 3.0}});
    FrequencyLengthTable out = drop_vowels(accented);
    CHECK(out.entry(0).length == 1.0);
    CHECK(out.entry(1).length == 1.0);
  }

  SUBCASE("recoding twice changes nothing") {
    FrequencyLengthTable twice = drop_vowels(recoded);
    for (std::size_t i = 0; i < twice.size(); ++i) {
      CHECK(twice.entry(i).length == recoded.entry(i).length);
    }
  }

  SUBCASE("custom vowel sets come from a stream") {
    std::istringstream in("a e\ni\n");
    std::u32string vowels = read_vowel_set(in);
    CHECK(vowels == U"aei");
    FrequencyLengthTable out = drop_vowels(t, vowels);
    CHECK(out.entry(0).length == 2.0);

    std::istringstream blank("  \n");
    CHECK_THROWS_AS(read_vowel_set(blank), Error);
  }

  SUBCASE("anonymous rows cannot be recoded") {
    FrequencyLengthTable anonymous({{"", 4, 2.0}, {"", 1, 1.0}});
    CHECK_THROWS_AS(drop_vowels(anonymous), Error);
  }
}

TEST_CASE("convergence curve under subsampling") {
  // 16 occurrences over 5 types with distinct frequencies and lengths
  std::vector<TokenRecord> tokens;
  auto add = [&](const char* w, int reps) {
    for (int i = 0; i < reps; ++i) tokens.push_back({w, std::nullopt, TokenRecord::Tag::none});
  };
  add("a", 6);
  add("bb", 4);
  add("ccc", 3);
  add("dddd", 2);
  add("eeeee", 1);

  ConvergenceCurve curve = convergence_curve(tokens, LengthMode::chars, 50, 21);
  REQUIRE(!curve.points.empty());
  CHECK(curve.replicates == 50);
  CHECK(curve.seed == 21);

  SUBCASE("grid runs over powers of two and ends at the corpus size") {
    std::vector<std::uint64_t> ts;
    for (const ConvergencePoint& p : curve.points) ts.push_back(p.sample_tokens);
    CHECK(ts == std::vector<std::uint64_t>{2, 4, 8, 16});
  }

  SUBCASE("the full-corpus point reproduces the direct score") {
    ScoreReport direct = score_report(aggregate(tokens, LengthMode::chars));
    const ConvergencePoint& full = curve.points.back();
    CHECK(full.sample_tokens == 16);
    CHECK(full.eta.valid == 50);
    REQUIRE(full.eta.mean.has_value());
    // every replicate scores the whole corpus; averaging identical values
    // can still move the last bit
    CHECK(*full.eta.mean == doctest::Approx(*direct.eta).epsilon(1e-15));
    CHECK(*full.psi.mean == doctest::Approx(*direct.psi).epsilon(1e-15));
    CHECK(*full.omega.mean == doctest::Approx(*direct.omega).epsilon(1e-15));
    REQUIRE(full.eta.sd.has_value());
    CHECK(*full.eta.sd <= 1e-15);
  }

  SUBCASE("tiny samples drop replicates whose scores are undefined") {
    const ConvergencePoint& smallest = curve.points.front();
    CHECK(smallest.sample_tokens == 2);
    // two tokens give either one type (n = 1) or two types with equal
    // frequency, so psi has a zero denominator in every replicate
    CHECK(smallest.psi.valid == 0);
    CHECK(smallest.omega.valid == 0);
    CHECK(smallest.eta.valid == 50);
    REQUIRE(curve.points.size() >= 2);
    CHECK(curve.points[1].psi.valid > 0);
    CHECK(curve.points[1].psi.valid < 50);
  }

  SUBCASE("parallel and serial sampling agree bit for bit") {
    ConvergenceCurve serial = convergence_curve(tokens, LengthMode::chars, 50, 21,
                                                Execution::serial);
    REQUIRE(serial.points.size() == curve.points.size());
    for (std::size_t i = 0; i < curve.points.size(); ++i) {
      CHECK(serial.points[i].eta.mean == curve.points[i].eta.mean);
      CHECK(serial.points[i].psi.mean == curve.points[i].psi.mean);
      CHECK(serial.points[i].omega.mean == curve.points[i].omega.mean);
      CHECK(serial.points[i].psi.valid == curve.points[i].psi.valid);
    }
  }

  SUBCASE("duration mode requires aligned input") {
    CHECK_THROWS_AS(convergence_curve(tokens, LengthMode::duration_mean, 5, 1), Error);
  }
}
