// Command-line front end: ingestion, filtering, scoring, law batteries,
// null models, convergence curves, recodings and alphabet reports over
// frequency-length data.

#include <algorithm>
#include <charconv>
#include <cstdint>
#include <cstdio>
#include <exception>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "wlopt/analysis.hpp"
#include "wlopt/error.hpp"
#include "wlopt/ingest.hpp"
#include "wlopt/nullmodel.hpp"
#include "wlopt/scores.hpp"
#include "wlopt/table.hpp"
#include "wlopt/utf8.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace wlopt;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInput = 2;
constexpr int kExitDegenerate = 3;

struct Config {
  std::string input;
  std::string format = "fl";
  std::string filter;  // empty means the format default
  std::string length = "chars";
  std::string method = "kendall";
  std::string op;
  std::string vowels_path;
  std::uint64_t seed = 0;
  bool seed_given = false;
  std::uint64_t randomizations = 10000;
  std::uint64_t reps = 100;
  bool json_out = false;
  bool with_rho = false;
  bool with_gamma = false;
  bool cjk = false;
};

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.9g", v);
  return buf;
}

std::string fmt(const std::optional<double>& v) { return v ? fmt(*v) : "NA"; }

void emit(const std::string& text) { std::fwrite(text.data(), 1, text.size(), stdout); }

void emit_json(const json& j) {
  std::string out = j.dump(2);
  out.push_back('\n');
  emit(out);
}

std::string effective_filter(const Config& cfg) {
  if (!cfg.filter.empty()) return cfg.filter;
  return cfg.format == "fl" ? "none" : "mandatory";
}

LengthMode length_mode(const Config& cfg) {
  if (cfg.length == "chars") return LengthMode::chars;
  if (cfg.length == "duration-median") return LengthMode::duration_median;
  return LengthMode::duration_mean;
}

void check_flag_consistency(const Config& cfg) {
  if (cfg.format == "fl" && effective_filter(cfg) != "none") {
    fail(Errc::bad_argument, "token filters do not apply to fl input; use --filter none");
  }
  if (cfg.cjk && effective_filter(cfg) != "full") {
    fail(Errc::bad_argument, "--cjk-mode selects the full-filter working set; pass --filter full");
  }
  if (cfg.length != "chars" && cfg.format != "aligned") {
    fail(Errc::bad_argument, "duration lengths need --format aligned");
  }
}

std::ifstream open_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(Errc::io_error, "cannot open '" + path + "'");
  return in;
}

std::vector<TokenRecord> load_tokens(const std::string& path, const Config& cfg) {
  std::ifstream in = open_file(path);
  std::vector<TokenRecord> tokens =
      cfg.format == "aligned" ? read_aligned_durations(in) : read_token_list(in);
  std::string filter = effective_filter(cfg);
  if (filter == "none") return tokens;
  tokens = mandatory_filter(std::move(tokens));
  if (filter == "full") {
    if (cfg.cjk) {
      tokens = apply_cjk_filter(std::move(tokens));
    } else {
      WorkingAlphabet alphabet = working_alphabet(tokens);
      tokens = apply_alphabet_filter(std::move(tokens), alphabet);
    }
  }
  return tokens;
}

FrequencyLengthTable load_table(const std::string& path, const Config& cfg) {
  if (cfg.format == "fl") {
    std::ifstream in = open_file(path);
    return read_fl_table(in);
  }
  return aggregate(load_tokens(path, cfg), length_mode(cfg));
}

std::string label_of(const std::string& path) { return fs::path(path).stem().string(); }

std::vector<std::string> input_files(const std::string& input) {
  if (!fs::exists(input)) fail(Errc::io_error, "no such path '" + input + "'");
  if (!fs::is_directory(input)) return {input};
  std::vector<std::string> files;
  for (const auto& entry : fs::directory_iterator(input)) {
    if (entry.is_regular_file()) files.push_back(entry.path().string());
  }
  std::sort(files.begin(), files.end(), [](const std::string& a, const std::string& b) {
    return fs::path(a).filename().string() < fs::path(b).filename().string();
  });
  if (files.empty()) fail(Errc::io_error, "no input files in '" + input + "'");
  return files;
}

std::string single_file(const Config& cfg) {
  if (fs::is_directory(cfg.input)) {
    fail(Errc::bad_argument, "this command takes one file, not a directory");
  }
  return input_files(cfg.input).front();
}

// Loads every file, in parallel on multi-file inputs; the first failure in
// name order is reported.
std::vector<LabeledTable> load_all(const std::vector<std::string>& files, const Config& cfg) {
  std::vector<std::optional<FrequencyLengthTable>> tables(files.size());
  std::vector<std::exception_ptr> errors(files.size());
#pragma omp parallel for schedule(dynamic)
  for (std::size_t i = 0; i < files.size(); ++i) {
    try {
      tables[i] = load_table(files[i], cfg);
    } catch (...) {
      errors[i] = std::current_exception();
    }
  }
  for (std::size_t i = 0; i < files.size(); ++i) {
    if (errors[i]) std::rethrow_exception(errors[i]);
  }
  std::vector<LabeledTable> out;
  out.reserve(files.size());
  for (std::size_t i = 0; i < files.size(); ++i) {
    out.push_back({label_of(files[i]), std::move(*tables[i])});
  }
  return out;
}

std::uint64_t resolve_seed(Config& cfg) {
  if (!cfg.seed_given) {
    std::random_device entropy;
    cfg.seed = (static_cast<std::uint64_t>(entropy()) << 32) ^ entropy();
  }
  return cfg.seed;
}

// ---- score ----------------------------------------------------------------

json score_to_json(const std::string& label, const ScoreReport& r, const ScoreOptions& opts) {
  json j;
  j["label"] = label;
  j["n"] = r.n;
  j["tokens"] = r.tokens;
  j["L_min"] = r.L_min;
  j["L"] = r.L;
  j["L_r"] = r.L_r;
  auto put = [&](const char* key, const std::optional<double>& v) {
    if (v) j[key] = *v;
  };
  put("tau", r.tau);
  put("tau_min", r.tau_min);
  put("eta", r.eta);
  put("psi", r.psi);
  put("omega", r.omega);
  if (opts.with_rho) {
    put("rho", r.rho);
    put("rho_min", r.rho_min);
    put("omega_rho", r.omega_rho);
    put("pearson", r.pearson);
  }
  if (opts.with_gamma) put("gamma", r.gamma);
  j["absent"] = json::object();
  for (const auto& [field, reason] : r.absent) j["absent"][field] = reason;
  return j;
}

bool fully_degenerate(const ScoreReport& r) {
  return !r.eta.has_value() && !r.psi.has_value() && !r.omega.has_value();
}

int cmd_score(Config& cfg) {
  check_flag_consistency(cfg);
  FrequencyLengthTable table = load_table(single_file(cfg), cfg);
  ScoreOptions opts;
  opts.with_rho = cfg.with_rho;
  opts.with_pearson = cfg.with_rho;
  opts.with_gamma = cfg.with_gamma;
  ScoreReport report = score_report(table, opts);
  std::string label = label_of(cfg.input);

  if (cfg.json_out) {
    json j = score_to_json(label, report, opts);
    j["command"] = "score";
    emit_json(j);
  } else {
    std::string head = "label\tn\ttokens\tL_min\tL\tL_r\ttau\ttau_min\teta\tpsi\tomega";
    std::string row = label + '\t' + std::to_string(report.n) + '\t' +
                      std::to_string(report.tokens) + '\t' + fmt(report.L_min) + '\t' +
                      fmt(report.L) + '\t' + fmt(report.L_r) + '\t' + fmt(report.tau) +
                      '\t' + fmt(report.tau_min) + '\t' + fmt(report.eta) + '\t' +
                      fmt(report.psi) + '\t' + fmt(report.omega);
    if (cfg.with_rho) {
      head += "\trho\trho_min\tomega_rho\tpearson";
      row += '\t' + fmt(report.rho) + '\t' + fmt(report.rho_min) + '\t' +
             fmt(report.omega_rho) + '\t' + fmt(report.pearson);
    }
    if (cfg.with_gamma) {
      head += "\tgamma";
      row += '\t' + fmt(report.gamma);
    }
    emit(head + '\n' + row + '\n');
  }
  return fully_degenerate(report) ? kExitDegenerate : kExitOk;
}

// ---- law ------------------------------------------------------------------

Method method_of(const Config& cfg) {
  return cfg.method == "pearson" ? Method::pearson : Method::kendall;
}

int cmd_law(Config& cfg) {
  check_flag_consistency(cfg);
  std::vector<LabeledTable> systems = load_all(input_files(cfg.input), cfg);
  LawBattery battery = law_battery(systems, method_of(cfg));

  if (cfg.json_out) {
    json rows = json::array();
    for (const BatteryRow& row : battery.rows) {
      json r;
      r["label"] = row.label;
      r["n"] = row.n;
      if (row.coefficient) r["coefficient"] = *row.coefficient;
      if (row.statistic) r["statistic"] = *row.statistic;
      if (row.p_raw) r["p_raw"] = *row.p_raw;
      if (row.p_adjusted) r["p_adjusted"] = *row.p_adjusted;
      r["mark"] = row.mark;
      r["exact"] = row.exact;
      if (!row.note.empty()) r["note"] = row.note;
      rows.push_back(std::move(r));
    }
    json j;
    j["command"] = "law";
    j["method"] = cfg.method;
    j["rows"] = std::move(rows);
    emit_json(j);
  } else {
    std::string out = "label\tn\tcoefficient\tstatistic\tp_raw\tp_adjusted\tmark\texact\tnote\n";
    for (const BatteryRow& row : battery.rows) {
      out += row.label + '\t' + std::to_string(row.n) + '\t' + fmt(row.coefficient) + '\t' +
             fmt(row.statistic) + '\t' + fmt(row.p_raw) + '\t' + fmt(row.p_adjusted) + '\t' +
             row.mark + '\t' + (row.exact ? "1" : "0") + '\t' + row.note + '\n';
    }
    emit(out);
  }

  bool any_tested = false;
  for (const BatteryRow& row : battery.rows) any_tested |= row.p_raw.has_value();
  return any_tested ? kExitOk : kExitDegenerate;
}

// ---- null -----------------------------------------------------------------

int cmd_null(Config& cfg) {
  check_flag_consistency(cfg);
  FrequencyLengthTable table = load_table(single_file(cfg), cfg);
  std::uint64_t seed = resolve_seed(cfg);
  NullEstimate estimate = monte_carlo_null(table, cfg.randomizations, seed);
  LengthPermutationTest perm = length_permutation_test(table, cfg.randomizations, seed);
  double eta_bound = minimum_baseline(table).value / random_baseline(table);

  if (cfg.json_out) {
    auto stat = [](const ScoreStat& s) {
      json j;
      if (s.mean) j["mean"] = *s.mean;
      if (s.sd) j["sd"] = *s.sd;
      j["valid"] = s.valid;
      return j;
    };
    json j;
    j["command"] = "null";
    j["seed"] = estimate.seed;
    j["replicates"] = estimate.replicates;
    j["estimates"]["eta"] = stat(estimate.eta);
    j["estimates"]["eta"]["lower_bound"] = eta_bound;
    j["estimates"]["psi"] = stat(estimate.psi);
    j["estimates"]["omega"] = stat(estimate.omega);
    j["p_left_L"]["p_value"] = perm.p_value;
    j["p_left_L"]["hits"] = perm.hits;
    emit_json(j);
  } else {
    auto stat_row = [&](const char* name, const ScoreStat& s, const std::string& bound) {
      return std::string(name) + '\t' + fmt(s.mean) + '\t' + fmt(s.sd) + '\t' +
             std::to_string(s.valid) + '\t' + std::to_string(estimate.replicates) + '\t' +
             std::to_string(estimate.seed) + '\t' + bound + '\n';
    };
    std::string out = "quantity\tvalue\tsd\tvalid\treplicates\tseed\tbound\n";
    out += stat_row("eta", estimate.eta, fmt(eta_bound));
    out += stat_row("psi", estimate.psi, "NA");
    out += stat_row("omega", estimate.omega, "NA");
    out += std::string("p_left_L") + '\t' + fmt(perm.p_value) + "\tNA\t" +
           std::to_string(perm.replicates) + '\t' + std::to_string(perm.replicates) + '\t' +
           std::to_string(perm.seed) + "\tNA\n";
    emit(out);
  }

  bool degenerate =
      estimate.eta.valid == 0 && estimate.psi.valid == 0 && estimate.omega.valid == 0;
  return degenerate ? kExitDegenerate : kExitOk;
}

// ---- converge ---------------------------------------------------------------

int cmd_converge(Config& cfg) {
  check_flag_consistency(cfg);
  if (cfg.format == "fl") {
    fail(Errc::bad_argument, "subsampling needs token input; use --format tokens or aligned");
  }
  std::vector<TokenRecord> tokens = load_tokens(single_file(cfg), cfg);
  std::uint64_t seed = resolve_seed(cfg);
  ConvergenceCurve curve = convergence_curve(tokens, length_mode(cfg), cfg.reps, seed);

  if (cfg.json_out) {
    auto stat = [](const ScoreStat& s) {
      json j;
      if (s.mean) j["mean"] = *s.mean;
      if (s.sd) j["sd"] = *s.sd;
      j["valid"] = s.valid;
      return j;
    };
    json points = json::array();
    for (const ConvergencePoint& p : curve.points) {
      json jp;
      jp["t"] = p.sample_tokens;
      jp["eta"] = stat(p.eta);
      jp["psi"] = stat(p.psi);
      jp["omega"] = stat(p.omega);
      points.push_back(std::move(jp));
    }
    json j;
    j["command"] = "converge";
    j["seed"] = curve.seed;
    j["replicates"] = curve.replicates;
    j["points"] = std::move(points);
    emit_json(j);
  } else {
    std::string out =
        "t\teta_mean\teta_sd\teta_valid\tpsi_mean\tpsi_sd\tpsi_valid"
        "\tomega_mean\tomega_sd\tomega_valid\treplicates\tseed\n";
    for (const ConvergencePoint& p : curve.points) {
      out += std::to_string(p.sample_tokens) + '\t' + fmt(p.eta.mean) + '\t' +
             fmt(p.eta.sd) + '\t' + std::to_string(p.eta.valid) + '\t' + fmt(p.psi.mean) +
             '\t' + fmt(p.psi.sd) + '\t' + std::to_string(p.psi.valid) + '\t' +
             fmt(p.omega.mean) + '\t' + fmt(p.omega.sd) + '\t' +
             std::to_string(p.omega.valid) + '\t' + std::to_string(curve.replicates) + '\t' +
             std::to_string(curve.seed) + '\n';
    }
    emit(out);
  }

  bool any_valid = false;
  for (const ConvergencePoint& p : curve.points) {
    any_valid |= p.eta.valid > 0 || p.psi.valid > 0 || p.omega.valid > 0;
  }
  return any_valid ? kExitOk : kExitDegenerate;
}

// ---- recode -----------------------------------------------------------------

double parse_double(const std::string& s, const std::string& what) {
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size() || s.empty()) {
    fail(Errc::bad_argument, what + ": '" + s + "' is not a number");
  }
  return v;
}

LengthMap custom_table_map(const std::string& path) {
  std::ifstream in = open_file(path);
  std::string line;
  if (!std::getline(in, line) || (line != "length\tnew_length" && line != "length\tnew_length\r")) {
    fail(Errc::malformed_row, "expected header 'length\tnew_length' in '" + path + "'");
  }
  auto table = std::make_shared<std::map<double, double>>();
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::size_t tab = line.find('\t');
    if (tab == std::string::npos) {
      fail(Errc::malformed_row, "line " + std::to_string(line_no) + ": expected 2 fields");
    }
    double from = parse_double(line.substr(0, tab), "length");
    double to = parse_double(line.substr(tab + 1), "new_length");
    (*table)[from] = to;
  }
  if (table->empty()) fail(Errc::bad_argument, "empty length table in '" + path + "'");
  return [table](double l) {
    auto it = table->find(l);
    if (it == table->end()) fail(Errc::bad_transform, "length " + fmt(l) + " has no mapping");
    return it->second;
  };
}

// Parses the recode operation and returns a table-to-table transform.
std::function<FrequencyLengthTable(const FrequencyLengthTable&)> recode_op(const Config& cfg) {
  if (cfg.op == "drop-vowels") {
    std::u32string vowels;
    if (cfg.vowels_path.empty()) {
      vowels = default_vowels();
    } else {
      std::ifstream in = open_file(cfg.vowels_path);
      vowels = read_vowel_set(in);
    }
    return [vowels](const FrequencyLengthTable& t) { return drop_vowels(t, vowels); };
  }
  if (cfg.op.rfind("affine:", 0) == 0) {
    std::string args = cfg.op.substr(7);
    std::size_t comma = args.find(',');
    if (comma == std::string::npos) {
      fail(Errc::bad_argument, "affine needs two parameters, e.g. affine:2,1");
    }
    double a = parse_double(args.substr(0, comma), "scale");
    double b = parse_double(args.substr(comma + 1), "shift");
    if (a <= 0.0) fail(Errc::bad_argument, "affine scale must be positive");
    return [a, b](const FrequencyLengthTable& t) {
      return apply_length_transform(t, affine_map(a, b));
    };
  }
  if (cfg.op.rfind("pow:", 0) == 0) {
    double base = parse_double(cfg.op.substr(4), "base");
    if (base <= 0.0) fail(Errc::bad_argument, "base must be positive");
    return [base](const FrequencyLengthTable& t) {
      return apply_length_transform(t, power_map(base));
    };
  }
  if (cfg.op.rfind("custom:", 0) == 0) {
    LengthMap map = custom_table_map(cfg.op.substr(7));
    return [map](const FrequencyLengthTable& t) { return apply_length_transform(t, map); };
  }
  fail(Errc::bad_argument,
       "unknown op '" + cfg.op + "'; use drop-vowels, affine:a,b, pow:base or custom:path");
}

int cmd_recode(Config& cfg) {
  check_flag_consistency(cfg);
  auto transform = recode_op(cfg);
  std::vector<LabeledTable> systems = load_all(input_files(cfg.input), cfg);

  std::vector<ScoreReport> original, recoded;
  for (const LabeledTable& sys : systems) {
    original.push_back(score_report(sys.table));
    recoded.push_back(score_report(transform(sys.table)));
  }

  std::optional<RecodingComparison> fits;
  if (systems.size() >= 3) fits = recoding_comparison(original, recoded);

  if (cfg.json_out) {
    json rows = json::array();
    for (std::size_t i = 0; i < systems.size(); ++i) {
      json r;
      r["label"] = systems[i].label;
      r["original"] = score_to_json(systems[i].label, original[i], {});
      r["recoded"] = score_to_json(systems[i].label, recoded[i], {});
      rows.push_back(std::move(r));
    }
    json j;
    j["command"] = "recode";
    j["op"] = cfg.op;
    j["systems"] = std::move(rows);
    if (fits) {
      auto fit_json = [](const std::optional<RegressionFit>& f) {
        json jf;
        if (f) {
          jf["slope"] = f->slope;
          jf["intercept"] = f->intercept;
          jf["r"] = f->r;
          jf["s"] = f->s;
          jf["n"] = f->n;
        }
        return jf;
      };
      j["fits"]["eta"] = fit_json(fits->eta);
      j["fits"]["psi"] = fit_json(fits->psi);
      j["fits"]["omega"] = fit_json(fits->omega);
    }
    emit_json(j);
  } else {
    std::string out = "label\tscore\toriginal\trecoded\n";
    auto row = [&](const std::string& label, const char* score,
                   const std::optional<double>& before, const std::optional<double>& after) {
      out += label + '\t' + score + '\t' + fmt(before) + '\t' + fmt(after) + '\n';
    };
    for (std::size_t i = 0; i < systems.size(); ++i) {
      row(systems[i].label, "eta", original[i].eta, recoded[i].eta);
      row(systems[i].label, "psi", original[i].psi, recoded[i].psi);
      row(systems[i].label, "omega", original[i].omega, recoded[i].omega);
    }
    if (fits && (fits->eta || fits->psi || fits->omega)) {
      out += "\nscore\tslope\tintercept\tr\ts\tn\n";
      auto fit_row = [&](const char* score, const std::optional<RegressionFit>& f) {
        if (!f) return;
        out += std::string(score) + '\t' + fmt(f->slope) + '\t' + fmt(f->intercept) + '\t' +
               fmt(f->r) + '\t' + fmt(f->s) + '\t' + std::to_string(f->n) + '\n';
      };
      fit_row("eta", fits->eta);
      fit_row("psi", fits->psi);
      fit_row("omega", fits->omega);
    }
    emit(out);
  }

  bool any_scored = false;
  for (std::size_t i = 0; i < systems.size(); ++i) {
    any_scored |= !fully_degenerate(original[i]) || !fully_degenerate(recoded[i]);
  }
  return any_scored ? kExitOk : kExitDegenerate;
}

// ---- alphabet ---------------------------------------------------------------

int cmd_alphabet(Config& cfg) {
  check_flag_consistency(cfg);
  std::string path = single_file(cfg);
  WorkingAlphabet alphabet;
  if (cfg.format == "fl") {
    alphabet = working_alphabet(load_table(path, cfg));
  } else {
    alphabet = working_alphabet(load_tokens(path, cfg));
  }

  if (cfg.json_out) {
    auto chars = [](const std::vector<CharStat>& stats) {
      json arr = json::array();
      for (const CharStat& s : stats) {
        json c;
        c["char"] = utf8::encode(std::u32string(1, s.ch));
        c["count"] = s.count;
        c["log_count"] = s.log_count;
        arr.push_back(std::move(c));
      }
      return arr;
    };
    json j;
    j["command"] = "alphabet";
    j["kept"] = chars(alphabet.kept);
    j["excluded"] = chars(alphabet.excluded);
    if (alphabet.threshold) j["threshold"] = *alphabet.threshold;
    if (alphabet.sse) j["sse"] = *alphabet.sse;
    emit_json(j);
  } else {
    std::string out = "set\tchar\tcount\tlog_count\n";
    auto rows = [&](const char* set, const std::vector<CharStat>& stats) {
      for (const CharStat& s : stats) {
        out += std::string(set) + '\t' + utf8::encode(std::u32string(1, s.ch)) + '\t' +
               std::to_string(s.count) + '\t' + fmt(s.log_count) + '\n';
      }
    };
    rows("kept", alphabet.kept);
    rows("excluded", alphabet.excluded);
    emit(out);
  }
  return kExitOk;
}

// ---- wiring -----------------------------------------------------------------

void add_input_options(CLI::App* sub, Config& cfg) {
  sub->add_option("-i,--input", cfg.input, "input file (or directory for multi-system commands)")
      ->required();
  sub->add_option("--format", cfg.format, "input layout")
      ->check(CLI::IsMember({"fl", "tokens", "aligned"}))
      ->capture_default_str();
  sub->add_option("--filter", cfg.filter,
                  "token filter level (default: none for fl, mandatory otherwise)")
      ->check(CLI::IsMember({"none", "mandatory", "full"}));
  sub->add_option("--length", cfg.length, "length measure")
      ->check(CLI::IsMember({"chars", "duration-median", "duration-mean"}))
      ->capture_default_str();
  sub->add_flag("--cjk-mode", cfg.cjk, "full filter keeps CJK-script tokens instead");
  sub->add_flag("--json", cfg.json_out, "emit JSON instead of TSV");
}

CLI::Option* add_seed_option(CLI::App* sub, Config& cfg) {
  return sub->add_option("--seed", cfg.seed, "random seed (default: from system entropy)");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"word-length optimality scores, baselines and significance tests"};
  app.require_subcommand(1);

  Config cfg;

  CLI::App* score = app.add_subcommand("score", "score one system");
  add_input_options(score, cfg);
  score->add_flag("--with-rho", cfg.with_rho, "add rank-correlation ratio columns");
  score->add_flag("--with-gamma", cfg.with_gamma, "add the concordance-odds column");

  CLI::App* law = app.add_subcommand("law", "frequency-length law battery across systems");
  add_input_options(law, cfg);
  law->add_option("--method", cfg.method, "correlation family")
      ->check(CLI::IsMember({"kendall", "pearson"}))
      ->capture_default_str();

  CLI::App* null_cmd = app.add_subcommand("null", "Monte Carlo null distribution of the scores");
  add_input_options(null_cmd, cfg);
  CLI::Option* null_seed = add_seed_option(null_cmd, cfg);
  null_cmd->add_option("--randomizations", cfg.randomizations, "number of random re-pairings")
      ->capture_default_str();

  CLI::App* converge = app.add_subcommand("converge", "score stability under subsampling");
  add_input_options(converge, cfg);
  CLI::Option* converge_seed = add_seed_option(converge, cfg);
  converge->add_option("--reps", cfg.reps, "samples per curve point")->capture_default_str();

  CLI::App* recode = app.add_subcommand("recode", "score systems before and after a recoding");
  add_input_options(recode, cfg);
  recode->add_option("--op", cfg.op, "drop-vowels | affine:a,b | pow:base | custom:path")
      ->required();
  recode->add_option("--vowels", cfg.vowels_path, "file with a custom vowel set");

  CLI::App* alphabet = app.add_subcommand("alphabet", "working-alphabet split of a corpus");
  add_input_options(alphabet, cfg);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? kExitOk : kExitInput;
  }

  cfg.seed_given = (null_seed->count() > 0) || (converge_seed->count() > 0);

  try {
    if (score->parsed()) return cmd_score(cfg);
    if (law->parsed()) return cmd_law(cfg);
    if (null_cmd->parsed()) return cmd_null(cfg);
    if (converge->parsed()) return cmd_converge(cfg);
    if (recode->parsed()) return cmd_recode(cfg);
    return cmd_alphabet(cfg);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitInput;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitInput;
  }
}
