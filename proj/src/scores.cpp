#include "wlopt/scores.hpp"

#include <cmath>

#include "wlopt/error.hpp"
#include "wlopt/summation.hpp"

namespace wlopt {

double eta_score(const FrequencyLengthTable& table) {
  double L = mean_token_length(table);
  if (L == 0.0) fail(Errc::zero_length, "eta undefined when every length is zero");
  return minimum_baseline(table).value / L;
}

double psi_score(const FrequencyLengthTable& table) {
  double L = mean_token_length(table);
  double L_r = random_baseline(table);
  double L_min = minimum_baseline(table).value;
  if (L_r == L_min) {
    fail(Errc::degenerate_table, "psi undefined when the baselines coincide");
  }
  return (L_r - L) / (L_r - L_min);
}

OmegaParts omega_score(const FrequencyLengthTable& table) {
  if (table.size() < 2) fail(Errc::too_few_points, "omega needs at least two types");
  OmegaParts parts;
  parts.observed = pair_counts(table.probabilities(), table.lengths());
  MinArrangement arr = minimum_baseline(table).arrangement;
  parts.minimal = pair_counts(arr.probabilities, arr.lengths);
  parts.tau = kendall_tau(parts.observed);
  parts.tau_min = kendall_tau(parts.minimal);
  if (parts.minimal.discordant == 0) {
    fail(Errc::degenerate_table, "omega undefined when the optimal arrangement has no "
                                 "discordant pairs");
  }

  // +0.0 avoids a signed zero when tau is zero and tau_min is negative.
  parts.omega = parts.tau / parts.tau_min + 0.0;

  // tau / tau_min = (D - C) / D_min must hold exactly as a ratio of
  // integers; cross-multiply in wide arithmetic to verify.
  using wide = __int128;
  wide lhs = (static_cast<wide>(parts.observed.concordant) -
              static_cast<wide>(parts.observed.discordant)) *
             static_cast<wide>(parts.minimal.discordant);
  wide rhs = (static_cast<wide>(parts.observed.discordant) -
              static_cast<wide>(parts.observed.concordant)) *
             (static_cast<wide>(parts.minimal.concordant) -
              static_cast<wide>(parts.minimal.discordant));
  if (lhs != rhs) {
    fail(Errc::degenerate_table, "omega forms disagree; the minimal arrangement is broken");
  }
  return parts;
}

RhoParts omega_rho_score(const FrequencyLengthTable& table) {
  if (table.size() < 2) fail(Errc::too_few_points, "omega_rho needs at least two types");
  RhoParts parts;
  parts.rho = spearman_rho(table.probabilities(), table.lengths());
  MinArrangement arr = minimum_baseline(table).arrangement;
  parts.rho_min = spearman_rho(arr.probabilities, arr.lengths);
  if (parts.rho_min >= 0.0) {
    fail(Errc::degenerate_table, "omega_rho undefined when the minimal rho is not negative");
  }
  parts.omega_rho = parts.rho / parts.rho_min + 0.0;
  return parts;
}

PsiDecomposition psi_decomposition(const FrequencyLengthTable& table) {
  const std::size_t n = table.size();
  if (n < 2) fail(Errc::too_few_points, "the decomposition needs at least two types");

  double L = mean_token_length(table);
  double L_r = random_baseline(table);
  double L_min = minimum_baseline(table).value;
  if (L_r == L_min) {
    fail(Errc::degenerate_table, "psi undefined when the baselines coincide");
  }

  std::vector<double> p = table.probabilities();
  std::vector<double> l = table.lengths();
  double mp = compensated_total(p) / static_cast<double>(n);
  double ml = compensated_total(l) / static_cast<double>(n);
  CompensatedSum spp, sll, spl;
  for (std::size_t i = 0; i < n; ++i) {
    double dp = p[i] - mp;
    double dl = l[i] - ml;
    spp.add(dp * dp);
    sll.add(dl * dl);
    spl.add(dp * dl);
  }
  double denom = static_cast<double>(n - 1);

  PsiDecomposition d;
  d.s_p = std::sqrt(spp.total() / denom);
  d.s_l = std::sqrt(sll.total() / denom);
  d.s_pl = spl.total() / denom;
  if (d.s_p == 0.0 || d.s_l == 0.0) {
    fail(Errc::zero_variance, "the decomposition needs variation on both sides");
  }
  d.r = d.s_pl / (d.s_p * d.s_l);
  d.a = denom * d.s_p * d.s_l / (L_r - L_min);
  d.psi = (L_r - L) / (L_r - L_min);
  return d;
}

namespace {

template <typename F>
void try_field(ScoreReport& report, const char* name, std::optional<double>& slot, F&& compute) {
  try {
    slot = compute();
  } catch (const Error& e) {
    report.absent.emplace(name, errc_name(e.code()));
  }
}

}  // namespace

ScoreReport score_report(const FrequencyLengthTable& table, const ScoreOptions& options) {
  ScoreReport report;
  report.n = table.size();
  report.tokens = table.total_tokens();
  report.L = mean_token_length(table);
  report.L_r = random_baseline(table);
  report.L_min = minimum_baseline(table).value;

  std::vector<double> p = table.probabilities();
  std::vector<double> l = table.lengths();
  MinArrangement arr = minimum_baseline(table).arrangement;

  try_field(report, "eta", report.eta, [&] { return eta_score(table); });
  try_field(report, "psi", report.psi, [&] { return psi_score(table); });

  if (table.size() < 2) {
    report.absent.emplace("tau", errc_name(Errc::too_few_points));
    report.absent.emplace("tau_min", errc_name(Errc::too_few_points));
    report.absent.emplace("omega", errc_name(Errc::too_few_points));
  } else {
    PairCounts observed = pair_counts(p, l);
    PairCounts minimal = pair_counts(arr.probabilities, arr.lengths);
    report.tau = kendall_tau(observed);
    report.tau_min = kendall_tau(minimal);
    if (minimal.discordant == 0) {
      report.absent.emplace("omega", errc_name(Errc::degenerate_table));
    } else {
      report.omega = *report.tau / *report.tau_min + 0.0;
    }
  }

  if (options.with_rho) {
    try {
      report.rho = spearman_rho(p, l);
      report.rho_min = spearman_rho(arr.probabilities, arr.lengths);
      if (*report.rho_min < 0.0) {
        report.omega_rho = *report.rho / *report.rho_min + 0.0;
      } else {
        report.absent.emplace("omega_rho", errc_name(Errc::degenerate_table));
      }
    } catch (const Error& e) {
      report.absent.emplace("rho", errc_name(e.code()));
      report.absent.emplace("omega_rho", errc_name(e.code()));
    }
  }

  if (options.with_pearson) {
    try_field(report, "pearson", report.pearson, [&] { return pearson_r(p, l); });
  }

  if (options.with_gamma) {
    try_field(report, "gamma", report.gamma, [&] { return goodman_kruskal_gamma(p, l); });
  }

  return report;
}

}  // namespace wlopt
