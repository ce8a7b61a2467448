#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>

#include "wlopt/correlation.hpp"
#include "wlopt/table.hpp"

namespace wlopt {

// eta = L_min / L. Undefined when L is zero.
double eta_score(const FrequencyLengthTable& table);

// psi = (L_r - L) / (L_r - L_min). 1 at the optimum, 0 on average under
// random pairing, negative for worse-than-random codes; never clamped.
double psi_score(const FrequencyLengthTable& table);

struct OmegaParts {
  double tau = 0.0;      // observed tau_a between probability and length
  double tau_min = 0.0;  // tau_a of the optimal arrangement
  double omega = 0.0;    // tau / tau_min
  PairCounts observed;
  PairCounts minimal;
};

// omega = tau / tau_min. The optimal arrangement has no concordant pairs,
// so the ratio also equals (D - C) / D_min; both forms are computed and
// cross-checked in exact integer arithmetic.
OmegaParts omega_score(const FrequencyLengthTable& table);

struct RhoParts {
  double rho = 0.0;
  double rho_min = 0.0;
  double omega_rho = 0.0;  // rho / rho_min
};

RhoParts omega_rho_score(const FrequencyLengthTable& table);

// psi = -a * r, with a = (n-1) s_p s_l / (L_r - L_min). Splits the score
// into a scale factor and the Pearson correlation between probability and
// length.
struct PsiDecomposition {
  double a = 0.0;
  double r = 0.0;
  double s_p = 0.0;   // sample sd of the probabilities
  double s_l = 0.0;   // sample sd of the lengths
  double s_pl = 0.0;  // sample covariance; equals (L - L_r) / (n - 1)
  double psi = 0.0;
};

PsiDecomposition psi_decomposition(const FrequencyLengthTable& table);

struct ScoreOptions {
  bool with_rho = false;
  bool with_gamma = false;
  bool with_pearson = false;
};

// Everything the score table prints for one system. Sub-scores that are
// undefined on this table are absent, with the reason recorded per field;
// no field is ever NaN.
struct ScoreReport {
  std::size_t n = 0;          // types
  std::uint64_t tokens = 0;   // T
  double L = 0.0;
  double L_min = 0.0;
  double L_r = 0.0;
  std::optional<double> tau;
  std::optional<double> tau_min;
  std::optional<double> eta;
  std::optional<double> psi;
  std::optional<double> omega;
  std::optional<double> rho;
  std::optional<double> rho_min;
  std::optional<double> omega_rho;
  std::optional<double> pearson;
  std::optional<double> gamma;
  std::map<std::string, std::string> absent;  // field -> reason
};

ScoreReport score_report(const FrequencyLengthTable& table, const ScoreOptions& options = {});

}  // namespace wlopt
