#pragma once

#include <optional>
#include <string>
#include <vector>

#include "wlopt/correlation.hpp"
#include "wlopt/scores.hpp"
#include "wlopt/table.hpp"

namespace wlopt {

struct LabeledTable {
  std::string label;
  FrequencyLengthTable table;
};

// A system where the test cannot run (too few types, a constant column)
// keeps its row with the blockers named in `note`; the test fields stay
// empty and the row is excluded from the adjustment family.
struct BatteryRow {
  std::string label;
  std::size_t n = 0;
  std::optional<double> coefficient;
  std::optional<double> statistic;
  std::optional<double> p_raw;
  std::optional<double> p_adjusted;
  std::string mark;  // empty on untested rows
  std::string note;  // reason a row went untested
  bool exact = false;
};

struct LawBattery {
  Method method = Method::kendall;
  std::vector<BatteryRow> rows;  // sorted by label
};

// Left-sided frequency-length test per system, Holm-adjusted across the
// rows that could be tested.
LawBattery law_battery(const std::vector<LabeledTable>& systems, Method method);

// Ordinary least squares of y on x, with the residual standard error
// S = sqrt(SSE / (n - 2)).
struct RegressionFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r = 0.0;
  double s = 0.0;
  std::size_t n = 0;
};

RegressionFit fit_line(std::span<const double> x, std::span<const double> y);

// How a recoding shifts the scores across systems: per score, the OLS fit
// of the recoded value against the original. Systems where a score is
// absent on either side drop out of that score's fit; a fit needs at least
// three remaining systems.
struct RecodingComparison {
  std::optional<RegressionFit> eta, psi, omega;
  std::size_t systems = 0;
};

RecodingComparison recoding_comparison(const std::vector<ScoreReport>& original,
                                       const std::vector<ScoreReport>& recoded);

// Two-sided association between each score and each system parameter,
// Holm-adjusted over the full score-by-parameter family.
struct CorrelogramCell {
  std::string score;
  std::string parameter;
  std::size_t n = 0;  // systems with both values present
  std::optional<double> coefficient;
  std::optional<double> p_raw;
  std::optional<double> p_adjusted;
  std::string mark;  // empty when the cell is not testable
};

struct ScoreColumn {
  std::string name;
  std::vector<std::optional<double>> values;  // one per system
};

struct ParameterColumn {
  std::string name;
  std::vector<double> values;  // one per system
};

std::vector<CorrelogramCell> parameter_correlogram(const std::vector<ScoreColumn>& scores,
                                                   const std::vector<ParameterColumn>& parameters,
                                                   Method method);

}  // namespace wlopt
