#include "wlopt/analysis.hpp"

#include <algorithm>
#include <cmath>

#include "wlopt/error.hpp"
#include "wlopt/summation.hpp"

namespace wlopt {

LawBattery law_battery(const std::vector<LabeledTable>& systems, Method method) {
  if (systems.empty()) fail(Errc::bad_argument, "no systems to test");

  std::vector<std::size_t> order(systems.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return systems[a].label < systems[b].label;
  });

  LawBattery battery;
  battery.method = method;
  std::vector<double> raw;
  std::vector<std::size_t> tested;
  for (std::size_t i : order) {
    const LabeledTable& sys = systems[i];
    BatteryRow row;
    row.label = sys.label;
    row.n = sys.table.size();
    try {
      CorrelationTest test = correlation_test(sys.table.probabilities(),
                                              sys.table.lengths(), method, Side::left);
      row.coefficient = test.coefficient;
      row.statistic = test.statistic;
      row.p_raw = test.p_value;
      row.exact = test.exact;
      tested.push_back(battery.rows.size());
      raw.push_back(test.p_value);
    } catch (const Error& e) {
      row.note = errc_name(e.code());
    }
    battery.rows.push_back(std::move(row));
  }

  std::vector<double> adjusted = holm_bonferroni(raw);
  for (std::size_t k = 0; k < tested.size(); ++k) {
    BatteryRow& row = battery.rows[tested[k]];
    row.p_adjusted = adjusted[k];
    row.mark = significance_mark(adjusted[k]);
  }
  return battery;
}

RegressionFit fit_line(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) fail(Errc::length_mismatch, "x and y differ in size");
  const std::size_t n = x.size();
  if (n < 3) fail(Errc::too_few_points, "a residual error needs at least three points");

  CompensatedSum sx, sy;
  for (std::size_t i = 0; i < n; ++i) {
    sx.add(x[i]);
    sy.add(y[i]);
  }
  double mx = sx.total() / static_cast<double>(n);
  double my = sy.total() / static_cast<double>(n);
  CompensatedSum sxx, sxy, syy;
  for (std::size_t i = 0; i < n; ++i) {
    double dx = x[i] - mx;
    double dy = y[i] - my;
    sxx.add(dx * dx);
    sxy.add(dx * dy);
    syy.add(dy * dy);
  }
  if (sxx.total() == 0.0 || syy.total() == 0.0) {
    fail(Errc::zero_variance, "a fit needs variation on both sides");
  }

  RegressionFit fit;
  fit.n = n;
  fit.slope = sxy.total() / sxx.total();
  fit.intercept = my - fit.slope * mx;
  fit.r = sxy.total() / (std::sqrt(sxx.total()) * std::sqrt(syy.total()));
  CompensatedSum sse;
  for (std::size_t i = 0; i < n; ++i) {
    double e = y[i] - (fit.intercept + fit.slope * x[i]);
    sse.add(e * e);
  }
  fit.s = std::sqrt(sse.total() / static_cast<double>(n - 2));
  return fit;
}

RecodingComparison recoding_comparison(const std::vector<ScoreReport>& original,
                                       const std::vector<ScoreReport>& recoded) {
  if (original.size() != recoded.size()) {
    fail(Errc::label_mismatch, "original and recoded system lists differ in size");
  }
  if (original.empty()) fail(Errc::bad_argument, "no systems to compare");

  RecodingComparison out;
  out.systems = original.size();

  auto fit_score = [&](std::optional<double> ScoreReport::*field)
      -> std::optional<RegressionFit> {
    std::vector<double> x, y;
    for (std::size_t i = 0; i < original.size(); ++i) {
      const std::optional<double>& before = original[i].*field;
      const std::optional<double>& after = recoded[i].*field;
      if (before && after) {
        x.push_back(*before);
        y.push_back(*after);
      }
    }
    if (x.size() < 3) return std::nullopt;
    try {
      return fit_line(x, y);
    } catch (const Error&) {
      return std::nullopt;
    }
  };

  out.eta = fit_score(&ScoreReport::eta);
  out.psi = fit_score(&ScoreReport::psi);
  out.omega = fit_score(&ScoreReport::omega);
  return out;
}

std::vector<CorrelogramCell> parameter_correlogram(
    const std::vector<ScoreColumn>& scores, const std::vector<ParameterColumn>& parameters,
    Method method) {
  if (scores.empty() || parameters.empty()) {
    fail(Errc::bad_argument, "the correlogram needs scores and parameters");
  }
  const std::size_t systems = parameters.front().values.size();
  for (const ScoreColumn& s : scores) {
    if (s.values.size() != systems) fail(Errc::label_mismatch, "column sizes differ");
  }
  for (const ParameterColumn& p : parameters) {
    if (p.values.size() != systems) fail(Errc::label_mismatch, "column sizes differ");
  }

  std::vector<CorrelogramCell> cells;
  std::vector<double> testable_p;
  std::vector<std::size_t> testable_idx;
  for (const ScoreColumn& s : scores) {
    for (const ParameterColumn& p : parameters) {
      CorrelogramCell cell;
      cell.score = s.name;
      cell.parameter = p.name;
      std::vector<double> x, y;
      for (std::size_t i = 0; i < systems; ++i) {
        if (s.values[i]) {
          x.push_back(*s.values[i]);
          y.push_back(p.values[i]);
        }
      }
      cell.n = x.size();
      if (x.size() >= 3) {
        try {
          CorrelationTest test = correlation_test(x, y, method, Side::two_sided);
          cell.coefficient = test.coefficient;
          cell.p_raw = test.p_value;
          testable_p.push_back(test.p_value);
          testable_idx.push_back(cells.size());
        } catch (const Error&) {
          // leave the cell empty; it stays out of the family
        }
      }
      cells.push_back(std::move(cell));
    }
  }

  std::vector<double> adjusted = holm_bonferroni(testable_p);
  for (std::size_t k = 0; k < testable_idx.size(); ++k) {
    CorrelogramCell& cell = cells[testable_idx[k]];
    cell.p_adjusted = adjusted[k];
    cell.mark = significance_mark(adjusted[k]);
  }
  return cells;
}

}  // namespace wlopt
