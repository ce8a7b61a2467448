#include "wlopt/correlation.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdlib>
#include <functional>
#include <limits>
#include <numeric>

#include "wlopt/error.hpp"
#include "wlopt/stats.hpp"
#include "wlopt/summation.hpp"

namespace wlopt {

namespace {

void check_paired(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) {
    fail(Errc::length_mismatch, "x has " + std::to_string(x.size()) + " values, y has " +
                                    std::to_string(y.size()));
  }
}

// Sizes of runs of equal values.
std::vector<std::uint64_t> tie_runs(std::vector<double> values) {
  std::sort(values.begin(), values.end());
  std::vector<std::uint64_t> runs;
  std::size_t i = 0;
  while (i < values.size()) {
    std::size_t j = i + 1;
    while (j < values.size() && values[j] == values[i]) ++j;
    runs.push_back(j - i);
    i = j;
  }
  return runs;
}

std::uint64_t pairs_within(const std::vector<std::uint64_t>& runs) {
  std::uint64_t p = 0;
  for (std::uint64_t t : runs) p += t * (t - 1) / 2;
  return p;
}

// Counts pairs i < j with a[i] > a[j], bottom-up merge sort.
std::uint64_t strict_inversions(std::vector<double>& a) {
  std::size_t n = a.size();
  std::vector<double> tmp(n);
  std::uint64_t count = 0;
  for (std::size_t width = 1; width < n; width *= 2) {
    for (std::size_t lo = 0; lo + width < n; lo += 2 * width) {
      std::size_t mid = lo + width;
      std::size_t hi = std::min(lo + 2 * width, n);
      std::size_t i = lo, j = mid, k = lo;
      while (i < mid && j < hi) {
        if (a[j] < a[i]) {
          count += mid - i;
          tmp[k++] = a[j++];
        } else {
          tmp[k++] = a[i++];
        }
      }
      while (i < mid) tmp[k++] = a[i++];
      while (j < hi) tmp[k++] = a[j++];
      std::copy(tmp.begin() + lo, tmp.begin() + hi, a.begin() + lo);
    }
  }
  return count;
}

}  // namespace

PairCounts pair_counts_naive(std::span<const double> x, std::span<const double> y) {
  check_paired(x, y);
  const std::int64_t n = static_cast<std::int64_t>(x.size());
  std::uint64_t c = 0, d = 0, tx = 0, ty = 0, tb = 0;
#pragma omp parallel for schedule(static) reduction(+ : c, d, tx, ty, tb) if (n > 512)
  for (std::int64_t i = 0; i < n; ++i) {
    for (std::int64_t j = i + 1; j < n; ++j) {
      bool ex = x[i] == x[j];
      bool ey = y[i] == y[j];
      if (ex && ey) {
        ++tb;
      } else if (ex) {
        ++tx;
      } else if (ey) {
        ++ty;
      } else if ((x[i] < x[j]) == (y[i] < y[j])) {
        ++c;
      } else {
        ++d;
      }
    }
  }
  return PairCounts{c, d, tx, ty, tb};
}

PairCounts pair_counts(std::span<const double> x, std::span<const double> y) {
  check_paired(x, y);
  const std::size_t n = x.size();
  if (n < 2) return PairCounts{};

  std::vector<std::uint32_t> idx(n);
  std::iota(idx.begin(), idx.end(), 0);
  std::sort(idx.begin(), idx.end(), [&](std::uint32_t a, std::uint32_t b) {
    if (x[a] != x[b]) return x[a] < x[b];
    return y[a] < y[b];
  });

  // Runs of equal x, and of equal (x, y), in the sorted order.
  std::uint64_t tied_in_x = 0, tied_in_both = 0;
  {
    std::size_t i = 0;
    while (i < n) {
      std::size_t j = i + 1;
      while (j < n && x[idx[j]] == x[idx[i]]) ++j;
      std::uint64_t t = j - i;
      tied_in_x += t * (t - 1) / 2;
      std::size_t k = i;
      while (k < j) {
        std::size_t m = k + 1;
        while (m < j && y[idx[m]] == y[idx[k]]) ++m;
        std::uint64_t u = m - k;
        tied_in_both += u * (u - 1) / 2;
        k = m;
      }
      i = j;
    }
  }

  // With x-ties pre-sorted by y, strict y inversions are exactly the
  // discordant pairs.
  std::vector<double> yseq(n);
  for (std::size_t i = 0; i < n; ++i) yseq[i] = y[idx[i]];
  std::uint64_t discordant = strict_inversions(yseq);

  std::uint64_t tied_in_y = pairs_within(tie_runs(std::vector<double>(y.begin(), y.end())));

  std::uint64_t total = static_cast<std::uint64_t>(n) * (n - 1) / 2;
  PairCounts out;
  out.discordant = discordant;
  out.tied_both = tied_in_both;
  out.tied_x = tied_in_x - tied_in_both;
  out.tied_y = tied_in_y - tied_in_both;
  out.concordant = total - discordant - out.tied_x - out.tied_y - out.tied_both;
  return out;
}

double kendall_tau(const PairCounts& counts) {
  std::uint64_t total = counts.total();
  if (total == 0) fail(Errc::too_few_points, "tau needs at least two points");
  return (static_cast<double>(counts.concordant) - static_cast<double>(counts.discordant)) /
         static_cast<double>(total);
}

double kendall_tau(std::span<const double> x, std::span<const double> y) {
  return kendall_tau(pair_counts(x, y));
}

double kendall_tau_b(const PairCounts& counts) {
  std::uint64_t total = counts.total();
  if (total == 0) fail(Errc::too_few_points, "tau_b needs at least two points");
  double nx = static_cast<double>(total - counts.tied_x - counts.tied_both);
  double ny = static_cast<double>(total - counts.tied_y - counts.tied_both);
  if (nx == 0.0 || ny == 0.0) fail(Errc::zero_variance, "tau_b undefined for a constant side");
  double s = static_cast<double>(counts.concordant) - static_cast<double>(counts.discordant);
  return s / (std::sqrt(nx) * std::sqrt(ny));
}

double pearson_r(std::span<const double> x, std::span<const double> y) {
  check_paired(x, y);
  const std::size_t n = x.size();
  if (n < 2) fail(Errc::too_few_points, "r needs at least two points");

  CompensatedSum sx, sy;
  for (std::size_t i = 0; i < n; ++i) {
    sx.add(x[i]);
    sy.add(y[i]);
  }
  double mx = sx.total() / static_cast<double>(n);
  double my = sy.total() / static_cast<double>(n);

  CompensatedSum sxx, syy, sxy;
  for (std::size_t i = 0; i < n; ++i) {
    double dx = x[i] - mx;
    double dy = y[i] - my;
    sxx.add(dx * dx);
    syy.add(dy * dy);
    sxy.add(dx * dy);
  }
  double vx = sxx.total();
  double vy = syy.total();
  if (vx == 0.0 || vy == 0.0) fail(Errc::zero_variance, "r undefined for a constant side");
  return sxy.total() / (std::sqrt(vx) * std::sqrt(vy));
}

std::vector<double> midranks(std::span<const double> values) {
  const std::size_t n = values.size();
  std::vector<std::uint32_t> idx(n);
  std::iota(idx.begin(), idx.end(), 0);
  std::sort(idx.begin(), idx.end(),
            [&](std::uint32_t a, std::uint32_t b) { return values[a] < values[b]; });
  std::vector<double> ranks(n);
  std::size_t i = 0;
  while (i < n) {
    std::size_t j = i + 1;
    while (j < n && values[idx[j]] == values[idx[i]]) ++j;
    double rank = 0.5 * (static_cast<double>(i + 1) + static_cast<double>(j));
    for (std::size_t k = i; k < j; ++k) ranks[idx[k]] = rank;
    i = j;
  }
  return ranks;
}

double spearman_rho(std::span<const double> x, std::span<const double> y) {
  check_paired(x, y);
  std::vector<double> rx = midranks(x);
  std::vector<double> ry = midranks(y);
  return pearson_r(rx, ry);
}

double goodman_kruskal_gamma(std::span<const double> x, std::span<const double> y) {
  PairCounts counts = pair_counts(x, y);
  if (counts.total() == 0) fail(Errc::too_few_points, "gamma needs at least two points");
  std::uint64_t cd = counts.concordant + counts.discordant;
  if (cd == 0) fail(Errc::all_pairs_tied, "gamma undefined when every pair is tied");
  return (static_cast<double>(counts.concordant) - static_cast<double>(counts.discordant)) /
         static_cast<double>(cd);
}

namespace {

// Null variance of C - D under random pairing, with tie corrections.
double kendall_s_variance(std::span<const double> x, std::span<const double> y) {
  // Evaluated as one exact integer numerator over a common denominator.
  // With one column fully tied the terms cancel exactly; summing them as
  // doubles leaves rounding residue that would defeat the zero test.
  const std::uint64_t n = x.size();
  std::vector<std::uint64_t> tx = tie_runs(std::vector<double>(x.begin(), x.end()));
  std::vector<std::uint64_t> ty = tie_runs(std::vector<double>(y.begin(), y.end()));

  using Wide = __int128;
  auto sums = [](const std::vector<std::uint64_t>& runs) {
    std::array<Wide, 3> s{0, 0, 0};  // t(t-1)(2t+5), t(t-1), t(t-1)(t-2)
    for (std::uint64_t tu : runs) {
      Wide t = static_cast<Wide>(tu);
      s[0] += t * (t - 1) * (2 * t + 5);
      s[1] += t * (t - 1);
      s[2] += t * (t - 1) * (t - 2);
    }
    return s;
  };
  auto [xt1, xt2, xt3] = sums(tx);
  auto [yt1, yt2, yt3] = sums(ty);

  Wide v0 = static_cast<Wide>(n) * (n - 1) * (2 * n + 5);
  if (n > (std::uint64_t{1} << 21)) {
    // Too large for the 128-bit numerator. Variance is zero only when a
    // column is one tie run; otherwise rounding residue is negligible.
    bool x_constant = tx.size() == 1 && tx.front() == n;
    bool y_constant = ty.size() == 1 && ty.front() == n;
    if (x_constant || y_constant) return 0.0;
    double nd = static_cast<double>(n);
    double var = static_cast<double>(v0 - xt1 - yt1) / 18.0;
    var += static_cast<double>(xt2) * static_cast<double>(yt2) / (2.0 * nd * (nd - 1));
    var += static_cast<double>(xt3) * static_cast<double>(yt3) /
           (9.0 * nd * (nd - 1) * (nd - 2));
    return var;
  }
  if (n > 2) {
    // common denominator 18 n(n-1)(n-2)
    Wide pairs3 = static_cast<Wide>(n) * (n - 1) * (n - 2);
    Wide numerator = (v0 - xt1 - yt1) * pairs3 + 9 * (n - 2) * xt2 * yt2 + 2 * xt3 * yt3;
    if (numerator <= 0) return 0.0;
    return static_cast<double>(numerator) / (18.0 * static_cast<double>(pairs3));
  }
  Wide pairs2 = static_cast<Wide>(n) * (n - 1);
  Wide numerator = (v0 - xt1 - yt1) * pairs2 + 9 * xt2 * yt2;
  if (numerator <= 0) return 0.0;
  return static_cast<double>(numerator) / (18.0 * static_cast<double>(pairs2));
}

std::int64_t s_statistic(const PairCounts& counts) {
  return static_cast<std::int64_t>(counts.concordant) -
         static_cast<std::int64_t>(counts.discordant);
}

CorrelationTest exact_kendall_test(std::span<const double> x, std::span<const double> y,
                                   Side side) {
  PairCounts observed = pair_counts(x, y);
  std::int64_t s_obs = s_statistic(observed);

  // Distinct arrangements of the y multiset are equally likely under random
  // pairing, so enumerating them once each gives the exact distribution.
  std::vector<double> perm(y.begin(), y.end());
  std::sort(perm.begin(), perm.end());
  std::uint64_t arrangements = 0, hits = 0;
  do {
    std::int64_t s = s_statistic(pair_counts_naive(x, perm));
    ++arrangements;
    if (side == Side::left ? s <= s_obs : std::abs(s) >= std::abs(s_obs)) ++hits;
  } while (std::next_permutation(perm.begin(), perm.end()));

  CorrelationTest out;
  out.method = Method::kendall;
  out.side = side;
  out.coefficient = kendall_tau(observed);
  out.statistic = static_cast<double>(s_obs);
  out.p_value = static_cast<double>(hits) / static_cast<double>(arrangements);
  out.n = x.size();
  out.exact = true;
  return out;
}

CorrelationTest t_test(Method method, double coefficient, std::size_t n, Side side) {
  CorrelationTest out;
  out.method = method;
  out.side = side;
  out.coefficient = coefficient;
  out.n = n;
  out.exact = false;
  double df = static_cast<double>(n - 2);
  double denom = 1.0 - coefficient * coefficient;
  if (denom <= 0.0) {
    out.statistic = std::copysign(std::numeric_limits<double>::infinity(), coefficient);
    out.p_value = side == Side::left ? (coefficient < 0.0 ? 0.0 : 1.0) : 0.0;
    return out;
  }
  double t = coefficient * std::sqrt(df / denom);
  out.statistic = t;
  out.p_value = side == Side::left ? student_t_cdf(t, df)
                                   : 2.0 * student_t_cdf(-std::abs(t), df);
  return out;
}

}  // namespace

CorrelationTest correlation_test(std::span<const double> x, std::span<const double> y,
                                 Method method, Side side) {
  check_paired(x, y);
  const std::size_t n = x.size();

  if (method == Method::kendall) {
    if (n < 2) fail(Errc::too_few_points, "the Kendall test needs at least two points");
    auto constant = [](std::span<const double> v) {
      return std::adjacent_find(v.begin(), v.end(), std::not_equal_to<>()) == v.end();
    };
    if (constant(x) || constant(y)) {
      fail(Errc::degenerate_sample, "no untied pairs to test");
    }
    if (n <= 8) return exact_kendall_test(x, y, side);
    double var = kendall_s_variance(x, y);
    if (var <= 0.0) fail(Errc::degenerate_sample, "no untied pairs to test");
    PairCounts counts = pair_counts(x, y);
    double z = static_cast<double>(s_statistic(counts)) / std::sqrt(var);
    CorrelationTest out;
    out.method = method;
    out.side = side;
    out.coefficient = kendall_tau(counts);
    out.statistic = z;
    out.p_value = side == Side::left ? std_normal_cdf(z) : 2.0 * std_normal_cdf(-std::abs(z));
    out.n = n;
    out.exact = false;
    return out;
  }

  if (n < 3) fail(Errc::too_few_points, "the t test needs at least three points");
  double coefficient =
      method == Method::pearson ? pearson_r(x, y) : spearman_rho(x, y);
  return t_test(method, coefficient, n, side);
}

std::vector<double> holm_bonferroni(const std::vector<double>& p_values) {
  for (double p : p_values) {
    if (!(p >= 0.0 && p <= 1.0)) {
      fail(Errc::out_of_range_p, "p-value outside [0, 1]");
    }
  }
  const std::size_t m = p_values.size();
  std::vector<std::uint32_t> idx(m);
  std::iota(idx.begin(), idx.end(), 0);
  std::stable_sort(idx.begin(), idx.end(),
                   [&](std::uint32_t a, std::uint32_t b) { return p_values[a] < p_values[b]; });
  std::vector<double> adjusted(m);
  double running = 0.0;
  for (std::size_t k = 0; k < m; ++k) {
    double scaled = static_cast<double>(m - k) * p_values[idx[k]];
    running = std::max(running, std::min(1.0, scaled));
    adjusted[idx[k]] = running;
  }
  return adjusted;
}

const char* significance_mark(double adjusted_p) {
  if (adjusted_p <= 0.01) return "***";
  if (adjusted_p <= 0.05) return "**";
  if (adjusted_p <= 0.1) return "*";
  return "x";
}

}  // namespace wlopt
