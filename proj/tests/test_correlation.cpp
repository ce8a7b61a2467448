#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "doctest.h"
#include "oracles.hpp"
#include "wlopt/correlation.hpp"
#include "wlopt/error.hpp"
#include "wlopt/stats.hpp"

using namespace wlopt;

namespace {

const std::vector<double> kP = {0.8, 0.16, 0.04};
const std::vector<double> kL = {2.0, 1.0, 3.0};

}  // namespace

TEST_CASE("pair classification on the worked example") {
  PairCounts counts = pair_counts_naive(kP, kL);
  CHECK(counts.concordant == 1);
  CHECK(counts.discordant == 2);
  CHECK(counts.tied_x == 0);
  CHECK(counts.tied_y == 0);
  CHECK(counts.tied_both == 0);
  CHECK(counts.total() == 3);
  CHECK(kendall_tau(counts) == -1.0 / 3.0);
  CHECK(goodman_kruskal_gamma(kP, kL) == -1.0 / 3.0);
}

TEST_CASE("fast pair counting agrees with the quadratic walk") {
  Rng rng(7);
  for (int trial = 0; trial < 300; ++trial) {
    std::size_t n = 2 + rng.below(120);
    // few distinct values forces heavy ties in both columns
    std::uint64_t levels = 1 + rng.below(6);
    std::vector<double> x(n), y(n);
    for (std::size_t i = 0; i < n; ++i) {
      x[i] = static_cast<double>(rng.below(levels));
      y[i] = static_cast<double>(rng.below(levels));
    }
    PairCounts fast = pair_counts(x, y);
    PairCounts naive = pair_counts_naive(x, y);
    CHECK(fast.concordant == naive.concordant);
    CHECK(fast.discordant == naive.discordant);
    CHECK(fast.tied_x == naive.tied_x);
    CHECK(fast.tied_y == naive.tied_y);
    CHECK(fast.tied_both == naive.tied_both);
    CHECK(fast.total() == n * (n - 1) / 2);
  }
}

TEST_CASE("tau endpoints and tie behaviour") {
  std::vector<double> inc = {1, 2, 3, 4, 5};
  std::vector<double> dec = {5, 4, 3, 2, 1};
  CHECK(kendall_tau(inc, inc) == 1.0);
  CHECK(kendall_tau(inc, dec) == -1.0);

  // one tie keeps tau_a away from the endpoints
  std::vector<double> tied = {5, 4, 4, 2, 1};
  CHECK(kendall_tau(inc, tied) > -1.0);
  CHECK(kendall_tau(inc, tied) == -9.0 / 10.0);

  PairCounts counts = pair_counts(inc, tied);
  CHECK(kendall_tau_b(counts) == doctest::Approx(-9.0 / std::sqrt(90.0)).epsilon(1e-15));

  CHECK_THROWS_AS(kendall_tau(std::vector<double>{1.0}, std::vector<double>{2.0}), Error);
  CHECK_THROWS_AS(pair_counts(inc, std::vector<double>{1.0, 2.0}), Error);
}

TEST_CASE("midranks and Spearman") {
  std::vector<double> v = {10, 20, 20, 30};
  std::vector<double> r = midranks(v);
  CHECK(r == std::vector<double>{1.0, 2.5, 2.5, 4.0});

  CHECK(spearman_rho(kP, kL) == doctest::Approx(-0.5).epsilon(1e-15));

  std::vector<double> constant = {3, 3, 3};
  CHECK_THROWS_AS(spearman_rho(constant, kL), Error);
}

TEST_CASE("Pearson correlation") {
  CHECK(pearson_r(kP, kL) == doctest::Approx(-0.14685194996208845).epsilon(1e-12));

  Rng rng(41);
  SUBCASE("matches the textbook formula") {
    for (int trial = 0; trial < 100; ++trial) {
      std::size_t n = 2 + rng.below(80);
      std::vector<double> x = testutil::random_vector(rng, n, -5.0, 10.0);
      std::vector<double> y = testutil::random_vector(rng, n, 0.0, 3.0);
      double r;
      try {
        r = pearson_r(x, y);
      } catch (const Error&) {
        continue;  // a constant draw
      }
      CHECK(r == doctest::Approx(testutil::pearson(x, y)).epsilon(1e-10));
      CHECK(std::abs(r) <= 1.0 + 1e-12);
    }
  }

  SUBCASE("affine images flip only with the sign of the product of scales") {
    for (int trial = 0; trial < 60; ++trial) {
      std::size_t n = 3 + rng.below(60);
      std::vector<double> x = testutil::random_vector(rng, n, 0.0, 10.0);
      std::vector<double> y = testutil::random_vector(rng, n, 0.0, 10.0);
      double a = 0.5 + 2.5 * rng.unit();
      double c = 0.5 + 2.5 * rng.unit();
      if (rng.below(2)) a = -a;
      if (rng.below(2)) c = -c;
      double b = -5.0 + 10.0 * rng.unit();
      double d = -5.0 + 10.0 * rng.unit();
      std::vector<double> xs(n), ys(n);
      for (std::size_t i = 0; i < n; ++i) {
        xs[i] = a * x[i] + b;
        ys[i] = c * y[i] + d;
      }
      double r;
      try {
        r = pearson_r(x, y);
      } catch (const Error&) {
        continue;
      }
      double sign = a * c > 0 ? 1.0 : -1.0;
      CHECK(pearson_r(xs, ys) == doctest::Approx(sign * r).epsilon(1e-12));
    }
  }
}

TEST_CASE("left-sided tests") {
  SUBCASE("tiny samples use the exact permutation distribution") {
    CorrelationTest test = correlation_test(kP, kL, Method::kendall, Side::left);
    CHECK(test.exact);
    CHECK(test.coefficient == -1.0 / 3.0);
    // S over the six arrangements is {-3,-1,-1,1,1,3}; observed is -1
    CHECK(test.p_value == 0.5);
    CHECK(test.p_value > 0.05);
  }

  SUBCASE("a perfect inverse ranking is detected") {
    std::vector<double> x(50), y(50);
    std::iota(x.begin(), x.end(), 1.0);
    for (std::size_t i = 0; i < y.size(); ++i) y[i] = 51.0 - x[i];
    CorrelationTest kt = correlation_test(x, y, Method::kendall, Side::left);
    CHECK(!kt.exact);
    CHECK(kt.coefficient == -1.0);
    CHECK(kt.p_value < 1e-6);

    CorrelationTest pt = correlation_test(x, y, Method::pearson, Side::left);
    CHECK(pt.coefficient == doctest::Approx(-1.0).epsilon(1e-12));
    CHECK(pt.p_value == 0.0);
  }

  SUBCASE("untied moderate sample pins the z statistic") {
    std::vector<double> x(10), y = {2, 1, 4, 3, 6, 5, 8, 7, 10, 9};
    std::iota(x.begin(), x.end(), 1.0);
    CorrelationTest test = correlation_test(x, y, Method::kendall, Side::left);
    // S = 35 and Var = 10*9*25/18 = 125 with no ties
    CHECK(test.statistic == doctest::Approx(35.0 / std::sqrt(125.0)).epsilon(1e-14));
    CHECK(test.coefficient == doctest::Approx(7.0 / 9.0).epsilon(1e-15));
  }

  SUBCASE("normal approximation tracks the exact distribution just past the cutoff") {
    Rng rng(99);
    for (int trial = 0; trial < 4; ++trial) {
      std::size_t n = 9;
      std::vector<double> x(n), y(n);
      for (std::size_t i = 0; i < n; ++i) {
        x[i] = static_cast<double>(rng.below(5));
        y[i] = static_cast<double>(rng.below(5));
      }
      CorrelationTest approx;
      try {
        approx = correlation_test(x, y, Method::kendall, Side::left);
      } catch (const Error&) {
        continue;  // everything tied
      }
      // exact distribution by full enumeration
      std::vector<double> perm = y;
      std::sort(perm.begin(), perm.end());
      PairCounts obs = pair_counts(x, y);
      auto s_of = [](const PairCounts& c) {
        return static_cast<std::int64_t>(c.concordant) -
               static_cast<std::int64_t>(c.discordant);
      };
      std::int64_t s_obs = s_of(obs);
      std::uint64_t hits = 0, arrangements = 0;
      do {
        ++arrangements;
        if (s_of(pair_counts_naive(x, perm)) <= s_obs) ++hits;
      } while (std::next_permutation(perm.begin(), perm.end()));
      double exact = static_cast<double>(hits) / static_cast<double>(arrangements);
      CHECK(approx.p_value == doctest::Approx(exact).epsilon(0.35));
      CHECK(std::abs(approx.p_value - exact) < 0.05);
    }
  }

  SUBCASE("Spearman via the t approximation, Cauchy worked case") {
    CorrelationTest test = correlation_test(kP, kL, Method::spearman, Side::left);
    CHECK(test.coefficient == doctest::Approx(-0.5).epsilon(1e-14));
    // rho = -1/2 with one degree of freedom: p = 1/2 + atan(t)/pi
    double t = -0.5 * std::sqrt(1.0 / 0.75);
    CHECK(test.p_value ==
          doctest::Approx(0.5 + std::atan(t) / std::acos(-1.0)).epsilon(1e-10));
  }

  SUBCASE("degenerate and undersized samples are rejected") {
    std::vector<double> constant(12, 1.0);
    std::vector<double> rising(12);
    std::iota(rising.begin(), rising.end(), 0.0);
    CHECK_THROWS_AS(correlation_test(constant, rising, Method::kendall, Side::left), Error);
    CHECK_THROWS_AS(correlation_test(constant, rising, Method::pearson, Side::left), Error);
    std::vector<double> two = {1.0, 2.0};
    CHECK_THROWS_AS(correlation_test(two, two, Method::pearson, Side::left), Error);

    // a tied y column alongside the constant x: the three variance terms
    // cancel exactly and the cancellation must survive the arithmetic
    std::vector<double> tied_y = {2, 2, 2, 1, 2.5, 2, 4, 1.5, 0.5, 3.5, 2, 7};
    try {
      correlation_test(constant, tied_y, Method::kendall, Side::left);
      FAIL("expected a degenerate-sample error");
    } catch (const Error& e) {
      CHECK(e.code() == Errc::degenerate_sample);
    }

    // the same rejection must hold below the exact-enumeration cutoff
    std::vector<double> short_x = {5.0, 3.0, 1.0};
    std::vector<double> short_const = {2.0, 2.0, 2.0};
    try {
      correlation_test(short_x, short_const, Method::kendall, Side::two_sided);
      FAIL("expected a degenerate-sample error");
    } catch (const Error& e) {
      CHECK(e.code() == Errc::degenerate_sample);
    }
  }
}

TEST_CASE("left-sided rejection rate is calibrated at the 5% level") {
  // Independent columns: the rejection rate at alpha = 0.05 must sit near
  // 0.05. Exercises the tie-free variance path at n = 50.
  Rng rng(123456);
  const int sims = 10000;
  int rejections = 0;
  for (int s = 0; s < sims; ++s) {
    std::vector<double> x = testutil::random_vector(rng, 50, 0.0, 1.0);
    std::vector<double> y = testutil::random_vector(rng, 50, 0.0, 1.0);
    CorrelationTest test = correlation_test(x, y, Method::kendall, Side::left);
    if (test.p_value <= 0.05) ++rejections;
  }
  double rate = static_cast<double>(rejections) / sims;
  CHECK(rate > 0.04);
  CHECK(rate < 0.06);
}

TEST_CASE("two-sided p doubles the smaller tail") {
  std::vector<double> x(20), y(20);
  std::iota(x.begin(), x.end(), 1.0);
  Rng rng(5);
  for (double& v : y) v = rng.unit();
  CorrelationTest left = correlation_test(x, y, Method::kendall, Side::left);
  CorrelationTest two = correlation_test(x, y, Method::kendall, Side::two_sided);
  CHECK(two.p_value == doctest::Approx(2.0 * std::min(left.p_value, 1.0 - left.p_value))
                           .epsilon(1e-9));
}

TEST_CASE("Holm step-down adjustment") {
  SUBCASE("worked trio") {
    std::vector<double> adjusted = holm_bonferroni({0.01, 0.04, 0.03});
    REQUIRE(adjusted.size() == 3);
    CHECK(adjusted[0] == doctest::Approx(0.03).epsilon(1e-15));
    CHECK(adjusted[1] == doctest::Approx(0.06).epsilon(1e-15));
    CHECK(adjusted[2] == doctest::Approx(0.06).epsilon(1e-15));
  }

  SUBCASE("permuting the input permutes the output") {
    Rng rng(17);
    for (int trial = 0; trial < 40; ++trial) {
      std::size_t m = 1 + rng.below(10);
      std::vector<double> p(m);
      for (double& v : p) v = rng.unit();
      std::vector<double> adjusted = holm_bonferroni(p);
      std::vector<std::size_t> perm(m);
      std::iota(perm.begin(), perm.end(), 0);
      shuffle(perm, rng);
      std::vector<double> p2(m), expect(m);
      for (std::size_t i = 0; i < m; ++i) {
        p2[i] = p[perm[i]];
        expect[i] = adjusted[perm[i]];
      }
      CHECK(holm_bonferroni(p2) == expect);
    }
  }

  SUBCASE("adjusted values dominate raw ones and cap at one") {
    Rng rng(18);
    for (int trial = 0; trial < 40; ++trial) {
      std::size_t m = 1 + rng.below(12);
      std::vector<double> p(m);
      for (double& v : p) v = rng.unit();
      std::vector<double> adjusted = holm_bonferroni(p);
      double prev_rank_value = 0.0;
      std::vector<std::size_t> order(m);
      std::iota(order.begin(), order.end(), 0);
      std::sort(order.begin(), order.end(),
                [&](std::size_t a, std::size_t b) { return p[a] < p[b]; });
      for (std::size_t k = 0; k < m; ++k) {
        double a = adjusted[order[k]];
        CHECK(a >= p[order[k]]);
        CHECK(a <= 1.0);
        CHECK(a >= prev_rank_value);  // monotone in the sorted order
        prev_rank_value = a;
      }
    }
  }

  SUBCASE("out-of-range input is rejected") {
    CHECK_THROWS_AS(holm_bonferroni({0.5, 1.5}), Error);
    CHECK_THROWS_AS(holm_bonferroni({-0.1}), Error);
    CHECK(holm_bonferroni({}).empty());
  }
}

TEST_CASE("significance marks") {
  CHECK(std::string(significance_mark(0.009)) == "***");
  CHECK(std::string(significance_mark(0.01)) == "***");
  CHECK(std::string(significance_mark(0.049)) == "**");
  CHECK(std::string(significance_mark(0.05)) == "**");
  CHECK(std::string(significance_mark(0.09)) == "*");
  CHECK(std::string(significance_mark(0.1)) == "*");
  CHECK(std::string(significance_mark(0.2)) == "x");
}

TEST_CASE("t distribution against quadrature") {
  for (double df : {1.0, 2.0, 5.0, 10.0, 30.0}) {
    for (double t : {-8.0, -3.0, -1.5, -0.5, 0.0, 0.7, 2.2, 6.0}) {
      double via_beta = student_t_cdf(t, df);
      double via_quadrature = testutil::t_cdf_quadrature(t, df);
      CHECK(via_beta == doctest::Approx(via_quadrature).epsilon(5e-10));
    }
  }
  CHECK(student_t_cdf(0.0, 7.0) == doctest::Approx(0.5).epsilon(1e-14));
  for (double t : {0.3, 1.7, 4.2}) {
    CHECK(student_t_cdf(-t, 9.0) + student_t_cdf(t, 9.0) ==
          doctest::Approx(1.0).epsilon(1e-13));
  }
}

TEST_CASE("incomplete beta identities and normal quantiles") {
  Rng rng(3);
  for (int trial = 0; trial < 50; ++trial) {
    double a = 0.5 + 5.0 * rng.unit();
    double b = 0.5 + 5.0 * rng.unit();
    double x = rng.unit();
    double forward = regularized_incomplete_beta(a, b, x);
    double backward = regularized_incomplete_beta(b, a, 1.0 - x);
    CHECK(forward + backward == doctest::Approx(1.0).epsilon(1e-11));
    CHECK(forward >= 0.0);
    CHECK(forward <= 1.0);
  }
  CHECK(regularized_incomplete_beta(2.0, 3.0, 0.0) == 0.0);
  CHECK(regularized_incomplete_beta(2.0, 3.0, 1.0) == 1.0);

  CHECK(std_normal_cdf(0.0) == 0.5);
  CHECK(std_normal_cdf(-1.959963984540054) == doctest::Approx(0.025).epsilon(1e-10));
  CHECK(std_normal_cdf(1.6448536269514722) == doctest::Approx(0.95).epsilon(1e-10));
}
