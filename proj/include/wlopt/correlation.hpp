#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace wlopt {

// Exhaustive classification of the n*(n-1)/2 point pairs. The counts are
// exact integers; every coefficient is a ratio of them.
struct PairCounts {
  std::uint64_t concordant = 0;
  std::uint64_t discordant = 0;
  std::uint64_t tied_x = 0;     // tied in x only
  std::uint64_t tied_y = 0;     // tied in y only
  std::uint64_t tied_both = 0;  // tied in x and in y

  std::uint64_t total() const {
    return concordant + discordant + tied_x + tied_y + tied_both;
  }
};

// O(n^2) reference: walks every pair. Kept as the oracle for the fast path.
PairCounts pair_counts_naive(std::span<const double> x, std::span<const double> y);

// O(n log n) merge-sort count. Produces the same counts as the naive walk.
PairCounts pair_counts(std::span<const double> x, std::span<const double> y);

// tau_a: (concordant - discordant) / total. Tied pairs stay in the
// denominator, so heavily tied data cannot reach -1 or 1.
double kendall_tau(const PairCounts& counts);
double kendall_tau(std::span<const double> x, std::span<const double> y);

// tau_b diagnostic, rescaled for ties.
double kendall_tau_b(const PairCounts& counts);

double pearson_r(std::span<const double> x, std::span<const double> y);

// Average rank for ties, 1-based.
std::vector<double> midranks(std::span<const double> values);

// Pearson correlation of the midranks.
double spearman_rho(std::span<const double> x, std::span<const double> y);

// (concordant - discordant) / (concordant + discordant).
double goodman_kruskal_gamma(std::span<const double> x, std::span<const double> y);

enum class Method { kendall, pearson, spearman };
enum class Side { left, two_sided };

struct CorrelationTest {
  Method method;
  Side side;
  double coefficient;  // tau_a, r, or rho
  double statistic;    // z (Kendall) or t; for the exact path, C - D
  double p_value;
  std::size_t n;
  bool exact;          // exact permutation distribution instead of the
                       // large-sample approximation
};

// Kendall uses the tie-corrected normal approximation, switching to the
// exact permutation distribution when n <= 8. Pearson and Spearman use the
// t approximation with n - 2 degrees of freedom.
CorrelationTest correlation_test(std::span<const double> x, std::span<const double> y,
                                 Method method, Side side);

// Holm step-down adjustment. Output order matches input order.
std::vector<double> holm_bonferroni(const std::vector<double>& p_values);

// Mark for an adjusted p-value: "***" at 0.01, "**" at 0.05, "*" at 0.1,
// otherwise "x".
const char* significance_mark(double adjusted_p);

}  // namespace wlopt
