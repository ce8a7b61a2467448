#include "wlopt/nullmodel.hpp"

#include <cmath>

#include "wlopt/correlation.hpp"
#include "wlopt/error.hpp"
#include "wlopt/summation.hpp"

namespace wlopt {

std::vector<double> shuffle_lengths(const FrequencyLengthTable& table, Rng& rng) {
  std::vector<double> lengths = table.lengths();
  shuffle(lengths, rng);
  return lengths;
}

ScoreStat summarize_values(std::span<const double> values) {
  ScoreStat stat;
  stat.valid = values.size();
  if (values.empty()) return stat;
  double mean = compensated_total(values) / static_cast<double>(values.size());
  stat.mean = mean;
  if (values.size() >= 2) {
    CompensatedSum sq;
    for (double v : values) sq.add((v - mean) * (v - mean));
    stat.sd = std::sqrt(sq.total() / static_cast<double>(values.size() - 1));
  }
  return stat;
}

namespace {

struct NullSetup {
  std::vector<double> freqs;    // as doubles, table order
  std::vector<double> probs;    // table order
  std::vector<double> lengths;  // table order
  double total = 0.0;           // T
  double L_r = 0.0;
  double L_min = 0.0;
  double tau_min = 0.0;
  bool eta_defined = false;    // some length is positive
  bool psi_defined = false;    // L_r > L_min
  bool omega_defined = false;  // optimal arrangement has discordant pairs
};

NullSetup prepare(const FrequencyLengthTable& table) {
  NullSetup s;
  s.probs = table.probabilities();
  s.lengths = table.lengths();
  s.freqs.reserve(table.size());
  for (const TypeEntry& e : table.entries()) {
    s.freqs.push_back(static_cast<double>(e.frequency));
  }
  s.total = static_cast<double>(table.total_tokens());
  s.L_r = random_baseline(table);
  MinimumBaseline mb = minimum_baseline(table);
  s.L_min = mb.value;
  for (double l : s.lengths) {
    if (l > 0.0) s.eta_defined = true;
  }
  s.psi_defined = s.L_r > s.L_min;
  if (table.size() >= 2) {
    PairCounts minimal = pair_counts(mb.arrangement.probabilities, mb.arrangement.lengths);
    if (minimal.discordant > 0) {
      s.omega_defined = true;
      s.tau_min = kendall_tau(minimal);
    }
  }
  return s;
}

// L of one random re-pairing, drawn from the replicate's own stream.
double shuffled_L(const NullSetup& s, Rng& rng, std::vector<double>& scratch) {
  scratch = s.lengths;
  shuffle(scratch, rng);
  CompensatedSum sum;
  for (std::size_t j = 0; j < scratch.size(); ++j) {
    sum.add(s.freqs[j] * scratch[j]);
  }
  return sum.total() / s.total;
}

}  // namespace

NullEstimate monte_carlo_null(const FrequencyLengthTable& table, std::uint64_t replicates,
                              std::uint64_t seed, Execution ex) {
  if (replicates == 0) fail(Errc::bad_argument, "at least one replicate is required");
  NullSetup s = prepare(table);

  const std::int64_t R = static_cast<std::int64_t>(replicates);
  std::vector<double> eta_v(s.eta_defined ? replicates : 0);
  std::vector<double> psi_v(s.psi_defined ? replicates : 0);
  std::vector<double> omega_v(s.omega_defined ? replicates : 0);

  auto replicate = [&](std::int64_t i, std::vector<double>& scratch) {
    Rng rng = replicate_stream(seed, static_cast<std::uint64_t>(i));
    double L = shuffled_L(s, rng, scratch);
    if (s.eta_defined) eta_v[i] = s.L_min / L;
    if (s.psi_defined) psi_v[i] = (s.L_r - L) / (s.L_r - s.L_min);
    if (s.omega_defined) {
      double tau = kendall_tau(pair_counts(s.probs, scratch));
      omega_v[i] = tau / s.tau_min;
    }
  };

  if (ex == Execution::parallel) {
#pragma omp parallel
    {
      std::vector<double> scratch;
#pragma omp for schedule(static)
      for (std::int64_t i = 0; i < R; ++i) replicate(i, scratch);
    }
  } else {
    std::vector<double> scratch;
    for (std::int64_t i = 0; i < R; ++i) replicate(i, scratch);
  }

  NullEstimate out;
  out.eta = summarize_values(eta_v);
  out.psi = summarize_values(psi_v);
  out.omega = summarize_values(omega_v);
  out.replicates = replicates;
  out.seed = seed;
  return out;
}

LengthPermutationTest length_permutation_test(const FrequencyLengthTable& table,
                                              std::uint64_t replicates, std::uint64_t seed,
                                              Execution ex) {
  if (replicates == 0) fail(Errc::bad_argument, "at least one replicate is required");
  NullSetup s = prepare(table);
  double L_obs = mean_token_length(table);

  const std::int64_t R = static_cast<std::int64_t>(replicates);
  std::uint64_t hits = 0;

  if (ex == Execution::parallel) {
#pragma omp parallel
    {
      std::vector<double> scratch;
#pragma omp for schedule(static) reduction(+ : hits)
      for (std::int64_t i = 0; i < R; ++i) {
        Rng rng = replicate_stream(seed, static_cast<std::uint64_t>(i));
        if (shuffled_L(s, rng, scratch) <= L_obs) ++hits;
      }
    }
  } else {
    std::vector<double> scratch;
    for (std::int64_t i = 0; i < R; ++i) {
      Rng rng = replicate_stream(seed, static_cast<std::uint64_t>(i));
      if (shuffled_L(s, rng, scratch) <= L_obs) ++hits;
    }
  }

  LengthPermutationTest out;
  out.hits = hits;
  out.replicates = replicates;
  out.seed = seed;
  out.p_value = static_cast<double>(hits + 1) / static_cast<double>(replicates + 1);
  return out;
}

}  // namespace wlopt
