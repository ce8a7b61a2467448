#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "wlopt/rng.hpp"
#include "wlopt/table.hpp"

namespace wlopt {

// The parallel path writes per-replicate results into a preallocated slot
// per replicate and reduces serially in replicate order, so it is required
// to produce bit-identical output to the serial path at any thread count.
// The serial path is the reference the tests compare against.
enum class Execution { serial, parallel };

// Uniformly random re-pairing of the length column (Fisher-Yates).
std::vector<double> shuffle_lengths(const FrequencyLengthTable& table, Rng& rng);

// Mean and sample sd over the replicates where a score was defined.
struct ScoreStat {
  std::optional<double> mean;
  std::optional<double> sd;
  std::uint64_t valid = 0;
};

ScoreStat summarize_values(std::span<const double> values);

struct NullEstimate {
  ScoreStat eta, psi, omega;
  std::uint64_t replicates = 0;
  std::uint64_t seed = 0;
};

// Monte Carlo distribution of the scores under random length assignment.
// Scores that are undefined on the table (coinciding baselines, zero
// minimal tau) are reported with zero valid replicates, never as NaN.
NullEstimate monte_carlo_null(const FrequencyLengthTable& table, std::uint64_t replicates,
                              std::uint64_t seed, Execution ex = Execution::parallel);

struct LengthPermutationTest {
  double p_value = 1.0;        // (hits + 1) / (replicates + 1)
  std::uint64_t hits = 0;      // permutations with L at or below the observed L
  std::uint64_t replicates = 0;
  std::uint64_t seed = 0;
};

LengthPermutationTest length_permutation_test(const FrequencyLengthTable& table,
                                              std::uint64_t replicates, std::uint64_t seed,
                                              Execution ex = Execution::parallel);

}  // namespace wlopt
