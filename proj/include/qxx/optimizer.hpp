#pragma once

#include <array>
#include <chrono>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "qxx/benchgen.hpp"
#include "qxx/device.hpp"
#include "qxx/params.hpp"
#include "qxx/placer.hpp"

namespace qxx {

/// Finite grid over the six placement parameters (canonical order).
struct ParamSpace {
  std::array<std::vector<double>, 6> values;

  /// Values lo, lo + step, ..., hi (inclusive, rounded to kill fp drift).
  static std::vector<double> range(double lo, double hi, double step);

  /// Full space: MaxDepth/MaxChildren/MovementFactor 1..55, B 0..500 by 0.1,
  /// C 0..1 by 0.01, EdgeCost 0.1..1 by 0.1.
  static ParamSpace table1();
  /// Reduced exhaustive-search grid: 3 x 3 x 11 x 5 x 3 x 3 points.
  static ParamSpace table3();
  /// table3 bounds at table1 increments.
  static ParamSpace table3_fine();
  /// "table1", "table3" or "table3-fine".
  static ParamSpace named(std::string_view name);

  std::size_t size() const;
  /// Lexicographic order, last parameter varying fastest.
  QxxParams at(std::size_t flat_index) const;
  std::vector<QxxParams> enumerate() const;
  ParamSpace with_fixed(std::size_t param, double value) const;

  /// One parameter drawn uniformly from its value list.
  double sample(std::size_t param, std::mt19937_64& rng) const;
};

struct TrialRecord {
  std::size_t trial_index = 0;
  QxxParams params;
  std::vector<std::optional<double>> per_circuit_ratio;  ///< nullopt: timed out
  std::optional<double> mean_ratio;  ///< nullopt when every circuit timed out
  double wall_ms = 0.0;
  std::size_t timeout_count = 0;

  bool valid() const { return mean_ratio.has_value(); }
};

/// Maps a configuration to a scored trial. Must be safe to call concurrently.
using Objective = std::function<TrialRecord(const QxxParams&)>;

/// Wraps a plain scoring function (lower is better) as an Objective.
Objective scalar_objective(std::function<double(const QxxParams&)> f);

enum class TimeoutPolicy {
  exclude,         ///< timed-out circuits are left out of the mean
  penalize_worst,  ///< they score the worst ratio observed in the same trial
};

struct EvalOptions {
  std::chrono::duration<double> deadline = std::chrono::seconds(20);  ///< per circuit
  std::size_t swap_weight = 3;
  std::uint64_t router_seed = 0;
  TimeoutPolicy timeout_policy = TimeoutPolicy::exclude;
  PlaceOptions place;
};

/// place() + route() + ratio() on every circuit of the suite.
TrialRecord evaluate(const QxxParams& params, std::span<const BenchCircuit> suite,
                     const Device& device, const EvalOptions& options);

/// Objective over a suite; the suite and device must outlive the result.
Objective suite_objective(std::span<const BenchCircuit> suite, const Device& device,
                          EvalOptions options);

/// Every grid point, in ParamSpace order. Trial indices follow that order.
std::vector<TrialRecord> exhaustive(const ParamSpace& space, const Objective& objective,
                                    std::size_t workers = 1);

/// Per-parameter importance and the derived resampling probabilities.
struct ImportanceWeights {
  std::array<double, 6> weight{};       ///< percent of objective variance
  std::array<double, 6> probability{};  ///< weight / max(weight), in (0, 1]
};

inline constexpr double kMinChangeProbability = 0.01;

/// probability = weight / max(weight), floored at kMinChangeProbability;
/// all-zero weights give probability 1 everywhere.
ImportanceWeights weights_to_probabilities(const std::array<double, 6>& weights);

/**
 * Main-effect variance decomposition of mean_ratio over the six parameters.
 *
 * A bagged regression forest is fitted to the valid trials; each parameter's
 * marginal prediction is averaged over a background sample drawn from the
 * observed per-parameter values, and its variance is reported as a percentage
 * of the forest's total variance. A constant objective gives uniform weights.
 */
ImportanceWeights importance(std::span<const TrialRecord> history,
                             std::uint64_t seed = 0);

struct SearchResult {
  std::vector<TrialRecord> history;  ///< in trial order
  std::optional<std::size_t> best_index;
  std::optional<ImportanceWeights> weights;  ///< WRS only
  /// Incumbent objective after each trial (NaN until a valid trial).
  std::vector<double> incumbent_trace;

  const TrialRecord& best() const { return history.at(best_index.value()); }
};

struct WrsOptions {
  std::size_t n0 = 550;
  std::size_t n_total = 1500;
  std::uint64_t seed = 0;
  std::size_t workers = 1;
  /// Phase-two trials dispatched against one incumbent snapshot. Fixed
  /// independently of `workers` so results do not depend on parallelism.
  std::size_t batch = 8;
  /// Bypass the importance step (testing and ablations).
  std::optional<std::array<double, 6>> forced_probabilities;
};

/// Weighted random search (minimisation of mean_ratio).
SearchResult wrs(const ParamSpace& space, const Objective& objective,
                 const WrsOptions& options);

/// Uniform i.i.d. sampling of the grid.
SearchResult random_search(const ParamSpace& space, const Objective& objective,
                           std::size_t n_total, std::uint64_t seed,
                           std::size_t workers = 1);

}  // namespace qxx
