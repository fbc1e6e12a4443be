#pragma once

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "qxx/benchgen.hpp"
#include "qxx/features.hpp"
#include "qxx/optimizer.hpp"
#include "qxx/surrogate.hpp"

namespace qxx {

class ResultsFormatError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// One layout attempt: a configuration applied to one circuit.
struct CircuitResult {
  std::size_t trial_index = 0;
  std::string circuit;
  std::size_t benchmark_depth = 0;  ///< known optimum, else the input depth
  QxxParams params;
  GraphFeatures graph;
  std::optional<double> ratio;  ///< nullopt: timed out

  bool timed_out() const { return !ratio.has_value(); }
};

/// Trial-level table: trial_index, the six parameters, mean_ratio, timeouts,
/// wall_ms. Wall times are left blank unless `timing` is set, so that the
/// file is reproducible byte for byte.
void write_trials_csv(std::ostream& out, std::span<const TrialRecord> trials,
                      bool timing = false);
/// per_circuit_ratio is not stored in this table and comes back empty.
std::vector<TrialRecord> read_trials_csv(std::istream& in);

/// Per-circuit rows for every trial over `suite` (which the trials were
/// evaluated on, in order).
std::vector<CircuitResult> circuit_results(std::span<const TrialRecord> trials,
                                           std::span<const BenchCircuit> suite);
void write_circuits_csv(std::ostream& out, std::span<const CircuitResult> rows);
std::vector<CircuitResult> read_circuits_csv(std::istream& in);

/// "dir/results.csv" -> "dir/results.circuits.csv".
std::string circuits_csv_path(const std::string& trials_path);

/// Objective that scores a configuration by the model's mean predicted ratio
/// over circuits with the given graph features. Never times out.
Objective surrogate_objective(const SurrogateModel& model,
                              std::vector<GraphFeatures> circuits);

/// Surrogate training rows (12 features -> ratio); timed-out rows are dropped.
Dataset make_dataset(std::span<const CircuitResult> rows);

}  // namespace qxx
