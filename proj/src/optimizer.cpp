#include "qxx/optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>
#include <stdexcept>

#include "forest.hpp"
#include "parallel.hpp"
#include "qxx/router.hpp"
#include "qxx/seeding.hpp"

namespace qxx {

// ---------------------------------------------------------------------------
// ParamSpace

std::vector<double> ParamSpace::range(double lo, double hi, double step) {
  if (!(step > 0.0) || hi < lo) throw std::invalid_argument("bad parameter range");
  const auto steps = static_cast<std::size_t>(std::floor((hi - lo) / step + 1e-9));
  std::vector<double> out;
  out.reserve(steps + 1);
  for (std::size_t k = 0; k <= steps; ++k) {
    out.push_back(std::round((lo + static_cast<double>(k) * step) * 1e9) / 1e9);
  }
  return out;
}

ParamSpace ParamSpace::table1() {
  return {{range(1, 55, 1), range(1, 55, 1), range(0, 500, 0.1), range(0, 1, 0.01),
           range(1, 55, 1), range(0.1, 1, 0.1)}};
}

ParamSpace ParamSpace::table3() {
  return {{range(1, 9, 4), range(1, 9, 4), range(0, 20, 2), range(0, 1, 0.25),
           range(2, 10, 4), range(0.2, 1, 0.4)}};
}

ParamSpace ParamSpace::table3_fine() {
  return {{range(1, 9, 1), range(1, 9, 1), range(0, 20, 0.1), range(0, 1, 0.01),
           range(2, 10, 1), range(0.2, 1, 0.1)}};
}

ParamSpace ParamSpace::named(std::string_view name) {
  if (name == "table1") return table1();
  if (name == "table3") return table3();
  if (name == "table3-fine" || name == "table3_fine") return table3_fine();
  throw std::invalid_argument("unknown parameter space '" + std::string(name) +
                              "' (expected table1, table3 or table3-fine)");
}

std::size_t ParamSpace::size() const {
  std::size_t n = 1;
  for (const auto& v : values) n *= v.size();
  return n;
}

QxxParams ParamSpace::at(std::size_t flat_index) const {
  if (flat_index >= size()) throw std::out_of_range("grid index out of range");
  std::array<double, 6> point{};
  for (std::size_t k = values.size(); k-- > 0;) {
    point[k] = values[k][flat_index % values[k].size()];
    flat_index /= values[k].size();
  }
  return QxxParams::from_array(point);
}

std::vector<QxxParams> ParamSpace::enumerate() const {
  std::vector<QxxParams> out;
  out.reserve(size());
  for (std::size_t i = 0; i < size(); ++i) out.push_back(at(i));
  return out;
}

ParamSpace ParamSpace::with_fixed(std::size_t param, double value) const {
  ParamSpace out = *this;
  out.values.at(param) = {value};
  return out;
}

double ParamSpace::sample(std::size_t param, std::mt19937_64& rng) const {
  const auto& v = values.at(param);
  if (v.empty()) throw std::logic_error("empty parameter dimension");
  return v[std::uniform_int_distribution<std::size_t>(0, v.size() - 1)(rng)];
}

// ---------------------------------------------------------------------------
// Trial evaluation

Objective scalar_objective(std::function<double(const QxxParams&)> f) {
  return [f = std::move(f)](const QxxParams& p) {
    const auto start = std::chrono::steady_clock::now();
    TrialRecord r;
    r.params = p;
    const double value = f(p);
    r.per_circuit_ratio = {value};
    r.mean_ratio = value;
    r.wall_ms = std::chrono::duration<double, std::milli>(
                    std::chrono::steady_clock::now() - start)
                    .count();
    return r;
  };
}

TrialRecord evaluate(const QxxParams& params, std::span<const BenchCircuit> suite,
                     const Device& device, const EvalOptions& options) {
  if (suite.empty()) throw std::invalid_argument("evaluate: empty suite");
  const auto start = std::chrono::steady_clock::now();
  TrialRecord record;
  record.params = params;
  record.per_circuit_ratio.reserve(suite.size());
  for (const BenchCircuit& bench : suite) {
    auto placement = place(bench.circuit, device, params,
                           Deadline::after(options.deadline), options.place);
    if (!placement) {
      record.per_circuit_ratio.push_back(std::nullopt);
      ++record.timeout_count;
      continue;
    }
    const auto routed = route(bench.circuit, device, placement->mapping,
                              options.router_seed);
    record.per_circuit_ratio.push_back(
        ratio(bench.circuit, routed.circuit, options.swap_weight));
  }
  double sum = 0.0;
  double worst = 0.0;
  std::size_t completed = 0;
  for (const auto& r : record.per_circuit_ratio) {
    if (r) {
      sum += *r;
      worst = std::max(worst, *r);
      ++completed;
    }
  }
  if (completed > 0) {
    if (options.timeout_policy == TimeoutPolicy::penalize_worst) {
      sum += worst * static_cast<double>(record.timeout_count);
      record.mean_ratio = sum / static_cast<double>(suite.size());
    } else {
      record.mean_ratio = sum / static_cast<double>(completed);
    }
  }
  record.wall_ms =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start)
          .count();
  return record;
}

Objective suite_objective(std::span<const BenchCircuit> suite, const Device& device,
                          EvalOptions options) {
  return [suite, &device, options](const QxxParams& p) {
    return evaluate(p, suite, device, options);
  };
}

std::vector<TrialRecord> exhaustive(const ParamSpace& space, const Objective& objective,
                                    std::size_t workers) {
  const std::size_t n = space.size();
  std::vector<TrialRecord> records(n);
  detail::parallel_for(n, workers, [&](std::size_t i) {
    const QxxParams p = space.at(i);
    records[i] = objective(p);
    records[i].trial_index = i;
    records[i].params = p;
  });
  return records;
}

// ---------------------------------------------------------------------------
// Importance

ImportanceWeights weights_to_probabilities(const std::array<double, 6>& weights) {
  ImportanceWeights out;
  out.weight = weights;
  const double top = *std::max_element(weights.begin(), weights.end());
  for (std::size_t k = 0; k < weights.size(); ++k) {
    if (weights[k] < 0.0 || !std::isfinite(weights[k])) {
      throw std::invalid_argument("importance weights must be finite and nonnegative");
    }
    out.probability[k] =
        top > 0.0 ? std::max(kMinChangeProbability, weights[k] / top) : 1.0;
  }
  return out;
}

ImportanceWeights importance(std::span<const TrialRecord> history, std::uint64_t seed) {
  constexpr std::size_t kDims = 6;
  std::array<double, kDims> uniform;
  uniform.fill(100.0 / kDims);

  std::vector<double> x;
  std::vector<double> y;
  for (const auto& r : history) {
    if (!r.valid()) continue;
    const auto p = r.params.to_array();
    x.insert(x.end(), p.begin(), p.end());
    y.push_back(*r.mean_ratio);
  }
  if (y.size() < 2) return weights_to_probabilities(uniform);
  const auto [lo, hi] = std::minmax_element(y.begin(), y.end());
  if (*hi - *lo <= 1e-12 * std::max(1.0, std::abs(*hi))) {
    return weights_to_probabilities(uniform);
  }

  detail::RegressionForest forest;
  detail::RegressionForest::Options opts;
  opts.seed = derive_seed(seed, {0x666f72657374});
  forest.fit(x, y, kDims, opts);

  // Observed values per dimension, with frequencies.
  std::array<std::map<double, std::size_t>, kDims> observed;
  for (std::size_t i = 0; i < y.size(); ++i) {
    for (std::size_t k = 0; k < kDims; ++k) ++observed[k][x[i * kDims + k]];
  }

  // Background sample from the product of the empirical marginals.
  constexpr std::size_t kBackground = 128;
  std::mt19937_64 rng(derive_seed(seed, {0x6267}));
  std::uniform_int_distribution<std::size_t> row(0, y.size() - 1);
  std::vector<double> background(kBackground * kDims);
  for (std::size_t s = 0; s < kBackground; ++s) {
    for (std::size_t k = 0; k < kDims; ++k) {
      background[s * kDims + k] = x[row(rng) * kDims + k];
    }
  }

  auto variance = [](const std::vector<double>& v, const std::vector<double>& w) {
    double wsum = 0.0;
    double mean = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i) {
      wsum += w[i];
      mean += w[i] * v[i];
    }
    mean /= wsum;
    double var = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i) var += w[i] * (v[i] - mean) * (v[i] - mean);
    return var / wsum;
  };

  std::vector<double> preds(kBackground);
  for (std::size_t s = 0; s < kBackground; ++s) {
    preds[s] = forest.predict(std::span<const double>(&background[s * kDims], kDims));
  }
  const double total = variance(preds, std::vector<double>(kBackground, 1.0));
  if (total <= 1e-15) return weights_to_probabilities(uniform);

  constexpr std::size_t kMaxLevels = 24;
  std::array<double, kDims> weights{};
  std::vector<double> probe(kDims);
  for (std::size_t k = 0; k < kDims; ++k) {
    std::vector<std::pair<double, double>> levels(observed[k].begin(), observed[k].end());
    if (levels.size() < 2) continue;
    if (levels.size() > kMaxLevels) {
      // Thin to evenly spaced ranks; each kept level carries its block's mass.
      std::vector<std::pair<double, double>> thinned;
      const double per = static_cast<double>(levels.size()) / kMaxLevels;
      for (std::size_t j = 0; j < kMaxLevels; ++j) {
        const auto from = static_cast<std::size_t>(std::floor(j * per));
        const auto to = static_cast<std::size_t>(std::floor((j + 1) * per));
        double mass = 0.0;
        for (std::size_t i = from; i < to; ++i) mass += levels[i].second;
        thinned.emplace_back(levels[(from + to) / 2].first, mass);
      }
      levels = std::move(thinned);
    }
    std::vector<double> marginal;
    std::vector<double> mass;
    for (const auto& [value, freq] : levels) {
      double sum = 0.0;
      for (std::size_t s = 0; s < kBackground; ++s) {
        std::copy_n(&background[s * kDims], kDims, probe.begin());
        probe[k] = value;
        sum += forest.predict(probe);
      }
      marginal.push_back(sum / kBackground);
      mass.push_back(freq);
    }
    weights[k] = std::clamp(100.0 * variance(marginal, mass) / total, 0.0, 100.0);
  }
  return weights_to_probabilities(weights);
}

// ---------------------------------------------------------------------------
// Random and weighted random search

namespace {

constexpr std::uint64_t kValueStream = 0;
constexpr std::uint64_t kChangeStream = 1;

std::mt19937_64 trial_rng(std::uint64_t seed, std::size_t trial, std::uint64_t stream) {
  return std::mt19937_64(derive_seed(seed, {trial, stream}));
}

std::array<double, 6> sample_point(const ParamSpace& space, std::mt19937_64& rng) {
  std::array<double, 6> p{};
  for (std::size_t k = 0; k < p.size(); ++k) p[k] = space.sample(k, rng);
  return p;
}

void run_batch(const Objective& objective, const std::vector<QxxParams>& batch,
               std::size_t first_index, std::size_t workers, SearchResult& result) {
  std::vector<TrialRecord> records(batch.size());
  detail::parallel_for(batch.size(), workers, [&](std::size_t i) {
    records[i] = objective(batch[i]);
    records[i].params = batch[i];
    records[i].trial_index = first_index + i;
  });
  for (auto& r : records) {
    // Strict improvement only: ties keep the earlier incumbent.
    if (r.valid() &&
        (!result.best_index || *r.mean_ratio < *result.best().mean_ratio)) {
      result.best_index = result.history.size();
    }
    result.history.push_back(std::move(r));
    result.incumbent_trace.push_back(result.best_index
                                         ? *result.best().mean_ratio
                                         : std::numeric_limits<double>::quiet_NaN());
  }
}

}  // namespace

SearchResult random_search(const ParamSpace& space, const Objective& objective,
                           std::size_t n_total, std::uint64_t seed, std::size_t workers) {
  SearchResult result;
  std::vector<QxxParams> batch;
  batch.reserve(n_total);
  for (std::size_t t = 0; t < n_total; ++t) {
    auto rng = trial_rng(seed, t, kValueStream);
    batch.push_back(QxxParams::from_array(sample_point(space, rng)));
  }
  run_batch(objective, batch, 0, workers, result);
  return result;
}

SearchResult wrs(const ParamSpace& space, const Objective& objective,
                 const WrsOptions& options) {
  if (options.n0 >= options.n_total) {
    throw std::invalid_argument("wrs: n0 must be smaller than n_total");
  }
  if (options.batch == 0) throw std::invalid_argument("wrs: batch must be positive");

  SearchResult result = random_search(space, objective, options.n0, options.seed,
                                      options.workers);
  ImportanceWeights weights =
      options.forced_probabilities
          ? ImportanceWeights{*options.forced_probabilities, *options.forced_probabilities}
          : importance(result.history, options.seed);
  result.weights = weights;

  for (std::size_t start = options.n0; start < options.n_total; start += options.batch) {
    const std::size_t stop = std::min(options.n_total, start + options.batch);
    const std::optional<std::array<double, 6>> incumbent =
        result.best_index ? std::optional(result.best().params.to_array()) : std::nullopt;
    std::vector<QxxParams> batch;
    for (std::size_t t = start; t < stop; ++t) {
      auto values = trial_rng(options.seed, t, kValueStream);
      auto change = trial_rng(options.seed, t, kChangeStream);
      const auto fresh = sample_point(space, values);
      std::array<double, 6> point = fresh;
      if (incumbent) {
        for (std::size_t k = 0; k < point.size(); ++k) {
          std::bernoulli_distribution resample(weights.probability[k]);
          if (!resample(change)) point[k] = (*incumbent)[k];
        }
      }
      batch.push_back(QxxParams::from_array(point));
    }
    run_batch(objective, batch, start, options.workers, result);
  }
  return result;
}

}  // namespace qxx
