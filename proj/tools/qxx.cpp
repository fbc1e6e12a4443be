// qxx: initial placement, routing, parameter search and surrogate tooling.
//
// Exit codes: 0 success, 1 usage error, 2 unreadable or malformed input,
// 3 run dominated by timeouts.

#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "qxx/benchgen.hpp"
#include "qxx/circuit.hpp"
#include "qxx/device.hpp"
#include "qxx/features.hpp"
#include "qxx/metrics.hpp"
#include "qxx/optimizer.hpp"
#include "qxx/params.hpp"
#include "qxx/placer.hpp"
#include "qxx/results.hpp"
#include "qxx/router.hpp"
#include "qxx/surrogate.hpp"

namespace {

using namespace qxx;
using json = nlohmann::ordered_json;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct InputError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct TimeoutDominated : std::runtime_error {
  using std::runtime_error::runtime_error;
};

constexpr const char* kPresetHelp =
    "Parameter spaces:\n"
    "  table1       MaxDepth 1..55, MaxChildren 1..55, B 0..500 step 0.1,\n"
    "               C 0..1 step 0.01, MovementFactor 1..55, EdgeCost 0.1..1 step 0.1\n"
    "  table3       MaxDepth {1,5,9}, MaxChildren {1,5,9}, B 0..20 step 2,\n"
    "               C 0..1 step 0.25, MovementFactor {2,6,10}, EdgeCost {0.2,0.6,1}\n"
    "               (1485 configurations per MaxDepth)\n"
    "  table3-fine  table3 bounds at table1 increments\n"
    "Parameters as a sextuple: MaxDepth,MaxChildren,B,C,MovementFactor,EdgeCost\n";

std::chrono::duration<double> parse_duration(const std::string& text) {
  std::size_t used = 0;
  double value = 0.0;
  try {
    value = std::stod(text, &used);
  } catch (const std::exception&) {
    throw UsageError("bad duration '" + text + "'");
  }
  const std::string unit = text.substr(used);
  double scale = 0.0;
  if (unit.empty() || unit == "s") {
    scale = 1.0;
  } else if (unit == "ms") {
    scale = 1e-3;
  } else if (unit == "us") {
    scale = 1e-6;
  } else if (unit == "m" || unit == "min") {
    scale = 60.0;
  } else {
    throw UsageError("bad duration unit in '" + text + "' (use ms, s or m)");
  }
  if (!(value > 0.0)) throw UsageError("duration must be positive: '" + text + "'");
  return std::chrono::duration<double>(value * scale);
}

Device open_device(const std::string& name) {
  try {
    return load_device(name);
  } catch (const DeviceError& e) {
    throw InputError(e.what());
  }
}

Circuit open_circuit(const std::string& path) {
  try {
    return load_circuit(path);
  } catch (const CircuitParseError& e) {
    throw InputError(path + ": " + e.what());
  } catch (const std::runtime_error& e) {
    throw InputError(e.what());
  }
}

// Sextuple plus per-parameter overrides.
struct ParamFlags {
  std::string sextuple;
  std::array<std::optional<double>, 6> named;

  void add(CLI::App* app, bool with_sextuple) {
    if (with_sextuple) {
      app->add_option("--params", sextuple,
                      "MaxDepth,MaxChildren,B,C,MovementFactor,EdgeCost");
    }
    app->add_option("--max-depth", named[0], "MaxDepth");
    app->add_option("--max-children", named[1], "MaxChildren");
    app->add_option("--b", named[2], "B (Gaussian sharpness)");
    app->add_option("--c", named[3], "C (Gaussian centre)");
    app->add_option("--movement-factor", named[4], "MovementFactor");
    app->add_option("--edge-cost", named[5], "EdgeCost");
  }

  QxxParams params() const {
    try {
      auto values = (sextuple.empty() ? QxxParams{} : QxxParams::parse(sextuple)).to_array();
      for (std::size_t k = 0; k < 6; ++k) {
        if (named[k]) values[k] = *named[k];
      }
      auto p = QxxParams::from_array(values);
      p.validate();
      return p;
    } catch (const std::invalid_argument& e) {
      throw UsageError(e.what());
    }
  }

  ParamSpace restrict(ParamSpace space) const {
    for (std::size_t k = 0; k < 6; ++k) {
      if (named[k]) space = space.with_fixed(k, *named[k]);
    }
    return space;
  }
};

struct EvalFlags {
  std::string deadline = "20s";
  std::size_t budget = 20000;
  std::size_t swap_weight = 3;
  std::string retention = "lowest-cost";
  std::string timeout_policy = "exclude";

  void add(CLI::App* app) {
    app->add_option("--deadline", deadline, "Per-circuit placement deadline (e.g. 50ms, 5s)")
        ->capture_default_str();
    app->add_option("--budget", budget,
                    "Per-circuit node-expansion budget, 0 for none (reproducible timeouts)")
        ->capture_default_str();
    app->add_option("--swap-weight", swap_weight, "Depth layers per SWAP (1 or 3)")
        ->check(CLI::IsMember({1, 3}))
        ->capture_default_str();
    app->add_option("--retention", retention, "Child retention rule")
        ->check(CLI::IsMember({"lowest-cost", "minimum-ties"}))
        ->capture_default_str();
  }

  PlaceOptions place() const {
    PlaceOptions o;
    o.retention = retention == "minimum-ties" ? ChildRetention::minimum_ties
                                              : ChildRetention::lowest_cost;
    o.max_expansions = budget;
    return o;
  }

  EvalOptions eval(std::uint64_t seed) const {
    EvalOptions o;
    o.deadline = parse_duration(deadline);
    o.swap_weight = swap_weight;
    o.router_seed = seed;
    o.timeout_policy = timeout_policy == "penalize-worst" ? TimeoutPolicy::penalize_worst
                                                          : TimeoutPolicy::exclude;
    o.place = place();
    return o;
  }
};

std::vector<BenchCircuit> open_suite(const std::string& dir) {
  if (!std::filesystem::is_directory(dir)) throw InputError("no such suite directory: " + dir);
  try {
    auto suite = read_suite(dir);
    if (suite.empty()) throw InputError("suite directory " + dir + " has no circuits");
    return suite;
  } catch (const CircuitParseError& e) {
    throw InputError(e.what());
  }
}

// Default suite when none is given: one circuit per depth 5..45.
std::vector<BenchCircuit> builtin_suite(const Device& device, std::uint64_t seed) {
  SuiteSpec spec;
  spec.per_depth = 1;
  spec.seed = seed;
  return generate_suite(device, spec);
}

void write_text(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  const auto parent = std::filesystem::path(path).parent_path();
  std::error_code ec;
  if (!parent.empty()) std::filesystem::create_directories(parent, ec);
  std::ofstream out(path);
  if (!out) throw InputError("cannot write " + path);
  out << text;
}

void write_results(const std::string& path, const std::vector<TrialRecord>& trials,
                   std::span<const BenchCircuit> suite, bool timing) {
  std::ostringstream table;
  write_trials_csv(table, trials, timing);
  write_text(path, table.str());
  if (path.empty() || path == "-") return;
  std::ostringstream per_circuit;
  const auto rows = circuit_results(trials, suite);
  write_circuits_csv(per_circuit, rows);
  write_text(circuits_csv_path(path), per_circuit.str());
}

std::vector<CircuitResult> open_circuit_rows(const std::string& path) {
  auto read = [](const std::string& p) {
    std::ifstream in(p);
    if (!in) throw InputError("cannot open " + p);
    return read_circuits_csv(in);
  };
  std::ifstream probe(path);
  if (!probe) throw InputError("cannot open " + path);
  std::string header;
  std::getline(probe, header);
  if (header.rfind("trial_index,circuit,", 0) == 0) return read(path);
  return read(circuits_csv_path(path));
}

std::size_t timed_out_trials(const std::vector<TrialRecord>& trials) {
  std::size_t n = 0;
  for (const auto& t : trials) n += t.valid() ? 0 : 1;
  return n;
}

void check_not_dominated(const std::vector<TrialRecord>& trials) {
  if (!trials.empty() && timed_out_trials(trials) == trials.size()) {
    throw TimeoutDominated("every trial timed out on every circuit");
  }
}

// ---------------------------------------------------------------------------

struct LayoutCmd {
  std::string circuit, device = "aspen16", out;
  ParamFlags params;
  EvalFlags eval;
  std::uint64_t seed = 0;

  void add(CLI::App& root) {
    auto* app = root.add_subcommand("layout", "Place and route one circuit");
    app->add_option("--circuit", circuit, "Circuit JSON file")->required();
    app->add_option("--device", device, "Device file or aspen16, grid4x4, chain:N, grid:RxC")
        ->capture_default_str();
    app->add_option("--seed", seed, "Router seed")->capture_default_str();
    app->add_option("--out", out, "Routed circuit output (default stdout)");
    params.add(app, true);
    eval.add(app);
    app->callback([this] { run(); });
  }

  void run() const {
    const auto c = open_circuit(circuit);
    const auto d = open_device(device);
    const auto p = params.params();
    if (c.num_qubits() > d.num_registers()) {
      throw InputError("circuit has more qubits than the device has registers");
    }
    const auto start = std::chrono::steady_clock::now();
    const auto placement = place(c, d, p, Deadline::after(parse_duration(eval.deadline)),
                                 eval.place());
    if (!placement) throw TimeoutDominated("placement timed out");
    const auto routed = route(c, d, placement->mapping, seed);
    const auto report = verify(routed, c, d);
    if (!report) throw std::logic_error("router produced an invalid circuit: " + report.message);
    const double ms = std::chrono::duration<double, std::milli>(
                          std::chrono::steady_clock::now() - start)
                          .count();
    write_text(out, emit_routed(routed) + "\n");
    std::cerr << "ratio=" << format_double(ratio(c, routed.circuit, eval.swap_weight))
              << " swaps=" << routed.swap_count()
              << " depth_in=" << depth(c, eval.swap_weight)
              << " depth_out=" << depth(routed.circuit, eval.swap_weight)
              << " gdepth=" << format_double(placement->cost)
              << " expanded=" << placement->expanded_nodes << " ms=" << ms << '\n';
  }
};

struct BenchCmd {
  std::string device = "aspen16", depths = "5..45:5", out;
  std::size_t per_depth = 10;
  double density = kDefaultGateDensity;
  std::uint64_t seed = 0;

  void add(CLI::App& root) {
    auto* bench = root.add_subcommand("bench", "Benchmark circuits");
    bench->require_subcommand(1);
    auto* app = bench->add_subcommand("generate", "Circuits with known optimal depth");
    app->add_option("--device", device, "Device file or built-in name")->capture_default_str();
    app->add_option("--depths", depths, "Depth list: 5..45:5, 5,10,20 or 7")
        ->capture_default_str();
    app->add_option("--per-depth", per_depth, "Circuits per depth")->capture_default_str();
    app->add_option("--density", density, "Fraction of a full matching used per layer")
        ->capture_default_str();
    app->add_option("--seed", seed, "Generator seed")->capture_default_str();
    app->add_option("--out", out, "Output directory")->required();
    app->callback([this] { run(); });
  }

  void run() const {
    const auto d = open_device(device);
    SuiteSpec spec;
    try {
      spec.depths = parse_depth_list(depths);
    } catch (const std::invalid_argument& e) {
      throw UsageError(e.what());
    }
    spec.per_depth = per_depth;
    spec.gate_density = density;
    spec.seed = seed;
    const auto suite = generate_suite(d, spec);
    std::filesystem::create_directories(out);
    write_suite(suite, out);
    json summary{{"directory", out}, {"device", d.name()}, {"circuits", suite.size()},
                 {"depths", spec.depths}, {"per_depth", per_depth}, {"seed", seed}};
    std::cout << summary.dump() << '\n';
    std::cerr << "wrote " << suite.size() << " circuits to " << out << '\n';
  }
};

struct SweepCmd {
  std::string space = "table3", suite, device = "aspen16", out;
  ParamFlags fixed;
  EvalFlags eval;
  std::uint64_t seed = 0;
  std::size_t workers = 1;
  bool timing = false;

  void add(CLI::App& root) {
    auto* app = root.add_subcommand("sweep", "Exhaustive grid sweep");
    app->footer(kPresetHelp);
    app->add_option("--space", space, "table1, table3 or table3-fine")->capture_default_str();
    app->add_option("--suite", suite, "Benchmark directory")->required();
    app->add_option("--device", device, "Device file or built-in name")->capture_default_str();
    app->add_option("--out", out, "Results CSV (a .circuits.csv sidecar is written next to it)")
        ->required();
    app->add_option("--seed", seed, "Router seed")->capture_default_str();
    app->add_option("--workers", workers, "Parallel workers")->capture_default_str();
    app->add_option("--timeout-policy", eval.timeout_policy, "exclude or penalize-worst")
        ->check(CLI::IsMember({"exclude", "penalize-worst"}))
        ->capture_default_str();
    app->add_flag("--timing", timing, "Record wall_ms (output no longer reproducible)");
    fixed.add(app, false);
    eval.add(app);
    app->callback([this] { run(); });
  }

  void run() const {
    ParamSpace grid;
    try {
      grid = fixed.restrict(ParamSpace::named(space));
    } catch (const std::invalid_argument& e) {
      throw UsageError(e.what());
    }
    const auto d = open_device(device);
    const auto circuits = open_suite(suite);
    const auto objective = suite_objective(circuits, d, eval.eval(seed));
    std::cerr << "sweeping " << grid.size() << " configurations x " << circuits.size()
              << " circuits = " << grid.size() * circuits.size() << " layouts\n";
    const auto trials = exhaustive(grid, objective, workers);
    write_results(out, trials, circuits, timing);
    std::size_t timeouts = 0;
    for (const auto& t : trials) timeouts += t.timeout_count;
    std::cerr << "configurations=" << trials.size() << " timeouts=" << timeouts << '\n';
    check_not_dominated(trials);
  }
};

struct WrsCmd {
  std::string space = "table1", suite, device = "aspen16", out, model, weights_out;
  ParamFlags fixed;
  EvalFlags eval;
  std::size_t n0 = 550, trials = 1500, workers = 1, batch = 8;
  std::uint64_t seed = 0;
  bool random_only = false, timing = false;

  void add(CLI::App& root) {
    auto* app = root.add_subcommand("wrs", "Weighted random search");
    app->footer(kPresetHelp);
    app->add_option("--space", space, "table1, table3 or table3-fine")->capture_default_str();
    app->add_option("--suite", suite, "Benchmark directory (default: one generated circuit per "
                                      "depth 5..45 on --device)");
    app->add_option("--device", device, "Device file or built-in name")->capture_default_str();
    app->add_option("--model", model, "Score trials with a surrogate model instead");
    app->add_option("--n0", n0, "Uniform trials before weighting")->capture_default_str();
    app->add_option("--trials", trials, "Total trials")->capture_default_str();
    app->add_option("--seed", seed, "Seed for search, router and default suite")
        ->capture_default_str();
    app->add_option("--workers", workers, "Parallel workers")->capture_default_str();
    app->add_option("--batch", batch, "Trials per incumbent snapshot")->capture_default_str();
    app->add_option("--out", out, "Results CSV (default stdout)");
    app->add_option("--weights-out", weights_out, "Importance weights JSON");
    app->add_option("--timeout-policy", eval.timeout_policy, "exclude or penalize-worst")
        ->check(CLI::IsMember({"exclude", "penalize-worst"}))
        ->capture_default_str();
    app->add_flag("--random", random_only, "Plain random search baseline");
    app->add_flag("--timing", timing, "Record wall_ms (output no longer reproducible)");
    fixed.add(app, false);
    eval.add(app);
    app->callback([this] { run(); });
  }

  void run() const {
    ParamSpace grid;
    try {
      grid = fixed.restrict(ParamSpace::named(space));
    } catch (const std::invalid_argument& e) {
      throw UsageError(e.what());
    }
    if (!random_only && n0 >= trials) throw UsageError("--n0 must be below --trials");
    if (batch == 0) throw UsageError("--batch must be positive");
    const auto d = open_device(device);
    const auto circuits = suite.empty() ? builtin_suite(d, seed) : open_suite(suite);

    std::optional<SurrogateModel> surrogate;
    Objective objective;
    if (!model.empty()) {
      surrogate = load_model(model);
      std::vector<GraphFeatures> graph;
      for (const auto& b : circuits) graph.push_back(features(b.circuit));
      objective = surrogate_objective(*surrogate, std::move(graph));
    } else {
      objective = suite_objective(circuits, d, eval.eval(seed));
    }

    const auto start = std::chrono::steady_clock::now();
    SearchResult result;
    if (random_only) {
      result = random_search(grid, objective, trials, seed, workers);
    } else {
      WrsOptions o;
      o.n0 = n0;
      o.n_total = trials;
      o.seed = seed;
      o.workers = workers;
      o.batch = batch;
      result = wrs(grid, objective, o);
    }
    const double ms = std::chrono::duration<double, std::milli>(
                          std::chrono::steady_clock::now() - start)
                          .count();
    write_results(out, result.history, circuits, timing);

    if (result.weights && !weights_out.empty()) {
      json w = json::object();
      for (std::size_t k = 0; k < 6; ++k) {
        w[std::string(kParamNames[k])] = {{"weight", result.weights->weight[k]},
                                          {"probability", result.weights->probability[k]}};
      }
      write_text(weights_out, w.dump(2) + "\n");
    }
    std::cerr << (random_only ? "rs" : "wrs") << ": " << result.history.size()
              << " trials in " << ms << " ms";
    if (result.best_index) {
      const auto& best = result.best();
      std::cerr << ", best mean_ratio=" << format_double(*best.mean_ratio) << " at trial "
                << best.trial_index << " params=" << best.params.to_string();
    }
    std::cerr << '\n';
    if (result.weights) {
      std::cerr << "weights:";
      for (std::size_t k = 0; k < 6; ++k) {
        std::cerr << ' ' << kParamNames[k] << '=' << result.weights->weight[k] << '/'
                  << result.weights->probability[k];
      }
      std::cerr << '\n';
    }
    check_not_dominated(result.history);
  }

  static SurrogateModel load_model(const std::string& path) {
    try {
      return SurrogateModel::load(path);
    } catch (const std::exception& e) {
      throw InputError(e.what());
    }
  }
};

struct SurrogateCmd {
  // train
  std::string data, out, family = "mlp", activation = "relu";
  std::size_t hidden = 100, epochs = 200, batch = 32, k = 5, cv = 0, inner = 5;
  int p = 2;
  double lr = 0.01, momentum = 0.9;
  std::uint64_t seed = 0;
  bool grid = false;
  // predict
  std::string model, circuit;
  ParamFlags params;

  void add(CLI::App& root) {
    auto* sur = root.add_subcommand("surrogate", "Ratio-predicting surrogate model");
    sur->require_subcommand(1);

    auto* train = sur->add_subcommand("train", "Fit a model on sweep results");
    train->add_option("--data", data, "results.csv (or its .circuits.csv sidecar)")
        ->required();
    train->add_option("--out", out, "Model JSON")->required();
    train->add_option("--family", family, "mlp or knn")
        ->check(CLI::IsMember({"mlp", "knn"}))
        ->capture_default_str();
    train->add_option("--hidden", hidden, "Hidden neurons")->capture_default_str();
    train->add_option("--activation", activation, "relu or tanh")
        ->check(CLI::IsMember({"relu", "tanh"}))
        ->capture_default_str();
    train->add_option("--epochs", epochs)->capture_default_str();
    train->add_option("--lr", lr, "Learning rate")->capture_default_str();
    train->add_option("--momentum", momentum)->capture_default_str();
    train->add_option("--batch-size", batch)->capture_default_str();
    train->add_option("--k", k, "KNN neighbours")->capture_default_str();
    train->add_option("--p", p, "KNN Minkowski exponent")->capture_default_str();
    train->add_option("--seed", seed)->capture_default_str();
    train->add_option("--cv", cv, "Outer folds for a cross-validated error estimate (0: skip)")
        ->capture_default_str();
    train->add_option("--inner-folds", inner, "Inner folds for --grid")->capture_default_str();
    train->add_flag("--grid", grid, "Pick hyperparameters by grid search over the family grid");
    train->callback([this] { run_train(); });

    auto* predict = sur->add_subcommand("predict", "Predict the ratio of a configuration");
    predict->add_option("--model", model, "Model JSON")->required();
    predict->add_option("--circuit", circuit, "Circuit JSON")->required();
    params.add(predict, true);
    predict->callback([this] { run_predict(); });
  }

  MlpOptions mlp_options() const {
    MlpOptions o;
    o.hidden = hidden;
    o.activation = parse_activation(activation);
    o.epochs = epochs;
    o.learning_rate = lr;
    o.momentum = momentum;
    o.batch_size = batch;
    o.seed = seed;
    return o;
  }

  void run_train() const {
    const auto rows = open_circuit_rows(data);
    const auto dataset = make_dataset(rows);
    if (dataset.rows() == 0) throw InputError("no finished layouts to train on");
    const auto opts = mlp_options();
    const Hyper single = family == "mlp" ? Hyper{MlpHyper{hidden, opts.activation}}
                                         : Hyper{KnnHyper{k, p}};
    std::vector<Hyper> candidates = {single};
    if (grid) candidates = family == "mlp" ? mlp_grid() : knn_grid();

    json summary{{"rows", dataset.rows()}, {"dropped_timeouts", rows.size() - dataset.rows()}};
    double variance = (dataset.y.array() - dataset.y.mean()).square().mean();
    summary["target_variance"] = variance;
    if (cv > 0) {
      const auto r = cross_validate(dataset, candidates, cv, inner, opts, seed);
      summary["cv_folds"] = cv;
      summary["cv_mse_mean"] = r.mean_mse;
      summary["cv_mse_sd"] = r.sd_mse;
      std::cerr << "cv mse " << r.mean_mse << " +- " << r.sd_mse << " (target variance "
                << variance << ")\n";
    }
    Hyper chosen = single;
    if (candidates.size() > 1) {
      chosen = grid_search(dataset, candidates, inner, opts, seed).best;
    }
    const auto fitted = SurrogateModel::fit(dataset, chosen, opts);
    std::vector<std::string> names(kFeatureNames.begin(), kFeatureNames.end());
    fitted.save(out, names);
    summary["model"] = describe(chosen);
    summary["train_mse"] = mean_squared_error(fitted.predict(dataset.x), dataset.y);
    std::cout << summary.dump() << '\n';
    std::cerr << "trained " << describe(chosen) << " on " << dataset.rows() << " rows -> "
              << out << '\n';
  }

  void run_predict() const {
    const auto m = WrsCmd::load_model(model);
    const auto c = open_circuit(circuit);
    const auto prm = params.params();
    const auto fv = feature_vector(features(c), prm);
    json out{{"params", prm.to_string()}, {"predicted_ratio", m.predict(fv)}};
    std::cout << out.dump() << '\n';
  }
};

struct ReportCmd {
  std::string data, group_by = "config", metric = "ratio", param, out;
  std::size_t sample = 100;

  void add(CLI::App& root) {
    auto* app = root.add_subcommand("report", "Tables from sweep results");
    app->add_option("--data", data, "results.csv (or its .circuits.csv sidecar)")->required();
    app->add_option("--metric", metric, "ratio, count or rank")
        ->check(CLI::IsMember({"ratio", "count", "rank"}))
        ->capture_default_str();
    app->add_option("--group-by", group_by, "ratio: config, all or a parameter name")
        ->capture_default_str();
    app->add_option("--param", param, "count/rank: parameter to tally");
    app->add_option("--sample", sample, "count/rank: lowest configurations kept")
        ->capture_default_str();
    app->add_option("--out", out, "CSV output (default stdout)");
    app->callback([this] { run(); });
  }

  void run() const {
    const auto rows = open_circuit_rows(data);
    std::ostringstream table;
    if (metric == "ratio") {
      std::vector<ReportRow> r;
      try {
        r = report(rows, group_by);
      } catch (const std::invalid_argument& e) {
        throw UsageError(e.what());
      }
      write_report_csv(table, r);
      write_text(out, table.str());
      return;
    }
    if (param.empty()) throw UsageError("--param is required for count and rank");
    std::size_t k = 0;
    try {
      k = param_index(param);
    } catch (const std::invalid_argument& e) {
      throw UsageError(e.what());
    }
    std::map<std::size_t, std::set<int>> max_depths;  // per benchmark depth
    std::set<double> values;
    for (const auto& r : rows) {
      max_depths[r.benchmark_depth].insert(r.params.max_depth);
      values.insert(r.params.to_array()[k]);
    }
    if (metric == "count") {
      table << "benchmark_depth,max_depth,value,count,sample_size,configurations\n";
      for (const auto& [depth, mds] : max_depths) {
        for (int md : mds) {
          for (double v : values) {
            const auto c = count(rows, k, v, depth, md, sample);
            table << depth << ',' << md << ',' << format_double(v) << ',' << c.count << ','
                  << c.sample_size << ',' << c.configurations << '\n';
            if (c.short_slice() && v == *values.begin()) {
              std::cerr << "warning: slice depth=" << depth << " max_depth=" << md
                        << " has only " << c.configurations << " configurations\n";
            }
          }
        }
      }
    } else {
      table << "benchmark_depth,value,rank\n";
      for (const auto& [depth, mds] : max_depths) {
        for (double v : values) {
          std::size_t r = 0;
          try {
            r = rank(rows, k, v, depth, sample);
          } catch (const std::invalid_argument& e) {
            throw InputError(e.what());
          }
          table << depth << ',' << format_double(v) << ',' << r << '\n';
        }
      }
    }
    write_text(out, table.str());
  }
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"QXX initial placement and parameter search"};
  app.footer(kPresetHelp);
  app.require_subcommand(1);
  LayoutCmd layout;
  BenchCmd bench;
  SweepCmd sweep;
  WrsCmd wrs_cmd;
  SurrogateCmd surrogate;
  ReportCmd report_cmd;
  layout.add(app);
  bench.add(app);
  sweep.add(app);
  wrs_cmd.add(app);
  surrogate.add(app);
  report_cmd.add(app);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  } catch (const InputError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const CircuitParseError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const DeviceError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const ResultsFormatError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const TimeoutDominated& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 3;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
