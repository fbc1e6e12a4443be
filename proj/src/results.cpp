#include "qxx/results.hpp"

#include <charconv>
#include <chrono>
#include <istream>
#include <ostream>
#include <sstream>

namespace qxx {

namespace {

constexpr std::string_view kTrialHeader =
    "trial_index,max_depth,max_children,b,c,movement_factor,edge_cost,mean_ratio,"
    "timeouts,wall_ms";
constexpr std::string_view kCircuitHeader =
    "trial_index,circuit,benchmark_depth,max_depth,max_children,b,c,movement_factor,"
    "edge_cost,max_page_rank,nr_conn_comp,edges,nodes,efficiency,smetric,ratio,"
    "timed_out";

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> cells;
  std::string cell;
  std::istringstream s(line);
  while (std::getline(s, cell, ',')) cells.push_back(cell);
  if (!line.empty() && line.back() == ',') cells.emplace_back();
  return cells;
}

std::string trim_cr(std::string line) {
  if (!line.empty() && line.back() == '\r') line.pop_back();
  return line;
}

double parse_real(const std::string& cell, std::size_t line_no) {
  double v = 0.0;
  const auto* end = cell.data() + cell.size();
  auto [ptr, ec] = std::from_chars(cell.data(), end, v);
  if (ec != std::errc{} || ptr != end) {
    throw ResultsFormatError("line " + std::to_string(line_no) + ": bad number '" + cell +
                             "'");
  }
  return v;
}

std::size_t parse_count(const std::string& cell, std::size_t line_no) {
  std::size_t v = 0;
  const auto* end = cell.data() + cell.size();
  auto [ptr, ec] = std::from_chars(cell.data(), end, v);
  if (ec != std::errc{} || ptr != end) {
    throw ResultsFormatError("line " + std::to_string(line_no) + ": bad count '" + cell +
                             "'");
  }
  return v;
}

QxxParams parse_params(const std::vector<std::string>& cells, std::size_t first,
                       std::size_t line_no) {
  std::array<double, 6> v{};
  for (std::size_t k = 0; k < 6; ++k) v[k] = parse_real(cells[first + k], line_no);
  try {
    return QxxParams::from_array(v);
  } catch (const std::invalid_argument& e) {
    throw ResultsFormatError("line " + std::to_string(line_no) + ": " + e.what());
  }
}

void write_params(std::ostream& out, const QxxParams& p) {
  for (double v : p.to_array()) out << ',' << format_double(v);
}

void expect_header(std::istream& in, std::string_view header, std::string_view what) {
  std::string line;
  if (!std::getline(in, line) || trim_cr(line) != header) {
    throw ResultsFormatError("not a " + std::string(what) + " file (unexpected header)");
  }
}

}  // namespace

void write_trials_csv(std::ostream& out, std::span<const TrialRecord> trials, bool timing) {
  out << kTrialHeader << '\n';
  for (const auto& t : trials) {
    out << t.trial_index;
    write_params(out, t.params);
    out << ',' << (t.mean_ratio ? format_double(*t.mean_ratio) : "") << ','
        << t.timeout_count << ',' << (timing ? format_double(t.wall_ms) : "") << '\n';
  }
}

std::vector<TrialRecord> read_trials_csv(std::istream& in) {
  expect_header(in, kTrialHeader, "trial results");
  std::vector<TrialRecord> out;
  std::string line;
  for (std::size_t line_no = 2; std::getline(in, line); ++line_no) {
    line = trim_cr(line);
    if (line.empty()) continue;
    const auto cells = split(line);
    if (cells.size() != 10) {
      throw ResultsFormatError("line " + std::to_string(line_no) + ": expected 10 columns");
    }
    TrialRecord t;
    t.trial_index = parse_count(cells[0], line_no);
    t.params = parse_params(cells, 1, line_no);
    if (!cells[7].empty()) t.mean_ratio = parse_real(cells[7], line_no);
    t.timeout_count = parse_count(cells[8], line_no);
    if (!cells[9].empty()) t.wall_ms = parse_real(cells[9], line_no);
    out.push_back(std::move(t));
  }
  return out;
}

std::vector<CircuitResult> circuit_results(std::span<const TrialRecord> trials,
                                           std::span<const BenchCircuit> suite) {
  std::vector<GraphFeatures> graph;
  std::vector<std::size_t> depths;
  for (const auto& b : suite) {
    graph.push_back(features(b.circuit));
    depths.push_back(b.optimal_depth ? *b.optimal_depth : depth(b.circuit, 1));
  }
  std::vector<CircuitResult> rows;
  for (const auto& t : trials) {
    if (t.per_circuit_ratio.size() != suite.size()) {
      throw std::invalid_argument("circuit_results: trial does not match the suite");
    }
    for (std::size_t i = 0; i < suite.size(); ++i) {
      rows.push_back({t.trial_index, suite[i].name, depths[i], t.params, graph[i],
                      t.per_circuit_ratio[i]});
    }
  }
  return rows;
}

void write_circuits_csv(std::ostream& out, std::span<const CircuitResult> rows) {
  out << kCircuitHeader << '\n';
  for (const auto& r : rows) {
    if (r.circuit.find_first_of(",\"\n") != std::string::npos) {
      throw std::invalid_argument("circuit name '" + r.circuit + "' is not CSV-safe");
    }
    out << r.trial_index << ',' << r.circuit << ',' << r.benchmark_depth;
    write_params(out, r.params);
    for (double v : r.graph.to_array()) out << ',' << format_double(v);
    out << ',' << (r.ratio ? format_double(*r.ratio) : "") << ','
        << (r.timed_out() ? 1 : 0) << '\n';
  }
}

std::vector<CircuitResult> read_circuits_csv(std::istream& in) {
  expect_header(in, kCircuitHeader, "per-circuit results");
  std::vector<CircuitResult> out;
  std::string line;
  for (std::size_t line_no = 2; std::getline(in, line); ++line_no) {
    line = trim_cr(line);
    if (line.empty()) continue;
    const auto cells = split(line);
    if (cells.size() != 17) {
      throw ResultsFormatError("line " + std::to_string(line_no) + ": expected 17 columns");
    }
    CircuitResult r;
    r.trial_index = parse_count(cells[0], line_no);
    r.circuit = cells[1];
    r.benchmark_depth = parse_count(cells[2], line_no);
    r.params = parse_params(cells, 3, line_no);
    auto& g = r.graph;
    g.max_page_rank = parse_real(cells[9], line_no);
    g.nr_conn_comp = parse_real(cells[10], line_no);
    g.edges = parse_real(cells[11], line_no);
    g.nodes = parse_real(cells[12], line_no);
    g.efficiency = parse_real(cells[13], line_no);
    g.smetric = parse_real(cells[14], line_no);
    if (!cells[15].empty()) r.ratio = parse_real(cells[15], line_no);
    const bool flagged = parse_count(cells[16], line_no) != 0;
    if (flagged == r.ratio.has_value()) {
      throw ResultsFormatError("line " + std::to_string(line_no) +
                               ": ratio and timed_out disagree");
    }
    out.push_back(std::move(r));
  }
  return out;
}

std::string circuits_csv_path(const std::string& trials_path) {
  const auto slash = trials_path.find_last_of('/');
  const auto dot = trials_path.find_last_of('.');
  if (dot != std::string::npos && (slash == std::string::npos || dot > slash)) {
    return trials_path.substr(0, dot) + ".circuits" + trials_path.substr(dot);
  }
  return trials_path + ".circuits.csv";
}

Objective surrogate_objective(const SurrogateModel& model,
                              std::vector<GraphFeatures> circuits) {
  if (circuits.empty()) throw std::invalid_argument("surrogate_objective: no circuits");
  return [&model, circuits = std::move(circuits)](const QxxParams& p) {
    const auto start = std::chrono::steady_clock::now();
    TrialRecord r;
    r.params = p;
    double sum = 0.0;
    for (const auto& g : circuits) {
      const auto fv = feature_vector(g, p);
      const double y = model.predict(fv);
      r.per_circuit_ratio.push_back(y);
      sum += y;
    }
    r.mean_ratio = sum / static_cast<double>(circuits.size());
    r.wall_ms = std::chrono::duration<double, std::milli>(
                    std::chrono::steady_clock::now() - start)
                    .count();
    return r;
  };
}

Dataset make_dataset(std::span<const CircuitResult> rows) {
  std::size_t n = 0;
  for (const auto& r : rows) n += r.ratio ? 1 : 0;
  Dataset d;
  d.x.resize(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(kFeatureNames.size()));
  d.y.resize(static_cast<Eigen::Index>(n));
  Eigen::Index i = 0;
  for (const auto& r : rows) {
    if (!r.ratio) continue;
    const auto fv = feature_vector(r.graph, r.params);
    for (std::size_t j = 0; j < fv.size(); ++j) d.x(i, static_cast<Eigen::Index>(j)) = fv[j];
    d.y(i) = *r.ratio;
    ++i;
  }
  return d;
}

}  // namespace qxx
