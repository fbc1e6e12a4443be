#include "qxx/benchgen.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <numeric>
#include <random>
#include <sstream>

#include <json.hpp>

#include "qxx/seeding.hpp"

namespace qxx {

namespace fs = std::filesystem;

KnownOptimalCircuit generate_known_optimal(const Device& device,
                                           std::size_t target_depth,
                                           double gate_density,
                                           std::uint64_t seed) {
  if (target_depth == 0) throw std::invalid_argument("target_depth must be >= 1");
  if (!(gate_density > 0.0 && gate_density <= 1.0)) {
    throw std::invalid_argument("gate_density must lie in (0, 1]");
  }
  const auto& edges = device.edges();
  if (edges.empty()) {
    throw DeviceError("device has no edges; no gate layer can be formed");
  }
  const std::size_t n = device.num_registers();
  const std::size_t per_layer = std::max<std::size_t>(
      1, static_cast<std::size_t>(std::lround(gate_density * static_cast<double>(n / 2))));

  std::mt19937_64 rng(seed);
  std::vector<Register> connected;
  for (Register r = 0; r < n; ++r) {
    if (!device.neighbors(r).empty()) connected.push_back(r);
  }
  const Register spine =
      connected[std::uniform_int_distribution<std::size_t>(0, connected.size() - 1)(rng)];

  std::bernoulli_distribution flip(0.5);
  std::vector<std::pair<Register, Register>> shuffled = edges;
  std::vector<Gate> register_gates;
  std::vector<bool> busy(n);
  for (std::size_t layer = 0; layer < target_depth; ++layer) {
    std::fill(busy.begin(), busy.end(), false);
    std::size_t placed = 0;
    auto take = [&](Register a, Register b) {
      busy[a] = busy[b] = true;
      if (flip(rng)) std::swap(a, b);
      register_gates.push_back({a, b, GateKind::cnot});
      ++placed;
    };
    const auto& around = device.neighbors(spine);
    take(spine, around[std::uniform_int_distribution<std::size_t>(0, around.size() - 1)(rng)]);
    std::shuffle(shuffled.begin(), shuffled.end(), rng);
    for (const auto& [a, b] : shuffled) {
      if (placed >= per_layer) break;
      if (!busy[a] && !busy[b]) take(a, b);
    }
  }

  std::vector<Register> mapping(n);
  std::iota(mapping.begin(), mapping.end(), Register{0});
  std::shuffle(mapping.begin(), mapping.end(), rng);
  std::vector<Qubit> qubit_at(n);
  for (Qubit q = 0; q < n; ++q) qubit_at[mapping[q]] = q;

  KnownOptimalCircuit out{Circuit(n), std::move(mapping), target_depth};
  for (const Gate& g : register_gates) {
    out.circuit.add_cnot(qubit_at[g.control], qubit_at[g.target]);
  }
  return out;
}

std::vector<BenchCircuit> generate_suite(const Device& device, const SuiteSpec& spec) {
  std::vector<BenchCircuit> suite;
  for (std::size_t d : spec.depths) {
    for (std::size_t i = 0; i < spec.per_depth; ++i) {
      auto k = generate_known_optimal(device, d, spec.gate_density,
                                      derive_seed(spec.seed, {d, i}));
      char name[64];
      std::snprintf(name, sizeof name, "q%zu_d%03zu_%02zu", device.num_registers(), d, i);
      suite.push_back({name, std::move(k.circuit), k.optimal_depth,
                       std::move(k.optimal_mapping)});
    }
  }
  return suite;
}

std::vector<std::size_t> parse_depth_list(const std::string& text) {
  auto number = [&](const std::string& s) -> std::size_t {
    std::size_t used = 0;
    unsigned long long v = 0;
    try {
      v = std::stoull(s, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != s.size() || s.empty() || s[0] == '-') {
      throw std::invalid_argument("bad depth list '" + text + "'");
    }
    return static_cast<std::size_t>(v);
  };
  std::vector<std::size_t> out;
  const auto dots = text.find("..");
  if (dots != std::string::npos) {
    const auto colon = text.find(':', dots);
    const std::size_t lo = number(text.substr(0, dots));
    const std::size_t hi = number(text.substr(dots + 2, colon == std::string::npos
                                                            ? std::string::npos
                                                            : colon - dots - 2));
    const std::size_t step =
        colon == std::string::npos ? 1 : number(text.substr(colon + 1));
    if (step == 0 || lo > hi) throw std::invalid_argument("bad depth range '" + text + "'");
    for (std::size_t d = lo; d <= hi; d += step) out.push_back(d);
  } else {
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(number(item));
  }
  if (out.empty() || std::find(out.begin(), out.end(), 0u) != out.end()) {
    throw std::invalid_argument("depth list must contain positive depths");
  }
  return out;
}

void write_suite(const std::vector<BenchCircuit>& suite, const std::string& dir) {
  fs::create_directories(dir);
  for (const auto& b : suite) {
    save_circuit(b.circuit, (fs::path(dir) / (b.name + ".json")).string());
    if (b.optimal_mapping || b.optimal_depth) {
      nlohmann::ordered_json side;
      if (b.optimal_mapping) side["optimal_mapping"] = *b.optimal_mapping;
      if (b.optimal_depth) side["optimal_depth"] = *b.optimal_depth;
      std::ofstream out(fs::path(dir) / (b.name + ".opt.json"));
      if (!out) throw std::runtime_error("cannot write sidecar for " + b.name);
      out << side.dump() << '\n';
    }
  }
}

std::vector<BenchCircuit> read_suite(const std::string& dir) {
  if (!fs::is_directory(dir)) throw std::runtime_error("no suite directory " + dir);
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(dir)) {
    const auto name = entry.path().filename().string();
    if (entry.is_regular_file() && name.ends_with(".json") &&
        !name.ends_with(".opt.json")) {
      files.push_back(entry.path());
    }
  }
  std::sort(files.begin(), files.end());
  std::vector<BenchCircuit> suite;
  for (const auto& path : files) {
    BenchCircuit b;
    b.name = path.stem().string();
    b.circuit = load_circuit(path.string());
    const auto side_path = path.parent_path() / (b.name + ".opt.json");
    if (fs::exists(side_path)) {
      std::ifstream in(side_path);
      nlohmann::json side;
      try {
        side = nlohmann::json::parse(in);
      } catch (const nlohmann::json::parse_error& e) {
        throw CircuitParseError(ParseErrorKind::malformed_json,
                                side_path.string() + ": " + e.what());
      }
      if (side.contains("optimal_depth")) {
        b.optimal_depth = side["optimal_depth"].get<std::size_t>();
      }
      if (side.contains("optimal_mapping")) {
        b.optimal_mapping = side["optimal_mapping"].get<std::vector<Register>>();
      }
    }
    suite.push_back(std::move(b));
  }
  if (suite.empty()) throw std::runtime_error("suite directory " + dir + " has no circuits");
  return suite;
}

}  // namespace qxx
