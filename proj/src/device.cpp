#include "qxx/device.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <limits>
#include <queue>
#include <sstream>

#include <json.hpp>

namespace qxx {

namespace {
constexpr std::size_t kUnreached = std::numeric_limits<std::size_t>::max();
}

Device::Device(std::size_t num_registers,
               std::vector<std::pair<Register, Register>> edges,
               std::string name)
    : num_registers_(num_registers),
      name_(std::move(name)),
      adjacency_(num_registers),
      hops_(num_registers * num_registers, kUnreached) {
  if (num_registers == 0) throw DeviceError("device has no registers");
  for (auto& [a, b] : edges) {
    if (a >= num_registers || b >= num_registers) {
      throw DeviceError("edge (" + std::to_string(a) + "," + std::to_string(b) +
                        ") references a missing register");
    }
    if (a == b) throw DeviceError("self-loop on register " + std::to_string(a));
    if (a > b) std::swap(a, b);
  }
  std::sort(edges.begin(), edges.end());
  edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
  edges_ = std::move(edges);
  for (const auto& [a, b] : edges_) {
    adjacency_[a].push_back(b);
    adjacency_[b].push_back(a);
  }
  for (auto& row : adjacency_) std::sort(row.begin(), row.end());

  // All-pairs BFS.
  std::queue<Register> frontier;
  for (Register src = 0; src < num_registers_; ++src) {
    std::size_t* row = &hops_[src * num_registers_];
    row[src] = 0;
    frontier.push(src);
    while (!frontier.empty()) {
      const Register u = frontier.front();
      frontier.pop();
      for (Register v : adjacency_[u]) {
        if (row[v] == kUnreached) {
          row[v] = row[u] + 1;
          frontier.push(v);
        }
      }
    }
    for (Register dst = 0; dst < num_registers_; ++dst) {
      if (row[dst] == kUnreached) {
        throw DeviceError("device graph is disconnected: no path from " +
                          std::to_string(src) + " to " + std::to_string(dst));
      }
    }
  }
}

std::size_t Device::diameter() const {
  return *std::max_element(hops_.begin(), hops_.end());
}

double dist(const Device& device, Register a, Register b, double edge_cost) {
  if (!(edge_cost > 0.0)) throw std::invalid_argument("edge_cost must be positive");
  const std::size_t h = device.hop(a, b);
  if (h <= 1) return 0.0;
  return static_cast<double>(h) * edge_cost;
}

Device linear_chain(std::size_t n) {
  std::vector<std::pair<Register, Register>> edges;
  for (Register i = 0; i + 1 < n; ++i) edges.emplace_back(i, i + 1);
  return Device(n, std::move(edges), "chain:" + std::to_string(n));
}

Device grid(std::size_t rows, std::size_t cols) {
  std::vector<std::pair<Register, Register>> edges;
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t c = 0; c < cols; ++c) {
      const Register here = r * cols + c;
      if (c + 1 < cols) edges.emplace_back(here, here + 1);
      if (r + 1 < rows) edges.emplace_back(here, here + cols);
    }
  }
  return Device(rows * cols, std::move(edges),
                "grid:" + std::to_string(rows) + "x" + std::to_string(cols));
}

Device two_octagons() {
  std::vector<std::pair<Register, Register>> edges;
  for (Register ring = 0; ring < 2; ++ring) {
    const Register base = ring * 8;
    for (Register i = 0; i < 8; ++i) {
      edges.emplace_back(base + i, base + (i + 1) % 8);
    }
  }
  // Bridges follow the Aspen layout (1-16, 2-15 in vendor numbering).
  edges.emplace_back(1, 14);
  edges.emplace_back(2, 13);
  return Device(16, std::move(edges), "aspen16");
}

namespace {

std::optional<std::size_t> to_size(std::string_view s) {
  std::size_t value = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc() || ptr != s.data() + s.size() || s.empty()) {
    return std::nullopt;
  }
  return value;
}

}  // namespace

std::optional<Device> builtin_device(std::string_view name) {
  if (name == "aspen16" || name == "two-octagons") return two_octagons();
  if (name == "grid4x4") return grid(4, 4);
  if (name.starts_with("chain:")) {
    if (auto n = to_size(name.substr(6)); n && *n > 0) return linear_chain(*n);
  }
  if (name.starts_with("grid:")) {
    const auto spec = name.substr(5);
    const auto x = spec.find('x');
    if (x != std::string_view::npos) {
      const auto r = to_size(spec.substr(0, x));
      const auto c = to_size(spec.substr(x + 1));
      if (r && c && *r > 0 && *c > 0) return grid(*r, *c);
    }
  }
  return std::nullopt;
}

Device parse_device(std::string_view text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text.begin(), text.end());
  } catch (const nlohmann::json::parse_error& e) {
    throw DeviceError(std::string("malformed device JSON: ") + e.what());
  }
  if (!doc.is_object() || !doc.contains("registers") || !doc.contains("edges") ||
      !doc["registers"].is_number_integer() || !doc["edges"].is_array()) {
    throw DeviceError("expected {\"registers\": int, \"edges\": [[i,j], ...]}");
  }
  const long long n = doc["registers"].get<long long>();
  if (n <= 0) throw DeviceError("'registers' must be positive");
  std::vector<std::pair<Register, Register>> edges;
  for (const auto& e : doc["edges"]) {
    if (!e.is_array() || e.size() != 2 || !e[0].is_number_integer() ||
        !e[1].is_number_integer() || e[0].get<long long>() < 0 ||
        e[1].get<long long>() < 0) {
      throw DeviceError("each edge must be a pair of nonnegative integers");
    }
    edges.emplace_back(e[0].get<Register>(), e[1].get<Register>());
  }
  return Device(static_cast<std::size_t>(n), std::move(edges),
                doc.value("name", std::string{}));
}

std::string emit_device(const Device& device) {
  nlohmann::ordered_json doc;
  doc["registers"] = device.num_registers();
  auto edges = nlohmann::ordered_json::array();
  for (const auto& [a, b] : device.edges()) edges.push_back({a, b});
  doc["edges"] = std::move(edges);
  if (!device.name().empty()) doc["name"] = device.name();
  return doc.dump();
}

Device load_device(const std::string& name_or_path) {
  if (auto d = builtin_device(name_or_path)) return *std::move(d);
  std::ifstream in(name_or_path);
  if (!in) {
    throw DeviceError("'" + name_or_path +
                      "' is neither a built-in device nor a readable file");
  }
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_device(buffer.str());
}

}  // namespace qxx
