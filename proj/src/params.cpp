#include "qxx/params.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <stdexcept>
#include <vector>

namespace qxx {

namespace {

void check_range(std::string_view name, double value, double lo, double hi) {
  if (!std::isfinite(value) || value < lo || value > hi) {
    throw std::invalid_argument(std::string(name) + " = " + format_double(value) +
                                " outside [" + format_double(lo) + ", " +
                                format_double(hi) + "]");
  }
}

int to_int_param(std::string_view name, double value) {
  if (std::nearbyint(value) != value) {
    throw std::invalid_argument(std::string(name) + " must be an integer");
  }
  return static_cast<int>(value);
}

}  // namespace

void QxxParams::validate() const {
  check_range("max_depth", max_depth, 1, 55);
  check_range("max_children", max_children, 1, 55);
  check_range("b", b, 0.0, 500.0);
  check_range("c", c, 0.0, 1.0);
  check_range("movement_factor", movement_factor, 1, 55);
  // Tolerate grid arithmetic noise at the lower edge (0.1 is not exact).
  check_range("edge_cost", edge_cost, 0.1 - 1e-12, 1.0 + 1e-12);
}

std::array<double, 6> QxxParams::to_array() const {
  return {static_cast<double>(max_depth), static_cast<double>(max_children), b, c,
          static_cast<double>(movement_factor), edge_cost};
}

QxxParams QxxParams::from_array(const std::array<double, 6>& v) {
  QxxParams p;
  p.max_depth = to_int_param("max_depth", v[0]);
  p.max_children = to_int_param("max_children", v[1]);
  p.b = v[2];
  p.c = v[3];
  p.movement_factor = to_int_param("movement_factor", v[4]);
  p.edge_cost = v[5];
  return p;
}

QxxParams QxxParams::parse(std::string_view text) {
  std::array<double, 6> values{};
  std::size_t count = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t comma = text.find(',', pos);
    if (comma == std::string_view::npos) comma = text.size();
    auto field = text.substr(pos, comma - pos);
    while (!field.empty() && std::isspace(static_cast<unsigned char>(field.front()))) {
      field.remove_prefix(1);
    }
    while (!field.empty() && std::isspace(static_cast<unsigned char>(field.back()))) {
      field.remove_suffix(1);
    }
    if (count == values.size()) {
      throw std::invalid_argument("expected 6 comma-separated parameters");
    }
    double value = 0.0;
    const auto [ptr, ec] =
        std::from_chars(field.data(), field.data() + field.size(), value);
    if (field.empty() || ec != std::errc() || ptr != field.data() + field.size()) {
      throw std::invalid_argument("bad parameter value '" + std::string(field) + "'");
    }
    values[count++] = value;
    pos = comma + 1;
  }
  if (count != values.size()) {
    throw std::invalid_argument("expected 6 comma-separated parameters, got " +
                                std::to_string(count));
  }
  return from_array(values);
}

std::string QxxParams::to_string() const {
  std::string out;
  for (double v : to_array()) {
    if (!out.empty()) out += ',';
    out += format_double(v);
  }
  return out;
}

std::size_t param_index(std::string_view name) {
  std::string key;
  for (char ch : name) {
    if (std::isupper(static_cast<unsigned char>(ch)) && !key.empty() &&
        key.back() != '_') {
      key += '_';
    }
    key += static_cast<char>(std::tolower(static_cast<unsigned char>(ch)));
  }
  std::replace(key.begin(), key.end(), '-', '_');
  if (key == "max_child") key = "max_children";
  if (key == "mov_factor" || key == "mf") key = "movement_factor";
  const auto it = std::find(kParamNames.begin(), kParamNames.end(), key);
  if (it == kParamNames.end()) {
    throw std::invalid_argument("unknown parameter '" + std::string(name) + "'");
  }
  return static_cast<std::size_t>(it - kParamNames.begin());
}

std::string format_double(double value) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value);
  if (ec != std::errc()) return "nan";
  return std::string(buf, ptr);
}

}  // namespace qxx
