#pragma once

#include <array>
#include <cstddef>
#include <string>
#include <string_view>

namespace qxx {

/// Names of the six placement parameters, in canonical order.
inline constexpr std::array<std::string_view, 6> kParamNames = {
    "max_depth", "max_children", "b", "c", "movement_factor", "edge_cost"};

/// Tunables of the QXX placement search.
struct QxxParams {
  int max_depth = 1;        ///< prune to the best path every max_depth levels
  int max_children = 1;     ///< children kept per expanded node
  double b = 0.0;           ///< Gaussian sharpness; 0 makes all gates count equally
  double c = 0.0;           ///< Gaussian centre over the gate sequence, in [0, 1]
  int movement_factor = 2;  ///< split of a gate's movement between its qubits
  double edge_cost = 1.0;   ///< uniform device edge weight

  /// Throws std::invalid_argument if any value lies outside its legal range.
  void validate() const;

  std::array<double, 6> to_array() const;
  static QxxParams from_array(const std::array<double, 6>& values);

  /// "MaxDepth,MaxChildren,B,C,MovementFactor,EdgeCost", e.g. "9,9,1.5,0.32,10,0.8".
  static QxxParams parse(std::string_view sextuple);
  std::string to_string() const;

  friend bool operator==(const QxxParams&, const QxxParams&) = default;
};

/// Index of a parameter name in kParamNames; accepts the CamelCase forms too.
std::size_t param_index(std::string_view name);

/// Shortest decimal text that round-trips to the same double.
std::string format_double(double value);

}  // namespace qxx
