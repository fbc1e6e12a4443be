#include <chrono>

#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "qxx/benchgen.hpp"
#include "qxx/circuit.hpp"
#include "qxx/device.hpp"
#include "qxx/features.hpp"
#include "qxx/optimizer.hpp"
#include "qxx/params.hpp"
#include "qxx/placer.hpp"
#include "qxx/router.hpp"
#include "qxx/surrogate.hpp"

namespace py = pybind11;
using namespace qxx;

namespace {

Circuit circuit_from_gates(std::size_t num_qubits,
                           const std::vector<std::pair<Qubit, Qubit>>& gates) {
  Circuit c(num_qubits);
  for (const auto& [a, b] : gates) c.add_cnot(a, b);
  return c;
}

py::list gate_list(const Circuit& c) {
  py::list out;
  for (const Gate& g : c) {
    if (g.kind == GateKind::swap) {
      out.append(py::make_tuple(g.control, g.target, "swap"));
    } else {
      out.append(py::make_tuple(g.control, g.target));
    }
  }
  return out;
}

py::dict trial_dict(const TrialRecord& t) {
  py::dict d;
  d["trial_index"] = t.trial_index;
  d["params"] = t.params;
  d["mean_ratio"] = t.mean_ratio;
  d["per_circuit_ratio"] = t.per_circuit_ratio;
  d["timeouts"] = t.timeout_count;
  d["wall_ms"] = t.wall_ms;
  return d;
}

py::dict search_dict(const SearchResult& r) {
  py::dict d;
  py::list history;
  for (const auto& t : r.history) history.append(trial_dict(t));
  d["history"] = history;
  d["best_index"] = r.best_index;
  d["incumbent_trace"] = r.incumbent_trace;
  if (r.weights) {
    d["weights"] = r.weights->weight;
    d["probabilities"] = r.weights->probability;
  }
  return d;
}

// Python objectives return a float (or None for a failed trial).
Objective python_objective(py::function f) {
  return [f](const QxxParams& p) {
    py::gil_scoped_acquire gil;
    TrialRecord r;
    r.params = p;
    const py::object value = f(p);
    if (!value.is_none()) {
      r.mean_ratio = value.cast<double>();
      r.per_circuit_ratio = {r.mean_ratio};
    } else {
      r.per_circuit_ratio = {std::nullopt};
      r.timeout_count = 1;
    }
    return r;
  };
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "QXX initial placement, routing and parameter search.";

  py::class_<Circuit>(m, "Circuit")
      .def(py::init(&circuit_from_gates), py::arg("num_qubits"), py::arg("gates"))
      .def_static("parse", &parse_circuit, py::arg("text"))
      .def_static("load", &load_circuit, py::arg("path"))
      .def("emit", &emit_circuit)
      .def("save", [](const Circuit& c, const std::string& path) { save_circuit(c, path); })
      .def_property_readonly("num_qubits", &Circuit::num_qubits)
      .def_property_readonly("gates", &gate_list)
      .def("__len__", &Circuit::size)
      .def("__eq__", [](const Circuit& a, const Circuit& b) { return a == b; })
      .def("__repr__", [](const Circuit& c) {
        return "<Circuit qubits=" + std::to_string(c.num_qubits()) +
               " gates=" + std::to_string(c.size()) + ">";
      });

  py::class_<Device>(m, "Device")
      .def(py::init<std::size_t, std::vector<std::pair<Register, Register>>, std::string>(),
           py::arg("num_registers"), py::arg("edges"), py::arg("name") = "")
      .def_static("load", &load_device, py::arg("name_or_path"),
                  "Built-in name (aspen16, grid4x4, chain:N, grid:RxC) or JSON file")
      .def_static("parse", &parse_device, py::arg("text"))
      .def("emit", &emit_device)
      .def_property_readonly("num_registers", &Device::num_registers)
      .def_property_readonly("edges", &Device::edges)
      .def_property_readonly("name", &Device::name)
      .def("hop", &Device::hop)
      .def("adjacent", &Device::adjacent)
      .def("dist", [](const Device& d, Register a, Register b, double edge_cost) {
        return dist(d, a, b, edge_cost);
      });

  py::class_<QxxParams>(m, "Params")
      .def(py::init([](int max_depth, int max_children, double b, double c,
                       int movement_factor, double edge_cost) {
             QxxParams p{max_depth, max_children, b, c, movement_factor, edge_cost};
             p.validate();
             return p;
           }),
           py::arg("max_depth") = 1, py::arg("max_children") = 1, py::arg("b") = 0.0,
           py::arg("c") = 0.0, py::arg("movement_factor") = 2, py::arg("edge_cost") = 1.0)
      .def_static("parse", &QxxParams::parse, py::arg("sextuple"))
      .def_readwrite("max_depth", &QxxParams::max_depth)
      .def_readwrite("max_children", &QxxParams::max_children)
      .def_readwrite("b", &QxxParams::b)
      .def_readwrite("c", &QxxParams::c)
      .def_readwrite("movement_factor", &QxxParams::movement_factor)
      .def_readwrite("edge_cost", &QxxParams::edge_cost)
      .def("to_list", &QxxParams::to_array)
      .def("__str__", &QxxParams::to_string)
      .def("__repr__", [](const QxxParams& p) { return "Params(" + p.to_string() + ")"; })
      .def("__eq__", [](const QxxParams& a, const QxxParams& b) { return a == b; });

  m.def("depth", &depth, py::arg("circuit"), py::arg("swap_weight") = 3);
  m.def("ratio", &ratio, py::arg("c_in"), py::arg("c_out"), py::arg("swap_weight") = 3);

  m.def(
      "gdepth",
      [](const Circuit& c, const std::vector<Register>& mapping, const Device& d,
         const QxxParams& p) {
        std::vector<Register> full = mapping;
        full.resize(c.num_qubits(), PartialMapping::kUnmapped);
        PartialMapping pm(c.num_qubits(), d.num_registers());
        for (Qubit q = 0; q < full.size(); ++q) {
          if (full[q] != PartialMapping::kUnmapped) pm.assign(q, full[q]);
        }
        return gdepth(c, pm, d, p);
      },
      py::arg("circuit"), py::arg("mapping"), py::arg("device"), py::arg("params"),
      "Cost estimate of a (possibly partial) mapping, qubit -> register.");

  m.def(
      "place",
      [](const Circuit& c, const Device& d, const QxxParams& p,
         std::optional<double> deadline_s, bool minimum_ties,
         std::size_t max_expansions) -> py::object {
        PlaceOptions o;
        o.retention = minimum_ties ? ChildRetention::minimum_ties : ChildRetention::lowest_cost;
        o.max_expansions = max_expansions;
        const auto deadline = deadline_s ? Deadline::after(std::chrono::duration<double>(
                                               *deadline_s))
                                         : Deadline::never();
        std::optional<Placement> placement;
        {
          py::gil_scoped_release release;
          placement = place(c, d, p, deadline, o);
        }
        if (!placement) return py::none();
        py::dict out;
        out["mapping"] = placement->mapping.assignment();
        out["cost"] = placement->cost;
        out["expanded_nodes"] = placement->expanded_nodes;
        return out;
      },
      py::arg("circuit"), py::arg("device"), py::arg("params"),
      py::arg("deadline") = py::none(), py::arg("minimum_ties") = false,
      py::arg("max_expansions") = 0,
      "Initial placement; returns None on timeout.");

  m.def(
      "route",
      [](const Circuit& c, const Device& d, const std::vector<Register>& mapping,
         std::uint64_t seed) {
        const auto routed =
            route(c, d, PartialMapping::complete(mapping, d.num_registers()), seed);
        return routed.circuit;
      },
      py::arg("circuit"), py::arg("device"), py::arg("mapping"), py::arg("seed") = 0,
      "SWAP-inserting router; returns the routed circuit over registers.");

  m.def(
      "verify",
      [](const Circuit& routed, const Circuit& original, const Device& d,
         const std::vector<Register>& mapping) {
        RoutedCircuit rc{routed, mapping, 0};
        const auto report = verify(rc, original, d);
        return py::make_tuple(report.ok, report.gate_index, report.message);
      },
      py::arg("routed"), py::arg("original"), py::arg("device"), py::arg("mapping"),
      "(ok, first bad gate index or None, message)");

  m.def(
      "generate",
      [](const Device& d, std::size_t target_depth, double density, std::uint64_t seed) {
        auto k = generate_known_optimal(d, target_depth, density, seed);
        return py::make_tuple(k.circuit, k.optimal_mapping, k.optimal_depth);
      },
      py::arg("device"), py::arg("target_depth"), py::arg("gate_density") = kDefaultGateDensity,
      py::arg("seed") = 0, "(circuit, optimal_mapping, optimal_depth)");

  m.def(
      "features",
      [](const Circuit& c) {
        const auto f = features(c);
        py::dict d;
        const auto values = f.to_array();
        for (std::size_t i = 0; i < values.size(); ++i) {
          d[py::str(std::string(kGraphFeatureNames[i]))] = values[i];
        }
        return d;
      },
      py::arg("circuit"));

  m.def("probabilities",
        [](const std::array<double, 6>& w) { return weights_to_probabilities(w).probability; },
        py::arg("weights"), "Change probabilities from importance weights.");

  m.def(
      "wrs",
      [](py::function objective, const std::string& space, std::size_t n0,
         std::size_t n_total, std::uint64_t seed) {
        WrsOptions o;
        o.n0 = n0;
        o.n_total = n_total;
        o.seed = seed;
        return search_dict(wrs(ParamSpace::named(space), python_objective(objective), o));
      },
      py::arg("objective"), py::arg("space") = "table3", py::arg("n0") = 550,
      py::arg("n_total") = 1500, py::arg("seed") = 0,
      "Weighted random search minimising objective(params).");

  m.def(
      "random_search",
      [](py::function objective, const std::string& space, std::size_t n_total,
         std::uint64_t seed) {
        return search_dict(
            random_search(ParamSpace::named(space), python_objective(objective), n_total, seed));
      },
      py::arg("objective"), py::arg("space") = "table3", py::arg("n_total") = 200,
      py::arg("seed") = 0);

  m.def("space_size", [](const std::string& name) { return ParamSpace::named(name).size(); },
        py::arg("name"));

  py::class_<SurrogateModel>(m, "Surrogate")
      .def_static("load", &SurrogateModel::load, py::arg("path"))
      .def(
          "predict",
          [](const SurrogateModel& s, const Circuit& c, const QxxParams& p) {
            return s.predict(feature_vector(features(c), p));
          },
          py::arg("circuit"), py::arg("params"))
      .def_property_readonly("description", [](const SurrogateModel& s) {
        return describe(s.hyper());
      });

  py::register_exception<CircuitParseError>(m, "CircuitParseError", PyExc_ValueError);
  py::register_exception<DeviceError>(m, "DeviceError", PyExc_ValueError);
}
