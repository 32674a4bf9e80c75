#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "coopnet/engine.hpp"
#include "coopnet/experiments.hpp"
#include "coopnet/game.hpp"
#include "coopnet/graph.hpp"
#include "coopnet/update.hpp"

namespace py = pybind11;
using namespace coopnet;

namespace {

StrategyVector to_strategies(const std::vector<int>& values) {
  StrategyVector out;
  out.reserve(values.size());
  for (int v : values) {
    if (v != 0 && v != 1) throw py::value_error("strategies must be 0 (C) or 1 (D)");
    out.push_back(static_cast<Strategy>(v));
  }
  return out;
}

std::vector<int> from_strategies(const StrategyVector& s) {
  std::vector<int> out;
  out.reserve(s.size());
  for (auto v : s) out.push_back(static_cast<int>(v));
  return out;
}

UpdateRule make_rule(const std::string& kind, double beta, double alpha, double exponent) {
  if (kind == "democratic") return UpdateRule::democratic(beta, alpha);
  if (kind == "learning") return UpdateRule::learning(exponent, alpha);
  throw py::value_error("rule must be 'democratic' or 'learning'");
}

ExperimentSpec make_spec(const py::kwargs& kw) {
  ExperimentSpec spec;
  std::string rule = "democratic";
  double beta = 1.0, alpha = kInfiniteAlpha;
  for (auto item : kw) {
    const auto key = item.first.cast<std::string>();
    auto v = item.second;
    if (key == "model") spec.growth.model = parse_growth_model(v.cast<std::string>());
    else if (key == "L") spec.growth.links_per_node = v.cast<int>();
    else if (key == "rule") rule = v.cast<std::string>();
    else if (key == "beta") beta = v.cast<double>();
    else if (key == "alpha") alpha = v.cast<double>();
    else if (key == "a") spec.learning_exponent = v.cast<double>();
    else if (key == "r_grid") spec.r_grid = v.cast<std::vector<double>>();
    else if (key == "r") spec.r = v.cast<double>();
    else if (key == "realizations") spec.realizations = v.cast<std::size_t>();
    else if (key == "n") spec.growth_fraction = v.cast<double>();
    else if (key == "P_m") spec.mutation_prob = v.cast<double>();
    else if (key == "N_i") spec.initial_size = v.cast<std::size_t>();
    else if (key == "N_max") spec.max_size = v.cast<std::size_t>();
    else if (key == "N") spec.static_size = v.cast<std::size_t>();
    else if (key == "window") spec.window_fraction = v.cast<double>();
    else if (key == "initial_sizes") spec.initial_sizes = v.cast<std::vector<std::size_t>>();
    else if (key == "transient") spec.transient = v.cast<std::size_t>();
    else if (key == "measure") spec.measure = v.cast<std::size_t>();
    else if (key == "generations") spec.generations = v.cast<std::size_t>();
    else if (key == "seed") spec.seed = v.cast<std::uint64_t>();
    else if (key == "threads") spec.threads = v.cast<unsigned>();
    else throw py::type_error("unknown experiment parameter: " + key);
  }
  spec.rule = make_rule(rule, beta, alpha, spec.learning_exponent);
  return spec;
}

py::list sweep_rows(const SweepTable& table) {
  py::list out;
  for (const auto& row : table) {
    py::dict d;
    d["r"] = row.r;
    d["mean_c"] = row.mean_c;
    d["std_c"] = row.std_c;
    d["realizations"] = row.realizations;
    d["extinct_frac"] = row.extinct_frac;
    out.append(d);
  }
  return out;
}

py::list profile_rows(const DegreeProfile& profile) {
  py::list out;
  for (const auto& bin : profile.bins) {
    py::dict d;
    d["k_lo"] = bin.lo;
    d["k_hi"] = bin.hi;
    d["samples"] = bin.samples;
    d["frac_defect"] = bin.frac_defect();
    out.append(d);
  }
  return out;
}

}  // namespace

PYBIND11_MODULE(_coopnet, m) {
  m.doc() = "Evolutionary prisoner's dilemma on growing networks";

  py::class_<Network>(m, "Network")
      .def(py::init<>())
      .def_static("clique", &Network::clique, py::arg("nodes"))
      .def_property_readonly("node_count", &Network::node_count)
      .def_property_readonly("edge_count", &Network::edge_count)
      .def("degree", &Network::degree)
      .def("degrees",
           [](const Network& net) {
             std::vector<std::size_t> out(net.node_count());
             for (NodeId i = 0; i < net.node_count(); ++i) out[i] = net.degree(i);
             return out;
           })
      .def("neighbors",
           [](const Network& net, NodeId node) {
             if (node >= net.node_count()) throw py::index_error("node out of range");
             auto span = net.neighbors(node);
             return std::vector<NodeId>(span.begin(), span.end());
           })
      .def("has_edge", &Network::has_edge)
      .def("add_node", &Network::add_isolated_node)
      .def("add_edge", &Network::try_add_edge)
      .def("edges",
           [](const Network& net) {
             std::vector<std::pair<NodeId, NodeId>> out;
             auto ep = net.endpoints();
             for (std::size_t k = 0; k + 1 < ep.size(); k += 2) out.emplace_back(ep[k], ep[k + 1]);
             return out;
           });

  m.def(
      "grow_network",
      [](const std::string& model, int L, std::size_t nodes, std::uint64_t seed) {
        GrowthSpec spec{parse_growth_model(model), L};
        spec.validate();
        RandomStream rng(seed);
        return grow_network(spec, nodes, rng);
      },
      py::arg("model"), py::arg("L"), py::arg("nodes"), py::arg("seed") = 1);

  m.def(
      "edge_list",
      [](const Network& net, const std::string& model, int L, std::uint64_t seed) {
        std::ostringstream out;
        write_edge_list(out, net, {parse_growth_model(model), L}, seed);
        return out.str();
      },
      py::arg("network"), py::arg("model"), py::arg("L"), py::arg("seed"));

  m.def(
      "play_round",
      [](const Network& net, const std::vector<int>& s, double b, double c) {
        return play_round(net, to_strategies(s), {b, c});
      },
      py::arg("network"), py::arg("strategies"), py::arg("b"), py::arg("c") = 1.0);

  m.def("leaf_defector_threshold", &leaf_defector_threshold, py::arg("k"));

  m.def(
      "split_neighborhood",
      [](const Network& net, const std::vector<double>& payoffs, const std::vector<int>& s,
         NodeId node) {
        auto split = split_neighborhood(net, payoffs, to_strategies(s), node);
        py::dict d;
        d["count_o"] = split.count_o;
        d["count_s"] = split.count_s;
        d["sum_o"] = split.sum_o;
        d["sum_s"] = split.sum_s;
        return d;
      },
      py::arg("network"), py::arg("payoffs"), py::arg("strategies"), py::arg("node"));

  m.def(
      "transition_probabilities",
      [](const Network& net, const std::vector<int>& s, double b, double c,
         const std::string& rule, double beta, double alpha, double a) {
        const auto strategies = to_strategies(s);
        const auto payoffs = play_round(net, strategies, {b, c});
        const auto update = make_rule(rule, beta, alpha, a);
        update.validate();
        std::vector<double> out(net.node_count());
        for (NodeId i = 0; i < net.node_count(); ++i) {
          out[i] = transition_probability(split_neighborhood(net, payoffs, strategies, i), update);
        }
        return out;
      },
      py::arg("network"), py::arg("strategies"), py::arg("b"), py::arg("c") = 1.0,
      py::arg("rule") = "democratic", py::arg("beta") = 1.0, py::arg("alpha") = kInfiniteAlpha,
      py::arg("a") = 2.0);

  m.def(
      "synchronous_generation",
      [](const Network& net, const std::vector<int>& s, double b, double c,
         const std::string& rule, double beta, double alpha, double a, std::uint64_t seed) {
        RandomStream rng(seed);
        return from_strategies(synchronous_generation(net, to_strategies(s), {b, c},
                                                      make_rule(rule, beta, alpha, a), rng));
      },
      py::arg("network"), py::arg("strategies"), py::arg("b"), py::arg("c") = 1.0,
      py::arg("rule") = "democratic", py::arg("beta") = 1.0, py::arg("alpha") = kInfiniteAlpha,
      py::arg("a") = 2.0, py::arg("seed") = 1);

  m.def("run_grow", [](py::kwargs kw) { return sweep_rows(run_grow_no_mutation(make_spec(kw))); });
  m.def("run_static", [](py::kwargs kw) { return sweep_rows(run_static_mutation(make_spec(kw))); });
  m.def("run_grow_mut",
        [](py::kwargs kw) { return sweep_rows(run_grow_with_mutation(make_spec(kw))); });
  m.def("run_fixation", [](py::kwargs kw) {
    py::list out;
    for (const auto& row : run_fixation(make_spec(kw))) {
      py::dict d;
      d["N_i"] = row.initial_size;
      d["P_f"] = row.p_fix;
      d["M"] = row.runs;
      d["M_c"] = row.cooperative;
      out.append(d);
    }
    return out;
  });
  m.def("run_timeseries", [](py::kwargs kw) {
    py::list out;
    for (const auto& p : run_time_series(make_spec(kw))) {
      py::dict d;
      d["generation"] = p.generation;
      d["N"] = p.nodes;
      d["frac_coop"] = p.frac_coop;
      out.append(d);
    }
    return out;
  });
  m.def("run_degree_profile",
        [](py::kwargs kw) { return profile_rows(run_degree_profile(make_spec(kw))); });
  m.def("top_decile_defect_fraction", [](py::kwargs kw) {
    return run_degree_profile(make_spec(kw)).top_decile_defect_fraction();
  });

  m.def(
      "estimate_rc",
      [](const std::vector<std::pair<double, double>>& curve, double threshold)
          -> std::optional<std::pair<double, double>> {
        SweepTable table;
        for (auto [r, c] : curve) table.push_back({r, c, 0.0, 0, 0.0});
        auto est = estimate_rc(table, threshold);
        if (!est) return std::nullopt;
        return std::make_pair(est->grid_r, est->interpolated_r);
      },
      py::arg("curve"), py::arg("threshold") = 0.5);

  py::register_exception<EdgePlacementError>(m, "EdgePlacementError", PyExc_RuntimeError);
  py::register_exception<SimulationError>(m, "SimulationError", PyExc_RuntimeError);
  m.attr("__version__") = "0.1.0";
}
