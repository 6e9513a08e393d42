// SPDX-License-Identifier: Apache-2.0
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "rwre/cascade.hpp"
#include "rwre/error.hpp"
#include "rwre/exponents.hpp"
#include "rwre/harness.hpp"
#include "rwre/propcheck.hpp"
#include "rwre/quenched.hpp"
#include "rwre/walk.hpp"

namespace py = pybind11;
using namespace rwre;

namespace {

// Reports go through the json module so Python sees plain dicts.
py::object to_py(const nlohmann::json& j) {
  return py::module_::import("json").attr("loads")(j.dump());
}

EnvSpec spec_from(int b, const std::vector<std::pair<double, double>>& atoms, bool critical) {
  std::vector<Atom> a;
  for (const auto& [v, p] : atoms) a.push_back({v, p});
  return critical ? make_critical_spec(b, std::move(a)) : make_env_spec(b, std::move(a));
}

}  // namespace

PYBIND11_MODULE(_rwre, m) {
  m.doc() = "Random walk in random environment on a b-ary tree";
  py::register_exception<Error>(m, "RwreError", PyExc_ValueError);

  py::class_<EnvSpec>(m, "EnvSpec")
      .def(py::init(&spec_from), py::arg("b"), py::arg("atoms"), py::arg("critical") = false)
      .def_property_readonly("b", &EnvSpec::b)
      .def_property_readonly("mean", &EnvSpec::mean)
      .def("to_dict", [](const EnvSpec& s) { return to_py(nlohmann::json(s)); })
      .def("__repr__", [](const EnvSpec& s) { return "EnvSpec(" + nlohmann::json(s).dump() + ")"; });

  m.def("classify", [](const EnvSpec& s) { return to_py(nlohmann::json(classify_regime(s))); });
  m.def("compute_p", &compute_p);
  m.def("compute_q", py::overload_cast<const EnvSpec&>(&compute_q));
  m.def("compute_kappa", [](const EnvSpec& s) { return compute_kappa(s).value; });
  m.def("moment", &moment_transform, py::arg("spec"), py::arg("t"));

  m.def(
      "simulate_walk",
      [](const EnvSpec& s, std::uint64_t env_seed, std::uint64_t walk_seed, std::uint64_t steps) {
        py::gil_scoped_release nogil;
        const WalkStats st = simulate_walk(s, env_seed, walk_seed, steps);
        std::vector<std::tuple<std::uint64_t, std::uint32_t, std::uint64_t>> cps;
        for (const auto& c : st.max_depth_checkpoints) cps.emplace_back(c.step, c.max_depth, c.returns);
        return std::make_tuple(cps, st.returns_to_root, st.final_depth);
      },
      py::arg("spec"), py::arg("env_seed"), py::arg("walk_seed"), py::arg("steps"),
      "Returns (checkpoints, returns_to_root, final_depth); checkpoints are (step, max_depth, returns).");
  m.def(
      "hitting_time",
      [](const EnvSpec& s, std::uint64_t env_seed, std::uint64_t walk_seed, std::uint32_t level,
         std::uint64_t cap) -> std::optional<std::uint64_t> {
        const HittingResult h = hitting_time(s, env_seed, walk_seed, level, cap);
        if (h.outcome != HitOutcome::kHit) return std::nullopt;
        return h.tau;
      },
      py::arg("spec"), py::arg("env_seed"), py::arg("walk_seed"), py::arg("level"), py::arg("cap"));

  m.def(
      "quenched",
      [](const EnvSpec& s, std::uint64_t env_seed, int depth, double lambda) {
        const QuenchedTree tree = materialize_tree(s, env_seed, depth);
        const BoundaryFunctions f = solve_boundary_functions(tree, lambda);
        py::dict d;
        d["expected_tau"] = expected_tau(tree);
        d["laplace_tau"] = laplace_tau(tree, f);
        d["alpha"] = f.alpha;
        d["beta"] = f.beta;
        d["gamma"] = f.gamma;
        return d;
      },
      py::arg("spec"), py::arg("env_seed"), py::arg("depth"), py::arg("lambda_") = 0.0);

  m.def("cascade_sample", [](const EnvSpec& s, std::uint64_t seed, int depth) {
    return cascade_sample(s, seed, depth).value;
  });
  m.def(
      "rde_means",
      [](const EnvSpec& s, double theta, std::size_t pool_size, int generations, std::uint64_t seed) {
        py::gil_scoped_release nogil;
        std::vector<double> out;
        for (const auto& st : rde_trajectory(s, theta, pool_size, generations, seed)) out.push_back(st.mean);
        return out;
      },
      py::arg("spec"), py::arg("theta"), py::arg("pool_size"), py::arg("generations"), py::arg("seed"));
  m.def(
      "mean_beta",
      [](const EnvSpec& s, int n, double lambda, std::size_t pool_size, std::uint64_t seed) {
        py::gil_scoped_release nogil;
        const MeanEstimate e = estimate_mean_beta(s, n, lambda, pool_size, seed);
        return std::make_pair(e.mean, e.se);
      },
      py::arg("spec"), py::arg("n"), py::arg("lambda_"), py::arg("pool_size"), py::arg("seed"));
  m.def("hill_tail_index", [](const std::vector<double>& x, std::size_t k) { return hill_tail_index(x, k); });

  m.def(
      "propcheck",
      [](std::uint64_t seed, std::uint64_t cases) { return to_py(nlohmann::json(run_propcheck_suite(seed, cases))); },
      py::arg("seed"), py::arg("cases") = 10000);
  m.def(
      "experiment",
      [](const EnvSpec& s, const std::vector<std::uint64_t>& grid, std::size_t replicas, std::uint64_t seed) {
        ScalingReport r;
        {
          py::gil_scoped_release nogil;
          r = run_scaling_experiment(s, grid, replicas, seed);
        }
        return to_py(nlohmann::json(r));
      },
      py::arg("spec"), py::arg("n_grid"), py::arg("replicas"), py::arg("seed"));
  m.def("fit_loglog_slope", [](const std::vector<std::pair<double, double>>& pts) {
    const LineFit f = fit_loglog_slope(pts);
    return std::make_tuple(f.slope, f.intercept, f.ci_halfwidth);
  });
}
