#include <pybind11/eigen.h>
#include <pybind11/functional.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include <sstream>

#include "madm/dpsm.hpp"
#include "madm/experiments.hpp"
#include "madm/solver.hpp"

namespace py = pybind11;
using namespace madm;

namespace {

// Trace rows as one numpy column per CSV field.
py::dict trace_to_dict(const std::vector<IterationTrace>& trace) {
  const auto n = static_cast<py::ssize_t>(trace.size());
  py::array_t<long> k(n);
  auto kv = k.mutable_unchecked<1>();
  for (py::ssize_t r = 0; r < n; ++r) kv(r) = trace[r].k;
  py::dict out;
  out["k"] = k;
  auto column = [&](const char* name, double IterationTrace::*field) {
    py::array_t<double> col(n);
    auto cv = col.mutable_unchecked<1>();
    for (py::ssize_t r = 0; r < n; ++r) cv(r) = trace[r].*field;
    out[name] = col;
  };
  column("mse", &IterationTrace::mse);
  column("mse_raw", &IterationTrace::mse_raw);
  column("psi", &IterationTrace::psi);
  column("aug_lagrangian", &IterationTrace::aug_lagrangian);
  column("consensus_residual", &IterationTrace::consensus_residual);
  column("dx", &IterationTrace::dx);
  column("dz", &IterationTrace::dz);
  column("dbeta", &IterationTrace::dbeta);
  column("dlambda", &IterationTrace::dlambda);
  column("lemma2_lhs", &IterationTrace::lemma2_lhs);
  column("lemma2_rhs", &IterationTrace::lemma2_rhs);
  column("wall_time", &IterationTrace::wall_time);
  return out;
}

std::string trace_to_csv(const std::vector<IterationTrace>& trace) {
  std::ostringstream out;
  write_trace_csv(out, trace);
  return out.str();
}

}  // namespace

PYBIND11_MODULE(_madm, m) {
  m.doc() = "Moreau-envelope ADMM and a projected subgradient baseline";

  auto base_error = py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
  py::register_exception<InvalidArgument>(m, "InvalidArgument", PyExc_ValueError);
  py::register_exception<NumericalError>(m, "NumericalError", base_error);
  py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);

  // Graphs
  py::class_<CommGraph>(m, "CommGraph")
      .def(py::init([](int n, const std::vector<std::pair<int, int>>& edges) {
             std::vector<Edge> e;
             for (auto [i, j] : edges) e.push_back({i, j});
             return CommGraph(n, std::move(e));
           }),
           py::arg("num_agents"), py::arg("edges"))
      .def_property_readonly("num_agents", &CommGraph::num_agents)
      .def_property_readonly("num_edges", &CommGraph::num_edges)
      .def_property_readonly("edges",
                             [](const CommGraph& g) {
                               std::vector<std::pair<int, int>> out;
                               for (const Edge& e : g.edges()) out.emplace_back(e.i, e.j);
                               return out;
                             })
      .def("neighbors", [](const CommGraph& g, int i) {
        auto nb = g.neighbors(i);
        return std::vector<int>(nb.begin(), nb.end());
      })
      .def("degree", &CommGraph::degree)
      .def_property_readonly("min_degree", &CommGraph::min_degree)
      .def_property_readonly("max_degree", &CommGraph::max_degree)
      .def("edge_index", &CommGraph::edge_index);
  m.def("erdos_renyi", &erdos_renyi, py::arg("num_agents"), py::arg("p"), py::arg("seed"));
  m.def("default_edge_probability", &default_edge_probability);
  m.def("is_connected", &is_connected);
  m.def("metropolis_weights", &metropolis_weights);
  m.def("save_graph", &save_graph);
  m.def("load_graph", &load_graph);

  // Problems
  py::class_<Problem>(m, "Problem")
      .def_property_readonly("num_agents", &Problem::num_agents)
      .def_property_readonly("dimension", &Problem::dimension)
      .def("value", &Problem::value, py::arg("agent"), py::arg("x"))
      .def("subgradient", &Problem::subgradient, py::arg("agent"), py::arg("x"))
      .def("prox", &Problem::prox, py::arg("agent"), py::arg("w"), py::arg("gamma"))
      .def("weak_convexity_bound", &Problem::weak_convexity_bound)
      .def("max_weak_convexity_bound", &Problem::max_weak_convexity_bound);
  py::class_<PhaseRetrievalInstance, Problem>(m, "PhaseRetrievalInstance")
      .def(py::init<Matrix, Vector, Vector>(), py::arg("measurements"), py::arg("observations"),
           py::arg("ground_truth"))
      .def_static("generate", &PhaseRetrievalInstance::generate, py::arg("num_agents"),
                  py::arg("dimension"), py::arg("seed"))
      .def_property_readonly("measurements", &PhaseRetrievalInstance::measurements)
      .def_property_readonly("observations", &PhaseRetrievalInstance::observations)
      .def_property_readonly("ground_truth", &PhaseRetrievalInstance::ground_truth);
  py::class_<QuadraticConsensusInstance, Problem>(m, "QuadraticConsensusInstance")
      .def(py::init<Matrix, double>(), py::arg("centers"), py::arg("curvature") = 1.0)
      .def_static("generate", &QuadraticConsensusInstance::generate, py::arg("num_agents"),
                  py::arg("dimension"), py::arg("curvature"), py::arg("seed"))
      .def_property_readonly("centers", &QuadraticConsensusInstance::centers)
      .def("optimum", &QuadraticConsensusInstance::optimum);
  py::class_<ZeroProblem, Problem>(m, "ZeroProblem").def(py::init<int, int>());
  m.def("phase_retrieval_prox_scalar", &phase_retrieval_prox_scalar, py::arg("c"), py::arg("b"),
        py::arg("gamma"), py::arg("s"));
  m.def("moreau_envelope", &moreau_envelope, py::arg("problem"), py::arg("agent"), py::arg("w"),
        py::arg("gamma"));
  m.def("moreau_gradient", &moreau_gradient, py::arg("problem"), py::arg("agent"), py::arg("w"),
        py::arg("gamma"));
  m.def("save_phase_retrieval", &save_phase_retrieval);
  m.def("load_phase_retrieval", &load_phase_retrieval);

  // Solver state and parameters
  py::enum_<WeakConvexityConvention>(m, "WeakConvexityConvention")
      .value("HALF_RHO", WeakConvexityConvention::kHalfRho)
      .value("FULL_RHO", WeakConvexityConvention::kFullRho);
  py::class_<MadmParams>(m, "MadmParams")
      .def(py::init<>())
      .def_readwrite("rho_lambda", &MadmParams::rho_lambda)
      .def_readwrite("rho_beta", &MadmParams::rho_beta)
      .def_readwrite("eta", &MadmParams::eta)
      .def_readwrite("rho_f", &MadmParams::rho_f)
      .def_readwrite("gate_convention", &MadmParams::gate_convention)
      .def_readwrite("max_iters", &MadmParams::max_iters)
      .def_readwrite("tol", &MadmParams::tol)
      .def("validate", &MadmParams::validate);
  py::class_<MadmState>(m, "MadmState")
      .def(py::init<>())
      .def_static("from_edge_init", &MadmState::from_edge_init)
      .def_static("from_common_init", &MadmState::from_common_init)
      .def_readwrite("x", &MadmState::x)
      .def_readwrite("z", &MadmState::z)
      .def_readwrite("beta", &MadmState::beta)
      .def_readwrite("lambda_i", &MadmState::lambda_i)
      .def_readwrite("lambda_j", &MadmState::lambda_j)
      .def_readwrite("k", &MadmState::k)
      .def_readwrite("prev_beta_change", &MadmState::prev_beta_change);
  m.def("save_checkpoint", &save_checkpoint);
  m.def("load_checkpoint", &load_checkpoint);

  py::class_<GateCondition>(m, "GateCondition")
      .def_readonly("satisfied", &GateCondition::satisfied)
      .def_readonly("margin", &GateCondition::margin);
  py::class_<GateReport>(m, "GateReport")
      .def_readonly("cond_prox", &GateReport::cond_prox)
      .def_readonly("cond_eta", &GateReport::cond_eta)
      .def_readonly("cond_ratio", &GateReport::cond_ratio)
      .def_readonly("overall", &GateReport::overall)
      .def("__str__", &format_gate);
  m.def("theorem1_gate", &theorem1_gate, py::arg("params"), py::arg("graph"));

  m.def("eval_aug_lagrangian", &eval_aug_lagrangian);
  m.def("eval_psi", &eval_psi);
  m.def("mse", &mse, py::arg("xs"), py::arg("x_true"));
  m.def("mse_raw", &mse_raw, py::arg("xs"), py::arg("x_true"));
  m.def("consensus_residual", &consensus_residual);

  py::class_<StepRecord>(m, "StepRecord")
      .def_readonly("dx", &StepRecord::dx)
      .def_readonly("dz", &StepRecord::dz)
      .def_readonly("dbeta", &StepRecord::dbeta)
      .def_readonly("dlambda", &StepRecord::dlambda)
      .def_readonly("psi", &StepRecord::psi);
  m.def("step", &step, py::arg("state"), py::arg("graph"), py::arg("problem"), py::arg("params"));

  py::class_<RunResult>(m, "RunResult")
      .def_readonly("state", &RunResult::state)
      .def_property_readonly("trace", [](const RunResult& r) { return trace_to_dict(r.trace); })
      .def_property_readonly("trace_csv", [](const RunResult& r) { return trace_to_csv(r.trace); })
      .def_readonly("gate", &RunResult::gate)
      .def_readonly("converged", &RunResult::converged)
      .def_readonly("warnings", &RunResult::warnings)
      .def_readonly("failure", &RunResult::failure);
  m.def(
      "run",
      [](const CommGraph& g, const Problem& problem, const MadmParams& params, MadmState init,
         std::optional<Vector> x_true, bool override_gate) {
        RunOptions opt;
        opt.x_true = std::move(x_true);
        opt.override_gate = override_gate;
        py::gil_scoped_release release;
        return run(g, problem, params, std::move(init), opt);
      },
      py::arg("graph"), py::arg("problem"), py::arg("params"), py::arg("init"),
      py::arg("x_true") = py::none(), py::arg("override_gate") = false);

  // Baseline
  py::class_<DpsmParams>(m, "DpsmParams")
      .def(py::init<>())
      .def_readwrite("mu0", &DpsmParams::mu0)
      .def_readwrite("gamma_decay", &DpsmParams::gamma_decay)
      .def_readwrite("max_iters", &DpsmParams::max_iters)
      .def_readwrite("projection_radius", &DpsmParams::projection_radius)
      .def_readwrite("tol", &DpsmParams::tol);
  py::class_<DpsmResult>(m, "DpsmResult")
      .def_readonly("x", &DpsmResult::x)
      .def_property_readonly("trace", [](const DpsmResult& r) { return trace_to_dict(r.trace); })
      .def_readonly("failure", &DpsmResult::failure);
  m.def(
      "dpsm_run",
      [](const CommGraph& g, const Problem& problem, const DpsmParams& params, const Matrix& init,
         std::optional<Vector> x_true) {
        DpsmOptions opt;
        opt.x_true = std::move(x_true);
        py::gil_scoped_release release;
        return dpsm_run(g, problem, params, init, opt);
      },
      py::arg("graph"), py::arg("problem"), py::arg("params"), py::arg("init"),
      py::arg("x_true") = py::none());
  m.def("dpsm_step_size", &dpsm_step_size);

  // Experiments. Configs cross the boundary as JSON text.
  m.def("spectral_init", &spectral_init, py::arg("instance"), py::arg("seed"),
        py::arg("iterations") = 200);
  m.def("mix_seed", &mix_seed);
  m.def("default_config", [] { return config_to_json(ExperimentConfig{}); });
  m.def("normalize_config", [](const std::string& text) {
    return config_to_json(parse_config(text));
  });
  m.def(
      "run_trial",
      [](const std::string& config, std::uint64_t seed, const std::string& method) {
        const ExperimentConfig c = parse_config(config);
        const Method mth = parse_method(method);
        TrialResult r;
        {
          py::gil_scoped_release release;
          r = run_trial(c, seed, mth);
        }
        py::dict out;
        out["madm"] = trace_to_dict(r.madm);
        out["dpsm"] = trace_to_dict(r.dpsm);
        out["gate_overall"] = r.gate.overall;
        out["madm_failure"] = r.madm_failure;
        out["dpsm_failure"] = r.dpsm_failure;
        out["error"] = r.error;
        return out;
      },
      py::arg("config"), py::arg("seed"), py::arg("method") = "both");
  m.def("gamma_grid_search", [](const std::string& config) {
    const ExperimentConfig c = parse_config(config);
    std::vector<GridRow> rows;
    {
      py::gil_scoped_release release;
      rows = gamma_grid_search(c);
    }
    std::vector<std::pair<double, double>> out;
    for (const GridRow& r : rows) out.emplace_back(r.gamma_decay, r.mse);
    return out;
  });
  m.def("dimension_sweep", [](const std::string& config) {
    const ExperimentConfig c = parse_config(config);
    std::vector<SweepRow> rows;
    {
      py::gil_scoped_release release;
      rows = dimension_sweep(c);
    }
    std::vector<std::tuple<int, std::string, double>> out;
    for (const SweepRow& r : rows) out.emplace_back(r.dimension, r.method, r.mse);
    return out;
  });
  m.def("cli", [](std::vector<std::string> args) {
    args.insert(args.begin(), "madm_cli");
    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    return cli_main(static_cast<int>(argv.size()), argv.data());
  });
}
