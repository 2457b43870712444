#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "nashlq/analysis.h"
#include "nashlq/game.h"
#include "nashlq/learning.h"
#include "nashlq/presets.h"
#include "nashlq/sim.h"

namespace py = pybind11;
using namespace nashlq;

namespace {

ActionProfile Profile(const Eigen::VectorXd& k) { return ActionProfile(k); }

py::dict RunToDict(const LearnRun& run) {
  const int n = run.final.size();
  const auto stages = static_cast<Eigen::Index>(run.history.size());
  Eigen::MatrixXd k(stages, n), j(stages, n), g(stages, n);
  std::vector<int> stage(stages);
  for (Eigen::Index l = 0; l < stages; ++l) {
    const StageRecord& rec = run.history[l];
    stage[l] = rec.stage;
    k.row(l) = rec.k.k.transpose();
    j.row(l) = rec.J.transpose();
    g.row(l) = rec.g.transpose();
  }
  py::dict out;
  out["stage"] = stage;
  out["k"] = k;
  out["J"] = j;
  out["g"] = g;
  out["final"] = run.final.k;
  out["converged"] = run.converged;
  out["stages_used"] = run.stages_used;
  return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Gradient play on n-player symmetric LQ games";

  py::register_exception<NotPositiveDefiniteError>(m, "NotPositiveDefiniteError",
                                                   PyExc_ArithmeticError);

  py::class_<GameSpec>(m, "GameSpec")
      .def(py::init([](const Eigen::MatrixXd& a, const Eigen::VectorXd& rho,
                       const Eigen::VectorXd& k_upper,
                       std::optional<Eigen::VectorXd> k_lower) {
             return GameSpec::Create(a, rho, k_upper, std::move(k_lower));
           }),
           py::arg("a"), py::arg("rho"), py::arg("k_upper"),
           py::arg("k_lower") = py::none())
      .def_property_readonly("n", &GameSpec::n)
      .def_property_readonly("a", &GameSpec::a)
      .def_property_readonly("rho", &GameSpec::rho)
      .def_property_readonly("k_lower", &GameSpec::k_lower)
      .def_property_readonly("k_upper", &GameSpec::k_upper)
      .def_property_readonly("lower_bounds_relaxed",
                             &GameSpec::lower_bounds_relaxed)
      .def("contains", [](const GameSpec& s, const Eigen::VectorXd& k) {
        return s.Contains(Profile(k));
      });

  m.def("resolvent", [](const GameSpec& s, const Eigen::VectorXd& k) {
    return Resolvent(s, Profile(k));
  });
  m.def("cost", [](const GameSpec& s, const Eigen::VectorXd& k) {
    return Cost(s, Profile(k));
  });
  m.def("exact_gradient", [](const GameSpec& s, const Eigen::VectorXd& k) {
    return ExactGradient(s, Profile(k));
  });
  m.def("marginal_cost_from_cost", &MarginalCostFromCost, py::arg("cost"),
        py::arg("gain"), py::arg("rho"));
  m.def("second_derivative", [](const GameSpec& s, const Eigen::VectorXd& k) {
    return SecondDerivative(s, Profile(k));
  });
  m.def("pseudogradient_jacobian",
        [](const GameSpec& s, const Eigen::VectorXd& k) {
          return PseudogradientJacobian(s, Profile(k));
        });
  m.def("stability_margin", [](const GameSpec& s, const Eigen::VectorXd& k) {
    return StabilityMargin(s, Profile(k));
  });
  m.def("rosen_check", [](const GameSpec& s, const Eigen::VectorXd& k) {
    return RosenCheck(s, Profile(k));
  });
  m.def("two_player_mu", &TwoPlayerMu, py::arg("a11"), py::arg("a12"),
        py::arg("a22"), py::arg("k1"), py::arg("k2"));

  m.def(
      "monte_carlo_cost",
      [](const GameSpec& s, const Eigen::VectorXd& k, int batch_size,
         double horizon, double dt, std::uint64_t seed,
         const std::string& integrator, int threads, std::uint64_t stream) {
        SimConfig sim;
        sim.batch_size = batch_size;
        sim.horizon = horizon;
        sim.dt = dt;
        sim.seed = seed;
        sim.integrator = ParseIntegrator(integrator);
        sim.threads = threads;
        return MonteCarloCost(s, Profile(k), sim, stream);
      },
      py::arg("spec"), py::arg("k"), py::arg("batch_size") = 500,
      py::arg("horizon") = 200.0, py::arg("dt") = 0.1, py::arg("seed") = 0,
      py::arg("integrator") = "exact", py::arg("threads") = 1,
      py::arg("stream") = 0);

  m.def(
      "run_gradient_play",
      [](const GameSpec& s, const Eigen::VectorXd& k0, int stages,
         double step_size, const std::string& mode, double grad_tolerance,
         int batch_size, double horizon, std::uint64_t seed) {
        LearnConfig learn;
        learn.stages = stages;
        learn.step_size = step_size;
        learn.mode = ParseLearnMode(mode);
        learn.grad_tolerance = grad_tolerance;
        learn.sim.batch_size = batch_size;
        learn.sim.horizon = horizon;
        learn.sim.seed = seed;
        return RunToDict(RunGradientPlay(s, Profile(k0), learn));
      },
      py::arg("spec"), py::arg("k0"), py::arg("stages") = 250,
      py::arg("step_size") = 1.0, py::arg("mode") = "exact",
      py::arg("grad_tolerance") = 0.0, py::arg("batch_size") = 500,
      py::arg("horizon") = 200.0, py::arg("seed") = 0);

  m.def(
      "conjecture_sweep",
      [](int n, int n_max, int count, int box_samples, double rho_min,
         double rho_max, std::uint64_t seed) {
        SweepConfig sweep;
        sweep.ensemble.n = n;
        sweep.n_max = n_max;
        sweep.ensemble.count = count;
        sweep.ensemble.seed = seed;
        sweep.box_samples = box_samples;
        sweep.rho_min = rho_min;
        sweep.rho_max = rho_max;
        const SweepReport report = ConjectureSweep(sweep);
        std::vector<double> min_eig;
        for (const RosenReport& r : report.per_matrix) {
          min_eig.push_back(r.min_eig);
        }
        py::dict out;
        out["min_eig"] = min_eig;
        out["dimensions"] = report.dimensions;
        out["global_min"] = report.global_min;
        out["violations"] = report.violations.size();
        return out;
      },
      py::arg("n") = 2, py::arg("n_max") = 6, py::arg("count") = 100,
      py::arg("box_samples") = 200, py::arg("rho_min") = 0.0,
      py::arg("rho_max") = 1.0, py::arg("seed") = 0);

  m.def("paper_game", [] { return PaperPreset().Game(); });
  m.def("paper_initial_profiles", [] {
    return py::make_tuple(PaperPreset().round1_k0, PaperPreset().round2_k0);
  });
  m.def("scalar_game", &ScalarPreset);
  m.def("diagonal_game", &DiagonalPreset);
  m.def("two_player_game", &TwoPlayerPreset);
}
