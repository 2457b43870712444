#ifndef NASHLQ_SIM_H_
#define NASHLQ_SIM_H_

#include <cstdint>
#include <string_view>

#include <Eigen/Dense>

#include "nashlq/game.h"

namespace nashlq {

enum class Integrator {
  kExact,       // analytic integral of the squared modal expansion
  kQuadrature,  // composite trapezoid on a uniform grid
};

std::string_view IntegratorName(Integrator integrator);
// Accepts "exact" or "quadrature". Throws InvalidConfigError otherwise.
Integrator ParseIntegrator(std::string_view name);

struct SimConfig {
  int batch_size = 500;
  double horizon = 200.0;  // T_s, seconds
  double dt = 0.1;         // quadrature step, seconds
  std::uint64_t seed = 0;
  Integrator integrator = Integrator::kExact;
  int threads = 1;  // 0 means hardware concurrency

  // Throws InvalidConfigError.
  void Validate() const;
};

// Counter-based generator. Output i of stream (seed, stream, substream) is a
// pure function of those four values, so batches do not depend on thread
// count or evaluation order.
class CounterRng {
 public:
  CounterRng(std::uint64_t seed, std::uint64_t stream, std::uint64_t substream);

  std::uint64_t NextU64();
  // Uniform on the open interval (0, 1).
  double Uniform01();
  double Uniform(double lo, double hi) { return lo + (hi - lo) * Uniform01(); }

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

// n i.i.d. components, uniform on (-sqrt(3), sqrt(3)): zero mean, unit
// variance.
Eigen::VectorXd SampleInitialState(int n, CounterRng& rng);

// Symmetric eigendecomposition A - K = Q diag(lambda) Q^T, computed once per
// profile and shared by every trajectory at that profile.
class ClosedLoop {
 public:
  ClosedLoop(const GameSpec& spec, const ActionProfile& k);

  int n() const { return static_cast<int>(eigenvalues_.size()); }
  const Eigen::VectorXd& eigenvalues() const { return eigenvalues_; }
  const Eigen::MatrixXd& eigenvectors() const { return eigenvectors_; }

  // x(t) = Q e^{Lambda t} Q^T x0, t >= 0.
  Eigen::VectorXd State(const Eigen::VectorXd& x0, double t) const;

  // Composite trapezoid approximation of int_0^T e^{2 (A - K) t} dt.
  Eigen::MatrixXd ExponentialIntegral(double horizon, double dt) const;

  const Eigen::VectorXd& cost_weight() const { return weight_; }

 private:
  Eigen::VectorXd eigenvalues_;
  Eigen::MatrixXd eigenvectors_;
  Eigen::VectorXd weight_;  // 1 + rho_i k_i^2
};

// Finite-horizon per-player cost int_0^T (x_i^2 + rho_i u_i^2) dt with
// u_i = -k_i x_i. Precomputes everything that depends only on the profile
// and the horizon; evaluation is const and safe to share across threads.
class CostIntegrator {
 public:
  CostIntegrator(const ClosedLoop& loop, const SimConfig& config);

  Eigen::VectorXd operator()(const Eigen::VectorXd& x0) const;

 private:
  const ClosedLoop& loop_;
  Integrator integrator_;
  // Exact: (e^{(l_m + l_p) T} - 1) / (l_m + l_p).
  Eigen::MatrixXd modal_kernel_;
  // Quadrature: uniform grid of `steps_` intervals of width `step_`, with
  // e^{l_m step} advancing the modal coordinates one interval.
  int steps_ = 0;
  double step_ = 0.0;
  Eigen::VectorXd step_ratio_;
};

struct TrajectoryBatch {
  Eigen::MatrixXd x0;               // batch_size x n, one initial state per row
  Eigen::MatrixXd per_player_cost;  // batch_size x n
};

Eigen::VectorXd SimulateState(const GameSpec& spec, const ActionProfile& k,
                              const Eigen::VectorXd& x0, double t);

Eigen::VectorXd TrajectoryCost(const GameSpec& spec, const ActionProfile& k,
                               const Eigen::VectorXd& x0,
                               const SimConfig& config);

// Trajectory b of the batch draws its initial state from substream
// (config.seed, stream, b). Throws NotPositiveDefiniteError if the profile
// is not stabilizing.
TrajectoryBatch SimulateBatch(const GameSpec& spec, const ActionProfile& k,
                              const SimConfig& config,
                              std::uint64_t stream = 0);

// Batch mean of SimulateBatch's per-player costs, reduced in index order.
Eigen::VectorXd MonteCarloCost(const GameSpec& spec, const ActionProfile& k,
                               const SimConfig& config,
                               std::uint64_t stream = 0);

Eigen::MatrixXd ExponentialIntegral(const GameSpec& spec,
                                    const ActionProfile& k, double horizon,
                                    double dt);

}  // namespace nashlq

#endif  // NASHLQ_SIM_H_
