#include "nashlq/sim.h"

#include <algorithm>
#include <cmath>
#include <string>
#include <thread>
#include <vector>

namespace nashlq {
namespace {

constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;

// SplitMix64 finalizer.
std::uint64_t Mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

int StepCount(double horizon, double dt) {
  // Tolerate horizon/dt landing a hair above an integer.
  const double ratio = horizon / dt;
  return std::max(1, static_cast<int>(std::ceil(ratio * (1.0 - 1e-12))));
}

int ResolveThreads(int requested, int work) {
  int threads = requested;
  if (threads <= 0) {
    threads = static_cast<int>(std::thread::hardware_concurrency());
  }
  return std::clamp(threads, 1, std::max(1, work));
}

}  // namespace

std::string_view IntegratorName(Integrator integrator) {
  switch (integrator) {
    case Integrator::kExact:
      return "exact";
    case Integrator::kQuadrature:
      return "quadrature";
  }
  return "exact";
}

Integrator ParseIntegrator(std::string_view name) {
  if (name == "exact") return Integrator::kExact;
  if (name == "quadrature") return Integrator::kQuadrature;
  throw InvalidConfigError("unknown integrator '" + std::string(name) +
                           "' (expected exact or quadrature)");
}

void SimConfig::Validate() const {
  if (batch_size < 1) throw InvalidConfigError("batch_size must be >= 1");
  if (!(horizon > 0.0) || !std::isfinite(horizon)) {
    throw InvalidConfigError("horizon must be positive");
  }
  if (!(dt > 0.0) || dt > horizon) {
    throw InvalidConfigError("dt must satisfy 0 < dt <= horizon");
  }
  if (threads < 0) throw InvalidConfigError("threads must be >= 0");
}

CounterRng::CounterRng(std::uint64_t seed, std::uint64_t stream,
                       std::uint64_t substream) {
  std::uint64_t key = Mix64(seed + kGolden);
  key = Mix64(key ^ (stream + 2 * kGolden));
  key_ = Mix64(key ^ (substream + 3 * kGolden));
}

std::uint64_t CounterRng::NextU64() {
  ++counter_;
  return Mix64(key_ + counter_ * kGolden);
}

double CounterRng::Uniform01() {
  // 53 random bits centered in their bucket: never exactly 0 or 1.
  return (static_cast<double>(NextU64() >> 11) + 0.5) * 0x1.0p-53;
}

Eigen::VectorXd SampleInitialState(int n, CounterRng& rng) {
  const double half_width = std::sqrt(3.0);
  Eigen::VectorXd x0(n);
  for (int i = 0; i < n; ++i) x0(i) = rng.Uniform(-half_width, half_width);
  return x0;
}

ClosedLoop::ClosedLoop(const GameSpec& spec, const ActionProfile& k) {
  if (k.size() != spec.n()) {
    throw std::invalid_argument("action profile size does not match game");
  }
  Eigen::MatrixXd closed = spec.a();
  closed.diagonal() -= k.k;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(closed);
  eigenvalues_ = eig.eigenvalues();
  eigenvectors_ = eig.eigenvectors();
  weight_ = (1.0 + spec.rho().array() * k.k.array().square()).matrix();
}

Eigen::VectorXd ClosedLoop::State(const Eigen::VectorXd& x0, double t) const {
  const Eigen::VectorXd modal = eigenvectors_.transpose() * x0;
  return eigenvectors_ *
         (modal.array() * (eigenvalues_.array() * t).exp()).matrix();
}

Eigen::MatrixXd ClosedLoop::ExponentialIntegral(double horizon,
                                                double dt) const {
  const int steps = StepCount(horizon, dt);
  const double h = horizon / steps;
  Eigen::VectorXd modal_sum(n());
  for (int m = 0; m < n(); ++m) {
    const double rate = 2.0 * eigenvalues_(m);
    double sum = 0.5 * (1.0 + std::exp(rate * horizon));
    for (int j = 1; j < steps; ++j) sum += std::exp(rate * (j * h));
    modal_sum(m) = h * sum;
  }
  return eigenvectors_ * modal_sum.asDiagonal() * eigenvectors_.transpose();
}

CostIntegrator::CostIntegrator(const ClosedLoop& loop, const SimConfig& config)
    : loop_(loop), integrator_(config.integrator) {
  const int n = loop.n();
  const Eigen::VectorXd& lambda = loop.eigenvalues();
  if (integrator_ == Integrator::kExact) {
    modal_kernel_.resize(n, n);
    for (int m = 0; m < n; ++m) {
      for (int p = 0; p < n; ++p) {
        const double rate = lambda(m) + lambda(p);
        modal_kernel_(m, p) = rate == 0.0
                                  ? config.horizon
                                  : std::expm1(rate * config.horizon) / rate;
      }
    }
  } else {
    steps_ = StepCount(config.horizon, config.dt);
    step_ = config.horizon / steps_;
    step_ratio_ = (lambda.array() * step_).exp().matrix();
  }
}

Eigen::VectorXd CostIntegrator::operator()(const Eigen::VectorXd& x0) const {
  const Eigen::MatrixXd& q = loop_.eigenvectors();
  const Eigen::VectorXd modal = q.transpose() * x0;
  const int n = loop_.n();
  Eigen::VectorXd squared(n);

  if (integrator_ == Integrator::kExact) {
    // x_i(t) = sum_m Q_im c_m e^{l_m t}, so int x_i^2 = w_i^T E w_i with
    // w_i = (Q_im c_m)_m.
    for (int i = 0; i < n; ++i) {
      const Eigen::VectorXd w = q.row(i).transpose().cwiseProduct(modal);
      squared(i) = w.dot(modal_kernel_ * w);
    }
  } else {
    Eigen::VectorXd z = modal;
    Eigen::VectorXd x = q * z;
    squared = 0.5 * x.array().square().matrix();
    for (int j = 1; j <= steps_; ++j) {
      z.array() *= step_ratio_.array();
      x.noalias() = q * z;
      const double w = (j == steps_) ? 0.5 : 1.0;
      squared.array() += w * x.array().square();
    }
    squared *= step_;
  }
  // w^T E w can round a few ulp below zero.
  return (squared.array().max(0.0) * loop_.cost_weight().array()).matrix();
}

Eigen::VectorXd SimulateState(const GameSpec& spec, const ActionProfile& k,
                              const Eigen::VectorXd& x0, double t) {
  if (t < 0.0) throw std::invalid_argument("t must be non-negative");
  return ClosedLoop(spec, k).State(x0, t);
}

Eigen::VectorXd TrajectoryCost(const GameSpec& spec, const ActionProfile& k,
                               const Eigen::VectorXd& x0,
                               const SimConfig& config) {
  config.Validate();
  const ClosedLoop loop(spec, k);
  return CostIntegrator(loop, config)(x0);
}

TrajectoryBatch SimulateBatch(const GameSpec& spec, const ActionProfile& k,
                              const SimConfig& config, std::uint64_t stream) {
  config.Validate();
  Resolvent(spec, k);  // stability check; throws NotPositiveDefiniteError

  const int n = spec.n();
  const ClosedLoop loop(spec, k);
  const CostIntegrator integrate(loop, config);

  TrajectoryBatch batch;
  batch.x0.resize(config.batch_size, n);
  batch.per_player_cost.resize(config.batch_size, n);

  auto run_range = [&](int begin, int end) {
    for (int b = begin; b < end; ++b) {
      CounterRng rng(config.seed, stream, static_cast<std::uint64_t>(b));
      const Eigen::VectorXd x0 = SampleInitialState(n, rng);
      batch.x0.row(b) = x0.transpose();
      batch.per_player_cost.row(b) = integrate(x0).transpose();
    }
  };

  const int threads = ResolveThreads(config.threads, config.batch_size);
  if (threads == 1) {
    run_range(0, config.batch_size);
  } else {
    std::vector<std::jthread> workers;
    const int chunk = (config.batch_size + threads - 1) / threads;
    for (int t = 0; t < threads; ++t) {
      const int begin = t * chunk;
      const int end = std::min(config.batch_size, begin + chunk);
      if (begin < end) workers.emplace_back(run_range, begin, end);
    }
  }
  return batch;
}

Eigen::VectorXd MonteCarloCost(const GameSpec& spec, const ActionProfile& k,
                               const SimConfig& config, std::uint64_t stream) {
  const TrajectoryBatch batch = SimulateBatch(spec, k, config, stream);
  Eigen::VectorXd total = Eigen::VectorXd::Zero(spec.n());
  for (Eigen::Index b = 0; b < batch.per_player_cost.rows(); ++b) {
    total += batch.per_player_cost.row(b).transpose();
  }
  return total / static_cast<double>(config.batch_size);
}

Eigen::MatrixXd ExponentialIntegral(const GameSpec& spec,
                                    const ActionProfile& k, double horizon,
                                    double dt) {
  if (!(horizon > 0.0) || !(dt > 0.0)) {
    throw std::invalid_argument("horizon and dt must be positive");
  }
  return ClosedLoop(spec, k).ExponentialIntegral(horizon, dt);
}

}  // namespace nashlq
