#include "nashlq/learning.h"

#include <algorithm>
#include <cmath>
#include <string>

namespace nashlq {

std::string_view LearnModeName(LearnMode mode) {
  return mode == LearnMode::kExact ? "exact" : "model-free";
}

LearnMode ParseLearnMode(std::string_view name) {
  if (name == "exact") return LearnMode::kExact;
  if (name == "model-free") return LearnMode::kModelFree;
  throw InvalidConfigError("unknown mode '" + std::string(name) +
                           "' (expected exact or model-free)");
}

void LearnConfig::Validate() const {
  if (stages < 1) throw InvalidConfigError("stages must be >= 1");
  if (!(step_size > 0.0) || !std::isfinite(step_size)) {
    throw InvalidConfigError("step_size must be positive");
  }
  if (!(grad_tolerance >= 0.0)) {
    throw InvalidConfigError("grad_tolerance must be non-negative");
  }
  if (mode == LearnMode::kModelFree) sim.Validate();
}

double Project(double value, double lower, double upper) {
  return std::min(std::max(value, lower), upper);
}

GradientEstimate EstimateGradient(const GameSpec& spec, const ActionProfile& k,
                                  const LearnConfig& config, int stage) {
  GradientEstimate est;
  if (config.mode == LearnMode::kExact) {
    CostGradientReport report = Evaluate(spec, k);
    est.J = std::move(report.J);
    est.g = std::move(report.g);
    return est;
  }
  est.J = MonteCarloCost(spec, k, config.sim, static_cast<std::uint64_t>(stage));
  est.g.resize(spec.n());
  for (int i = 0; i < spec.n(); ++i) {
    est.g(i) = MarginalCostFromCost(est.J(i), k[i], spec.rho()(i));
  }
  return est;
}

ActionProfile ProjectedUpdate(const GameSpec& spec, const ActionProfile& k,
                              const Eigen::VectorXd& gradient,
                              double step_size) {
  Eigen::VectorXd next(spec.n());
  for (int i = 0; i < spec.n(); ++i) {
    next(i) = Project(k[i] - step_size * gradient(i), spec.k_lower()(i),
                      spec.k_upper()(i));
  }
  return ActionProfile(std::move(next));
}

ActionProfile GradientPlayStep(const GameSpec& spec, const ActionProfile& k,
                               const LearnConfig& config, int stage) {
  const GradientEstimate est = EstimateGradient(spec, k, config, stage);
  return ProjectedUpdate(spec, k, est.g, config.step_size);
}

LearnRun RunGradientPlay(const GameSpec& spec, const ActionProfile& k0,
                         const LearnConfig& config) {
  config.Validate();
  if (!spec.Contains(k0)) {
    throw PreconditionViolatedError("initial profile lies outside the box");
  }

  LearnRun run;
  if (config.record_history) run.history.reserve(config.stages + 1);
  const bool early_exit =
      config.mode == LearnMode::kExact && config.grad_tolerance > 0.0;

  ActionProfile k = k0;
  StageRecord last;
  int stage = 0;
  for (;; ++stage) {
    GradientEstimate est = EstimateGradient(spec, k, config, stage);
    const bool stationary =
        early_exit && est.g.cwiseAbs().maxCoeff() < config.grad_tolerance;
    last = {stage, k, std::move(est.J), std::move(est.g)};
    if (config.record_history) run.history.push_back(last);
    if (stationary) {
      run.converged = true;
      break;
    }
    if (stage == config.stages) break;
    k = ProjectedUpdate(spec, k, last.g, config.step_size);
  }
  if (!config.record_history) run.history.push_back(std::move(last));
  run.final = std::move(k);
  run.stages_used = stage;
  return run;
}

DescentReport CheckDescent(const GameSpec& spec, const LearnRun& run) {
  DescentReport report;
  for (size_t l = 1; l < run.history.size(); ++l) {
    const StageRecord& prev = run.history[l - 1];
    const StageRecord& cur = run.history[l];
    for (int i = 0; i < spec.n(); ++i) {
      const double gain = cur.k[i];
      if (gain <= spec.k_lower()(i) || gain >= spec.k_upper()(i)) continue;
      ++report.checked;
      const double increase = cur.J(i) - prev.J(i);
      if (increase > 0.0) {
        ++report.violations;
        report.worst_increase = std::max(report.worst_increase, increase);
      }
    }
  }
  return report;
}

}  // namespace nashlq
