#ifndef NASHLQ_LEARNING_H_
#define NASHLQ_LEARNING_H_

#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "nashlq/game.h"
#include "nashlq/sim.h"

namespace nashlq {

enum class LearnMode {
  kExact,      // closed-form pseudogradient
  kModelFree,  // sampled cost fed through MarginalCostFromCost
};

std::string_view LearnModeName(LearnMode mode);
// Accepts "exact" or "model-free".
LearnMode ParseLearnMode(std::string_view name);

struct LearnConfig {
  int stages = 250;
  double step_size = 1.0;
  LearnMode mode = LearnMode::kExact;
  SimConfig sim;  // model-free only
  // Early exit when ||g||_inf < grad_tolerance (exact mode only). Zero
  // disables it.
  double grad_tolerance = 0.0;
  // When false only the final stage is kept in LearnRun::history.
  bool record_history = true;

  // Throws InvalidConfigError.
  void Validate() const;
};

struct StageRecord {
  int stage = 0;
  ActionProfile k;
  Eigen::VectorXd J;  // cost at k (estimated in model-free mode)
  Eigen::VectorXd g;  // gradient used for the update out of k
};

struct LearnRun {
  std::vector<StageRecord> history;
  ActionProfile final;
  bool converged = false;
  int stages_used = 0;  // number of updates applied
};

// min(max(value, lower), upper).
double Project(double value, double lower, double upper);

struct GradientEstimate {
  Eigen::VectorXd J;
  Eigen::VectorXd g;
};

// Exact mode evaluates the closed form. Model-free mode averages a batch of
// sampled trajectories on stream `stage` and recovers each g_i from the
// player's own estimated cost.
GradientEstimate EstimateGradient(const GameSpec& spec, const ActionProfile& k,
                                  const LearnConfig& config, int stage);

// One simultaneous projected update: every player steps from the same k.
ActionProfile GradientPlayStep(const GameSpec& spec, const ActionProfile& k,
                               const LearnConfig& config, int stage);

// Applies an already computed gradient.
ActionProfile ProjectedUpdate(const GameSpec& spec, const ActionProfile& k,
                              const Eigen::VectorXd& gradient,
                              double step_size);

// Records stages 0..L where stage l holds k^(l) and the gradient evaluated
// there. Throws PreconditionViolatedError if k0 is outside the box.
LearnRun RunGradientPlay(const GameSpec& spec, const ActionProfile& k0,
                         const LearnConfig& config);

// Stage-to-stage cost increases for players whose iterate stayed strictly
// inside the box. Simultaneous play need not descend, so these are
// diagnostics only.
struct DescentReport {
  int checked = 0;
  int violations = 0;
  double worst_increase = 0.0;
};
DescentReport CheckDescent(const GameSpec& spec, const LearnRun& run);

}  // namespace nashlq

#endif  // NASHLQ_LEARNING_H_
