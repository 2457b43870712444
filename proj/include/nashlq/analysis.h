#ifndef NASHLQ_ANALYSIS_H_
#define NASHLQ_ANALYSIS_H_

#include <cstdint>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "nashlq/game.h"
#include "nashlq/sim.h"

namespace nashlq {

// Smallest eigenvalue of G(k) + G(k)^T. A positive value certifies the
// monotonicity condition at k.
double RosenCheck(const GameSpec& spec, const ActionProfile& k);

// mu = 4 (k1 - a11)^3 (k2 - a22)^3 - a12^4 (k1 - a11 + k2 - a22)^2, the
// leading-minor test for the two-player G + G^T with rho = 0. Requires
// a11 < -|a12|, a22 < -|a12| and k1, k2 >= 0; throws
// PreconditionViolatedError otherwise.
double TwoPlayerMu(double a11, double a12, double a22, double k1, double k2);

// Row-wise -a_ii - sum_{j != i} |a_ij|. Every entry is positive iff A is
// strictly diagonally dominant with negative diagonal.
Eigen::VectorXd GershgorinMargins(const Eigen::MatrixXd& a);

bool IsSddNegativeDiag(const Eigen::MatrixXd& a, double margin = 0.0);

struct MatrixEnsembleConfig {
  int n = 5;
  int count = 100;
  double offdiag_scale = 0.05;
  double dominance_margin = 1e-3;
  std::uint64_t seed = 0;

  void Validate() const;
};

// Symmetric, strictly diagonally dominant, negative diagonal. Off-diagonals
// are uniform on [-scale, scale]; a_ii = -(sum_{j != i} |a_ij| + margin +
// uniform(0, scale)).
Eigen::MatrixXd GenerateSddMatrix(int n, const MatrixEnsembleConfig& config,
                                  CounterRng& rng);

// Symmetric negative definite but generally not diagonally dominant: a
// random symmetric matrix shifted below its top eigenvalue. Used to search
// outside the hypothesis of the uniqueness conjecture.
Eigen::MatrixXd GenerateShiftedSymmetricMatrix(
    int n, const MatrixEnsembleConfig& config, CounterRng& rng);

// Latin-hypercube samples over [lower, upper]: each coordinate visits each of
// `count` equal strata exactly once.
std::vector<ActionProfile> StratifiedBoxSamples(const Eigen::VectorXd& lower,
                                                const Eigen::VectorXd& upper,
                                                int count, CounterRng& rng);

// Default sweep box upper bound: 10 max(1, |a_ii|).
Eigen::VectorXd DefaultSweepUpperBound(const Eigen::MatrixXd& a);

struct RosenReport {
  double min_eig = 0.0;
  ActionProfile witness;
  int samples = 0;
  bool violated = false;
};

// Finite-difference audit of G against the closed-form gradient.
struct JacobianSpotCheck {
  int checks = 0;
  int failures = 0;  // relative error above kJacobianFdTolerance
  double max_relative_error = 0.0;
};

inline constexpr double kJacobianFdStep = 1e-5;
inline constexpr double kJacobianFdTolerance = 1e-5;

// Central differences of ExactGradient, column j perturbing k_j.
Eigen::MatrixXd FiniteDifferenceJacobian(const GameSpec& spec,
                                         const ActionProfile& k,
                                         double step = kJacobianFdStep);

// max_j ||G_:j - FD_:j||_inf / ||FD_:j||_inf.
double JacobianRelativeError(const GameSpec& spec, const ActionProfile& k);

// Minimum of RosenCheck over stratified samples of the game's box. Every
// `fd_every`-th sample (0 disables) is also audited against finite
// differences into `audit`, when given.
RosenReport SweepRosen(const GameSpec& spec, int samples, CounterRng& rng,
                       int fd_every = 0, JacobianSpotCheck* audit = nullptr);

enum class MatrixFamily {
  kSdd,                // the conjecture's hypothesis
  kShiftedSymmetric,   // exploratory counterexample search
};

std::string_view MatrixFamilyName(MatrixFamily family);
MatrixFamily ParseMatrixFamily(std::string_view name);

struct SweepConfig {
  MatrixEnsembleConfig ensemble;
  // Matrix j has dimension ensemble.n + j mod (n_max - ensemble.n + 1); a
  // value below ensemble.n pins every matrix to ensemble.n.
  int n_max = 0;
  int box_samples = 200;
  double rho_min = 0.0;
  double rho_max = 1.0;
  MatrixFamily family = MatrixFamily::kSdd;
  int fd_every = 100;

  void Validate() const;
};

// Everything needed to rebuild a failing sample.
struct ViolationWitness {
  int matrix_index = 0;
  std::uint64_t seed = 0;
  Eigen::MatrixXd a;
  Eigen::VectorXd rho;
  ActionProfile k;
  double min_eig = 0.0;
};

struct SweepReport {
  std::vector<RosenReport> per_matrix;
  std::vector<int> dimensions;
  double global_min = 0.0;
  int global_argmin = -1;
  std::vector<ViolationWitness> violations;
  JacobianSpotCheck audit;
};

SweepReport ConjectureSweep(const SweepConfig& config);

// Matrix `index` of a sweep's ensemble.
Eigen::MatrixXd EnsembleMatrix(const SweepConfig& config, int index);

// Rebuilds matrix `index` of a sweep together with its rho vector.
GameSpec SweepGame(const SweepConfig& config, int index);

}  // namespace nashlq

#endif  // NASHLQ_ANALYSIS_H_
