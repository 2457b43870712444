#ifndef NASHLQ_GAME_H_
#define NASHLQ_GAME_H_

#include <optional>

#include <Eigen/Dense>

#include "nashlq/errors.h"

namespace nashlq {

// Margin added to the Gershgorin lower bound when A is symmetric but not
// negative definite.
inline constexpr double kGershgorinMargin = 1e-6;

// Relative pivot threshold for the Cholesky factorization of K - A.
inline constexpr double kPivotThreshold = 1e-12;

// Joint gain vector k = (k_1, ..., k_n); K = diag(k).
struct ActionProfile {
  Eigen::VectorXd k;

  ActionProfile() = default;
  explicit ActionProfile(Eigen::VectorXd gains) : k(std::move(gains)) {}

  int size() const { return static_cast<int>(k.size()); }
  double operator[](int i) const { return k(i); }
};

// Immutable n-player game over x' = A x + u with u_i = -k_i x_i and cost
// J_i = E int (x_i^2 + rho_i u_i^2) dt.
//
// Construction validates the symmetric structure of A and the action box.
// If A is not negative definite the lower bounds are raised to the
// Gershgorin bound a_ii + sum_{j != i} |a_ij| + kGershgorinMargin, which makes
// K - A strictly diagonally dominant with positive diagonal over the box.
class GameSpec {
 public:
  // Throws InvalidConfigError on any violated invariant.
  static GameSpec Create(const Eigen::MatrixXd& a, const Eigen::VectorXd& rho,
                         const Eigen::VectorXd& k_upper,
                         std::optional<Eigen::VectorXd> k_lower = std::nullopt);

  int n() const { return static_cast<int>(a_.rows()); }
  const Eigen::MatrixXd& a() const { return a_; }
  const Eigen::VectorXd& rho() const { return rho_; }
  const Eigen::VectorXd& k_lower() const { return k_lower_; }
  const Eigen::VectorXd& k_upper() const { return k_upper_; }

  // True when the lower bounds were raised because A is not negative
  // definite.
  bool lower_bounds_relaxed() const { return lower_bounds_relaxed_; }

  bool Contains(const ActionProfile& k) const;

 private:
  GameSpec() = default;

  Eigen::MatrixXd a_;
  Eigen::VectorXd rho_;
  Eigen::VectorXd k_lower_;
  Eigen::VectorXd k_upper_;
  bool lower_bounds_relaxed_ = false;
};

// Everything player-local at one profile, from one factorization of K - A.
struct CostGradientReport {
  Eigen::VectorXd f;  // f_i = [(K - A)^{-1}]_ii
  Eigen::VectorXd J;  // J_i = (1 + rho_i k_i^2) f_i / 2
  Eigen::VectorXd g;  // dJ_i/dk_i
  Eigen::VectorXd h;  // d^2 J_i/dk_i^2
};

// M = (K - A)^{-1}. Throws NotPositiveDefiniteError when the Cholesky
// factorization of K - A fails or a pivot falls below
// kPivotThreshold * ||K - A||_inf.
Eigen::MatrixXd Resolvent(const GameSpec& spec, const ActionProfile& k);

Eigen::VectorXd Cost(const GameSpec& spec, const ActionProfile& k);

// Pseudogradient g_i = rho_i k_i f_i - (1 + rho_i k_i^2) f_i^2 / 2.
Eigen::VectorXd ExactGradient(const GameSpec& spec, const ActionProfile& k);

// Recovers dJ_i/dk_i from the cost value alone:
//   2 J / (1 + rho k^2) * (rho k - J).
double MarginalCostFromCost(double cost, double gain, double rho);

// h_i = f_i [rho_i (1 - k_i f_i)^2 + f_i^2], strictly positive.
Eigen::VectorXd SecondDerivative(const GameSpec& spec, const ActionProfile& k);

// G_ij = dg_i/dk_j. The diagonal is SecondDerivative; off the diagonal
// df_i/dk_j = -M_ij^2 gives G_ij = -[rho_i k_i - (1 + rho_i k_i^2) f_i] M_ij^2.
Eigen::MatrixXd PseudogradientJacobian(const GameSpec& spec,
                                       const ActionProfile& k);

// Smallest eigenvalue of K - A. Positive iff the closed loop is stable.
double StabilityMargin(const GameSpec& spec, const ActionProfile& k);

CostGradientReport Evaluate(const GameSpec& spec, const ActionProfile& k);

}  // namespace nashlq

#endif  // NASHLQ_GAME_H_
