#include "nashlq/game.h"

#include <cmath>
#include <sstream>
#include <string>

namespace nashlq {
namespace {

void CheckFinite(const Eigen::MatrixXd& m, const char* name) {
  if (!m.allFinite()) {
    throw InvalidConfigError(std::string(name) + " has non-finite entries");
  }
}

void CheckSize(const GameSpec& spec, const ActionProfile& k) {
  if (k.size() != spec.n()) {
    std::ostringstream msg;
    msg << "action profile has " << k.size() << " entries, game has "
        << spec.n() << " players";
    throw std::invalid_argument(msg.str());
  }
}

Eigen::MatrixXd ClosedLoopGap(const GameSpec& spec, const ActionProfile& k) {
  Eigen::MatrixXd s = -spec.a();
  s.diagonal() += k.k;
  return s;
}

// Cholesky of K - A with the pivot check folded in.
Eigen::LLT<Eigen::MatrixXd> Factor(const GameSpec& spec,
                                   const ActionProfile& k) {
  CheckSize(spec, k);
  const Eigen::MatrixXd s = ClosedLoopGap(spec, k);
  Eigen::LLT<Eigen::MatrixXd> llt(s);
  const double scale = s.cwiseAbs().rowwise().sum().maxCoeff();
  if (llt.info() != Eigen::Success) {
    throw NotPositiveDefiniteError(
        "K - A is not positive definite; closed loop is unstable");
  }
  const Eigen::VectorXd pivots = llt.matrixLLT().diagonal().array().square();
  if (pivots.minCoeff() <= kPivotThreshold * scale) {
    std::ostringstream msg;
    msg << "K - A is numerically singular (pivot " << pivots.minCoeff()
        << ", ||K - A||_inf " << scale << ")";
    throw NotPositiveDefiniteError(msg.str());
  }
  return llt;
}

}  // namespace

GameSpec GameSpec::Create(const Eigen::MatrixXd& a, const Eigen::VectorXd& rho,
                          const Eigen::VectorXd& k_upper,
                          std::optional<Eigen::VectorXd> k_lower) {
  const Eigen::Index n = a.rows();
  if (n < 1 || a.cols() != n) {
    throw InvalidConfigError("A must be a non-empty square matrix");
  }
  if (rho.size() != n || k_upper.size() != n ||
      (k_lower && k_lower->size() != n)) {
    throw InvalidConfigError("rho and action bounds must have n entries");
  }
  CheckFinite(a, "A");
  CheckFinite(rho, "rho");
  CheckFinite(k_upper, "k_upper");
  if (k_lower) CheckFinite(*k_lower, "k_lower");

  const double asym = (a - a.transpose()).cwiseAbs().maxCoeff();
  if (asym > 1e-12 * std::max(1.0, a.cwiseAbs().maxCoeff())) {
    throw InvalidConfigError("A must be symmetric");
  }
  if ((rho.array() < 0.0).any()) {
    throw InvalidConfigError("rho_i must be non-negative");
  }

  GameSpec spec;
  spec.a_ = 0.5 * (a + a.transpose());
  spec.rho_ = rho;
  spec.k_upper_ = k_upper;
  spec.k_lower_ = k_lower ? *k_lower : Eigen::VectorXd::Zero(n);

  Eigen::LLT<Eigen::MatrixXd> neg_a(-spec.a_);
  if (neg_a.info() != Eigen::Success) {
    for (Eigen::Index i = 0; i < n; ++i) {
      const double off = spec.a_.row(i).cwiseAbs().sum() -
                         std::abs(spec.a_(i, i));
      const double bound = spec.a_(i, i) + off + kGershgorinMargin;
      spec.k_lower_(i) = std::max({0.0, spec.k_lower_(i), bound});
    }
    spec.lower_bounds_relaxed_ = true;
  }
  if ((spec.k_lower_.array() >= spec.k_upper_.array()).any()) {
    throw InvalidConfigError("k_lower_i < k_upper_i must hold for every i");
  }

  // K - A is increasing in k in the Loewner order, so positive definiteness
  // at the lower corner covers the whole box.
  try {
    Factor(spec, ActionProfile(spec.k_lower_));
  } catch (const NotPositiveDefiniteError&) {
    throw InvalidConfigError(
        "K - A is not positive definite at the lower corner of the box");
  }
  return spec;
}

bool GameSpec::Contains(const ActionProfile& k) const {
  return k.size() == n() && (k.k.array() >= k_lower_.array()).all() &&
         (k.k.array() <= k_upper_.array()).all();
}

Eigen::MatrixXd Resolvent(const GameSpec& spec, const ActionProfile& k) {
  const auto llt = Factor(spec, k);
  Eigen::MatrixXd m =
      llt.solve(Eigen::MatrixXd::Identity(spec.n(), spec.n()));
  return 0.5 * (m + m.transpose());
}

CostGradientReport Evaluate(const GameSpec& spec, const ActionProfile& k) {
  const Eigen::MatrixXd m = Resolvent(spec, k);
  const Eigen::ArrayXd f = m.diagonal().array();
  const Eigen::ArrayXd rho = spec.rho().array();
  const Eigen::ArrayXd gain = k.k.array();
  const Eigen::ArrayXd weight = 1.0 + rho * gain.square();

  CostGradientReport report;
  report.f = f.matrix();
  report.J = (0.5 * weight * f).matrix();
  report.g = (rho * gain * f - 0.5 * weight * f.square()).matrix();
  report.h = (f * (rho * (1.0 - gain * f).square() + f.square())).matrix();
  return report;
}

Eigen::VectorXd Cost(const GameSpec& spec, const ActionProfile& k) {
  return Evaluate(spec, k).J;
}

Eigen::VectorXd ExactGradient(const GameSpec& spec, const ActionProfile& k) {
  return Evaluate(spec, k).g;
}

double MarginalCostFromCost(double cost, double gain, double rho) {
  return 2.0 * cost / (1.0 + rho * gain * gain) * (rho * gain - cost);
}

Eigen::VectorXd SecondDerivative(const GameSpec& spec,
                                 const ActionProfile& k) {
  return Evaluate(spec, k).h;
}

Eigen::MatrixXd PseudogradientJacobian(const GameSpec& spec,
                                       const ActionProfile& k) {
  const Eigen::MatrixXd m = Resolvent(spec, k);
  const int n = spec.n();
  Eigen::MatrixXd jac(n, n);
  for (int i = 0; i < n; ++i) {
    const double f = m(i, i);
    const double rho = spec.rho()(i);
    const double gain = k[i];
    // dg_i/df_i, holding k_i fixed.
    const double dg_df = rho * gain - (1.0 + rho * gain * gain) * f;
    for (int j = 0; j < n; ++j) {
      if (i == j) {
        const double slack = 1.0 - gain * f;
        jac(i, i) = f * (rho * slack * slack + f * f);
      } else {
        jac(i, j) = -dg_df * m(i, j) * m(i, j);
      }
    }
  }
  return jac;
}

double StabilityMargin(const GameSpec& spec, const ActionProfile& k) {
  CheckSize(spec, k);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(ClosedLoopGap(spec, k),
                                                     Eigen::EigenvaluesOnly);
  return eig.eigenvalues().minCoeff();
}

}  // namespace nashlq
