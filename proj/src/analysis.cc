#include "nashlq/analysis.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

namespace nashlq {
namespace {

// CounterRng stream ids used by the sweep.
constexpr std::uint64_t kMatrixStream = 1;
constexpr std::uint64_t kRhoStream = 2;
constexpr std::uint64_t kBoxStream = 3;

double MinSymmetricEigenvalue(const Eigen::MatrixXd& s) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(s, Eigen::EigenvaluesOnly);
  return eig.eigenvalues().minCoeff();
}

int SweepDimension(const SweepConfig& config, int index) {
  const int lo = config.ensemble.n;
  const int hi = std::max(lo, config.n_max);
  return lo + index % (hi - lo + 1);
}

}  // namespace

double RosenCheck(const GameSpec& spec, const ActionProfile& k) {
  const Eigen::MatrixXd g = PseudogradientJacobian(spec, k);
  return MinSymmetricEigenvalue(g + g.transpose());
}

double TwoPlayerMu(double a11, double a12, double a22, double k1, double k2) {
  if (!(a11 < -std::abs(a12)) || !(a22 < -std::abs(a12))) {
    throw PreconditionViolatedError(
        "two-player mu needs a11 < -|a12| and a22 < -|a12|");
  }
  if (!(k1 >= 0.0) || !(k2 >= 0.0)) {
    throw PreconditionViolatedError("two-player mu needs k1, k2 >= 0");
  }
  const double d1 = k1 - a11;
  const double d2 = k2 - a22;
  const double a12_sq = a12 * a12;
  const double sum = d1 + d2;
  return 4.0 * d1 * d1 * d1 * d2 * d2 * d2 - a12_sq * a12_sq * sum * sum;
}

Eigen::VectorXd GershgorinMargins(const Eigen::MatrixXd& a) {
  const Eigen::Index n = a.rows();
  Eigen::VectorXd margins(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double off = a.row(i).cwiseAbs().sum() - std::abs(a(i, i));
    margins(i) = -a(i, i) - off;
  }
  return margins;
}

bool IsSddNegativeDiag(const Eigen::MatrixXd& a, double margin) {
  if (a.rows() != a.cols() || a.rows() == 0) return false;
  if (a != a.transpose()) return false;
  return (GershgorinMargins(a).array() > margin).all();
}

void MatrixEnsembleConfig::Validate() const {
  if (n < 1) throw InvalidConfigError("ensemble n must be >= 1");
  if (count < 1) throw InvalidConfigError("ensemble count must be >= 1");
  if (!(offdiag_scale > 0.0)) {
    throw InvalidConfigError("offdiag_scale must be positive");
  }
  if (!(dominance_margin > 0.0)) {
    throw InvalidConfigError("dominance_margin must be positive");
  }
}

Eigen::MatrixXd GenerateSddMatrix(int n, const MatrixEnsembleConfig& config,
                                  CounterRng& rng) {
  const double scale = config.offdiag_scale;
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      a(i, j) = a(j, i) = rng.Uniform(-scale, scale);
    }
  }
  for (int i = 0; i < n; ++i) {
    const double off = a.row(i).cwiseAbs().sum();
    a(i, i) = -(off + config.dominance_margin + rng.Uniform(0.0, scale));
  }
  return a;
}

Eigen::MatrixXd GenerateShiftedSymmetricMatrix(
    int n, const MatrixEnsembleConfig& config, CounterRng& rng) {
  const double scale = config.offdiag_scale;
  Eigen::MatrixXd a(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = i; j < n; ++j) a(i, j) = a(j, i) = rng.Uniform(-scale, scale);
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(a, Eigen::EigenvaluesOnly);
  const double shift = eig.eigenvalues().maxCoeff() + config.dominance_margin +
                       rng.Uniform(0.0, scale);
  a.diagonal().array() -= shift;
  return a;
}

std::vector<ActionProfile> StratifiedBoxSamples(const Eigen::VectorXd& lower,
                                                const Eigen::VectorXd& upper,
                                                int count, CounterRng& rng) {
  const Eigen::Index n = lower.size();
  std::vector<ActionProfile> samples(count, ActionProfile(Eigen::VectorXd(n)));
  std::vector<int> strata(count);
  for (Eigen::Index d = 0; d < n; ++d) {
    std::iota(strata.begin(), strata.end(), 0);
    for (int s = count - 1; s > 0; --s) {
      const auto pick = static_cast<int>(rng.NextU64() % (s + 1));
      std::swap(strata[s], strata[pick]);
    }
    const double width = upper(d) - lower(d);
    for (int s = 0; s < count; ++s) {
      const double u = (strata[s] + rng.Uniform01()) / count;
      samples[s].k(d) = lower(d) + width * u;
    }
  }
  return samples;
}

Eigen::VectorXd DefaultSweepUpperBound(const Eigen::MatrixXd& a) {
  return (10.0 * a.diagonal().cwiseAbs().array().max(1.0)).matrix();
}

Eigen::MatrixXd FiniteDifferenceJacobian(const GameSpec& spec,
                                         const ActionProfile& k, double step) {
  const int n = spec.n();
  Eigen::MatrixXd jac(n, n);
  for (int j = 0; j < n; ++j) {
    ActionProfile plus = k;
    ActionProfile minus = k;
    plus.k(j) += step;
    minus.k(j) -= step;
    jac.col(j) =
        (ExactGradient(spec, plus) - ExactGradient(spec, minus)) / (2 * step);
  }
  return jac;
}

double JacobianRelativeError(const GameSpec& spec, const ActionProfile& k) {
  const Eigen::MatrixXd closed = PseudogradientJacobian(spec, k);
  const Eigen::MatrixXd numeric = FiniteDifferenceJacobian(spec, k);
  double worst = 0.0;
  for (Eigen::Index j = 0; j < closed.cols(); ++j) {
    const double scale = std::max(numeric.col(j).cwiseAbs().maxCoeff(),
                                  std::numeric_limits<double>::min());
    const double err = (closed.col(j) - numeric.col(j)).cwiseAbs().maxCoeff();
    worst = std::max(worst, err / scale);
  }
  return worst;
}

RosenReport SweepRosen(const GameSpec& spec, int samples, CounterRng& rng,
                       int fd_every, JacobianSpotCheck* audit) {
  if (samples < 1) throw InvalidConfigError("sample count must be >= 1");
  RosenReport report;
  report.min_eig = std::numeric_limits<double>::infinity();
  const auto points =
      StratifiedBoxSamples(spec.k_lower(), spec.k_upper(), samples, rng);
  for (int s = 0; s < samples; ++s) {
    const double eig = RosenCheck(spec, points[s]);
    if (eig < report.min_eig) {
      report.min_eig = eig;
      report.witness = points[s];
    }
    if (audit != nullptr && fd_every > 0 && s % fd_every == 0) {
      const double err = JacobianRelativeError(spec, points[s]);
      ++audit->checks;
      if (err > kJacobianFdTolerance) ++audit->failures;
      audit->max_relative_error = std::max(audit->max_relative_error, err);
    }
  }
  report.samples = samples;
  report.violated = report.min_eig <= 0.0;
  return report;
}

std::string_view MatrixFamilyName(MatrixFamily family) {
  return family == MatrixFamily::kSdd ? "sdd" : "shifted-symmetric";
}

MatrixFamily ParseMatrixFamily(std::string_view name) {
  if (name == "sdd") return MatrixFamily::kSdd;
  if (name == "shifted-symmetric") return MatrixFamily::kShiftedSymmetric;
  throw InvalidConfigError("unknown matrix family '" + std::string(name) +
                           "' (expected sdd or shifted-symmetric)");
}

void SweepConfig::Validate() const {
  ensemble.Validate();
  if (box_samples < 1) throw InvalidConfigError("box_samples must be >= 1");
  if (!(rho_min >= 0.0) || !(rho_max >= rho_min)) {
    throw InvalidConfigError("rho range must satisfy 0 <= rho_min <= rho_max");
  }
  if (fd_every < 0) throw InvalidConfigError("fd_every must be >= 0");
}

Eigen::MatrixXd EnsembleMatrix(const SweepConfig& config, int index) {
  CounterRng rng(config.ensemble.seed, kMatrixStream,
                 static_cast<std::uint64_t>(index));
  const int n = SweepDimension(config, index);
  return config.family == MatrixFamily::kSdd
             ? GenerateSddMatrix(n, config.ensemble, rng)
             : GenerateShiftedSymmetricMatrix(n, config.ensemble, rng);
}

GameSpec SweepGame(const SweepConfig& config, int index) {
  const Eigen::MatrixXd a = EnsembleMatrix(config, index);
  const int n = static_cast<int>(a.rows());
  CounterRng rho_rng(config.ensemble.seed, kRhoStream,
                     static_cast<std::uint64_t>(index));
  Eigen::VectorXd rho(n);
  for (int i = 0; i < n; ++i) {
    rho(i) = rho_rng.Uniform(config.rho_min, config.rho_max);
  }
  return GameSpec::Create(a, rho, DefaultSweepUpperBound(a));
}

SweepReport ConjectureSweep(const SweepConfig& config) {
  config.Validate();
  SweepReport report;
  report.global_min = std::numeric_limits<double>::infinity();
  for (int index = 0; index < config.ensemble.count; ++index) {
    const GameSpec spec = SweepGame(config, index);
    CounterRng box_rng(config.ensemble.seed, kBoxStream,
                       static_cast<std::uint64_t>(index));
    RosenReport rosen = SweepRosen(spec, config.box_samples, box_rng,
                                   config.fd_every, &report.audit);
    if (rosen.min_eig < report.global_min) {
      report.global_min = rosen.min_eig;
      report.global_argmin = index;
    }
    if (rosen.violated) {
      report.violations.push_back({index, config.ensemble.seed, spec.a(),
                                   spec.rho(), rosen.witness, rosen.min_eig});
    }
    report.dimensions.push_back(spec.n());
    report.per_matrix.push_back(std::move(rosen));
  }
  return report;
}

}  // namespace nashlq
