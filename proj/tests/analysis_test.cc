#include "nashlq/analysis.h"

#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "nashlq/presets.h"
#include "test_util.h"

namespace nashlq {
namespace {

using ::nashlq::testing::DrawGame;
using ::nashlq::testing::DrawProfile;
using ::nashlq::testing::MakeSpec;

ActionProfile Profile(std::initializer_list<double> values) {
  Eigen::VectorXd k(values.size());
  int i = 0;
  for (double v : values) k(i++) = v;
  return ActionProfile(k);
}

// ---- Two-player mu ---------------------------------------------------------

TEST(TwoPlayerMuTest, WorkedExample) {
  // d1 = d2 = 2, a12^4 = 0.0625: 4 * 8 * 8 - 0.0625 * 16.
  EXPECT_DOUBLE_EQ(TwoPlayerMu(-2.0, -0.5, -2.0, 0.0, 0.0), 255.0);
}

TEST(TwoPlayerMuTest, SignMatchesRosenEigenvalue) {
  std::mt19937_64 gen(41);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 1000; ++trial) {
    const double a12 = 2.0 * u(gen) - 1.0;
    const double a11 = -std::abs(a12) - 1e-3 - 2.0 * u(gen);
    const double a22 = -std::abs(a12) - 1e-3 - 2.0 * u(gen);
    const double k1 = 5.0 * u(gen), k2 = 5.0 * u(gen);
    Eigen::MatrixXd a(2, 2);
    a << a11, a12, a12, a22;
    const GameSpec spec = GameSpec::Create(
        a, Eigen::VectorXd::Zero(2), Eigen::VectorXd::Constant(2, 5.0));
    const double eig = RosenCheck(spec, Profile({k1, k2}));
    const double mu = TwoPlayerMu(a11, a12, a22, k1, k2);
    EXPECT_EQ(mu > 0.0, eig > 0.0) << trial;
    // det(G + G^T) = mu / nu^6 with nu = d1 d2 - a12^2.
    const double d1 = k1 - a11, d2 = k2 - a22, nu = d1 * d2 - a12 * a12;
    const Eigen::MatrixXd g = PseudogradientJacobian(spec, Profile({k1, k2}));
    const double det = (g + g.transpose()).determinant();
    EXPECT_NEAR(det * std::pow(nu, 6), mu, 1e-9 * std::abs(mu)) << trial;
  }
}

TEST(TwoPlayerMuTest, Preconditions) {
  EXPECT_THROW(TwoPlayerMu(-0.4, 0.5, -2.0, 0.0, 0.0),
               PreconditionViolatedError);
  EXPECT_THROW(TwoPlayerMu(-2.0, 0.5, -2.0, -1.0, 0.0),
               PreconditionViolatedError);
}

TEST(RosenCheckTest, PaperTwoPlayerDisplay) {
  // Example system in the two-player analysis, evaluated at k = 0.
  Eigen::MatrixXd a(2, 2);
  a << -2.0, -0.5, -0.5, -2.0;
  const GameSpec spec = GameSpec::Create(a, Eigen::VectorXd::Zero(2),
                                         Eigen::VectorXd::Constant(2, 20.0));
  const Eigen::MatrixXd g = PseudogradientJacobian(spec, Profile({0.0, 0.0}));
  const Eigen::MatrixXd sym = g + g.transpose();
  // 2 d^3 / nu^3 and a12^2 (d1 + d2) / nu^3 with d = 2, nu = 3.75.
  const double nu3 = 3.75 * 3.75 * 3.75;
  EXPECT_NEAR(sym(0, 0), 16.0 / nu3, 1e-15);
  EXPECT_NEAR(sym(0, 1), 1.0 / nu3, 1e-15);
  EXPECT_NEAR(sym(1, 1), 16.0 / nu3, 1e-15);
  EXPECT_NEAR(RosenCheck(spec, Profile({0.0, 0.0})), 15.0 / nu3, 1e-15);
}

// ---- Gershgorin -------------------------------------------------------------

TEST(GershgorinTest, Margins) {
  Eigen::MatrixXd a(3, 3);
  a << -3.0, 1.0, -0.5, 1.0, -2.0, 0.5, -0.5, 0.5, -1.0;
  const Eigen::VectorXd m = GershgorinMargins(a);
  EXPECT_DOUBLE_EQ(m(0), 1.5);
  EXPECT_DOUBLE_EQ(m(1), 0.5);
  EXPECT_DOUBLE_EQ(m(2), 0.0);
  EXPECT_FALSE(IsSddNegativeDiag(a));
  a(2, 2) = -1.1;
  EXPECT_TRUE(IsSddNegativeDiag(a));
  EXPECT_FALSE(IsSddNegativeDiag(a, 0.2));
}

TEST(GershgorinTest, PaperMatrixIsSdd) {
  const PaperExperiment& paper = PaperPreset();
  EXPECT_TRUE(IsSddNegativeDiag(paper.a));
  EXPECT_NEAR(GershgorinMargins(paper.a)(0), 0.0342 - 0.0336, 1e-12);
}

// ---- Generators ---------------------------------------------------------------

TEST(GeneratorTest, SddMatricesAreSddAndDeterministic) {
  MatrixEnsembleConfig config;
  for (int n = 1; n <= 8; ++n) {
    for (std::uint64_t sub = 0; sub < 20; ++sub) {
      CounterRng rng(5, 1, sub), again(5, 1, sub);
      const Eigen::MatrixXd a = GenerateSddMatrix(n, config, rng);
      EXPECT_EQ(a, GenerateSddMatrix(n, config, again));
      EXPECT_TRUE(IsSddNegativeDiag(a, 0.999 * config.dominance_margin));
      EXPECT_LE(a.cwiseAbs().maxCoeff() - a.diagonal().cwiseAbs().maxCoeff(),
                0.0);
    }
  }
}

TEST(GeneratorTest, ShiftedSymmetricIsNegativeDefinite) {
  MatrixEnsembleConfig config;
  config.offdiag_scale = 1.0;
  for (std::uint64_t sub = 0; sub < 50; ++sub) {
    CounterRng rng(6, 1, sub);
    const Eigen::MatrixXd a = GenerateShiftedSymmetricMatrix(4, config, rng);
    EXPECT_EQ(a, a.transpose());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(a);
    EXPECT_LT(eig.eigenvalues().maxCoeff(), -0.999 * config.dominance_margin);
  }
}

TEST(GeneratorTest, StratifiedSamplesCoverEachStratumOnce) {
  CounterRng rng(7, 3, 0);
  const Eigen::Vector3d lower(0.0, 1.0, -2.0), upper(1.0, 3.0, 2.0);
  const int count = 50;
  const auto samples = StratifiedBoxSamples(lower, upper, count, rng);
  ASSERT_EQ(static_cast<int>(samples.size()), count);
  for (int d = 0; d < 3; ++d) {
    std::vector<int> hits(count, 0);
    for (const ActionProfile& p : samples) {
      const double u = (p[d] - lower(d)) / (upper(d) - lower(d));
      ASSERT_GE(u, 0.0);
      ASSERT_LT(u, 1.0);
      ++hits[static_cast<int>(u * count)];
    }
    for (int h : hits) EXPECT_EQ(h, 1);
  }
}

TEST(GeneratorTest, DefaultUpperBound) {
  Eigen::MatrixXd a(2, 2);
  a << -0.2, 0.0, 0.0, -3.0;
  const Eigen::VectorXd ub = DefaultSweepUpperBound(a);
  EXPECT_DOUBLE_EQ(ub(0), 10.0);
  EXPECT_DOUBLE_EQ(ub(1), 30.0);
}

// ---- Jacobian spot check -----------------------------------------------------

TEST(JacobianSpotCheckTest, FiniteDifferenceAgrees) {
  std::mt19937_64 gen(42);
  for (int trial = 0; trial < 30; ++trial) {
    const GameSpec spec = MakeSpec(DrawGame(gen, 2 + trial % 5));
    const ActionProfile k = DrawProfile(gen, spec, 1e-3);
    EXPECT_LT(JacobianRelativeError(spec, k), kJacobianFdTolerance) << trial;
  }
}

// ---- Sweeps --------------------------------------------------------------------

TEST(SweepRosenTest, DiagonalGameIsStrictlyMonotone) {
  CounterRng rng(0, 5, 0);
  JacobianSpotCheck audit;
  const RosenReport r = SweepRosen(DiagonalPreset(), 300, rng, 100, &audit);
  EXPECT_EQ(r.samples, 300);
  EXPECT_FALSE(r.violated);
  EXPECT_GT(r.min_eig, 0.0);
  EXPECT_TRUE(DiagonalPreset().Contains(r.witness));
  EXPECT_EQ(audit.checks, 3);
  EXPECT_EQ(audit.failures, 0);
}

TEST(SweepRosenTest, WitnessAttainsMinimum) {
  CounterRng rng(1, 5, 0);
  const GameSpec spec = TwoPlayerPreset();
  const RosenReport r = SweepRosen(spec, 200, rng);
  EXPECT_DOUBLE_EQ(RosenCheck(spec, r.witness), r.min_eig);
}

TEST(ConjectureSweepTest, SmallSddSweepHasNoViolations) {
  SweepConfig config;
  config.ensemble.n = 2;
  config.n_max = 4;
  config.ensemble.count = 12;
  config.box_samples = 50;
  config.fd_every = 10;
  const SweepReport report = ConjectureSweep(config);
  ASSERT_EQ(report.per_matrix.size(), 12u);
  EXPECT_TRUE(report.violations.empty());
  EXPECT_GT(report.global_min, 0.0);
  EXPECT_EQ(report.dimensions[0], 2);
  EXPECT_EQ(report.dimensions[1], 3);
  EXPECT_EQ(report.dimensions[2], 4);
  EXPECT_EQ(report.dimensions[3], 2);
  EXPECT_EQ(report.audit.failures, 0);
  EXPECT_GT(report.audit.checks, 0);
}

TEST(ConjectureSweepTest, ReproducibleFromSeed) {
  SweepConfig config;
  config.ensemble.count = 3;
  config.box_samples = 20;
  config.ensemble.seed = 77;
  const SweepReport a = ConjectureSweep(config);
  const SweepReport b = ConjectureSweep(config);
  for (int i = 0; i < 3; ++i) {
    EXPECT_EQ(a.per_matrix[i].min_eig, b.per_matrix[i].min_eig);
    EXPECT_EQ(EnsembleMatrix(config, i), EnsembleMatrix(config, i));
  }
  config.ensemble.seed = 78;
  EXPECT_NE(EnsembleMatrix(config, 0), EnsembleMatrix(SweepConfig{}, 0));
}

TEST(ConjectureSweepTest, SweepGameRhoInRange) {
  SweepConfig config;
  config.rho_min = 0.2;
  config.rho_max = 0.3;
  for (int i = 0; i < 10; ++i) {
    const GameSpec spec = SweepGame(config, i);
    EXPECT_GE(spec.rho().minCoeff(), 0.2);
    EXPECT_LE(spec.rho().maxCoeff(), 0.3);
    EXPECT_FALSE(spec.lower_bounds_relaxed());
  }
}

TEST(SweepConfigTest, Validation) {
  SweepConfig c;
  EXPECT_NO_THROW(c.Validate());
  c.box_samples = 0;
  EXPECT_THROW(c.Validate(), InvalidConfigError);
  c = SweepConfig{};
  c.rho_min = 2.0;
  EXPECT_THROW(c.Validate(), InvalidConfigError);
  c = SweepConfig{};
  c.ensemble.offdiag_scale = 0.0;
  EXPECT_THROW(c.Validate(), InvalidConfigError);
  EXPECT_THROW(ParseMatrixFamily("random"), InvalidConfigError);
  EXPECT_EQ(ParseMatrixFamily("shifted-symmetric"),
            MatrixFamily::kShiftedSymmetric);
}

}  // namespace
}  // namespace nashlq
