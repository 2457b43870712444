#include "nashlq/sim.h"

#include <cmath>
#include <random>
#include <set>

#include <gtest/gtest.h>

#include "nashlq/presets.h"
#include "test_util.h"

namespace nashlq {
namespace {

using ::nashlq::testing::DrawGame;
using ::nashlq::testing::DrawProfile;
using ::nashlq::testing::MakeSpec;

GameSpec Scalar(double a, double rho) {
  return GameSpec::Create(Eigen::MatrixXd::Constant(1, 1, a),
                          Eigen::VectorXd::Constant(1, rho),
                          Eigen::VectorXd::Constant(1, 10.0));
}

ActionProfile Profile(std::initializer_list<double> values) {
  Eigen::VectorXd k(values.size());
  int i = 0;
  for (double v : values) k(i++) = v;
  return ActionProfile(k);
}

// ---- RNG -------------------------------------------------------------------

TEST(CounterRngTest, DeterministicPerKey) {
  CounterRng a(7, 1, 2), b(7, 1, 2);
  for (int i = 0; i < 100; ++i) EXPECT_EQ(a.NextU64(), b.NextU64());
}

TEST(CounterRngTest, KeysAreDistinct) {
  std::set<std::uint64_t> first;
  for (std::uint64_t seed = 0; seed < 4; ++seed) {
    for (std::uint64_t stream = 0; stream < 4; ++stream) {
      for (std::uint64_t sub = 0; sub < 4; ++sub) {
        first.insert(CounterRng(seed, stream, sub).NextU64());
      }
    }
  }
  EXPECT_EQ(first.size(), 64u);
}

TEST(CounterRngTest, UniformStaysInOpenInterval) {
  CounterRng rng(0, 0, 0);
  for (int i = 0; i < 100000; ++i) {
    const double u = rng.Uniform01();
    ASSERT_GT(u, 0.0);
    ASSERT_LT(u, 1.0);
  }
}

TEST(SampleInitialStateTest, UnitVarianceZeroMean) {
  CounterRng rng(3, 0, 0);
  const int draws = 1000000;
  double sum = 0.0, sum_sq = 0.0, max_abs = 0.0;
  for (int i = 0; i < draws; ++i) {
    const double x = SampleInitialState(1, rng)(0);
    sum += x;
    sum_sq += x * x;
    max_abs = std::max(max_abs, std::abs(x));
  }
  const double mean = sum / draws;
  EXPECT_LT(std::abs(mean), 0.01);
  EXPECT_LT(std::abs(sum_sq / draws - mean * mean - 1.0), 0.02);
  EXPECT_LE(max_abs, std::sqrt(3.0));
}

TEST(SampleInitialStateTest, ComponentsUncorrelated) {
  CounterRng rng(4, 0, 0);
  const int draws = 200000;
  double cross = 0.0;
  for (int i = 0; i < draws; ++i) {
    const Eigen::VectorXd x = SampleInitialState(2, rng);
    cross += x(0) * x(1);
  }
  EXPECT_LT(std::abs(cross / draws), 0.01);
}

// ---- Closed-loop state -----------------------------------------------------

TEST(SimulateStateTest, ScalarDecay) {
  const GameSpec spec = Scalar(-1.0, 0.0);
  const Eigen::VectorXd x = SimulateState(
      spec, Profile({1.0}), Eigen::VectorXd::Constant(1, 1.0), 1.0);
  EXPECT_NEAR(x(0), std::exp(-2.0), 1e-15);
}

TEST(SimulateStateTest, InitialValueAndNegativeTime) {
  const GameSpec spec = PaperPreset().Game();
  const ActionProfile k(PaperPreset().round1_final);
  const Eigen::VectorXd x0 = Eigen::VectorXd::LinSpaced(5, -1.0, 1.0);
  EXPECT_LT((SimulateState(spec, k, x0, 0.0) - x0).cwiseAbs().maxCoeff(),
            1e-14);
  EXPECT_THROW(SimulateState(spec, k, x0, -1.0), std::invalid_argument);
}

TEST(SimulateStateTest, MatchesMatrixExponentialSeries) {
  Eigen::MatrixXd a(2, 2);
  a << -1.0, 0.3, 0.3, -2.0;
  const GameSpec spec = GameSpec::Create(a, Eigen::VectorXd::Zero(2),
                                         Eigen::VectorXd::Ones(2));
  const ActionProfile k = Profile({0.5, 0.25});
  Eigen::MatrixXd closed = a;
  closed.diagonal() -= k.k;
  // Taylor series for exp((A - K) t) at t = 0.7.
  const double t = 0.7;
  Eigen::MatrixXd term = Eigen::MatrixXd::Identity(2, 2);
  Eigen::MatrixXd expm = term;
  for (int j = 1; j < 40; ++j) {
    term = term * closed * t / j;
    expm += term;
  }
  const Eigen::Vector2d x0(1.0, -0.5);
  EXPECT_LT((SimulateState(spec, k, x0, t) - expm * x0).cwiseAbs().maxCoeff(),
            1e-14);
}

// ---- Trajectory cost -------------------------------------------------------

TEST(TrajectoryCostTest, ScalarClosedForm) {
  // dx = -2x, x0 = 1: int_0^T x^2 = (1 - e^{-4T}) / 4, weight 1 + rho k^2 = 2.
  const GameSpec spec = Scalar(-1.0, 1.0);
  SimConfig config;
  config.horizon = 3.0;
  const Eigen::VectorXd cost = TrajectoryCost(
      spec, Profile({1.0}), Eigen::VectorXd::Constant(1, 1.0), config);
  EXPECT_NEAR(cost(0), 2.0 * (1.0 - std::exp(-12.0)) / 4.0, 1e-15);
}

TEST(TrajectoryCostTest, QuadratureConvergesToExact) {
  std::mt19937_64 gen(21);
  for (int trial = 0; trial < 20; ++trial) {
    const GameSpec spec = MakeSpec(DrawGame(gen, 1 + trial % 5));
    const ActionProfile k = DrawProfile(gen, spec);
    CounterRng rng(trial, 0, 0);
    const Eigen::VectorXd x0 = SampleInitialState(spec.n(), rng);
    SimConfig exact;
    exact.horizon = 20.0;
    SimConfig quad = exact;
    quad.integrator = Integrator::kQuadrature;
    quad.dt = 1e-3;
    const Eigen::VectorXd ce = TrajectoryCost(spec, k, x0, exact);
    const Eigen::VectorXd cq = TrajectoryCost(spec, k, x0, quad);
    for (int i = 0; i < spec.n(); ++i) {
      // Trapezoid error is about (dt lambda)^2 / 3 with lambda below ~8.
      EXPECT_NEAR(cq(i), ce(i), 1e-4 * ce(i) + 1e-14) << trial << ' ' << i;
    }
  }
}

TEST(TrajectoryCostTest, QuadratureStepRoundsUp) {
  // T / dt not an integer: the grid uses ceil(T / dt) uniform steps.
  const GameSpec spec = Scalar(-1.0, 0.0);
  SimConfig quad;
  quad.integrator = Integrator::kQuadrature;
  quad.horizon = 1.0;
  quad.dt = 0.3;
  const double h = 0.25;
  double expected = 0.5 * (1.0 + std::exp(-4.0));
  for (int j = 1; j < 4; ++j) expected += std::exp(-4.0 * j * h);
  expected *= h;
  const Eigen::VectorXd cost = TrajectoryCost(
      spec, Profile({1.0}), Eigen::VectorXd::Constant(1, 1.0), quad);
  EXPECT_NEAR(cost(0), expected, 1e-14);
}

// ---- Exponential integral --------------------------------------------------

TEST(ExponentialIntegralTest, ApproachesHalfResolvent) {
  std::mt19937_64 gen(22);
  for (int trial = 0; trial < 10; ++trial) {
    const GameSpec spec = MakeSpec(DrawGame(gen, 2 + trial % 4));
    const ActionProfile k = DrawProfile(gen, spec, 0.5);
    const double lambda_min = StabilityMargin(spec, k);
    const double horizon = 20.0 / lambda_min;
    const double dt = 1e-3 / (1.0 + spec.a().cwiseAbs().maxCoeff() + 5.0);
    const Eigen::MatrixXd e = ExponentialIntegral(spec, k, horizon, dt);
    const Eigen::MatrixXd half = 0.5 * Resolvent(spec, k);
    EXPECT_LT((e - half).cwiseAbs().maxCoeff() / half.cwiseAbs().maxCoeff(),
              1e-6)
        << trial;
  }
}

TEST(ExponentialIntegralTest, RejectsBadArguments) {
  const GameSpec spec = Scalar(-1.0, 0.0);
  EXPECT_THROW(ExponentialIntegral(spec, Profile({1.0}), 0.0, 0.1),
               std::invalid_argument);
  EXPECT_THROW(ExponentialIntegral(spec, Profile({1.0}), 1.0, -0.1),
               std::invalid_argument);
}

// ---- Monte Carlo ------------------------------------------------------------

TEST(MonteCarloTest, SingleTrajectoryEqualsTrajectoryCost) {
  const GameSpec spec = PaperPreset().Game();
  const ActionProfile k(PaperPreset().round1_final);
  SimConfig config;
  config.batch_size = 1;
  config.seed = 9;
  const TrajectoryBatch batch = SimulateBatch(spec, k, config, 3);
  const Eigen::VectorXd mc = MonteCarloCost(spec, k, config, 3);
  const Eigen::VectorXd direct =
      TrajectoryCost(spec, k, batch.x0.row(0).transpose(), config);
  EXPECT_EQ(mc, direct);
}

TEST(MonteCarloTest, DeterministicAcrossThreadCounts) {
  const GameSpec spec = PaperPreset().Game();
  const ActionProfile k(PaperPreset().round2_final);
  SimConfig config;
  config.batch_size = 257;
  config.seed = 5;
  const Eigen::VectorXd serial = MonteCarloCost(spec, k, config, 11);
  for (int threads : {2, 3, 8, 0}) {
    config.threads = threads;
    EXPECT_EQ(MonteCarloCost(spec, k, config, 11), serial) << threads;
  }
  config.integrator = Integrator::kQuadrature;
  config.horizon = 20.0;
  config.threads = 1;
  const Eigen::VectorXd quad_serial = MonteCarloCost(spec, k, config, 11);
  config.threads = 4;
  EXPECT_EQ(MonteCarloCost(spec, k, config, 11), quad_serial);
}

TEST(MonteCarloTest, StreamsAndSeedsChangeTheBatch) {
  const GameSpec spec = ScalarPreset();
  SimConfig config;
  config.batch_size = 10;
  const Eigen::VectorXd base = MonteCarloCost(spec, Profile({1.0}), config, 0);
  EXPECT_NE(MonteCarloCost(spec, Profile({1.0}), config, 1), base);
  config.seed = 1;
  EXPECT_NE(MonteCarloCost(spec, Profile({1.0}), config, 0), base);
}

TEST(MonteCarloTest, ScalarMeanNearClosedForm) {
  const GameSpec spec = Scalar(-1.0, 1.0);
  SimConfig config;
  config.batch_size = 10000;
  config.horizon = 50.0;
  const double mc = MonteCarloCost(spec, Profile({1.0}), config)(0);
  EXPECT_NEAR(mc, 0.5, 0.025);
}

TEST(MonteCarloTest, TruncationBiasIsOneSided) {
  // Finite horizons only drop a positive tail, so every trajectory cost
  // grows with T.
  std::mt19937_64 gen(23);
  for (int trial = 0; trial < 20; ++trial) {
    const GameSpec spec = MakeSpec(DrawGame(gen, 1 + trial % 5));
    const ActionProfile k = DrawProfile(gen, spec);
    SimConfig shorter, longer;
    shorter.batch_size = longer.batch_size = 50;
    shorter.horizon = 0.5;
    longer.horizon = 5.0;
    const TrajectoryBatch s = SimulateBatch(spec, k, shorter);
    const TrajectoryBatch l = SimulateBatch(spec, k, longer);
    ASSERT_EQ(s.x0, l.x0);
    EXPECT_TRUE((s.per_player_cost.array() <= l.per_player_cost.array()).all());
    EXPECT_TRUE((s.per_player_cost.array() >= 0.0).all());
  }
}

TEST(MonteCarloTest, UnstableProfileThrows) {
  Eigen::MatrixXd a(2, 2);
  a << 1.0, 0.0, 0.0, -1.0;
  const GameSpec spec = GameSpec::Create(a, Eigen::VectorXd::Zero(2),
                                         Eigen::VectorXd::Constant(2, 5.0));
  EXPECT_THROW(MonteCarloCost(spec, Profile({0.0, 0.0}), SimConfig{}),
               NotPositiveDefiniteError);
}

// ---- Config -----------------------------------------------------------------

TEST(SimConfigTest, Validation) {
  SimConfig c;
  EXPECT_NO_THROW(c.Validate());
  c.batch_size = 0;
  EXPECT_THROW(c.Validate(), InvalidConfigError);
  c = SimConfig{};
  c.horizon = -1.0;
  EXPECT_THROW(c.Validate(), InvalidConfigError);
  c = SimConfig{};
  c.dt = 0.0;
  EXPECT_THROW(c.Validate(), InvalidConfigError);
  c = SimConfig{};
  c.threads = -2;
  EXPECT_THROW(c.Validate(), InvalidConfigError);
}

TEST(IntegratorTest, Names) {
  EXPECT_EQ(ParseIntegrator("exact"), Integrator::kExact);
  EXPECT_EQ(ParseIntegrator("quadrature"), Integrator::kQuadrature);
  EXPECT_EQ(IntegratorName(Integrator::kQuadrature), "quadrature");
  EXPECT_THROW(ParseIntegrator("rk4"), InvalidConfigError);
}

}  // namespace
}  // namespace nashlq
