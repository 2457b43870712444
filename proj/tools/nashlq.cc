// nashlq: gradient-play experiments on symmetric LQ games.
//
//   nashlq learn --config game.yaml --mode model-free --out runs/a
//   nashlq reproduce-paper --mode exact --out runs/paper
//   nashlq check-rosen --config sweep.yaml
//   nashlq gen-matrix --n 5 --seed 7 --out runs/m
//   nashlq simulate --preset paper --k 1.31,1.89,1.46,3.85,1.03
//
// Exit codes: 0 ok, 1 check failed or Rosen violation found, 2 invalid
// configuration, 3 solver failure (K - A not positive definite).

#include <cstdint>
#include <cstdlib>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "nashlq/experiment.h"

namespace {

using nashlq::experiment::ExperimentConfig;
using nashlq::experiment::kExitConfigInvalid;

// Flags shared by every subcommand. Unset flags leave config values alone.
struct Overrides {
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> mode;
  std::optional<int> stages;
  std::optional<double> step_size;
  std::optional<int> batch;
  std::optional<double> horizon;
  std::optional<double> dt;
  std::optional<std::string> integrator;
  std::optional<int> threads;
  std::optional<std::string> out;
  std::optional<std::string> format;
  std::optional<std::string> preset;
  std::optional<std::string> k0;
  std::optional<std::string> k;
  std::optional<double> grad_tolerance;
  std::optional<int> n;
  std::optional<int> samples;
  bool ensemble = false;
};

void AddCommonFlags(CLI::App* cmd, Overrides& o) {
  cmd->add_option("--config", o.config_path, "YAML config file");
  cmd->add_option("--seed", o.seed, "RNG seed (default $NASHLQ_SEED or 0)");
  cmd->add_option("--mode", o.mode, "exact | model-free");
  cmd->add_option("--stages", o.stages, "stage count L");
  cmd->add_option("--step-size", o.step_size, "gradient step size");
  cmd->add_option("--batch", o.batch, "trajectories per cost estimate");
  cmd->add_option("--horizon", o.horizon, "sampling horizon T_s in seconds");
  cmd->add_option("--dt", o.dt, "quadrature step in seconds");
  cmd->add_option("--integrator", o.integrator, "exact | quadrature");
  cmd->add_option("--threads", o.threads, "simulation threads (0 = all)");
  cmd->add_option("--out", o.out, "output directory");
  cmd->add_option("--format", o.format, "csv | json-lines");
}

void AddGameFlags(CLI::App* cmd, Overrides& o) {
  cmd->add_option("--preset", o.preset, "paper | scalar | diagonal | two-player");
  cmd->add_option("--k0", o.k0, "initial profile, comma separated");
  cmd->add_option("--grad-tolerance", o.grad_tolerance,
                  "exact-mode early exit threshold on ||g||_inf");
}

void Apply(const Overrides& o, ExperimentConfig& c) {
  using namespace nashlq;
  if (o.seed) c.seed = *o.seed;
  if (o.mode) c.learn.mode = ParseLearnMode(*o.mode);
  if (o.stages) c.learn.stages = *o.stages;
  if (o.step_size) c.learn.step_size = *o.step_size;
  if (o.batch) c.learn.sim.batch_size = *o.batch;
  if (o.horizon) c.learn.sim.horizon = *o.horizon;
  if (o.dt) c.learn.sim.dt = *o.dt;
  if (o.integrator) c.learn.sim.integrator = ParseIntegrator(*o.integrator);
  if (o.threads) c.learn.sim.threads = *o.threads;
  if (o.out) c.output_dir = *o.out;
  if (o.format) c.format = experiment::ParseOutputFormat(*o.format);
  if (o.preset) c.preset = *o.preset;
  if (o.k0) c.k0 = experiment::ParseVectorList(*o.k0);
  if (o.k) c.sim_k = experiment::ParseVectorList(*o.k);
  if (o.grad_tolerance) c.learn.grad_tolerance = *o.grad_tolerance;
  if (o.samples) c.rosen_samples = *o.samples;
  if (o.n) {
    if (!c.generate) c.generate = SweepConfig{};
    c.generate->ensemble.n = *o.n;
  }
  if (o.ensemble && !c.ensemble) {
    c.ensemble = SweepConfig{};
    c.ensemble->ensemble.n = 2;
    c.ensemble->n_max = 6;
  }
}

ExperimentConfig Resolve(const Overrides& o) {
  ExperimentConfig config;
  if (!o.config_path.empty()) config = nashlq::experiment::LoadConfig(o.config_path);
  Apply(o, config);
  nashlq::experiment::ApplySeedDefault(config, std::getenv("NASHLQ_SEED"));
  return config;
}

int RunReproduce(const Overrides& o) {
  using namespace nashlq;
  ExperimentConfig base;
  if (!o.config_path.empty()) base = experiment::LoadConfig(o.config_path);
  Apply(o, base);
  experiment::ApplySeedDefault(base, std::getenv("NASHLQ_SEED"));

  auto config = experiment::DefaultReproduceConfig(base.learn.mode, base.Seed());
  if (o.stages) config.learn.stages = *o.stages;
  if (o.step_size) config.learn.step_size = *o.step_size;
  if (o.batch) config.learn.sim.batch_size = *o.batch;
  if (o.horizon) config.learn.sim.horizon = *o.horizon;
  if (o.dt) config.learn.sim.dt = *o.dt;
  if (o.integrator) config.learn.sim.integrator = base.learn.sim.integrator;
  if (o.threads) config.learn.sim.threads = *o.threads;
  if (o.grad_tolerance) config.learn.grad_tolerance = *o.grad_tolerance;
  config.output_dir = base.output_dir;
  config.format = base.format;
  return experiment::CmdReproducePaper(config, std::cout);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Gradient play on n-player symmetric LQ games"};
  app.require_subcommand(1);
  Overrides o;

  auto* learn = app.add_subcommand("learn", "run projected gradient play");
  AddCommonFlags(learn, o);
  AddGameFlags(learn, o);

  auto* reproduce = app.add_subcommand(
      "reproduce-paper", "rerun the five-player two-round experiment");
  AddCommonFlags(reproduce, o);
  reproduce->add_option("--grad-tolerance", o.grad_tolerance,
                        "exact-mode early exit threshold on ||g||_inf");

  auto* rosen = app.add_subcommand("check-rosen",
                                   "sample min eig(G + G^T) over the box");
  AddCommonFlags(rosen, o);
  AddGameFlags(rosen, o);
  rosen->add_option("--samples", o.samples, "box samples (single game)");
  rosen->add_flag("--ensemble", o.ensemble,
                  "sweep random SDD games instead of the configured game");

  auto* gen = app.add_subcommand("gen-matrix",
                                 "generate a symmetric SDD state matrix");
  AddCommonFlags(gen, o);
  gen->add_option("--n", o.n, "dimension");

  auto* simulate = app.add_subcommand(
      "simulate", "Monte Carlo cost estimate at one profile");
  AddCommonFlags(simulate, o);
  AddGameFlags(simulate, o);
  simulate->add_option("--k", o.k, "profile, comma separated");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitConfigInvalid;
  }

  using namespace nashlq::experiment;
  try {
    if (*reproduce) return RunReproduce(o);
    const ExperimentConfig config = Resolve(o);
    if (*learn) return CmdLearn(config, std::cout);
    if (*rosen) return CmdCheckRosen(config, std::cout);
    if (*gen) return CmdGenMatrix(config, std::cout);
    if (*simulate) return CmdSimulate(config, std::cout);
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: invalid configuration: " << e.what() << '\n';
    return kExitConfigInvalid;
  }
  return kExitConfigInvalid;
}
