#ifndef NASHLQ_EXPERIMENT_H_
#define NASHLQ_EXPERIMENT_H_

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>

#include <Eigen/Dense>

#include "nashlq/analysis.h"
#include "nashlq/game.h"
#include "nashlq/learning.h"

namespace nashlq::experiment {

inline constexpr int kExitOk = 0;
inline constexpr int kExitViolation = 1;  // Rosen witness or failed check
inline constexpr int kExitConfigInvalid = 2;
inline constexpr int kExitSolverFailure = 3;

enum class OutputFormat { kCsv, kJsonLines };

OutputFormat ParseOutputFormat(std::string_view name);

// Everything a subcommand may need. Fields left unset fall back to presets
// or defaults when the game is built.
struct ExperimentConfig {
  // Game: a preset ("paper", "scalar", "diagonal", "two-player"), explicit
  // entries (which override the preset), or a random SDD generator.
  std::string preset;
  std::optional<Eigen::MatrixXd> a;
  std::optional<Eigen::VectorXd> rho;
  std::optional<Eigen::VectorXd> k_upper;
  std::optional<Eigen::VectorXd> k_lower;
  std::optional<SweepConfig> generate;  // ensemble.n and family used

  std::optional<std::uint64_t> seed;

  LearnConfig learn;
  std::optional<Eigen::VectorXd> k0;
  std::optional<Eigen::VectorXd> sim_k;  // profile for `simulate`

  int rosen_samples = 1000;
  std::optional<SweepConfig> ensemble;  // check-rosen ensemble mode

  std::filesystem::path output_dir = "out";
  OutputFormat format = OutputFormat::kCsv;

  std::uint64_t Seed() const { return seed.value_or(0); }

  // Throws InvalidConfigError.
  GameSpec BuildGame() const;
};

// YAML text or file. Unknown keys are rejected. Throws InvalidConfigError.
ExperimentConfig ParseConfig(std::string_view yaml_text);
ExperimentConfig LoadConfig(const std::filesystem::path& path);

// Fills the seed from an environment value when neither the file nor a flag
// set one. Throws InvalidConfigError when the value is not a u64.
void ApplySeedDefault(ExperimentConfig& config, const char* env_value);

// Parses "1.5,2,3" into a vector. Throws InvalidConfigError.
Eigen::VectorXd ParseVectorList(std::string_view text);

// Subcommands. Each returns a process exit code, writes its files under
// config.output_dir and a human summary to `log`.
int CmdLearn(const ExperimentConfig& config, std::ostream& log);
int CmdSimulate(const ExperimentConfig& config, std::ostream& log);
int CmdCheckRosen(const ExperimentConfig& config, std::ostream& log);
int CmdGenMatrix(const ExperimentConfig& config, std::ostream& log);

// Reproduction of the five-player table. Model-free defaults: 250 stages,
// |B| = 500, T_s = 200, step 1. Exact defaults: up to 20000 stages with an
// early exit at ||g||_inf < 1e-10.
struct ReproduceConfig {
  LearnConfig learn;
  std::filesystem::path output_dir = "out";
  OutputFormat format = OutputFormat::kCsv;
};

ReproduceConfig DefaultReproduceConfig(LearnMode mode, std::uint64_t seed);

// Pass thresholds for the reproduction summary.
inline constexpr double kExactRoundGapTolerance = 1e-6;
inline constexpr double kModelFreeTableTolerance = 0.1;

int CmdReproducePaper(const ReproduceConfig& config, std::ostream& log);

}  // namespace nashlq::experiment

#endif  // NASHLQ_EXPERIMENT_H_
