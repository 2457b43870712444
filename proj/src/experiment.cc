#include "nashlq/experiment.h"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <initializer_list>
#include <ostream>
#include <sstream>
#include <vector>

#include <yaml-cpp/yaml.h>

#include "json.hpp"
#include "nashlq/io.h"
#include "nashlq/presets.h"
#include "nashlq/sim.h"

namespace nashlq::experiment {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

// CounterRng streams owned by the CLI layer.
constexpr std::uint64_t kInitStream = 4;
constexpr std::uint64_t kRosenStream = 5;

// ---- YAML helpers ---------------------------------------------------------

void CheckKeys(const YAML::Node& node, std::string_view section,
               std::initializer_list<std::string_view> allowed) {
  if (!node.IsMap()) {
    throw InvalidConfigError("'" + std::string(section) + "' must be a map");
  }
  for (const auto& entry : node) {
    const auto key = entry.first.as<std::string>();
    if (std::find(allowed.begin(), allowed.end(), key) == allowed.end()) {
      throw InvalidConfigError("unknown key '" + key + "' in " +
                               std::string(section));
    }
  }
}

template <typename T>
T Scalar(const YAML::Node& node, std::string_view name) {
  try {
    return node.as<T>();
  } catch (const YAML::Exception&) {
    throw InvalidConfigError("bad value for '" + std::string(name) + "'");
  }
}

Eigen::VectorXd Vector(const YAML::Node& node, std::string_view name) {
  if (!node.IsSequence()) {
    throw InvalidConfigError("'" + std::string(name) + "' must be a list");
  }
  Eigen::VectorXd v(node.size());
  for (size_t i = 0; i < node.size(); ++i) v(i) = Scalar<double>(node[i], name);
  return v;
}

Eigen::MatrixXd Matrix(const YAML::Node& node, std::string_view name) {
  if (!node.IsSequence() || node.size() == 0) {
    throw InvalidConfigError("'" + std::string(name) +
                             "' must be a non-empty list of rows");
  }
  const size_t rows = node.size();
  const Eigen::VectorXd first = Vector(node[0], name);
  Eigen::MatrixXd m(rows, first.size());
  for (size_t r = 0; r < rows; ++r) {
    const Eigen::VectorXd row = Vector(node[r], name);
    if (row.size() != first.size()) {
      throw InvalidConfigError("'" + std::string(name) + "' has ragged rows");
    }
    m.row(r) = row.transpose();
  }
  return m;
}

void ReadRange(const YAML::Node& node, std::string_view name, double& lo,
               double& hi) {
  const Eigen::VectorXd range = Vector(node, name);
  if (range.size() != 2) {
    throw InvalidConfigError("'" + std::string(name) + "' must be [lo, hi]");
  }
  lo = range(0);
  hi = range(1);
}

// Shared by game.generate and rosen.ensemble.
SweepConfig ReadEnsemble(const YAML::Node& node, std::string_view section,
                         bool sweep_keys) {
  if (sweep_keys) {
    CheckKeys(node, section,
              {"n", "n_max", "count", "offdiag_scale", "dominance_margin",
               "family", "box_samples", "rho_range", "fd_every"});
  } else {
    CheckKeys(node, section,
              {"n", "offdiag_scale", "dominance_margin", "family",
               "rho_range"});
  }
  SweepConfig sweep;
  if (node["n"]) sweep.ensemble.n = Scalar<int>(node["n"], "n");
  if (node["n_max"]) sweep.n_max = Scalar<int>(node["n_max"], "n_max");
  if (node["count"]) sweep.ensemble.count = Scalar<int>(node["count"], "count");
  if (node["offdiag_scale"]) {
    sweep.ensemble.offdiag_scale =
        Scalar<double>(node["offdiag_scale"], "offdiag_scale");
  }
  if (node["dominance_margin"]) {
    sweep.ensemble.dominance_margin =
        Scalar<double>(node["dominance_margin"], "dominance_margin");
  }
  if (node["family"]) {
    sweep.family =
        ParseMatrixFamily(Scalar<std::string>(node["family"], "family"));
  }
  if (node["box_samples"]) {
    sweep.box_samples = Scalar<int>(node["box_samples"], "box_samples");
  }
  if (node["rho_range"]) {
    ReadRange(node["rho_range"], "rho_range", sweep.rho_min, sweep.rho_max);
  }
  if (node["fd_every"]) sweep.fd_every = Scalar<int>(node["fd_every"], "fd_every");
  return sweep;
}

void ReadGame(const YAML::Node& node, ExperimentConfig& config) {
  CheckKeys(node, "game",
            {"preset", "A", "rho", "k_upper", "k_lower", "generate"});
  if (node["preset"]) {
    config.preset = Scalar<std::string>(node["preset"], "preset");
  }
  if (node["A"]) config.a = Matrix(node["A"], "A");
  if (node["rho"]) config.rho = Vector(node["rho"], "rho");
  if (node["k_upper"]) config.k_upper = Vector(node["k_upper"], "k_upper");
  if (node["k_lower"]) config.k_lower = Vector(node["k_lower"], "k_lower");
  if (node["generate"]) {
    config.generate = ReadEnsemble(node["generate"], "game.generate", false);
  }
}

void ReadLearn(const YAML::Node& node, ExperimentConfig& config) {
  CheckKeys(node, "learn",
            {"stages", "step_size", "mode", "grad_tolerance", "record_history",
             "k0"});
  LearnConfig& learn = config.learn;
  if (node["stages"]) learn.stages = Scalar<int>(node["stages"], "stages");
  if (node["step_size"]) {
    learn.step_size = Scalar<double>(node["step_size"], "step_size");
  }
  if (node["mode"]) {
    learn.mode = ParseLearnMode(Scalar<std::string>(node["mode"], "mode"));
  }
  if (node["grad_tolerance"]) {
    learn.grad_tolerance =
        Scalar<double>(node["grad_tolerance"], "grad_tolerance");
  }
  if (node["record_history"]) {
    learn.record_history = Scalar<bool>(node["record_history"], "record_history");
  }
  if (node["k0"]) config.k0 = Vector(node["k0"], "k0");
}

void ReadSim(const YAML::Node& node, ExperimentConfig& config) {
  CheckKeys(node, "sim",
            {"batch_size", "horizon", "dt", "integrator", "threads", "k"});
  SimConfig& sim = config.learn.sim;
  if (node["batch_size"]) {
    sim.batch_size = Scalar<int>(node["batch_size"], "batch_size");
  }
  if (node["horizon"]) sim.horizon = Scalar<double>(node["horizon"], "horizon");
  if (node["dt"]) sim.dt = Scalar<double>(node["dt"], "dt");
  if (node["integrator"]) {
    sim.integrator =
        ParseIntegrator(Scalar<std::string>(node["integrator"], "integrator"));
  }
  if (node["threads"]) sim.threads = Scalar<int>(node["threads"], "threads");
  if (node["k"]) config.sim_k = Vector(node["k"], "sim.k");
}

void ReadRosen(const YAML::Node& node, ExperimentConfig& config) {
  CheckKeys(node, "rosen", {"samples", "ensemble"});
  if (node["samples"]) {
    config.rosen_samples = Scalar<int>(node["samples"], "samples");
  }
  if (node["ensemble"]) {
    config.ensemble = ReadEnsemble(node["ensemble"], "rosen.ensemble", true);
  }
}

void ReadOutput(const YAML::Node& node, ExperimentConfig& config) {
  CheckKeys(node, "output", {"dir", "format"});
  if (node["dir"]) config.output_dir = Scalar<std::string>(node["dir"], "dir");
  if (node["format"]) {
    config.format =
        ParseOutputFormat(Scalar<std::string>(node["format"], "format"));
  }
}

// ---- output helpers -------------------------------------------------------

std::vector<double> ToStd(const Eigen::VectorXd& v) {
  return {v.data(), v.data() + v.size()};
}

json MatrixJson(const Eigen::MatrixXd& m) {
  json rows = json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    rows.push_back(ToStd(m.row(r).transpose()));
  }
  return rows;
}

std::ofstream OpenOutput(const fs::path& dir, const std::string& name) {
  fs::create_directories(dir);
  std::ofstream out(dir / name, std::ios::binary);
  if (!out) {
    throw InvalidConfigError("cannot write " + (dir / name).string());
  }
  return out;
}

std::string Extension(OutputFormat format) {
  return format == OutputFormat::kCsv ? ".csv" : ".jsonl";
}

fs::path WriteHistory(const fs::path& dir, const std::string& stem,
                      const std::vector<StageRecord>& history,
                      OutputFormat format) {
  const std::string name = stem + Extension(format);
  auto out = OpenOutput(dir, name);
  if (format == OutputFormat::kCsv) {
    WriteHistoryCsv(out, history);
  } else {
    for (const StageRecord& rec : history) {
      out << json{{"stage", rec.stage},
                  {"k", ToStd(rec.k.k)},
                  {"J", ToStd(rec.J)},
                  {"g", ToStd(rec.g)}}
                 .dump()
          << '\n';
    }
  }
  return dir / name;
}

std::string VectorText(const Eigen::VectorXd& v, char sep = ' ') {
  std::string text;
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (i > 0) text += sep;
    text += FormatDouble(v(i));
  }
  return text;
}

std::string Fixed(const Eigen::VectorXd& v, int digits) {
  std::ostringstream out;
  out.setf(std::ios::fixed);
  out.precision(digits);
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    out << (i > 0 ? "  " : "") << v(i);
  }
  return out.str();
}

Eigen::VectorXd RandomBoxPoint(const GameSpec& spec, std::uint64_t seed) {
  CounterRng rng(seed, kInitStream, 0);
  Eigen::VectorXd k(spec.n());
  for (int i = 0; i < spec.n(); ++i) {
    k(i) = rng.Uniform(spec.k_lower()(i), spec.k_upper()(i));
  }
  return k;
}

// Maps library exceptions onto the exit-code contract.
int Guarded(std::ostream& log, const std::function<int()>& body) {
  try {
    return body();
  } catch (const NotPositiveDefiniteError& e) {
    log << "error: solver failure: " << e.what() << '\n';
    return kExitSolverFailure;
  } catch (const std::invalid_argument& e) {
    log << "error: invalid configuration: " << e.what() << '\n';
    return kExitConfigInvalid;
  } catch (const fs::filesystem_error& e) {
    log << "error: output: " << e.what() << '\n';
    return kExitConfigInvalid;
  }
}

void WriteRosenWitness(std::ostream& out, const ViolationWitness& w,
                       std::string_view family) {
  out << json{{"matrix_index", w.matrix_index},
              {"seed", w.seed},
              {"family", family},
              {"n", w.a.rows()},
              {"A", MatrixJson(w.a)},
              {"rho", ToStd(w.rho)},
              {"k", ToStd(w.k.k)},
              {"min_eig", w.min_eig}}
             .dump()
      << '\n';
}

}  // namespace

OutputFormat ParseOutputFormat(std::string_view name) {
  if (name == "csv") return OutputFormat::kCsv;
  if (name == "json-lines") return OutputFormat::kJsonLines;
  throw InvalidConfigError("unknown format '" + std::string(name) +
                           "' (expected csv or json-lines)");
}

ExperimentConfig ParseConfig(std::string_view yaml_text) {
  ExperimentConfig config;
  YAML::Node root;
  try {
    root = YAML::Load(std::string(yaml_text));
  } catch (const YAML::Exception& e) {
    throw InvalidConfigError(std::string("YAML parse error: ") + e.what());
  }
  if (root.IsNull()) return config;
  CheckKeys(root, "config",
            {"seed", "game", "learn", "sim", "rosen", "output"});
  if (root["seed"]) config.seed = Scalar<std::uint64_t>(root["seed"], "seed");
  if (root["game"]) ReadGame(root["game"], config);
  if (root["learn"]) ReadLearn(root["learn"], config);
  if (root["sim"]) ReadSim(root["sim"], config);
  if (root["rosen"]) ReadRosen(root["rosen"], config);
  if (root["output"]) ReadOutput(root["output"], config);
  return config;
}

ExperimentConfig LoadConfig(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw InvalidConfigError("cannot read config " + path.string());
  std::stringstream text;
  text << in.rdbuf();
  return ParseConfig(text.str());
}

void ApplySeedDefault(ExperimentConfig& config, const char* env_value) {
  if (config.seed || env_value == nullptr || *env_value == '\0') return;
  std::uint64_t seed = 0;
  const std::string_view text(env_value);
  const auto [ptr, ec] =
      std::from_chars(text.data(), text.data() + text.size(), seed);
  if (ec != std::errc() || ptr != text.data() + text.size()) {
    throw InvalidConfigError("NASHLQ_SEED is not an unsigned 64-bit integer");
  }
  config.seed = seed;
}

Eigen::VectorXd ParseVectorList(std::string_view text) {
  std::vector<double> values;
  size_t start = 0;
  while (start <= text.size()) {
    const size_t comma = text.find(',', start);
    const std::string_view field = text.substr(start, comma - start);
    try {
      values.push_back(ParseDouble(field));
    } catch (const std::invalid_argument&) {
      throw InvalidConfigError("bad number list '" + std::string(text) + "'");
    }
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return Eigen::Map<Eigen::VectorXd>(values.data(), values.size());
}

GameSpec ExperimentConfig::BuildGame() const {
  if (generate) {
    SweepConfig gen = *generate;
    gen.ensemble.seed = Seed();
    gen.ensemble.count = 1;
    gen.n_max = 0;
    gen.Validate();
    const GameSpec base = SweepGame(gen, 0);
    if (!rho && !k_upper && !k_lower) return base;
    return GameSpec::Create(base.a(), rho.value_or(base.rho()),
                            k_upper.value_or(base.k_upper()), k_lower);
  }

  std::optional<GameSpec> base;
  if (preset == "paper") {
    base = PaperPreset().Game();
  } else if (preset == "scalar") {
    base = ScalarPreset();
  } else if (preset == "diagonal") {
    base = DiagonalPreset();
  } else if (preset == "two-player") {
    base = TwoPlayerPreset();
  } else if (!preset.empty()) {
    throw InvalidConfigError("unknown preset '" + preset + "'");
  }

  if (!base && (!a || !rho)) {
    throw InvalidConfigError("game needs a preset, a generator, or A and rho");
  }
  const Eigen::MatrixXd game_a = a ? *a : base->a();
  const Eigen::VectorXd game_rho = rho ? *rho : base->rho();
  Eigen::VectorXd upper;
  if (k_upper) {
    upper = *k_upper;
  } else if (base && !a) {
    upper = base->k_upper();
  } else {
    upper = DefaultSweepUpperBound(game_a);
  }
  std::optional<Eigen::VectorXd> lower = k_lower;
  if (!lower && base && !a) lower = base->k_lower();
  return GameSpec::Create(game_a, game_rho, upper, lower);
}

int CmdLearn(const ExperimentConfig& config, std::ostream& log) {
  return Guarded(log, [&] {
    const GameSpec spec = config.BuildGame();
    LearnConfig learn = config.learn;
    learn.sim.seed = config.Seed();
    learn.Validate();
    const ActionProfile k0(config.k0 ? *config.k0
                                     : RandomBoxPoint(spec, config.Seed()));
    if (k0.size() != spec.n()) {
      throw InvalidConfigError("k0 must have one entry per player");
    }
    const LearnRun run = RunGradientPlay(spec, k0, learn);
    const fs::path file =
        WriteHistory(config.output_dir, "history", run.history, config.format);

    const StageRecord& last = run.history.back();
    log << "mode: " << LearnModeName(learn.mode) << '\n'
        << "stages used: " << run.stages_used << '\n'
        << "converged: " << (run.converged ? "yes" : "no") << '\n'
        << "k0: " << VectorText(k0.k) << '\n'
        << "final k: " << VectorText(run.final.k) << '\n'
        << "final J: " << VectorText(last.J) << '\n'
        << "final g: " << VectorText(last.g) << '\n'
        << "history: " << file.string() << '\n';
    return kExitOk;
  });
}

int CmdSimulate(const ExperimentConfig& config, std::ostream& log) {
  return Guarded(log, [&] {
    const GameSpec spec = config.BuildGame();
    if (!config.sim_k && !config.k0) {
      throw InvalidConfigError("simulate needs a profile (sim.k or --k)");
    }
    const ActionProfile k(config.sim_k ? *config.sim_k : *config.k0);
    if (k.size() != spec.n()) {
      throw InvalidConfigError("profile must have one entry per player");
    }
    SimConfig sim = config.learn.sim;
    sim.seed = config.Seed();
    sim.Validate();

    const TrajectoryBatch batch = SimulateBatch(spec, k, sim);
    const Eigen::VectorXd estimate = MonteCarloCost(spec, k, sim);
    const Eigen::VectorXd closed = Cost(spec, k);
    const int n = spec.n();

    const std::string ext = Extension(config.format);
    auto traj = OpenOutput(config.output_dir, "trajectories" + ext);
    auto summary = OpenOutput(config.output_dir, "simulate_summary" + ext);
    if (config.format == OutputFormat::kCsv) {
      traj << "trajectory";
      for (int i = 1; i <= n; ++i) traj << ",x0_" << i;
      for (int i = 1; i <= n; ++i) traj << ",cost_" << i;
      traj << '\n';
      for (Eigen::Index b = 0; b < batch.x0.rows(); ++b) {
        traj << b << ',' << JoinRow(batch.x0.row(b).transpose()) << ','
             << JoinRow(batch.per_player_cost.row(b).transpose()) << '\n';
      }
      summary << "player,k,J_sampled,J_closed_form,relative_difference\n";
      for (int i = 0; i < n; ++i) {
        summary << i + 1 << ',' << FormatDouble(k[i]) << ','
                << FormatDouble(estimate(i)) << ',' << FormatDouble(closed(i))
                << ','
                << FormatDouble((estimate(i) - closed(i)) / closed(i)) << '\n';
      }
    } else {
      for (Eigen::Index b = 0; b < batch.x0.rows(); ++b) {
        traj << json{{"trajectory", b},
                     {"x0", ToStd(batch.x0.row(b).transpose())},
                     {"cost", ToStd(batch.per_player_cost.row(b).transpose())}}
                    .dump()
             << '\n';
      }
      for (int i = 0; i < n; ++i) {
        summary << json{{"player", i + 1},
                        {"k", k[i]},
                        {"J_sampled", estimate(i)},
                        {"J_closed_form", closed(i)}}
                       .dump()
                << '\n';
      }
    }
    log << "batch: " << sim.batch_size << "  horizon: " << sim.horizon
        << "  integrator: " << IntegratorName(sim.integrator) << '\n'
        << "J sampled:     " << VectorText(estimate) << '\n'
        << "J closed form: " << VectorText(closed) << '\n';
    return kExitOk;
  });
}

int CmdGenMatrix(const ExperimentConfig& config, std::ostream& log) {
  return Guarded(log, [&] {
    SweepConfig gen = config.generate.value_or(SweepConfig{});
    gen.ensemble.seed = config.Seed();
    gen.ensemble.count = 1;
    gen.n_max = 0;
    gen.Validate();
    const Eigen::MatrixXd a = EnsembleMatrix(gen, 0);
    const Eigen::VectorXd margins = GershgorinMargins(a);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(a,
                                                       Eigen::EigenvaluesOnly);
    const double min_eig = eig.eigenvalues().minCoeff();
    const double max_eig = eig.eigenvalues().maxCoeff();

    {
      auto out = OpenOutput(config.output_dir, "matrix.csv");
      WriteMatrixCsv(out, a);
    }
    std::ostringstream report;
    report << "n: " << a.rows() << '\n'
           << "seed: " << gen.ensemble.seed << '\n'
           << "family: " << MatrixFamilyName(gen.family) << '\n'
           << "symmetric: " << (a == a.transpose() ? "yes" : "no") << '\n'
           << "gershgorin_margins: " << VectorText(margins) << '\n'
           << "min_gershgorin_margin: " << FormatDouble(margins.minCoeff())
           << '\n'
           << "sdd_negative_diagonal: "
           << (IsSddNegativeDiag(a) ? "yes" : "no") << '\n'
           << "smallest_eigenvalue: " << FormatDouble(min_eig) << '\n'
           << "largest_eigenvalue: " << FormatDouble(max_eig) << '\n'
           << "negative_definite: " << (max_eig < 0.0 ? "yes" : "no") << '\n';
    {
      auto out = OpenOutput(config.output_dir, "matrix_report.txt");
      out << report.str();
    }
    log << report.str();
    return kExitOk;
  });
}

int CmdCheckRosen(const ExperimentConfig& config, std::ostream& log) {
  return Guarded(log, [&] {
    const std::string ext = Extension(config.format);
    std::ostringstream summary;
    int violations = 0;

    auto table = OpenOutput(config.output_dir, "rosen_report" + ext);
    if (config.format == OutputFormat::kCsv) {
      table << "matrix,n,samples,min_eig,violated,witness\n";
    }
    auto write_row = [&](int index, int n, const RosenReport& r) {
      if (config.format == OutputFormat::kCsv) {
        table << index << ',' << n << ',' << r.samples << ','
              << FormatDouble(r.min_eig) << ',' << (r.violated ? 1 : 0) << ','
              << VectorText(r.witness.k) << '\n';
      } else {
        table << json{{"matrix", index},
                      {"n", n},
                      {"samples", r.samples},
                      {"min_eig", r.min_eig},
                      {"violated", r.violated},
                      {"witness", ToStd(r.witness.k)}}
                     .dump()
              << '\n';
      }
    };

    if (config.ensemble) {
      SweepConfig sweep = *config.ensemble;
      sweep.ensemble.seed = config.Seed();
      const SweepReport report = ConjectureSweep(sweep);
      for (size_t j = 0; j < report.per_matrix.size(); ++j) {
        write_row(static_cast<int>(j), report.dimensions[j],
                  report.per_matrix[j]);
      }
      if (!report.violations.empty()) {
        auto witnesses = OpenOutput(config.output_dir, "rosen_witnesses.jsonl");
        for (const ViolationWitness& w : report.violations) {
          WriteRosenWitness(witnesses, w, MatrixFamilyName(sweep.family));
        }
      }
      violations = static_cast<int>(report.violations.size());
      summary << "mode: ensemble (" << MatrixFamilyName(sweep.family) << ")\n"
              << "matrices: " << report.per_matrix.size() << '\n'
              << "samples per matrix: " << sweep.box_samples << '\n'
              << "global min eig(G+G^T): " << FormatDouble(report.global_min)
              << " (matrix " << report.global_argmin << ")\n"
              << "jacobian spot checks: " << report.audit.checks
              << ", failures: " << report.audit.failures
              << ", max relative error: "
              << FormatDouble(report.audit.max_relative_error) << '\n';
    } else {
      const GameSpec spec = config.BuildGame();
      CounterRng rng(config.Seed(), kRosenStream, 0);
      JacobianSpotCheck audit;
      const RosenReport report =
          SweepRosen(spec, config.rosen_samples, rng, 100, &audit);
      write_row(0, spec.n(), report);
      if (report.violated) {
        auto witnesses = OpenOutput(config.output_dir, "rosen_witnesses.jsonl");
        WriteRosenWitness(witnesses,
                          {0, config.Seed(), spec.a(), spec.rho(),
                           report.witness, report.min_eig},
                          "configured");
        violations = 1;
      }
      summary << "mode: single game\n"
              << "samples: " << report.samples << '\n'
              << "min eig(G+G^T): " << FormatDouble(report.min_eig) << '\n'
              << "witness k: " << VectorText(report.witness.k) << '\n'
              << "jacobian spot checks: " << audit.checks
              << ", failures: " << audit.failures
              << ", max relative error: "
              << FormatDouble(audit.max_relative_error) << '\n';
      if (spec.n() == 2) {
        const auto& a = spec.a();
        auto mu_line = [&](std::string_view label, const ActionProfile& k) {
          try {
            const double mu = TwoPlayerMu(a(0, 0), a(0, 1), a(1, 1), k[0], k[1]);
            summary << label << " k = (" << VectorText(k.k, ',')
                    << "): mu = " << FormatDouble(mu)
                    << ", min eig(G+G^T) = " << FormatDouble(RosenCheck(spec, k))
                    << '\n';
          } catch (const PreconditionViolatedError& e) {
            summary << label << ": mu not applicable (" << e.what() << ")\n";
          }
        };
        mu_line("witness", report.witness);
        mu_line("lower corner", ActionProfile(spec.k_lower()));
        if ((spec.rho().array() != 0.0).any()) {
          summary << "note: mu is the rho = 0 criterion; this game has rho > 0\n";
        }
      }
    }
    summary << "violations: " << violations << '\n';
    {
      auto out = OpenOutput(config.output_dir, "rosen_summary.txt");
      out << summary.str();
    }
    log << summary.str();
    return violations > 0 ? kExitViolation : kExitOk;
  });
}

ReproduceConfig DefaultReproduceConfig(LearnMode mode, std::uint64_t seed) {
  const PaperExperiment& paper = PaperPreset();
  ReproduceConfig config;
  config.learn.mode = mode;
  config.learn.step_size = 1.0;
  config.learn.sim.batch_size = paper.batch_size;
  config.learn.sim.horizon = paper.horizon;
  config.learn.sim.seed = seed;
  if (mode == LearnMode::kExact) {
    config.learn.stages = 20000;
    config.learn.grad_tolerance = 1e-10;
  } else {
    config.learn.stages = paper.stages;
  }
  return config;
}

int CmdReproducePaper(const ReproduceConfig& config, std::ostream& log) {
  return Guarded(log, [&] {
    config.learn.Validate();
    const PaperExperiment& paper = PaperPreset();
    const GameSpec spec = paper.Game();
    const LearnRun round1 =
        RunGradientPlay(spec, ActionProfile(paper.round1_k0), config.learn);
    const LearnRun round2 =
        RunGradientPlay(spec, ActionProfile(paper.round2_k0), config.learn);

    WriteHistory(config.output_dir, "round1", round1.history, config.format);
    WriteHistory(config.output_dir, "round2", round2.history, config.format);

    {
      auto table = OpenOutput(config.output_dir, "table1.csv");
      table << "action,round,stage,k_1,k_2,k_3,k_4,k_5\n";
      table << "initial,1,0," << JoinRow(paper.round1_k0) << '\n';
      table << "initial,2,0," << JoinRow(paper.round2_k0) << '\n';
      table << "final,1," << round1.stages_used << ','
            << JoinRow(round1.final.k) << '\n';
      table << "final,2," << round2.stages_used << ','
            << JoinRow(round2.final.k) << '\n';
      table << "published,1," << paper.stages << ','
            << JoinRow(paper.round1_final) << '\n';
      table << "published,2," << paper.stages << ','
            << JoinRow(paper.round2_final) << '\n';
    }

    const double gap = (round1.final.k - round2.final.k).cwiseAbs().maxCoeff();
    std::ostringstream summary;
    summary << "mode: " << LearnModeName(config.learn.mode) << '\n'
            << "seed: " << config.learn.sim.seed << '\n'
            << "                 k_1     k_2     k_3     k_4     k_5\n"
            << "k(0)   round 1   " << Fixed(paper.round1_k0, 4) << '\n'
            << "k(0)   round 2   " << Fixed(paper.round2_k0, 4) << '\n'
            << "k(end) round 1   " << Fixed(round1.final.k, 4) << "  ["
            << round1.stages_used << " stages]\n"
            << "k(end) round 2   " << Fixed(round2.final.k, 4) << "  ["
            << round2.stages_used << " stages]\n"
            << "published r1     " << Fixed(paper.round1_final, 4) << '\n'
            << "published r2     " << Fixed(paper.round2_final, 4) << '\n';

    bool pass = true;
    auto check = [&](std::string_view name, double value, double tol) {
      const bool ok = value <= tol;
      pass = pass && ok;
      summary << (ok ? "PASS " : "FAIL ") << name << ": "
              << FormatDouble(value) << " <= " << FormatDouble(tol) << '\n';
    };
    if (config.learn.mode == LearnMode::kExact) {
      check("cross-round gap", gap, kExactRoundGapTolerance);
    } else {
      check("round 1 vs published",
            (round1.final.k - paper.round1_final).cwiseAbs().maxCoeff(),
            kModelFreeTableTolerance);
      check("round 2 vs published",
            (round2.final.k - paper.round2_final).cwiseAbs().maxCoeff(),
            kModelFreeTableTolerance);
      check("cross-round gap", gap, kModelFreeTableTolerance);
    }
    {
      auto out = OpenOutput(config.output_dir, "summary.txt");
      out << summary.str();
    }
    log << summary.str();
    return pass ? kExitOk : kExitViolation;
  });
}

}  // namespace nashlq::experiment
