#include <cstdio>
#include <cstdlib>
#include <exception>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "ixrl/harness.hpp"

namespace {

using namespace ixrl;

// Output directory resolution order: --out-dir flag, IXRL_OUT_DIR, config
// file value, default.
std::string resolve_out_dir(const std::string& flag_value,
                            const std::string& config_value) {
  if (!flag_value.empty()) return flag_value;
  if (const char* env = std::getenv("IXRL_OUT_DIR"); env && *env) return env;
  return config_value;
}

struct CommonFlags {
  std::string config_path;
  std::string env;
  std::string algo;
  std::string teacher;
  std::int64_t train_steps = -1;
  int eval_steps = -1;
  int runs = -1;
  std::int64_t certainty = -1;
  std::int64_t seed = -1;
  std::string out_dir;
  bool serial = false;
};

void add_common_flags(CLI::App* cmd, CommonFlags& f, bool with_algo) {
  cmd->add_option("--config", f.config_path, "JSON config file");
  cmd->add_option("--env", f.env, "det-mab | stoch-mab | ring-defense");
  if (with_algo) {
    cmd->add_option("--algo", f.algo,
                    "exp3 | exp3ix | teacher-only | exp3ixrl");
  }
  cmd->add_option("--teacher", f.teacher,
                  "eps-greedy | ucb | gradient | qlearn | none");
  cmd->add_option("--train-steps", f.train_steps, "training steps per run");
  cmd->add_option("--eval-steps", f.eval_steps, "evaluation steps per run");
  cmd->add_option("--runs", f.runs, "independent runs per cell");
  cmd->add_option("--certainty", f.certainty, "per-observation visit threshold");
  cmd->add_option("--seed", f.seed, "master seed");
  cmd->add_option("--out-dir", f.out_dir, "artifact directory");
  cmd->add_flag("--serial", f.serial, "use the serial reference runner");
}

ExperimentConfig build_config(const CommonFlags& f) {
  ExperimentConfig cfg;
  if (!f.config_path.empty()) cfg = load_config(f.config_path);
  if (!f.env.empty()) cfg.env = env_id_from_string(f.env);
  if (!f.algo.empty()) cfg.algo = algo_id_from_string(f.algo);
  if (!f.teacher.empty()) cfg.teacher = teacher_id_from_string(f.teacher);
  if (f.train_steps >= 0) cfg.train_steps = f.train_steps;
  if (f.eval_steps >= 0) cfg.eval_steps = f.eval_steps;
  if (f.runs >= 0) cfg.runs = f.runs;
  if (f.certainty >= 0) cfg.certainty = f.certainty;
  if (f.seed >= 0) cfg.master_seed = static_cast<std::uint64_t>(f.seed);
  cfg.out_dir = resolve_out_dir(f.out_dir, cfg.out_dir);
  return cfg;
}

ExecMode exec_mode(const CommonFlags& f) {
  return f.serial ? ExecMode::Serial : ExecMode::Parallel;
}

void print_summary(const std::vector<SummaryRow>& rows) {
  for (const auto& r : rows) {
    std::printf("%-12s %-12s %-10s runs=%-4lld mean=%s +/- %s\n",
                r.env.c_str(), r.algo.c_str(), r.teacher.c_str(),
                static_cast<long long>(r.runs), fmt_g6(r.mean).c_str(),
                fmt_g6(r.std_pop).c_str());
  }
}

int cmd_run(const CommonFlags& f) {
  const ExperimentConfig cfg = build_config(f);
  validate(cfg);
  const MatrixResult result = run_matrix({cfg}, exec_mode(f));
  write_matrix_artifacts(result, cfg.out_dir);
  print_summary(result.summary);
  std::printf("wrote %s/runs.csv and %s/summary.json\n", cfg.out_dir.c_str(),
              cfg.out_dir.c_str());
  return 0;
}

int cmd_table1(const CommonFlags& f) {
  ExperimentConfig base;
  if (!f.config_path.empty()) base = load_config(f.config_path);
  const std::uint64_t seed =
      f.seed >= 0 ? static_cast<std::uint64_t>(f.seed) : base.master_seed;
  const int runs = f.runs >= 0 ? f.runs : base.runs;
  const std::string out_dir = resolve_out_dir(f.out_dir, base.out_dir);

  const MatrixResult result = run_matrix(table1_preset(seed, runs), exec_mode(f));
  write_matrix_artifacts(result, out_dir);
  print_summary(result.summary);
  std::printf("wrote %s/runs.csv and %s/summary.json\n", out_dir.c_str(),
              out_dir.c_str());
  return 0;
}

int cmd_sweep(const CommonFlags& f, std::vector<std::int64_t>& thresholds) {
  ExperimentConfig cfg = build_config(f);
  cfg.algo = AlgoId::Exp3Ixrl;
  validate(cfg);
  if (thresholds.empty()) {
    thresholds = {250, 500, 1000, 2000, 4000, 8000, 12000};
  }
  const auto points = sweep_certainty(cfg, thresholds, exec_mode(f));

  namespace fs = std::filesystem;
  std::error_code ec;
  fs::create_directories(cfg.out_dir, ec);
  if (ec) {
    throw std::runtime_error("cannot create output directory " + cfg.out_dir);
  }
  const std::string path = cfg.out_dir + "/sweep.csv";
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  out << format_sweep_csv(points);
  for (const auto& p : points) {
    std::printf("certainty=%-6lld mean=%s +/- %s\n",
                static_cast<long long>(p.certainty), fmt_g6(p.row.mean).c_str(),
                fmt_g6(p.row.std_pop).c_str());
  }
  std::printf("wrote %s\n", path.c_str());
  return 0;
}

int cmd_cce_gap(const std::string& game_path, const std::string& joint_path) {
  const NormalFormGame game = NormalFormGame::load(game_path);
  std::ifstream in(joint_path);
  if (!in) throw std::runtime_error("cannot open joint file: " + joint_path);
  std::stringstream buf;
  buf << in.rdbuf();
  const auto j = nlohmann::json::parse(buf.str());
  EmpiricalJoint joint;
  joint.prob = j.at("prob").get<std::vector<double>>();
  std::printf("%s\n", fmt_g6(cce_gap(game, joint)).c_str());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "Adversarial-bandit CCE approximation with RL teachers: benchmark "
      "harness"};
  app.require_subcommand(1);

  CommonFlags run_flags;
  auto* run_cmd = app.add_subcommand(
      "run", "run one experiment cell and write runs.csv / summary.json");
  add_common_flags(run_cmd, run_flags, /*with_algo=*/true);

  CommonFlags table_flags;
  auto* table_cmd = app.add_subcommand(
      "table1", "run the benchmark matrix preset over both bandit envs");
  add_common_flags(table_cmd, table_flags, /*with_algo=*/false);

  CommonFlags sweep_flags;
  std::vector<std::int64_t> thresholds;
  auto* sweep_cmd = app.add_subcommand(
      "sweep-certainty", "re-run one exp3ixrl cell over certainty thresholds");
  add_common_flags(sweep_cmd, sweep_flags, /*with_algo=*/false);
  sweep_cmd->add_option("--thresholds", thresholds,
                        "certainty values (default ring-defense ladder)");

  std::string game_path, joint_path;
  auto* gap_cmd = app.add_subcommand(
      "cce-gap", "evaluate the CCE gap of a joint distribution on a game");
  gap_cmd->add_option("--game", game_path, "normal-form game JSON")
      ->required();
  gap_cmd->add_option("--joint", joint_path,
                      "joint distribution JSON: {\"prob\": [...]}")
      ->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (run_cmd->parsed()) return cmd_run(run_flags);
    if (table_cmd->parsed()) return cmd_table1(table_flags);
    if (sweep_cmd->parsed()) return cmd_sweep(sweep_flags, thresholds);
    if (gap_cmd->parsed()) return cmd_cce_gap(game_path, joint_path);
  } catch (const std::exception& e) {
    nlohmann::ordered_json err;
    err["error"] = e.what();
    std::cerr << err.dump() << "\n";
    return 1;
  }
  return 0;
}
