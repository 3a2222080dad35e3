#ifndef IXRL_HARNESS_HPP
#define IXRL_HARNESS_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "ixrl/env.hpp"
#include "ixrl/ixrl.hpp"
#include "ixrl/metrics.hpp"
#include "ixrl/teachers.hpp"

namespace ixrl {

enum class AlgoId { Exp3, Exp3Ix, TeacherOnly, Exp3Ixrl };

std::string to_string(AlgoId id);
AlgoId algo_id_from_string(const std::string& s);

struct ExperimentConfig {
  EnvId env = EnvId::DetMab;
  AlgoId algo = AlgoId::Exp3Ixrl;
  TeacherId teacher = TeacherId::None;
  TeacherParams teacher_params;

  std::int64_t train_steps = 10000;
  int eval_steps = 30;
  int runs = 100;
  std::int64_t certainty = 2000;
  std::uint64_t master_seed = 1;

  double ring_spread_prob = 0.3;
  double behavior_smoothing = 1.0;
  bool freeze_after_certainty = false;
  EvalPolicy eval_policy = EvalPolicy::Argmax;
  ObserverUpdate observer_update = ObserverUpdate::MeanTracking;

  // Diagnostics kept in memory only; never serialized to artifacts.
  bool record_training = false;  // per-step training log (source flags)
  bool record_ledger = false;    // keep the full training loss ledger

  std::string out_dir = "out";
};

// Rejects impossible combinations: exp3ixrl and teacher-only need a teacher,
// exp3/exp3ix are single-state self-play learners (no teacher, no
// multi-state environment). Counts must be in range; train_steps may be 0.
void validate(const ExperimentConfig& cfg);

struct EvalStep {
  int action = 0;
  double reward = 0.0;
  ActionSource source = ActionSource::Teacher;
};

struct TrainStep {
  ObsKey obs = 0;
  int proposed = 0;
  int executed = 0;
  ActionSource source = ActionSource::Teacher;
};

struct RunResult {
  int run_index = 0;
  std::uint64_t env_seed = 0;
  std::uint64_t teacher_seed = 0;
  std::uint64_t agent_seed = 0;

  double cum_eval_reward = 0.0;
  std::vector<EvalStep> eval_log;
  double train_regret = 0.0;

  // Raw engine draws the environment stream consumed; identical across
  // algorithms for a fixed (master_seed, run_index) by construction.
  std::uint64_t env_draw_count = 0;

  double wall_seconds = 0.0;

  std::vector<TrainStep> train_log;  // when record_training
  RegretLedger train_ledger;         // when record_ledger
};

// Trains for train_steps with per-run streams derived from
// (master_seed, {"env","teacher","agent"}, run_index), then evaluates for
// eval_steps under each algorithm's deterministic evaluation policy with
// learning frozen. The environment stream never depends on the algorithm.
RunResult run_single(const ExperimentConfig& cfg, int run_index);

enum class ExecMode { Serial, Parallel };

// Executes all runs of one cell. Serial is the reference path; Parallel
// distributes run indices over OpenMP threads. Both produce identical
// results since every run owns its state and streams.
std::vector<RunResult> run_batch(const ExperimentConfig& cfg, ExecMode mode);

// -- artifact formatting -------------------------------------------------------

// Fixed %.6g float formatting shared by every artifact writer.
std::string fmt_g6(double v);

// Per-run CSV with the exact header
//   env,algo,teacher,run,seed,cum_reward,regret
// where seed is the run's derived environment-stream seed.
std::string format_runs_csv(
    const std::vector<std::pair<ExperimentConfig, std::vector<RunResult>>>&
        cells);

// Summary JSON: one object per cell with mean, population std, sample std,
// run count and mean training regret.
std::string format_summary_json(const std::vector<SummaryRow>& rows,
                                const std::vector<double>& mean_regrets);

SummaryRow summarize_cell(const ExperimentConfig& cfg,
                          const std::vector<RunResult>& results);

struct MatrixResult {
  std::vector<SummaryRow> summary;
  std::string runs_csv;
  std::string summary_json;
};

// Runs every cell, aggregates in run-index order and renders both artifacts.
// Output bytes are a pure function of the configs.
MatrixResult run_matrix(const std::vector<ExperimentConfig>& cells,
                        ExecMode mode);

// Writes runs.csv and summary.json under out_dir (created if missing).
void write_matrix_artifacts(const MatrixResult& result,
                            const std::string& out_dir);

// The benchmark preset: per environment (det-mab, stoch-mab) one cell for
// exp3 and exp3ix self-play, teacher-only and exp3ixrl for each bandit
// teacher (gradient, ucb, eps-greedy).
std::vector<ExperimentConfig> table1_preset(std::uint64_t master_seed,
                                            int runs);

struct SweepPoint {
  std::int64_t certainty = 0;
  SummaryRow row;
  double mean_regret = 0.0;
};

// Re-runs the same exp3ixrl cell over the shared seed set once per
// threshold. CSV columns: certainty,mean,std.
std::vector<SweepPoint> sweep_certainty(
    const ExperimentConfig& base, const std::vector<std::int64_t>& thresholds,
    ExecMode mode);

std::string format_sweep_csv(const std::vector<SweepPoint>& points);

// -- configuration file ----------------------------------------------------------

// JSON config file; any missing key keeps its default. Unknown keys are
// rejected. See README for the schema.
ExperimentConfig config_from_json(const std::string& text);
ExperimentConfig load_config(const std::string& path);

}  // namespace ixrl

#endif  // IXRL_HARNESS_HPP
