#include "ixrl/harness.hpp"

#include <chrono>
#include <cstdio>
#include <exception>
#include <filesystem>
#include <fstream>
#include <memory>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace ixrl {

std::string to_string(AlgoId id) {
  switch (id) {
    case AlgoId::Exp3: return "exp3";
    case AlgoId::Exp3Ix: return "exp3ix";
    case AlgoId::TeacherOnly: return "teacher-only";
    case AlgoId::Exp3Ixrl: return "exp3ixrl";
  }
  return "?";
}

AlgoId algo_id_from_string(const std::string& s) {
  if (s == "exp3") return AlgoId::Exp3;
  if (s == "exp3ix") return AlgoId::Exp3Ix;
  if (s == "teacher-only") return AlgoId::TeacherOnly;
  if (s == "exp3ixrl") return AlgoId::Exp3Ixrl;
  throw std::invalid_argument("unknown algorithm id: " + s);
}

void validate(const ExperimentConfig& cfg) {
  if (cfg.train_steps < 0) throw std::invalid_argument("train_steps < 0");
  if (cfg.eval_steps < 1) throw std::invalid_argument("eval_steps < 1");
  if (cfg.runs < 1) throw std::invalid_argument("runs < 1");
  if (cfg.certainty < 1) throw std::invalid_argument("certainty < 1");
  const bool needs_teacher =
      cfg.algo == AlgoId::TeacherOnly || cfg.algo == AlgoId::Exp3Ixrl;
  if (needs_teacher && cfg.teacher == TeacherId::None) {
    throw std::invalid_argument(to_string(cfg.algo) + " requires a teacher");
  }
  if (!needs_teacher && cfg.teacher != TeacherId::None) {
    throw std::invalid_argument(to_string(cfg.algo) +
                                " does not take a teacher");
  }
  if ((cfg.algo == AlgoId::Exp3 || cfg.algo == AlgoId::Exp3Ix) &&
      cfg.env == EnvId::RingDefense) {
    throw std::invalid_argument(
        to_string(cfg.algo) + " is a single-state learner; " +
        to_string(cfg.env) + " is multi-state");
  }
}

namespace {

std::vector<double> loss_vector(const std::vector<double>& rewards,
                                const RewardBounds& bounds) {
  std::vector<double> lv(rewards.size());
  for (std::size_t i = 0; i < rewards.size(); ++i) {
    lv[i] = reward_to_loss(rewards[i], bounds);
  }
  return lv;
}

}  // namespace

RunResult run_single(const ExperimentConfig& cfg, int run_index) {
  const auto t_start = std::chrono::steady_clock::now();
  const auto run = static_cast<std::uint64_t>(run_index);

  RunResult out;
  out.run_index = run_index;
  out.env_seed = derive_seed({cfg.master_seed, "env", run});
  out.teacher_seed = derive_seed({cfg.master_seed, "teacher", run});
  out.agent_seed = derive_seed({cfg.master_seed, "agent", run});

  RandomStream env_rng(out.env_seed);
  RandomStream teacher_rng(out.teacher_seed);
  RandomStream agent_rng(out.agent_seed);

  std::unique_ptr<Env> env = make_env(cfg.env, env_rng, cfg.ring_spread_prob);
  const int k = env->action_count();
  const RewardBounds bounds = env->reward_bounds();

  std::unique_ptr<Teacher> teacher;
  if (cfg.teacher != TeacherId::None) {
    teacher = make_teacher(cfg.teacher, k, cfg.teacher_params);
  }

  const Exp3Params exp3_params = Exp3Params::defaults(k);
  const Exp3IxParams ix_params = Exp3IxParams::defaults(k);

  std::unique_ptr<LearnerState> learner;  // exp3 / exp3ix self-play
  std::unique_ptr<StateTable> table;      // exp3ixrl
  if (cfg.algo == AlgoId::Exp3 || cfg.algo == AlgoId::Exp3Ix) {
    learner = std::make_unique<LearnerState>(k);
  } else if (cfg.algo == AlgoId::Exp3Ixrl) {
    IxrlParams p;
    p.certainty = cfg.certainty;
    p.eval_policy = cfg.eval_policy;
    p.ix = ix_params;
    p.observer_update = cfg.observer_update;
    p.behavior_smoothing = cfg.behavior_smoothing;
    p.freeze_after_certainty = cfg.freeze_after_certainty;
    table = std::make_unique<StateTable>(p);
  }

  RegretLedger ledger;
  ObsKey obs = env->reset(env_rng);

  for (std::int64_t step = 0; step < cfg.train_steps; ++step) {
    int executed = 0;
    int proposed = 0;
    ActionSource source = ActionSource::Teacher;
    switch (cfg.algo) {
      case AlgoId::TeacherOnly:
        executed = teacher->select(obs, teacher_rng);
        proposed = executed;
        break;
      case AlgoId::Exp3:
        executed = sample_categorical(exp3_distribution(*learner, exp3_params),
                                      agent_rng);
        source = ActionSource::Cce;
        break;
      case AlgoId::Exp3Ix:
        executed =
            sample_categorical(exp3ix_distribution(*learner), agent_rng);
        source = ActionSource::Cce;
        break;
      case AlgoId::Exp3Ixrl: {
        proposed = teacher->select(obs, teacher_rng);
        const auto sel =
            table->select(obs, k, proposed, agent_rng, PolicyMode::Train);
        executed = sel.action;
        source = sel.source;
        break;
      }
    }

    const StepResult sr = env->step(executed, env_rng);
    const double loss = reward_to_loss(sr.reward, bounds);

    switch (cfg.algo) {
      case AlgoId::TeacherOnly:
        teacher->update(obs, executed, sr.reward, sr.next_obs, sr.terminal);
        break;
      case AlgoId::Exp3:
        exp3_update(*learner, exp3_params, executed, loss);
        break;
      case AlgoId::Exp3Ix:
        exp3ix_update(*learner, ix_params, executed, loss);
        break;
      case AlgoId::Exp3Ixrl:
        teacher->update(obs, executed, sr.reward, sr.next_obs, sr.terminal);
        table->observe(obs, k, executed, loss, source);
        break;
    }

    ledger.push(executed, loss_vector(sr.all_action_rewards, bounds));
    if (cfg.record_training) {
      out.train_log.push_back({obs, proposed, executed, source});
    }
    obs = sr.terminal ? env->reset(env_rng) : sr.next_obs;
  }

  out.train_regret = cfg.train_steps > 0 ? ledger.regret() : 0.0;

  // Evaluation: deterministic policies, learning frozen. Episodic
  // environments start a fresh episode; bandits continue.
  if (env->horizon() > 0) obs = env->reset(env_rng);
  for (int step = 0; step < cfg.eval_steps; ++step) {
    int action = 0;
    ActionSource source = ActionSource::Teacher;
    switch (cfg.algo) {
      case AlgoId::TeacherOnly:
        action = teacher->greedy(obs);
        break;
      case AlgoId::Exp3:
      case AlgoId::Exp3Ix:
        action = argmax_lowest(learner->weights);
        source = ActionSource::Cce;
        break;
      case AlgoId::Exp3Ixrl: {
        const auto sel = table->select(obs, k, teacher->greedy(obs), agent_rng,
                                       PolicyMode::Eval);
        action = sel.action;
        source = sel.source;
        break;
      }
    }
    const StepResult sr = env->step(action, env_rng);
    out.cum_eval_reward += sr.reward;
    out.eval_log.push_back({action, sr.reward, source});
    obs = sr.terminal ? env->reset(env_rng) : sr.next_obs;
  }

  out.env_draw_count = env_rng.draw_count();
  if (cfg.record_ledger) out.train_ledger = std::move(ledger);
  out.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start)
          .count();
  return out;
}

std::vector<RunResult> run_batch(const ExperimentConfig& cfg, ExecMode mode) {
  validate(cfg);
  std::vector<RunResult> results(cfg.runs);
  if (mode == ExecMode::Serial) {
    for (int r = 0; r < cfg.runs; ++r) results[r] = run_single(cfg, r);
    return results;
  }

  std::exception_ptr first_error;
#pragma omp parallel for schedule(dynamic)
  for (int r = 0; r < cfg.runs; ++r) {
    try {
      results[r] = run_single(cfg, r);
    } catch (...) {
#pragma omp critical
      {
        if (!first_error) first_error = std::current_exception();
      }
    }
  }
  if (first_error) std::rethrow_exception(first_error);
  return results;
}

// -- artifact formatting -------------------------------------------------------

std::string fmt_g6(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

std::string format_runs_csv(
    const std::vector<std::pair<ExperimentConfig, std::vector<RunResult>>>&
        cells) {
  std::ostringstream csv;
  csv << "env,algo,teacher,run,seed,cum_reward,regret\n";
  for (const auto& [cfg, results] : cells) {
    for (const RunResult& r : results) {
      csv << to_string(cfg.env) << ',' << to_string(cfg.algo) << ','
          << to_string(cfg.teacher) << ',' << r.run_index << ',' << r.env_seed
          << ',' << fmt_g6(r.cum_eval_reward) << ',' << fmt_g6(r.train_regret)
          << '\n';
    }
  }
  return csv.str();
}

SummaryRow summarize_cell(const ExperimentConfig& cfg,
                          const std::vector<RunResult>& results) {
  std::vector<double> rewards(results.size());
  for (std::size_t i = 0; i < results.size(); ++i) {
    rewards[i] = results[i].cum_eval_reward;
  }
  return aggregate_runs(to_string(cfg.env), to_string(cfg.algo),
                        to_string(cfg.teacher), rewards);
}

std::string format_summary_json(const std::vector<SummaryRow>& rows,
                                const std::vector<double>& mean_regrets) {
  nlohmann::ordered_json root;
  root["cells"] = nlohmann::ordered_json::array();
  for (std::size_t i = 0; i < rows.size(); ++i) {
    nlohmann::ordered_json cell;
    cell["env"] = rows[i].env;
    cell["algo"] = rows[i].algo;
    cell["teacher"] = rows[i].teacher;
    cell["runs"] = rows[i].runs;
    cell["mean_cum_reward"] = rows[i].mean;
    cell["std_pop"] = rows[i].std_pop;
    cell["std_sample"] = rows[i].std_sample;
    cell["mean_regret"] = mean_regrets[i];
    root["cells"].push_back(std::move(cell));
  }
  return root.dump(2) + "\n";
}

MatrixResult run_matrix(const std::vector<ExperimentConfig>& cells,
                        ExecMode mode) {
  for (const auto& cfg : cells) validate(cfg);

  std::vector<std::pair<ExperimentConfig, std::vector<RunResult>>> all;
  all.reserve(cells.size());
  for (const auto& cfg : cells) all.emplace_back(cfg, run_batch(cfg, mode));

  MatrixResult out;
  std::vector<double> mean_regrets;
  for (const auto& [cfg, results] : all) {
    out.summary.push_back(summarize_cell(cfg, results));
    double regret_sum = 0.0;
    for (const auto& r : results) regret_sum += r.train_regret;
    mean_regrets.push_back(regret_sum / static_cast<double>(results.size()));
  }
  out.runs_csv = format_runs_csv(all);
  out.summary_json = format_summary_json(out.summary, mean_regrets);
  return out;
}

void write_matrix_artifacts(const MatrixResult& result,
                            const std::string& out_dir) {
  namespace fs = std::filesystem;
  std::error_code ec;
  fs::create_directories(out_dir, ec);
  if (ec) {
    throw std::runtime_error("cannot create output directory " + out_dir +
                             ": " + ec.message());
  }
  const auto write = [&](const std::string& name, const std::string& text) {
    const std::string path = out_dir + "/" + name;
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open " + path + " for writing");
    f << text;
    if (!f) throw std::runtime_error("write failed for " + path);
  };
  write("runs.csv", result.runs_csv);
  write("summary.json", result.summary_json);
}

std::vector<ExperimentConfig> table1_preset(std::uint64_t master_seed,
                                            int runs) {
  std::vector<ExperimentConfig> cells;
  const TeacherId teachers[] = {TeacherId::Gradient, TeacherId::Ucb,
                                TeacherId::EpsGreedy};
  for (EnvId env : {EnvId::DetMab, EnvId::StochMab}) {
    for (AlgoId algo : {AlgoId::Exp3, AlgoId::Exp3Ix}) {
      ExperimentConfig cfg;
      cfg.env = env;
      cfg.algo = algo;
      cfg.master_seed = master_seed;
      cfg.runs = runs;
      cells.push_back(cfg);
    }
    for (AlgoId algo : {AlgoId::TeacherOnly, AlgoId::Exp3Ixrl}) {
      for (TeacherId teacher : teachers) {
        ExperimentConfig cfg;
        cfg.env = env;
        cfg.algo = algo;
        cfg.teacher = teacher;
        cfg.master_seed = master_seed;
        cfg.runs = runs;
        cells.push_back(cfg);
      }
    }
  }
  return cells;
}

std::vector<SweepPoint> sweep_certainty(
    const ExperimentConfig& base, const std::vector<std::int64_t>& thresholds,
    ExecMode mode) {
  if (base.algo != AlgoId::Exp3Ixrl) {
    throw std::invalid_argument("certainty sweep requires algo exp3ixrl");
  }
  std::vector<SweepPoint> points;
  for (std::int64_t c : thresholds) {
    ExperimentConfig cfg = base;
    cfg.certainty = c;
    const auto results = run_batch(cfg, mode);
    SweepPoint p;
    p.certainty = c;
    p.row = summarize_cell(cfg, results);
    double regret_sum = 0.0;
    for (const auto& r : results) regret_sum += r.train_regret;
    p.mean_regret = regret_sum / static_cast<double>(results.size());
    points.push_back(std::move(p));
  }
  return points;
}

std::string format_sweep_csv(const std::vector<SweepPoint>& points) {
  std::ostringstream csv;
  csv << "certainty,mean,std\n";
  for (const auto& p : points) {
    csv << p.certainty << ',' << fmt_g6(p.row.mean) << ','
        << fmt_g6(p.row.std_pop) << '\n';
  }
  return csv.str();
}

// -- configuration file ----------------------------------------------------------

ExperimentConfig config_from_json(const std::string& text) {
  const auto j = nlohmann::json::parse(text);
  ExperimentConfig cfg;
  for (const auto& [key, value] : j.items()) {
    if (key == "env") {
      cfg.env = env_id_from_string(value.get<std::string>());
    } else if (key == "algo") {
      cfg.algo = algo_id_from_string(value.get<std::string>());
    } else if (key == "teacher") {
      cfg.teacher = teacher_id_from_string(value.get<std::string>());
    } else if (key == "train_steps") {
      cfg.train_steps = value.get<std::int64_t>();
    } else if (key == "eval_steps") {
      cfg.eval_steps = value.get<int>();
    } else if (key == "runs") {
      cfg.runs = value.get<int>();
    } else if (key == "certainty") {
      cfg.certainty = value.get<std::int64_t>();
    } else if (key == "seed") {
      cfg.master_seed = value.get<std::uint64_t>();
    } else if (key == "out_dir") {
      cfg.out_dir = value.get<std::string>();
    } else if (key == "ring_spread_prob") {
      cfg.ring_spread_prob = value.get<double>();
    } else if (key == "behavior_smoothing") {
      cfg.behavior_smoothing = value.get<double>();
    } else if (key == "freeze_after_certainty") {
      cfg.freeze_after_certainty = value.get<bool>();
    } else if (key == "eval_policy") {
      const auto s = value.get<std::string>();
      if (s == "argmax") {
        cfg.eval_policy = EvalPolicy::Argmax;
      } else if (s == "sample") {
        cfg.eval_policy = EvalPolicy::Sample;
      } else {
        throw std::invalid_argument("eval_policy must be argmax or sample");
      }
    } else if (key == "observer_update") {
      const auto s = value.get<std::string>();
      if (s == "mean-tracking") {
        cfg.observer_update = ObserverUpdate::MeanTracking;
      } else if (s == "importance-weighted") {
        cfg.observer_update = ObserverUpdate::ImportanceWeighted;
      } else {
        throw std::invalid_argument(
            "observer_update must be mean-tracking or importance-weighted");
      }
    } else if (key == "teacher_params") {
      for (const auto& [pk, pv] : value.items()) {
        if (pk == "epsilon") {
          cfg.teacher_params.epsilon = pv.get<double>();
        } else if (pk == "ucb_c") {
          cfg.teacher_params.ucb_c = pv.get<double>();
        } else if (pk == "alpha") {
          cfg.teacher_params.alpha = pv.get<double>();
        } else if (pk == "gamma") {
          cfg.teacher_params.gamma = pv.get<double>();
        } else {
          throw std::invalid_argument("unknown teacher_params key: " + pk);
        }
      }
    } else {
      throw std::invalid_argument("unknown config key: " + key);
    }
  }
  return cfg;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config file: " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return config_from_json(buf.str());
}

}  // namespace ixrl
