// Times the serial reference runner against the OpenMP runner on identical
// cells and checks that both produce the same per-run results.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "ixrl/harness.hpp"

using namespace ixrl;

namespace {

double time_batch(const ExperimentConfig& cfg, ExecMode mode,
                  std::vector<RunResult>* out) {
  const auto t0 = std::chrono::steady_clock::now();
  *out = run_batch(cfg, mode);
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
      .count();
}

bool same_results(const std::vector<RunResult>& a,
                  const std::vector<RunResult>& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i].cum_eval_reward != b[i].cum_eval_reward) return false;
    if (a[i].train_regret != b[i].train_regret) return false;
    if (a[i].env_draw_count != b[i].env_draw_count) return false;
  }
  return true;
}

}  // namespace

int main(int argc, char** argv) {
  int runs = 100;
  if (argc > 1) runs = std::atoi(argv[1]);

#ifdef _OPENMP
  std::printf("omp max threads: %d\n", omp_get_max_threads());
#else
  std::printf("built without OpenMP; parallel mode degrades to serial\n");
#endif

  struct BenchCell {
    std::string name;
    ExperimentConfig cfg;
  };
  std::vector<BenchCell> cells;

  {
    ExperimentConfig cfg;
    cfg.env = EnvId::StochMab;
    cfg.algo = AlgoId::Exp3Ixrl;
    cfg.teacher = TeacherId::Ucb;
    cfg.runs = runs;
    cells.push_back({"stoch-mab exp3ixrl/ucb", cfg});
  }
  {
    ExperimentConfig cfg;
    cfg.env = EnvId::StochMab;
    cfg.algo = AlgoId::Exp3Ix;
    cfg.runs = runs;
    cells.push_back({"stoch-mab exp3ix", cfg});
  }
  {
    ExperimentConfig cfg;
    cfg.env = EnvId::RingDefense;
    cfg.algo = AlgoId::Exp3Ixrl;
    cfg.teacher = TeacherId::QLearn;
    cfg.runs = runs;
    cells.push_back({"ring-defense exp3ixrl/qlearn", cfg});
  }

  int mismatches = 0;
  std::printf("%-32s %10s %10s %8s\n", "cell", "serial[s]", "openmp[s]",
              "speedup");
  for (const auto& cell : cells) {
    std::vector<RunResult> serial, parallel;
    const double ts = time_batch(cell.cfg, ExecMode::Serial, &serial);
    const double tp = time_batch(cell.cfg, ExecMode::Parallel, &parallel);
    const bool ok = same_results(serial, parallel);
    if (!ok) ++mismatches;
    std::printf("%-32s %10.3f %10.3f %7.2fx %s\n", cell.name.c_str(), ts, tp,
                ts / tp, ok ? "" : "RESULTS DIFFER");
  }
  return mismatches == 0 ? 0 : 1;
}
