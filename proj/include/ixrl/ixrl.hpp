#ifndef IXRL_IXRL_HPP
#define IXRL_IXRL_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "ixrl/exp3.hpp"
#include "ixrl/rng.hpp"
#include "ixrl/types.hpp"

namespace ixrl {

enum class ActionSource { Teacher, Cce };
enum class PolicyMode { Train, Eval };
enum class EvalPolicy { Argmax, Sample };

// How observer-mode steps reach the learner weights.
//
// MeanTracking (default): rebuild w_i = exp(-H(t) * m_i) where m_i is the
// Laplace-shrunk mean observed loss of arm i at this observation and H(t)
// the accumulated eta schedule. Every arm's estimate converges to its true
// mean loss regardless of how often the teacher plays it, which keeps the
// handoff ranking faithful even under teachers whose play distribution
// drifts over time.
//
// ImportanceWeighted: per-play multiplicative decay with the inverse
// smoothed behavior frequency, lhat = loss / (b_action + bias). Unbiased
// for a stationary teacher but the running-average frequency lags a
// concentrating teacher badly: its favorite arm over-accrues during the
// concentration transient and rarely-taught arms turn into a variance
// lottery. Kept as a configurable variant.
enum class ObserverUpdate { MeanTracking, ImportanceWeighted };

struct IxrlParams {
  // Visits required at an observation before the learned policy takes over.
  std::int64_t certainty = 2000;
  EvalPolicy eval_policy = EvalPolicy::Argmax;
  // Schedules for the learner updates; gamma_ix guards the post-certainty
  // on-policy estimator, where the learner's own probabilities can shrink
  // without bound.
  Exp3IxParams ix;
  ObserverUpdate observer_update = ObserverUpdate::MeanTracking;
  // Laplace constant: smooths the behavior frequencies and, for
  // MeanTracking, shrinks per-arm mean losses toward the neutral 0.5.
  double behavior_smoothing = 1.0;
  // ImportanceWeighted only: bias added to the smoothed behavior frequency
  // in the denominator. Unset means the smoothing floor s/(visits + K*s);
  // a constant can be pinned for tests.
  std::optional<double> observer_bias;
  // When set, post-certainty self-play stops updating the learner.
  bool freeze_after_certainty = false;
};

// Per-observation learner plus visit bookkeeping. behavior_counts and
// loss_sums only grow while the teacher is in control; visits count every
// step taken here.
struct StateEntry {
  LearnerState learner;
  std::int64_t visits = 0;
  std::vector<std::int64_t> behavior_counts;
  std::vector<double> loss_sums;  // per-arm observed losses, teacher steps
  double eta_accum = 0.0;         // H(t): accumulated eta over teacher steps

  explicit StateEntry(int k)
      : learner(k), behavior_counts(k, 0), loss_sums(k, 0.0) {}
  int arm_count() const { return learner.arm_count(); }

  // Smoothed empirical frequency of the teacher choosing each action here:
  // b_i = (behavior_counts[i] + s) / (visits + K*s).
  ProbabilityVector behavior_frequencies(double smoothing) const;

  // Laplace-shrunk mean observed loss per arm:
  // m_i = (loss_sums[i] + 0.5*s) / (behavior_counts[i] + s).
  std::vector<double> mean_losses(double smoothing) const;
};

// Map from observation key to learner entry, created lazily on first visit.
// The action-space size of an entry is fixed at creation, so observations
// may carry different action counts.
class StateTable {
 public:
  explicit StateTable(IxrlParams params) : params_(std::move(params)) {}

  const IxrlParams& params() const { return params_; }

  // Chooses the executed action for one step. Below the certainty threshold
  // the teacher's proposal passes through unchanged (creating the entry on
  // first sight); at or above it the learner's policy takes over: sampled
  // from its weight proportions in Train mode, argmax of weights (ties to
  // lowest index) or sampled per eval_policy in Eval mode. Does not mutate
  // visit counts.
  struct Selection {
    int action = 0;
    ActionSource source = ActionSource::Teacher;
  };
  Selection select(ObsKey obs, int action_count, int teacher_action,
                   RandomStream& rng, PolicyMode mode = PolicyMode::Train);

  // Consumes the outcome of one executed step. Advances visits; in observer
  // mode (source == Teacher) also advances the behavior count and updates
  // the learner with the behavior-normalized estimator
  //   lhat = loss / (b_action + bias),
  // where b is the smoothed teacher frequency at this observation and bias
  // is observer_bias (smoothing floor by default). For learner-sourced
  // steps the standard on-policy IX update applies (skipped when
  // freeze_after_certainty is set). loss must lie in [0,1].
  void observe(ObsKey obs, int action_count, int action, double loss,
               ActionSource source);

  // Folds a recorded trajectory in order, every record teacher-sourced,
  // losses normalized via reward_to_loss with the given bounds. Equivalent
  // to the corresponding sequence of observe() calls.
  void ingest_offline(const Trajectory& trajectory, int action_count,
                      const RewardBounds& bounds);

  // visits(obs) >= certainty; false for observations never seen.
  bool certainty_reached(ObsKey obs) const;

  const StateEntry* find(ObsKey obs) const;
  std::size_t size() const { return entries_.size(); }

  // Snapshot format: one JSON object, entries sorted by observation key,
  // each carrying obs (decimal string), visits, behavior_counts, weights
  // and the learner step counter. Round-trips exactly.
  std::string to_json() const;
  static StateTable from_json(const std::string& text, IxrlParams params);

 private:
  StateEntry& entry(ObsKey obs, int action_count);

  IxrlParams params_;
  std::unordered_map<ObsKey, StateEntry> entries_;
};

}  // namespace ixrl

#endif  // IXRL_IXRL_HPP
