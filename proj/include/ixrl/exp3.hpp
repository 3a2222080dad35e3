#ifndef IXRL_EXP3_HPP
#define IXRL_EXP3_HPP

#include <cstdint>
#include <vector>

#include "ixrl/types.hpp"

namespace ixrl {

// Time-indexed rate, evaluated at update step t = 1, 2, ...
// Either a constant or the anytime form min(cap, scale/sqrt(t)).
struct Schedule {
  double constant = -1.0;  // >= 0 selects the constant form
  double scale = 0.0;
  double cap = 1e300;

  double at(std::int64_t t) const;

  static Schedule constant_of(double v);
  static Schedule inv_sqrt(double scale, double cap = 1e300);
};

// Anytime defaults for K arms:
//   eta(t)       = sqrt(2 ln K / (K t))
//   gamma_ix(t)  = eta(t) / 2
//   gamma_mix(t) = min(0.5, sqrt(K ln K / t))
Schedule default_eta(int k);
Schedule default_gamma_ix(int k);
Schedule default_gamma_mix(int k);

struct Exp3Params {
  Schedule eta;
  Schedule gamma_mix;  // uniform-exploration mixing rate in [0,1]

  static Exp3Params defaults(int k);
};

struct Exp3IxParams {
  Schedule eta;
  Schedule gamma_ix;  // implicit-exploration bias added to the estimator

  static Exp3IxParams defaults(int k);
};

// Multiplicative-weights state. Weights stay strictly positive and finite;
// whenever the maximum weight leaves [1e-100, 1e100] all weights are divided
// by that maximum. t counts completed updates.
struct LearnerState {
  std::vector<double> weights;
  std::int64_t t = 0;

  explicit LearnerState(int k) : weights(k, 1.0) {}
  int arm_count() const { return static_cast<int>(weights.size()); }
};

// p_i = (1 - gamma_mix) * w_i / sum(w) + gamma_mix / K, with gamma_mix
// evaluated at the upcoming step t+1. Every entry is >= gamma_mix/K.
ProbabilityVector exp3_distribution(const LearnerState& state,
                                    const Exp3Params& params);

// Pure weight proportions: p_i = w_i / sum(w).
ProbabilityVector exp3ix_distribution(const LearnerState& state);

// Importance-weighted update, estimator lhat = loss / p[action]; loss must
// be in [0,1] and the action drawn from exp3_distribution on this state.
void exp3_update(LearnerState& state, const Exp3Params& params, int action,
                 double loss);

// IX update, estimator lhat = loss / (p[action] + gamma_ix(t)); the action
// must come from exp3ix_distribution on this state (on-policy contract).
void exp3ix_update(LearnerState& state, const Exp3IxParams& params, int action,
                   double loss);

// IX update against an explicit behavior probability: the denominator uses
// behavior_prob instead of the learner's own p[action]. This is the
// observer-mode estimator; with behavior_prob = p[action] it coincides with
// exp3ix_update.
void exp3ix_update_off_policy(LearnerState& state, const Exp3IxParams& params,
                              int action, double loss, double behavior_prob);

// One importance-weighted decay with a caller-supplied denominator:
// w[action] *= exp(-eta(t+1) * loss / denominator). The building block
// behind both update flavors.
void exp3ix_update_weighted(LearnerState& state, const Schedule& eta,
                            int action, double loss, double denominator);

}  // namespace ixrl

#endif  // IXRL_EXP3_HPP
