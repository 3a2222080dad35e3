#include "ixrl/exp3.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace ixrl {

double Schedule::at(std::int64_t t) const {
  if (constant >= 0.0) return constant;
  if (t < 1) throw std::invalid_argument("schedule evaluated at t < 1");
  return std::min(cap, scale / std::sqrt(static_cast<double>(t)));
}

Schedule Schedule::constant_of(double v) {
  Schedule s;
  s.constant = v;
  return s;
}

Schedule Schedule::inv_sqrt(double scale, double cap) {
  Schedule s;
  s.scale = scale;
  s.cap = cap;
  return s;
}

Schedule default_eta(int k) {
  return Schedule::inv_sqrt(std::sqrt(2.0 * std::log(k) / k));
}

Schedule default_gamma_ix(int k) {
  return Schedule::inv_sqrt(0.5 * std::sqrt(2.0 * std::log(k) / k));
}

Schedule default_gamma_mix(int k) {
  return Schedule::inv_sqrt(std::sqrt(k * std::log(k)), 0.5);
}

Exp3Params Exp3Params::defaults(int k) {
  return {default_eta(k), default_gamma_mix(k)};
}

Exp3IxParams Exp3IxParams::defaults(int k) {
  return {default_eta(k), default_gamma_ix(k)};
}

namespace {

void check_loss(double loss) {
  if (!(loss >= 0.0 && loss <= 1.0)) {
    throw std::invalid_argument(
        "loss outside [0,1]; normalize rewards with reward_to_loss first");
  }
}

void check_action(int action, const LearnerState& state) {
  if (action < 0 || action >= state.arm_count()) {
    throw std::out_of_range("learner update: action index out of range");
  }
}

// Divides by the max weight once it leaves [1e-100, 1e100]; weight ratios,
// hence distributions and argmax, are unchanged.
void renormalize_if_needed(LearnerState& state) {
  const double m = *std::max_element(state.weights.begin(),
                                     state.weights.end());
  if (m >= 1e-100 && m <= 1e100) return;
  for (auto& w : state.weights) w /= m;
}

ProbabilityVector weight_proportions(const LearnerState& state) {
  ProbabilityVector p;
  p.probs.resize(state.weights.size());
  const double sum =
      std::accumulate(state.weights.begin(), state.weights.end(), 0.0);
  for (std::size_t i = 0; i < state.weights.size(); ++i) {
    p.probs[i] = state.weights[i] / sum;
  }
  return p;
}

}  // namespace

ProbabilityVector exp3_distribution(const LearnerState& state,
                                    const Exp3Params& params) {
  ProbabilityVector p = weight_proportions(state);
  const double gm = params.gamma_mix.at(state.t + 1);
  const int k = state.arm_count();
  for (auto& v : p.probs) v = (1.0 - gm) * v + gm / k;
  return p;
}

ProbabilityVector exp3ix_distribution(const LearnerState& state) {
  return weight_proportions(state);
}

void exp3_update(LearnerState& state, const Exp3Params& params, int action,
                 double loss) {
  check_loss(loss);
  check_action(action, state);
  const std::int64_t step = state.t + 1;
  const ProbabilityVector p = exp3_distribution(state, params);
  const double lhat = loss / p.probs[action];
  state.weights[action] *= std::exp(-params.eta.at(step) * lhat);
  state.t = step;
  renormalize_if_needed(state);
}

void exp3ix_update_weighted(LearnerState& state, const Schedule& eta,
                            int action, double loss, double denominator) {
  check_loss(loss);
  check_action(action, state);
  if (!(denominator > 0.0)) {
    throw std::invalid_argument("estimator denominator must be positive");
  }
  const std::int64_t step = state.t + 1;
  state.weights[action] *= std::exp(-eta.at(step) * loss / denominator);
  state.t = step;
  renormalize_if_needed(state);
}

void exp3ix_update_off_policy(LearnerState& state, const Exp3IxParams& params,
                              int action, double loss, double behavior_prob) {
  if (!(behavior_prob > 0.0)) {
    throw std::invalid_argument("behavior probability must be positive");
  }
  exp3ix_update_weighted(state, params.eta, action, loss,
                         behavior_prob + params.gamma_ix.at(state.t + 1));
}

void exp3ix_update(LearnerState& state, const Exp3IxParams& params, int action,
                   double loss) {
  check_action(action, state);
  const ProbabilityVector p = exp3ix_distribution(state);
  exp3ix_update_off_policy(state, params, action, loss, p.probs[action]);
}

}  // namespace ixrl
