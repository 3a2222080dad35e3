#include "ixrl/env.hpp"

#include <algorithm>
#include <bit>
#include <stdexcept>

namespace ixrl {

namespace {

void check_action(int action, int k) {
  if (action < 0 || action >= k) {
    throw std::out_of_range("env step: action index out of range");
  }
}

}  // namespace

// -- DeterministicMab --------------------------------------------------------

StepResult DeterministicMab::step(int action, RandomStream&) {
  check_action(action, kArms);
  StepResult r;
  r.next_obs = 0;
  r.terminal = false;
  r.all_action_rewards.resize(kArms);
  for (int a = 0; a < kArms; ++a) {
    r.all_action_rewards[a] = static_cast<double>(a) / 10.0;
  }
  r.reward = r.all_action_rewards[action];
  return r;
}

std::optional<double> DeterministicMab::optimal_eval_return(
    int eval_steps) const {
  return eval_steps * 0.9;
}

// -- StochasticMab -----------------------------------------------------------

StochasticMab::StochasticMab(RandomStream& rng) {
  means_.resize(kArms);
  for (auto& m : means_) m = rng.normal();
}

StochasticMab::StochasticMab(std::vector<double> arm_means)
    : means_(std::move(arm_means)) {
  if (static_cast<int>(means_.size()) != kArms) {
    throw std::invalid_argument("StochasticMab: expected 10 arm means");
  }
}

StepResult StochasticMab::step(int action, RandomStream& rng) {
  check_action(action, kArms);
  const double noise = rng.normal();
  StepResult r;
  r.next_obs = 0;
  r.terminal = false;
  r.all_action_rewards.resize(kArms);
  for (int a = 0; a < kArms; ++a) {
    r.all_action_rewards[a] = means_[a] + noise;
  }
  r.reward = r.all_action_rewards[action];
  return r;
}

std::optional<double> StochasticMab::optimal_eval_return(
    int eval_steps) const {
  return eval_steps * *std::max_element(means_.begin(), means_.end());
}

// -- RingDefense -------------------------------------------------------------

RingDefense::RingDefense(double spread_prob) : spread_prob_(spread_prob) {
  if (spread_prob < 0.0 || spread_prob > 1.0) {
    throw std::invalid_argument("RingDefense: spread_prob outside [0,1]");
  }
}

ObsKey RingDefense::reset(RandomStream&) {
  state_ = 1;
  steps_in_episode_ = 0;
  return state_;
}

StepResult RingDefense::step(int action, RandomStream& rng) {
  check_action(action, kHosts);

  // One uniform per directed ring edge, in fixed (host, direction) order.
  // Draw count never depends on the state or the action taken.
  double edge_u[kHosts][2];
  for (int h = 0; h < kHosts; ++h) {
    edge_u[h][0] = rng.uniform();
    edge_u[h][1] = rng.uniform();
  }

  auto next_state = [&](ObsKey pre, int cleaned) -> ObsKey {
    ObsKey cur = pre & ~(ObsKey{1} << cleaned);
    ObsKey next = cur;
    for (int h = 0; h < kHosts; ++h) {
      if (!(cur & (ObsKey{1} << h))) continue;
      const int nbrs[2] = {(h + 1) % kHosts, (h + kHosts - 1) % kHosts};
      for (int d = 0; d < 2; ++d) {
        if (edge_u[h][d] < spread_prob_) next |= ObsKey{1} << nbrs[d];
      }
    }
    return next;
  };

  StepResult r;
  r.all_action_rewards.resize(kHosts);
  for (int a = 0; a < kHosts; ++a) {
    const int infected = std::popcount(next_state(state_, a));
    r.all_action_rewards[a] = -static_cast<double>(infected) / kHosts;
  }

  state_ = next_state(state_, action);
  r.next_obs = state_;
  r.reward = r.all_action_rewards[action];
  ++steps_in_episode_;
  r.terminal = steps_in_episode_ >= kHorizon;
  return r;
}

// -- factory -----------------------------------------------------------------

std::string to_string(EnvId id) {
  switch (id) {
    case EnvId::DetMab: return "det-mab";
    case EnvId::StochMab: return "stoch-mab";
    case EnvId::RingDefense: return "ring-defense";
  }
  return "?";
}

EnvId env_id_from_string(const std::string& s) {
  if (s == "det-mab") return EnvId::DetMab;
  if (s == "stoch-mab") return EnvId::StochMab;
  if (s == "ring-defense") return EnvId::RingDefense;
  throw std::invalid_argument("unknown environment id: " + s);
}

std::unique_ptr<Env> make_env(EnvId id, RandomStream& rng,
                              double ring_spread_prob) {
  switch (id) {
    case EnvId::DetMab: return std::make_unique<DeterministicMab>();
    case EnvId::StochMab: return std::make_unique<StochasticMab>(rng);
    case EnvId::RingDefense:
      return std::make_unique<RingDefense>(ring_spread_prob);
  }
  throw std::invalid_argument("unknown environment id");
}

}  // namespace ixrl
