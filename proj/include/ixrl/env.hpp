#ifndef IXRL_ENV_HPP
#define IXRL_ENV_HPP

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "ixrl/rng.hpp"
#include "ixrl/types.hpp"

namespace ixrl {

struct StepResult {
  ObsKey next_obs = 0;
  double reward = 0.0;
  bool terminal = false;
  // Reward each action would have earned from the pre-step state, using the
  // same random draws the actual step consumed. all_action_rewards[action]
  // equals reward. Measurement side channel for regret ledgers only;
  // learning code must not read it.
  std::vector<double> all_action_rewards;
};

// Single-agent view of the stochastic game: fixed action space, bounded
// rewards, opaque observation keys. step() with an identical stream and
// action sequence reproduces identical (observation, reward) sequences.
// Implementations must consume a state- and action-independent number of
// stream draws per step so that paired runs share the environment stream.
class Env {
 public:
  virtual ~Env() = default;

  virtual int action_count() const = 0;
  // Steps per episode; 0 means non-episodic (bandits).
  virtual int horizon() const = 0;
  virtual RewardBounds reward_bounds() const = 0;

  virtual ObsKey reset(RandomStream& rng) = 0;
  virtual StepResult step(int action, RandomStream& rng) = 0;

  // Best achievable deterministic-policy return over eval_steps pulls.
  // Defined for bandits only; multi-state environments have no closed form.
  virtual std::optional<double> optimal_eval_return(int eval_steps) const {
    (void)eval_steps;
    return std::nullopt;
  }
};

// Ten arms, reward(a) = a/10, no randomness, single dummy observation.
class DeterministicMab : public Env {
 public:
  static constexpr int kArms = 10;

  int action_count() const override { return kArms; }
  int horizon() const override { return 0; }
  RewardBounds reward_bounds() const override { return {0.0, 1.0}; }

  ObsKey reset(RandomStream&) override { return 0; }
  StepResult step(int action, RandomStream& rng) override;
  std::optional<double> optimal_eval_return(int eval_steps) const override;
};

// Ten arms; arm means drawn once at construction from N(0,1); each pull
// adds a fresh unit-normal noise draw shared by all counterfactual arms.
class StochasticMab : public Env {
 public:
  static constexpr int kArms = 10;

  // Draws the arm means (kArms normal draws) from the given stream.
  explicit StochasticMab(RandomStream& rng);
  // Fixed means, for tests.
  explicit StochasticMab(std::vector<double> arm_means);

  int action_count() const override { return kArms; }
  int horizon() const override { return 0; }
  RewardBounds reward_bounds() const override { return {-5.0, 5.0}; }

  ObsKey reset(RandomStream&) override { return 0; }
  StepResult step(int action, RandomStream& rng) override;
  std::optional<double> optimal_eval_return(int eval_steps) const override;

  const std::vector<double>& arm_means() const { return means_; }

 private:
  std::vector<double> means_;
};

// Six hosts on a ring; the observation is the infection bitmask. Action i
// cleans host i, then infection spreads along each directed ring edge with
// probability spread_prob. Reward is -(infected after spread)/6. Episodes
// end after 30 steps. Exactly 12 stream draws per step (one per directed
// edge) regardless of state, keeping paired runs stream-aligned.
class RingDefense : public Env {
 public:
  static constexpr int kHosts = 6;
  static constexpr int kHorizon = 30;

  explicit RingDefense(double spread_prob = 0.3);

  int action_count() const override { return kHosts; }
  int horizon() const override { return kHorizon; }
  RewardBounds reward_bounds() const override { return {-1.0, 0.0}; }

  ObsKey reset(RandomStream&) override;
  StepResult step(int action, RandomStream& rng) override;

  ObsKey state() const { return state_; }

 private:
  double spread_prob_;
  ObsKey state_ = 1;  // host 0 infected
  int steps_in_episode_ = 0;
};

enum class EnvId { DetMab, StochMab, RingDefense };

std::string to_string(EnvId id);
EnvId env_id_from_string(const std::string& s);

// Constructs the environment for one run. StochasticMab consumes its
// arm-mean draws from the stream here; the others consume nothing.
std::unique_ptr<Env> make_env(EnvId id, RandomStream& rng,
                              double ring_spread_prob = 0.3);

}  // namespace ixrl

#endif  // IXRL_ENV_HPP
