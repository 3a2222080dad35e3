#ifndef IXRL_TYPES_HPP
#define IXRL_TYPES_HPP

#include <cstdint>
#include <vector>

#include "ixrl/rng.hpp"

namespace ixrl {

// Observation keys are opaque 64-bit values (bandits use 0, the ring
// environment uses its infection bitmask).
using ObsKey = std::uint64_t;

// Point on the action simplex: entries >= 0, sum within 1e-9 of 1.
struct ProbabilityVector {
  std::vector<double> probs;

  bool valid() const;
  void require_valid() const;  // throws std::invalid_argument on violation
};

// Environment reward range; maps rewards onto the [0,1] loss scale that
// exponential-weights learners require.
struct RewardBounds {
  double lo = 0.0;
  double hi = 1.0;
};

// loss = (hi - clip(r, lo, hi)) / (hi - lo); monotone decreasing in r,
// 0 at r >= hi, 1 at r <= lo.
double reward_to_loss(double reward, const RewardBounds& bounds);

struct StepRecord {
  ObsKey obs = 0;
  int action = 0;
  double reward = 0.0;
  ObsKey next_obs = 0;
  bool terminal = false;
};

using Trajectory = std::vector<StepRecord>;

// Draws index i with probability p.probs[i], consuming exactly one
// engine draw. Rejects vectors that violate the simplex invariants.
int sample_categorical(const ProbabilityVector& p, RandomStream& rng);

// Index of the largest entry; ties resolve to the lowest index.
int argmax_lowest(const std::vector<double>& values);

}  // namespace ixrl

#endif  // IXRL_TYPES_HPP
