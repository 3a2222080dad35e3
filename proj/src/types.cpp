#include "ixrl/types.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace ixrl {

bool ProbabilityVector::valid() const {
  if (probs.empty()) return false;
  double sum = 0.0;
  for (double p : probs) {
    if (!(p >= 0.0) || !std::isfinite(p)) return false;
    sum += p;
  }
  return std::abs(sum - 1.0) <= 1e-9;
}

void ProbabilityVector::require_valid() const {
  if (!valid()) {
    throw std::invalid_argument(
        "ProbabilityVector: entries must be >= 0 and sum to 1 within 1e-9");
  }
}

double reward_to_loss(double reward, const RewardBounds& bounds) {
  const double r = std::clamp(reward, bounds.lo, bounds.hi);
  return (bounds.hi - r) / (bounds.hi - bounds.lo);
}

int sample_categorical(const ProbabilityVector& p, RandomStream& rng) {
  p.require_valid();
  const double u = rng.uniform();
  double acc = 0.0;
  const int k = static_cast<int>(p.probs.size());
  for (int i = 0; i < k; ++i) {
    acc += p.probs[i];
    if (u < acc) return i;
  }
  return k - 1;  // guards against fp shortfall in the cumulative sum
}

int argmax_lowest(const std::vector<double>& values) {
  if (values.empty()) throw std::invalid_argument("argmax of empty vector");
  int best = 0;
  for (int i = 1; i < static_cast<int>(values.size()); ++i) {
    if (values[i] > values[best]) best = i;
  }
  return best;
}

}  // namespace ixrl
