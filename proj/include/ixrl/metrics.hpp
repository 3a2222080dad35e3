#ifndef IXRL_METRICS_HPP
#define IXRL_METRICS_HPP

#include <cstdint>
#include <string>
#include <vector>

namespace ixrl {

// Full-information loss ledger: the chosen arm and the complete
// counterfactual loss vector for every step. Environments expose the
// counterfactuals as a measurement side channel; the algorithms themselves
// see bandit feedback only.
class RegretLedger {
 public:
  void push(int action, std::vector<double> loss_vector);

  std::int64_t steps() const { return static_cast<std::int64_t>(actions_.size()); }
  int arm_count() const;

  // Realized cumulative loss minus the best single arm's cumulative loss,
  // over the first t steps (all steps when t < 0). Always >= 0.
  double regret(std::int64_t t = -1) const;

  // Plug-in pseudo-regret: sum_t mu[a_t] - T * min_i mu[i] for true per-arm
  // mean losses mu. Always >= 0 when mu is exact.
  double pseudo_regret(const std::vector<double>& true_mean_losses) const;

  double chosen_loss(std::int64_t t) const { return losses_[t][actions_[t]]; }
  int action_at(std::int64_t t) const { return actions_[t]; }

 private:
  std::vector<int> actions_;
  std::vector<std::vector<double>> losses_;
};

// N-player normal-form game given by per-player cost tensors, stored flat in
// row-major profile order: profile (a_0, ..., a_{N-1}) lives at index
// ((a_0 * K_1 + a_1) * K_2 + a_2) * ... with player 0 varying slowest.
struct NormalFormGame {
  std::vector<int> action_counts;         // one entry per player
  std::vector<std::vector<double>> costs;  // [player][profile_index]

  int players() const { return static_cast<int>(action_counts.size()); }
  std::int64_t profile_count() const;
  void validate() const;

  std::int64_t profile_index(const std::vector<int>& profile) const;

  // Loads the documented JSON form:
  //   {"action_counts": [2,2], "costs": [[...],[...]]}
  static NormalFormGame from_json(const std::string& text);
  static NormalFormGame load(const std::string& path);
  std::string to_json() const;

  // Zero-sum matching pennies: player 0 pays 0 on a match and 1 otherwise,
  // player 1 the reverse.
  static NormalFormGame matching_pennies();
};

// Distribution over joint action profiles, flat row-major like the game.
struct EmpiricalJoint {
  std::vector<double> prob;

  static EmpiricalJoint from_counts(const std::vector<std::int64_t>& counts);
  void validate() const;
};

// Largest expected-cost improvement any player can obtain by committing to a
// fixed unilateral deviation, by brute-force enumeration. joint is an
// eps-CCE iff the result is <= eps. Requires the full product space
// (<= 10^6 profiles).
double cce_gap(const NormalFormGame& game, const EmpiricalJoint& joint);

struct SummaryRow {
  std::string env;
  std::string algo;
  std::string teacher;
  std::int64_t runs = 0;
  double mean = 0.0;
  double std_pop = 0.0;     // population standard deviation
  double std_sample = 0.0;  // sample standard deviation (n-1), 0 when n < 2
};

// Mean and standard deviations of cumulative rewards; inputs are summed in
// the order given, so callers pass run-index order for determinism.
SummaryRow aggregate_runs(const std::string& env, const std::string& algo,
                          const std::string& teacher,
                          const std::vector<double>& cum_rewards);

}  // namespace ixrl

#endif  // IXRL_METRICS_HPP
