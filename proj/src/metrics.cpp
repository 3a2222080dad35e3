#include "ixrl/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace ixrl {

// -- RegretLedger --------------------------------------------------------------

void RegretLedger::push(int action, std::vector<double> loss_vector) {
  if (!losses_.empty() && loss_vector.size() != losses_.front().size()) {
    throw std::invalid_argument("ledger: loss vector size changed");
  }
  if (action < 0 || action >= static_cast<int>(loss_vector.size())) {
    throw std::out_of_range("ledger: action index out of range");
  }
  actions_.push_back(action);
  losses_.push_back(std::move(loss_vector));
}

int RegretLedger::arm_count() const {
  return losses_.empty() ? 0 : static_cast<int>(losses_.front().size());
}

double RegretLedger::regret(std::int64_t t) const {
  const std::int64_t n = (t < 0) ? steps() : std::min(t, steps());
  if (n < 1) throw std::invalid_argument("regret over an empty ledger");
  const int k = arm_count();
  double chosen_sum = 0.0;
  std::vector<double> arm_sums(k, 0.0);
  for (std::int64_t i = 0; i < n; ++i) {
    chosen_sum += losses_[i][actions_[i]];
    for (int a = 0; a < k; ++a) arm_sums[a] += losses_[i][a];
  }
  return chosen_sum - *std::min_element(arm_sums.begin(), arm_sums.end());
}

double RegretLedger::pseudo_regret(
    const std::vector<double>& true_mean_losses) const {
  if (steps() < 1) throw std::invalid_argument("pseudo-regret over an empty ledger");
  if (static_cast<int>(true_mean_losses.size()) != arm_count()) {
    throw std::invalid_argument("pseudo-regret: arm count mismatch");
  }
  double chosen = 0.0;
  for (int a : actions_) chosen += true_mean_losses[a];
  const double best =
      *std::min_element(true_mean_losses.begin(), true_mean_losses.end());
  return chosen - static_cast<double>(steps()) * best;
}

// -- NormalFormGame --------------------------------------------------------------

std::int64_t NormalFormGame::profile_count() const {
  std::int64_t n = 1;
  for (int k : action_counts) n *= k;
  return n;
}

void NormalFormGame::validate() const {
  if (action_counts.empty()) throw std::invalid_argument("game has no players");
  for (int k : action_counts) {
    if (k < 1) throw std::invalid_argument("player with empty action space");
  }
  const std::int64_t profiles = profile_count();
  if (profiles > 1000000) {
    throw std::invalid_argument("game too large for full enumeration");
  }
  if (static_cast<int>(costs.size()) != players()) {
    throw std::invalid_argument("one cost tensor required per player");
  }
  for (const auto& c : costs) {
    if (static_cast<std::int64_t>(c.size()) != profiles) {
      throw std::invalid_argument("cost tensor not defined on every profile");
    }
  }
}

std::int64_t NormalFormGame::profile_index(
    const std::vector<int>& profile) const {
  std::int64_t idx = 0;
  for (int p = 0; p < players(); ++p) idx = idx * action_counts[p] + profile[p];
  return idx;
}

NormalFormGame NormalFormGame::from_json(const std::string& text) {
  const auto j = nlohmann::json::parse(text);
  NormalFormGame g;
  g.action_counts = j.at("action_counts").get<std::vector<int>>();
  g.costs = j.at("costs").get<std::vector<std::vector<double>>>();
  g.validate();
  return g;
}

NormalFormGame NormalFormGame::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open game file: " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return from_json(buf.str());
}

std::string NormalFormGame::to_json() const {
  nlohmann::ordered_json j;
  j["action_counts"] = action_counts;
  j["costs"] = costs;
  return j.dump(2);
}

NormalFormGame NormalFormGame::matching_pennies() {
  NormalFormGame g;
  g.action_counts = {2, 2};
  g.costs = {{0.0, 1.0, 1.0, 0.0}, {1.0, 0.0, 0.0, 1.0}};
  return g;
}

// -- EmpiricalJoint --------------------------------------------------------------

EmpiricalJoint EmpiricalJoint::from_counts(
    const std::vector<std::int64_t>& counts) {
  std::int64_t total = 0;
  for (auto c : counts) {
    if (c < 0) throw std::invalid_argument("negative profile count");
    total += c;
  }
  if (total == 0) throw std::invalid_argument("empty joint distribution");
  EmpiricalJoint joint;
  joint.prob.resize(counts.size());
  for (std::size_t i = 0; i < counts.size(); ++i) {
    joint.prob[i] = static_cast<double>(counts[i]) / static_cast<double>(total);
  }
  return joint;
}

void EmpiricalJoint::validate() const {
  double sum = 0.0;
  for (double p : prob) {
    if (!(p >= 0.0)) throw std::invalid_argument("joint has negative mass");
    sum += p;
  }
  if (std::abs(sum - 1.0) > 1e-9) {
    throw std::invalid_argument("joint does not sum to 1");
  }
}

// -- cce_gap ---------------------------------------------------------------------

double cce_gap(const NormalFormGame& game, const EmpiricalJoint& joint) {
  game.validate();
  joint.validate();
  const std::int64_t profiles = game.profile_count();
  if (static_cast<std::int64_t>(joint.prob.size()) != profiles) {
    throw std::invalid_argument("joint/game dimension mismatch");
  }

  const int n = game.players();
  // Strides of each player's action index in the flat profile order.
  std::vector<std::int64_t> stride(n, 1);
  for (int p = n - 2; p >= 0; --p) {
    stride[p] = stride[p + 1] * game.action_counts[p + 1];
  }

  double gap = 0.0;
  for (int p = 0; p < n; ++p) {
    const auto& cost = game.costs[p];
    double on_recommendation = 0.0;
    for (std::int64_t s = 0; s < profiles; ++s) {
      on_recommendation += joint.prob[s] * cost[s];
    }
    for (int dev = 0; dev < game.action_counts[p]; ++dev) {
      double deviated = 0.0;
      for (std::int64_t s = 0; s < profiles; ++s) {
        if (joint.prob[s] == 0.0) continue;
        const int own = static_cast<int>((s / stride[p]) % game.action_counts[p]);
        const std::int64_t s_dev = s + (dev - own) * stride[p];
        deviated += joint.prob[s] * cost[s_dev];
      }
      gap = std::max(gap, on_recommendation - deviated);
    }
  }
  return gap;
}

// -- aggregate_runs --------------------------------------------------------------

SummaryRow aggregate_runs(const std::string& env, const std::string& algo,
                          const std::string& teacher,
                          const std::vector<double>& cum_rewards) {
  if (cum_rewards.empty()) {
    throw std::invalid_argument("aggregate_runs: empty input");
  }
  SummaryRow row;
  row.env = env;
  row.algo = algo;
  row.teacher = teacher;
  row.runs = static_cast<std::int64_t>(cum_rewards.size());

  // Shifted two-pass: with a common shift the mean of identical inputs is
  // exact, so zero-variance cells report a std of exactly 0.
  const double shift = cum_rewards.front();
  double acc = 0.0;
  for (double r : cum_rewards) acc += r - shift;
  row.mean = shift + acc / static_cast<double>(row.runs);

  double sq = 0.0;
  for (double r : cum_rewards) sq += (r - row.mean) * (r - row.mean);
  row.std_pop = std::sqrt(sq / static_cast<double>(row.runs));
  row.std_sample =
      row.runs > 1 ? std::sqrt(sq / static_cast<double>(row.runs - 1)) : 0.0;
  return row;
}

}  // namespace ixrl
