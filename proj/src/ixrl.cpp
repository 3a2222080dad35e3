#include "ixrl/ixrl.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <json.hpp>

namespace ixrl {

ProbabilityVector StateEntry::behavior_frequencies(double smoothing) const {
  const int k = arm_count();
  ProbabilityVector b;
  b.probs.resize(k);
  const double denom =
      static_cast<double>(visits) + k * smoothing;
  for (int i = 0; i < k; ++i) {
    b.probs[i] = (static_cast<double>(behavior_counts[i]) + smoothing) / denom;
  }
  return b;
}

std::vector<double> StateEntry::mean_losses(double smoothing) const {
  const int k = arm_count();
  std::vector<double> m(k);
  for (int i = 0; i < k; ++i) {
    m[i] = (loss_sums[i] + 0.5 * smoothing) /
           (static_cast<double>(behavior_counts[i]) + smoothing);
  }
  return m;
}

StateEntry& StateTable::entry(ObsKey obs, int action_count) {
  auto it = entries_.find(obs);
  if (it == entries_.end()) {
    it = entries_.emplace(obs, StateEntry(action_count)).first;
  } else if (it->second.arm_count() != action_count) {
    throw std::invalid_argument(
        "observation revisited with a different action count");
  }
  return it->second;
}

const StateEntry* StateTable::find(ObsKey obs) const {
  auto it = entries_.find(obs);
  return it == entries_.end() ? nullptr : &it->second;
}

StateTable::Selection StateTable::select(ObsKey obs, int action_count,
                                         int teacher_action, RandomStream& rng,
                                         PolicyMode mode) {
  if (teacher_action < 0 || teacher_action >= action_count) {
    throw std::out_of_range("teacher action out of range");
  }
  StateEntry& e = entry(obs, action_count);
  if (e.visits < params_.certainty) {
    return {teacher_action, ActionSource::Teacher};
  }
  if (mode == PolicyMode::Eval && params_.eval_policy == EvalPolicy::Argmax) {
    return {argmax_lowest(e.learner.weights), ActionSource::Cce};
  }
  return {sample_categorical(exp3ix_distribution(e.learner), rng),
          ActionSource::Cce};
}

void StateTable::observe(ObsKey obs, int action_count, int action, double loss,
                         ActionSource source) {
  StateEntry& e = entry(obs, action_count);
  if (action < 0 || action >= e.arm_count()) {
    throw std::out_of_range("observed action out of range");
  }
  if (!(loss >= 0.0 && loss <= 1.0)) {
    throw std::invalid_argument(
        "loss outside [0,1]; normalize rewards with reward_to_loss first");
  }
  e.visits += 1;
  if (source == ActionSource::Teacher) {
    e.behavior_counts[action] += 1;
    const double s = params_.behavior_smoothing;
    if (params_.observer_update == ObserverUpdate::MeanTracking) {
      e.loss_sums[action] += loss;
      e.eta_accum += params_.ix.eta.at(e.learner.t + 1);
      const std::vector<double> means = e.mean_losses(s);
      const double m_min = *std::min_element(means.begin(), means.end());
      for (int i = 0; i < e.arm_count(); ++i) {
        // Anchored at the best mean so the maximum weight is 1; exponents
        // are clamped to keep the deepest weight positive.
        const double ex = std::min(700.0, e.eta_accum * (means[i] - m_min));
        e.learner.weights[i] = std::exp(-ex);
      }
      e.learner.t += 1;
    } else {
      const ProbabilityVector b = e.behavior_frequencies(s);
      const double bias =
          params_.observer_bias
              ? *params_.observer_bias
              : s / (static_cast<double>(e.visits) + e.arm_count() * s);
      exp3ix_update_weighted(e.learner, params_.ix.eta, action, loss,
                             b.probs[action] + bias);
    }
  } else if (!params_.freeze_after_certainty) {
    exp3ix_update(e.learner, params_.ix, action, loss);
  }
}

void StateTable::ingest_offline(const Trajectory& trajectory, int action_count,
                                const RewardBounds& bounds) {
  for (std::size_t i = 0; i < trajectory.size(); ++i) {
    const StepRecord& rec = trajectory[i];
    try {
      observe(rec.obs, action_count, rec.action,
              reward_to_loss(rec.reward, bounds), ActionSource::Teacher);
    } catch (const std::exception& e) {
      throw std::invalid_argument("trajectory record " + std::to_string(i) +
                                  ": " + e.what());
    }
  }
}

bool StateTable::certainty_reached(ObsKey obs) const {
  const StateEntry* e = find(obs);
  return e != nullptr && e->visits >= params_.certainty;
}

std::string StateTable::to_json() const {
  std::vector<ObsKey> keys;
  keys.reserve(entries_.size());
  for (const auto& [obs, _] : entries_) keys.push_back(obs);
  std::sort(keys.begin(), keys.end());

  nlohmann::ordered_json root;
  root["entries"] = nlohmann::ordered_json::array();
  for (ObsKey obs : keys) {
    const StateEntry& e = entries_.at(obs);
    nlohmann::ordered_json je;
    je["obs"] = std::to_string(obs);
    je["visits"] = e.visits;
    je["behavior_counts"] = e.behavior_counts;
    je["weights"] = e.learner.weights;
    je["t"] = e.learner.t;
    je["loss_sums"] = e.loss_sums;
    je["eta_accum"] = e.eta_accum;
    root["entries"].push_back(std::move(je));
  }
  return root.dump(2);
}

StateTable StateTable::from_json(const std::string& text, IxrlParams params) {
  StateTable table(std::move(params));
  const auto root = nlohmann::json::parse(text);
  for (const auto& je : root.at("entries")) {
    const ObsKey obs = std::stoull(je.at("obs").get<std::string>());
    std::vector<double> weights = je.at("weights").get<std::vector<double>>();
    StateEntry e(static_cast<int>(weights.size()));
    e.visits = je.at("visits").get<std::int64_t>();
    e.behavior_counts =
        je.at("behavior_counts").get<std::vector<std::int64_t>>();
    e.learner.weights = std::move(weights);
    e.learner.t = je.at("t").get<std::int64_t>();
    e.loss_sums = je.at("loss_sums").get<std::vector<double>>();
    e.eta_accum = je.at("eta_accum").get<double>();
    table.entries_.emplace(obs, std::move(e));
  }
  return table;
}

}  // namespace ixrl
