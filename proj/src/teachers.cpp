#include "ixrl/teachers.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace ixrl {

namespace {

void check_action(int action, int k) {
  if (action < 0 || action >= k) {
    throw std::out_of_range("teacher update: action index out of range");
  }
}

}  // namespace

// -- EpsilonGreedyTeacher ------------------------------------------------------

EpsilonGreedyTeacher::EpsilonGreedyTeacher(int k, double epsilon)
    : k_(k), epsilon_(epsilon), q_(k, 0.0), counts_(k, 0) {
  if (epsilon < 0.0 || epsilon > 1.0) {
    throw std::invalid_argument("epsilon outside [0,1]");
  }
}

int EpsilonGreedyTeacher::select(ObsKey, RandomStream& rng) {
  if (rng.uniform() < epsilon_) return rng.uniform_int(k_);
  return argmax_lowest(q_);
}

int EpsilonGreedyTeacher::greedy(ObsKey) const { return argmax_lowest(q_); }

void EpsilonGreedyTeacher::update(ObsKey, int action, double reward, ObsKey,
                                  bool) {
  check_action(action, k_);
  counts_[action] += 1;
  q_[action] += (reward - q_[action]) / static_cast<double>(counts_[action]);
}

// -- Ucb1Teacher ---------------------------------------------------------------

Ucb1Teacher::Ucb1Teacher(int k, double c)
    : k_(k), c_(c), q_(k, 0.0), counts_(k, 0) {}

int Ucb1Teacher::select(ObsKey, RandomStream&) {
  for (int i = 0; i < k_; ++i) {
    if (counts_[i] == 0) return i;
  }
  std::vector<double> ucb(k_);
  const double log_t = std::log(static_cast<double>(t_));
  for (int i = 0; i < k_; ++i) {
    ucb[i] = q_[i] + c_ * std::sqrt(log_t / static_cast<double>(counts_[i]));
  }
  return argmax_lowest(ucb);
}

int Ucb1Teacher::greedy(ObsKey) const { return argmax_lowest(q_); }

void Ucb1Teacher::update(ObsKey, int action, double reward, ObsKey, bool) {
  check_action(action, k_);
  counts_[action] += 1;
  t_ += 1;
  q_[action] += (reward - q_[action]) / static_cast<double>(counts_[action]);
}

// -- GradientBanditTeacher -----------------------------------------------------

GradientBanditTeacher::GradientBanditTeacher(int k, double alpha)
    : k_(k), alpha_(alpha), h_(k, 0.0) {}

ProbabilityVector GradientBanditTeacher::policy() const {
  ProbabilityVector p;
  p.probs.resize(k_);
  const double h_max = *std::max_element(h_.begin(), h_.end());
  double sum = 0.0;
  for (int i = 0; i < k_; ++i) {
    p.probs[i] = std::exp(h_[i] - h_max);
    sum += p.probs[i];
  }
  for (auto& v : p.probs) v /= sum;
  return p;
}

int GradientBanditTeacher::select(ObsKey, RandomStream& rng) {
  return sample_categorical(policy(), rng);
}

int GradientBanditTeacher::greedy(ObsKey) const { return argmax_lowest(h_); }

void GradientBanditTeacher::update(ObsKey, int action, double reward, ObsKey,
                                   bool) {
  check_action(action, k_);
  const ProbabilityVector pi = policy();
  const double adv = reward - baseline_;
  for (int i = 0; i < k_; ++i) {
    if (i == action) {
      h_[i] += alpha_ * adv * (1.0 - pi.probs[i]);
    } else {
      h_[i] -= alpha_ * adv * pi.probs[i];
    }
  }
  // Baseline folds the reward in after it has been used.
  t_ += 1;
  baseline_ += (reward - baseline_) / static_cast<double>(t_);
}

// -- TabularQTeacher -----------------------------------------------------------

TabularQTeacher::TabularQTeacher(int k, double alpha, double gamma,
                                 double epsilon)
    : k_(k), alpha_(alpha), gamma_(gamma), epsilon_(epsilon) {
  if (gamma < 0.0 || gamma > 1.0) {
    throw std::invalid_argument("gamma outside [0,1]");
  }
}

std::vector<double>& TabularQTeacher::row_mut(ObsKey obs) {
  auto it = q_.find(obs);
  if (it == q_.end()) it = q_.emplace(obs, std::vector<double>(k_, 0.0)).first;
  return it->second;
}

double TabularQTeacher::q(ObsKey obs, int action) const {
  auto it = q_.find(obs);
  if (it == q_.end()) return 0.0;
  return it->second[action];
}

int TabularQTeacher::greedy(ObsKey obs) const {
  auto it = q_.find(obs);
  if (it == q_.end()) return 0;
  return argmax_lowest(it->second);
}

int TabularQTeacher::select(ObsKey obs, RandomStream& rng) {
  if (rng.uniform() < epsilon_) return rng.uniform_int(k_);
  return greedy(obs);
}

void TabularQTeacher::update(ObsKey obs, int action, double reward,
                             ObsKey next_obs, bool terminal) {
  check_action(action, k_);
  double next_max = 0.0;
  if (!terminal) {
    auto it = q_.find(next_obs);
    if (it != q_.end()) {
      next_max = *std::max_element(it->second.begin(), it->second.end());
    }
  }
  auto& row = row_mut(obs);
  row[action] += alpha_ * (reward + gamma_ * next_max - row[action]);
}

// -- factory -----------------------------------------------------------------

std::string to_string(TeacherId id) {
  switch (id) {
    case TeacherId::None: return "none";
    case TeacherId::EpsGreedy: return "eps-greedy";
    case TeacherId::Ucb: return "ucb";
    case TeacherId::Gradient: return "gradient";
    case TeacherId::QLearn: return "qlearn";
  }
  return "?";
}

TeacherId teacher_id_from_string(const std::string& s) {
  if (s == "none" || s.empty()) return TeacherId::None;
  if (s == "eps-greedy") return TeacherId::EpsGreedy;
  if (s == "ucb") return TeacherId::Ucb;
  if (s == "gradient") return TeacherId::Gradient;
  if (s == "qlearn") return TeacherId::QLearn;
  throw std::invalid_argument("unknown teacher id: " + s);
}

std::unique_ptr<Teacher> make_teacher(TeacherId id, int action_count,
                                      const TeacherParams& params) {
  switch (id) {
    case TeacherId::EpsGreedy:
      return std::make_unique<EpsilonGreedyTeacher>(action_count,
                                                    params.epsilon);
    case TeacherId::Ucb:
      return std::make_unique<Ucb1Teacher>(action_count, params.ucb_c);
    case TeacherId::Gradient:
      return std::make_unique<GradientBanditTeacher>(action_count,
                                                     params.alpha);
    case TeacherId::QLearn:
      return std::make_unique<TabularQTeacher>(action_count, params.alpha,
                                               params.gamma, params.epsilon);
    case TeacherId::None:
      throw std::invalid_argument("make_teacher: no teacher requested");
  }
  throw std::invalid_argument("unknown teacher id");
}

}  // namespace ixrl
