#ifndef IXRL_TEACHERS_HPP
#define IXRL_TEACHERS_HPP

#include <memory>
#include <string>
#include <unordered_map>
#include <vector>

#include "ixrl/rng.hpp"
#include "ixrl/types.hpp"

namespace ixrl {

// Behavior policy whose action selections feed the observer-mode learner.
// Teachers consume raw rewards; only exponential-weights learners consume
// normalized losses. One teacher per run, never shared.
class Teacher {
 public:
  virtual ~Teacher() = default;

  virtual int action_count() const = 0;
  // Training-time (possibly stochastic) selection.
  virtual int select(ObsKey obs, RandomStream& rng) = 0;
  // Deterministic evaluation-time selection; ties resolve to lowest index.
  virtual int greedy(ObsKey obs) const = 0;
  virtual void update(ObsKey obs, int action, double reward, ObsKey next_obs,
                      bool terminal) = 0;
};

// Incremental-mean value estimates; explores uniformly with probability
// epsilon, otherwise plays argmax q. Observation-blind.
class EpsilonGreedyTeacher : public Teacher {
 public:
  EpsilonGreedyTeacher(int k, double epsilon = 0.1);

  int action_count() const override { return k_; }
  int select(ObsKey obs, RandomStream& rng) override;
  int greedy(ObsKey obs) const override;
  void update(ObsKey obs, int action, double reward, ObsKey next_obs,
              bool terminal) override;

  const std::vector<double>& q() const { return q_; }
  const std::vector<long>& counts() const { return counts_; }

 private:
  int k_;
  double epsilon_;
  std::vector<double> q_;
  std::vector<long> counts_;
};

// UCB1: any unpulled arm first (lowest index), then
// argmax_i q[i] + c*sqrt(ln t / counts[i]). Observation-blind.
class Ucb1Teacher : public Teacher {
 public:
  Ucb1Teacher(int k, double c = 1.4142135623730951 /* sqrt(2) */);

  int action_count() const override { return k_; }
  int select(ObsKey obs, RandomStream& rng) override;
  int greedy(ObsKey obs) const override;
  void update(ObsKey obs, int action, double reward, ObsKey next_obs,
              bool terminal) override;

  const std::vector<double>& q() const { return q_; }
  const std::vector<long>& counts() const { return counts_; }
  long total_pulls() const { return t_; }

 private:
  int k_;
  double c_;
  std::vector<double> q_;
  std::vector<long> counts_;
  long t_ = 0;
};

// Softmax over preferences with a running-mean reward baseline.
class GradientBanditTeacher : public Teacher {
 public:
  GradientBanditTeacher(int k, double alpha = 0.1);

  int action_count() const override { return k_; }
  int select(ObsKey obs, RandomStream& rng) override;
  int greedy(ObsKey obs) const override;
  void update(ObsKey obs, int action, double reward, ObsKey next_obs,
              bool terminal) override;

  ProbabilityVector policy() const;  // softmax(h)
  const std::vector<double>& preferences() const { return h_; }
  double baseline() const { return baseline_; }

 private:
  int k_;
  double alpha_;
  std::vector<double> h_;
  double baseline_ = 0.0;
  long t_ = 0;
};

// Tabular Q-learning with epsilon-greedy exploration; unvisited entries
// read as zero. The terminal next state's max-Q is defined as 0.
class TabularQTeacher : public Teacher {
 public:
  TabularQTeacher(int k, double alpha = 0.1, double gamma = 0.99,
                  double epsilon = 0.1);

  int action_count() const override { return k_; }
  int select(ObsKey obs, RandomStream& rng) override;
  int greedy(ObsKey obs) const override;
  void update(ObsKey obs, int action, double reward, ObsKey next_obs,
              bool terminal) override;

  double q(ObsKey obs, int action) const;

 private:
  std::vector<double>& row_mut(ObsKey obs);

  int k_;
  double alpha_;
  double gamma_;
  double epsilon_;
  std::unordered_map<ObsKey, std::vector<double>> q_;
};

enum class TeacherId { None, EpsGreedy, Ucb, Gradient, QLearn };

struct TeacherParams {
  double epsilon = 0.1;   // eps-greedy and q-learning exploration
  double ucb_c = 1.4142135623730951;
  double alpha = 0.1;     // gradient-bandit and q-learning step size
  double gamma = 0.99;    // q-learning discount
};

std::string to_string(TeacherId id);
TeacherId teacher_id_from_string(const std::string& s);

std::unique_ptr<Teacher> make_teacher(TeacherId id, int action_count,
                                      const TeacherParams& params = {});

}  // namespace ixrl

#endif  // IXRL_TEACHERS_HPP
