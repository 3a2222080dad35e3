#include <doctest.h>

#include <stdexcept>

#include <cmath>
#include <numeric>
#include <vector>

#include "ixrl/env.hpp"
#include "ixrl/teachers.hpp"

using namespace ixrl;

TEST_CASE("epsilon-greedy with epsilon 0 is pure greedy") {
  EpsilonGreedyTeacher t(2, 0.0);
  RandomStream rng(1);
  t.update(0, 0, 0.1, 0, false);
  t.update(0, 1, 0.9, 0, false);
  for (int i = 0; i < 100; ++i) CHECK(t.select(0, rng) == 1);
}

TEST_CASE("epsilon-greedy first sample sets the mean") {
  EpsilonGreedyTeacher t(1, 0.1);
  t.update(0, 0, 1.0, 0, false);
  CHECK(t.q()[0] == 1.0);
  CHECK(t.counts()[0] == 1);
}

TEST_CASE("epsilon-greedy q equals the replayed incremental mean") {
  EpsilonGreedyTeacher t(3, 0.3);
  RandomStream rng(9);
  std::vector<std::vector<double>> rewards(3);
  for (int i = 0; i < 500; ++i) {
    const int a = rng.uniform_int(3);
    const double r = rng.normal();
    t.update(0, a, r, 0, false);
    rewards[a].push_back(r);
  }
  for (int a = 0; a < 3; ++a) {
    if (rewards[a].empty()) continue;
    const double mean =
        std::accumulate(rewards[a].begin(), rewards[a].end(), 0.0) /
        static_cast<double>(rewards[a].size());
    CHECK(t.q()[a] == doctest::Approx(mean).epsilon(1e-12));
  }
}

TEST_CASE("ucb1 pulls every arm once before using bonuses") {
  Ucb1Teacher t(5);
  RandomStream rng(1);
  for (int i = 0; i < 5; ++i) {
    const int a = t.select(0, rng);
    CHECK(a == i);
    t.update(0, a, 0.0, 0, false);
  }
}

TEST_CASE("ucb1 equal bonuses reduce the choice to argmax q") {
  Ucb1Teacher t(3, std::sqrt(2.0));
  RandomStream rng(1);
  t.update(0, 0, 0.1, 0, false);
  t.update(0, 1, 0.5, 0, false);
  t.update(0, 2, 0.3, 0, false);
  // counts (1,1,1), t=3: identical bonus sqrt(2 ln 3) on every arm.
  CHECK(t.select(0, rng) == 1);
}

TEST_CASE("gradient bandit with zero preferences samples uniformly") {
  GradientBanditTeacher t(2, 0.1);
  const auto p = t.policy();
  CHECK(p.probs[0] == doctest::Approx(0.5));
  CHECK(p.probs[1] == doctest::Approx(0.5));
  RandomStream rng(3);
  int zeros = 0;
  for (int i = 0; i < 10000; ++i) {
    if (t.select(0, rng) == 0) ++zeros;
  }
  CHECK(std::abs(zeros / 10000.0 - 0.5) < 0.02);
}

TEST_CASE("gradient bandit update moves preferences as expected") {
  GradientBanditTeacher t(2, 0.1);
  t.update(0, 0, 1.0, 0, false);
  CHECK(t.preferences()[0] == doctest::Approx(0.05).epsilon(1e-12));
  CHECK(t.preferences()[1] == doctest::Approx(-0.05).epsilon(1e-12));
  CHECK(t.baseline() == 1.0);  // folded in after the preference step
}

TEST_CASE("gradient bandit preference changes sum to zero") {
  GradientBanditTeacher t(6, 0.2);
  RandomStream rng(10);
  for (int i = 0; i < 300; ++i) {
    const auto before = t.preferences();
    const int a = t.select(0, rng);
    t.update(0, a, rng.normal() * 3.0, 0, false);
    const auto& after = t.preferences();
    double delta_sum = 0.0;
    for (int j = 0; j < 6; ++j) delta_sum += after[j] - before[j];
    REQUIRE(std::abs(delta_sum) < 1e-12);
  }
}

TEST_CASE("q-learning update with zero table") {
  TabularQTeacher t(2, 0.5, 0.99, 0.1);
  t.update(3, 0, -1.0, 4, false);
  CHECK(t.q(3, 0) == doctest::Approx(-0.5).epsilon(1e-12));
  CHECK(t.q(3, 1) == 0.0);
  CHECK(t.q(4, 0) == 0.0);  // unvisited rows read as zero
}

TEST_CASE("q-learning terminal next state contributes nothing") {
  TabularQTeacher t(2, 0.5, 0.99, 0.0);
  t.update(7, 1, 2.0, 7, false);  // bootstraps off q(7,.) which is 0
  CHECK(t.q(7, 1) == doctest::Approx(1.0));
  t.update(5, 0, 2.0, 7, true);  // terminal: ignore q(7,.)
  CHECK(t.q(5, 0) == doctest::Approx(1.0));
}

TEST_CASE("q-learning bootstraps off the next state's max") {
  TabularQTeacher t(2, 1.0, 0.5, 0.0);
  t.update(1, 0, 1.0, 1, false);        // q(1,0) = 1 + 0.5*max(0,0)... = 1
  CHECK(t.q(1, 0) == doctest::Approx(1.0));
  t.update(0, 1, 0.0, 1, false);        // q(0,1) = 0 + 0.5*1 = 0.5
  CHECK(t.q(0, 1) == doctest::Approx(0.5));
}

TEST_CASE("greedy epsilon-greedy on the deterministic bandit locks onto arm 9") {
  DeterministicMab env;
  RandomStream env_rng(1), rng(2);
  EpsilonGreedyTeacher t(10, 0.0);
  // Estimates are noiseless, so once every arm has been sampled the argmax
  // is exact and never changes.
  for (int a = 0; a < 10; ++a) t.update(0, a, env.step(a, env_rng).reward, 0, false);
  for (int i = 0; i < 1000; ++i) {
    const int a = t.select(0, rng);
    REQUIRE(a == 9);
    t.update(0, a, env.step(a, env_rng).reward, 0, false);
  }
}

TEST_CASE("teacher factory rejects the none id") {
  CHECK_THROWS_AS(make_teacher(TeacherId::None, 4), std::invalid_argument);
}

TEST_CASE("teacher ids round-trip") {
  for (TeacherId id : {TeacherId::EpsGreedy, TeacherId::Ucb,
                       TeacherId::Gradient, TeacherId::QLearn}) {
    CHECK(teacher_id_from_string(to_string(id)) == id);
  }
}
