#include <doctest.h>

#include <stdexcept>

#include <cmath>
#include <vector>

#include "ixrl/env.hpp"
#include "ixrl/ixrl.hpp"
#include "ixrl/teachers.hpp"

using namespace ixrl;

namespace {

IxrlParams params_with(std::int64_t certainty, double eta, double gamma_ix,
                       double smoothing = 1.0) {
  IxrlParams p;
  p.certainty = certainty;
  p.ix = {Schedule::constant_of(eta), Schedule::constant_of(gamma_ix)};
  p.behavior_smoothing = smoothing;
  return p;
}

}  // namespace

TEST_CASE("fresh observations pass the teacher action through") {
  StateTable table(params_with(2000, 0.5, 0.1));
  RandomStream rng(1);
  const auto sel = table.select(42, 3, 2, rng);
  CHECK(sel.action == 2);
  CHECK(sel.source == ActionSource::Teacher);
  CHECK(table.find(42) != nullptr);  // entry created on first sight
  CHECK(table.find(42)->visits == 0);  // select never counts
}

TEST_CASE("past the threshold evaluation takes the weight argmax") {
  StateTable table(params_with(1, 0.5, 0.1));
  RandomStream rng(1);
  // One observed step satisfies certainty 1.
  table.observe(7, 3, 0, 0.5, ActionSource::Teacher);
  auto* entry = const_cast<StateEntry*>(table.find(7));
  entry->learner.weights = {0.1, 0.1, 5.0};
  const auto sel = table.select(7, 3, 0, rng, PolicyMode::Eval);
  CHECK(sel.action == 2);
  CHECK(sel.source == ActionSource::Cce);
}

TEST_CASE("importance-weighted observer applies the smoothed estimator") {
  // K=2, smoothing 1, teacher plays 0 with loss 0.6, constant bias 0.1:
  // after counting, visits 1, counts (1,0), b0 = 2/3,
  // lhat = 0.6 / (2/3 + 0.1), w0 = exp(-eta * lhat).
  auto params = params_with(2000, 0.5, 0.1);
  params.observer_update = ObserverUpdate::ImportanceWeighted;
  params.observer_bias = 0.1;
  StateTable table(params);
  table.observe(0, 2, 0, 0.6, ActionSource::Teacher);
  const StateEntry* e = table.find(0);
  REQUIRE(e != nullptr);
  CHECK(e->visits == 1);
  CHECK(e->behavior_counts == std::vector<std::int64_t>{1, 0});
  const double b0 = 2.0 / 3.0;
  const double lhat = 0.6 / (b0 + 0.1);
  CHECK(lhat == doctest::Approx(0.7826).epsilon(1e-4));
  CHECK(e->learner.weights[0] ==
        doctest::Approx(std::exp(-0.5 * lhat)).epsilon(1e-12));
  CHECK(e->learner.weights[1] == 1.0);
}

TEST_CASE("importance-weighted bias defaults to the smoothing floor") {
  // With smoothing 1 and K=2 the very first observation has
  // b0 = 2/3 and floor = 1/3, so the denominator is exactly one and the
  // estimate equals the raw loss.
  auto params = params_with(2000, 0.5, 0.1);
  params.observer_update = ObserverUpdate::ImportanceWeighted;
  StateTable table(params);
  table.observe(0, 2, 0, 0.6, ActionSource::Teacher);
  const StateEntry* e = table.find(0);
  CHECK(e->learner.weights[0] ==
        doctest::Approx(std::exp(-0.5 * 0.6)).epsilon(1e-12));

  // Second teacher play of the same arm: b0 = 3/4, floor = 1/4.
  table.observe(0, 2, 0, 0.8, ActionSource::Teacher);
  const double denom = 3.0 / 4.0 + 1.0 / 4.0;
  CHECK(e->learner.weights[0] ==
        doctest::Approx(std::exp(-0.5 * 0.6) * std::exp(-0.5 * 0.8 / denom))
            .epsilon(1e-12));
}

TEST_CASE("mean-tracking observer ranks arms by shrunk mean losses") {
  // K=2, smoothing 1, eta constant 0.5. First teacher play: arm 0 with
  // loss 0.6. Means: m0 = (0.6 + 0.5)/2 = 0.55, m1 = 0.5/1 = 0.5; weights
  // anchored at the smaller mean: (exp(-0.5*0.05), 1).
  StateTable table(params_with(2000, 0.5, 0.1));
  table.observe(0, 2, 0, 0.6, ActionSource::Teacher);
  const StateEntry* e = table.find(0);
  CHECK(e->learner.weights[1] == 1.0);
  CHECK(e->learner.weights[0] ==
        doctest::Approx(std::exp(-0.5 * 0.05)).epsilon(1e-12));

  // Second play, arm 1 with loss 0.1: m0 = 0.55, m1 = (0.1+0.5)/2 = 0.3,
  // H = 1.0.
  table.observe(0, 2, 1, 0.1, ActionSource::Teacher);
  CHECK(e->learner.weights[1] == 1.0);
  CHECK(e->learner.weights[0] ==
        doctest::Approx(std::exp(-1.0 * 0.25)).epsilon(1e-12));
  CHECK(argmax_lowest(e->learner.weights) == 1);
}

TEST_CASE("zero loss under importance weighting leaves weights unchanged") {
  auto params = params_with(2000, 0.5, 0.1);
  params.observer_update = ObserverUpdate::ImportanceWeighted;
  StateTable table(params);
  table.observe(0, 2, 1, 0.0, ActionSource::Teacher);
  const StateEntry* e = table.find(0);
  CHECK(e->visits == 1);
  CHECK(e->behavior_counts[1] == 1);
  CHECK(e->learner.weights == std::vector<double>{1.0, 1.0});
  CHECK(e->learner.t == 1);
}

TEST_CASE("zero loss under mean tracking counts as evidence for the arm") {
  StateTable table(params_with(2000, 0.5, 0.1));
  table.observe(0, 2, 1, 0.0, ActionSource::Teacher);
  const StateEntry* e = table.find(0);
  CHECK(e->visits == 1);
  CHECK(e->behavior_counts[1] == 1);
  // m1 = 0.5/2 = 0.25 beats the unseen arm's neutral 0.5.
  CHECK(argmax_lowest(e->learner.weights) == 1);
  CHECK(e->learner.t == 1);
}

TEST_CASE("behavior frequency approaches the true teacher frequency") {
  StateTable table(params_with(100000, 0.01, 0.1));
  for (int i = 0; i < 100; ++i) {
    table.observe(0, 2, 0, 0.5, ActionSource::Teacher);
  }
  const auto b = table.find(0)->behavior_frequencies(1.0);
  CHECK(b.probs[0] == doctest::Approx(101.0 / 102.0).epsilon(1e-12));
  CHECK(b.probs[0] == doctest::Approx(0.9902).epsilon(1e-3));
}

TEST_CASE("behavior frequencies stay a valid distribution in observer mode") {
  StateTable table(params_with(1 << 30, 0.1, 0.05, 0.5));
  RandomStream rng(5);
  for (int i = 0; i < 500; ++i) {
    const ObsKey obs = rng.uniform_int(3);
    table.observe(obs, 4, rng.uniform_int(4), rng.uniform(),
                  ActionSource::Teacher);
    const auto b = table.find(obs)->behavior_frequencies(0.5);
    REQUIRE(b.valid());
  }
}

TEST_CASE("certainty threshold boundary and monotone handoff") {
  const std::int64_t c = 5;
  StateTable table(params_with(c, 0.5, 0.1));
  RandomStream rng(2);
  CHECK_FALSE(table.certainty_reached(1));  // unknown observation
  int switches = 0;
  ActionSource prev = ActionSource::Teacher;
  for (int i = 0; i < 20; ++i) {
    CHECK(table.certainty_reached(1) == (i >= c));
    const auto sel = table.select(1, 2, 0, rng, PolicyMode::Train);
    CHECK((sel.source == ActionSource::Teacher) == (i < c));
    if (sel.source != prev) {
      ++switches;
      prev = sel.source;
    }
    table.observe(1, 2, sel.action, 0.3, sel.source);
  }
  CHECK(switches == 1);
}

TEST_CASE("offline ingestion of one record equals one observe call") {
  const RewardBounds bounds{-1.0, 1.0};
  StateTable online(params_with(2000, 0.5, 0.1));
  online.observe(3, 2, 1, reward_to_loss(0.2, bounds), ActionSource::Teacher);

  StateTable offline(params_with(2000, 0.5, 0.1));
  offline.ingest_offline({{3, 1, 0.2, 3, false}}, 2, bounds);

  CHECK(offline.to_json() == online.to_json());
}

TEST_CASE("empty trajectory leaves the table unchanged") {
  StateTable table(params_with(2000, 0.5, 0.1));
  table.ingest_offline({}, 2, {0.0, 1.0});
  CHECK(table.size() == 0);
}

TEST_CASE("offline replay of a logged observer run reproduces the table") {
  const RewardBounds bounds{0.0, 1.0};
  // Online observer phase (certainty never reached) against a live teacher.
  StateTable online(params_with(1 << 30, 0.4, 0.2));
  RandomStream teacher_rng(11), env_rng(12);
  EpsilonGreedyTeacher teacher(4, 0.3);
  Trajectory log;
  ObsKey obs = 0;
  for (int i = 0; i < 400; ++i) {
    const int a = teacher.select(obs, teacher_rng);
    const double reward = env_rng.uniform();
    const ObsKey next = env_rng.uniform_int(3);
    teacher.update(obs, a, reward, next, false);
    online.observe(obs, 4, a, reward_to_loss(reward, bounds),
                   ActionSource::Teacher);
    log.push_back({obs, a, reward, next, false});
    obs = next;
  }

  StateTable offline(params_with(1 << 30, 0.4, 0.2));
  offline.ingest_offline(log, 4, bounds);
  CHECK(offline.to_json() == online.to_json());
}

TEST_CASE("entries depend only on their own observation's history") {
  const RewardBounds bounds{0.0, 1.0};
  RandomStream rng(21);
  Trajectory interleaved, only_a;
  for (int i = 0; i < 300; ++i) {
    const ObsKey obs = rng.uniform_int(2);
    const StepRecord rec{obs, rng.uniform_int(3), rng.uniform(), obs, false};
    interleaved.push_back(rec);
    if (obs == 0) only_a.push_back(rec);
  }

  StateTable full(params_with(1 << 30, 0.3, 0.1));
  full.ingest_offline(interleaved, 3, bounds);
  StateTable isolated(params_with(1 << 30, 0.3, 0.1));
  isolated.ingest_offline(only_a, 3, bounds);

  const StateEntry* a = full.find(0);
  const StateEntry* b = isolated.find(0);
  REQUIRE(a != nullptr);
  REQUIRE(b != nullptr);
  CHECK(a->visits == b->visits);
  CHECK(a->behavior_counts == b->behavior_counts);
  CHECK(a->learner.weights == b->learner.weights);
  CHECK(a->learner.t == b->learner.t);
}

TEST_CASE("ingestion errors carry the record index") {
  StateTable table(params_with(10, 0.5, 0.1));
  Trajectory bad = {{0, 0, 0.5, 0, false}, {0, 7, 0.5, 0, false}};
  try {
    table.ingest_offline(bad, 2, {0.0, 1.0});
    FAIL("expected an exception");
  } catch (const std::invalid_argument& e) {
    CHECK(std::string(e.what()).find("record 1") != std::string::npos);
  }
}

TEST_CASE("snapshots round-trip through the json format") {
  StateTable table(params_with(3, 0.5, 0.1));
  RandomStream rng(9);
  for (int i = 0; i < 50; ++i) {
    const ObsKey obs = rng.uniform_int(4);
    const auto sel = table.select(obs, 3, rng.uniform_int(3), rng);
    table.observe(obs, 3, sel.action, rng.uniform(), sel.source);
  }
  const std::string snapshot = table.to_json();
  StateTable restored =
      StateTable::from_json(snapshot, params_with(3, 0.5, 0.1));
  CHECK(restored.to_json() == snapshot);
  CHECK(restored.size() == table.size());
}

TEST_CASE("post-certainty learning can be frozen by config") {
  auto params = params_with(1, 0.5, 0.1);
  params.freeze_after_certainty = true;
  StateTable table(params);
  table.observe(0, 2, 0, 0.9, ActionSource::Teacher);
  const auto frozen = table.find(0)->learner.weights;
  table.observe(0, 2, 0, 0.9, ActionSource::Cce);
  CHECK(table.find(0)->learner.weights == frozen);
  CHECK(table.find(0)->visits == 2);
}

TEST_CASE("revisiting an observation with a new action count is rejected") {
  StateTable table(params_with(10, 0.5, 0.1));
  table.observe(5, 3, 0, 0.1, ActionSource::Teacher);
  RandomStream rng(1);
  CHECK_THROWS_AS(table.select(5, 4, 0, rng), std::invalid_argument);
}

TEST_CASE("observer training on the deterministic bandit finds arm 9") {
  // Ten seeds per teacher flavor; the full hundred-seed sweep runs in the
  // acceptance suite.
  const RewardBounds bounds{0.0, 1.0};
  for (TeacherId id :
       {TeacherId::EpsGreedy, TeacherId::Ucb, TeacherId::Gradient}) {
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
      DeterministicMab env;
      RandomStream env_rng(derive_seed({seed, "env", 0}));
      RandomStream teacher_rng(derive_seed({seed, "teacher", 0}));
      RandomStream agent_rng(derive_seed({seed, "agent", 0}));
      auto teacher = make_teacher(id, 10);
      IxrlParams params;
      params.certainty = 2000;
      params.ix = Exp3IxParams::defaults(10);
      StateTable table(params);
      ObsKey obs = env.reset(env_rng);
      for (int step = 0; step < 10000; ++step) {
        const int proposed = teacher->select(obs, teacher_rng);
        const auto sel = table.select(obs, 10, proposed, agent_rng);
        const auto sr = env.step(sel.action, env_rng);
        teacher->update(obs, sel.action, sr.reward, sr.next_obs, sr.terminal);
        table.observe(obs, 10, sel.action, reward_to_loss(sr.reward, bounds),
                      sel.source);
        obs = sr.next_obs;
      }
      REQUIRE(argmax_lowest(table.find(0)->learner.weights) == 9);
    }
  }
}
