#include <gtest/gtest.h>

#include <algorithm>
#include <vector>

#include "attsim/mechanisms.hpp"
#include "attsim/netgen.hpp"

using namespace attsim;

namespace {

AttitudeNetwork pair_network(double a, double b, bool mutual) {
  AttitudeNetwork net;
  net.add_node(a);
  net.add_node(b);
  net.add_base_tie(0, 1);
  net.add_close_tie(0, 1);
  if (mutual) net.add_close_tie(1, 0);
  return net;
}

MechanismParams with_contagion(double w) {
  MechanismParams p;
  p.contagion_weight = w;
  return p;
}

AttitudeNetwork generated(std::uint64_t seed, std::size_t n = 300) {
  Rng rng(seed);
  return generate_network({n, 3, 0.67, 0.5, seed}, rng);
}

}  // namespace

TEST(ContagionStep, OneWayTieUsesBaseWeight) {
  auto net = pair_network(0.2, 0.6, false);
  Rng rng(1);
  const auto rep = contagion_step(net, with_contagion(0.1), rng);
  ASSERT_TRUE(rep.applied);
  EXPECT_FALSE(rep.mutual);
  EXPECT_NEAR(net.attitude(0), 0.24, 1e-15);
  EXPECT_EQ(net.attitude(1), 0.6);
}

TEST(ContagionStep, MutualTieDoublesWeight) {
  auto net = pair_network(0.2, 0.6, true);
  Rng rng(1);
  const auto rep = contagion_step(net, with_contagion(0.1), rng);
  ASSERT_TRUE(rep.mutual);
  const NodeId tail = rep.tie.src;
  const NodeId head = rep.tie.dst;
  const double expected = tail == 0 ? 0.6 * 0.2 + 0.2 * 0.8 : 0.2 * 0.2 + 0.6 * 0.8;
  EXPECT_NEAR(net.attitude(tail), expected, 1e-15);
  EXPECT_EQ(net.attitude(head), tail == 0 ? 0.6 : 0.2);
}

TEST(ContagionStep, EqualAttitudesAreAFixedPoint) {
  for (double w : {0.01, 0.2, 0.5}) {
    auto net = pair_network(0.5, 0.5, true);
    Rng rng(2);
    contagion_step(net, with_contagion(w), rng);
    EXPECT_EQ(net.attitude(0), 0.5);
    EXPECT_EQ(net.attitude(1), 0.5);
  }
}

TEST(ContagionStep, EmptyCloseLayerIsNoOp) {
  AttitudeNetwork net;
  net.add_node(0.1);
  net.add_node(0.9);
  net.add_base_tie(0, 1);
  Rng rng(3);
  EXPECT_FALSE(contagion_step(net, {}, rng).applied);
  EXPECT_EQ(net.attitude(0), 0.1);
}

TEST(ContagionStep, HalfWeightOnMutualPairCopiesInOneStep) {
  auto net = pair_network(0.15, 0.85, true);
  Rng rng(4);
  const auto rep = contagion_step(net, with_contagion(0.5), rng);
  EXPECT_EQ(net.attitude(0), net.attitude(1));
  EXPECT_EQ(net.attitude(rep.tie.src), rep.tie.dst == 1 ? 0.85 : 0.15);
}

TEST(ContagionStep, TwoNodeTraceMatchesHandComputedSequence) {
  // A = 0.2 names B = 0.9 one way; w = 0.05; ten steps.
  // Exact values: a_{k+1} = 0.9 * 0.05 + a_k * 0.95.
  constexpr double expected[] = {0.235,           0.26825,          0.2998375,
                                 0.329845625,     0.35835334375,    0.3854356765625,
                                 0.411163892734375, 0.43560569809765626,
                                 0.4588254131927734, 0.4808841425331348};
  auto net = pair_network(0.2, 0.9, false);
  Rng rng(5);
  double a = 0.2;
  for (double e : expected) {
    contagion_step(net, with_contagion(0.05), rng);
    a = 0.9 * 0.05 + a * (1.0 - 0.05);
    EXPECT_EQ(net.attitude(0), a);
    EXPECT_NEAR(net.attitude(0), e, 1e-15);
    EXPECT_EQ(net.attitude(1), 0.9);
  }
}

TEST(ContagionStep, MutualPairTraceMatchesBruteForceOracle) {
  // The oracle replays the reported tie choice with its own arithmetic.
  auto net = pair_network(0.05, 0.95, true);
  Rng rng(6);
  std::vector<double> oracle{0.05, 0.95};
  for (int step = 0; step < 10; ++step) {
    const auto rep = contagion_step(net, with_contagion(0.5), rng);
    const double w = 1.0;  // mutual: 2 * 0.5
    oracle[rep.tie.src] = oracle[rep.tie.dst] * w + oracle[rep.tie.src] * (1.0 - w);
    EXPECT_EQ(net.attitude(0), oracle[0]);
    EXPECT_EQ(net.attitude(1), oracle[1]);
  }
}

TEST(HomophilyStep, ForcedPairIsTiedMutually) {
  AttitudeNetwork net;
  net.add_node(0.9);
  net.add_node(0.85);
  net.add_node(0.1);
  Rng rng(1);
  const auto rep = homophily_step(net, {}, rng);
  ASSERT_TRUE(rep.applied);
  EXPECT_EQ(rep.eligible, 2u);
  EXPECT_TRUE(net.has_base_tie(0, 1));
  EXPECT_TRUE(net.is_mutual(0, 1));
  EXPECT_EQ(net.attitudes(), (std::vector<double>{0.9, 0.85, 0.1}));
}

TEST(HomophilyStep, FewerThanTwoStrongNodesIsNoOp) {
  AttitudeNetwork net;
  net.add_node(0.9);
  net.add_node(0.1);
  net.add_node(0.1);
  Rng rng(1);
  const auto rep = homophily_step(net, {}, rng);
  EXPECT_FALSE(rep.applied);
  EXPECT_EQ(rep.eligible, 1u);
  EXPECT_EQ(net.base_tie_count(), 0u);
}

TEST(HomophilyStep, AlreadyTiedPairIsNoOp) {
  AttitudeNetwork net;
  net.add_node(0.9);
  net.add_node(0.95);
  net.add_base_tie(0, 1);
  Rng rng(1);
  const auto rep = homophily_step(net, {}, rng);
  EXPECT_FALSE(rep.applied);
  ASSERT_TRUE(rep.pair);
  EXPECT_EQ(net.base_tie_count(), 1u);
  EXPECT_EQ(net.close_tie_count(), 0u);
}

TEST(HomophilyStep, ThresholdIsInclusive) {
  AttitudeNetwork net;
  net.add_node(0.8);
  net.add_node(0.8);
  Rng rng(1);
  EXPECT_TRUE(homophily_step(net, {}, rng).applied);
}

TEST(ConfoundingStep, BothNodesMoveTowardStimulus) {
  AttitudeNetwork net;
  net.add_node(0.2);
  net.add_node(0.6);
  net.add_base_tie(0, 1);
  MechanismParams p;
  p.confounding_weight = 0.5;
  Rng rng(3);
  const auto rep = confounding_step(net, p, rng);
  ASSERT_TRUE(rep.applied);
  const double s = rep.stimulus;
  EXPECT_NEAR(net.attitude(0), s * 0.5 + 0.2 * 0.5, 1e-15);
  EXPECT_NEAR(net.attitude(1), s * 0.5 + 0.6 * 0.5, 1e-15);
}

TEST(ConfoundingStep, DirectEvaluationWithUnitStimulus) {
  EXPECT_DOUBLE_EQ(detail::blend(1.0, 0.2, 0.5), 0.6);
  EXPECT_DOUBLE_EQ(detail::blend(1.0, 0.6, 0.5), 0.8);
  EXPECT_DOUBLE_EQ(detail::blend(0.3, 0.3, 0.7), 0.3);
  EXPECT_NEAR(detail::blend(0.9, 0.4, 1e-12), 0.4, 1e-11);
}

TEST(ConfoundingStep, IsolatedNodeIsNoOp) {
  AttitudeNetwork net;
  net.add_node(0.3);
  Rng rng(1);
  EXPECT_FALSE(confounding_step(net, {}, rng).applied);
  EXPECT_EQ(net.attitude(0), 0.3);
}

TEST(MechanismProperty, StepsPreserveClosureAndTopologyRules) {
  for (auto mech : {Mechanism::Contagion, Mechanism::Homophily, Mechanism::Confounding}) {
    auto net = generated(17);
    MechanismParams p;
    p.contagion_weight = 0.5;
    p.confounding_weight = 0.9;
    Rng rng(17);
    for (int step = 0; step < 3000; ++step) {
      const auto base = net.base_tie_count();
      const auto close = net.close_tie_count();
      const auto before = net.attitudes();
      apply_mechanism(mech, net, p, rng);
      for (double a : net.attitudes()) {
        ASSERT_GE(a, 0.0);
        ASSERT_LE(a, 1.0);
      }
      if (mech == Mechanism::Homophily) {
        ASSERT_EQ(net.attitudes(), before);
        ASSERT_GE(net.base_tie_count(), base);
        ASSERT_EQ(net.close_tie_count() - close, 2 * (net.base_tie_count() - base));
      } else {
        ASSERT_EQ(net.base_tie_count(), base);
        ASSERT_EQ(net.close_tie_count(), close);
      }
    }
    for (const auto& t : net.close_ties()) EXPECT_TRUE(net.has_base_tie(t.src, t.dst));
  }
}

TEST(MechanismProperty, ContagionOnMutualCliqueContractsRange) {
  AttitudeNetwork net;
  const std::vector<double> init{0.05, 0.3, 0.55, 0.7, 0.98};
  for (double a : init) net.add_node(a);
  for (NodeId a = 0; a < init.size(); ++a) {
    for (NodeId b = a + 1; b < init.size(); ++b) {
      net.add_base_tie(a, b);
      net.add_close_tie(a, b);
      net.add_close_tie(b, a);
    }
  }
  Rng rng(8);
  double lo = 0.05, hi = 0.98;
  for (int step = 0; step < 2000; ++step) {
    contagion_step(net, with_contagion(0.2), rng);
    const auto [mn, mx] = std::minmax_element(net.attitudes().begin(), net.attitudes().end());
    ASSERT_GE(*mn, lo);
    ASSERT_LE(*mx, hi);
    lo = *mn;
    hi = *mx;
  }
  EXPECT_LT(hi - lo, 1e-6);
}

TEST(Schedule, MixedProbabilitiesMustSumToOne) {
  MechanismSchedule s;
  s.mode = ScheduleMode::Mixed;
  s.p_contagion = 0.5;
  s.p_homophily = 0.4;
  s.p_confounding = 0.0;
  EXPECT_THROW(s.validate(), ParameterError);
  s.p_confounding = 0.1;
  EXPECT_NO_THROW(s.validate());
  s.snapshot_every = 0;
  EXPECT_THROW(s.validate(), ParameterError);
}

TEST(Schedule, MixedModeFollowsProbabilities) {
  MechanismSchedule s;
  s.mode = ScheduleMode::Mixed;
  s.p_contagion = 0.2;
  s.p_homophily = 0.3;
  s.p_confounding = 0.5;
  Rng rng(4);
  std::array<int, 3> hits{};
  for (int i = 0; i < 100000; ++i) ++hits[static_cast<int>(pick_mechanism(s, rng))];
  EXPECT_NEAR(hits[0] / 1e5, 0.2, 0.01);
  EXPECT_NEAR(hits[1] / 1e5, 0.3, 0.01);
  EXPECT_NEAR(hits[2] / 1e5, 0.5, 0.01);
}

TEST(RunSimulation, ZeroIterationsGivesOnlyTheInitialReport) {
  auto net = generated(3);
  const auto expected = correlation_report(net);
  MechanismSchedule s;
  s.iterations = 0;
  Rng rng(3);
  std::size_t calls = 0;
  const auto snaps = run_simulation(net, {}, s, rng, [&](std::size_t t, const auto&) {
    EXPECT_EQ(t, 0u);
    ++calls;
  });
  ASSERT_EQ(snaps.size(), 1u);
  EXPECT_EQ(calls, 1u);
  EXPECT_EQ(snaps[0].report, expected);
}

TEST(RunSimulation, SnapshotCadenceIncludesFinalIteration) {
  auto net = generated(4);
  MechanismSchedule s;
  s.iterations = 1050;
  s.snapshot_every = 500;
  Rng rng(4);
  const auto snaps = run_simulation(net, {}, s, rng);
  std::vector<std::size_t> iters;
  for (const auto& snap : snaps) iters.push_back(snap.iteration);
  EXPECT_EQ(iters, (std::vector<std::size_t>{0, 500, 1000, 1050}));
}

TEST(RunSimulation, SameSeedSameTrace) {
  for (auto mode : {ScheduleMode::PureContagion, ScheduleMode::PureHomophily,
                    ScheduleMode::PureConfounding, ScheduleMode::Mixed}) {
    MechanismSchedule s;
    s.mode = mode;
    s.p_contagion = 0.4;
    s.p_homophily = 0.3;
    s.p_confounding = 0.3;
    s.iterations = 3000;
    s.snapshot_every = 1000;
    auto a = generated(21);
    auto b = generated(21);
    Rng ra(99), rb(99);
    EXPECT_EQ(run_simulation(a, {}, s, ra), run_simulation(b, {}, s, rb));
    EXPECT_EQ(a, b);
  }
}

TEST(RunSimulation, InvalidScheduleIsParameterError) {
  auto net = generated(5, 50);
  MechanismSchedule s;
  s.mode = ScheduleMode::Mixed;
  s.p_contagion = 0.9;
  Rng rng(5);
  EXPECT_THROW(run_simulation(net, {}, s, rng), ParameterError);
  MechanismParams bad;
  bad.contagion_weight = 0.6;
  EXPECT_THROW(run_simulation(net, bad, MechanismSchedule{}, rng), ParameterError);
}

TEST(RunSimulation, PureContagionOrdersTieTypes) {
  auto net = generated(1, 1000);
  Rng rng(1001);
  MechanismSchedule s;
  s.iterations = 50000;
  s.snapshot_every = 50000;
  const auto snaps = run_simulation(net, {}, s, rng);
  const auto& rep = snaps.back().report;
  EXPECT_GT(*rep[RelationClass::Mutual].r, *rep[RelationClass::Outgoing].r);
  EXPECT_GT(*rep[RelationClass::Outgoing].r, *rep[RelationClass::Incoming].r);
}
