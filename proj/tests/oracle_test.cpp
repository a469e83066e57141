#include <gtest/gtest.h>

#include <cmath>

#include "clg/error.hpp"
#include "clg/io.hpp"
#include "clg/oracle.hpp"
#include "support.hpp"

using namespace clg;
using testkit::id;
using testkit::load_fixture;

TEST(Oracle, NetBPriorMoments) {
  const Network net = load_fixture("netB.json");
  const JointMixture j = enumerate_joint(net);
  ASSERT_EQ(j.components.size(), 2u);
  EXPECT_EQ(oracle_discrete(j, id(net, "X")), (std::vector<double>{0.3, 0.7}));
  const auto y2 = oracle_continuous(j, id(net, "Y2"));
  ASSERT_EQ(y2.components.size(), 2u);
  EXPECT_NEAR(y2.components[0].mean, -1.0, 1e-14);
  EXPECT_NEAR(y2.components[0].variance, 3.05, 1e-14);
  EXPECT_NEAR(y2.components[1].mean, 3.5, 1e-14);
  EXPECT_NEAR(y2.components[1].variance, 1.925, 1e-14);
  // Cov(Y1, Y2 | X=0) = 1.5 Var(Y1 | X=0).
  const auto& c0 = j.components[0].covariance;
  EXPECT_NEAR(c0[0][1], 1.5, 1e-14);
}

TEST(Oracle, ConditioningOnContinuousEvidence) {
  const Network net = load_fixture("netB.json");
  Evidence ev;
  ev.continuous[id(net, "Y1")] = 0.0;
  const JointMixture j = condition(enumerate_joint(net), ev);
  const double w0 = 0.3 * std::exp(-0.5) / std::sqrt(2 * M_PI);
  const double w1 = 0.7 * std::exp(-4.0) / std::sqrt(M_PI);
  const auto px = oracle_discrete(j, id(net, "X"));
  EXPECT_NEAR(px[0], w0 / (w0 + w1), 1e-14);
  const auto y2 = oracle_continuous(j, id(net, "Y2"));
  EXPECT_NEAR(y2.mean(), 0.5, 1e-14);
  EXPECT_NEAR(y2.variance(), 0.8, 1e-14);
}

TEST(Oracle, DiscreteEvidenceFilters) {
  const Network net = load_fixture("netC.json");
  Evidence ev;
  ev.discrete[id(net, "X1")] = 1;
  const JointMixture j = condition(enumerate_joint(net), ev);
  for (const auto& c : j.components) EXPECT_EQ(c.configuration[0], 1u);
  EXPECT_EQ(oracle_discrete(j, id(net, "X1")), (std::vector<double>{0.0, 1.0}));
}

TEST(Oracle, ZeroVarianceEvidenceIsDegenerate) {
  const Network net = parse_network(R"({
    "variables": [{"name": "Y", "kind": "continuous"}],
    "edges": [], "cpts": {},
    "densities": {"Y": {"alpha": [1], "beta": [[]], "sigma2": [0]}}
  })");
  Evidence ev;
  ev.continuous[0] = 1.0;
  EXPECT_THROW(condition(enumerate_joint(net), ev), DegenerateError);
}

TEST(Oracle, ImpossibleEvidenceIsDegenerate) {
  const Network net = parse_network(R"({
    "variables": [{"name": "A", "kind": "discrete", "states": ["a", "b"]}],
    "edges": [], "cpts": {"A": [1, 0]}, "densities": {}
  })");
  Evidence ev;
  ev.discrete[0] = 1;
  EXPECT_THROW(condition(enumerate_joint(net), ev), DegenerateError);
}

TEST(Oracle, ConfigurationGuard) {
  const Network net = load_fixture("netA.json");
  EXPECT_THROW(enumerate_joint(net, 4), DataError);
  EXPECT_NO_THROW(enumerate_joint(net, 8));
}
