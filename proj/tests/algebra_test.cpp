#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>

#include "clg/algebra.hpp"
#include "clg/error.hpp"
#include "support.hpp"

using namespace clg;

namespace {

constexpr VariableId Z = 0, Y = 1, I = 2, J = 3;

Density gaussian(VariableId head, double alpha, double sigma2, std::vector<VariableId> tail = {},
                 std::vector<double> beta = {}) {
  Density d;
  d.head = head;
  d.continuous_tail = std::move(tail);
  d.alpha = {alpha};
  d.beta = std::move(beta);
  d.sigma2 = {sigma2};
  return d;
}

double coef(const Density& d, VariableId v, std::size_t config = 0) {
  const auto it = std::find(d.continuous_tail.begin(), d.continuous_tail.end(), v);
  EXPECT_NE(it, d.continuous_tail.end());
  return d.coefficient(config, static_cast<std::size_t>(it - d.continuous_tail.begin()));
}

Factor cpt(VariableId head, std::size_t states, Domain tail, std::vector<double> table) {
  Factor f;
  f.head = head;
  f.head_states = states;
  f.tail = std::move(tail);
  f.table = std::move(table);
  return f;
}

}  // namespace

// Z ~ N(1, 2), Y | Z ~ N(0.5 + 2 Z, 1).
// Reversed: Y ~ N(2.5, 9), Z | Y ~ N(-1/9 + 4/9 y, 2/9).
TEST(Exchange, ContinuousClosedForm) {
  const auto [fy, fz] = exchange_continuous(gaussian(Y, 0.5, 1.0, {Z}, {2.0}), gaussian(Z, 1.0, 2.0));
  EXPECT_TRUE(fy.continuous_tail.empty());
  EXPECT_NEAR(fy.alpha[0], 2.5, 1e-14);
  EXPECT_NEAR(fy.sigma2[0], 9.0, 1e-14);
  EXPECT_NEAR(fz.alpha[0], -1.0 / 9.0, 1e-14);
  EXPECT_NEAR(coef(fz, Y), 4.0 / 9.0, 1e-14);
  EXPECT_NEAR(fz.sigma2[0], 2.0 / 9.0, 1e-14);
}

TEST(Exchange, ContinuousIndependentWhenBetaIsZero) {
  const auto [fy, fz] = exchange_continuous(gaussian(Y, 0.5, 1.0, {Z}, {0.0}), gaussian(Z, 1.0, 2.0));
  EXPECT_FALSE(fy.has_continuous_parent(Z));
  EXPECT_EQ(coef(fz, Y), 0.0);
  EXPECT_DOUBLE_EQ(fy.sigma2[0], 1.0);
  EXPECT_DOUBLE_EQ(fz.sigma2[0], 2.0);
}

// Deterministic Y = 3 Z: Z | Y is the inverse map with zero variance.
TEST(Exchange, ContinuousDeterministicInverse) {
  const auto [fy, fz] = exchange_continuous(gaussian(Y, 0.0, 0.0, {Z}, {3.0}), gaussian(Z, 1.0, 2.0));
  EXPECT_NEAR(fy.alpha[0], 3.0, 1e-14);
  EXPECT_NEAR(fy.sigma2[0], 18.0, 1e-14);
  EXPECT_NEAR(coef(fz, Y), 1.0 / 3.0, 1e-14);
  EXPECT_NEAR(fz.alpha[0], 0.0, 1e-14);
  EXPECT_EQ(fz.sigma2[0], 0.0);
}

TEST(Exchange, ContinuousKeepsOtherTails) {
  constexpr VariableId W = 5;
  // Z | W ~ N(1 + W, 2), Y | Z, W ~ N(0.5 + 2 Z - W, 1).
  const auto [fy, fz] =
      exchange_continuous(gaussian(Y, 0.5, 1.0, {Z, W}, {2.0, -1.0}), gaussian(Z, 1.0, 2.0, {W}, {1.0}));
  EXPECT_NEAR(fy.alpha[0], 2.5, 1e-14);
  EXPECT_NEAR(coef(fy, W), 1.0, 1e-14);
  EXPECT_NEAR(fy.sigma2[0], 9.0, 1e-14);
  EXPECT_NEAR(coef(fz, Y), 4.0 / 9.0, 1e-14);
  EXPECT_NEAR(coef(fz, W), 1.0 - 4.0 / 9.0, 1e-14);
}

// P(I) = (0.2, 0.8), P(J | I=0) = (0.9, 0.1), P(J | I=1) = (0.3, 0.7).
TEST(Exchange, DiscreteBayesRule) {
  const Factor pi = cpt(I, 2, {}, {0.2, 0.8});
  const Factor pj = cpt(J, 2, Domain{{I}, {2}}, {0.9, 0.1, 0.3, 0.7});
  const auto [pj2, pi2] = exchange_discrete(pj, pi);
  ASSERT_EQ(pj2.tail.arity(), 0u);
  EXPECT_NEAR(pj2.table[0], 0.42, 1e-15);
  EXPECT_NEAR(pj2.table[1], 0.58, 1e-15);
  ASSERT_EQ(pi2.tail.vars, std::vector<VariableId>{J});
  EXPECT_NEAR(pi2.table[0], 0.18 / 0.42, 1e-15);
  EXPECT_NEAR(pi2.table[1], 0.24 / 0.42, 1e-15);
  EXPECT_NEAR(pi2.table[2], 0.02 / 0.58, 1e-15);
  EXPECT_NEAR(pi2.table[3], 0.56 / 0.58, 1e-15);
}

TEST(Exchange, DiscreteZeroMarginalGivesUniformColumn) {
  const Factor pi = cpt(I, 2, {}, {0.5, 0.5});
  const Factor pj = cpt(J, 2, Domain{{I}, {2}}, {0.0, 1.0, 0.0, 1.0});
  const auto [pj2, pi2] = exchange_discrete(pj, pi);
  EXPECT_EQ(pj2.table[0], 0.0);
  EXPECT_DOUBLE_EQ(pi2.table[0], 0.5);
  EXPECT_DOUBLE_EQ(pi2.table[1], 0.5);
}

TEST(Algebra, NormalPdf) {
  EXPECT_NEAR(normal_pdf(0.0, 0.0, 1.0), 0.3989422804014327, 1e-15);
  EXPECT_NEAR(normal_pdf(3.0, 1.0, 4.0), 0.12098536225957168, 1e-15);
}

TEST(Algebra, EvidenceLikelihood) {
  Density d = gaussian(Y, 0.0, 1.0);
  d.discrete_tail = Domain{{I}, {2}};
  d.alpha = {0.0, 1.0};
  d.sigma2 = {1.0, 4.0};
  const Factor f = evidence_likelihood(d, 3.0);
  EXPECT_FALSE(f.head);
  EXPECT_EQ(f.evidence, std::vector<VariableId>{Y});
  EXPECT_NEAR(f.table[0], normal_pdf(3.0, 0.0, 1.0), 1e-15);
  EXPECT_NEAR(f.table[1], normal_pdf(3.0, 1.0, 4.0), 1e-15);
  d.sigma2[1] = 0.0;
  EXPECT_THROW(evidence_likelihood(d, 3.0), DegenerateError);
}

TEST(Algebra, InstantiateTail) {
  const Density d = instantiate_tail_continuous(gaussian(Y, 0.5, 1.0, {Z}, {2.0}), Z, 1.5);
  EXPECT_TRUE(d.continuous_tail.empty());
  EXPECT_DOUBLE_EQ(d.alpha[0], 3.5);
  EXPECT_EQ(d.instantiated, std::vector<VariableId>{Z});
}

TEST(Algebra, InstantiateDiscreteFactor) {
  const Factor pj = cpt(J, 2, Domain{{I}, {2}}, {0.9, 0.1, 0.3, 0.7});
  Evidence ev;
  ev.discrete[I] = 1;
  const Factor f = instantiate_discrete(pj, ev);
  EXPECT_EQ(f.tail.arity(), 0u);
  EXPECT_EQ(f.table, (std::vector<double>{0.3, 0.7}));
}

TEST(Algebra, MultiplyAndSumOut) {
  const Factor pi = cpt(I, 2, {}, {0.2, 0.8});
  const Factor pj = cpt(J, 2, Domain{{I}, {2}}, {0.9, 0.1, 0.3, 0.7});
  const std::vector<Factor> fs = {pi, pj};
  const Factor joint = multiply(fs);
  EXPECT_FALSE(joint.head);
  ASSERT_EQ(joint.tail.vars, (std::vector<VariableId>{I, J}));
  EXPECT_NEAR(joint.table[1], 0.02, 1e-15);
  const Factor m = sum_out(joint, I);
  EXPECT_NEAR(m.table[0], 0.42, 1e-15);
  EXPECT_NEAR(m.table[1], 0.58, 1e-15);
  const auto mt = marginal_table(fs, Domain{{J}, {2}});
  EXPECT_NEAR(mt[0], 0.42, 1e-15);
}

TEST(Algebra, ContractMatchesHandProduct) {
  const Potential p{{cpt(I, 2, {}, {0.2, 0.8})}, {gaussian(Z, 1.0, 2.0), gaussian(Y, 0.5, 1.0, {Z}, {2.0})}};
  Assignment at;
  at.discrete[I] = 1;
  at.continuous = {{Z, 0.3}, {Y, -0.4}};
  EXPECT_NEAR(contract(p, at), 0.8 * normal_pdf(0.3, 1.0, 2.0) * normal_pdf(-0.4, 1.1, 1.0), 1e-15);
}

TEST(Algebra, RemoveBarren) {
  Potential p{{cpt(I, 2, {}, {0.2, 0.8})}, {gaussian(Z, 1.0, 2.0), gaussian(Y, 0.5, 1.0, {Z}, {2.0})}};
  const Potential r = remove_barren(p, {Z}, {});
  ASSERT_EQ(r.densities.size(), 1u);
  EXPECT_EQ(r.densities[0].head, Z);
  EXPECT_TRUE(r.factors.empty());
}

TEST(Algebra, ProjectMarginalizesContinuousParent) {
  const Potential p{{}, {gaussian(Z, 1.0, 2.0), gaussian(Y, 0.5, 1.0, {Z}, {2.0})}};
  const Potential r = project(p, {Y}, {});
  ASSERT_EQ(r.densities.size(), 1u);
  EXPECT_EQ(r.densities[0].head, Y);
  EXPECT_NEAR(r.densities[0].alpha[0], 2.5, 1e-14);
  EXPECT_NEAR(r.densities[0].sigma2[0], 9.0, 1e-14);
}

TEST(Algebra, MixtureMoments) {
  GaussianMixture m;
  m.components = {{0.25, -1.0, 1.0, {}}, {0.75, 1.0, 2.0, {}}};
  EXPECT_DOUBLE_EQ(m.mean(), 0.5);
  EXPECT_DOUBLE_EQ(m.variance(), 0.25 * (1.0 + 2.25) + 0.75 * (2.0 + 0.25));
  m.components.push_back({0.5, 1.0, 2.0, {}});
  const auto c = m.collapsed();
  ASSERT_EQ(c.components.size(), 2u);
  EXPECT_DOUBLE_EQ(c.components[1].weight, 1.25);
}

TEST(Algebra, DescribeUsesNames) {
  const Network net = testkit::load_fixture("netB.json");
  const Density f = Density::from_spec(net, *net.density_of(2));
  EXPECT_EQ(describe(f, net), "f(Y2|Y1)");
  const Factor p = Factor::from_cpt(net, *net.cpt_of(0));
  EXPECT_EQ(describe(p, net), "P(X)");
}
