#include <gtest/gtest.h>

#include <algorithm>

#include "clg/error.hpp"
#include "clg/io.hpp"
#include "clg/model.hpp"
#include "support.hpp"

using namespace clg;

namespace {

bool has_code(const ValidationReport& r, const std::string& code) {
  return std::any_of(r.begin(), r.end(), [&](const Violation& v) { return v.code == code; });
}

// netB with one piece of text replaced.
Network netb_with(const std::string& from, const std::string& to) {
  std::string text = read_file(testkit::fixture("netB.json"));
  const auto pos = text.find(from);
  EXPECT_NE(pos, std::string::npos) << from;
  text.replace(pos, from.size(), to);
  return parse_network(text);
}

}  // namespace

TEST(Model, FixturesAreValid) {
  for (const char* f : {"netA.json", "netB.json", "netC.json", "netD.json"})
    EXPECT_TRUE(validate_network(testkit::load_fixture(f)).empty()) << f;
}

TEST(Model, LookupAndKinds) {
  const Network net = testkit::load_fixture("netB.json");
  ASSERT_EQ(net.size(), 3u);
  EXPECT_EQ(net.find("Y1"), VariableId{1});
  EXPECT_FALSE(net.find("nope"));
  EXPECT_EQ(net.discrete_ids(), std::vector<VariableId>{0});
  EXPECT_EQ(net.continuous_ids(), (std::vector<VariableId>{1, 2}));
  EXPECT_EQ(net.children()[0], std::vector<VariableId>{1});
  ASSERT_NE(net.density_of(2), nullptr);
  EXPECT_EQ(net.density_of(2)->continuous_tail, std::vector<VariableId>{1});
  EXPECT_EQ(net.cpt_of(1), nullptr);
}

TEST(Model, TopologicalOrderPrefersSmallIds) {
  const Network net = testkit::load_fixture("netA.json");
  const auto order = net.topological_order();
  ASSERT_EQ(order.size(), net.size());
  std::vector<std::size_t> pos(net.size());
  for (std::size_t i = 0; i < order.size(); ++i) pos[order[i]] = i;
  for (VariableId v = 0; v < net.size(); ++v)
    for (VariableId p : net.parents[v]) EXPECT_LT(pos[p], pos[v]);
  EXPECT_EQ(order.front(), 0u);
}

TEST(Model, DetectsUnnormalizedCpt) {
  EXPECT_TRUE(has_code(validate_network(netb_with("[0.3, 0.7]", "[0.3, 0.8]")), "cpt-not-normalized"));
}

TEST(Model, DetectsNegativeEntries) {
  EXPECT_TRUE(has_code(validate_network(netb_with("[0.3, 0.7]", "[1.3, -0.3]")), "cpt-negative"));
}

TEST(Model, DetectsNegativeVariance) {
  EXPECT_TRUE(has_code(validate_network(netb_with("\"sigma2\": [0.8]", "\"sigma2\": [-0.8]")), "negative-variance"));
}

TEST(Model, ZeroVarianceIsAllowed) {
  EXPECT_TRUE(validate_network(netb_with("\"sigma2\": [0.8]", "\"sigma2\": [0]")).empty());
}

TEST(Model, DetectsBetaArity) {
  EXPECT_TRUE(has_code(validate_network(netb_with("[[1.5]]", "[[1.5, 2.0]]")), "beta-arity-mismatch"));
}

TEST(Model, DetectsDensitySize) {
  EXPECT_TRUE(has_code(validate_network(netb_with("\"alpha\": [-1.0, 2.0]", "\"alpha\": [-1.0]")), "density-size"));
}

TEST(Model, DetectsCycle) {
  EXPECT_TRUE(has_code(validate_network(netb_with("[\"Y1\", \"Y2\"]", "[\"Y1\", \"Y2\"], [\"Y2\", \"Y1\"]")), "cycle"));
}

TEST(Model, DetectsDiscreteChildOfContinuous) {
  EXPECT_TRUE(has_code(validate_network(netb_with("[\"X\", \"Y1\"]", "[\"X\", \"Y1\"], [\"Y2\", \"X\"]")),
                       "discrete-with-continuous-parent"));
}

TEST(Model, DetectsMissingSpecs) {
  EXPECT_TRUE(has_code(validate_network(netb_with("\"cpts\": {\"X\": [0.3, 0.7]}", "\"cpts\": {}")), "missing-cpt"));
}

TEST(Model, DetectsDuplicateNames) {
  const Network net = parse_network(R"({
    "variables": [{"name": "A", "kind": "continuous"}, {"name": "A", "kind": "continuous"}],
    "edges": [], "cpts": {},
    "densities": {"A": {"alpha": [0], "beta": [[]], "sigma2": [1]}}
  })");
  EXPECT_TRUE(has_code(validate_network(net), "duplicate-name"));
}

TEST(Model, DetectsSingleStateVariable) {
  EXPECT_TRUE(has_code(validate_network(netb_with("[\"x0\", \"x1\"]", "[\"x0\"]")), "too-few-states"));
}

TEST(Model, EvidenceChecks) {
  const Network net = testkit::load_fixture("netB.json");
  Evidence ok;
  ok.discrete[0] = 1;
  ok.continuous[2] = 0.5;
  EXPECT_NO_THROW(check_evidence(net, ok));

  Evidence out_of_range;
  out_of_range.discrete[0] = 2;
  EXPECT_THROW(check_evidence(net, out_of_range), DataError);

  Evidence wrong_kind;
  wrong_kind.continuous[0] = 1.0;
  EXPECT_THROW(check_evidence(net, wrong_kind), DataError);

  Evidence unknown;
  unknown.continuous[7] = 1.0;
  EXPECT_THROW(check_evidence(net, unknown), DataError);
}
