#include <gtest/gtest.h>

#include "clg/bench.hpp"
#include "clg/io.hpp"
#include "clg/jtree.hpp"
#include "support.hpp"

using namespace clg;

namespace {

std::vector<std::vector<std::string>> named_cliques(const StrongJunctionTree& t, const Network& net) {
  std::vector<std::vector<std::string>> out;
  for (const auto& c : t.cliques) {
    std::vector<std::string> names;
    for (VariableId v : c.members) names.push_back(net.variable(v).name);
    std::sort(names.begin(), names.end());
    out.push_back(names);
  }
  return out;
}

using Names = std::vector<std::vector<std::string>>;

}  // namespace

TEST(JTree, NetAChain) {
  const Network net = testkit::load_fixture("netA.json");
  const auto t = compile(net);
  EXPECT_EQ(named_cliques(t, net), (Names{{"X1", "X2", "X3", "Y1"},
                                           {"X2", "X3", "Y1", "Y2"},
                                           {"X3", "Y1", "Y2", "Y3"},
                                           {"Y1", "Y2", "Y3", "Y4"}}));
  for (std::size_t c = 1; c < t.cliques.size(); ++c) EXPECT_EQ(t.cliques[c].parent, c - 1);
  EXPECT_EQ(t.path_to_root(3), (std::vector<std::size_t>{3, 2, 1, 0}));
  EXPECT_TRUE(verify_strong_property(t, net));
  EXPECT_TRUE(verify_structure(t, net.size()));
}

TEST(JTree, SmallFixtures) {
  const Network b = testkit::load_fixture("netB.json");
  EXPECT_EQ(named_cliques(compile(b), b), (Names{{"X", "Y1"}, {"Y1", "Y2"}}));
  const Network c = testkit::load_fixture("netC.json");
  EXPECT_EQ(named_cliques(compile(c), c), (Names{{"X1", "X2", "Y2"}, {"X1", "Y1"}}));
  const Network d = testkit::load_fixture("netD.json");
  EXPECT_EQ(named_cliques(compile(d), d), (Names{{"X1", "Y1", "Y2", "Y3"}, {"Y1", "Y2", "Y4"}}));
}

TEST(JTree, SeparatorsAndStats) {
  const Network net = testkit::load_fixture("netA.json");
  const auto t = compile(net);
  ASSERT_EQ(t.separators.size(), 3u);
  const auto& s = t.separator_above(1);
  EXPECT_EQ(s.parent_clique, 0u);
  EXPECT_EQ(s.child_clique, 1u);
  EXPECT_EQ(s.members.size(), 3u);
  const auto st = tree_stats(t, net);
  EXPECT_EQ(st.count, 4u);
  EXPECT_EQ(st.clique_sizes, (std::vector<std::size_t>{8, 4, 2, 1}));
  EXPECT_EQ(st.max, 8u);
  EXPECT_EQ(st.total, 15u);
}

TEST(JTree, CoveringCliqueIsClosestToRoot) {
  const Network net = testkit::load_fixture("netA.json");
  const auto t = compile(net);
  EXPECT_EQ(t.covering_clique({*net.find("Y1")}), 0u);
  EXPECT_EQ(t.covering_clique({*net.find("Y4"), *net.find("Y3")}), 3u);
  EXPECT_FALSE(t.covering_clique({*net.find("X1"), *net.find("Y4")}));
}

TEST(JTree, DisconnectedComponentsHangFromRoot) {
  const Network net = parse_network(R"({
    "variables": [{"name": "A", "kind": "discrete", "states": ["a", "b"]},
                  {"name": "B", "kind": "continuous"},
                  {"name": "C", "kind": "continuous"}],
    "edges": [["A", "B"]],
    "cpts": {"A": [0.5, 0.5]},
    "densities": {"B": {"alpha": [0, 1], "beta": [[], []], "sigma2": [1, 1]},
                  "C": {"alpha": [0], "beta": [[]], "sigma2": [1]}}
  })");
  const auto t = compile(net);
  ASSERT_EQ(t.cliques.size(), 2u);
  EXPECT_TRUE(t.separators[0].members.empty());
  EXPECT_TRUE(verify_structure(t, net.size()));
  EXPECT_TRUE(verify_strong_property(t, net));
}

TEST(JTree, RandomNetworksAreStrong) {
  for (std::uint64_t seed = 1; seed <= 40; ++seed)
    for (double frac : {0.0, 0.3, 0.7, 1.0}) {
      const Network net = generate_network(25, frac, seed);
      const auto t = compile(net);
      EXPECT_TRUE(verify_strong_property(t, net)) << seed << " " << frac;
      EXPECT_TRUE(verify_structure(t, net.size())) << seed << " " << frac;
    }
}

TEST(JTree, VerifyStructureRejectsBrokenTree) {
  const Network net = testkit::load_fixture("netA.json");
  auto t = compile(net);
  t.separators[1].members.pop_back();
  EXPECT_FALSE(verify_structure(t, net.size()));
}
