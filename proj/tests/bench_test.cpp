#include <gtest/gtest.h>

#include <sstream>

#include "clg/bench.hpp"
#include "clg/error.hpp"
#include "clg/io.hpp"

using namespace clg;

TEST(Bench, GeneratorIsDeterministicAndValid) {
  const Network a = generate_network(30, 0.4, 77, 2);
  EXPECT_EQ(serialize_network(a), serialize_network(generate_network(30, 0.4, 77, 2)));
  EXPECT_NE(serialize_network(a), serialize_network(generate_network(30, 0.4, 78, 2)));
  EXPECT_TRUE(validate_network(a).empty());
  EXPECT_EQ(a.continuous_ids().size(), 12u);
  for (const auto& pa : a.parents) EXPECT_LE(pa.size(), 2u);
}

TEST(Bench, GeneratorExtremes) {
  EXPECT_TRUE(generate_network(15, 0.0, 1).continuous_ids().empty());
  EXPECT_TRUE(generate_network(15, 1.0, 1).discrete_ids().empty());
  EXPECT_TRUE(validate_network(generate_network(15, 1.0, 1)).empty());
}

TEST(Bench, EvidenceSample) {
  const Network net = generate_network(20, 0.5, 3);
  const Evidence ev = generate_evidence(net, 7, 9);
  EXPECT_EQ(ev.size(), 7u);
  EXPECT_NO_THROW(check_evidence(net, ev));
}

TEST(Bench, ConfigParsing) {
  const BenchConfig c = parse_bench_config(
      R"({"sizes": [10, 20], "fractions": [0.5], "evidence_sizes": [0, 6, 3], "seed": 4, "repetitions": 1})");
  EXPECT_EQ(c.sizes, (std::vector<std::size_t>{10, 20}));
  EXPECT_EQ(c.max_evidence, 6u);
  EXPECT_EQ(c.evidence_step, 3u);
  EXPECT_FALSE(c.memory_budget);
  EXPECT_THROW(parse_bench_config(R"({"sizez": [10]})"), DataError);
  EXPECT_THROW(parse_bench_config(R"({"fractions": [1.5]})"), DataError);
  EXPECT_THROW(parse_bench_config(R"({"evidence_sizes": [4, 2]})"), DataError);
}

TEST(Bench, RunSingleReportsSizes) {
  const Network net = generate_network(15, 0.5, 21);
  const BenchRecord r = run_single(net, "t", generate_evidence(net, 3, 22), 1);
  EXPECT_EQ(r.status, "ok");
  EXPECT_GT(r.max_config, 0u);
  EXPECT_LE(r.max_config, r.max_clique);
  EXPECT_GE(r.max_components, 1u);
}

TEST(Bench, MemoryBudgetTriggers) {
  const Network net = generate_network(25, 0.3, 5);
  const BenchRecord r = run_single(net, "t", {}, 1, std::size_t{16});
  EXPECT_EQ(r.status, "out-of-memory");
}

TEST(Bench, SweepAndCsv) {
  BenchConfig c;
  c.sizes = {10};
  c.fractions = {0.5};
  c.nets_per_cell = 2;
  c.max_evidence = 2;
  c.evidence_step = 2;
  c.repetitions = 1;
  const auto records = run_benchmark(c);
  ASSERT_EQ(records.size(), 4u);
  std::ostringstream runs, agg;
  write_runs_csv(runs, records);
  write_agg_csv(agg, records);
  EXPECT_EQ(runs.str().rfind("schema=1\nnetwork,size,fraction,evidence,propagate_ms", 0), 0u);
  std::size_t lines = 0;
  for (char ch : agg.str()) lines += ch == '\n';
  EXPECT_EQ(lines, 4u);  // schema, header, two evidence sizes
  EXPECT_NE(agg.str().find("\nmean,10,0.5,0,"), std::string::npos);
}
