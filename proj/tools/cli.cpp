#include "cli.hpp"

#include <filesystem>
#include <fstream>

#include <CLI11.hpp>

#include "clg/bench.hpp"
#include "clg/engine.hpp"
#include "clg/error.hpp"
#include "clg/io.hpp"
#include "clg/jtree.hpp"
#include "clg/oracle.hpp"

namespace clg::cli {
namespace {

std::vector<VariableId> resolve_targets(const Network& net, const std::vector<std::string>& names) {
  std::vector<VariableId> out;
  if (names.empty()) {
    for (VariableId v = 0; v < net.size(); ++v) out.push_back(v);
    return out;
  }
  for (const auto& n : names) {
    const auto id = net.find(n);
    if (!id) throw DataError("unknown target variable '" + n + "'");
    out.push_back(*id);
  }
  return out;
}

QueryResult run_query(const Network& net, const Evidence& evidence, const std::vector<VariableId>& targets) {
  const auto tree = compile(net);
  TreeState state = propagate(tree, net, evidence);
  QueryResult r;
  for (VariableId v : targets) {
    if (net.is_discrete(v)) r.discrete.emplace_back(v, state.query_discrete(v));
    else r.continuous.emplace_back(v, state.query_continuous(v));
  }
  return r;
}

QueryResult run_oracle(const Network& net, const Evidence& evidence, const std::vector<VariableId>& targets) {
  const auto joint = condition(enumerate_joint(net), evidence);
  QueryResult r;
  for (VariableId v : targets) {
    if (net.is_discrete(v)) r.discrete.emplace_back(v, oracle_discrete(joint, v));
    else r.continuous.emplace_back(v, oracle_continuous(joint, v));
  }
  return r;
}

std::string stem(const std::string& path) { return std::filesystem::path(path).stem().string(); }

}  // namespace

int run_command(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Lazy propagation in CLG Bayesian networks", "clg"};
  app.require_subcommand(1);

  std::string file;
  bool stats = false;
  std::vector<std::string> evidence_items, targets;
  std::size_t n = 0;
  double frac = 0.0;
  std::uint64_t seed = 1;
  std::size_t max_parents = 3;
  std::string out_path, config_path, out_dir = ".";

  auto* validate = app.add_subcommand("validate", "Check a network file");
  validate->add_option("file", file, "Network JSON")->required();

  auto* compile_cmd = app.add_subcommand("compile", "Build the strong junction tree");
  compile_cmd->add_option("file", file, "Network JSON")->required();
  compile_cmd->add_flag("--stats", stats, "Print clique statistics as CSV");

  auto* query = app.add_subcommand("query", "Posterior marginals by lazy propagation");
  auto* oracle = app.add_subcommand("oracle", "Posterior marginals by brute-force enumeration");
  for (auto* sub : {query, oracle}) {
    sub->add_option("file", file, "Network JSON")->required();
    sub->add_option("--evidence,-e", evidence_items, "NAME=VALUE items")->delimiter(',');
    sub->add_option("--target,-t", targets, "Variables to report (default: all)");
  }

  auto* gen = app.add_subcommand("gen", "Generate a random network");
  gen->add_option("--n", n, "Number of variables")->required()->check(CLI::PositiveNumber);
  gen->add_option("--frac", frac, "Fraction of continuous variables")->required()->check(CLI::Range(0.0, 1.0));
  gen->add_option("--seed", seed, "Random seed");
  gen->add_option("--max-parents", max_parents, "Maximum parent count");
  gen->add_option("--out,-o", out_path, "Output file (default: stdout)");

  auto* bench = app.add_subcommand("bench", "Run a benchmark sweep");
  bench->add_option("--config", config_path, "Bench config JSON")->required();
  bench->add_option("--out,-o", out_dir, "Directory for runs.csv and agg.csv");

  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? ok : usage;
  }

  try {
    if (validate->parsed()) {
      const Network net = parse_network(read_file(file));
      const auto report = validate_network(net);
      for (const auto& v : report) out << format_violation(net, v) << "\n";
      if (report.empty()) out << "ok\n";
      return report.empty() ? ok : data_error;
    }
    if (compile_cmd->parsed()) {
      const Network net = load_network_file(file);
      const auto tree = compile(net);
      const auto st = tree_stats(tree, net);
      if (stats) {
        out << "network,|X|,|C|,max_sC,total_sC\n"
            << stem(file) << ',' << net.size() << ',' << st.count << ',' << st.max << ',' << st.total << "\n";
        return ok;
      }
      for (const auto& c : tree.cliques) {
        out << "C" << c.id << " {";
        for (std::size_t i = 0; i < c.members.size(); ++i) out << (i ? "," : "") << net.variable(c.members[i]).name;
        out << "} s=" << st.clique_sizes[c.id];
        if (c.parent) out << " parent=C" << *c.parent;
        out << "\n";
      }
      return ok;
    }
    if (query->parsed() || oracle->parsed()) {
      const Network net = load_network_file(file);
      const Evidence ev = parse_evidence(net, evidence_items);
      const auto ids = resolve_targets(net, targets);
      out << format_query_result(net, query->parsed() ? run_query(net, ev, ids) : run_oracle(net, ev, ids));
      return ok;
    }
    if (gen->parsed()) {
      const std::string text = serialize_network(generate_network(n, frac, seed, max_parents));
      if (out_path.empty()) {
        out << text;
      } else {
        std::ofstream f(out_path);
        if (!(f << text)) throw DataError("cannot write " + out_path);
      }
      return ok;
    }
    if (bench->parsed()) {
      BenchConfig config = parse_bench_config(read_file(config_path));
      if (const auto env = memory_budget_from_env()) config.memory_budget = env;
      const auto records = run_benchmark(config);
      std::filesystem::create_directories(out_dir);
      const auto runs = (std::filesystem::path(out_dir) / "runs.csv").string();
      const auto agg = (std::filesystem::path(out_dir) / "agg.csv").string();
      std::ofstream r(runs), a(agg);
      write_runs_csv(r, records);
      write_agg_csv(a, records);
      if (!r || !a) throw DataError("cannot write CSV output in " + out_dir);
      out << runs << "\n" << agg << "\n";
      return ok;
    }
  } catch (const DegenerateError& e) {
    err << "error: " << e.what() << "\n";
    return degenerate;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return data_error;
  } catch (const std::filesystem::filesystem_error& e) {
    err << "error: " << e.what() << "\n";
    return data_error;
  }
  return usage;
}

}  // namespace clg::cli
