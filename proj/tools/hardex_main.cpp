// hardex: extract the decision tree of a scheduling heuristic and compute
// its exact worst-case approximation ratio with a hard input witness.
//
// Exit codes: 0 success, 1 bad input/config, 2 node budget exhausted.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "hardex/io_json.hpp"

namespace {

using namespace hardex;

struct CommonOpts {
  std::string problem = "lpt";
  int n = 0;
  int m = 0;
  std::string prune_interior = "on";
  std::int64_t max_nodes = 500000;
};

TraceConfig trace_config(const CommonOpts& c) {
  TraceConfig cfg;
  cfg.prune_infeasible = true;
  cfg.prune_empty_interior = c.prune_interior == "on";
  cfg.max_nodes = c.max_nodes;
  return cfg;
}

void add_common(CLI::App* cmd, CommonOpts& c, bool with_n = true) {
  cmd->add_option("--problem", c.problem, "Problem pack")->check(CLI::IsMember({"lpt"}));
  if (with_n) cmd->add_option("-n,--jobs", c.n, "Number of jobs")->required()->check(CLI::PositiveNumber);
  cmd->add_option("-m,--machines", c.m, "Number of machines")->required()->check(CLI::PositiveNumber);
  cmd->add_option("--prune-interior", c.prune_interior,
                  "Drop branch sides whose region has empty interior (sound for lpt)")
      ->check(CLI::IsMember({"on", "off"}));
  cmd->add_option("--max-nodes", c.max_nodes, "Tree node budget")
      ->envname("HARDEX_MAX_NODES")
      ->check(CLI::PositiveNumber);
}

int run_tree(const CommonOpts& c, const std::string& format, bool annotate) {
  TraceConfig cfg = trace_config(c);
  if (annotate) {
    auto tree = makespan::build_lpt_tree(c.n, c.m, cfg);
    if (format == "dot") std::cout << annotated_tree_dot(tree);
    else if (format == "json") std::cout << annotated_tree_json(tree).dump(2) << "\n";
    else std::cout << annotated_tree_text(tree);
  } else {
    auto tree = makespan::build_plain_lpt_tree(c.n, c.m, cfg);
    if (format == "dot") std::cout << plain_tree_dot(tree);
    else if (format == "json") std::cout << plain_tree_json(tree).dump(2) << "\n";
    else std::cout << plain_tree_text(tree);
  }
  return 0;
}

int run_ratio(const CommonOpts& c, const std::string& format, const SearchOptions& opts,
              bool binary_search) {
  TraceConfig cfg = trace_config(c);
  auto result = makespan::lpt_worst_ratio(c.n, c.m, cfg, opts, binary_search);
  const auto& rep = result.report;
  nlohmann::json j = ratio_report_json(rep, result.tree, c.problem, c.m);
  j["n"] = c.n;
  if (format == "json") {
    std::cout << j.dump(2) << "\n";
  } else {
    if (rep.exact)
      std::cout << "alpha = " << rep.alpha_lo.str() << (rep.attained ? " (attained)" : " (supremum)")
                << "\n";
    else
      std::cout << "alpha in [" << rep.alpha_lo.str() << ", " << rep.alpha_hi.str() << "]\n";
    std::cout << "witness =";
    for (const auto& w : rep.witness) std::cout << " " << w.str();
    std::cout << "\nlpt assignment = " << assignment_label(rep.algorithm_output)
              << "\nopt assignment = " << assignment_label(rep.optimal_output) << "\n";
  }
  return 0;
}

std::vector<Rat> parse_jobs(const std::string& text) {
  std::istringstream is(text);
  std::vector<Rat> jobs;
  std::string tok;
  while (is >> tok) jobs.push_back(Rat::parse(tok));
  if (jobs.empty()) throw std::invalid_argument("oracle: no jobs given");
  return jobs;
}

int run_oracle(int m, const std::string& jobs_inline, const std::string& jobs_file,
               const std::string& format) {
  std::string text = jobs_inline;
  if (!jobs_file.empty()) {
    std::ifstream in(jobs_file);
    if (!in) throw std::invalid_argument("oracle: cannot open jobs file " + jobs_file);
    std::ostringstream buf;
    buf << in.rdbuf();
    text = buf.str();
  }
  auto jobs = parse_jobs(text);
  auto res = makespan::brute_oracle(jobs, m);
  if (format == "json") {
    nlohmann::json j{{"lpt", res.lpt_makespan.str()},
                     {"opt", res.opt_makespan.str()},
                     {"ratio", res.ratio.str()},
                     {"lpt_assignment", assignment_1based(res.lpt_assignment)},
                     {"opt_assignment", assignment_1based(res.opt_assignment)}};
    std::cout << j.dump(2) << "\n";
  } else {
    std::cout << res.lpt_makespan.str() << " " << res.opt_makespan.str() << " " << res.ratio.str()
              << "\n";
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact worst-case approximation ratios via decision trees and rational LPs"};
  app.require_subcommand(1);

  CommonOpts tree_opts, ratio_opts;
  std::string tree_format = "dot";
  bool tree_annotate = false;

  CLI::App* tree_cmd = app.add_subcommand("tree", "Extract and print the decision tree");
  add_common(tree_cmd, tree_opts);
  tree_cmd->add_option("--format", tree_format, "Output format")
      ->check(CLI::IsMember({"dot", "json", "text"}));
  tree_cmd->add_flag("--annotate-max", tree_annotate,
                     "Trace the variant that also reports the most loaded machine");

  std::string ratio_format = "json";
  std::string check1 = "on", check2 = "on";
  int workers = 1;
  bool binary_search = false;
  std::string tol = "1/1000", epsilon = "1/1000000";

  CLI::App* ratio_cmd = app.add_subcommand("ratio", "Compute the worst-case ratio and a hard input");
  add_common(ratio_cmd, ratio_opts);
  ratio_cmd->add_option("--format", ratio_format, "Output format")->check(CLI::IsMember({"json", "text"}));
  ratio_cmd->add_option("--check1", check1, "Last-job/max-machine leaf prune")
      ->check(CLI::IsMember({"on", "off"}));
  ratio_cmd->add_option("--check2", check2, "Per-leaf relaxation bound prune")
      ->check(CLI::IsMember({"on", "off"}));
  ratio_cmd->add_option("--workers", workers, "Worker threads for the LP sweep")
      ->envname("HARDEX_WORKERS")
      ->check(CLI::PositiveNumber);
  ratio_cmd->add_flag("--binary-search", binary_search,
                      "Bracket the ratio by bisection instead of the exact mode");
  ratio_cmd->add_option("--tol", tol, "Bisection interval width (rational)");
  ratio_cmd->add_option("--epsilon", epsilon, "Near-witness offset for unattained suprema (rational)");

  int oracle_m = 0;
  std::string jobs_inline, jobs_file, oracle_format = "text";
  CLI::App* oracle_cmd = app.add_subcommand("oracle", "Brute-force ground truth for one instance");
  oracle_cmd->add_option("-m,--machines", oracle_m, "Number of machines")->required()->check(CLI::PositiveNumber);
  oracle_cmd->add_option("--jobs", jobs_inline, "Whitespace-separated job sizes (rationals like 7/6)");
  oracle_cmd->add_option("--jobs-file", jobs_file, "File with whitespace-separated job sizes");
  oracle_cmd->add_option("--format", oracle_format, "Output format")->check(CLI::IsMember({"text", "json"}));

  CLI11_PARSE(app, argc, argv);

  try {
    if (tree_cmd->parsed()) return run_tree(tree_opts, tree_format, tree_annotate);
    if (ratio_cmd->parsed()) {
      SearchOptions opts;
      opts.check1 = check1 == "on";
      opts.check2 = check2 == "on";
      opts.workers = workers;
      opts.tol = Rat::parse(tol);
      opts.epsilon = Rat::parse(epsilon);
      if (opts.tol.sign() <= 0 || opts.epsilon.sign() <= 0)
        throw std::invalid_argument("tol and epsilon must be positive");
      return run_ratio(ratio_opts, ratio_format, opts, binary_search);
    }
    if (oracle_cmd->parsed()) return run_oracle(oracle_m, jobs_inline, jobs_file, oracle_format);
  } catch (const BudgetExceeded& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
