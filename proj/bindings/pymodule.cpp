#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "hardex/io_json.hpp"

namespace py = pybind11;
using namespace hardex;

namespace {

TraceConfig config(bool prune_interior, std::int64_t max_nodes) {
  TraceConfig cfg;
  cfg.prune_infeasible = true;
  cfg.prune_empty_interior = prune_interior;
  cfg.max_nodes = max_nodes;
  return cfg;
}

std::string lpt_tree(int n, int m, bool prune_interior, bool annotate_max, std::int64_t max_nodes,
                     const std::string& format) {
  TraceConfig cfg = config(prune_interior, max_nodes);
  if (annotate_max) {
    auto tree = makespan::build_lpt_tree(n, m, cfg);
    if (format == "dot") return annotated_tree_dot(tree);
    if (format == "text") return annotated_tree_text(tree);
    return annotated_tree_json(tree).dump();
  }
  auto tree = makespan::build_plain_lpt_tree(n, m, cfg);
  if (format == "dot") return plain_tree_dot(tree);
  if (format == "text") return plain_tree_text(tree);
  return plain_tree_json(tree).dump();
}

std::string lpt_ratio(int n, int m, bool check1, bool check2, int workers, bool prune_interior,
                      bool binary_search, const std::string& tol, const std::string& epsilon,
                      std::int64_t max_nodes) {
  TraceConfig cfg = config(prune_interior, max_nodes);
  SearchOptions opts;
  opts.check1 = check1;
  opts.check2 = check2;
  opts.workers = workers;
  opts.tol = Rat::parse(tol);
  opts.epsilon = Rat::parse(epsilon);
  if (opts.tol.sign() <= 0 || opts.epsilon.sign() <= 0)
    throw std::invalid_argument("tol and epsilon must be positive");
  auto result = makespan::lpt_worst_ratio(n, m, cfg, opts, binary_search);
  nlohmann::json j = ratio_report_json(result.report, result.tree, "lpt", m);
  j["n"] = n;
  return j.dump();
}

py::tuple lpt_oracle(const std::vector<std::string>& jobs, int m) {
  std::vector<Rat> x;
  x.reserve(jobs.size());
  for (const auto& s : jobs) x.push_back(Rat::parse(s));
  auto res = makespan::brute_oracle(x, m);
  return py::make_tuple(res.lpt_makespan.str(), res.opt_makespan.str(), res.ratio.str());
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Exact worst-case approximation ratios via decision trees and rational LPs";
  m.attr("__version__") = "0.1.0";

  m.def("lpt_tree", &lpt_tree, py::arg("n"), py::arg("m"), py::arg("prune_interior") = true,
        py::arg("annotate_max") = false, py::arg("max_nodes") = 500000,
        py::arg("format") = "json",
        "Decision tree of the greedy scheduler as a JSON/DOT/text string");

  m.def("lpt_ratio", &lpt_ratio, py::arg("n"), py::arg("m"), py::arg("check1") = true,
        py::arg("check2") = true, py::arg("workers") = 1, py::arg("prune_interior") = true,
        py::arg("binary_search") = false, py::arg("tol") = "1/1000",
        py::arg("epsilon") = "1/1000000", py::arg("max_nodes") = 500000,
        "Worst-case ratio report as a JSON string",
        py::call_guard<py::gil_scoped_release>());

  m.def("lpt_oracle", &lpt_oracle, py::arg("jobs"), py::arg("m"),
        "Brute-force (lpt, opt, ratio) makespans for one instance, as strings");

  py::register_exception<BudgetExceeded>(m, "BudgetExceededError", PyExc_RuntimeError);
}
