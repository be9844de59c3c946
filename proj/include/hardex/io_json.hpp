#pragma once

#include <string>

#include <json.hpp>

#include "hardex/makespan.hpp"
#include "hardex/tree_io.hpp"

namespace hardex {

inline nlohmann::json rat_pair_json(const Rat& r) {
  return nlohmann::json{{"num", r.num_i64()}, {"den", r.den_i64()}};
}

inline nlohmann::json assignment_1based(const std::vector<int>& z) {
  nlohmann::json arr = nlohmann::json::array();
  for (int v : z) arr.push_back(v + 1);
  return arr;
}

inline std::string assignment_label(const std::vector<int>& z) {
  std::string s = "(";
  for (std::size_t j = 0; j < z.size(); ++j) {
    if (j) s += ", ";
    s += std::to_string(z[j] + 1);
  }
  return s + ")";
}

/// Ratio report in the stable CLI schema. Rationals in the witness are "p/q"
/// strings; alpha is either an exact num/den pair or a lo/hi string interval.
template <typename P>
nlohmann::json ratio_report_json(const HardExampleReport<std::vector<int>>& rep,
                                 const DecisionTree<P>& tree, const std::string& problem, int m) {
  nlohmann::json j;
  j["problem"] = problem;
  j["n"] = tree.n;
  j["m"] = m;
  if (rep.exact) {
    j["alpha"] = rat_pair_json(rep.alpha_lo);
  } else {
    j["alpha"] = nlohmann::json{{"lo", rep.alpha_lo.str()}, {"hi", rep.alpha_hi.str()}};
  }
  j["attained"] = rep.attained;
  nlohmann::json witness = nlohmann::json::array();
  for (const auto& w : rep.witness) witness.push_back(w.str());
  j["witness"] = std::move(witness);
  j["lpt_assignment"] = assignment_1based(rep.algorithm_output);
  j["opt_assignment"] = assignment_1based(rep.optimal_output);
  nlohmann::json leaf_cs = nlohmann::json::array();
  if (rep.leaf_id >= 0) {
    for (const auto& c : tree.base_region) leaf_cs.push_back(c.str());
    for (const auto& c : tree.path(rep.leaf_id)) leaf_cs.push_back(c.str());
  }
  j["leaf_constraints"] = std::move(leaf_cs);
  j["stats"] = nlohmann::json{{"leaves_total", rep.stats.leaves_total},
                              {"leaves_after_check1", rep.stats.leaves_after_check1},
                              {"leaves_after_check2", rep.stats.leaves_after_check2},
                              {"lps_solved", rep.stats.lps_solved},
                              {"wall_ms", rep.stats.wall_ms}};
  if (rep.stats.check1_fallback) j["stats"]["check1_fallback"] = true;
  return j;
}

inline nlohmann::json plain_tree_json(const DecisionTree<std::vector<int>>& tree) {
  std::function<nlohmann::json(const std::vector<int>&)> pj = [](const std::vector<int>& z) {
    return nlohmann::json{{"assignment", assignment_1based(z)}};
  };
  return export_json(tree, pj);
}

inline nlohmann::json annotated_tree_json(const DecisionTree<makespan::Assignment>& tree) {
  std::function<nlohmann::json(const makespan::Assignment&)> pj =
      [](const makespan::Assignment& a) {
        return nlohmann::json{{"assignment", assignment_1based(a.machine)},
                              {"max_machine", a.max_machine + 1}};
      };
  return export_json(tree, pj);
}

inline std::string plain_tree_dot(const DecisionTree<std::vector<int>>& tree) {
  std::function<std::string(const std::vector<int>&)> fmt = assignment_label;
  return export_dot(tree, fmt);
}

inline std::string annotated_tree_dot(const DecisionTree<makespan::Assignment>& tree) {
  std::function<std::string(const makespan::Assignment&)> fmt = [](const makespan::Assignment& a) {
    return assignment_label(a.machine) + " max m" + std::to_string(a.max_machine + 1);
  };
  return export_dot(tree, fmt);
}

inline std::string plain_tree_text(const DecisionTree<std::vector<int>>& tree) {
  std::function<std::string(const std::vector<int>&)> fmt = assignment_label;
  return export_text(tree, fmt);
}

inline std::string annotated_tree_text(const DecisionTree<makespan::Assignment>& tree) {
  std::function<std::string(const makespan::Assignment&)> fmt = [](const makespan::Assignment& a) {
    return assignment_label(a.machine) + " max m" + std::to_string(a.max_machine + 1);
  };
  return export_text(tree, fmt);
}

}  // namespace hardex
