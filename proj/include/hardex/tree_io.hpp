#pragma once

#include <functional>
#include <sstream>
#include <string>

#include <json.hpp>

#include "hardex/trace.hpp"

namespace hardex {

namespace detail {

inline std::string dot_escape(const std::string& s) {
  std::string out;
  out.reserve(s.size());
  for (char ch : s) {
    if (ch == '"' || ch == '\\') out.push_back('\\');
    out.push_back(ch);
  }
  return out;
}

}  // namespace detail

/// DOT digraph: internal nodes labeled with their constraint, edges labeled
/// true/false (true listed first), leaves labeled by the payload formatter.
/// Node ids follow the preorder storage.
template <typename P>
std::string export_dot(const DecisionTree<P>& tree,
                       const std::function<std::string(const P&)>& payload_label) {
  std::ostringstream os;
  os << "digraph decision_tree {\n";
  os << "  node [shape=box];\n";
  for (std::size_t i = 0; i < tree.nodes.size(); ++i) {
    const auto& nd = tree.nodes[i];
    std::string label = nd.is_leaf() ? payload_label(*nd.payload) : nd.test->str();
    os << "  n" << i << " [label=\"" << detail::dot_escape(label) << "\"];\n";
  }
  for (std::size_t i = 0; i < tree.nodes.size(); ++i) {
    const auto& nd = tree.nodes[i];
    if (nd.is_leaf()) continue;
    os << "  n" << i << " -> n" << nd.true_child << " [label=\"true\"];\n";
    os << "  n" << i << " -> n" << nd.false_child << " [label=\"false\"];\n";
  }
  os << "}\n";
  return os.str();
}

/// JSON export: {n, base_region, nodes: [{id, kind, constraint|payload, ...}]}.
template <typename P>
nlohmann::json export_json(const DecisionTree<P>& tree,
                           const std::function<nlohmann::json(const P&)>& payload_json) {
  nlohmann::json nodes = nlohmann::json::array();
  for (std::size_t i = 0; i < tree.nodes.size(); ++i) {
    const auto& nd = tree.nodes[i];
    nlohmann::json j;
    j["id"] = i;
    if (nd.is_leaf()) {
      j["kind"] = "leaf";
      j["payload"] = payload_json(*nd.payload);
      nlohmann::json path = nlohmann::json::array();
      for (const auto& c : nd.path) path.push_back(c.str());
      j["path"] = std::move(path);
    } else {
      j["kind"] = "internal";
      j["constraint"] = nd.test->str();
      j["true_child"] = nd.true_child;
      j["false_child"] = nd.false_child;
    }
    nodes.push_back(std::move(j));
  }
  nlohmann::json base = nlohmann::json::array();
  for (const auto& c : tree.base_region) base.push_back(c.str());
  return nlohmann::json{{"n", tree.n}, {"base_region", std::move(base)}, {"nodes", std::move(nodes)}};
}

/// Indented if/else rendering.
template <typename P>
std::string export_text(const DecisionTree<P>& tree,
                        const std::function<std::string(const P&)>& payload_label) {
  std::ostringstream os;
  auto rec = [&](auto&& self, int id, int depth) -> void {
    std::string pad(static_cast<std::size_t>(depth) * 4, ' ');
    const auto& nd = tree.nodes[static_cast<std::size_t>(id)];
    if (nd.is_leaf()) {
      os << pad << "return " << payload_label(*nd.payload) << "\n";
      return;
    }
    os << pad << "if " << nd.test->str() << ":\n";
    self(self, nd.true_child, depth + 1);
    os << pad << "else:\n";
    self(self, nd.false_child, depth + 1);
  };
  rec(rec, tree.root(), 0);
  return os.str();
}

}  // namespace hardex
