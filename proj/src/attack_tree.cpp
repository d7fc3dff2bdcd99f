#include "atm/attack_tree.hpp"

#include <algorithm>
#include <functional>

#include "atm/errors.hpp"

namespace atm {

const char* node_type_name(NodeType t) {
  switch (t) {
    case NodeType::Bas: return "BAS";
    case NodeType::Or: return "OR";
    case NodeType::And: return "AND";
    case NodeType::Sand: return "SAND";
  }
  return "?";
}

std::optional<NodeType> node_type_from_name(const std::string& s) {
  if (s == "BAS") return NodeType::Bas;
  if (s == "OR") return NodeType::Or;
  if (s == "AND") return NodeType::And;
  if (s == "SAND") return NodeType::Sand;
  return std::nullopt;
}

AttackTree AttackTree::build(const std::vector<NodeSpec>& specs,
                             const std::optional<std::string>& declared_root) {
  AttackTree t;
  if (specs.empty()) fail(Errc::validation, "model has no nodes");

  for (const auto& s : specs) {
    if (s.id.empty()) fail(Errc::validation, "empty node id");
    if (t.index_.count(s.id)) fail(Errc::validation, "duplicate node id '" + s.id + "'");
    t.index_[s.id] = static_cast<uint32_t>(t.nodes_.size());
    t.nodes_.push_back(Node{s.id, s.type, {}, {}});
  }

  for (std::size_t i = 0; i < specs.size(); ++i) {
    const auto& s = specs[i];
    Node& n = t.nodes_[i];
    if (s.type == NodeType::Bas) {
      if (!s.children.empty())
        fail(Errc::validation, "BAS '" + s.id + "' must not have children");
      continue;
    }
    if (s.children.empty())
      fail(Errc::validation, std::string(node_type_name(s.type)) + " gate '" + s.id +
                                 "' has no children");
    if (s.children.size() < 2)
      fail(Errc::validation, std::string(node_type_name(s.type)) + " gate '" + s.id +
                                 "' needs at least 2 children");
    std::set<std::string> seen;
    for (const auto& c : s.children) {
      auto it = t.index_.find(c);
      if (it == t.index_.end())
        fail(Errc::validation, "unknown child id '" + c + "' under '" + s.id + "'");
      if (!seen.insert(c).second)
        fail(Errc::validation, "duplicate edge from '" + s.id + "' to '" + c + "'");
      n.children.push_back(it->second);
      t.nodes_[it->second].parents.push_back(static_cast<uint32_t>(i));
    }
  }

  // acyclicity via DFS coloring
  {
    std::vector<int> color(t.nodes_.size(), 0);
    std::function<void(uint32_t)> visit = [&](uint32_t v) {
      color[v] = 1;
      for (uint32_t c : t.nodes_[v].children) {
        if (color[c] == 1)
          fail(Errc::validation, "cycle through node '" + t.nodes_[c].id + "'");
        if (color[c] == 0) visit(c);
      }
      color[v] = 2;
    };
    for (uint32_t v = 0; v < t.nodes_.size(); ++v)
      if (color[v] == 0) visit(v);
  }

  std::vector<uint32_t> roots;
  for (uint32_t v = 0; v < t.nodes_.size(); ++v)
    if (t.nodes_[v].parents.empty()) roots.push_back(v);
  if (roots.empty()) fail(Errc::validation, "cycle: every node has a parent");
  if (roots.size() > 1) {
    std::string ids;
    for (uint32_t v : roots) ids += (ids.empty() ? "" : ", ") + t.nodes_[v].id;
    fail(Errc::validation, "multiple roots: " + ids);
  }
  t.root_ = roots[0];
  if (declared_root && *declared_root != t.nodes_[t.root_].id)
    fail(Errc::validation, "declared root '" + *declared_root + "' does not match inferred root '" +
                               t.nodes_[t.root_].id + "'");

  t.bas_index_.assign(t.nodes_.size(), ~0u);
  for (uint32_t v = 0; v < t.nodes_.size(); ++v) {
    if (t.nodes_[v].type == NodeType::Bas) {
      t.bas_index_[v] = static_cast<uint32_t>(t.bas_nodes_.size());
      t.bas_nodes_.push_back(v);
    }
  }
  return t;
}

uint32_t AttackTree::node_index(const std::string& id) const {
  auto it = index_.find(id);
  if (it == index_.end()) fail(Errc::validation, "unknown node id '" + id + "'");
  return it->second;
}

std::optional<uint32_t> AttackTree::find_node(const std::string& id) const {
  auto it = index_.find(id);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

std::vector<std::string> AttackTree::bas_ids() const {
  std::vector<std::string> out;
  out.reserve(bas_nodes_.size());
  for (uint32_t v : bas_nodes_) out.push_back(nodes_[v].id);
  return out;
}

uint32_t AttackTree::bas_index(uint32_t node) const {
  if (bas_index_[node] == ~0u) fail(Errc::internal, "node is not a BAS");
  return bas_index_[node];
}

StructureKind AttackTree::structure_kind() const {
  StructureKind k;
  k.tree_structured = true;
  k.is_static = true;
  for (const auto& n : nodes_) {
    if (n.parents.size() > 1) k.tree_structured = false;
    if (n.type == NodeType::Sand) k.is_static = false;
  }
  return k;
}

std::set<uint32_t> AttackTree::bas_descendant_nodes(uint32_t v) const {
  std::set<uint32_t> out;
  std::vector<uint32_t> stk{v};
  std::vector<bool> seen(nodes_.size(), false);
  while (!stk.empty()) {
    uint32_t u = stk.back();
    stk.pop_back();
    if (seen[u]) continue;
    seen[u] = true;
    if (nodes_[u].type == NodeType::Bas) out.insert(u);
    for (uint32_t c : nodes_[u].children) stk.push_back(c);
  }
  return out;
}

std::set<std::string> AttackTree::bas_descendants(const std::string& id) const {
  std::set<std::string> out;
  for (uint32_t v : bas_descendant_nodes(node_index(id))) out.insert(nodes_[v].id);
  return out;
}

const std::vector<uint32_t>& AttackTree::bas_desc_masks() const {
  if (!desc_masks_.empty()) return desc_masks_;
  if (bas_nodes_.size() > 32)
    fail(Errc::cap_exceeded, "BAS bitmask semantics limited to 32 basic attack steps");
  desc_masks_.assign(nodes_.size(), 0);
  for (uint32_t v : topo_bottom_up()) {
    uint32_t m = 0;
    if (nodes_[v].type == NodeType::Bas) m = 1u << bas_index_[v];
    for (uint32_t c : nodes_[v].children) m |= desc_masks_[c];
    desc_masks_[v] = m;
  }
  return desc_masks_;
}

std::set<uint32_t> AttackTree::descendants(uint32_t v) const {
  std::set<uint32_t> out;
  std::vector<uint32_t> stk{v};
  while (!stk.empty()) {
    uint32_t u = stk.back();
    stk.pop_back();
    if (!out.insert(u).second) continue;
    for (uint32_t c : nodes_[u].children) stk.push_back(c);
  }
  return out;
}

std::vector<uint32_t> AttackTree::topo_bottom_up() const {
  std::vector<uint32_t> order;
  order.reserve(nodes_.size());
  std::vector<bool> done(nodes_.size(), false);
  std::function<void(uint32_t)> visit = [&](uint32_t v) {
    if (done[v]) return;
    done[v] = true;
    for (uint32_t c : nodes_[v].children) visit(c);
    order.push_back(v);
  };
  visit(root_);
  return order;
}

std::vector<uint32_t> AttackTree::dfs_bas_order() const {
  std::vector<uint32_t> order;
  std::vector<bool> seen(nodes_.size(), false);
  std::function<void(uint32_t)> visit = [&](uint32_t v) {
    if (seen[v]) return;
    seen[v] = true;
    if (nodes_[v].type == NodeType::Bas) order.push_back(v);
    for (uint32_t c : nodes_[v].children) visit(c);
  };
  visit(root_);
  return order;
}

std::vector<NodeSpec> AttackTree::to_specs() const {
  std::vector<NodeSpec> out;
  out.reserve(nodes_.size());
  for (const auto& n : nodes_) {
    NodeSpec s;
    s.id = n.id;
    s.type = n.type;
    for (uint32_t c : n.children) s.children.push_back(nodes_[c].id);
    out.push_back(std::move(s));
  }
  return out;
}

}  // namespace atm
