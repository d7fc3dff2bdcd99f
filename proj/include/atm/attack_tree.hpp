#pragma once

#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <unordered_map>
#include <vector>

namespace atm {

enum class NodeType { Bas, Or, And, Sand };

const char* node_type_name(NodeType t);
std::optional<NodeType> node_type_from_name(const std::string& s);

struct NodeSpec {
  std::string id;
  NodeType type = NodeType::Bas;
  std::vector<std::string> children;
};

struct StructureKind {
  bool tree_structured = false;
  bool is_static = false;
};

// Validated attack tree: a connected rooted DAG of typed nodes with ordered
// children. Immutable after construction.
class AttackTree {
 public:
  // Validates and freezes the node list. `declared_root`, when present, must
  // match the inferred root.
  static AttackTree build(const std::vector<NodeSpec>& specs,
                          const std::optional<std::string>& declared_root = std::nullopt);

  std::size_t node_count() const { return nodes_.size(); }
  std::size_t bas_count() const { return bas_nodes_.size(); }
  uint32_t root() const { return root_; }

  const std::string& id_of(uint32_t v) const { return nodes_[v].id; }
  NodeType type_of(uint32_t v) const { return nodes_[v].type; }
  const std::vector<uint32_t>& children_of(uint32_t v) const { return nodes_[v].children; }
  const std::vector<uint32_t>& parents_of(uint32_t v) const { return nodes_[v].parents; }

  uint32_t node_index(const std::string& id) const;  // fails on unknown id
  std::optional<uint32_t> find_node(const std::string& id) const;

  // BAS enumeration in node-declaration order.
  const std::vector<uint32_t>& bas_nodes() const { return bas_nodes_; }
  std::vector<std::string> bas_ids() const;
  bool is_bas(uint32_t v) const { return nodes_[v].type == NodeType::Bas; }
  uint32_t bas_index(uint32_t node) const;  // position within bas_nodes()

  StructureKind structure_kind() const;
  bool tree_structured() const { return structure_kind().tree_structured; }
  bool is_static() const { return structure_kind().is_static; }

  // All BAS reachable from v; v itself when v is a BAS.
  std::set<std::string> bas_descendants(const std::string& id) const;
  std::set<uint32_t> bas_descendant_nodes(uint32_t v) const;

  // BAS descendants as bitmasks over bas_index; requires bas_count() <= 32.
  const std::vector<uint32_t>& bas_desc_masks() const;

  // All descendants of v, including v.
  std::set<uint32_t> descendants(uint32_t v) const;

  // Children-before-parents order over all nodes.
  std::vector<uint32_t> topo_bottom_up() const;

  // Depth-first left-to-right first-visit order of the BAS (node indices).
  std::vector<uint32_t> dfs_bas_order() const;

  std::vector<NodeSpec> to_specs() const;  // declaration order

 private:
  struct Node {
    std::string id;
    NodeType type;
    std::vector<uint32_t> children;
    std::vector<uint32_t> parents;
  };
  std::vector<Node> nodes_;
  std::unordered_map<std::string, uint32_t> index_;
  std::vector<uint32_t> bas_nodes_;
  std::vector<uint32_t> bas_index_;  // node -> bas position (or ~0)
  uint32_t root_ = 0;
  mutable std::vector<uint32_t> desc_masks_;  // lazy
};

}  // namespace atm
