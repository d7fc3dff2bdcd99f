#pragma once

#include <cstdint>
#include <string>
#include <unordered_map>
#include <vector>

#include "atm/attack_tree.hpp"
#include "atm/domain.hpp"
#include "atm/semantics.hpp"

namespace atm {

// Ordered list of BAS ids; position is the BDD level.
using VariableOrder = std::vector<std::string>;

struct BddNode {
  uint32_t var;  // level; kTerminalVar for the two terminals
  uint32_t low;
  uint32_t high;
};

inline constexpr uint32_t kTerminalVar = 0xffffffffu;
inline constexpr uint32_t kFalseId = 0;
inline constexpr uint32_t kTrueId = 1;

// A reduced ordered BDD: compact node array with the two terminals at
// indices 0 and 1, labels strictly increasing towards the terminals, no
// redundant tests, and structurally unique nonterminals. Immutable.
struct Bdd {
  std::vector<BddNode> nodes;
  uint32_t root = kFalseId;
  VariableOrder order;              // level -> BAS id
  std::vector<uint32_t> level_bas;  // level -> BAS index in the source tree

  std::size_t node_count() const { return nodes.size(); }
  std::size_t nonterminal_count() const { return nodes.size() - 2; }
};

// Hash-consing BDD workspace: unique table plus an apply cache. Only used
// while constructing; the finished Bdd is extracted with finish().
class BddBuilder {
 public:
  explicit BddBuilder(std::size_t var_count);

  uint32_t false_id() const { return kFalseId; }
  uint32_t true_id() const { return kTrueId; }
  uint32_t var(uint32_t level);  // the single-variable function
  uint32_t mk(uint32_t level, uint32_t low, uint32_t high);
  uint32_t apply_or(uint32_t a, uint32_t b);
  uint32_t apply_and(uint32_t a, uint32_t b);

  // Restricts to minimal satisfying sets; sound for the monotone functions
  // attack trees produce.
  uint32_t minimal_solutions(uint32_t f);

  // Extracts the subgraph reachable from root into a compact Bdd.
  Bdd finish(uint32_t root, VariableOrder order, std::vector<uint32_t> level_bas) const;

 private:
  uint32_t level_of(uint32_t n) const;
  uint32_t apply(int op, uint32_t a, uint32_t b);
  uint32_t without(uint32_t a, uint32_t b);
  bool empty_set_satisfies(uint32_t f) const;

  struct Node {
    uint32_t var, low, high;
  };
  std::vector<Node> nodes_;
  std::size_t var_count_;
  std::unordered_map<uint64_t, uint32_t> unique_;
  std::unordered_map<uint64_t, uint32_t> cache_;  // op-tagged binary cache
  std::unordered_map<uint32_t, uint32_t> minsol_cache_;
};

VariableOrder default_order(const AttackTree& t);
VariableOrder order_from_ids(const AttackTree& t, const std::vector<std::string>& ids);

Bdd build_bdd(const AttackTree& t, const VariableOrder& order);

// BDD of the minimal attacks of the same tree (prime implicants).
Bdd minimal_solutions(const Bdd& b);

// Memoised bottom-up over the BDD; needs an absorbing unital domain. The
// absorbing check can be bypassed for forced (deliberately unsound) runs.
Value bu_bdd(const Bdd& b, const Attribution& attr, const AttributeDomain& d,
             bool enforce_absorbing = true);

// The k best metric values over minimal attacks, best first. Needs a
// linearly ordered domain with a conjunction neutral.
std::vector<Value> ktop_bdd(const Bdd& b, const Attribution& attr, const AttributeDomain& d,
                            unsigned k);

Rat total_probability(const Bdd& b, const std::vector<Rat>& prob);

// Attacks read off the root-to-true paths (high-edge labels), as BAS masks.
std::vector<Mask> bdd_top_paths(const Bdd& b, std::size_t cap = 1u << 20);

BigInt count_top_paths(const Bdd& b);

std::string export_dot(const Bdd& b);

}  // namespace atm
