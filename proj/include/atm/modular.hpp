#pragma once

#include <functional>
#include <map>
#include <optional>

#include "atm/attack_tree.hpp"
#include "atm/domain.hpp"
#include "atm/semantics.hpp"

namespace atm {

// Attribution already lifted into a domain's universe, keyed by BAS id so it
// survives contraction.
using LiftedAttr = std::map<std::string, Value>;

LiftedAttr lift_by_id(const AttackTree& t, const RawAttribution& raw, const AttributeDomain& d);
Attribution index_attribution(const AttackTree& t, const LiftedAttr& attr);

// A node is a module when nothing outside its subDAG points into it except
// through the node itself.
bool is_module(const AttackTree& t, uint32_t v);

// All modules (non-BAS), descendants before ancestors; always contains the
// root.
std::vector<uint32_t> find_modules(const AttackTree& t);

// The subDAG rooted at v as a standalone validated tree.
AttackTree subtree(const AttackTree& t, uint32_t v);

// Replaces the module's subDAG by a fresh BAS carrying the module's id and
// the given metric value.
std::pair<AttackTree, LiftedAttr> contract(const AttackTree& t, uint32_t v, const Value& value,
                                           const LiftedAttr& attr);

// Removes BAS that can never be attacked: OR branches that die are dropped
// (splicing single-child gates), AND/SAND gates with a dead child die with
// it. Returns nothing when the root itself dies.
std::optional<AttackTree> prune_dead_bas(const AttackTree& t, const std::set<std::string>& dead);

struct ModularOutcome {
  MetricResult metric;
  bool unsat_rewrite_applied = false;
  std::vector<std::string> module_ids;  // evaluation order
};

using InnerAlgorithm =
    std::function<MetricResult(const AttackTree&, const LiftedAttr&, const AttributeDomain&)>;

// Evaluates modules smallest-first, contracting each into a BAS, until the
// root's metric remains. Unsatisfiable module values (dynamic DAG modules)
// are handled by pruning the dead BAS before continuing.
ModularOutcome modular_metric(const AttackTree& t, const LiftedAttr& attr,
                              const AttributeDomain& d, const InnerAlgorithm& inner);

}  // namespace atm
