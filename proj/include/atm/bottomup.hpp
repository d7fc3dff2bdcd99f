#pragma once

#include <string>

#include "atm/attack_tree.hpp"
#include "atm/domain.hpp"
#include "atm/semantics.hpp"

namespace atm {

// Plain recursive fold over a static tree: OR becomes the disjunction, AND
// the conjunction, BAS the attribute. No sharing awareness; recomputes
// shared subtrees, which is exactly the documented miscomputation on DAGs.
Value bu_sat(const AttackTree& t, uint32_t node, const Attribution& attr,
             const AttributeDomain& d, std::size_t* op_count = nullptr);

// Same fold with per-node memoisation; the value is identical to bu_sat,
// each node is just folded once.
Value bu_sat_memo(const AttackTree& t, const Attribution& attr, const AttributeDomain& d);

// Dynamic fold: SAND becomes the sequential operator over the ordered
// children. Refuses DAG-structured input.
Value bu_dat(const AttackTree& t, uint32_t node, const Attribution& attr,
             const AttributeDomain& d, std::size_t* op_count = nullptr);

// Memoised fold on a static DAG; requires an idempotent absorbing domain.
Value bu_dag_idempotent(const AttackTree& t, const Attribution& attr, const AttributeDomain& d);

enum class Algo { Bu, BuIdempotentDag, Bdd, OracleEnum };

const char* algo_name(Algo a);

struct AlgorithmChoice {
  Algo algo;
  std::string reason;
};

// Picks the fastest algorithm whose correctness preconditions hold for the
// (structure, domain) pair.
AlgorithmChoice dispatch(const AttackTree& t, const AttributeDomain& d);

enum class Applicability { Ok, Forceable, Impossible };

struct AlgoCheck {
  Applicability level = Applicability::Ok;
  std::string reason;
};

// Classifies a requested algorithm: usable, usable-but-wrong (needs an
// explicit force), or not runnable at all.
AlgoCheck check_algorithm(const AttackTree& t, const AttributeDomain& d, Algo algo);

}  // namespace atm
