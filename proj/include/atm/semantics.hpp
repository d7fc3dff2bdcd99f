#pragma once

#include <cstdint>
#include <vector>

#include "atm/attack_tree.hpp"
#include "atm/domain.hpp"
#include "atm/model_io.hpp"
#include "atm/value.hpp"

namespace atm {

// Attacks are bitmasks over the tree's BAS enumeration.
using Mask = uint32_t;

// A partially ordered attack: carrier plus a transitively closed strict
// order given as successor bitmasks (succ[i] = everything that must come
// after BAS i).
struct Poset {
  Mask bas = 0;
  std::vector<Mask> succ;

  std::vector<std::pair<uint32_t, uint32_t>> pairs() const;
};

bool poset_eq(const Poset& a, const Poset& b);
bool poset_le(const Poset& a, const Poset& b);  // carrier and order both contained
int poset_cmp(const Poset& a, const Poset& b);  // canonical, for sorting

// Transitive closure in place; returns false if a reflexive pair appears
// (the relation is not a strict partial order).
bool close_strict(std::vector<Mask>& succ);

inline constexpr unsigned kSatEnumCap = 20;       // subsets: 2^20
inline constexpr unsigned kDatFullEnumCap = 9;    // poset space blows up fast
inline constexpr unsigned kDatOracleWarnBas = 14;

bool structure_function_sat(const AttackTree& t, Mask attack, uint32_t node);
bool structure_function_dat(const AttackTree& t, const Poset& attack, uint32_t node);

std::vector<Mask> successful_attacks_sat(const AttackTree& t);
std::vector<Mask> minimal_attacks_sat(const AttackTree& t);

// Exact minimal poset attacks, computed bottom-up: per node and carrier the
// minimal sufficient orders are synthesised with the union/closure (AND) and
// ordered-product (SAND) combinators, then globally minimised at the root.
std::vector<Poset> minimal_attacks_dat(const AttackTree& t,
                                       std::vector<std::string>* warnings = nullptr);

// Independent exhaustive route: enumerates every carrier and every
// combination of SAND-imposed order products, validates with the structure
// function, and minimises. Used to cross-check minimal_attacks_dat.
std::vector<Poset> minimal_attacks_dat_by_enumeration(const AttackTree& t);

// Literal enumeration of the whole attack space (every carrier, every strict
// partial order). Exponential; capped at kDatFullEnumCap.
std::vector<Poset> successful_attacks_dat(const AttackTree& t);

std::vector<Poset> minimal_elements(std::vector<Poset> suite);

// All maximal chains (via the cover relation) as sequences of BAS indices.
std::vector<std::vector<uint32_t>> maximal_chains(const Poset& attack);

struct MetricResult {
  bool satisfiable = true;
  Value value;
};

using Attribution = std::vector<Value>;  // indexed by BAS position

Attribution lift_attribution(const AttackTree& t, const RawAttribution& raw,
                             const AttributeDomain& d);

MetricResult metric_from_suite_sat(const std::vector<Mask>& suite, const Attribution& attr,
                                   const AttributeDomain& d);
MetricResult metric_from_suite_dat(const std::vector<Poset>& suite, const Attribution& attr,
                                   const AttributeDomain& d);

Rat total_probability_oracle(const AttackTree& t, const std::vector<Rat>& prob);

std::vector<Mask> mask_bits(Mask m);

}  // namespace atm
