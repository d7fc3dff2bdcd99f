#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "atm/value.hpp"

namespace atm {

enum class Orientation { Min, Max };

// An attribute domain: a value universe with a disjunctive and a conjunctive
// operator, an optional sequential operator for dynamic domains, optional
// neutral elements, and algebraic flags. Values and domains are immutable;
// operator application is pure.
struct AttributeDomain {
  using BinOp = std::function<Value(const Value&, const Value&)>;
  using Cmp = std::function<int(const Value&, const Value&)>;

  std::string name;
  BinOp disj;  // ▽
  BinOp conj;  // △
  BinOp seq;   // ▷, only for dynamic domains

  std::optional<Value> one_disj;  // neutral of ▽
  std::optional<Value> one_conj;  // neutral of △

  bool absorbing = false;
  bool idempotent = false;
  bool unital = false;
  bool dynamic = false;

  // Oriented linear order: before(a, b) < 0 means a is strictly better.
  // Max-oriented domains carry the inverted numeric order here.
  bool linear = false;
  Cmp before;
  Orientation orientation = Orientation::Min;

  // Checks an attribution value for this domain; throws on violations.
  std::function<void(const Value&)> validate;
  // Lifts a raw attribution value (point number or interval tuple) into the
  // domain universe.
  std::function<Value(const Value&)> lift;
  // Lift by BAS identity; set only for the minimal-size-attack domain.
  std::function<Value(const std::string&)> lift_bas;

  Value apply_disj(const Value& a, const Value& b) const { return disj(a, b); }
  Value apply_conj(const Value& a, const Value& b) const { return conj(a, b); }
  Value apply_seq(const Value& a, const Value& b) const { return seq(a, b); }
};

extern const std::vector<std::string> kBuiltinDomainNames;

// Built-in domains. "min-attack" needs the BAS enumeration of the tree it
// will run on.
AttributeDomain builtin_domain(const std::string& name,
                               const std::vector<std::string>* bas = nullptr);

// Domain from a linearly ordered semigroup: the disjunction becomes the
// oriented minimum. Monotonicity of conj (and seq) w.r.t. the order is
// sample-checked against `samples` and violations throw.
AttributeDomain losg_domain(const std::string& name, AttributeDomain::Cmp ascending,
                            AttributeDomain::BinOp conj, AttributeDomain::BinOp seq,
                            Orientation orientation, std::optional<Value> one_conj,
                            const std::vector<Value>& samples);

// Multisets of at most k base values; the disjunction keeps the k best.
AttributeDomain ktop_domain(const AttributeDomain& base, unsigned k);

// Antichains of component-value vectors under the product order.
AttributeDomain antichain_domain(const std::vector<AttributeDomain>& components);

// Pairs (lower, upper) evaluated componentwise.
AttributeDomain interval_domain(const AttributeDomain& base);

// Appendix-style domain whose metric is a successful attack of minimal size.
AttributeDomain min_attack_domain(const std::vector<std::string>& bas);

// Adjoins a sequential sink to a static domain so any static tree can be
// evaluated under dynamic semantics with an unchanged metric.
AttributeDomain sat_as_dat_domain(const AttributeDomain& base);

// Lifting helpers matching the composite constructors.
Value ktop_lift(const AttributeDomain& base, const Value& raw);
Value antichain_lift(const std::vector<AttributeDomain>& components,
                     const std::vector<Value>& raw_components);

// Samples the declared laws on random triples drawn from `samples`; returns
// human-readable violations (empty means all checks passed).
std::vector<std::string> check_domain_laws(const AttributeDomain& d,
                                           const std::vector<Value>& samples,
                                           unsigned triples = 1000, uint32_t seed = 1);

// Convenient sample pools for the law checker.
std::vector<Value> numeric_samples(const AttributeDomain& d);

}  // namespace atm
