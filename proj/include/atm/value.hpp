#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <variant>
#include <vector>

#include "atm/rational.hpp"

namespace atm {

struct Value;

// Non-negative rational extended with +infinity.
struct ExtNum {
  bool inf = false;
  Rat num{};
};

// Multiset of values, kept sorted canonically (k-top universe).
struct ValueMultiset {
  std::vector<Value> items;
};

// Positional vector of values (intervals, Pareto component vectors).
struct ValueTuple {
  std::vector<Value> items;
};

// Set of pairwise incomparable tuples, kept sorted canonically.
struct ValueAntichain {
  std::vector<Value> items;
};

// Multiset over the BAS of a fixed tree, plus a top sentinel that acts as
// the neutral element of the disjunction.
struct BasMultiset {
  bool top = false;
  std::vector<uint32_t> counts;
  std::shared_ptr<const std::vector<std::string>> names;
};

// Sequential sink adjoined when a static domain is evaluated as a dynamic one.
struct Omega {};

struct Value {
  std::variant<ExtNum, ValueMultiset, ValueTuple, ValueAntichain, BasMultiset, Omega> v;

  Value() : v(ExtNum{}) {}
  template <class T>
  Value(T x) : v(std::move(x)) {}
};

Value num_value(const Rat& r);
Value num_value(long n);
Value inf_value();

bool is_num(const Value& x);
const ExtNum& as_num(const Value& x);  // fails unless ExtNum

// Canonical total order used for deduplication and stable printing; not the
// domain order.
int cmp_values(const Value& a, const Value& b);
bool operator==(const Value& a, const Value& b);
inline bool operator!=(const Value& a, const Value& b) { return !(a == b); }

std::string value_to_text(const Value& x);

}  // namespace atm
