#pragma once

#include <map>
#include <string>

#include "atm/attack_tree.hpp"
#include "atm/value.hpp"

namespace atm {

// A raw attribution value: a point number (ExtNum) or an uncertainty
// interval (ValueTuple of two ExtNums, lower first).
using RawAttribution = std::map<std::string, Value>;  // BAS id -> value

struct Model {
  AttackTree tree;
  std::map<std::string, RawAttribution> attributions;
};

// Parses the JSON model format. Numbers become exact rationals; two-element
// arrays become intervals [L, U] with L <= U; the strings "inf" and "p/q"
// are accepted as values. Every attribution must cover every BAS.
Model parse_model(const std::string& json_text);

std::string serialize_model(const Model& m);

const RawAttribution& attribution_or_fail(const Model& m, const std::string& name);

}  // namespace atm
