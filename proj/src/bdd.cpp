#include "atm/bdd.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <sstream>
#include <unordered_map>

#include "atm/errors.hpp"

namespace atm {

namespace {
enum OpTag : uint64_t { kOpOr = 1, kOpAnd = 2, kOpWithout = 3 };
}

BddBuilder::BddBuilder(std::size_t var_count) : var_count_(var_count) {
  nodes_.push_back(Node{kTerminalVar, 0, 0});  // false
  nodes_.push_back(Node{kTerminalVar, 1, 1});  // true
}

uint32_t BddBuilder::level_of(uint32_t n) const { return nodes_[n].var; }

uint32_t BddBuilder::mk(uint32_t level, uint32_t low, uint32_t high) {
  if (low == high) return low;
  if (level >= nodes_[low].var || level >= nodes_[high].var)
    fail(Errc::internal, "variable order violated in BDD construction");
  if (nodes_.size() >= (1u << 24)) fail(Errc::cap_exceeded, "BDD grew past 16M nodes");
  const uint64_t key = (static_cast<uint64_t>(level) << 48) |
                       (static_cast<uint64_t>(low) << 24) | static_cast<uint64_t>(high);
  auto it = unique_.find(key);
  if (it != unique_.end()) return it->second;
  nodes_.push_back(Node{level, low, high});
  const uint32_t id = static_cast<uint32_t>(nodes_.size() - 1);
  unique_.emplace(key, id);
  return id;
}

uint32_t BddBuilder::var(uint32_t level) { return mk(level, kFalseId, kTrueId); }

uint32_t BddBuilder::apply(int op, uint32_t a, uint32_t b) {
  if (op == kOpOr) {
    if (a == kTrueId || b == kTrueId) return kTrueId;
    if (a == kFalseId) return b;
    if (b == kFalseId) return a;
    if (a == b) return a;
  } else {
    if (a == kFalseId || b == kFalseId) return kFalseId;
    if (a == kTrueId) return b;
    if (b == kTrueId) return a;
    if (a == b) return a;
  }
  if (a > b) std::swap(a, b);
  const uint64_t key = (static_cast<uint64_t>(op) << 60) ^ (static_cast<uint64_t>(a) << 30) ^ b;
  auto it = cache_.find(key);
  if (it != cache_.end()) return it->second;

  const uint32_t va = level_of(a), vb = level_of(b);
  const uint32_t v = std::min(va, vb);
  const uint32_t a0 = va == v ? nodes_[a].low : a;
  const uint32_t a1 = va == v ? nodes_[a].high : a;
  const uint32_t b0 = vb == v ? nodes_[b].low : b;
  const uint32_t b1 = vb == v ? nodes_[b].high : b;
  const uint32_t r = mk(v, apply(op, a0, b0), apply(op, a1, b1));
  cache_.emplace(key, r);
  return r;
}

uint32_t BddBuilder::apply_or(uint32_t a, uint32_t b) { return apply(kOpOr, a, b); }
uint32_t BddBuilder::apply_and(uint32_t a, uint32_t b) { return apply(kOpAnd, a, b); }

bool BddBuilder::empty_set_satisfies(uint32_t f) const {
  while (nodes_[f].var != kTerminalVar) f = nodes_[f].low;
  return f == kTrueId;
}

// Drops from a's solution sets every set that already satisfies b.
uint32_t BddBuilder::without(uint32_t a, uint32_t b) {
  if (a == kFalseId || b == kTrueId) return kFalseId;
  if (b == kFalseId) return a;
  if (a == kTrueId) return empty_set_satisfies(b) ? kFalseId : kTrueId;
  const uint64_t key = (static_cast<uint64_t>(kOpWithout) << 60) ^
                       (static_cast<uint64_t>(a) << 30) ^ b;
  auto it = cache_.find(key);
  if (it != cache_.end()) return it->second;

  const uint32_t va = level_of(a), vb = level_of(b);
  uint32_t r;
  if (va == vb) {
    r = mk(va, without(nodes_[a].low, nodes_[b].low), without(nodes_[a].high, nodes_[b].high));
  } else if (va < vb) {
    r = mk(va, without(nodes_[a].low, b), without(nodes_[a].high, b));
  } else {
    // sets from a never contain b's top variable
    r = without(a, nodes_[b].low);
  }
  cache_.emplace(key, r);
  return r;
}

uint32_t BddBuilder::minimal_solutions(uint32_t f) {
  if (f == kFalseId || f == kTrueId) return f;
  auto it = minsol_cache_.find(f);
  if (it != minsol_cache_.end()) return it->second;
  const uint32_t lo = minimal_solutions(nodes_[f].low);
  const uint32_t hi = minimal_solutions(nodes_[f].high);
  const uint32_t r = mk(nodes_[f].var, lo, without(hi, nodes_[f].low));
  minsol_cache_.emplace(f, r);
  return r;
}

Bdd BddBuilder::finish(uint32_t root, VariableOrder order, std::vector<uint32_t> level_bas) const {
  Bdd out;
  out.order = std::move(order);
  out.level_bas = std::move(level_bas);
  out.nodes.push_back(BddNode{kTerminalVar, kFalseId, kFalseId});
  out.nodes.push_back(BddNode{kTerminalVar, kTrueId, kTrueId});
  std::unordered_map<uint32_t, uint32_t> remap{{kFalseId, kFalseId}, {kTrueId, kTrueId}};
  std::function<uint32_t(uint32_t)> copy = [&](uint32_t n) -> uint32_t {
    auto it = remap.find(n);
    if (it != remap.end()) return it->second;
    const uint32_t lo = copy(nodes_[n].low);
    const uint32_t hi = copy(nodes_[n].high);
    out.nodes.push_back(BddNode{nodes_[n].var, lo, hi});
    const uint32_t id = static_cast<uint32_t>(out.nodes.size() - 1);
    remap.emplace(n, id);
    return id;
  };
  out.root = copy(root);
  return out;
}

VariableOrder default_order(const AttackTree& t) {
  VariableOrder order;
  for (uint32_t v : t.dfs_bas_order()) order.push_back(t.id_of(v));
  return order;
}

VariableOrder order_from_ids(const AttackTree& t, const std::vector<std::string>& ids) {
  if (ids.size() != t.bas_count())
    fail(Errc::validation, "variable order must name every BAS exactly once");
  std::set<std::string> seen;
  for (const auto& id : ids) {
    auto node = t.find_node(id);
    if (!node || !t.is_bas(*node))
      fail(Errc::validation, "variable order entry '" + id + "' is not a BAS");
    if (!seen.insert(id).second)
      fail(Errc::validation, "variable order repeats '" + id + "'");
  }
  return ids;
}

Bdd build_bdd(const AttackTree& t, const VariableOrder& order) {
  if (!t.is_static()) fail(Errc::usage, "BDD encoding needs a static model");
  order_from_ids(t, order);  // validate permutation

  std::unordered_map<std::string, uint32_t> level;
  for (uint32_t i = 0; i < order.size(); ++i) level[order[i]] = i;

  BddBuilder builder(order.size());
  std::vector<uint32_t> memo(t.node_count(), ~0u);
  std::function<uint32_t(uint32_t)> encode = [&](uint32_t v) -> uint32_t {
    if (memo[v] != ~0u) return memo[v];
    uint32_t r;
    switch (t.type_of(v)) {
      case NodeType::Bas:
        r = builder.var(level.at(t.id_of(v)));
        break;
      case NodeType::Or: {
        const auto& ch = t.children_of(v);
        r = encode(ch[0]);
        for (std::size_t i = 1; i < ch.size(); ++i) r = builder.apply_or(r, encode(ch[i]));
        break;
      }
      default: {
        const auto& ch = t.children_of(v);
        r = encode(ch[0]);
        for (std::size_t i = 1; i < ch.size(); ++i) r = builder.apply_and(r, encode(ch[i]));
        break;
      }
    }
    memo[v] = r;
    return r;
  };
  const uint32_t root = encode(t.root());

  std::vector<uint32_t> level_bas;
  for (const auto& id : order) level_bas.push_back(t.bas_index(t.node_index(id)));
  return builder.finish(root, order, std::move(level_bas));
}

Bdd minimal_solutions(const Bdd& b) {
  BddBuilder builder(b.order.size());
  std::vector<uint32_t> remap(b.nodes.size());
  remap[kFalseId] = kFalseId;
  remap[kTrueId] = kTrueId;
  // nodes were emitted children-first by finish(), so a linear pass works
  for (uint32_t i = 2; i < b.nodes.size(); ++i)
    remap[i] = builder.mk(b.nodes[i].var, remap[b.nodes[i].low], remap[b.nodes[i].high]);
  const uint32_t m = builder.minimal_solutions(remap[b.root]);
  return builder.finish(m, b.order, b.level_bas);
}

Value bu_bdd(const Bdd& b, const Attribution& attr, const AttributeDomain& d,
             bool enforce_absorbing) {
  if (!d.unital || !d.one_disj || !d.one_conj)
    fail(Errc::domain, "BDD fold needs neutral elements, domain '" + d.name + "' has none");
  if (enforce_absorbing && !d.absorbing)
    fail(Errc::domain, "BDD fold needs an absorbing domain, '" + d.name + "' is not");
  std::vector<Value> val(b.nodes.size());
  val[kFalseId] = *d.one_disj;
  val[kTrueId] = *d.one_conj;
  for (uint32_t i = 2; i < b.nodes.size(); ++i) {
    const BddNode& n = b.nodes[i];
    const Value& a = attr[b.level_bas[n.var]];
    val[i] = d.disj(val[n.low], d.conj(val[n.high], a));
  }
  return val[b.root];
}

std::vector<Value> ktop_bdd(const Bdd& b, const Attribution& attr, const AttributeDomain& d,
                            unsigned k) {
  if (k == 0) fail(Errc::usage, "k-top needs k >= 1");
  if (!d.linear || !d.before)
    fail(Errc::domain, "k-top needs a linearly ordered domain");
  if (!d.one_conj)
    fail(Errc::domain, "k-top needs a conjunction neutral in '" + d.name + "'");

  const Bdd m = minimal_solutions(b);
  auto better = [&](const Value& x, const Value& y) {
    int c = d.before(x, y);
    if (c != 0) return c < 0;
    return cmp_values(x, y) < 0;
  };
  // k best path weights per node, best first
  std::vector<std::vector<Value>> best(m.nodes.size());
  best[kTrueId] = {*d.one_conj};
  for (uint32_t i = 2; i < m.nodes.size(); ++i) {
    const BddNode& n = m.nodes[i];
    const Value& a = attr[m.level_bas[n.var]];
    std::vector<Value> acc = best[n.low];
    for (const Value& x : best[n.high]) acc.push_back(d.conj(x, a));
    std::stable_sort(acc.begin(), acc.end(), better);
    if (acc.size() > k) acc.resize(k);
    best[i] = std::move(acc);
  }
  return best[m.root];
}

Rat total_probability(const Bdd& b, const std::vector<Rat>& prob) {
  for (const Rat& p : prob)
    if (p < 0 || p > 1) fail(Errc::domain, "probability attribute must lie in [0, 1]");
  std::vector<Rat> pr(b.nodes.size(), 0);
  pr[kTrueId] = 1;
  for (uint32_t i = 2; i < b.nodes.size(); ++i) {
    const BddNode& n = b.nodes[i];
    const Rat& p = prob[b.level_bas[n.var]];
    pr[i] = (1 - p) * pr[n.low] + p * pr[n.high];
  }
  return pr[b.root];
}

std::vector<Mask> bdd_top_paths(const Bdd& b, std::size_t cap) {
  std::vector<Mask> out;
  std::function<void(uint32_t, Mask)> walk = [&](uint32_t n, Mask acc) {
    if (n == kFalseId) return;
    if (n == kTrueId) {
      if (out.size() >= cap) fail(Errc::cap_exceeded, "too many BDD paths to enumerate");
      out.push_back(acc);
      return;
    }
    walk(b.nodes[n].low, acc);
    walk(b.nodes[n].high, acc | (1u << b.level_bas[b.nodes[n].var]));
  };
  walk(b.root, 0);
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

BigInt count_top_paths(const Bdd& b) {
  std::vector<BigInt> c(b.nodes.size(), 0);
  c[kTrueId] = 1;
  for (uint32_t i = 2; i < b.nodes.size(); ++i)
    c[i] = c[b.nodes[i].low] + c[b.nodes[i].high];
  return b.root == kFalseId ? BigInt(0) : c[b.root];
}

std::string export_dot(const Bdd& b) {
  std::vector<bool> reach(b.nodes.size(), false);
  std::function<void(uint32_t)> mark = [&](uint32_t n) {
    if (reach[n]) return;
    reach[n] = true;
    if (b.nodes[n].var != kTerminalVar) {
      mark(b.nodes[n].low);
      mark(b.nodes[n].high);
    }
  };
  mark(b.root);

  // stable names: nonterminals in reverse emission order so the root is n0
  std::ostringstream os;
  os << "digraph bdd {\n";
  os << "  rankdir=TB;\n";
  if (reach[kFalseId]) os << "  t0 [label=\"0\", shape=box];\n";
  if (reach[kTrueId]) os << "  t1 [label=\"1\", shape=box];\n";
  auto name = [&](uint32_t n) -> std::string {
    if (n == kFalseId) return "t0";
    if (n == kTrueId) return "t1";
    return "n" + std::to_string(b.nodes.size() - 1 - n);
  };
  for (uint32_t i = static_cast<uint32_t>(b.nodes.size()); i-- > 2;) {
    if (!reach[i]) continue;
    const BddNode& n = b.nodes[i];
    os << "  " << name(i) << " [label=\"" << b.order[n.var] << "\", shape=circle];\n";
  }
  for (uint32_t i = static_cast<uint32_t>(b.nodes.size()); i-- > 2;) {
    if (!reach[i]) continue;
    const BddNode& n = b.nodes[i];
    os << "  " << name(i) << " -> " << name(n.low) << " [style=dashed];\n";
    os << "  " << name(i) << " -> " << name(n.high) << " [style=solid];\n";
  }
  os << "}\n";
  return os.str();
}

}  // namespace atm
