#include "atm/modular.hpp"

#include <algorithm>

#include "atm/errors.hpp"

namespace atm {

LiftedAttr lift_by_id(const AttackTree& t, const RawAttribution& raw, const AttributeDomain& d) {
  LiftedAttr out;
  for (const std::string& id : t.bas_ids()) {
    if (d.lift_bas) {
      out[id] = d.lift_bas(id);
      continue;
    }
    auto it = raw.find(id);
    if (it == raw.end()) fail(Errc::validation, "attribution missing BAS '" + id + "'");
    out[id] = d.lift ? d.lift(it->second) : it->second;
  }
  return out;
}

Attribution index_attribution(const AttackTree& t, const LiftedAttr& attr) {
  Attribution out;
  out.reserve(t.bas_count());
  for (const std::string& id : t.bas_ids()) {
    auto it = attr.find(id);
    if (it == attr.end()) fail(Errc::validation, "attribution missing BAS '" + id + "'");
    out.push_back(it->second);
  }
  return out;
}

bool is_module(const AttackTree& t, uint32_t v) {
  if (t.is_bas(v)) return false;
  const std::set<uint32_t> inside = t.descendants(v);
  for (uint32_t u : inside) {
    if (u == v) continue;
    for (uint32_t p : t.parents_of(u))
      if (!inside.count(p)) return false;
  }
  return true;
}

std::vector<uint32_t> find_modules(const AttackTree& t) {
  std::vector<uint32_t> out;
  for (uint32_t v : t.topo_bottom_up())
    if (is_module(t, v)) out.push_back(v);
  return out;
}

AttackTree subtree(const AttackTree& t, uint32_t v) {
  const std::set<uint32_t> keep = t.descendants(v);
  std::vector<NodeSpec> specs;
  for (const NodeSpec& s : t.to_specs()) {
    uint32_t idx = t.node_index(s.id);
    if (keep.count(idx)) specs.push_back(s);
  }
  return AttackTree::build(specs);
}

std::pair<AttackTree, LiftedAttr> contract(const AttackTree& t, uint32_t v, const Value& value,
                                           const LiftedAttr& attr) {
  if (!is_module(t, v)) fail(Errc::usage, "node '" + t.id_of(v) + "' is not a module");
  if (v == t.root())
    fail(Errc::usage, "contracting the root leaves no tree; its metric is the final answer");
  std::set<uint32_t> internal = t.descendants(v);
  internal.erase(v);

  std::vector<NodeSpec> specs;
  for (const NodeSpec& s : t.to_specs()) {
    const uint32_t idx = t.node_index(s.id);
    if (internal.count(idx)) continue;
    NodeSpec copy = s;
    if (idx == v) {
      copy.type = NodeType::Bas;
      copy.children.clear();
    }
    specs.push_back(std::move(copy));
  }
  AttackTree contracted = AttackTree::build(specs);

  LiftedAttr out;
  for (const std::string& id : contracted.bas_ids()) {
    if (id == t.id_of(v)) {
      out[id] = value;
    } else {
      auto it = attr.find(id);
      if (it == attr.end()) fail(Errc::validation, "attribution missing BAS '" + id + "'");
      out[id] = it->second;
    }
  }
  return {std::move(contracted), std::move(out)};
}

namespace {

enum class Life { Alive, Dead };

}  // namespace

std::optional<AttackTree> prune_dead_bas(const AttackTree& t, const std::set<std::string>& dead) {
  std::vector<Life> life(t.node_count(), Life::Alive);
  for (uint32_t v : t.topo_bottom_up()) {
    switch (t.type_of(v)) {
      case NodeType::Bas:
        life[v] = dead.count(t.id_of(v)) ? Life::Dead : Life::Alive;
        break;
      case NodeType::Or: {
        life[v] = Life::Dead;
        for (uint32_t c : t.children_of(v))
          if (life[c] == Life::Alive) life[v] = Life::Alive;
        break;
      }
      default: {
        life[v] = Life::Alive;
        for (uint32_t c : t.children_of(v))
          if (life[c] == Life::Dead) life[v] = Life::Dead;
        break;
      }
    }
  }
  if (life[t.root()] == Life::Dead) return std::nullopt;

  // rebuild: drop dead OR branches, splice gates left with one child, and
  // dedupe repeated children splicing may create; a SAND with a repeated
  // child can never succeed, so it dies too
  std::vector<std::optional<std::string>> mapped(t.node_count());
  bool changed = true;
  std::function<std::optional<std::string>(uint32_t)> rebuild;
  std::vector<NodeSpec> specs;
  std::set<std::string> emitted;

  rebuild = [&](uint32_t v) -> std::optional<std::string> {
    if (life[v] == Life::Dead) return std::nullopt;
    if (mapped[v]) return mapped[v];
    if (t.is_bas(v)) {
      if (!emitted.count(t.id_of(v))) {
        specs.push_back(NodeSpec{t.id_of(v), NodeType::Bas, {}});
        emitted.insert(t.id_of(v));
      }
      mapped[v] = t.id_of(v);
      return mapped[v];
    }
    std::vector<std::string> kids;
    for (uint32_t c : t.children_of(v)) {
      auto k = rebuild(c);
      if (!k) {
        if (t.type_of(v) == NodeType::Or) continue;
        // a dead child kills AND/SAND gates; may cascade upwards
        life[v] = Life::Dead;
        changed = true;
        return std::nullopt;
      }
      if (t.type_of(v) != NodeType::Sand &&
          std::find(kids.begin(), kids.end(), *k) != kids.end())
        continue;  // OR/AND duplicates are idempotent
      kids.push_back(*k);
    }
    if (t.type_of(v) == NodeType::Sand) {
      std::set<std::string> distinct(kids.begin(), kids.end());
      if (distinct.size() != kids.size()) {
        // a repeated SAND child would have to precede itself
        life[v] = Life::Dead;
        changed = true;
        return std::nullopt;
      }
    }
    if (kids.empty()) {
      life[v] = Life::Dead;
      changed = true;
      return std::nullopt;
    }
    if (kids.size() == 1) {
      mapped[v] = kids[0];
      return mapped[v];
    }
    if (!emitted.count(t.id_of(v))) {
      specs.push_back(NodeSpec{t.id_of(v), t.type_of(v), kids});
      emitted.insert(t.id_of(v));
    }
    mapped[v] = t.id_of(v);
    return mapped[v];
  };

  // late SAND deaths can cascade, so iterate until stable
  while (changed) {
    changed = false;
    specs.clear();
    emitted.clear();
    std::fill(mapped.begin(), mapped.end(), std::nullopt);
    auto root = rebuild(t.root());
    if (!root) return std::nullopt;
    if (!changed) {
      // keep declaration order of the original model
      std::vector<NodeSpec> ordered;
      for (const NodeSpec& s : t.to_specs()) {
        auto it = std::find_if(specs.begin(), specs.end(),
                               [&](const NodeSpec& x) { return x.id == s.id; });
        if (it != specs.end()) ordered.push_back(*it);
      }
      return AttackTree::build(ordered);
    }
  }
  return std::nullopt;  // unreachable
}

ModularOutcome modular_metric(const AttackTree& t, const LiftedAttr& attr,
                              const AttributeDomain& d, const InnerAlgorithm& inner) {
  ModularOutcome out;
  AttackTree cur = t;
  LiftedAttr cur_attr = attr;
  bool done = false;

  while (!done) {
    if (cur.node_count() == 1 && cur.is_bas(cur.root())) {
      out.metric = MetricResult{true, cur_attr.at(cur.id_of(cur.root()))};
      break;
    }
    std::vector<uint32_t> mods = find_modules(cur);
    bool progressed = false;
    for (uint32_t v : mods) {
      out.module_ids.push_back(cur.id_of(v));
      if (v == cur.root()) {
        out.metric = inner(cur, cur_attr, d);
        done = true;
        progressed = true;
        break;
      }
      AttackTree sub = subtree(cur, v);
      MetricResult r = inner(sub, cur_attr, d);
      if (!r.satisfiable) {
        // the module can never be attacked: treat its BAS as dead and
        // restructure before continuing
        auto contracted = contract(cur, v, Value{}, cur_attr);
        out.unsat_rewrite_applied = true;
        auto pruned = prune_dead_bas(contracted.first, {cur.id_of(v)});
        if (!pruned) {
          out.metric = MetricResult{false, Value{}};
          done = true;
          progressed = true;
          break;
        }
        cur = std::move(*pruned);
        LiftedAttr next;
        for (const std::string& id : cur.bas_ids()) next[id] = contracted.second.at(id);
        cur_attr = std::move(next);
        progressed = true;
        break;  // module list is stale after a rewrite
      }
      auto contracted = contract(cur, v, r.value, cur_attr);
      cur = std::move(contracted.first);
      cur_attr = std::move(contracted.second);
      progressed = true;
      break;  // recompute modules against the contracted tree
    }
    if (!progressed) fail(Errc::internal, "modular analysis made no progress");
  }
  return out;
}

}  // namespace atm
