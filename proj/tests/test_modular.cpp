#include <doctest.h>

#include <random>

#include "atm/bdd.hpp"
#include "atm/bottomup.hpp"
#include "atm/errors.hpp"
#include "atm/modular.hpp"
#include "testutil.hpp"

using namespace atm;
using namespace testutil;

namespace {

MetricResult dispatch_inner(const AttackTree& t, const LiftedAttr& a, const AttributeDomain& d) {
  AlgorithmChoice c = dispatch(t, d);
  Attribution attr = index_attribution(t, a);
  switch (c.algo) {
    case Algo::Bu:
      return {true, d.dynamic ? bu_dat(t, t.root(), attr, d) : bu_sat(t, t.root(), attr, d)};
    case Algo::BuIdempotentDag:
      return {true, bu_dag_idempotent(t, attr, d)};
    case Algo::Bdd:
      return {true, bu_bdd(build_bdd(t, default_order(t)), attr, d)};
    case Algo::OracleEnum:
      if (t.is_static()) return metric_from_suite_sat(minimal_attacks_sat(t), attr, d);
      return metric_from_suite_dat(minimal_attacks_dat(t), attr, d);
  }
  fail(Errc::internal, "unreachable");
}

MetricResult oracle_inner(const AttackTree& t, const LiftedAttr& a, const AttributeDomain& d) {
  return oracle_metric(t, index_attribution(t, a), d);
}

std::vector<std::string> module_ids(const AttackTree& t) {
  std::vector<std::string> out;
  for (uint32_t v : find_modules(t)) out.push_back(t.id_of(v));
  return out;
}

}  // namespace

TEST_CASE("modules of the worked models") {
  AttackTree td = load_model("td.json").tree;
  CHECK(module_ids(td) == std::vector<std::string>{"pickpocket"});

  AttackTree tp = load_model("tprime.json").tree;
  CHECK(module_ids(tp) == std::vector<std::string>{"v", "pickpocket"});

  AttackTree ts = load_model("ts.json").tree;
  CHECK(module_ids(ts) == std::vector<std::string>{"crypto", "pin"});
}

TEST_CASE("every inner node of a tree-structured model is a module") {
  std::mt19937 rng(301);
  for (int i = 0; i < 10; ++i) {
    GenOpts opt;
    opt.max_bas = 8;
    AttackTree t = random_tree(rng, opt);
    std::size_t inner = 0;
    for (uint32_t v = 0; v < t.node_count(); ++v)
      if (!t.is_bas(v)) ++inner;
    CHECK(find_modules(t).size() == inner);
  }
}

TEST_CASE("reported modules satisfy the subDAG-intersection condition") {
  std::mt19937 rng(303);
  for (int i = 0; i < 12; ++i) {
    GenOpts opt;
    opt.max_bas = 8;
    opt.dag = true;
    opt.dynamic_gates = i % 2 == 0;
    AttackTree t = random_tree(rng, opt);
    REQUIRE(t.node_count() <= 40);
    for (uint32_t v : find_modules(t)) {
      auto tv = t.descendants(v);
      for (uint32_t w = 0; w < t.node_count(); ++w) {
        auto tw = t.descendants(w);
        std::set<uint32_t> inter;
        std::set_intersection(tv.begin(), tv.end(), tw.begin(), tw.end(),
                              std::inserter(inter, inter.begin()));
        bool ok = inter.empty() || inter == tv || inter == tw;
        CHECK(ok);
      }
    }
  }
}

TEST_CASE("contracting the shared refinement recovers the pickpocket model") {
  AttackTree tp = load_model("tprime.json").tree;
  AttributeDomain d = builtin_domain("min-time-dyn");
  LiftedAttr attr = lift_by_id(tp, load_model("tprime.json").attributions.at("time"), d);

  uint32_t v = tp.node_index("v");
  REQUIRE(is_module(tp, v));
  AttackTree sub = subtree(tp, v);
  CHECK(sub.node_count() == 3);
  MetricResult mv = oracle_inner(sub, attr, d);
  CHECK(mv.value == num_value(15L));

  auto [contracted, attr2] = contract(tp, v, mv.value, attr);
  CHECK(contracted.node_count() == tp.node_count() - 2);
  CHECK(attr2.at("v") == num_value(15L));
  // shape matches the pickpocket DAG: OR(AND(ff,v), SAND(v,cc)) with v shared
  CHECK_FALSE(contracted.structure_kind().tree_structured);
  CHECK_FALSE(contracted.structure_kind().is_static);
  CHECK(contracted.bas_descendants("luck") == std::set<std::string>{"v", "cc"});

  CHECK_THROWS_AS(contract(tp, tp.root(), mv.value, attr), Error);
  CHECK_THROWS_AS(contract(tp, tp.node_index("skill"), mv.value, attr), Error);
}

TEST_CASE("modular evaluation of the refined pickpocket model gives 15") {
  Model m = load_model("tprime.json");
  AttributeDomain d = builtin_domain("min-time-dyn");
  LiftedAttr attr = lift_by_id(m.tree, m.attributions.at("time"), d);
  ModularOutcome r = modular_metric(m.tree, attr, d, dispatch_inner);
  CHECK(r.metric.satisfiable);
  CHECK(r.metric.value == num_value(15L));
  CHECK_FALSE(r.unsat_rewrite_applied);
  CHECK(r.module_ids.front() == "v");
}

TEST_CASE("modular evaluation equals the plain algorithms") {
  Model ts = load_model("ts.json");
  AttributeDomain cost = builtin_domain("min-cost");
  LiftedAttr attr = lift_by_id(ts.tree, ts.attributions.at("cost"), cost);
  ModularOutcome r = modular_metric(ts.tree, attr, cost, dispatch_inner);
  CHECK(r.metric.value == num_value(1L));

  Model fig3 = load_model("fig3.json");
  LiftedAttr cattr = lift_by_id(fig3.tree, fig3.attributions.at("cost"), cost);
  ModularOutcome r2 = modular_metric(fig3.tree, cattr, cost, dispatch_inner);
  CHECK(r2.metric.value == num_value(2L));
}

TEST_CASE("an unsatisfiable module dies quietly inside an OR") {
  // OR(b, SAND(OR(a,x), a)) where the SAND module can never succeed
  AttackTree t = tree_of({gate("r", NodeType::Or, {"b", "s"}),
                          gate("s", NodeType::Sand, {"o", "a"}),
                          gate("o", NodeType::Or, {"a", "x"}), bas("a"), bas("x"), bas("b")});
  AttributeDomain d = builtin_domain("min-time-dyn");
  LiftedAttr attr{{"a", num_value(2L)}, {"x", num_value(3L)}, {"b", num_value(7L)}};
  ModularOutcome r = modular_metric(t, attr, d, dispatch_inner);
  CHECK(r.unsat_rewrite_applied);
  CHECK(r.metric.satisfiable);
  CHECK(r.metric.value == num_value(7L));

  // the same module under an AND poisons the whole tree
  AttackTree t2 = tree_of({gate("r", NodeType::And, {"b", "s"}),
                           gate("s", NodeType::Sand, {"o", "a"}),
                           gate("o", NodeType::Or, {"a", "x"}), bas("a"), bas("x"), bas("b")});
  ModularOutcome r2 = modular_metric(t2, attr, d, dispatch_inner);
  CHECK(r2.unsat_rewrite_applied);
  CHECK_FALSE(r2.metric.satisfiable);
}

TEST_CASE("pruning dead steps splices single-child gates") {
  AttackTree t = tree_of({gate("r", NodeType::Or, {"g", "c"}),
                          gate("g", NodeType::And, {"a", "b"}), bas("a"), bas("b"), bas("c")});
  auto pruned = prune_dead_bas(t, {"a"});
  REQUIRE(pruned.has_value());
  CHECK(pruned->node_count() == 1);
  CHECK(pruned->id_of(pruned->root()) == "c");

  auto gone = prune_dead_bas(t, {"a", "c"});
  CHECK_FALSE(gone.has_value());

  // duplicate children after splicing: AND dedupes, SAND dies
  AttackTree t2 = tree_of({gate("r", NodeType::And, {"x", "o"}),
                           gate("o", NodeType::Or, {"x", "y"}), bas("x"), bas("y")});
  auto p2 = prune_dead_bas(t2, {"y"});
  REQUIRE(p2.has_value());
  CHECK(p2->node_count() == 1);
  CHECK(p2->id_of(p2->root()) == "x");

  AttackTree t3 = tree_of({gate("r", NodeType::Sand, {"x", "o"}),
                           gate("o", NodeType::Or, {"x", "y"}), bas("x"), bas("y")});
  CHECK_FALSE(prune_dead_bas(t3, {"y"}).has_value());
}

TEST_CASE("modular analysis matches the direct oracle on random models") {
  std::mt19937 rng(307);
  for (int i = 0; i < 20; ++i) {
    GenOpts opt;
    opt.max_bas = 6;
    opt.dag = i % 2 == 0;
    opt.dynamic_gates = i % 3 == 0;
    AttackTree t = random_tree(rng, opt);
    AttributeDomain d =
        builtin_domain(t.is_static() ? "min-cost" : "min-time-dyn");
    Attribution attr = random_attr(rng, t, false);
    LiftedAttr by_id;
    for (std::size_t b = 0; b < t.bas_count(); ++b) by_id[t.bas_ids()[b]] = attr[b];

    MetricResult direct = oracle_metric(t, attr, d);
    ModularOutcome mod = modular_metric(t, by_id, d, oracle_inner);
    REQUIRE(direct.satisfiable == mod.metric.satisfiable);
    if (direct.satisfiable) CHECK(direct.value == mod.metric.value);
  }
}

TEST_CASE("modular analysis with a BDD inner equals the whole-tree BDD fold") {
  std::mt19937 rng(313);
  for (const std::string& name : {"min-cost", "prob"}) {
    AttributeDomain d = builtin_domain(name);
    for (int i = 0; i < 10; ++i) {
      GenOpts opt;
      opt.max_bas = 8;
      opt.dag = true;
      AttackTree t = random_tree(rng, opt);
      Attribution attr = random_attr(rng, t, name == "prob");
      LiftedAttr by_id;
      for (std::size_t b = 0; b < t.bas_count(); ++b) by_id[t.bas_ids()[b]] = attr[b];

      Value whole = bu_bdd(build_bdd(t, default_order(t)), attr, d);
      ModularOutcome mod = modular_metric(
          t, by_id, d, [](const AttackTree& sub, const LiftedAttr& a, const AttributeDomain& dd) {
            if (sub.tree_structured())
              return MetricResult{true, bu_sat(sub, sub.root(), index_attribution(sub, a), dd)};
            return MetricResult{
                true, bu_bdd(build_bdd(sub, default_order(sub)), index_attribution(sub, a), dd)};
          });
      CHECK(mod.metric.value == whole);
    }
  }
}

TEST_CASE("contraction shrinks the tree and terminates quickly") {
  std::mt19937 rng(311);
  GenOpts opt;
  opt.max_bas = 7;
  AttackTree t = random_tree(rng, opt);
  AttributeDomain d = builtin_domain("min-cost");
  std::size_t steps = 0;
  LiftedAttr attr;
  for (const auto& id : t.bas_ids()) attr[id] = num_value(1L);
  modular_metric(t, attr, d,
                 [&](const AttackTree& sub, const LiftedAttr& a, const AttributeDomain& dd) {
                   ++steps;
                   return oracle_inner(sub, a, dd);
                 });
  CHECK(steps <= t.node_count());
}
