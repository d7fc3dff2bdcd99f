// Acceptance suite: every criterion prints one PASS/FAIL line; the process
// exits with the number of failed criteria.

#include <chrono>
#include <functional>
#include <iostream>
#include <random>

#include "atm/bdd.hpp"
#include "atm/bottomup.hpp"
#include "atm/errors.hpp"
#include "atm/modular.hpp"
#include "atm/runner.hpp"
#include "testutil.hpp"

using namespace atm;
using namespace testutil;

namespace {

struct Criterion {
  int failures = 0;
  std::string first_failure;

  void expect(bool ok, const std::string& what) {
    if (ok) return;
    ++failures;
    if (first_failure.empty()) first_failure = what;
  }
};

int overall_failures = 0;

void run_criterion(int number, const std::string& title,
                   const std::function<void(Criterion&)>& body) {
  Criterion c;
  const auto start = std::chrono::steady_clock::now();
  try {
    body(c);
  } catch (const std::exception& e) {
    c.expect(false, std::string("exception: ") + e.what());
  }
  const double ms =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  if (c.failures == 0) {
    std::cout << "PASS criterion " << number << ": " << title << " (" << ms << " ms)\n";
  } else {
    std::cout << "FAIL criterion " << number << ": " << title << " - " << c.failures
              << " failure(s); first: " << c.first_failure << "\n";
    ++overall_failures;
  }
}

Value metric_value(const Model& m, const std::string& domain, const std::string& attr) {
  RunOptions opt;
  opt.domain = domain;
  opt.attr = attr;
  return run_metric(m, opt).value;
}

// k best metric values over the minimal attacks, straight from the oracle
std::vector<Value> oracle_k_best(const AttackTree& t, const Attribution& attr,
                                 const AttributeDomain& d, unsigned k) {
  std::vector<Value> vals;
  for (Mask a : minimal_attacks_sat(t)) {
    bool first = true;
    Value acc;
    for (uint32_t i : mask_bits(a)) {
      acc = first ? attr[i] : d.conj(acc, attr[i]);
      first = false;
    }
    vals.push_back(acc);
  }
  std::stable_sort(vals.begin(), vals.end(), [&](const Value& a, const Value& b) {
    int c = d.before(a, b);
    if (c != 0) return c < 0;
    return cmp_values(a, b) < 0;
  });
  if (vals.size() > k) vals.resize(k);
  return vals;
}

std::vector<Value> sorted_canonical(std::vector<Value> xs) {
  std::sort(xs.begin(), xs.end(),
            [](const Value& a, const Value& b) { return cmp_values(a, b) < 0; });
  return xs;
}

void criterion1(Criterion& c) {
  Model ts = load_model("ts.json");
  c.expect(metric_value(ts, "min-cost", "cost") == num_value(1L), "Ts min-cost != 1");
  c.expect(metric_value(ts, "prob", "prob") == num_value(Rat(7, 100)), "Ts prob != 0.07");

  Model fig3 = load_model("fig3.json");
  {
    RunOptions opt;
    opt.domain = "min-cost";
    opt.attr = "cost";
    opt.algo = "bdd";
    RunReport r = run_metric(fig3, opt);
    c.expect(r.value == num_value(2L), "DAG min-cost via BDD != 2");
    c.expect(r.algorithm == "bdd", "BDD algorithm not used");
  }
  c.expect(metric_value(fig3, "prob", "prob") == num_value(Rat(3, 50)), "DAG prob != 0.06");
  {
    RunOptions opt;
    opt.domain = "min-cost";
    opt.attr = "cost";
    opt.algo = "bu";
    opt.force = true;
    RunReport r = run_metric(fig3, opt);
    c.expect(r.value == num_value(4L), "forced BU != 4");
    c.expect(r.precondition_violation, "forced BU lacks the violation flag");
  }
  {
    RunOptions opt;
    opt.domain = "min-cost";
    opt.attr = "costk";
    opt.k = 2;
    RunReport r = run_ktop(fig3, opt);
    c.expect(r.values.size() == 2 && r.values[0] == num_value(1L) &&
                 r.values[1] == num_value(7L),
             "k-top {1,7} mismatch");
  }

  Model td = load_model("td.json");
  c.expect(metric_value(td, "min-time-dyn", "time") == num_value(15L), "Td min-time != 15");
  c.expect(metric_value(td, "min-skill-dyn", "skill") == num_value(10L), "Td min-skill != 10");

  Model tp = load_model("tprime.json");
  {
    RunOptions opt;
    opt.domain = "min-time-dyn";
    opt.attr = "time";
    opt.algo = "modular";
    RunReport r = run_metric(tp, opt);
    c.expect(r.value == num_value(15L), "modular refined model != 15");
  }

  {
    RunReport r = run_enumerate(ts);
    c.expect(r.extras["attacks"] == nlohmann::json::parse(R"([["n"],["p","t"]])"),
             "enumerate(Ts) mismatch");
  }

  Model saa = load_model("sand-aa.json");
  {
    RunOptions opt;
    opt.domain = "min-time-dyn";
    opt.attr = "time";
    RunReport r = run_metric(saa, opt);
    c.expect(r.unsatisfiable && r.exit_code() == 2, "self-preceding SAND not unsatisfiable");
  }
}

void criterion2(Criterion& c) {
  // tree-structured static models, all six table domains
  {
    std::mt19937 rng(1001);
    const std::vector<std::string> names{"min-cost",      "min-time-par", "min-skill",
                                         "max-damage",    "max-challenge", "prob"};
    for (int i = 0; i < 200; ++i) {
      GenOpts opt;
      opt.max_bas = 12;
      AttackTree t = random_tree(rng, opt);
      for (const auto& name : names) {
        AttributeDomain d = builtin_domain(name);
        Attribution attr = random_attr(rng, t, name == "prob");
        Value fold = bu_sat(t, t.root(), attr, d);
        MetricResult oracle = oracle_metric(t, attr, d);
        c.expect(oracle.satisfiable && fold == oracle.value,
                 "bu_sat != oracle on tree " + std::to_string(i) + " domain " + name);
      }
    }
  }
  // DAG static models, absorbing unital domains via the BDD
  {
    std::mt19937 rng(1002);
    const std::vector<std::string> names{"min-cost", "min-time-seq", "min-time-par", "min-skill",
                                         "prob"};
    for (int i = 0; i < 200; ++i) {
      GenOpts opt;
      opt.max_bas = 12;
      opt.dag = true;
      AttackTree t = random_tree(rng, opt);
      Bdd b = build_bdd(t, default_order(t));
      for (const auto& name : names) {
        AttributeDomain d = builtin_domain(name);
        Attribution attr = random_attr(rng, t, name == "prob");
        Value fold = bu_bdd(b, attr, d);
        MetricResult oracle = oracle_metric(t, attr, d);
        c.expect(oracle.satisfiable && fold == oracle.value,
                 "bu_bdd != oracle on DAG " + std::to_string(i) + " domain " + name);
      }
    }
  }
  // DAG static models, idempotent absorbing domains via the plain fold
  {
    std::mt19937 rng(1003);
    for (int i = 0; i < 100; ++i) {
      GenOpts opt;
      opt.max_bas = 12;
      opt.dag = true;
      AttackTree t = random_tree(rng, opt);
      for (const auto& name : {"min-time-par", "min-skill"}) {
        AttributeDomain d = builtin_domain(name);
        Attribution attr = random_attr(rng, t, false);
        c.expect(bu_dag_idempotent(t, attr, d) == oracle_metric(t, attr, d).value,
                 "idempotent DAG fold != oracle on instance " + std::to_string(i));
      }
    }
  }
  // tree-structured dynamic models
  {
    std::mt19937 rng(1004);
    for (int i = 0; i < 100; ++i) {
      GenOpts opt;
      opt.max_bas = 10;
      opt.dynamic_gates = true;
      AttackTree t = random_tree(rng, opt);
      for (const auto& name : {"min-time-dyn", "min-skill-dyn"}) {
        AttributeDomain d = builtin_domain(name);
        Attribution attr = random_attr(rng, t, false);
        c.expect(bu_dat(t, t.root(), attr, d) == oracle_metric(t, attr, d).value,
                 "bu_dat != oracle on tree DAT " + std::to_string(i));
      }
    }
  }
  // DAG dynamic models: the two minimal-attack routes agree, and modular
  // analysis agrees with the direct metric
  {
    std::mt19937 rng(1005);
    AttributeDomain d = builtin_domain("min-time-dyn");
    for (int i = 0; i < 50; ++i) {
      GenOpts opt;
      opt.max_bas = 8;
      opt.dag = true;
      opt.dynamic_gates = true;
      AttackTree t = random_tree(rng, opt);
      auto synth = minimal_attacks_dat(t);
      auto enumd = minimal_attacks_dat_by_enumeration(t);
      bool same = synth.size() == enumd.size();
      for (std::size_t j = 0; same && j < synth.size(); ++j)
        same = poset_eq(synth[j], enumd[j]);
      c.expect(same, "minimal-attack routes disagree on DAG DAT " + std::to_string(i));

      Attribution attr = random_attr(rng, t, false);
      MetricResult direct = metric_from_suite_dat(synth, attr, d);
      LiftedAttr by_id;
      for (std::size_t b = 0; b < t.bas_count(); ++b) by_id[t.bas_ids()[b]] = attr[b];
      ModularOutcome mod = modular_metric(
          t, by_id, d, [](const AttackTree& sub, const LiftedAttr& a, const AttributeDomain& dd) {
            return oracle_metric(sub, index_attribution(sub, a), dd);
          });
      bool agree = direct.satisfiable == mod.metric.satisfiable &&
                   (!direct.satisfiable || direct.value == mod.metric.value);
      c.expect(agree, "modular != direct metric on DAG DAT " + std::to_string(i));
    }
  }
}

void criterion3(Criterion& c) {
  std::mt19937 rng(2001);
  AttributeDomain cost = builtin_domain("min-cost");
  for (int i = 0; i < 100; ++i) {
    GenOpts opt;
    opt.max_bas = 10;
    opt.dag = true;
    AttackTree t = random_tree(rng, opt);
    Attribution attr = random_attr(rng, t, false);
    Bdd b = build_bdd(t, default_order(t));
    const std::size_t n_min = minimal_attacks_sat(t).size();

    for (unsigned k : {1u, 2u, 4u}) {
      if (k > n_min) continue;
      std::vector<Value> fast = ktop_bdd(b, attr, cost, k);
      std::vector<Value> slow = oracle_k_best(t, attr, cost, k);
      c.expect(fast == slow, "ktop_bdd != oracle k-best, instance " + std::to_string(i) +
                                 " k=" + std::to_string(k));

      // the multiset-domain route must give the same k values
      AttributeDomain kd = ktop_domain(cost, k);
      Attribution lifted;
      for (const Value& v : attr) lifted.push_back(ktop_lift(cost, v));
      MetricResult viadom = metric_from_suite_sat(minimal_attacks_sat(t), lifted, kd);
      c.expect(sorted_canonical(std::get<ValueMultiset>(viadom.value.v).items) ==
                   sorted_canonical(fast),
               "ktop domain evaluation != ktop_bdd, instance " + std::to_string(i));
    }

    // Pareto fronts against a brute-force scan of the minimal attacks
    std::vector<AttributeDomain> comps{builtin_domain("min-cost"),
                                       builtin_domain("min-time-par")};
    std::vector<Attribution> cattr{attr, random_attr(rng, t, false)};
    if (i % 2 == 0) {
      comps.push_back(builtin_domain("prob"));
      cattr.push_back(random_attr(rng, t, true));
    }
    AttributeDomain ac = antichain_domain(comps);
    Attribution lifted;
    for (std::size_t bi = 0; bi < t.bas_count(); ++bi) {
      std::vector<Value> parts;
      for (std::size_t ci = 0; ci < comps.size(); ++ci) parts.push_back(cattr[ci][bi]);
      lifted.push_back(antichain_lift(comps, parts));
    }
    AlgorithmChoice choice = dispatch(t, ac);
    Value front;
    if (choice.algo == Algo::Bdd) {
      front = bu_bdd(b, lifted, ac);
    } else {
      front = metric_from_suite_sat(minimal_attacks_sat(t), lifted, ac).value;
    }

    // brute force: metric vector per minimal attack, keep the non-dominated
    std::vector<std::vector<Value>> vectors;
    for (Mask a : minimal_attacks_sat(t)) {
      std::vector<Value> vec;
      for (std::size_t ci = 0; ci < comps.size(); ++ci) {
        bool first = true;
        Value acc;
        for (uint32_t bi : mask_bits(a)) {
          acc = first ? cattr[ci][bi] : comps[ci].conj(acc, cattr[ci][bi]);
          first = false;
        }
        vec.push_back(acc);
      }
      vectors.push_back(vec);
    }
    auto weakly = [&](const std::vector<Value>& x, const std::vector<Value>& y) {
      for (std::size_t ci = 0; ci < comps.size(); ++ci)
        if (comps[ci].before(x[ci], y[ci]) > 0) return false;
      return true;
    };
    std::vector<Value> expected;
    for (const auto& v : vectors) {
      bool dominated = false;
      for (const auto& u : vectors)
        if (weakly(u, v) && !weakly(v, u)) dominated = true;
      if (!dominated) expected.push_back(Value(ValueTuple{v}));
    }
    std::vector<Value> exp_sorted = sorted_canonical(expected);
    exp_sorted.erase(std::unique(exp_sorted.begin(), exp_sorted.end(),
                                 [](const Value& a, const Value& b) { return a == b; }),
                     exp_sorted.end());
    c.expect(Value(ValueAntichain{exp_sorted}) == front,
             "Pareto front != brute force, instance " + std::to_string(i));
  }
}

void criterion4(Criterion& c) {
  std::mt19937 rng(3001);
  AttributeDomain cost = builtin_domain("min-cost");
  for (int i = 0; i < 50; ++i) {
    GenOpts opt;
    opt.max_bas = 10;
    opt.dag = true;
    AttackTree t = random_tree(rng, opt);

    // reducedness invariants
    auto order = t.bas_ids();
    std::shuffle(order.begin(), order.end(), rng);
    Bdd b = build_bdd(t, order);
    std::set<std::tuple<uint32_t, uint32_t, uint32_t>> unique_nodes;
    bool reduced = true;
    for (uint32_t idx = 2; idx < b.nodes.size(); ++idx) {
      const BddNode& n = b.nodes[idx];
      if (n.low == n.high) reduced = false;
      if (!unique_nodes.insert({n.var, n.low, n.high}).second) reduced = false;
      for (uint32_t ch : {n.low, n.high})
        if (b.nodes[ch].var != kTerminalVar && n.var >= b.nodes[ch].var) reduced = false;
    }
    c.expect(reduced, "reducedness violated on instance " + std::to_string(i));

    // canonicity under an equivalent rewrite (duplicate the root clause)
    auto specs = t.to_specs();
    std::vector<NodeSpec> rewritten;
    NodeSpec clone;
    clone.id = "__clone";
    for (const NodeSpec& s : specs) {
      if (s.id == t.id_of(t.root())) {
        clone.type = s.type;
        clone.children = s.children;
        NodeSpec root = s;
        root.children.push_back("__clone");
        rewritten.push_back(root);
      } else {
        rewritten.push_back(s);
      }
    }
    rewritten.push_back(clone);
    AttackTree t2 = AttackTree::build(rewritten);
    Bdd b2 = build_bdd(t2, order);
    bool same = b.root == b2.root && b.nodes.size() == b2.nodes.size();
    for (std::size_t idx = 0; same && idx < b.nodes.size(); ++idx)
      same = b.nodes[idx].var == b2.nodes[idx].var && b.nodes[idx].low == b2.nodes[idx].low &&
             b.nodes[idx].high == b2.nodes[idx].high;
    c.expect(same, "canonicity violated on instance " + std::to_string(i));

    // metric invariance across five random orders
    Attribution attr = random_attr(rng, t, false);
    Value reference = bu_bdd(build_bdd(t, default_order(t)), attr, cost);
    for (int k = 0; k < 5; ++k) {
      auto o2 = t.bas_ids();
      std::shuffle(o2.begin(), o2.end(), rng);
      c.expect(bu_bdd(build_bdd(t, o2), attr, cost) == reference,
               "metric changed with the variable order, instance " + std::to_string(i));
    }

    // path soundness and completeness w.r.t. the minimal attacks
    auto paths = bdd_top_paths(b);
    for (Mask p : paths)
      c.expect(structure_function_sat(t, p, t.root()),
               "unsuccessful BDD path on instance " + std::to_string(i));
    for (Mask msk : minimal_attacks_sat(t))
      c.expect(std::count(paths.begin(), paths.end(), msk) == 1,
               "minimal attack missing from the BDD paths, instance " + std::to_string(i));
  }
}

void criterion5(Criterion& c) {
  std::mt19937 rng(4001);
  AttributeDomain base = builtin_domain("min-cost");
  AttributeDomain iv = interval_domain(base);
  for (int i = 0; i < 100; ++i) {
    GenOpts opt;
    opt.max_bas = 8;
    opt.dag = i % 2 == 0;
    AttackTree t = random_tree(rng, opt);
    const uint32_t n = static_cast<uint32_t>(t.bas_count());

    std::vector<std::pair<Rat, Rat>> bounds;
    Attribution lifted;
    for (uint32_t bi = 0; bi < n; ++bi) {
      Rat x = random_rat(rng, false), y = random_rat(rng, false);
      if (y < x) std::swap(x, y);
      bounds.emplace_back(x, y);
      lifted.push_back(Value(ValueTuple{{num_value(x), num_value(y)}}));
    }
    MetricResult got = oracle_metric(t, lifted, iv);

    auto suite = minimal_attacks_sat(t);
    Rat lo, hi;
    bool first = true;
    for (Mask corner = 0; corner < (1u << n); ++corner) {
      Attribution pt;
      for (uint32_t bi = 0; bi < n; ++bi)
        pt.push_back(num_value(((corner >> bi) & 1u) ? bounds[bi].second : bounds[bi].first));
      Rat v = as_num(metric_from_suite_sat(suite, pt, base).value).num;
      if (first || v < lo) lo = v;
      if (first || v > hi) hi = v;
      first = false;
    }
    c.expect(got.value == Value(ValueTuple{{num_value(lo), num_value(hi)}}),
             "interval != corner sweep on instance " + std::to_string(i));
  }
}

void criterion6(Criterion& c) {
  std::mt19937 rng(5001);
  for (int i = 0; i < 100; ++i) {
    GenOpts opt;
    opt.max_bas = 10;
    opt.dag = i % 2 == 0;
    AttackTree t = random_tree(rng, opt);
    std::vector<Rat> prob;
    for (std::size_t bi = 0; bi < t.bas_count(); ++bi) prob.push_back(random_rat(rng, true));
    Rat fast = total_probability(build_bdd(t, default_order(t)), prob);
    Rat slow = total_probability_oracle(t, prob);
    c.expect(fast == slow, "total probability mismatch on instance " + std::to_string(i));
  }
  AttackTree ts = load_model("ts.json").tree;
  Rat p = total_probability(build_bdd(ts, default_order(ts)),
                            {Rat(7, 100), Rat(19, 20), Rat(1, 100)});
  c.expect(p == Rat(15767, 200000), "Ts total probability != 15767/200000");
}

void criterion7(Criterion& c) {
  std::mt19937 rng(6001);
  for (int i = 0; i < 100; ++i) {
    GenOpts opt;
    opt.max_bas = 10;
    opt.dag = true;
    AttackTree t = random_tree(rng, opt);
    auto names = t.bas_ids();
    AttributeDomain d = min_attack_domain(names);
    Attribution attr;
    for (const auto& id : names) attr.push_back(d.lift_bas(id));
    Value v = bu_bdd(build_bdd(t, default_order(t)), attr, d);

    const auto& bm = std::get<BasMultiset>(v.v);
    c.expect(!bm.top, "min-attack metric is the sentinel on instance " + std::to_string(i));
    Mask witness = 0;
    bool is_set = true;
    for (std::size_t bi = 0; bi < bm.counts.size(); ++bi) {
      if (bm.counts[bi] > 1) is_set = false;
      if (bm.counts[bi]) witness |= 1u << bi;
    }
    c.expect(is_set, "min-attack metric is not a set on instance " + std::to_string(i));
    c.expect(structure_function_sat(t, witness, t.root()),
             "min-attack witness not successful on instance " + std::to_string(i));

    std::size_t smallest = ~std::size_t(0);
    for (Mask a : minimal_attacks_sat(t))
      smallest = std::min<std::size_t>(smallest, mask_bits(a).size());
    c.expect(mask_bits(witness).size() == smallest,
             "min-attack witness has the wrong cardinality on instance " + std::to_string(i));
  }
}

}  // namespace

int main() {
  run_criterion(1, "golden examples, exact", criterion1);
  run_criterion(2, "oracle equivalence of the fast algorithms", criterion2);
  run_criterion(3, "k-top and Pareto consistency", criterion3);
  run_criterion(4, "BDD structural properties", criterion4);
  run_criterion(5, "uncertainty intervals against corner sweeps", criterion5);
  run_criterion(6, "exact total probability", criterion6);
  run_criterion(7, "minimal-size attack domain", criterion7);
  if (overall_failures == 0) {
    std::cout << "all acceptance criteria passed\n";
  } else {
    std::cout << overall_failures << " acceptance criteria failed\n";
  }
  return overall_failures;
}
