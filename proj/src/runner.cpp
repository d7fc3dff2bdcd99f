#include "atm/runner.hpp"

#include <algorithm>
#include <chrono>
#include <fstream>

#include "atm/bdd.hpp"
#include "atm/errors.hpp"
#include "atm/modular.hpp"

namespace atm {

namespace {

class Stopwatch {
 public:
  Stopwatch() : start_(std::chrono::steady_clock::now()) {}
  double ms() const {
    return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start_)
        .count();
  }

 private:
  std::chrono::steady_clock::time_point start_;
};

nlohmann::json exact_number(const ExtNum& n) {
  nlohmann::json j;
  j["exact"] = n.inf ? "inf" : rat_to_text(n.num);
  j["decimal"] = n.inf ? "inf" : rat_to_decimal(n.num);
  return j;
}

AttributeDomain domain_for(const Model& m, const std::string& name) {
  if (name == "min-attack") {
    auto bas = m.tree.bas_ids();
    return builtin_domain(name, &bas);
  }
  return builtin_domain(name);
}

bool attribution_has_intervals(const RawAttribution& raw) {
  for (const auto& [id, v] : raw)
    if (std::holds_alternative<ValueTuple>(v.v)) return true;
  return false;
}

VariableOrder resolve_order(const AttackTree& t, const std::string& spec) {
  if (spec.empty() || spec == "dfs") return default_order(t);
  if (spec.rfind("file:", 0) == 0) {
    const std::string path = spec.substr(5);
    std::ifstream in(path);
    if (!in) fail(Errc::usage, "cannot read order file '" + path + "'");
    nlohmann::json j;
    in >> j;
    if (!j.is_array()) fail(Errc::validation, "order file must hold a JSON array of BAS ids");
    std::vector<std::string> ids;
    for (const auto& e : j) ids.push_back(e.get<std::string>());
    return order_from_ids(t, ids);
  }
  fail(Errc::usage, "unknown --order '" + spec + "' (use dfs or file:<path>)");
}

nlohmann::json poset_json(const AttackTree& t, const Poset& p) {
  auto ids = t.bas_ids();
  nlohmann::json j;
  std::vector<std::string> bas;
  for (uint32_t i : mask_bits(p.bas)) bas.push_back(ids[i]);
  std::sort(bas.begin(), bas.end());
  j["bas"] = bas;
  std::vector<std::vector<std::string>> pairs;
  for (auto [a, b] : p.pairs()) pairs.push_back({ids[a], ids[b]});
  std::sort(pairs.begin(), pairs.end());
  j["order"] = pairs;
  return j;
}

MetricResult execute(const AttackTree& t, const LiftedAttr& lifted, const AttributeDomain& d,
                     Algo algo, const VariableOrder* order, nlohmann::json* bdd_stats,
                     std::vector<std::string>* warnings, bool bypass_flags) {
  const Attribution attr = index_attribution(t, lifted);
  switch (algo) {
    case Algo::Bu: {
      if (!t.is_static()) return MetricResult{true, bu_dat(t, t.root(), attr, d)};
      if (t.tree_structured())
        return MetricResult{true, d.dynamic ? bu_dat(t, t.root(), attr, d)
                                            : bu_sat(t, t.root(), attr, d)};
      return MetricResult{true, bu_sat_memo(t, attr, d)};  // forced on a DAG
    }
    case Algo::BuIdempotentDag:
      if (bypass_flags) return MetricResult{true, bu_sat_memo(t, attr, d)};
      return MetricResult{true, bu_dag_idempotent(t, attr, d)};
    case Algo::Bdd: {
      const VariableOrder ord = order ? *order : default_order(t);
      Bdd b = build_bdd(t, ord);
      if (bdd_stats) {
        (*bdd_stats)["node_count"] = b.node_count();
        (*bdd_stats)["path_count"] = count_top_paths(b).str();
        (*bdd_stats)["order"] = ord;
      }
      return MetricResult{true, bu_bdd(b, attr, d, /*enforce_absorbing=*/!bypass_flags)};
    }
    case Algo::OracleEnum: {
      if (t.is_static())
        return metric_from_suite_sat(minimal_attacks_sat(t), attr, d);
      return metric_from_suite_dat(minimal_attacks_dat(t, warnings), attr, d);
    }
  }
  fail(Errc::internal, "unknown algorithm");
}

RunReport base_report(const Model& m, const char* command) {
  RunReport r;
  r.command = command;
  r.structure = m.tree.structure_kind();
  return r;
}

}  // namespace

nlohmann::json value_to_json(const Value& v) {
  struct Visitor {
    nlohmann::json operator()(const ExtNum& n) const { return exact_number(n); }
    nlohmann::json operator()(const ValueMultiset& m) const {
      nlohmann::json j;
      j["multiset"] = items(m.items);
      return j;
    }
    nlohmann::json operator()(const ValueTuple& t) const {
      nlohmann::json arr = nlohmann::json::array();
      for (const Value& x : t.items) arr.push_back(value_to_json(x));
      nlohmann::json j;
      j["tuple"] = arr;  // positional, never sorted
      return j;
    }
    nlohmann::json operator()(const ValueAntichain& a) const {
      nlohmann::json j;
      j["antichain"] = items(a.items);
      return j;
    }
    nlohmann::json operator()(const BasMultiset& m) const {
      nlohmann::json j;
      if (m.top) {
        j["attack"] = "inf";
        return j;
      }
      std::vector<std::string> ids;
      for (std::size_t i = 0; i < m.counts.size(); ++i)
        for (uint32_t k = 0; k < m.counts[i]; ++k)
          ids.push_back(m.names ? (*m.names)[i] : "#" + std::to_string(i));
      std::sort(ids.begin(), ids.end());
      j["attack"] = ids;
      return j;
    }
    nlohmann::json operator()(const Omega&) const { return "omega"; }

    static nlohmann::json items(const std::vector<Value>& xs) {
      nlohmann::json arr = nlohmann::json::array();
      std::vector<Value> sorted = xs;
      std::sort(sorted.begin(), sorted.end(),
                [](const Value& a, const Value& b) { return cmp_values(a, b) < 0; });
      for (const Value& x : sorted) arr.push_back(value_to_json(x));
      return arr;
    }
  };
  return std::visit(Visitor{}, v.v);
}

nlohmann::json RunReport::to_json() const {
  nlohmann::json j;
  j["command"] = command;
  if (!domain.empty()) j["domain"] = domain;
  if (!algorithm.empty()) j["algorithm"] = algorithm;
  j["forced"] = forced;
  if (precondition_violation) {
    j["precondition_violation"] = true;
    j["flag"] = "correctness preconditions violated";
  }
  j["structure"] = {{"tree_structured", structure.tree_structured},
                    {"static", structure.is_static}};
  if (unsatisfiable) j["unsatisfiable"] = true;
  if (has_value) j["value"] = value_to_json(value);
  if (!values.empty() || command == "ktop") {
    nlohmann::json arr = nlohmann::json::array();
    for (const Value& v : values) arr.push_back(value_to_json(v));
    j["values"] = arr;
  }
  if (!warnings.empty()) j["warnings"] = warnings;
  for (auto it = extras.begin(); it != extras.end(); ++it) j[it.key()] = it.value();
  j["timings_ms"] = {{"total", total_ms}};
  return j;
}

RunReport run_metric(const Model& m, const RunOptions& opt) {
  Stopwatch clock;
  RunReport r = base_report(m, "metric");

  AttributeDomain d = domain_for(m, opt.domain);
  RawAttribution raw;
  if (!d.lift_bas) {
    if (opt.attr.empty())
      fail(Errc::usage, "domain '" + d.name + "' needs --attr naming an attribution");
    raw = attribution_or_fail(m, opt.attr);
    if (attribution_has_intervals(raw)) d = interval_domain(d);
  }
  r.domain = d.name;
  const LiftedAttr lifted = lift_by_id(m.tree, raw, d);
  const VariableOrder order = m.tree.is_static() ? resolve_order(m.tree, opt.order)
                                                 : VariableOrder{};

  nlohmann::json bdd_stats = nlohmann::json::object();
  MetricResult result;

  if (opt.algo == "modular") {
    r.algorithm = "modular";
    ModularOutcome outcome = modular_metric(
        m.tree, lifted, d,
        [&](const AttackTree& sub, const LiftedAttr& a, const AttributeDomain& dd) {
          AlgorithmChoice c = dispatch(sub, dd);
          return execute(sub, a, dd, c.algo, nullptr, nullptr, &r.warnings, false);
        });
    result = outcome.metric;
    if (outcome.unsat_rewrite_applied) {
      r.warnings.push_back(
          "unsatisfiable module removed by rewriting; metric semantics extended beyond "
          "satisfiable modules");
    }
    nlohmann::json mods = nlohmann::json::array();
    for (const auto& id : outcome.module_ids) mods.push_back(id);
    r.extras["modules"] = mods;
  } else if (opt.algo == "auto") {
    AlgorithmChoice c = dispatch(m.tree, d);
    r.algorithm = algo_name(c.algo);
    r.extras["dispatch_reason"] = c.reason;
    result = execute(m.tree, lifted, d, c.algo, &order, &bdd_stats, &r.warnings, false);
  } else {
    Algo a;
    if (opt.algo == "bu")
      a = Algo::Bu;
    else if (opt.algo == "bdd")
      a = Algo::Bdd;
    else if (opt.algo == "enumerate")
      a = Algo::OracleEnum;
    else
      fail(Errc::usage, "unknown --algo '" + opt.algo + "'");
    AlgoCheck check = check_algorithm(m.tree, d, a);
    if (check.level == Applicability::Impossible)
      fail(Errc::usage, "algorithm '" + opt.algo + "' cannot run here: " + check.reason);
    bool bypass = false;
    if (check.level == Applicability::Forceable) {
      if (!opt.force)
        fail(Errc::usage,
             "refusing '" + opt.algo + "': " + check.reason + " (pass --force to run anyway)");
      r.precondition_violation = true;
      r.warnings.push_back(check.reason);
      bypass = true;
    }
    r.forced = opt.force;
    r.algorithm = algo_name(a);
    result = execute(m.tree, lifted, d, a, &order, &bdd_stats, &r.warnings, bypass);
  }

  if (!bdd_stats.empty()) r.extras["bdd"] = bdd_stats;
  if (!result.satisfiable) {
    r.unsatisfiable = true;
  } else {
    r.has_value = true;
    r.value = result.value;
  }
  r.total_ms = clock.ms();
  return r;
}

RunReport run_ktop(const Model& m, const RunOptions& opt) {
  Stopwatch clock;
  RunReport r = base_report(m, "ktop");
  if (opt.k == 0) fail(Errc::usage, "k-top needs k >= 1");

  AttributeDomain base = domain_for(m, opt.domain);
  if (!base.linear) fail(Errc::usage, "k-top needs a linearly ordered domain");
  RawAttribution raw;
  if (!base.lift_bas) {
    if (opt.attr.empty())
      fail(Errc::usage, "domain '" + base.name + "' needs --attr naming an attribution");
    raw = attribution_or_fail(m, opt.attr);
  }
  r.domain = base.name;
  r.extras["k"] = opt.k;

  if (m.tree.is_static()) {
    const VariableOrder order = resolve_order(m.tree, opt.order);
    Bdd b = build_bdd(m.tree, order);
    Attribution attr = lift_attribution(m.tree, raw, base);
    r.values = ktop_bdd(b, attr, base, opt.k);
    r.algorithm = "bdd";
  } else {
    AttributeDomain kd = ktop_domain(base, opt.k);
    const LiftedAttr lifted = lift_by_id(m.tree, raw, kd);
    AlgorithmChoice c = dispatch(m.tree, kd);
    r.algorithm = algo_name(c.algo);
    MetricResult res = execute(m.tree, lifted, kd, c.algo, nullptr, nullptr, &r.warnings, false);
    if (!res.satisfiable) {
      r.unsatisfiable = true;
      r.total_ms = clock.ms();
      return r;
    }
    std::vector<Value> items = std::get<ValueMultiset>(res.value.v).items;
    std::stable_sort(items.begin(), items.end(), [&](const Value& a, const Value& b) {
      int c2 = base.before(a, b);
      if (c2 != 0) return c2 < 0;
      return cmp_values(a, b) < 0;
    });
    r.values = std::move(items);
  }
  r.total_ms = clock.ms();
  return r;
}

RunReport run_pareto(const Model& m, const RunOptions& opt) {
  Stopwatch clock;
  RunReport r = base_report(m, "pareto");
  if (opt.pareto_attrs.empty() || opt.pareto_attrs.size() != opt.pareto_domains.size())
    fail(Errc::usage, "--attrs and --domains need the same non-zero length");

  std::vector<AttributeDomain> comps;
  std::vector<const RawAttribution*> raws;
  for (std::size_t i = 0; i < opt.pareto_domains.size(); ++i) {
    comps.push_back(domain_for(m, opt.pareto_domains[i]));
    if (comps.back().lift_bas)
      fail(Errc::usage, "min-attack cannot be a Pareto component");
    raws.push_back(&attribution_or_fail(m, opt.pareto_attrs[i]));
  }
  AttributeDomain ac = antichain_domain(comps);
  r.domain = ac.name;

  LiftedAttr lifted;
  for (const std::string& id : m.tree.bas_ids()) {
    std::vector<Value> parts;
    for (std::size_t i = 0; i < comps.size(); ++i) parts.push_back(raws[i]->at(id));
    lifted[id] = antichain_lift(comps, parts);
  }

  AlgorithmChoice c = dispatch(m.tree, ac);
  r.algorithm = algo_name(c.algo);
  r.extras["dispatch_reason"] = c.reason;
  const VariableOrder order = m.tree.is_static() ? resolve_order(m.tree, opt.order)
                                                 : VariableOrder{};
  MetricResult res = execute(m.tree, lifted, ac, c.algo, &order, nullptr, &r.warnings, false);
  if (!res.satisfiable) {
    r.unsatisfiable = true;
  } else {
    r.has_value = true;
    r.value = res.value;
  }
  r.total_ms = clock.ms();
  return r;
}

RunReport run_enumerate(const Model& m) {
  Stopwatch clock;
  RunReport r = base_report(m, "enumerate");
  r.algorithm = "enumerate";
  if (m.tree.is_static()) {
    auto ids = m.tree.bas_ids();
    nlohmann::json arr = nlohmann::json::array();
    std::vector<std::vector<std::string>> attacks;
    for (Mask a : minimal_attacks_sat(m.tree)) {
      std::vector<std::string> names;
      for (uint32_t i : mask_bits(a)) names.push_back(ids[i]);
      std::sort(names.begin(), names.end());
      attacks.push_back(std::move(names));
    }
    std::sort(attacks.begin(), attacks.end(), [](const auto& a, const auto& b) {
      if (a.size() != b.size()) return a.size() < b.size();
      return a < b;
    });
    for (auto& a : attacks) arr.push_back(a);
    r.extras["attacks"] = arr;
    if (attacks.empty()) r.unsatisfiable = true;
  } else {
    auto suite = minimal_attacks_dat(m.tree, &r.warnings);
    nlohmann::json arr = nlohmann::json::array();
    for (const Poset& p : suite) arr.push_back(poset_json(m.tree, p));
    r.extras["attacks"] = arr;
    if (suite.empty()) r.unsatisfiable = true;
  }
  r.total_ms = clock.ms();
  return r;
}

RunReport run_bdd_export(const Model& m, const RunOptions& opt, std::string* dot_out) {
  Stopwatch clock;
  RunReport r = base_report(m, "bdd");
  r.algorithm = "bdd";
  const VariableOrder order = resolve_order(m.tree, opt.order);
  Bdd b = build_bdd(m.tree, order);
  r.extras["bdd"] = {{"node_count", b.node_count()},
                     {"path_count", count_top_paths(b).str()},
                     {"order", order}};
  if (dot_out) *dot_out = export_dot(b);
  r.total_ms = clock.ms();
  return r;
}

RunReport run_modules(const Model& m) {
  Stopwatch clock;
  RunReport r = base_report(m, "modules");
  nlohmann::json arr = nlohmann::json::array();
  for (uint32_t v : find_modules(m.tree)) arr.push_back(m.tree.id_of(v));
  r.extras["modules"] = arr;
  r.total_ms = clock.ms();
  return r;
}

RunReport run_totalprob(const Model& m, const std::string& attr) {
  Stopwatch clock;
  RunReport r = base_report(m, "totalprob");
  r.algorithm = "bdd";
  r.domain = "total-probability";
  const RawAttribution& raw = attribution_or_fail(m, attr);
  std::vector<Rat> probs;
  for (const std::string& id : m.tree.bas_ids()) {
    const Value& v = raw.at(id);
    if (!is_num(v)) fail(Errc::domain, "total probability needs point probabilities");
    const ExtNum& n = as_num(v);
    if (n.inf) fail(Errc::domain, "total probability needs finite probabilities");
    probs.push_back(n.num);
  }
  Bdd b = build_bdd(m.tree, default_order(m.tree));
  Rat p = total_probability(b, probs);
  r.has_value = true;
  r.value = num_value(p);
  r.total_ms = clock.ms();
  return r;
}

}  // namespace atm
