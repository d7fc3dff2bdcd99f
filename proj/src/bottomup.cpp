#include "atm/bottomup.hpp"

#include <functional>
#include <optional>

#include "atm/errors.hpp"

namespace atm {

namespace {

Value fold_children(const AttackTree& t, uint32_t node, const AttributeDomain::BinOp& op,
                    const std::function<Value(uint32_t)>& eval, std::size_t* op_count) {
  const auto& ch = t.children_of(node);
  Value acc = eval(ch[0]);
  for (std::size_t i = 1; i < ch.size(); ++i) {
    acc = op(acc, eval(ch[i]));
    if (op_count) ++*op_count;
  }
  return acc;
}

}  // namespace

Value bu_sat(const AttackTree& t, uint32_t node, const Attribution& attr,
             const AttributeDomain& d, std::size_t* op_count) {
  std::function<Value(uint32_t)> eval = [&](uint32_t v) -> Value {
    switch (t.type_of(v)) {
      case NodeType::Bas:
        return attr[t.bas_index(v)];
      case NodeType::Or:
        return fold_children(t, v, d.disj, eval, op_count);
      case NodeType::And:
        return fold_children(t, v, d.conj, eval, op_count);
      case NodeType::Sand:
        fail(Errc::usage, "SAND gate '" + t.id_of(v) + "' in a static fold");
    }
    fail(Errc::internal, "bad node type");
  };
  return eval(node);
}

Value bu_sat_memo(const AttackTree& t, const Attribution& attr, const AttributeDomain& d) {
  std::vector<std::optional<Value>> memo(t.node_count());
  std::function<Value(uint32_t)> eval = [&](uint32_t v) -> Value {
    if (memo[v]) return *memo[v];
    Value r;
    switch (t.type_of(v)) {
      case NodeType::Bas:
        r = attr[t.bas_index(v)];
        break;
      case NodeType::Or:
        r = fold_children(t, v, d.disj, eval, nullptr);
        break;
      case NodeType::And:
        r = fold_children(t, v, d.conj, eval, nullptr);
        break;
      case NodeType::Sand:
        fail(Errc::usage, "SAND gate '" + t.id_of(v) + "' in a static fold");
    }
    memo[v] = r;
    return r;
  };
  return eval(t.root());
}

Value bu_dat(const AttackTree& t, uint32_t node, const Attribution& attr,
             const AttributeDomain& d, std::size_t* op_count) {
  if (!t.tree_structured())
    fail(Errc::usage, "bottom-up dynamic fold needs a tree-structured model (DAG detected)");
  if (!d.dynamic && !t.is_static())
    fail(Errc::usage, "domain '" + d.name + "' has no sequential operator");
  std::function<Value(uint32_t)> eval = [&](uint32_t v) -> Value {
    switch (t.type_of(v)) {
      case NodeType::Bas:
        return attr[t.bas_index(v)];
      case NodeType::Or:
        return fold_children(t, v, d.disj, eval, op_count);
      case NodeType::And:
        return fold_children(t, v, d.conj, eval, op_count);
      case NodeType::Sand:
        return fold_children(t, v, d.seq, eval, op_count);
    }
    fail(Errc::internal, "bad node type");
  };
  return eval(node);
}

Value bu_dag_idempotent(const AttackTree& t, const Attribution& attr, const AttributeDomain& d) {
  if (!(d.idempotent && d.absorbing))
    fail(Errc::domain,
         "domain '" + d.name + "' is not idempotent and absorbing; bottom-up on a DAG is unsound");
  if (!t.is_static()) fail(Errc::usage, "static trees only");
  return bu_sat_memo(t, attr, d);
}

const char* algo_name(Algo a) {
  switch (a) {
    case Algo::Bu: return "bu";
    case Algo::BuIdempotentDag: return "bu-idempotent-dag";
    case Algo::Bdd: return "bdd";
    case Algo::OracleEnum: return "enumerate";
  }
  return "?";
}

AlgorithmChoice dispatch(const AttackTree& t, const AttributeDomain& d) {
  const StructureKind k = t.structure_kind();
  if (!k.is_static && !d.dynamic)
    fail(Errc::usage, "dynamic model needs a dynamic domain, '" + d.name +
                          "' has no sequential operator");
  if (k.is_static) {
    if (k.tree_structured) return {Algo::Bu, "static tree: linear bottom-up fold"};
    if (d.idempotent && d.absorbing)
      return {Algo::BuIdempotentDag, "static DAG with an idempotent absorbing domain"};
    if (d.absorbing && d.unital)
      return {Algo::Bdd, "static DAG with an absorbing unital domain"};
    return {Algo::OracleEnum, "static DAG without the flags any fast algorithm needs"};
  }
  if (k.tree_structured) return {Algo::Bu, "dynamic tree: linear bottom-up fold"};
  return {Algo::OracleEnum, "dynamic DAG: no efficient algorithm is known"};
}

AlgoCheck check_algorithm(const AttackTree& t, const AttributeDomain& d, Algo algo) {
  const StructureKind k = t.structure_kind();
  switch (algo) {
    case Algo::Bu:
      if (!k.is_static && !d.dynamic)
        return {Applicability::Impossible,
                "domain '" + d.name + "' has no sequential operator for SAND gates"};
      if (k.tree_structured) return {Applicability::Ok, ""};
      if (!k.is_static)
        return {Applicability::Impossible, "bottom-up dynamic fold is undefined on DAGs"};
      if (d.idempotent && d.absorbing) return {Applicability::Ok, ""};
      return {Applicability::Forceable,
              "bottom-up on a DAG double-counts shared subtrees unless the domain is "
              "idempotent and absorbing"};
    case Algo::BuIdempotentDag:
      if (!k.is_static) return {Applicability::Impossible, "static trees only"};
      if (d.idempotent && d.absorbing) return {Applicability::Ok, ""};
      return {Applicability::Forceable, "domain is not idempotent and absorbing"};
    case Algo::Bdd:
      if (!k.is_static)
        return {Applicability::Impossible, "SAND gates have no propositional encoding"};
      if (!d.unital || !d.one_disj || !d.one_conj)
        return {Applicability::Impossible, "BDD fold needs neutral elements"};
      if (!d.absorbing)
        return {Applicability::Forceable,
                "BDD fold visits non-minimal attacks; without absorption they change the value"};
      return {Applicability::Ok, ""};
    case Algo::OracleEnum:
      if (!k.is_static && !d.dynamic)
        return {Applicability::Impossible,
                "domain '" + d.name + "' has no sequential operator for SAND gates"};
      return {Applicability::Ok, ""};
  }
  return {Applicability::Impossible, "unknown algorithm"};
}

}  // namespace atm
