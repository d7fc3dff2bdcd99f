#include "atm/model_io.hpp"

#include <json.hpp>

#include <algorithm>
#include <variant>

#include "atm/errors.hpp"

namespace atm {

namespace {

// Minimal JSON DOM with exact numbers, filled through the SAX interface so
// decimal literals like 0.07 are kept as 7/100 instead of doubles.
struct EJson;
using EArray = std::vector<EJson>;
using EObject = std::vector<std::pair<std::string, EJson>>;

struct EJson {
  std::variant<std::nullptr_t, bool, Rat, std::string, EArray, EObject> v;
  bool is_obj() const { return std::holds_alternative<EObject>(v); }
  bool is_arr() const { return std::holds_alternative<EArray>(v); }
  const EJson* find(const std::string& key) const {
    const auto& o = std::get<EObject>(v);
    for (const auto& [k, val] : o)
      if (k == key) return &val;
    return nullptr;
  }
};

struct ExactSax {
  using number_integer_t = nlohmann::json::number_integer_t;
  using number_unsigned_t = nlohmann::json::number_unsigned_t;
  using number_float_t = nlohmann::json::number_float_t;
  using string_t = nlohmann::json::string_t;
  using binary_t = nlohmann::json::binary_t;

  EJson root;
  std::vector<EJson*> stack;  // open containers
  std::string pending_key;

  EJson* place() {
    if (stack.empty()) return &root;
    EJson* top = stack.back();
    if (top->is_arr()) {
      std::get<EArray>(top->v).emplace_back();
      return &std::get<EArray>(top->v).back();
    }
    std::get<EObject>(top->v).emplace_back(pending_key, EJson{});
    return &std::get<EObject>(top->v).back().second;
  }

  bool null() { place()->v = nullptr; return true; }
  bool boolean(bool b) { place()->v = b; return true; }
  bool number_integer(number_integer_t n) { place()->v = Rat(n); return true; }
  bool number_unsigned(number_unsigned_t n) { place()->v = Rat(BigInt(n)); return true; }
  bool number_float(number_float_t, const string_t& raw) {
    place()->v = rat_from_text(raw);
    return true;
  }
  bool string(string_t& s) { place()->v = s; return true; }
  bool binary(binary_t&) { return false; }
  bool start_object(std::size_t) {
    EJson* j = place();
    j->v = EObject{};
    stack.push_back(j);
    return true;
  }
  bool key(string_t& k) { pending_key = k; return true; }
  bool end_object() { stack.pop_back(); return true; }
  bool start_array(std::size_t) {
    EJson* j = place();
    j->v = EArray{};
    stack.push_back(j);
    return true;
  }
  bool end_array() { stack.pop_back(); return true; }
  bool parse_error(std::size_t pos, const std::string&, const nlohmann::detail::exception& ex) {
    fail(Errc::validation, "model JSON parse error at byte " + std::to_string(pos) + ": " + ex.what());
  }
};

Value scalar_value(const EJson& j, const std::string& where) {
  if (const Rat* r = std::get_if<Rat>(&j.v)) return num_value(*r);
  if (const std::string* s = std::get_if<std::string>(&j.v)) {
    if (*s == "inf") return inf_value();
    return num_value(rat_from_text(*s));
  }
  fail(Errc::validation, "expected a number at " + where);
}

Value attribution_value(const EJson& j, const std::string& where) {
  if (j.is_arr()) {
    const auto& a = std::get<EArray>(j.v);
    if (a.size() != 2)
      fail(Errc::validation, "interval at " + where + " must have exactly two endpoints");
    Value lo = scalar_value(a[0], where);
    Value hi = scalar_value(a[1], where);
    const ExtNum& l = as_num(lo);
    const ExtNum& h = as_num(hi);
    bool ok = h.inf || (!l.inf && l.num <= h.num);
    if (!ok) fail(Errc::validation, "interval at " + where + " has lower bound above upper bound");
    return Value(ValueTuple{{lo, hi}});
  }
  return scalar_value(j, where);
}

}  // namespace

Model parse_model(const std::string& json_text) {
  ExactSax sax;
  nlohmann::json::sax_parse(json_text, &sax);
  const EJson& doc = sax.root;
  if (!doc.is_obj()) fail(Errc::validation, "model must be a JSON object");

  const EJson* nodes = doc.find("nodes");
  if (!nodes || !nodes->is_arr()) fail(Errc::validation, "model needs a 'nodes' array");

  std::vector<NodeSpec> specs;
  for (const EJson& nj : std::get<EArray>(nodes->v)) {
    if (!nj.is_obj()) fail(Errc::validation, "each node must be an object");
    NodeSpec s;
    const EJson* id = nj.find("id");
    const EJson* type = nj.find("type");
    if (!id || !std::holds_alternative<std::string>(id->v))
      fail(Errc::validation, "node without string 'id'");
    s.id = std::get<std::string>(id->v);
    if (!type || !std::holds_alternative<std::string>(type->v))
      fail(Errc::validation, "node '" + s.id + "' without string 'type'");
    auto t = node_type_from_name(std::get<std::string>(type->v));
    if (!t)
      fail(Errc::validation, "node '" + s.id + "' has unknown type '" +
                                 std::get<std::string>(type->v) + "'");
    s.type = *t;
    if (const EJson* ch = nj.find("children")) {
      if (!ch->is_arr()) fail(Errc::validation, "children of '" + s.id + "' must be an array");
      for (const EJson& c : std::get<EArray>(ch->v)) {
        if (!std::holds_alternative<std::string>(c.v))
          fail(Errc::validation, "child ids of '" + s.id + "' must be strings");
        s.children.push_back(std::get<std::string>(c.v));
      }
    }
    specs.push_back(std::move(s));
  }

  std::optional<std::string> declared_root;
  if (const EJson* r = doc.find("root")) {
    if (!std::holds_alternative<std::string>(r->v))
      fail(Errc::validation, "'root' must be a string");
    declared_root = std::get<std::string>(r->v);
  }

  Model m{AttackTree::build(specs, declared_root), {}};

  if (const EJson* attrs = doc.find("attributions")) {
    if (!attrs->is_obj()) fail(Errc::validation, "'attributions' must be an object");
    for (const auto& [name, table] : std::get<EObject>(attrs->v)) {
      if (!table.is_obj())
        fail(Errc::validation, "attribution '" + name + "' must be an object");
      RawAttribution raw;
      for (const auto& [bas, val] : std::get<EObject>(table.v)) {
        auto node = m.tree.find_node(bas);
        if (!node || !m.tree.is_bas(*node))
          fail(Errc::validation,
               "attribution '" + name + "' references non-BAS id '" + bas + "'");
        raw[bas] = attribution_value(val, name + "." + bas);
      }
      std::string missing;
      for (const auto& id : m.tree.bas_ids())
        if (!raw.count(id)) missing += (missing.empty() ? "" : ", ") + id;
      if (!missing.empty())
        fail(Errc::validation, "attribution '" + name + "' is missing BAS: " + missing);
      m.attributions[name] = std::move(raw);
    }
  }
  return m;
}

std::string serialize_model(const Model& m) {
  nlohmann::ordered_json doc;
  doc["nodes"] = nlohmann::ordered_json::array();
  for (const auto& s : m.tree.to_specs()) {
    nlohmann::ordered_json nj;
    nj["id"] = s.id;
    nj["type"] = node_type_name(s.type);
    if (!s.children.empty()) nj["children"] = s.children;
    doc["nodes"].push_back(nj);
  }
  auto scalar = [](const Value& v) -> nlohmann::ordered_json {
    const ExtNum& n = as_num(v);
    if (n.inf) return "inf";
    if (boost::multiprecision::denominator(n.num) == 1)
      return nlohmann::ordered_json::parse(rat_to_text(n.num));
    return rat_to_text(n.num);
  };
  if (!m.attributions.empty()) {
    nlohmann::ordered_json attrs = nlohmann::ordered_json::object();
    for (const auto& [name, table] : m.attributions) {
      nlohmann::ordered_json tj = nlohmann::ordered_json::object();
      for (const auto& [bas, val] : table) {
        if (const ValueTuple* t = std::get_if<ValueTuple>(&val.v)) {
          tj[bas] = nlohmann::ordered_json::array({scalar(t->items[0]), scalar(t->items[1])});
        } else {
          tj[bas] = scalar(val);
        }
      }
      attrs[name] = tj;
    }
    doc["attributions"] = attrs;
  }
  return doc.dump(2);
}

const RawAttribution& attribution_or_fail(const Model& m, const std::string& name) {
  auto it = m.attributions.find(name);
  if (it == m.attributions.end())
    fail(Errc::usage, "model has no attribution named '" + name + "'");
  return it->second;
}

}  // namespace atm
