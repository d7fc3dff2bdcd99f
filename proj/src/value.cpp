#include "atm/value.hpp"

#include <algorithm>

#include "atm/errors.hpp"

namespace atm {

Value num_value(const Rat& r) { return Value(ExtNum{false, r}); }
Value num_value(long n) { return Value(ExtNum{false, Rat(n)}); }
Value inf_value() { return Value(ExtNum{true, Rat(0)}); }

bool is_num(const Value& x) { return std::holds_alternative<ExtNum>(x.v); }

const ExtNum& as_num(const Value& x) {
  const ExtNum* p = std::get_if<ExtNum>(&x.v);
  if (!p) fail(Errc::domain, "numeric value expected, got " + value_to_text(x));
  return *p;
}

namespace {

int cmp_lists(const std::vector<Value>& a, const std::vector<Value>& b) {
  const std::size_t n = std::min(a.size(), b.size());
  for (std::size_t i = 0; i < n; ++i) {
    int c = cmp_values(a[i], b[i]);
    if (c != 0) return c;
  }
  if (a.size() != b.size()) return a.size() < b.size() ? -1 : 1;
  return 0;
}

}  // namespace

int cmp_values(const Value& a, const Value& b) {
  if (a.v.index() != b.v.index()) return a.v.index() < b.v.index() ? -1 : 1;
  switch (a.v.index()) {
    case 0: {
      const auto& x = std::get<ExtNum>(a.v);
      const auto& y = std::get<ExtNum>(b.v);
      if (x.inf || y.inf) {
        if (x.inf && y.inf) return 0;
        return x.inf ? 1 : -1;
      }
      return x.num.compare(y.num);
    }
    case 1:
      return cmp_lists(std::get<ValueMultiset>(a.v).items, std::get<ValueMultiset>(b.v).items);
    case 2:
      return cmp_lists(std::get<ValueTuple>(a.v).items, std::get<ValueTuple>(b.v).items);
    case 3:
      return cmp_lists(std::get<ValueAntichain>(a.v).items, std::get<ValueAntichain>(b.v).items);
    case 4: {
      const auto& x = std::get<BasMultiset>(a.v);
      const auto& y = std::get<BasMultiset>(b.v);
      if (x.top != y.top) return x.top ? 1 : -1;
      if (x.counts != y.counts) return x.counts < y.counts ? -1 : 1;
      return 0;
    }
    default:
      return 0;  // Omega
  }
}

bool operator==(const Value& a, const Value& b) { return cmp_values(a, b) == 0; }

std::string value_to_text(const Value& x) {
  struct Visitor {
    std::string operator()(const ExtNum& n) const { return n.inf ? "inf" : rat_to_text(n.num); }
    std::string operator()(const ValueMultiset& m) const { return wrap("{{", m.items, "}}"); }
    std::string operator()(const ValueTuple& t) const { return wrap("(", t.items, ")"); }
    std::string operator()(const ValueAntichain& s) const { return wrap("{", s.items, "}"); }
    std::string operator()(const BasMultiset& m) const {
      if (m.top) return "inf";
      std::string out = "{{";
      bool first = true;
      for (std::size_t i = 0; i < m.counts.size(); ++i) {
        for (uint32_t k = 0; k < m.counts[i]; ++k) {
          if (!first) out += ", ";
          first = false;
          out += m.names && i < m.names->size() ? (*m.names)[i] : "#" + std::to_string(i);
        }
      }
      return out + "}}";
    }
    std::string operator()(const Omega&) const { return "omega"; }

    static std::string wrap(const char* open, const std::vector<Value>& xs, const char* close) {
      std::string out = open;
      for (std::size_t i = 0; i < xs.size(); ++i) {
        if (i) out += ", ";
        out += value_to_text(xs[i]);
      }
      return out + close;
    }
  };
  return std::visit(Visitor{}, x.v);
}

}  // namespace atm
