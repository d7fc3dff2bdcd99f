#include "atm/domain.hpp"

#include <algorithm>
#include <random>

#include "atm/errors.hpp"

namespace atm {

namespace {

// ---- extended-number operators ----

Value en_min(const Value& a, const Value& b) {
  const ExtNum& x = as_num(a);
  const ExtNum& y = as_num(b);
  if (x.inf) return b;
  if (y.inf) return a;
  return x.num <= y.num ? a : b;
}

Value en_max(const Value& a, const Value& b) {
  const ExtNum& x = as_num(a);
  const ExtNum& y = as_num(b);
  if (x.inf) return a;
  if (y.inf) return b;
  return x.num >= y.num ? a : b;
}

Value en_plus(const Value& a, const Value& b) {
  const ExtNum& x = as_num(a);
  const ExtNum& y = as_num(b);
  if (x.inf || y.inf) return inf_value();
  return num_value(Rat(x.num + y.num));
}

Value en_times(const Value& a, const Value& b) {
  const ExtNum& x = as_num(a);
  const ExtNum& y = as_num(b);
  if (x.inf || y.inf) fail(Errc::domain, "product undefined for infinite values");
  return num_value(Rat(x.num * y.num));
}

int en_cmp(const Value& a, const Value& b) {
  const ExtNum& x = as_num(a);
  const ExtNum& y = as_num(b);
  if (x.inf || y.inf) return x.inf == y.inf ? 0 : (x.inf ? 1 : -1);
  return x.num.compare(y.num);
}

void validate_nonneg(const Value& v) {
  const ExtNum& n = as_num(v);
  if (!n.inf && n.num < 0) fail(Errc::domain, "attribute value must be non-negative");
}

void validate_prob(const Value& v) {
  const ExtNum& n = as_num(v);
  if (n.inf || n.num < 0 || n.num > 1)
    fail(Errc::domain, "probability attribute must lie in [0, 1]");
}

AttributeDomain::Cmp oriented(AttributeDomain::Cmp asc, Orientation o) {
  if (o == Orientation::Min) return asc;
  return [asc](const Value& a, const Value& b) { return -asc(a, b); };
}

Value identity_lift(const Value& raw) {
  if (!is_num(raw))
    fail(Errc::domain, "attribution value " + value_to_text(raw) +
                           " is not a plain number for this domain");
  return raw;
}

AttributeDomain numeric_domain(std::string name, AttributeDomain::BinOp disj,
                               AttributeDomain::BinOp conj, AttributeDomain::BinOp seq,
                               Orientation o) {
  AttributeDomain d;
  d.name = std::move(name);
  d.disj = std::move(disj);
  d.conj = std::move(conj);
  d.seq = std::move(seq);
  d.dynamic = static_cast<bool>(d.seq);
  d.linear = true;
  d.orientation = o;
  d.before = oriented(en_cmp, o);
  d.validate = validate_nonneg;
  d.lift = [v = d.validate](const Value& raw) {
    Value x = identity_lift(raw);
    v(x);
    return x;
  };
  return d;
}

// ---- multisets for the k-top domain ----

struct MultisetOps {
  AttributeDomain::Cmp before;  // base oriented order
  unsigned k;

  std::vector<Value> truncate(std::vector<Value> items) const {
    std::stable_sort(items.begin(), items.end(), [&](const Value& a, const Value& b) {
      int c = before(a, b);
      if (c != 0) return c < 0;
      return cmp_values(a, b) < 0;
    });
    if (items.size() > k) items.resize(k);
    return items;
  }

  Value disj(const Value& a, const Value& b) const {
    const auto& x = std::get<ValueMultiset>(a.v);
    const auto& y = std::get<ValueMultiset>(b.v);
    std::vector<Value> all = x.items;
    all.insert(all.end(), y.items.begin(), y.items.end());
    return Value(ValueMultiset{truncate(std::move(all))});
  }

  Value pairwise(const Value& a, const Value& b, const AttributeDomain::BinOp& op) const {
    const auto& x = std::get<ValueMultiset>(a.v);
    const auto& y = std::get<ValueMultiset>(b.v);
    std::vector<Value> all;
    all.reserve(x.items.size() * y.items.size());
    for (const Value& u : x.items)
      for (const Value& w : y.items) all.push_back(op(u, w));
    return Value(ValueMultiset{truncate(std::move(all))});
  }
};

// ---- antichains over product orders ----

struct AntichainOps {
  std::vector<AttributeDomain> comps;

  // -1: a dominates-or-equals b in every component; +1: converse; 0 otherwise.
  bool weakly_before(const std::vector<Value>& a, const std::vector<Value>& b) const {
    for (std::size_t i = 0; i < comps.size(); ++i)
      if (comps[i].before(a[i], b[i]) > 0) return false;
    return true;
  }

  Value minimize(std::vector<Value> tuples) const {
    std::vector<Value> keep;
    for (const Value& t : tuples) {
      const auto& ti = std::get<ValueTuple>(t.v).items;
      bool dominated = false;
      for (const Value& u : tuples) {
        if (u == t) continue;
        const auto& ui = std::get<ValueTuple>(u.v).items;
        if (weakly_before(ui, ti) && !(weakly_before(ti, ui))) {
          dominated = true;
          break;
        }
      }
      if (!dominated) keep.push_back(t);
    }
    std::sort(keep.begin(), keep.end(),
              [](const Value& a, const Value& b) { return cmp_values(a, b) < 0; });
    keep.erase(std::unique(keep.begin(), keep.end(),
                           [](const Value& a, const Value& b) { return a == b; }),
               keep.end());
    return Value(ValueAntichain{std::move(keep)});
  }

  Value disj(const Value& a, const Value& b) const {
    const auto& x = std::get<ValueAntichain>(a.v);
    const auto& y = std::get<ValueAntichain>(b.v);
    std::vector<Value> all = x.items;
    all.insert(all.end(), y.items.begin(), y.items.end());
    return minimize(std::move(all));
  }

  Value pairwise(const Value& a, const Value& b, bool use_seq) const {
    const auto& x = std::get<ValueAntichain>(a.v);
    const auto& y = std::get<ValueAntichain>(b.v);
    std::vector<Value> all;
    for (const Value& u : x.items) {
      for (const Value& w : y.items) {
        const auto& ui = std::get<ValueTuple>(u.v).items;
        const auto& wi = std::get<ValueTuple>(w.v).items;
        std::vector<Value> t;
        t.reserve(comps.size());
        for (std::size_t i = 0; i < comps.size(); ++i)
          t.push_back(use_seq ? comps[i].seq(ui[i], wi[i]) : comps[i].conj(ui[i], wi[i]));
        all.push_back(Value(ValueTuple{std::move(t)}));
      }
    }
    return minimize(std::move(all));
  }
};

// ---- BAS multisets for the minimal-size-attack domain ----

uint64_t bm_total(const BasMultiset& m) {
  uint64_t s = 0;
  for (uint32_t c : m.counts) s += c;
  return s;
}

std::vector<uint32_t> primes_upto_index(std::size_t n) {
  std::vector<uint32_t> ps;
  uint32_t cand = 2;
  while (ps.size() < n) {
    bool prime = true;
    for (uint32_t p : ps) {
      if (static_cast<uint64_t>(p) * p > cand) break;
      if (cand % p == 0) {
        prime = false;
        break;
      }
    }
    if (prime) ps.push_back(cand);
    ++cand;
  }
  return ps;
}

BigInt bm_prime_product(const BasMultiset& m) {
  static thread_local std::vector<uint32_t> primes;
  if (primes.size() < m.counts.size()) primes = primes_upto_index(m.counts.size());
  BigInt r = 1;
  for (std::size_t i = 0; i < m.counts.size(); ++i)
    for (uint32_t k = 0; k < m.counts[i]; ++k) r *= primes[i];
  return r;
}

int bm_cmp(const Value& a, const Value& b) {
  const auto& x = std::get<BasMultiset>(a.v);
  const auto& y = std::get<BasMultiset>(b.v);
  if (x.top || y.top) return x.top == y.top ? 0 : (x.top ? 1 : -1);
  uint64_t sx = bm_total(x), sy = bm_total(y);
  if (sx != sy) return sx < sy ? -1 : 1;
  return bm_prime_product(x).compare(bm_prime_product(y));
}

}  // namespace

const std::vector<std::string> kBuiltinDomainNames = {
    "min-cost",      "min-time-seq", "min-time-par", "min-skill",    "max-challenge",
    "max-damage",    "prob",         "min-time-dyn", "min-skill-dyn", "min-attack"};

AttributeDomain builtin_domain(const std::string& name, const std::vector<std::string>* bas) {
  if (name == "min-cost" || name == "min-time-seq") {
    AttributeDomain d = numeric_domain(name, en_min, en_plus, nullptr, Orientation::Min);
    d.one_disj = inf_value();
    d.one_conj = num_value(0L);
    d.absorbing = true;
    d.unital = true;
    return d;
  }
  if (name == "min-time-par" || name == "min-skill") {
    AttributeDomain d = numeric_domain(name, en_min, en_max, nullptr, Orientation::Min);
    d.one_disj = inf_value();
    d.one_conj = num_value(0L);
    d.absorbing = true;
    d.idempotent = true;
    d.unital = true;
    return d;
  }
  if (name == "max-challenge") {
    AttributeDomain d = numeric_domain(name, en_max, en_max, nullptr, Orientation::Max);
    d.one_disj = num_value(0L);
    d.one_conj = num_value(0L);
    d.idempotent = true;
    d.unital = true;
    return d;
  }
  if (name == "max-damage") {
    AttributeDomain d = numeric_domain(name, en_max, en_plus, nullptr, Orientation::Max);
    d.one_disj = num_value(0L);
    d.one_conj = num_value(0L);
    d.unital = true;
    return d;
  }
  if (name == "prob") {
    AttributeDomain d = numeric_domain(name, en_max, en_times, nullptr, Orientation::Max);
    d.one_disj = num_value(0L);
    d.one_conj = num_value(1L);
    d.absorbing = true;
    d.unital = true;
    d.validate = validate_prob;
    d.lift = [](const Value& raw) {
      Value x = identity_lift(raw);
      validate_prob(x);
      return x;
    };
    return d;
  }
  if (name == "min-time-dyn") {
    AttributeDomain d = numeric_domain(name, en_min, en_max, en_plus, Orientation::Min);
    d.one_disj = inf_value();
    d.one_conj = num_value(0L);
    d.absorbing = true;
    d.idempotent = true;
    d.unital = true;
    return d;
  }
  if (name == "min-skill-dyn") {
    AttributeDomain d = numeric_domain(name, en_min, en_max, en_max, Orientation::Min);
    d.one_disj = inf_value();
    d.one_conj = num_value(0L);
    d.absorbing = true;
    d.idempotent = true;
    d.unital = true;
    return d;
  }
  if (name == "min-attack") {
    if (!bas) fail(Errc::usage, "domain 'min-attack' needs the BAS list of a model");
    return min_attack_domain(*bas);
  }
  fail(Errc::usage, "unknown domain '" + name + "'");
}

AttributeDomain losg_domain(const std::string& name, AttributeDomain::Cmp ascending,
                            AttributeDomain::BinOp conj, AttributeDomain::BinOp seq,
                            Orientation orientation, std::optional<Value> one_conj,
                            const std::vector<Value>& samples) {
  AttributeDomain d;
  d.name = name;
  d.before = oriented(std::move(ascending), orientation);
  d.orientation = orientation;
  d.linear = true;
  d.disj = [cmp = d.before](const Value& a, const Value& b) { return cmp(a, b) <= 0 ? a : b; };
  d.conj = std::move(conj);
  d.seq = std::move(seq);
  d.dynamic = static_cast<bool>(d.seq);
  d.lift = identity_lift;

  // sampled monotonicity of conj (and seq) in each argument
  for (const Value& x : samples) {
    for (const Value& y : samples) {
      if (d.before(x, y) > 0) continue;
      for (const Value& z : samples) {
        if (d.before(d.conj(x, z), d.conj(y, z)) > 0)
          fail(Errc::domain, "conjunction is not monotone w.r.t. the order in '" + name + "'");
        if (d.seq && d.before(d.seq(x, z), d.seq(y, z)) > 0)
          fail(Errc::domain, "sequence operator is not monotone w.r.t. the order in '" + name + "'");
      }
    }
  }

  // sampled flags
  d.idempotent = !samples.empty();
  d.absorbing = !samples.empty();
  for (const Value& x : samples) {
    if (!(d.conj(x, x) == x)) d.idempotent = false;
    for (const Value& y : samples)
      if (d.before(x, d.conj(x, y)) > 0) d.absorbing = false;
  }
  if (one_conj) {
    d.one_conj = one_conj;
    // the oriented top works as the neutral of min when the universe has one;
    // numeric domains use infinity
    if (orientation == Orientation::Min)
      d.one_disj = inf_value();
    else
      d.one_disj = num_value(0L);
    d.unital = true;
    for (const Value& x : samples) {
      if (!(d.conj(x, *d.one_conj) == x)) d.unital = false;
      if (!(d.disj(x, *d.one_disj) == x)) d.unital = false;
    }
    if (!d.unital) {
      d.one_disj.reset();
      d.one_conj.reset();
    }
  }
  return d;
}

AttributeDomain ktop_domain(const AttributeDomain& base, unsigned k) {
  if (k == 0) fail(Errc::usage, "k-top needs k >= 1");
  if (!base.linear || !base.before)
    fail(Errc::domain, "k-top needs a linearly ordered base domain");
  MultisetOps ops{base.before, k};
  AttributeDomain d;
  d.name = "ktop<" + base.name + "," + std::to_string(k) + ">";
  d.disj = [ops](const Value& a, const Value& b) { return ops.disj(a, b); };
  d.conj = [ops, op = base.conj](const Value& a, const Value& b) { return ops.pairwise(a, b, op); };
  if (base.seq)
    d.seq = [ops, op = base.seq](const Value& a, const Value& b) { return ops.pairwise(a, b, op); };
  d.dynamic = base.dynamic;
  d.one_disj = Value(ValueMultiset{});
  if (base.one_conj) {
    d.one_conj = Value(ValueMultiset{{*base.one_conj}});
    d.unital = true;
  }
  d.lift = [base](const Value& raw) { return ktop_lift(base, raw); };
  return d;
}

Value ktop_lift(const AttributeDomain& base, const Value& raw) {
  return Value(ValueMultiset{{base.lift ? base.lift(raw) : raw}});
}

AttributeDomain antichain_domain(const std::vector<AttributeDomain>& components) {
  if (components.empty()) fail(Errc::usage, "antichain domain needs at least one component");
  bool dynamic = true;
  for (const auto& c : components) {
    if (!c.linear || !c.before)
      fail(Errc::domain, "antichain components must be linearly ordered domains");
    dynamic = dynamic && c.dynamic;
  }
  AntichainOps ops{components};
  AttributeDomain d;
  d.name = "antichain<";
  for (std::size_t i = 0; i < components.size(); ++i)
    d.name += (i ? "," : "") + components[i].name;
  d.name += ">";
  d.disj = [ops](const Value& a, const Value& b) { return ops.disj(a, b); };
  d.conj = [ops](const Value& a, const Value& b) { return ops.pairwise(a, b, false); };
  if (dynamic)
    d.seq = [ops](const Value& a, const Value& b) { return ops.pairwise(a, b, true); };
  d.dynamic = dynamic;
  d.one_disj = Value(ValueAntichain{});
  bool all_unital = true, all_absorbing = true, all_idem = true;
  std::vector<Value> ones;
  for (const auto& c : components) {
    all_unital = all_unital && c.unital && c.one_conj.has_value();
    all_absorbing = all_absorbing && c.absorbing;
    all_idem = all_idem && c.idempotent;
    if (c.one_conj) ones.push_back(*c.one_conj);
  }
  if (all_unital) {
    d.one_conj = Value(ValueAntichain{{Value(ValueTuple{ones})}});
    d.unital = true;
  }
  d.absorbing = all_absorbing;
  d.idempotent = all_idem && all_absorbing;
  return d;
}

Value antichain_lift(const std::vector<AttributeDomain>& components,
                     const std::vector<Value>& raw_components) {
  if (components.size() != raw_components.size())
    fail(Errc::usage, "component count mismatch in Pareto lift");
  std::vector<Value> t;
  for (std::size_t i = 0; i < components.size(); ++i)
    t.push_back(components[i].lift ? components[i].lift(raw_components[i]) : raw_components[i]);
  return Value(ValueAntichain{{Value(ValueTuple{std::move(t)})}});
}

AttributeDomain interval_domain(const AttributeDomain& base) {
  if (!base.linear) fail(Errc::domain, "interval domain needs a linearly ordered base");
  auto lift_pair = [base](const Value& raw) -> Value {
    if (const ValueTuple* t = std::get_if<ValueTuple>(&raw.v)) {
      if (t->items.size() != 2) fail(Errc::domain, "interval value must have two endpoints");
      Value lo = base.lift ? base.lift(t->items[0]) : t->items[0];
      Value hi = base.lift ? base.lift(t->items[1]) : t->items[1];
      return Value(ValueTuple{{lo, hi}});
    }
    Value x = base.lift ? base.lift(raw) : raw;
    return Value(ValueTuple{{x, x}});
  };
  auto componentwise = [](AttributeDomain::BinOp op) -> AttributeDomain::BinOp {
    return [op](const Value& a, const Value& b) {
      const auto& x = std::get<ValueTuple>(a.v).items;
      const auto& y = std::get<ValueTuple>(b.v).items;
      return Value(ValueTuple{{op(x[0], y[0]), op(x[1], y[1])}});
    };
  };
  AttributeDomain d;
  d.name = "interval<" + base.name + ">";
  d.disj = componentwise(base.disj);
  d.conj = componentwise(base.conj);
  if (base.seq) d.seq = componentwise(base.seq);
  d.dynamic = base.dynamic;
  if (base.one_disj) d.one_disj = Value(ValueTuple{{*base.one_disj, *base.one_disj}});
  if (base.one_conj) d.one_conj = Value(ValueTuple{{*base.one_conj, *base.one_conj}});
  d.absorbing = base.absorbing;
  d.idempotent = base.idempotent;
  d.unital = base.unital;
  d.lift = lift_pair;
  return d;
}

AttributeDomain min_attack_domain(const std::vector<std::string>& bas) {
  if (bas.empty()) fail(Errc::usage, "min-attack domain needs a non-empty BAS list");
  auto names = std::make_shared<const std::vector<std::string>>(bas);
  const std::size_t n = bas.size();

  AttributeDomain d;
  d.name = "min-attack";
  d.before = bm_cmp;
  d.linear = true;
  d.orientation = Orientation::Min;
  d.disj = [](const Value& a, const Value& b) { return bm_cmp(a, b) <= 0 ? a : b; };
  d.conj = [n, names](const Value& a, const Value& b) -> Value {
    const auto& x = std::get<BasMultiset>(a.v);
    const auto& y = std::get<BasMultiset>(b.v);
    if (x.top || y.top) return Value(BasMultiset{true, {}, names});
    BasMultiset r{false, std::vector<uint32_t>(n, 0), names};
    for (std::size_t i = 0; i < n; ++i) r.counts[i] = x.counts[i] + y.counts[i];
    return Value(std::move(r));
  };
  d.one_disj = Value(BasMultiset{true, {}, names});
  d.one_conj = Value(BasMultiset{false, std::vector<uint32_t>(n, 0), names});
  d.absorbing = true;
  d.unital = true;
  d.lift_bas = [n, names, bas](const std::string& id) -> Value {
    BasMultiset r{false, std::vector<uint32_t>(n, 0), names};
    auto it = std::find(bas.begin(), bas.end(), id);
    if (it == bas.end()) fail(Errc::domain, "BAS '" + id + "' unknown to min-attack domain");
    r.counts[it - bas.begin()] = 1;
    return Value(std::move(r));
  };
  return d;
}

AttributeDomain sat_as_dat_domain(const AttributeDomain& base) {
  if (base.dynamic) fail(Errc::domain, "base domain is already dynamic");
  auto is_omega = [](const Value& v) { return std::holds_alternative<Omega>(v.v); };
  AttributeDomain d;
  d.name = "sat-as-dat<" + base.name + ">";
  d.disj = [is_omega, op = base.disj](const Value& a, const Value& b) -> Value {
    if (is_omega(a)) return b;
    if (is_omega(b)) return a;
    return op(a, b);
  };
  d.conj = [is_omega, op = base.conj](const Value& a, const Value& b) -> Value {
    if (is_omega(a) || is_omega(b)) return Value(Omega{});
    return op(a, b);
  };
  d.seq = [](const Value&, const Value&) { return Value(Omega{}); };
  d.dynamic = true;
  d.one_disj = Value(Omega{});
  d.one_conj = base.one_conj;
  d.absorbing = base.absorbing;
  d.idempotent = base.idempotent;
  d.unital = base.unital && base.one_conj.has_value();
  d.lift = base.lift;
  return d;
}

std::vector<std::string> check_domain_laws(const AttributeDomain& d,
                                           const std::vector<Value>& samples,
                                           unsigned triples, uint32_t seed) {
  std::vector<std::string> out;
  if (samples.empty()) return {"no samples"};
  std::mt19937 rng(seed);
  std::uniform_int_distribution<std::size_t> pick(0, samples.size() - 1);
  auto report = [&](const std::string& what) {
    if (out.size() < 8) out.push_back(what);
  };

  for (unsigned t = 0; t < triples; ++t) {
    const Value& x = samples[pick(rng)];
    const Value& y = samples[pick(rng)];
    const Value& z = samples[pick(rng)];
    auto comm_assoc = [&](const AttributeDomain::BinOp& op, const char* nm) {
      if (!(op(x, y) == op(y, x))) report(std::string(nm) + " not commutative");
      if (!(op(op(x, y), z) == op(x, op(y, z)))) report(std::string(nm) + " not associative");
    };
    comm_assoc(d.disj, "disjunction");
    comm_assoc(d.conj, "conjunction");
    if (!(d.conj(x, d.disj(y, z)) == d.disj(d.conj(x, y), d.conj(x, z))))
      report("conjunction does not distribute over disjunction");
    if (d.seq) {
      comm_assoc(d.seq, "sequence");
      if (!(d.seq(x, d.disj(y, z)) == d.disj(d.seq(x, y), d.seq(x, z))))
        report("sequence does not distribute over disjunction");
      if (!(d.seq(x, d.conj(y, z)) == d.conj(d.seq(x, y), d.seq(x, z))))
        report("sequence does not distribute over conjunction");
    }
    if (d.unital) {
      if (d.one_disj && !(d.disj(x, *d.one_disj) == x)) report("disjunction neutral fails");
      if (d.one_conj && !(d.conj(x, *d.one_conj) == x)) report("conjunction neutral fails");
    }
    if (d.absorbing && !(d.disj(x, d.conj(x, y)) == x)) report("absorption fails");
    if (d.idempotent) {
      if (!(d.disj(x, x) == x)) report("disjunction not idempotent");
      if (!(d.conj(x, x) == x)) report("conjunction not idempotent");
    }
    if (!out.empty() && out.size() >= 8) break;
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::vector<Value> numeric_samples(const AttributeDomain& d) {
  std::vector<Value> xs;
  const bool problike = d.name == "prob";
  if (problike) {
    for (long num = 0; num <= 8; ++num) xs.push_back(num_value(Rat(num, 8)));
    xs.push_back(num_value(Rat(7, 100)));
    xs.push_back(num_value(Rat(19, 20)));
    xs.push_back(num_value(Rat(1, 100)));
  } else {
    for (long n : {0L, 1L, 2L, 3L, 5L, 100L}) xs.push_back(num_value(n));
    xs.push_back(num_value(Rat(1, 2)));
    xs.push_back(num_value(Rat(3, 4)));
    xs.push_back(inf_value());
  }
  if (d.one_disj && is_num(*d.one_disj)) xs.push_back(*d.one_disj);
  if (d.one_conj && is_num(*d.one_conj)) xs.push_back(*d.one_conj);
  return xs;
}

}  // namespace atm
