#include "atm/semantics.hpp"

#include <algorithm>
#include <bit>
#include <functional>
#include <map>
#include <set>
#include <unordered_map>

#include "atm/errors.hpp"

namespace atm {

namespace {

void require_bas_cap(const AttackTree& t, unsigned cap, const char* what) {
  if (t.bas_count() > cap)
    fail(Errc::cap_exceeded, std::string(what) + " limited to " + std::to_string(cap) +
                                 " BAS, model has " + std::to_string(t.bas_count()));
}

uint32_t popcount(Mask m) { return static_cast<uint32_t>(std::popcount(m)); }

}  // namespace

std::vector<Mask> mask_bits(Mask m) {
  std::vector<Mask> out;
  for (uint32_t i = 0; i < 32; ++i)
    if (m & (1u << i)) out.push_back(i);
  return out;
}

std::vector<std::pair<uint32_t, uint32_t>> Poset::pairs() const {
  std::vector<std::pair<uint32_t, uint32_t>> out;
  for (uint32_t i = 0; i < succ.size(); ++i)
    if (bas & (1u << i))
      for (uint32_t j : mask_bits(succ[i])) out.emplace_back(i, j);
  return out;
}

bool poset_eq(const Poset& a, const Poset& b) {
  return a.bas == b.bas && a.succ == b.succ;
}

bool poset_le(const Poset& a, const Poset& b) {
  if ((a.bas & ~b.bas) != 0) return false;
  for (std::size_t i = 0; i < a.succ.size(); ++i)
    if ((a.succ[i] & ~b.succ[i]) != 0) return false;
  return true;
}

int poset_cmp(const Poset& a, const Poset& b) {
  if (popcount(a.bas) != popcount(b.bas)) return popcount(a.bas) < popcount(b.bas) ? -1 : 1;
  if (a.bas != b.bas) return a.bas < b.bas ? -1 : 1;
  if (a.succ != b.succ) return a.succ < b.succ ? -1 : 1;
  return 0;
}

bool close_strict(std::vector<Mask>& succ) {
  const std::size_t n = succ.size();
  bool changed = true;
  while (changed) {
    changed = false;
    for (std::size_t i = 0; i < n; ++i) {
      Mask acc = succ[i];
      for (uint32_t j : mask_bits(succ[i])) acc |= succ[j];
      if (acc != succ[i]) {
        succ[i] = acc;
        changed = true;
      }
    }
  }
  for (std::size_t i = 0; i < n; ++i)
    if (succ[i] & (1u << i)) return false;
  return true;
}

bool structure_function_sat(const AttackTree& t, Mask attack, uint32_t node) {
  if (!t.is_static()) fail(Errc::usage, "structure function for static trees only");
  switch (t.type_of(node)) {
    case NodeType::Bas:
      return (attack >> t.bas_index(node)) & 1u;
    case NodeType::Or:
      for (uint32_t c : t.children_of(node))
        if (structure_function_sat(t, attack, c)) return true;
      return false;
    default:  // And
      for (uint32_t c : t.children_of(node))
        if (!structure_function_sat(t, attack, c)) return false;
      return true;
  }
}

bool structure_function_dat(const AttackTree& t, const Poset& attack, uint32_t node) {
  const auto& desc = t.bas_desc_masks();
  std::function<bool(uint32_t)> eval = [&](uint32_t v) -> bool {
    switch (t.type_of(v)) {
      case NodeType::Bas:
        return (attack.bas >> t.bas_index(v)) & 1u;
      case NodeType::Or: {
        for (uint32_t c : t.children_of(v))
          if (eval(c)) return true;
        return false;
      }
      case NodeType::And: {
        for (uint32_t c : t.children_of(v))
          if (!eval(c)) return false;
        return true;
      }
      case NodeType::Sand: {
        const auto& ch = t.children_of(v);
        for (uint32_t c : ch)
          if (!eval(c)) return false;
        for (std::size_t i = 0; i + 1 < ch.size(); ++i) {
          Mask left = attack.bas & desc[ch[i]];
          Mask right = attack.bas & desc[ch[i + 1]];
          for (uint32_t a : mask_bits(left))
            if ((right & ~attack.succ[a]) != 0) return false;
        }
        return true;
      }
    }
    return false;
  };
  return eval(node);
}

std::vector<Mask> successful_attacks_sat(const AttackTree& t) {
  require_bas_cap(t, kSatEnumCap, "subset enumeration");
  const uint32_t n = static_cast<uint32_t>(t.bas_count());
  std::vector<Mask> out;
  for (Mask m = 0; m < (1u << n); ++m)
    if (structure_function_sat(t, m, t.root())) out.push_back(m);
  return out;
}

std::vector<Mask> minimal_attacks_sat(const AttackTree& t) {
  require_bas_cap(t, kSatEnumCap, "subset enumeration");
  const uint32_t n = static_cast<uint32_t>(t.bas_count());
  std::vector<bool> ok(1u << n, false);
  for (Mask m = 0; m < (1u << n); ++m) ok[m] = structure_function_sat(t, m, t.root());
  std::vector<Mask> out;
  for (Mask m = 0; m < (1u << n); ++m) {
    if (!ok[m]) continue;
    bool minimal = true;
    for (uint32_t i = 0; i < n && minimal; ++i)
      if ((m >> i) & 1u) minimal = !ok[m & ~(1u << i)];
    if (minimal) out.push_back(m);
  }
  std::sort(out.begin(), out.end(), [](Mask a, Mask b) {
    if (popcount(a) != popcount(b)) return popcount(a) < popcount(b);
    return a < b;
  });
  return out;
}

namespace {

// Keeps only candidates with no kept dominator; candidates must arrive in
// non-decreasing carrier popcount so dominators are seen first.
class MinimalCollector {
 public:
  void add(const Poset& p) {
    for (const Poset& k : kept_)
      if (poset_le(k, p)) return;
    kept_.push_back(p);
  }
  std::vector<Poset> take() {
    std::sort(kept_.begin(), kept_.end(),
              [](const Poset& a, const Poset& b) { return poset_cmp(a, b) < 0; });
    return std::move(kept_);
  }

 private:
  std::vector<Poset> kept_;
};

using OrderSet = std::vector<std::vector<Mask>>;  // each entry: closed succ vector

void dedupe_orders(OrderSet& s) {
  std::sort(s.begin(), s.end());
  s.erase(std::unique(s.begin(), s.end()), s.end());
}

bool order_subset(const std::vector<Mask>& a, const std::vector<Mask>& b) {
  for (std::size_t i = 0; i < a.size(); ++i)
    if (a[i] & ~b[i]) return false;
  return true;
}

void keep_minimal_orders(OrderSet& s) {
  dedupe_orders(s);
  OrderSet out;
  for (const auto& o : s) {
    bool dominated = false;
    for (const auto& p : s) {
      if (&p == &o || p == o) continue;
      if (order_subset(p, o)) {
        dominated = true;
        break;
      }
    }
    if (!dominated) out.push_back(o);
  }
  s = std::move(out);
}

constexpr std::size_t kOrderSetCap = 1u << 14;

// Minimal sufficient orders for a node given the carrier restricted to the
// node's BAS descendants.
class OrderSynth {
 public:
  explicit OrderSynth(const AttackTree& t) : t_(t), desc_(t.bas_desc_masks()) {}

  const OrderSet& min_orders(uint32_t v, Mask local) {
    const uint64_t key = (static_cast<uint64_t>(v) << 32) | local;
    auto it = memo_.find(key);
    if (it != memo_.end()) return it->second;
    OrderSet result;
    const std::size_t n = t_.bas_count();
    switch (t_.type_of(v)) {
      case NodeType::Bas:
        if (local == (1u << t_.bas_index(v))) result.push_back(std::vector<Mask>(n, 0));
        break;
      case NodeType::Or: {
        for (uint32_t c : t_.children_of(v)) {
          const OrderSet& sub = min_orders(c, local & desc_[c]);
          result.insert(result.end(), sub.begin(), sub.end());
        }
        keep_minimal_orders(result);
        break;
      }
      case NodeType::And:
      case NodeType::Sand: {
        const auto& ch = t_.children_of(v);
        std::vector<Mask> forced_lhs, forced_rhs;
        if (t_.type_of(v) == NodeType::Sand) {
          for (std::size_t i = 0; i + 1 < ch.size(); ++i) {
            forced_lhs.push_back(local & desc_[ch[i]]);
            forced_rhs.push_back(local & desc_[ch[i + 1]]);
          }
        }
        result.push_back(std::vector<Mask>(n, 0));
        for (uint32_t c : ch) {
          const OrderSet& sub = min_orders(c, local & desc_[c]);
          if (sub.empty()) {
            result.clear();
            break;
          }
          OrderSet next;
          for (const auto& acc : result) {
            for (const auto& o : sub) {
              std::vector<Mask> merged = acc;
              for (std::size_t i = 0; i < n; ++i) merged[i] |= o[i];
              next.push_back(std::move(merged));
            }
          }
          if (next.size() > kOrderSetCap)
            fail(Errc::cap_exceeded, "order synthesis blew up at node '" + t_.id_of(v) + "'");
          result = std::move(next);
          dedupe_orders(result);
        }
        if (!result.empty() && !forced_lhs.empty()) {
          OrderSet constrained;
          for (auto o : result) {
            bool ok = true;
            for (std::size_t i = 0; i < forced_lhs.size() && ok; ++i) {
              for (uint32_t a : mask_bits(forced_lhs[i])) {
                o[a] |= forced_rhs[i];
                if (o[a] & (1u << a)) {
                  ok = false;
                  break;
                }
              }
            }
            if (ok && close_strict(o)) constrained.push_back(std::move(o));
          }
          result = std::move(constrained);
        } else if (!result.empty()) {
          OrderSet closed;
          for (auto o : result)
            if (close_strict(o)) closed.push_back(std::move(o));
          result = std::move(closed);
        }
        keep_minimal_orders(result);
        break;
      }
    }
    return memo_.emplace(key, std::move(result)).first->second;
  }

 private:
  const AttackTree& t_;
  const std::vector<Mask>& desc_;
  std::unordered_map<uint64_t, OrderSet> memo_;
};

std::vector<Mask> masks_by_popcount(uint32_t n) {
  std::vector<Mask> all(std::size_t(1) << n);
  for (Mask m = 0; m < all.size(); ++m) all[m] = m;
  std::stable_sort(all.begin(), all.end(),
                   [](Mask a, Mask b) { return popcount(a) < popcount(b); });
  return all;
}

}  // namespace

std::vector<Poset> minimal_attacks_dat(const AttackTree& t, std::vector<std::string>* warnings) {
  const uint32_t n = static_cast<uint32_t>(t.bas_count());
  if (n > 32) fail(Errc::cap_exceeded, "poset semantics limited to 32 BAS");
  if (n > kDatOracleWarnBas && warnings)
    warnings->push_back("minimal-attack synthesis over " + std::to_string(n) +
                        " BAS enumerates 2^" + std::to_string(n) + " carriers");

  OrderSynth synth(t);
  MinimalCollector keep;
  for (Mask carrier : masks_by_popcount(n)) {
    for (const auto& o : synth.min_orders(t.root(), carrier)) {
      keep.add(Poset{carrier, o});
    }
  }
  return keep.take();
}

std::vector<Poset> minimal_attacks_dat_by_enumeration(const AttackTree& t) {
  const uint32_t n = static_cast<uint32_t>(t.bas_count());
  if (n > kDatOracleWarnBas)
    fail(Errc::cap_exceeded, "exhaustive minimal-attack enumeration limited to " +
                                 std::to_string(kDatOracleWarnBas) + " BAS");
  const auto& desc = t.bas_desc_masks();

  // every order pair a SAND gate can impose, per consecutive child pair
  std::vector<std::pair<Mask, Mask>> products;
  for (uint32_t v = 0; v < t.node_count(); ++v) {
    if (t.type_of(v) != NodeType::Sand) continue;
    const auto& ch = t.children_of(v);
    for (std::size_t i = 0; i + 1 < ch.size(); ++i)
      products.emplace_back(desc[ch[i]], desc[ch[i + 1]]);
  }
  if (products.size() > 16)
    fail(Errc::cap_exceeded, "too many sequential constraints for exhaustive enumeration");

  MinimalCollector keep;
  for (Mask carrier : masks_by_popcount(n)) {
    std::set<std::vector<Mask>> seen;
    for (Mask sel = 0; sel < (1u << products.size()); ++sel) {
      std::vector<Mask> succ(n, 0);
      for (std::size_t p = 0; p < products.size(); ++p) {
        if (!((sel >> p) & 1u)) continue;
        Mask lhs = products[p].first & carrier;
        Mask rhs = products[p].second & carrier;
        for (uint32_t a : mask_bits(lhs)) succ[a] |= rhs;
      }
      if (!close_strict(succ)) continue;
      if (!seen.insert(succ).second) continue;
      Poset cand{carrier, std::move(succ)};
      if (structure_function_dat(t, cand, t.root())) keep.add(cand);
    }
  }
  return keep.take();
}

std::vector<Poset> successful_attacks_dat(const AttackTree& t) {
  require_bas_cap(t, kDatFullEnumCap, "full poset enumeration");
  const uint32_t n = static_cast<uint32_t>(t.bas_count());
  std::vector<Poset> out;

  for (Mask carrier = 0; carrier < (1u << n); ++carrier) {
    const std::vector<Mask> elems = mask_bits(carrier);
    const uint32_t k = static_cast<uint32_t>(elems.size());
    // strict partial orders over local indices 0..k-1, built element by
    // element: each new element picks a down-set and an up-set
    std::vector<std::vector<Mask>> orders{{}};
    for (uint32_t i = 0; i < k; ++i) {
      std::vector<std::vector<Mask>> grown;
      for (const auto& o : orders) {
        std::vector<Mask> pred(i, 0);
        for (uint32_t a = 0; a < i; ++a)
          for (uint32_t b = 0; b < i; ++b)
            if (o[b] & (1u << a)) pred[a] |= 1u << b;
        for (Mask down = 0; down < (1u << i); ++down) {
          bool down_ok = true;
          for (uint32_t a = 0; a < i && down_ok; ++a)
            if ((down >> a) & 1u) down_ok = (pred[a] & ~down) == 0;
          if (!down_ok) continue;
          Mask rest = static_cast<Mask>((1u << i) - 1) & ~down;
          for (Mask up = rest;; up = (up - 1) & rest) {
            bool ok = true;
            // up-set: successors of an up element stay inside the up-set
            for (uint32_t a = 0; a < i && ok; ++a)
              if ((up >> a) & 1u) ok = (o[a] & ~up) == 0;
            // every down element must already precede every up element
            for (uint32_t a = 0; a < i && ok; ++a)
              if ((down >> a) & 1u) ok = (up & ~o[a]) == 0;
            if (ok) {
              std::vector<Mask> ext = o;
              ext.push_back(up);
              for (uint32_t a = 0; a < i; ++a)
                if ((down >> a) & 1u) ext[a] |= 1u << i;
              grown.push_back(std::move(ext));
            }
            if (up == 0) break;
          }
        }
      }
      orders = std::move(grown);
    }
    for (const auto& o : orders) {
      Poset p{carrier, std::vector<Mask>(n, 0)};
      for (uint32_t i = 0; i < k; ++i)
        for (uint32_t j = 0; j < k; ++j)
          if (o[i] & (1u << j)) p.succ[elems[i]] |= 1u << elems[j];
      if (structure_function_dat(t, p, t.root())) out.push_back(std::move(p));
    }
  }
  std::sort(out.begin(), out.end(),
            [](const Poset& a, const Poset& b) { return poset_cmp(a, b) < 0; });
  return out;
}

std::vector<Poset> minimal_elements(std::vector<Poset> suite) {
  std::vector<Poset> out;
  for (const Poset& p : suite) {
    bool minimal = true;
    for (const Poset& q : suite) {
      if (poset_eq(p, q)) continue;
      if (poset_le(q, p)) {
        minimal = false;
        break;
      }
    }
    if (minimal) out.push_back(p);
  }
  std::sort(out.begin(), out.end(),
            [](const Poset& a, const Poset& b) { return poset_cmp(a, b) < 0; });
  return out;
}

std::vector<std::vector<uint32_t>> maximal_chains(const Poset& attack) {
  const uint32_t n = static_cast<uint32_t>(attack.succ.size());
  std::vector<Mask> cover(n, 0);
  for (uint32_t a = 0; a < n; ++a) {
    if (!((attack.bas >> a) & 1u)) continue;
    for (uint32_t b : mask_bits(attack.succ[a] & attack.bas)) {
      bool direct = true;
      for (uint32_t c : mask_bits(attack.succ[a] & attack.bas))
        if (attack.succ[c] & (1u << b)) {
          direct = false;
          break;
        }
      if (direct) cover[a] |= 1u << b;
    }
  }
  Mask has_pred = 0;
  for (uint32_t a = 0; a < n; ++a)
    if ((attack.bas >> a) & 1u) has_pred |= attack.succ[a] & attack.bas;

  std::vector<std::vector<uint32_t>> chains;
  std::vector<uint32_t> cur;
  std::function<void(uint32_t)> grow = [&](uint32_t a) {
    cur.push_back(a);
    if ((cover[a] & attack.bas) == 0) {
      chains.push_back(cur);
    } else {
      for (uint32_t b : mask_bits(cover[a] & attack.bas)) grow(b);
    }
    cur.pop_back();
  };
  for (uint32_t a : mask_bits(attack.bas & ~has_pred)) grow(a);
  return chains;
}

Attribution lift_attribution(const AttackTree& t, const RawAttribution& raw,
                             const AttributeDomain& d) {
  Attribution out;
  out.reserve(t.bas_count());
  for (const std::string& id : t.bas_ids()) {
    if (d.lift_bas) {
      out.push_back(d.lift_bas(id));
      continue;
    }
    auto it = raw.find(id);
    if (it == raw.end()) fail(Errc::validation, "attribution missing BAS '" + id + "'");
    out.push_back(d.lift ? d.lift(it->second) : it->second);
  }
  return out;
}

MetricResult metric_from_suite_sat(const std::vector<Mask>& suite, const Attribution& attr,
                                   const AttributeDomain& d) {
  if (suite.empty()) return MetricResult{false, Value{}};
  bool first_attack = true;
  Value total;
  for (Mask m : suite) {
    bool first = true;
    Value acc;
    for (uint32_t i : mask_bits(m)) {
      acc = first ? attr[i] : d.conj(acc, attr[i]);
      first = false;
    }
    if (first) fail(Errc::internal, "empty attack in suite");
    total = first_attack ? acc : d.disj(total, acc);
    first_attack = false;
  }
  return MetricResult{true, total};
}

MetricResult metric_from_suite_dat(const std::vector<Poset>& suite, const Attribution& attr,
                                   const AttributeDomain& d) {
  if (!d.dynamic) fail(Errc::domain, "dynamic attribute domain required");
  if (suite.empty()) return MetricResult{false, Value{}};
  bool first_attack = true;
  Value total;
  for (const Poset& o : suite) {
    auto chains = maximal_chains(o);
    if (chains.empty()) fail(Errc::internal, "attack without chains");
    bool first_chain = true;
    Value acc;
    for (const auto& chain : chains) {
      Value s = attr[chain[0]];
      for (std::size_t i = 1; i < chain.size(); ++i) s = d.seq(s, attr[chain[i]]);
      acc = first_chain ? s : d.conj(acc, s);
      first_chain = false;
    }
    total = first_attack ? acc : d.disj(total, acc);
    first_attack = false;
  }
  return MetricResult{true, total};
}

Rat total_probability_oracle(const AttackTree& t, const std::vector<Rat>& prob) {
  require_bas_cap(t, kSatEnumCap, "subset enumeration");
  for (const Rat& p : prob)
    if (p < 0 || p > 1) fail(Errc::domain, "probability attribute must lie in [0, 1]");
  const uint32_t n = static_cast<uint32_t>(t.bas_count());
  Rat total = 0;
  for (Mask m = 0; m < (1u << n); ++m) {
    if (!structure_function_sat(t, m, t.root())) continue;
    Rat w = 1;
    for (uint32_t i = 0; i < n; ++i) w *= ((m >> i) & 1u) ? prob[i] : Rat(1 - prob[i]);
    total += w;
  }
  return total;
}

}  // namespace atm
