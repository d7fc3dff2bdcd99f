#include "atm/rational.hpp"

#include <cctype>
#include <cstdlib>

#include "atm/errors.hpp"

namespace atm {

namespace {

BigInt pow10(long e) {
  BigInt r = 1;
  for (long i = 0; i < e; ++i) r *= 10;
  return r;
}

}  // namespace

Rat rat_from_text(const std::string& text) {
  std::size_t i = 0;
  const std::size_t n = text.size();
  auto bad = [&]() -> Rat { fail(Errc::validation, "not a number: '" + text + "'"); };
  if (n == 0) return bad();

  bool neg = false;
  if (text[i] == '+' || text[i] == '-') {
    neg = text[i] == '-';
    ++i;
  }

  std::string int_part, frac_part;
  while (i < n && std::isdigit(static_cast<unsigned char>(text[i]))) int_part += text[i++];

  if (i < n && text[i] == '/') {
    // exact fraction form p/q
    ++i;
    std::string den;
    while (i < n && std::isdigit(static_cast<unsigned char>(text[i]))) den += text[i++];
    if (int_part.empty() || den.empty() || i != n) return bad();
    BigInt q(den);
    if (q == 0) return bad();
    Rat r(BigInt(int_part), q);
    return neg ? Rat(-r) : r;
  }

  if (i < n && text[i] == '.') {
    ++i;
    while (i < n && std::isdigit(static_cast<unsigned char>(text[i]))) frac_part += text[i++];
  }
  if (int_part.empty() && frac_part.empty()) return bad();

  long exp10 = 0;
  if (i < n && (text[i] == 'e' || text[i] == 'E')) {
    ++i;
    bool eneg = false;
    if (i < n && (text[i] == '+' || text[i] == '-')) {
      eneg = text[i] == '-';
      ++i;
    }
    std::string es;
    while (i < n && std::isdigit(static_cast<unsigned char>(text[i]))) es += text[i++];
    if (es.empty() || es.size() > 6) return bad();
    exp10 = std::strtol(es.c_str(), nullptr, 10);
    if (eneg) exp10 = -exp10;
  }
  if (i != n) return bad();

  BigInt num(int_part.empty() ? "0" : int_part);
  num *= pow10(static_cast<long>(frac_part.size()));
  if (!frac_part.empty()) num += BigInt(frac_part);
  BigInt den = pow10(static_cast<long>(frac_part.size()));
  long e = exp10;
  if (e > 0) num *= pow10(e);
  if (e < 0) den *= pow10(-e);
  Rat r(num, den);
  return neg ? Rat(-r) : r;
}

std::string rat_to_text(const Rat& r) {
  const BigInt num = boost::multiprecision::numerator(r);
  const BigInt den = boost::multiprecision::denominator(r);
  if (den == 1) return num.str();
  return num.str() + "/" + den.str();
}

std::string rat_to_decimal(const Rat& r, int sig) {
  if (sig < 1) sig = 1;
  if (r == 0) return "0";
  const bool neg = r < 0;
  BigInt p = boost::multiprecision::numerator(r);
  if (neg) p = -p;
  const BigInt q = boost::multiprecision::denominator(r);

  // exponent e with 10^e <= p/q < 10^(e+1)
  long e = static_cast<long>(p.str().size()) - static_cast<long>(q.str().size());
  auto cmp_pow = [&](long k) {
    // sign of p/q - 10^k
    if (k >= 0) return p.compare(q * pow10(k));
    return (p * pow10(-k)).compare(q);
  };
  while (cmp_pow(e) < 0) --e;
  while (cmp_pow(e + 1) >= 0) ++e;

  // d = round(p/q * 10^(sig-1-e)), half up
  const long shift = sig - 1 - e;
  BigInt num = p, den = q;
  if (shift >= 0) num *= pow10(shift);
  if (shift < 0) den *= pow10(-shift);
  BigInt d = (2 * num + den) / (2 * den);
  std::string digits = d.str();
  if (static_cast<long>(digits.size()) > sig) {
    // rounding bumped 999… to 1000…
    digits.pop_back();
    ++e;
  }

  std::string out;
  if (e >= 0 && e <= 8) {
    if (e + 1 >= static_cast<long>(digits.size())) {
      out = digits + std::string(e + 1 - digits.size(), '0');
    } else {
      out = digits.substr(0, e + 1) + "." + digits.substr(e + 1);
    }
  } else if (e < 0 && e >= -5) {
    out = "0." + std::string(-e - 1, '0') + digits;
  } else {
    std::string mant = digits.substr(0, 1);
    if (digits.size() > 1) mant += "." + digits.substr(1);
    while (mant.find('.') != std::string::npos && mant.back() == '0') mant.pop_back();
    if (mant.back() == '.') mant.pop_back();
    out = mant + "e" + std::to_string(e);
  }
  // trim trailing zeros of a fractional part
  if (out.find('.') != std::string::npos && out.find('e') == std::string::npos) {
    while (out.back() == '0') out.pop_back();
    if (out.back() == '.') out.pop_back();
  }
  return neg ? "-" + out : out;
}

}  // namespace atm
