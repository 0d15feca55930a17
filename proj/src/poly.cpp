#include "ffcorr/poly.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <limits>

#include "ffcorr/error.hpp"

namespace ffcorr {

bool is_prime_u32(std::uint32_t n) noexcept {
  if (n < 2) return false;
  for (std::uint32_t d = 2; d * d <= n; ++d) {
    if (n % d == 0) return false;
  }
  return true;
}

FieldSpec::FieldSpec(std::uint32_t p) : p_(p) {
  if (p < 2 || p > 251 || !is_prime_u32(p)) {
    throw ValidationError("field modulus must be a prime in [2, 251], got " + std::to_string(p));
  }
  for (std::uint32_t a = 1; a < p; ++a) {
    for (std::uint32_t b = 1; b < p; ++b) {
      if ((a * b) % p == 1) {
        inv_[a] = static_cast<std::uint8_t>(b);
        break;
      }
    }
  }
}

unsigned FieldSpec::max_exponent() const noexcept {
  unsigned n = 0;
  std::uint64_t v = 1;
  const std::uint64_t limit = std::uint64_t{1} << 63;
  while (v <= (limit - 1) / p_) {
    v *= p_;
    ++n;
  }
  return n;
}

std::uint64_t FieldSpec::pow(unsigned n) const {
  if (n > max_exponent()) {
    throw BudgetError(std::to_string(p_) + "^" + std::to_string(n) + " exceeds 63 bits");
  }
  std::uint64_t v = 1;
  for (unsigned i = 0; i < n; ++i) v *= p_;
  return v;
}

namespace {

void trim(std::vector<std::uint8_t>& c) {
  while (!c.empty() && c.back() == 0) c.pop_back();
}

std::uint8_t inverse_mod(std::uint8_t a, std::uint32_t p) {
  // Fermat: a^(p-2).
  std::uint32_t result = 1, base = a, e = p - 2;
  while (e) {
    if (e & 1) result = result * base % p;
    base = base * base % p;
    e >>= 1;
  }
  return static_cast<std::uint8_t>(result);
}

void require_same_field(const Poly& a, const Poly& b) {
  if (a.modulus() != b.modulus()) {
    throw ValidationError("polynomials over different fields");
  }
}

}  // namespace

Poly::Poly(std::uint32_t p, std::vector<std::uint8_t> coeffs) : p_(p), c_(std::move(coeffs)) {
  for (auto c : c_) {
    if (c >= p_) throw ValidationError("coefficient " + std::to_string(c) + " out of range for p=" + std::to_string(p_));
  }
  trim(c_);
}

Poly Poly::monomial(std::uint32_t p, unsigned e, std::uint8_t c) {
  std::vector<std::uint8_t> v(e + 1, 0);
  v[e] = c;
  return Poly(p, std::move(v));
}

Poly parse_poly(std::string_view text, const FieldSpec& field) {
  const std::uint32_t p = field.p();
  auto fail = [&](const std::string& why) -> Poly {
    throw ValidationError("cannot parse polynomial '" + std::string(text) + "': " + why);
  };
  if (text == "0") return Poly::zero(p);
  if (text.empty()) return fail("empty input");

  std::vector<std::uint8_t> coeffs;
  std::optional<unsigned> prev_exp;
  std::size_t pos = 0;
  while (true) {
    // coefficient
    std::uint32_t coef = 1;
    bool has_coef = false;
    if (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) {
      std::size_t end = pos;
      while (end < text.size() && std::isdigit(static_cast<unsigned char>(text[end]))) ++end;
      auto [ptr, ec] = std::from_chars(text.data() + pos, text.data() + end, coef);
      if (ec != std::errc()) return fail("bad coefficient");
      (void)ptr;
      has_coef = true;
      pos = end;
    }
    unsigned exp = 0;
    if (pos < text.size() && text[pos] == 'x') {
      ++pos;
      exp = 1;
      if (pos < text.size() && text[pos] == '^') {
        ++pos;
        std::size_t end = pos;
        while (end < text.size() && std::isdigit(static_cast<unsigned char>(text[end]))) ++end;
        if (end == pos) return fail("missing exponent");
        auto [ptr, ec] = std::from_chars(text.data() + pos, text.data() + end, exp);
        if (ec != std::errc()) return fail("bad exponent");
        (void)ptr;
        if (exp < 2) return fail("exponents 0 and 1 are written without '^'");
        pos = end;
      }
      if (has_coef && coef == 1) return fail("coefficient 1 is omitted");
    } else if (!has_coef) {
      return fail("expected a term at position " + std::to_string(pos));
    }
    if (coef == 0) return fail("zero terms are omitted");
    if (coef >= p) {
      throw ValidationError("coefficient " + std::to_string(coef) + " out of range for p=" + std::to_string(p));
    }
    if (prev_exp && exp >= *prev_exp) return fail("terms must have strictly descending degree");
    if (exp > 4096) return fail("degree too large");
    if (coeffs.size() <= exp) coeffs.resize(exp + 1, 0);
    coeffs[exp] = static_cast<std::uint8_t>(coef);
    prev_exp = exp;
    if (pos == text.size()) break;
    if (text[pos] != '+') return fail("expected '+' at position " + std::to_string(pos));
    ++pos;
  }
  return Poly(p, std::move(coeffs));
}

std::string format_poly(const Poly& f) {
  if (f.is_zero()) return "0";
  std::string out;
  const auto c = f.coeffs();
  for (std::size_t i = c.size(); i-- > 0;) {
    if (c[i] == 0) continue;
    if (!out.empty()) out += '+';
    if (i == 0) {
      out += std::to_string(c[i]);
      continue;
    }
    if (c[i] != 1) out += std::to_string(c[i]);
    out += 'x';
    if (i > 1) out += "^" + std::to_string(i);
  }
  return out;
}

Poly operator+(const Poly& a, const Poly& b) {
  require_same_field(a, b);
  const std::uint32_t p = a.modulus();
  std::vector<std::uint8_t> c(std::max(a.coeffs().size(), b.coeffs().size()), 0);
  for (std::size_t i = 0; i < c.size(); ++i) {
    c[i] = static_cast<std::uint8_t>((a.coeff(i) + b.coeff(i)) % p);
  }
  return Poly(p, std::move(c));
}

Poly operator-(const Poly& a) {
  const std::uint32_t p = a.modulus();
  std::vector<std::uint8_t> c(a.coeffs().begin(), a.coeffs().end());
  for (auto& v : c) v = static_cast<std::uint8_t>((p - v) % p);
  return Poly(p, std::move(c));
}

Poly operator-(const Poly& a, const Poly& b) { return a + (-b); }

Poly operator*(const Poly& a, const Poly& b) {
  require_same_field(a, b);
  const std::uint32_t p = a.modulus();
  if (a.is_zero() || b.is_zero()) return Poly::zero(p);
  const auto ca = a.coeffs();
  const auto cb = b.coeffs();
  std::vector<std::uint32_t> acc(ca.size() + cb.size() - 1, 0);
  for (std::size_t i = 0; i < ca.size(); ++i) {
    if (ca[i] == 0) continue;
    for (std::size_t j = 0; j < cb.size(); ++j) {
      acc[i + j] = (acc[i + j] + std::uint32_t{ca[i]} * cb[j]) % p;
    }
  }
  std::vector<std::uint8_t> c(acc.begin(), acc.end());
  return Poly(p, std::move(c));
}

Poly scale(const Poly& a, std::uint8_t s) {
  const std::uint32_t p = a.modulus();
  std::vector<std::uint8_t> c(a.coeffs().begin(), a.coeffs().end());
  for (auto& v : c) v = static_cast<std::uint8_t>(std::uint32_t{v} * s % p);
  return Poly(p, std::move(c));
}

DivMod divmod(const Poly& a, const Poly& b) {
  require_same_field(a, b);
  if (b.is_zero()) throw ValidationError("division by the zero polynomial");
  const std::uint32_t p = a.modulus();
  const auto cb = b.coeffs();
  const std::size_t db = cb.size() - 1;
  std::vector<std::uint8_t> r(a.coeffs().begin(), a.coeffs().end());
  if (r.size() < cb.size()) return {Poly::zero(p), a};
  std::vector<std::uint8_t> q(r.size() - db, 0);
  const std::uint32_t lead_inv = inverse_mod(cb.back(), p);
  for (std::size_t i = r.size(); i-- > db;) {
    const std::uint32_t t = std::uint32_t{r[i]} * lead_inv % p;
    if (t == 0) continue;
    q[i - db] = static_cast<std::uint8_t>(t);
    for (std::size_t j = 0; j <= db; ++j) {
      r[i - db + j] = static_cast<std::uint8_t>((r[i - db + j] + p * p - t * cb[j]) % p);
    }
  }
  r.resize(db);
  return {Poly(p, std::move(q)), Poly(p, std::move(r))};
}

Poly operator%(const Poly& a, const Poly& b) { return divmod(a, b).remainder; }

Poly make_monic(const Poly& a) {
  if (a.is_zero() || a.is_monic()) return a;
  return scale(a, inverse_mod(a.leading(), a.modulus()));
}

Poly gcd(const Poly& a, const Poly& b) {
  require_same_field(a, b);
  if (a.is_zero() && b.is_zero()) throw ValidationError("gcd(0, 0) is undefined");
  Poly u = a, v = b;
  while (!v.is_zero()) {
    Poly r = u % v;
    u = std::move(v);
    v = std::move(r);
  }
  return make_monic(u);
}

ExtendedGcd extended_gcd(const Poly& a, const Poly& b) {
  require_same_field(a, b);
  if (a.is_zero() && b.is_zero()) throw ValidationError("gcd(0, 0) is undefined");
  const std::uint32_t p = a.modulus();
  Poly r0 = a, r1 = b;
  Poly s0 = Poly::constant(p, 1), s1 = Poly::zero(p);
  Poly t0 = Poly::zero(p), t1 = Poly::constant(p, 1);
  while (!r1.is_zero()) {
    DivMod qr = divmod(r0, r1);
    Poly s2 = s0 - qr.quotient * s1;
    Poly t2 = t0 - qr.quotient * t1;
    r0 = std::move(r1);
    r1 = std::move(qr.remainder);
    s0 = std::move(s1);
    s1 = std::move(s2);
    t0 = std::move(t1);
    t1 = std::move(t2);
  }
  const std::uint8_t lc_inv = inverse_mod(r0.leading(), p);
  return {scale(r0, lc_inv), scale(s0, lc_inv), scale(t0, lc_inv)};
}

GcdLcm gcd_lcm(const Poly& a, const Poly& b) {
  Poly g = gcd(a, b);
  if (a.is_zero() || b.is_zero()) return {std::move(g), Poly::zero(a.modulus())};
  Poly l = make_monic(divmod(a, g).quotient * b);
  return {std::move(g), std::move(l)};
}

std::uint64_t norm(const Poly& f) {
  if (f.is_zero()) return 0;
  return FieldSpec(f.modulus()).pow(*f.degree());
}

Poly monic_at(const FieldSpec& field, unsigned n, std::uint64_t index) {
  const std::uint32_t p = field.p();
  std::vector<std::uint8_t> c(n + 1, 0);
  for (unsigned i = 0; i < n; ++i) {
    c[i] = static_cast<std::uint8_t>(index % p);
    index /= p;
  }
  c[n] = 1;
  return Poly(p, std::move(c));
}

MonicKey monic_key(const Poly& f) {
  if (!f.is_monic()) throw ValidationError("monic_key requires a monic polynomial");
  const unsigned n = *f.degree();
  std::uint64_t idx = 0;
  const auto c = f.coeffs();
  for (unsigned i = n; i-- > 0;) idx = idx * f.modulus() + c[i];
  return {n, idx};
}

Poly from_key(const FieldSpec& field, const MonicKey& key) { return monic_at(field, key.degree, key.index); }

std::vector<Poly> enumerate_monic(const FieldSpec& field, unsigned n, std::uint64_t lo, std::uint64_t hi) {
  const std::uint64_t total = field.pow(n);
  if (lo > hi || hi > total) throw ValidationError("enumeration range out of bounds");
  std::vector<Poly> out;
  out.reserve(hi - lo);
  for (std::uint64_t i = lo; i < hi; ++i) out.push_back(monic_at(field, n, i));
  return out;
}

std::vector<Poly> enumerate_monic(const FieldSpec& field, unsigned n) {
  return enumerate_monic(field, n, 0, field.pow(n));
}

}  // namespace ffcorr
