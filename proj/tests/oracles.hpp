#pragma once

// Brute-force reference implementations used as expected values by the unit
// and acceptance tests. They rely only on Poly arithmetic and exhaustive
// search, never on the sieve, the factorizer or the product formulas.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <cstdlib>
#include <optional>
#include <random>
#include <utility>
#include <vector>

#include "ffcorr/arith.hpp"
#include "ffcorr/poly.hpp"

namespace oracle {

using ffcorr::Complex;
using ffcorr::FieldSpec;
using ffcorr::Poly;

/// Seed for randomized tests; FFCORR_TEST_SEED overrides the default.
inline std::uint64_t test_seed() {
  if (const char* s = std::getenv("FFCORR_TEST_SEED"); s && *s) return std::strtoull(s, nullptr, 10);
  return 20240611;
}

inline std::uint64_t ipow(std::uint64_t b, unsigned e) {
  std::uint64_t r = 1;
  while (e--) r *= b;
  return r;
}

/// Polynomial with the base-p digits of `digits` as coefficients (length len).
inline Poly from_digits(std::uint32_t p, unsigned len, std::uint64_t digits) {
  std::vector<std::uint8_t> c(len);
  for (unsigned i = 0; i < len; ++i, digits /= p) c[i] = static_cast<std::uint8_t>(digits % p);
  return Poly(p, std::move(c));
}

/// Monic polynomial of degree n: x^n plus the digit polynomial.
inline Poly monic(std::uint32_t p, unsigned n, std::uint64_t digits) {
  std::vector<std::uint8_t> c(n + 1);
  for (unsigned i = 0; i < n; ++i, digits /= p) c[i] = static_cast<std::uint8_t>(digits % p);
  c[n] = 1;
  return Poly(p, std::move(c));
}

inline std::vector<Poly> all_monic(std::uint32_t p, unsigned n) {
  std::vector<Poly> out;
  for (std::uint64_t i = 0; i < ipow(p, n); ++i) out.push_back(monic(p, n, i));
  return out;
}

/// Irreducible iff no monic of degree 1..deg/2 divides it.
inline bool is_irreducible(const Poly& f) {
  if (f.is_zero() || *f.degree() == 0) return false;
  const std::uint32_t p = f.modulus();
  const unsigned n = *f.degree();
  for (unsigned d = 1; 2 * d <= n; ++d) {
    for (std::uint64_t i = 0; i < ipow(p, d); ++i) {
      if ((f % monic(p, d, i)).is_zero()) return false;
    }
  }
  return true;
}

inline std::uint64_t count_irreducible(std::uint32_t p, unsigned d) {
  std::uint64_t c = 0;
  for (std::uint64_t i = 0; i < ipow(p, d); ++i) c += is_irreducible(monic(p, d, i)) ? 1 : 0;
  return c;
}

/// Monic irreducibles with multiplicities, ascending by (degree, digits).
/// The smallest-degree monic divisor is always irreducible.
inline std::vector<std::pair<Poly, unsigned>> factor(Poly f) {
  std::vector<std::pair<Poly, unsigned>> out;
  const std::uint32_t p = f.modulus();
  while (*f.degree() > 0) {
    Poly g = f;
    bool found = false;
    for (unsigned d = 1; d <= *f.degree() && !found; ++d) {
      for (std::uint64_t i = 0; i < ipow(p, d) && !found; ++i) {
        if ((f % monic(p, d, i)).is_zero()) {
          g = monic(p, d, i);
          found = true;
        }
      }
    }
    unsigned m = 0;
    while (*f.degree() > 0 && (f % g).is_zero()) {
      f = ffcorr::divmod(f, g).quotient;
      ++m;
    }
    out.emplace_back(g, m);
  }
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
    return ffcorr::monic_key(a.first) < ffcorr::monic_key(b.first);
  });
  return out;
}

/// Multiplicative spec evaluated from the brute-force factorization.
inline Complex eval(const ffcorr::FunctionSpec& spec, const Poly& f) {
  Complex v(1.0);
  for (const auto& [P, m] : factor(f)) v *= spec.value(ffcorr::monic_key(P), m);
  return v;
}

inline double eval(const ffcorr::AdditiveSpec& spec, const Poly& f) {
  double v = 0.0;
  for (const auto& [P, m] : factor(f)) v += spec.value(ffcorr::monic_key(P), m);
  return v;
}

/// Phi by its counting definition: residues g (deg g < deg f) coprime to f.
inline std::uint64_t phi(const Poly& f) {
  const std::uint32_t p = f.modulus();
  const unsigned n = *f.degree();
  std::uint64_t c = 0;
  for (std::uint64_t i = 0; i < ipow(p, n); ++i) {
    const Poly g = from_digits(p, n, i);
    if (g.is_zero()) {
      c += n == 0 ? 1 : 0;
      continue;
    }
    if (*ffcorr::gcd(g, f).degree() == 0) ++c;
  }
  return c;
}

/// Sum over the degree-n domain (all monics, or irreducibles) of
/// prod_i psi_i(f + h_i).
inline Complex correlation(std::uint32_t p, unsigned n, bool prime_domain,
                           const std::vector<ffcorr::FunctionSpec>& specs, const std::vector<Poly>& shifts) {
  Complex total(0.0);
  for (const Poly& f : all_monic(p, n)) {
    if (prime_domain && !is_irreducible(f)) continue;
    Complex v(1.0);
    for (std::size_t i = 0; i < specs.size(); ++i) v *= eval(specs[i], f + shifts[i]);
    total += v;
  }
  return total;
}

/// Number of monic f of degree n with g_j | f + h_j for both j.
inline std::uint64_t crt_count(const Poly& g1, const Poly& g2, const Poly& h1, const Poly& h2, unsigned n) {
  std::uint64_t c = 0;
  for (const Poly& f : all_monic(g1.modulus(), n)) {
    if ((f + h1) % g1 == Poly::zero(g1.modulus()) && (f + h2) % g2 == Poly::zero(g1.modulus())) ++c;
  }
  return c;
}

/// Exact number of monic irreducibles of degree d (Moebius inversion),
/// written independently of the library.
inline std::uint64_t necklace(std::uint32_t q, unsigned d) {
  auto mu = [](unsigned m) {
    int sign = 1;
    for (unsigned k = 2; k * k <= m; ++k) {
      if (m % k) continue;
      m /= k;
      if (m % k == 0) return 0;
      sign = -sign;
    }
    return m > 1 ? -sign : sign;
  };
  long double s = 0;
  for (unsigned e = 1; e <= d; ++e) {
    if (d % e == 0) s += mu(d / e) * std::pow(static_cast<long double>(q), e);
  }
  return static_cast<std::uint64_t>(std::llround(s / d));
}

/// Local factor as a literal double sum over (m1, m2) with max(m1, m2) <= depth.
inline Complex local_double_sum(const ffcorr::FunctionSpec& a, const ffcorr::FunctionSpec& b,
                                const ffcorr::MonicKey& P, std::optional<unsigned> k, bool prime_mode,
                                std::uint32_t q, unsigned depth) {
  auto alpha = [&](const ffcorr::FunctionSpec& s, unsigned m) {
    return m == 0 ? Complex(1.0) : s.value(P, m) - s.value(P, m - 1);
  };
  const double x = std::pow(static_cast<double>(q), -static_cast<double>(P.degree));
  Complex sum(0.0);
  for (unsigned m1 = 0; m1 <= depth; ++m1) {
    for (unsigned m2 = 0; m2 <= depth; ++m2) {
      if (k && std::min(m1, m2) > *k) continue;
      const unsigned M = std::max(m1, m2);
      const double w = prime_mode ? (M == 0 ? 1.0 : std::pow(x, M) / (1.0 - x)) : std::pow(x, M);
      sum += alpha(a, m1) * alpha(b, m2) * w;
    }
  }
  return sum;
}

}  // namespace oracle
