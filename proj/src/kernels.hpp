#pragma once

// Allocation-free kernels for monic polynomials addressed by enumeration index.
// For p = 2 a polynomial of degree d is the bit pattern (1 << d) | index.
// For odd p the working form is a fixed array of base-p digits.

#include <array>
#include <bit>
#include <cstdint>

namespace ffcorr::detail {

constexpr unsigned kMaxDigits = 64;

inline int gf2_degree(std::uint64_t a) noexcept { return a ? 63 - std::countl_zero(a) : -1; }

inline std::uint64_t gf2_mul(std::uint64_t a, std::uint64_t b) noexcept {
  if (std::popcount(a) > std::popcount(b)) std::swap(a, b);
  std::uint64_t r = 0;
  while (a) {
    const int s = std::countr_zero(a);
    r ^= b << s;
    a &= a - 1;
  }
  return r;
}

// If b divides a, stores the quotient and returns true.
inline bool gf2_divides(std::uint64_t a, std::uint64_t b, std::uint64_t& quot) noexcept {
  const int db = gf2_degree(b);
  int da = gf2_degree(a);
  std::uint64_t q = 0;
  while (da >= db) {
    const int s = da - db;
    a ^= b << s;
    q |= std::uint64_t{1} << s;
    da = gf2_degree(a);
  }
  if (a != 0) return false;
  quot = q;
  return true;
}

inline std::uint64_t gf2_mod(std::uint64_t a, std::uint64_t b) noexcept {
  const int db = gf2_degree(b);
  int da = gf2_degree(a);
  while (da >= db) {
    a ^= b << (da - db);
    da = gf2_degree(a);
  }
  return a;
}

// Dense digits of a polynomial over F_p, c[0] = constant term.
struct Digits {
  std::array<std::uint8_t, kMaxDigits> c{};
  int degree = -1;
};

inline Digits digits_of_monic(std::uint32_t p, unsigned n, std::uint64_t index) noexcept {
  Digits d;
  for (unsigned i = 0; i < n; ++i) {
    d.c[i] = static_cast<std::uint8_t>(index % p);
    index /= p;
  }
  d.c[n] = 1;
  d.degree = static_cast<int>(n);
  return d;
}

// Index of the monic polynomial in d (leading coefficient assumed 1).
inline std::uint64_t index_of_digits(std::uint32_t p, const Digits& d) noexcept {
  std::uint64_t idx = 0;
  for (int i = d.degree - 1; i >= 0; --i) idx = idx * p + d.c[i];
  return idx;
}

// Divides a by monic b in place when b | a; returns whether it divided.
inline bool digits_divide_monic(std::uint32_t p, Digits& a, const Digits& b) noexcept {
  if (a.degree < b.degree) return false;
  Digits r = a;
  Digits q;
  q.degree = a.degree - b.degree;
  for (int i = a.degree; i >= b.degree; --i) {
    const std::uint32_t t = r.c[i];
    if (t == 0) continue;
    q.c[i - b.degree] = static_cast<std::uint8_t>(t);
    const int off = i - b.degree;
    for (int j = 0; j <= b.degree; ++j) {
      r.c[off + j] = static_cast<std::uint8_t>((r.c[off + j] + p * p - t * b.c[j]) % p);
    }
  }
  for (int i = 0; i < b.degree; ++i) {
    if (r.c[i] != 0) return false;
  }
  a = q;
  return true;
}

inline Digits digits_mul(std::uint32_t p, const Digits& a, const Digits& b) noexcept {
  Digits r;
  r.degree = a.degree + b.degree;
  std::array<std::uint32_t, kMaxDigits> acc{};
  for (int i = 0; i <= a.degree; ++i) {
    if (a.c[i] == 0) continue;
    for (int j = 0; j <= b.degree; ++j) acc[i + j] += std::uint32_t{a.c[i]} * b.c[j];
  }
  for (int i = 0; i <= r.degree; ++i) r.c[i] = static_cast<std::uint8_t>(acc[i] % p);
  return r;
}

// Index of (f + h) where f is monic of degree n and deg h < n: digit-wise
// addition without carry.
inline std::uint64_t shifted_index(std::uint32_t p, unsigned n, std::uint64_t f_index,
                                   const std::array<std::uint8_t, kMaxDigits>& h) noexcept {
  if (p == 2) {
    std::uint64_t hb = 0;
    for (unsigned i = 0; i < n; ++i) hb |= std::uint64_t{h[i]} << i;
    return f_index ^ hb;
  }
  std::uint64_t out = 0, scale = 1;
  for (unsigned i = 0; i < n; ++i) {
    const std::uint32_t digit = static_cast<std::uint32_t>(f_index % p);
    f_index /= p;
    out += ((digit + h[i]) % p) * scale;
    scale *= p;
  }
  return out;
}

}  // namespace ffcorr::detail
