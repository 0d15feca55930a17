#pragma once

// Exact arithmetic in F_p[x] for small primes p, plus the fixed enumeration
// of monic polynomials used by every exhaustive computation in the library.

#include <array>
#include <compare>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace ffcorr {

/// Prime field F_p with 2 <= p <= 251.
class FieldSpec {
 public:
  explicit FieldSpec(std::uint32_t p);

  std::uint32_t p() const noexcept { return p_; }
  /// Multiplicative inverse of a nonzero residue.
  std::uint8_t inv(std::uint8_t a) const noexcept { return inv_[a]; }
  /// p^n; throws BudgetError if it does not fit in 63 bits.
  std::uint64_t pow(unsigned n) const;
  /// Largest n with p^n representable (p^n < 2^63).
  unsigned max_exponent() const noexcept;

  friend bool operator==(const FieldSpec& a, const FieldSpec& b) noexcept { return a.p_ == b.p_; }

 private:
  std::uint32_t p_;
  std::array<std::uint8_t, 256> inv_{};
};

/// Polynomial over F_p. coeffs()[i] is the coefficient of x^i; the zero
/// polynomial has no coefficients and no degree.
class Poly {
 public:
  Poly() = default;
  Poly(std::uint32_t p, std::vector<std::uint8_t> coeffs);

  static Poly zero(std::uint32_t p) { return Poly(p, {}); }
  static Poly constant(std::uint32_t p, std::uint8_t c) { return Poly(p, {c}); }
  /// c * x^e.
  static Poly monomial(std::uint32_t p, unsigned e, std::uint8_t c = 1);

  std::uint32_t modulus() const noexcept { return p_; }
  std::span<const std::uint8_t> coeffs() const noexcept { return c_; }
  std::uint8_t coeff(std::size_t i) const noexcept { return i < c_.size() ? c_[i] : 0; }

  bool is_zero() const noexcept { return c_.empty(); }
  bool is_monic() const noexcept { return !c_.empty() && c_.back() == 1; }
  /// Degree, or nullopt for the zero polynomial (degree -infinity).
  std::optional<unsigned> degree() const noexcept {
    if (c_.empty()) return std::nullopt;
    return static_cast<unsigned>(c_.size() - 1);
  }
  std::uint8_t leading() const noexcept { return c_.empty() ? 0 : c_.back(); }

  friend bool operator==(const Poly&, const Poly&) = default;

 private:
  std::uint32_t p_ = 2;
  std::vector<std::uint8_t> c_;
};

/// Identifies a monic polynomial by degree and enumeration index.
struct MonicKey {
  unsigned degree = 0;
  std::uint64_t index = 0;

  friend auto operator<=>(const MonicKey&, const MonicKey&) = default;
};

Poly parse_poly(std::string_view text, const FieldSpec& field);
std::string format_poly(const Poly& f);

Poly operator+(const Poly& a, const Poly& b);
Poly operator-(const Poly& a, const Poly& b);
Poly operator-(const Poly& a);
Poly operator*(const Poly& a, const Poly& b);
Poly scale(const Poly& a, std::uint8_t c);

struct DivMod {
  Poly quotient;
  Poly remainder;
};
/// a = quotient * b + remainder with deg remainder < deg b. Throws on b = 0.
DivMod divmod(const Poly& a, const Poly& b);
Poly operator%(const Poly& a, const Poly& b);

/// Scales a nonzero polynomial to leading coefficient 1; zero stays zero.
Poly make_monic(const Poly& a);

struct GcdLcm {
  Poly gcd;
  Poly lcm;
};
/// Monic gcd and lcm. gcd(0,0) is rejected; lcm with 0 is 0.
GcdLcm gcd_lcm(const Poly& a, const Poly& b);
Poly gcd(const Poly& a, const Poly& b);

struct ExtendedGcd {
  Poly gcd;  // monic
  Poly s;
  Poly t;    // s * a + t * b = gcd
};
ExtendedGcd extended_gcd(const Poly& a, const Poly& b);

/// |f| = p^deg f, and |0| = 0.
std::uint64_t norm(const Poly& f);

/// The monic polynomial of degree n whose lower coefficients are the base-p
/// digits of index (c_0 least significant).
Poly monic_at(const FieldSpec& field, unsigned n, std::uint64_t index);
/// Inverse of monic_at. Requires f monic.
MonicKey monic_key(const Poly& f);
Poly from_key(const FieldSpec& field, const MonicKey& key);

/// Monic polynomials of degree n with enumeration index in [lo, hi).
std::vector<Poly> enumerate_monic(const FieldSpec& field, unsigned n, std::uint64_t lo,
                                  std::uint64_t hi);
std::vector<Poly> enumerate_monic(const FieldSpec& field, unsigned n);

bool is_prime_u32(std::uint32_t n) noexcept;

}  // namespace ffcorr
