#pragma once

// Predicted main terms of the two-point correlations: Euler products of
// shift-constrained local factors (the P1 part) times unconstrained factors
// over larger primes (the P2 part), each carrying a truncation bound.

#include <cstdint>
#include <limits>
#include <optional>

#include "ffcorr/arith.hpp"
#include "ffcorr/irreducible.hpp"
#include "ffcorr/poly.hpp"

namespace ffcorr {

/// A value and a bound on |exact - value| from truncating an infinite sum or
/// product.
struct TruncatedValue {
  Complex value{1.0, 0.0};
  double tail_bound = 0.0;
};

TruncatedValue operator*(const TruncatedValue& a, const TruncatedValue& b);

/// Monic: correlations over all monic polynomials. Prime: over irreducibles.
enum class Mode { kMonic, kPrime };

/// Valuation of the shift difference at a prime; nullopt means infinite
/// (difference is zero).
using Valuation = std::optional<unsigned>;

/// The shifts (h1, h2) of a two-point correlation and the factorization of
/// their difference.
class ShiftPair {
 public:
  ShiftPair(Poly h1, Poly h2, const IrreducibleTable& table);

  const Poly& h1() const noexcept { return h1_; }
  const Poly& h2() const noexcept { return h2_; }
  /// h2 - h1.
  const Poly& delta() const noexcept { return delta_; }
  bool degenerate() const noexcept { return delta_.is_zero(); }
  /// Degree of the difference; 0 when the difference is zero or constant.
  unsigned delta_degree() const noexcept { return delta_.is_zero() ? 0 : *delta_.degree(); }
  /// Prime factorization of monic(h2 - h1); empty when degenerate.
  const Factorization& delta_factors() const noexcept { return delta_fact_; }
  Valuation k(const MonicKey& prime) const;

 private:
  Poly h1_, h2_, delta_;
  Factorization delta_fact_;
};

struct MainTermOptions {
  unsigned depth = 60;              // prime-power depth m_max of every local sum
  std::optional<unsigned> cutoff;   // degree cutoff D used when n is infinite
};

/// Local factor W_P: sum over m1, m2 >= 0 with min(m1, m2) <= k of
/// alpha1(P^m1) alpha2(P^m2) w(P^max), where alpha(P^m) = psi(P^m) - psi(P^(m-1))
/// and w = |P|^-max (monic) or 1/Phi(P^max) (prime).
TruncatedValue local_factor(const MonicKey& prime, Valuation k, const FunctionSpec& psi1, const FunctionSpec& psi2,
                            Mode mode, std::uint32_t q, unsigned depth = 60);

/// Product of local factors over primes of degree <= gamma.
TruncatedValue p1(unsigned gamma, const ShiftPair& shifts, const FunctionSpec& psi1, const FunctionSpec& psi2,
                  Mode mode, const IrreducibleTable& table, const MainTermOptions& options = {});

/// Product over gamma < deg P <= n (n = nullopt means infinity) of the
/// unconstrained factors.
TruncatedValue p2(unsigned gamma, std::optional<unsigned> n, const FunctionSpec& psi1, const FunctionSpec& psi2,
                  Mode mode, const IrreducibleTable& table, const MainTermOptions& options = {});

/// Smallest gamma allowed for p2: ceil(log 9 / log q) or ceil(log 17 / log q).
unsigned gamma_threshold(Mode mode, std::uint32_t q);
/// max(deg(h2 - h1), gamma_threshold).
unsigned default_gamma(const ShiftPair& shifts, Mode mode, std::uint32_t q);
/// Degree cutoff used for n = infinity when none is configured.
unsigned default_cutoff(unsigned gamma, const IrreducibleTable& table);

struct MainTerm {
  unsigned gamma = 0;
  TruncatedValue p1;
  TruncatedValue p2;
  TruncatedValue total;
};

/// P(n) = P1(gamma) P2(gamma, n), or the prime analogue.
MainTerm main_term(std::optional<unsigned> n, std::optional<unsigned> gamma, const ShiftPair& shifts,
                   const FunctionSpec& psi1, const FunctionSpec& psi2, Mode mode, const IrreducibleTable& table,
                   const MainTermOptions& options = {});

struct Rational {
  std::int64_t num = 0;
  std::int64_t den = 1;
  double to_double() const noexcept { return static_cast<double>(num) / static_cast<double>(den); }
  friend bool operator==(const Rational&, const Rational&) = default;
};

/// Local factor of the truncated Liouville self-correlation at a prime of
/// degree d <= y with P^k || h: 1 - 4 / (q^(k d) (q^d + 1)), in lowest terms.
Rational liouville_local_closed(unsigned d, unsigned k, std::uint32_t q);

/// Shape of the two-point error bounds for the monic or prime domain
/// for diagnostic overlays. `distance_sum` is D(psi1,1;r,n) + D(psi2,1;r,n);
/// c and A are the unknown constants.
double error_bound_shape(Mode mode, unsigned r, unsigned n, double alpha, std::uint32_t q, double distance_sum = 0.0,
                         double c = 1.0, double a = 1.0);

}  // namespace ffcorr
