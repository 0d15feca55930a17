#pragma once

// Distributions of shifted additive functions, their characteristic
// functions and limits, the shifted Turan-Kubilius ratio, and exact sieve
// statistics for primes in residue classes.

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "ffcorr/arith.hpp"
#include "ffcorr/irreducible.hpp"
#include "ffcorr/main_term.hpp"
#include "ffcorr/poly.hpp"

namespace ffcorr {

/// Exact multiset of sample values. atoms are sorted by value and their
/// multiplicities add up to domain_size.
struct EmpiricalDistribution {
  std::vector<std::pair<double, std::uint64_t>> atoms;
  std::uint64_t domain_size = 0;

  /// Right-continuous CDF: fraction of samples <= x.
  double cdf(double x) const;
  /// Fourier transform at t: mean of exp(i t value).
  Complex fourier(double t) const;
};

/// psi~1(f + h1) + psi~2(f + h2) over every f of the domain.
EmpiricalDistribution empirical_distribution(const AdditiveSpec& a1, const AdditiveSpec& a2, const Poly& h1,
                                             const Poly& h2, unsigned n, Mode domain, const IrreducibleTable& table,
                                             unsigned partitions = 1);

/// Sup-norm distance between the two CDFs.
double ks_distance(const EmpiricalDistribution& d1, const EmpiricalDistribution& d2);

struct CharFunctionGrid {
  std::vector<double> t;
  std::vector<Complex> empirical;      // phi_n(t); empty if not computed
  std::vector<TruncatedValue> limit;   // phi(t); empty if not computed
  std::vector<double> error;           // |phi_n - phi| where both exist
  /// Set by limit_charfn when the closeness partial sums look divergent.
  std::optional<std::string> warning;

  double max_error() const;
};

/// phi_n(t) on the grid, through the correlation engine with the specs
/// exp(i t psi~j).
CharFunctionGrid empirical_charfn(const AdditiveSpec& a1, const AdditiveSpec& a2, const Poly& h1, const Poly& h2,
                                  unsigned n, Mode domain, const std::vector<double>& t_grid,
                                  const IrreducibleTable& table, unsigned partitions = 1);

/// Limit characteristic function: the n = infinity main term of the same
/// specs at each t.
CharFunctionGrid limit_charfn(const AdditiveSpec& a1, const AdditiveSpec& a2, const Poly& h1, const Poly& h2,
                              const std::vector<double>& t_grid, Mode mode, const IrreducibleTable& table,
                              const MainTermOptions& options = {});

/// Pairs an empirical and a limit grid over the same t values.
CharFunctionGrid combine_charfn(const CharFunctionGrid& empirical, const CharFunctionGrid& limit);

/// Evenly spaced grid lo, lo + step, ..., up to hi inclusive.
std::vector<double> linear_grid(double lo, double hi, double step);

struct TkReport {
  double lhs = 0.0;
  double rhs = 0.0;
  double ratio = 0.0;  // 0 when rhs is 0
};

/// Shifted Turan-Kubilius ratio for the prime-power weights of `psi`.
/// Monic domain: second moment against q^n sum |psi|^2 / |P^m|. Prime
/// domain: first moment against |P_n| B(n) with Phi weights.
/// Requires table.max_deg() >= n.
TkReport tk_ratio(const AdditiveSpec& psi, const Poly& h, unsigned n, Mode domain, const IrreducibleTable& table,
                  unsigned partitions = 1);

struct SieveReport {
  unsigned n = 0;
  double theta = 0.0;          // sum over n/2 < deg Q <= n of Phi(Q) pi(n; Q, -h)^2
  double theta_ratio = 0.0;    // theta / |P_n|^2
  double bv_sum = 0.0;         // sum over small M of max_B |pi(n; M, B) - q^n / (n Phi(M))|
  double bv_envelope = 0.0;    // q^n / n^(t + 1)
  int bv_max_degree = -1;      // largest deg M included (-1: none)
  std::vector<double> h_values;  // H(1), ..., H(n)
  double divprod_max = 0.0;    // max over degree-n monics of prod over P | f of (1 + 1/|P|)
};

/// Exact sieve statistics at degree n. Requires table.max_deg() >= n.
SieveReport sieve_diagnostics(unsigned n, const Poly& h, double t, const IrreducibleTable& table);

/// H(k) = sum over monic M of degree k of mu^2(M) 3^omega(M) / |M|.
double h_sum(unsigned k, const IrreducibleTable& table);

struct BrunTitchmarshReport {
  std::uint64_t checked = 0;     // (n, M, B) triples with gcd(B, M) = 1
  std::uint64_t violations = 0;
  double max_ratio = 0.0;        // largest pi / bound seen
};

/// Checks pi(n; M, B) <= 2 q^n / (Phi(M) (n - deg M + 1)) for every monic M
/// with deg M < n and every B coprime to M, for each n in [min_n, max_n].
BrunTitchmarshReport brun_titchmarsh_check(unsigned max_n, const IrreducibleTable& table, unsigned min_n = 1);

}  // namespace ffcorr
