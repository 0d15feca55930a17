#pragma once

// Monic irreducibles of F_p[x] up to a degree bound, factorization by trial
// division against them, and prime counts in residue classes.

#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include "ffcorr/poly.hpp"

namespace ffcorr {

struct PrimePower {
  MonicKey prime;
  unsigned multiplicity = 0;

  friend bool operator==(const PrimePower&, const PrimePower&) = default;
};

/// Prime factorization of a monic polynomial, ordered by (degree, index).
struct Factorization {
  std::vector<PrimePower> factors;

  /// Omega(f): number of prime factors with multiplicity.
  unsigned big_omega() const noexcept;
  /// omega(f): number of distinct prime factors.
  unsigned little_omega() const noexcept { return static_cast<unsigned>(factors.size()); }
  /// v_P(f).
  unsigned valuation(const MonicKey& prime) const noexcept;
  /// Degree of the factored polynomial.
  unsigned degree() const noexcept;

  friend bool operator==(const Factorization&, const Factorization&) = default;
};

/// Multiplies a factorization back out.
Poly expand(const FieldSpec& field, const Factorization& fact);

struct NecklaceReport {
  unsigned n = 0;
  std::uint64_t weighted_sum = 0;  // sum over d | n of d * N_d
  std::uint64_t q_power = 0;       // q^n
  bool ok() const noexcept { return weighted_sum == q_power; }
};

inline constexpr std::uint64_t kDefaultTableBudget = std::uint64_t{1} << 28;

class IrreducibleTable {
 public:
  /// Sieves every monic irreducible of degree <= max_deg. Needs about q^max_deg
  /// bytes of scratch; throws BudgetError beyond `budget_bytes`.
  static IrreducibleTable build(const FieldSpec& field, unsigned max_deg,
                                std::uint64_t budget_bytes = kDefaultTableBudget);

  const FieldSpec& field() const noexcept { return field_; }
  unsigned max_deg() const noexcept { return max_deg_; }
  /// N_d for 1 <= d <= max_deg.
  std::uint64_t count(unsigned d) const;
  /// Enumeration indices of the degree-d irreducibles, ascending.
  std::span<const std::uint64_t> primes(unsigned d) const;
  bool is_irreducible(const MonicKey& key) const;

  NecklaceReport necklace_check(unsigned n) const;

  /// Binary cache: "FFQI", version, p, max_deg, then per degree N_d and the
  /// lower coefficients of each prime. Little-endian.
  void save(const std::filesystem::path& path) const;
  /// Loads a cache and verifies the necklace identity before returning it.
  static IrreducibleTable load(const std::filesystem::path& path);

 private:
  IrreducibleTable(FieldSpec field, unsigned max_deg, std::vector<std::vector<std::uint64_t>> primes);

  FieldSpec field_;
  unsigned max_deg_;
  std::vector<std::vector<std::uint64_t>> primes_;  // primes_[d], d = 0 unused
};

/// Exact number of monic irreducibles of degree d over F_q (Moebius
/// inversion of the necklace identity). Throws BudgetError on overflow.
std::uint64_t necklace_count(std::uint32_t q, unsigned d);
/// Same count in floating point, valid for any degree.
long double necklace_count_real(std::uint32_t q, unsigned d);

/// Trial-division factorizer bound to a table. Cheap to copy; thread-safe to
/// share.
class Factorizer {
 public:
  explicit Factorizer(const IrreducibleTable& table);

  const IrreducibleTable& table() const noexcept { return *table_; }

  /// Factors the monic polynomial with the given key into `out` (cleared
  /// first). Requires table.max_deg() >= key.degree / 2.
  void factor(const MonicKey& key, std::vector<PrimePower>& out) const;

 private:
  const IrreducibleTable* table_;
  std::vector<std::uint64_t> packed2_;  // p = 2: primes as full bit patterns
  std::vector<unsigned> degree_start_;  // offsets into packed2_ per degree
};

/// Factors a monic nonzero polynomial; throws if the table is too small.
Factorization factorize(const Poly& f, const IrreducibleTable& table);

/// Number of degree-n irreducibles congruent to b modulo monic m.
/// Requires deg m >= 1, gcd(b, m) = 1 and n <= table.max_deg().
std::uint64_t prime_count_ap(unsigned n, const Poly& m, const Poly& b, const IrreducibleTable& table);

/// Counts of degree-n irreducibles in every residue class modulo m, indexed
/// by the residue's coefficient digits (base p, c_0 least significant).
std::vector<std::uint64_t> residue_histogram(unsigned n, const Poly& m, const IrreducibleTable& table);

}  // namespace ffcorr
