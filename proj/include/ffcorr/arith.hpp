#pragma once

// Multiplicative and additive arithmetic functions on monic polynomials,
// specified by their values on prime powers, and the pretentiousness
// statistics built from them.

#include <complex>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <string>
#include <string_view>
#include <vector>

#include "ffcorr/irreducible.hpp"
#include "ffcorr/poly.hpp"

namespace ffcorr {

using Complex = std::complex<double>;

enum class FunctionKind { kOne, kMoebius, kKFree, kLiouville, kLiouvilleTruncated, kPhiRatio, kExpAdditive, kCustom };

struct SpecFlags {
  bool degree_symmetric = false;  // value depends only on (deg P, m)
  bool unit_bounded = false;      // |value| <= 1
  bool integer_valued = false;
};

/// Multiplicative function: psi(f) = prod over P^m || f of value(P, m).
class FunctionSpec {
 public:
  using Rule = std::function<Complex(const MonicKey& prime, unsigned m)>;

  FunctionSpec(FunctionKind kind, std::string name, Rule rule, SpecFlags flags);

  FunctionKind kind() const noexcept { return kind_; }
  const std::string& name() const noexcept { return name_; }
  const SpecFlags& flags() const noexcept { return flags_; }
  bool degree_symmetric() const noexcept { return flags_.degree_symmetric; }
  bool unit_bounded() const noexcept { return flags_.unit_bounded; }
  bool integer_valued() const noexcept { return flags_.integer_valued; }

  /// Value at P^m; 1 when m = 0.
  Complex value(const MonicKey& prime, unsigned m) const { return m == 0 ? Complex(1.0) : rule_(prime, m); }
  /// Value for a degree-symmetric spec at any prime of degree d.
  Complex value_at_degree(unsigned d, unsigned m) const { return value(MonicKey{d, 0}, m); }

  /// Pointwise complex conjugate.
  FunctionSpec conjugate() const;

 private:
  FunctionKind kind_;
  std::string name_;
  Rule rule_;
  SpecFlags flags_;
};

/// Additive function: psi(f) = sum over P^m || f of value(P, m).
class AdditiveSpec {
 public:
  using Rule = std::function<double(const MonicKey& prime, unsigned m)>;

  AdditiveSpec(std::string name, Rule rule, bool degree_symmetric);

  const std::string& name() const noexcept { return name_; }
  bool degree_symmetric() const noexcept { return degree_symmetric_; }
  /// Value at P^m; 0 when m = 0.
  double value(const MonicKey& prime, unsigned m) const { return m == 0 ? 0.0 : rule_(prime, m); }

 private:
  std::string name_;
  Rule rule_;
  bool degree_symmetric_;
};

namespace functions {

FunctionSpec one();
FunctionSpec moebius();
/// 1 on k-free polynomials, 0 otherwise. k >= 2.
FunctionSpec kfree(unsigned k);
FunctionSpec liouville();
/// Liouville factor only at primes of degree <= y. y >= 1.
FunctionSpec liouville_truncated(unsigned y);
/// Phi(f) / |f| over F_q.
FunctionSpec phi_ratio(const FieldSpec& field);

AdditiveSpec zero_additive();
AdditiveSpec little_omega();
AdditiveSpec big_omega();
/// log(Phi(f)/|f|): value log(1 - q^-deg P) at every prime power.
AdditiveSpec log_phi_ratio(const FieldSpec& field);
/// Indicator of m = 1: sum counts the primes dividing exactly once.
AdditiveSpec squarefree_part_count();

}  // namespace functions

/// Degree-symmetric custom multiplicative spec from a key=value file with
/// lines "(d,m)=v", "(d,*)=v", "(*,m)=v" and "default=v"; v is "re" or
/// "re,im". Unlisted prime powers take `default` (1 if absent).
FunctionSpec load_custom_spec(const std::filesystem::path& path);
AdditiveSpec load_custom_additive(const std::filesystem::path& path);

/// Parses "one", "moebius", "kfree:K", "liouville", "liouville_trunc:Y",
/// "phi_ratio" or "custom:<file>".
FunctionSpec parse_function_spec(std::string_view text, const FieldSpec& field);
/// Parses "zero", "omega", "bigomega", "log_phi_ratio", "squarefree_count"
/// or "custom:<file>".
AdditiveSpec parse_additive_spec(std::string_view text, const FieldSpec& field);

/// Multiplicative function exp(i t psi~).
FunctionSpec exp_additive(const AdditiveSpec& additive, double t);

Complex eval_on(const Factorization& fact, const FunctionSpec& spec);
/// Exact evaluation for integer-valued specs.
std::int64_t eval_exact(const Factorization& fact, const FunctionSpec& spec);
double eval_on(const Factorization& fact, const AdditiveSpec& spec);

/// Euler totient of a monic polynomial from its factorization over F_q.
std::uint64_t phi(const Factorization& fact, std::uint32_t q);
std::uint64_t phi(const Poly& f, const IrreducibleTable& table);

/// Pretentious distance D(psi1, psi2; m, n) (square root of the sum).
double distance(const FunctionSpec& psi1, const FunctionSpec& psi2, unsigned m, unsigned n,
                const IrreducibleTable& table);

/// s_N = sum over deg P <= N of (psi(P) - 1) / q^deg P, for N = 1..max_n.
std::vector<Complex> closeness_partial_sums(const FunctionSpec& psi, unsigned max_n, const IrreducibleTable& table);

/// sum over deg P <= n of q^-deg P.
double mertens_sum(unsigned n, const IrreducibleTable& table);

/// Compares the spec's values at two distinct primes of each degree up to
/// max_deg; returns false if a degree-symmetric claim is contradicted.
bool spot_check_degree_symmetry(const FunctionSpec& spec, const IrreducibleTable& table);

/// Number of primes of degree d: table count when covered, otherwise the
/// exact necklace count.
std::uint64_t prime_count(unsigned d, const IrreducibleTable& table);

}  // namespace ffcorr
