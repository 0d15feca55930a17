#include "ffcorr/main_term.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "ffcorr/error.hpp"

namespace ffcorr {

TruncatedValue operator*(const TruncatedValue& a, const TruncatedValue& b) {
  const double ea = a.tail_bound, eb = b.tail_bound;
  return {a.value * b.value, std::abs(a.value) * eb + std::abs(b.value) * ea + ea * eb};
}

ShiftPair::ShiftPair(Poly h1, Poly h2, const IrreducibleTable& table)
    : h1_(std::move(h1)), h2_(std::move(h2)), delta_(h2_ - h1_) {
  if (h1_.modulus() != table.field().p() || h2_.modulus() != table.field().p()) {
    throw ValidationError("shifts and table use different fields");
  }
  if (!delta_.is_zero() && *delta_.degree() >= 1) delta_fact_ = factorize(make_monic(delta_), table);
}

Valuation ShiftPair::k(const MonicKey& prime) const {
  if (degenerate()) return std::nullopt;
  return delta_fact_.valuation(prime);
}

namespace {

void require_unit_bounded(const FunctionSpec& a, const FunctionSpec& b) {
  if (!a.unit_bounded() || !b.unit_bounded()) {
    throw ValidationError("main terms require unit-bounded specs (got " + a.name() + ", " + b.name() + ")");
  }
}

// alpha(P^m) = psi(P^m) - psi(P^(m-1)), m = 0..depth, alpha(1) = 1.
std::vector<Complex> alphas(const FunctionSpec& psi, const MonicKey& prime, unsigned depth) {
  std::vector<Complex> a(depth + 1);
  Complex prev(1.0);
  a[0] = prev;
  for (unsigned m = 1; m <= depth; ++m) {
    const Complex v = psi.value(prime, m);
    a[m] = v - prev;
    prev = v;
  }
  return a;
}

// sum over M >= n of (2M + 1) x^M.
double odd_weighted_geometric_tail(unsigned n, double x) {
  const double xn = std::pow(x, static_cast<double>(n));
  return xn * ((2.0 * n + 1.0) / (1.0 - x) + 2.0 * x / ((1.0 - x) * (1.0 - x)));
}

// log(1 + z) without cancellation for small z.
std::complex<long double> log1p_complex(Complex z) {
  const long double a = z.real(), b = z.imag();
  const long double re = 0.5L * std::log1p(2.0L * a + a * a + b * b);
  const long double im = std::atan2(b, 1.0L + a);
  return {re, im};
}

Complex ipow(Complex v, std::uint64_t n) {
  Complex result(1.0);
  while (n) {
    if (n & 1) result *= v;
    v *= v;
    n >>= 1;
  }
  return result;
}

// Product of factors (1 + z)^count with per-factor absolute error bounds.
class BoundedProduct {
 public:
  void multiply(Complex z, double err, long double count) {
    if (count == 0) return;
    const Complex v = 1.0 + z;
    const double av = std::abs(v);
    if (av == 0.0) {
      zero_ = true;
      zero_log_ += count * (err > 0 ? std::log(static_cast<long double>(err)) : -INFINITY);
      return;
    }
    if (std::abs(z) < 0.5) {
      log_sum_ += count * log1p_complex(z);
    } else if (count <= 9.0e15L) {
      direct_ *= ipow(v, static_cast<std::uint64_t>(count));
    } else {
      log_sum_ += count * std::log(std::complex<long double>(v.real(), v.imag()));
    }
    rel_ += count * std::log1p(static_cast<long double>(err) / av);
  }

  TruncatedValue result() const {
    const std::complex<long double> e = std::exp(log_sum_);
    const Complex nonzero = direct_ * Complex(static_cast<double>(e.real()), static_cast<double>(e.imag()));
    if (zero_) {
      const long double mag = std::abs(nonzero) * std::exp(rel_ + zero_log_);
      return {Complex(0.0), static_cast<double>(mag)};
    }
    return {nonzero, static_cast<double>(std::abs(nonzero) * std::expm1(rel_))};
  }

 private:
  Complex direct_{1.0};
  std::complex<long double> log_sum_{0.0L, 0.0L};
  long double rel_ = 0.0L;
  bool zero_ = false;
  long double zero_log_ = 0.0L;
};

struct Factor {
  Complex z;     // factor - 1
  double err;    // truncation bound
};

// Unconstrained factor at one prime:
//   monic: 1 + sum_j sum_{m>=1} alpha_j(P^m) x^m
//   prime: 1 - 2/Phi(P) + sum_j sum_{m>=1} psi_j(P^m) x^m
//        = 1 + sum_j sum_{m>=1} alpha_j(P^m) x^m / (1 - x)
Factor unconstrained_factor(const MonicKey& prime, const FunctionSpec& psi1, const FunctionSpec& psi2, Mode mode,
                            double q, unsigned depth) {
  const double x = std::pow(q, -static_cast<double>(prime.degree));
  const auto a1 = alphas(psi1, prime, depth);
  const auto a2 = alphas(psi2, prime, depth);
  Complex z(0.0);
  double xm = 1.0;
  for (unsigned m = 1; m <= depth; ++m) {
    xm *= x;
    z += (a1[m] + a2[m]) * xm;
  }
  double err = 4.0 * xm * x / (1.0 - x);
  if (mode == Mode::kPrime) {
    z /= (1.0 - x);
    err /= (1.0 - x);
  }
  return {z, err};
}

long double count_real(unsigned d, const IrreducibleTable& table) {
  if (d <= table.max_deg()) return static_cast<long double>(table.count(d));
  if (d <= table.field().max_exponent()) return static_cast<long double>(necklace_count(table.field().p(), d));
  return necklace_count_real(table.field().p(), d);
}

// Product of unconstrained factors over lo < deg P <= hi.
TruncatedValue unconstrained_product(unsigned lo, unsigned hi, const FunctionSpec& psi1, const FunctionSpec& psi2,
                                     Mode mode, const IrreducibleTable& table, unsigned depth,
                                     std::vector<long double>* per_degree_mass = nullptr) {
  const double q = table.field().p();
  const bool symmetric = psi1.degree_symmetric() && psi2.degree_symmetric();
  if (!symmetric && hi > table.max_deg()) {
    throw ValidationError("table max_deg " + std::to_string(table.max_deg()) +
                          " too small for a non-degree-symmetric product to degree " + std::to_string(hi));
  }
  BoundedProduct prod;
  for (unsigned d = lo + 1; d <= hi; ++d) {
    long double mass = 0.0L;
    if (symmetric) {
      const Factor f = unconstrained_factor(MonicKey{d, 0}, psi1, psi2, mode, q, depth);
      const long double n = count_real(d, table);
      prod.multiply(f.z, f.err, n);
      mass = n * (std::abs(f.z) + f.err);
    } else {
      for (const std::uint64_t idx : table.primes(d)) {
        const Factor f = unconstrained_factor(MonicKey{d, idx}, psi1, psi2, mode, q, depth);
        prod.multiply(f.z, f.err, 1.0L);
        mass += std::abs(f.z) + f.err;
      }
    }
    if (per_degree_mass) per_degree_mass->push_back(mass);
  }
  return prod.result();
}

}  // namespace

TruncatedValue local_factor(const MonicKey& prime, Valuation k, const FunctionSpec& psi1, const FunctionSpec& psi2,
                            Mode mode, std::uint32_t q, unsigned depth) {
  require_unit_bounded(psi1, psi2);
  if (depth < 2) throw ValidationError("local factor depth must be at least 2");
  const double x = std::pow(static_cast<double>(q), -static_cast<double>(prime.degree));
  const auto a1 = alphas(psi1, prime, depth);
  const auto a2 = alphas(psi2, prime, depth);
  std::vector<double> w(depth + 1);
  w[0] = 1.0;
  for (unsigned m = 1; m <= depth; ++m) {
    w[m] = std::pow(x, static_cast<double>(m));
    if (mode == Mode::kPrime) w[m] /= (1.0 - x);
  }
  // Accumulate by max(m1, m2) from the largest, so small terms add first.
  Complex sum(0.0);
  for (unsigned top = depth + 1; top-- > 0;) {
    Complex shell(0.0);
    for (unsigned other = 0; other <= top; ++other) {
      if (k && other > *k) break;
      shell += a1[top] * a2[other];
      if (other != top) shell += a1[other] * a2[top];
    }
    sum += shell * w[top];
  }
  // |alpha1 alpha2| <= 4 and at most min(2M + 1, 2k + 2) pairs have max = M.
  const unsigned n = depth + 1;
  double tail = 4.0 * odd_weighted_geometric_tail(n, x);
  if (k) {
    const double xn = std::pow(x, static_cast<double>(n));
    tail = std::min(tail, 4.0 * (2.0 * *k + 2.0) * xn / (1.0 - x));
  }
  if (mode == Mode::kPrime) tail /= (1.0 - x);
  return {sum, tail};
}

unsigned gamma_threshold(Mode mode, std::uint32_t q) {
  const double num = mode == Mode::kMonic ? std::log(9.0) : std::log(17.0);
  const double v = num / std::log(static_cast<double>(q));
  auto g = static_cast<unsigned>(std::ceil(v - 1e-12));
  return std::max(g, 1u);
}

unsigned default_gamma(const ShiftPair& shifts, Mode mode, std::uint32_t q) {
  return std::max(shifts.delta_degree(), gamma_threshold(mode, q));
}

unsigned default_cutoff(unsigned gamma, const IrreducibleTable& table) {
  const auto by_field = static_cast<unsigned>(std::ceil(36.0 / std::log2(static_cast<double>(table.field().p()))));
  return std::max({gamma + 1, table.max_deg(), by_field});
}

TruncatedValue p1(unsigned gamma, const ShiftPair& shifts, const FunctionSpec& psi1, const FunctionSpec& psi2,
                  Mode mode, const IrreducibleTable& table, const MainTermOptions& options) {
  require_unit_bounded(psi1, psi2);
  const std::uint32_t q = table.field().p();
  const bool symmetric = psi1.degree_symmetric() && psi2.degree_symmetric();
  if (!symmetric && gamma > table.max_deg()) {
    throw ValidationError("table max_deg " + std::to_string(table.max_deg()) + " below gamma " + std::to_string(gamma));
  }
  TruncatedValue out{Complex(1.0), 0.0};
  BoundedProduct prod;
  auto take = [&](const TruncatedValue& w, long double count) { prod.multiply(w.value - 1.0, w.tail_bound, count); };
  const Valuation generic_k = shifts.degenerate() ? Valuation{} : Valuation{0u};
  for (unsigned d = 1; d <= gamma; ++d) {
    if (symmetric) {
      long double generic = count_real(d, table);
      for (const auto& pp : shifts.delta_factors().factors) {
        if (pp.prime.degree != d) continue;
        generic -= 1.0L;
        take(local_factor(pp.prime, pp.multiplicity, psi1, psi2, mode, q, options.depth), 1.0L);
      }
      take(local_factor(MonicKey{d, 0}, generic_k, psi1, psi2, mode, q, options.depth), generic);
    } else {
      for (const std::uint64_t idx : table.primes(d)) {
        const MonicKey key{d, idx};
        take(local_factor(key, shifts.k(key), psi1, psi2, mode, q, options.depth), 1.0L);
      }
    }
  }
  out = prod.result();
  return out;
}

TruncatedValue p2(unsigned gamma, std::optional<unsigned> n, const FunctionSpec& psi1, const FunctionSpec& psi2,
                  Mode mode, const IrreducibleTable& table, const MainTermOptions& options) {
  require_unit_bounded(psi1, psi2);
  const std::uint32_t q = table.field().p();
  const unsigned threshold = gamma_threshold(mode, q);
  if (gamma < threshold) {
    throw ValidationError("gamma " + std::to_string(gamma) + " below the threshold " + std::to_string(threshold) +
                          " for q=" + std::to_string(q));
  }
  const bool symmetric = psi1.degree_symmetric() && psi2.degree_symmetric();
  if (n) {
    if (*n <= gamma) return {Complex(1.0), 0.0};
    return unconstrained_product(gamma, *n, psi1, psi2, mode, table, options.depth);
  }
  if (!symmetric && !options.cutoff) {
    throw ValidationError("infinite product for a non-degree-symmetric spec needs an explicit cutoff");
  }
  const unsigned cutoff = std::max(options.cutoff.value_or(default_cutoff(gamma, table)), gamma + 1);
  const unsigned outer = symmetric ? 2 * cutoff : std::min(2 * cutoff, table.max_deg());
  if (!symmetric && cutoff > table.max_deg()) {
    throw ValidationError("cutoff exceeds the table for a non-degree-symmetric spec");
  }
  const TruncatedValue head = unconstrained_product(gamma, cutoff, psi1, psi2, mode, table, options.depth);
  std::vector<long double> mass;
  const TruncatedValue ext = unconstrained_product(cutoff, outer, psi1, psi2, mode, table, options.depth, &mass);
  if (mass.empty()) {
    // No room to extend inside the table: nothing certifies the tail.
    return {head.value, INFINITY};
  }
  // Beyond `outer`: extrapolate the per-degree mass geometrically with a
  // widened ratio.
  long double rest;
  const long double last = mass.back();
  const long double prev = mass.size() >= 2 ? mass[mass.size() - 2] : 0.0L;
  if (last == 0.0L && prev == 0.0L) {
    rest = 0.0L;
  } else if (prev == 0.0L || last >= prev) {
    rest = INFINITY;
  } else {
    const long double r = std::sqrt(last / prev);
    rest = last * r / (1.0L - r);
  }
  const double rho = static_cast<double>(std::expm1(rest));
  const double av = std::abs(head.value), ae = std::abs(ext.value);
  const double tail = head.tail_bound * (ae + ext.tail_bound) * (1.0 + rho) +
                      av * (std::abs(ext.value - 1.0) + ext.tail_bound + (ae + ext.tail_bound) * rho);
  return {head.value, tail};
}

MainTerm main_term(std::optional<unsigned> n, std::optional<unsigned> gamma, const ShiftPair& shifts,
                   const FunctionSpec& psi1, const FunctionSpec& psi2, Mode mode, const IrreducibleTable& table,
                   const MainTermOptions& options) {
  MainTerm out;
  out.gamma = gamma.value_or(default_gamma(shifts, mode, table.field().p()));
  out.p1 = p1(out.gamma, shifts, psi1, psi2, mode, table, options);
  out.p2 = p2(out.gamma, n, psi1, psi2, mode, table, options);
  out.total = out.p1 * out.p2;
  return out;
}

Rational liouville_local_closed(unsigned d, unsigned k, std::uint32_t q) {
  if (d < 1) throw ValidationError("prime degree must be at least 1");
  const FieldSpec field(q);
  const std::uint64_t qd = field.pow(d);
  const std::uint64_t qkd = field.pow(k * d);
  if (qkd > (std::uint64_t{1} << 62) / (qd + 1)) throw BudgetError("closed form overflows 64 bits");
  const auto den = static_cast<std::int64_t>(qkd * (qd + 1));
  const std::int64_t num = den - 4;
  const std::int64_t g = std::gcd(num < 0 ? -num : num, den);
  return {num / g, den / g};
}

double error_bound_shape(Mode mode, unsigned r, unsigned n, double alpha, std::uint32_t q, double distance_sum,
                         double c, double a) {
  if (!(alpha > 0.5 && alpha < 1.0)) throw ValidationError("alpha must lie in (1/2, 1)");
  if (r < 1 || r > n) throw ValidationError("need 1 <= r <= n");
  const double qd = q;
  const double growth = std::exp(c * std::pow(qd, alpha * r) / r);
  const double middle = mode == Mode::kMonic ? std::pow(qd, (1.0 - 2.0 * alpha) * n) * growth
                                     : std::pow(static_cast<double>(n), -a) * growth;
  return distance_sum + middle + 1.0 / std::sqrt(r * std::pow(qd, static_cast<double>(r)));
}

}  // namespace ffcorr
