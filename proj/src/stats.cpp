#include "ffcorr/stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <sstream>

#include "ffcorr/correlation.hpp"
#include "ffcorr/error.hpp"
#include "parallel.hpp"

namespace ffcorr {

namespace {

void check_shift(const Poly& h, unsigned n, const FieldSpec& field) {
  if (h.modulus() != field.p()) throw ValidationError("shift over a different field");
  if (!h.is_zero() && *h.degree() >= n) throw ValidationError("shift " + format_poly(h) + " must have degree < n");
}

void check_table(unsigned need, const IrreducibleTable& table, const char* what) {
  if (table.max_deg() < need) {
    throw ValidationError(std::string(what) + " needs a table of max_deg >= " + std::to_string(need));
  }
}

double additive_value(const AdditiveSpec& spec, const std::vector<PrimePower>& fact) {
  double v = 0.0;
  for (const auto& pp : fact) v += spec.value(pp.prime, pp.multiplicity);
  return v;
}

// The residue polynomial whose base-p digits (c_0 least significant) are r.
Poly residue_at(const FieldSpec& field, unsigned e, std::uint64_t r) {
  std::vector<std::uint8_t> c(e);
  for (unsigned i = 0; i < e; ++i, r /= field.p()) c[i] = static_cast<std::uint8_t>(r % field.p());
  return Poly(field.p(), std::move(c));
}

}  // namespace

double EmpiricalDistribution::cdf(double x) const {
  if (domain_size == 0) return 0.0;
  std::uint64_t below = 0;
  for (const auto& [v, m] : atoms) {
    if (v > x) break;
    below += m;
  }
  return static_cast<double>(below) / static_cast<double>(domain_size);
}

Complex EmpiricalDistribution::fourier(double t) const {
  if (domain_size == 0) return Complex(0.0);
  detail::CompensatedSum re, im;
  for (const auto& [v, m] : atoms) {
    re.add(static_cast<double>(m) * std::cos(t * v));
    im.add(static_cast<double>(m) * std::sin(t * v));
  }
  return Complex(re.value(), im.value()) / static_cast<double>(domain_size);
}

EmpiricalDistribution empirical_distribution(const AdditiveSpec& a1, const AdditiveSpec& a2, const Poly& h1,
                                             const Poly& h2, unsigned n, Mode domain, const IrreducibleTable& table,
                                             unsigned partitions) {
  if (n < 1) throw ValidationError("degree n must be at least 1");
  check_shift(h1, n, table.field());
  check_shift(h2, n, table.field());
  check_table(domain == Mode::kPrime ? n : std::max(n / 2, 1u), table, "empirical_distribution");

  const detail::Domain dom(domain, n, table);
  const Factorizer factorizer(table);
  const detail::Shift s1(h1, n), s2(h2, n);
  const unsigned parts = std::max(partitions, 1u);
  std::vector<std::vector<double>> samples(parts);
  detail::run_partitions(dom.size(), parts, [&](unsigned part, std::uint64_t lo, std::uint64_t hi) {
    std::vector<PrimePower> fact;
    auto& out = samples[part];
    out.reserve(hi - lo);
    for (std::uint64_t i = lo; i < hi; ++i) {
      const std::uint64_t idx = dom.index(i);
      factorizer.factor(MonicKey{n, s1.apply(idx)}, fact);
      double v = additive_value(a1, fact);
      factorizer.factor(MonicKey{n, s2.apply(idx)}, fact);
      v += additive_value(a2, fact);
      out.push_back(v);
    }
  });

  std::vector<double> all;
  all.reserve(dom.size());
  for (const auto& s : samples) all.insert(all.end(), s.begin(), s.end());
  std::sort(all.begin(), all.end());
  EmpiricalDistribution dist;
  dist.domain_size = dom.size();
  for (const double v : all) {
    if (!dist.atoms.empty() && dist.atoms.back().first == v) {
      ++dist.atoms.back().second;
    } else {
      dist.atoms.emplace_back(v, 1);
    }
  }
  return dist;
}

double ks_distance(const EmpiricalDistribution& d1, const EmpiricalDistribution& d2) {
  // Both CDFs are step functions, so the supremum is attained at an atom.
  const double n1 = static_cast<double>(std::max<std::uint64_t>(d1.domain_size, 1));
  const double n2 = static_cast<double>(std::max<std::uint64_t>(d2.domain_size, 1));
  std::size_t i = 0, j = 0;
  std::uint64_t c1 = 0, c2 = 0;
  double sup = 0.0;
  while (i < d1.atoms.size() || j < d2.atoms.size()) {
    double x;
    if (j == d2.atoms.size() || (i < d1.atoms.size() && d1.atoms[i].first <= d2.atoms[j].first)) {
      x = d1.atoms[i].first;
    } else {
      x = d2.atoms[j].first;
    }
    while (i < d1.atoms.size() && d1.atoms[i].first == x) c1 += d1.atoms[i++].second;
    while (j < d2.atoms.size() && d2.atoms[j].first == x) c2 += d2.atoms[j++].second;
    sup = std::max(sup, std::abs(static_cast<double>(c1) / n1 - static_cast<double>(c2) / n2));
  }
  return sup;
}

double CharFunctionGrid::max_error() const {
  double m = 0.0;
  for (const double e : error) m = std::max(m, e);
  return m;
}

CharFunctionGrid empirical_charfn(const AdditiveSpec& a1, const AdditiveSpec& a2, const Poly& h1, const Poly& h2,
                                  unsigned n, Mode domain, const std::vector<double>& t_grid,
                                  const IrreducibleTable& table, unsigned partitions) {
  CharFunctionGrid grid;
  grid.t = t_grid;
  for (const double t : t_grid) {
    CorrelationSpec spec;
    spec.field = table.field();
    spec.n = n;
    spec.domain = domain;
    spec.shifts = {h1, h2};
    spec.functions = {exp_additive(a1, t), exp_additive(a2, t)};
    spec.want_main_term = false;
    spec.partitions = partitions;
    grid.empirical.push_back(correlate(spec, table).normalized);
  }
  return grid;
}

CharFunctionGrid limit_charfn(const AdditiveSpec& a1, const AdditiveSpec& a2, const Poly& h1, const Poly& h2,
                              const std::vector<double>& t_grid, Mode mode, const IrreducibleTable& table,
                              const MainTermOptions& options) {
  CharFunctionGrid grid;
  grid.t = t_grid;
  const ShiftPair pair(h1, h2, table);
  for (const double t : t_grid) {
    const FunctionSpec e1 = exp_additive(a1, t);
    const FunctionSpec e2 = exp_additive(a2, t);
    grid.limit.push_back(main_term(std::nullopt, std::nullopt, pair, e1, e2, mode, table, options).total);

    // Closeness hypothesis: the increments of sum (psi(P) - 1)/|P| should
    // shrink. Only a trend check on the tabulated range.
    for (const FunctionSpec* e : {&e1, &e2}) {
      if (grid.warning || table.max_deg() < 4) break;
      std::vector<Complex> s;
      try {
        s = closeness_partial_sums(*e, table.max_deg(), table);
      } catch (const ValidationError&) {
        break;
      }
      const std::size_t last = s.size() - 1, mid = s.size() / 2;
      const double tail = std::abs(s[last] - s[last - 1]);
      const double middle = std::abs(s[mid] - s[mid - 1]);
      if (tail > middle && tail > 1e-12) {
        std::ostringstream msg;
        msg << "closeness partial sums of " << e->name() << " do not settle (increment " << tail << " at degree "
            << last + 1 << ")";
        grid.warning = msg.str();
      }
    }
  }
  return grid;
}

CharFunctionGrid combine_charfn(const CharFunctionGrid& empirical, const CharFunctionGrid& limit) {
  if (empirical.t != limit.t) throw ValidationError("characteristic-function grids differ");
  CharFunctionGrid out;
  out.t = empirical.t;
  out.empirical = empirical.empirical;
  out.limit = limit.limit;
  out.warning = limit.warning ? limit.warning : empirical.warning;
  if (out.empirical.size() == out.t.size() && out.limit.size() == out.t.size()) {
    for (std::size_t i = 0; i < out.t.size(); ++i) out.error.push_back(std::abs(out.empirical[i] - out.limit[i].value));
  }
  return out;
}

std::vector<double> linear_grid(double lo, double hi, double step) {
  if (!(step > 0.0) || hi < lo) throw ValidationError("bad grid range");
  std::vector<double> grid;
  const auto count = static_cast<std::size_t>(std::floor((hi - lo) / step + 1e-9));
  // lo + i*step rather than repeated addition keeps the points exact for
  // dyadic steps like 0.5.
  for (std::size_t i = 0; i <= count; ++i) grid.push_back(lo + static_cast<double>(i) * step);
  return grid;
}

TkReport tk_ratio(const AdditiveSpec& psi, const Poly& h, unsigned n, Mode domain, const IrreducibleTable& table,
                  unsigned partitions) {
  if (n < 1) throw ValidationError("degree n must be at least 1");
  check_shift(h, n, table.field());
  check_table(n, table, "tk_ratio");
  const double q = table.field().p();

  // Centering constant and variance weight over prime powers P^m, m deg P <= n.
  detail::CompensatedSum center, weight;
  for (unsigned d = 1; d <= n; ++d) {
    const double inv = 1.0 - std::pow(q, -static_cast<double>(d));
    for (unsigned m = 1; m * d <= n; ++m) {
      const double norm = std::pow(q, -static_cast<double>(m * d));
      auto add = [&](double v, double count) {
        if (domain == Mode::kMonic) {
          center.add(count * v * norm * inv);
          weight.add(count * v * v * norm);
        } else {
          // 1/Phi(P^m) = q^{-md} / (1 - q^{-d}).
          center.add(count * v * norm);
          weight.add(count * v * v * norm / inv);
        }
      };
      if (psi.degree_symmetric()) {
        add(psi.value(MonicKey{d, 0}, m), static_cast<double>(table.count(d)));
      } else {
        for (const std::uint64_t idx : table.primes(d)) add(psi.value(MonicKey{d, idx}, m), 1.0);
      }
    }
  }
  const double e = center.value();

  const detail::Domain dom(domain, n, table);
  const Factorizer factorizer(table);
  const detail::Shift shift(h, n);
  const unsigned parts = std::max(partitions, 1u);
  std::vector<detail::CompensatedSum> acc(parts);
  detail::run_partitions(dom.size(), parts, [&](unsigned part, std::uint64_t lo, std::uint64_t hi) {
    std::vector<PrimePower> fact;
    detail::CompensatedSum sum;
    for (std::uint64_t i = lo; i < hi; ++i) {
      factorizer.factor(MonicKey{n, shift.apply(dom.index(i))}, fact);
      const double dev = additive_value(psi, fact) - e;
      sum.add(domain == Mode::kMonic ? dev * dev : std::abs(dev));
    }
    acc[part] = sum;
  });
  detail::CompensatedSum lhs;
  for (const auto& a : acc) lhs.add(a.value());

  TkReport r;
  r.lhs = lhs.value();
  r.rhs = domain == Mode::kMonic ? std::pow(q, n) * weight.value()
                                 : static_cast<double>(dom.size()) * std::sqrt(weight.value());
  r.ratio = r.rhs > 0.0 ? r.lhs / r.rhs : 0.0;
  return r;
}

double h_sum(unsigned k, const IrreducibleTable& table) {
  if (k < 1) throw ValidationError("H(k) needs k >= 1");
  check_table(std::max(k / 2, 1u), table, "h_sum");
  const Factorizer factorizer(table);
  const std::uint64_t total = table.field().pow(k);
  std::vector<PrimePower> fact;
  std::uint64_t acc = 0;  // sum of 3^omega over squarefree M
  for (std::uint64_t idx = 0; idx < total; ++idx) {
    factorizer.factor(MonicKey{k, idx}, fact);
    std::uint64_t term = 1;
    for (const auto& pp : fact) {
      if (pp.multiplicity > 1) {
        term = 0;
        break;
      }
      term *= 3;
    }
    acc += term;
  }
  return static_cast<double>(acc) / static_cast<double>(total);
}

SieveReport sieve_diagnostics(unsigned n, const Poly& h, double t, const IrreducibleTable& table) {
  if (n < 1) throw ValidationError("degree n must be at least 1");
  if (!(t >= 0.0)) throw ValidationError("t must be non-negative");
  check_shift(h, n, table.field());
  check_table(n, table, "sieve_diagnostics");
  const FieldSpec& field = table.field();
  const double q = field.p();
  SieveReport r;
  r.n = n;

  // Theta(n): a degree-n polynomial has at most one prime factor of degree
  // above n/2, so each P contributes to at most one count.
  const Factorizer factorizer(table);
  const detail::Shift shift(h, n);
  const auto primes = table.primes(n);
  std::map<MonicKey, std::uint64_t> counts;
  std::vector<PrimePower> fact;
  for (const std::uint64_t idx : primes) {
    factorizer.factor(MonicKey{n, shift.apply(idx)}, fact);
    for (const auto& pp : fact) {
      if (2 * pp.prime.degree > n) ++counts[pp.prime];
    }
  }
  detail::CompensatedSum theta;
  for (const auto& [key, c] : counts) {
    theta.add((std::pow(q, key.degree) - 1.0) * static_cast<double>(c) * static_cast<double>(c));
  }
  r.theta = theta.value();
  const double np = static_cast<double>(primes.size());
  r.theta_ratio = np > 0 ? r.theta / (np * np) : 0.0;

  // Bombieri-Vinogradov sum over deg M < n/2 - t log_q n.
  const double limit = n / 2.0 - t * std::log(static_cast<double>(n)) / std::log(q);
  r.bv_max_degree = limit > 0 ? static_cast<int>(std::ceil(limit)) - 1 : -1;
  r.bv_envelope = std::pow(q, n) / std::pow(static_cast<double>(n), t + 1.0);
  detail::CompensatedSum bv;
  if (r.bv_max_degree >= 0) bv.add(std::abs(np - std::pow(q, n) / n));  // M = 1
  for (int e = 1; e <= r.bv_max_degree; ++e) {
    const std::uint64_t moduli = field.pow(static_cast<unsigned>(e));
    for (std::uint64_t mi = 0; mi < moduli; ++mi) {
      const Poly m = monic_at(field, static_cast<unsigned>(e), mi);
      const auto hist = residue_histogram(n, m, table);
      const double expected = std::pow(q, n) / (n * static_cast<double>(phi(m, table)));
      double worst = 0.0;
      for (std::uint64_t b = 1; b < hist.size(); ++b) {
        if (*gcd(residue_at(field, static_cast<unsigned>(e), b), m).degree() != 0) continue;
        worst = std::max(worst, std::abs(static_cast<double>(hist[b]) - expected));
      }
      bv.add(worst);
    }
  }
  r.bv_sum = bv.value();

  for (unsigned k = 1; k <= n; ++k) r.h_values.push_back(h_sum(k, table));

  const std::uint64_t total = field.pow(n);
  for (std::uint64_t idx = 0; idx < total; ++idx) {
    factorizer.factor(MonicKey{n, idx}, fact);
    double prod = 1.0;
    for (const auto& pp : fact) prod *= 1.0 + std::pow(q, -static_cast<double>(pp.prime.degree));
    r.divprod_max = std::max(r.divprod_max, prod);
  }
  return r;
}

BrunTitchmarshReport brun_titchmarsh_check(unsigned max_n, const IrreducibleTable& table, unsigned min_n) {
  check_table(max_n, table, "brun_titchmarsh_check");
  const FieldSpec& field = table.field();
  BrunTitchmarshReport r;
  for (unsigned n = std::max(min_n, 1u); n <= max_n; ++n) {
    const std::uint64_t qn = field.pow(n);
    // M = 1: the only class is B = 0, and pi = |P_n|.
    {
      const std::uint64_t pi = table.count(n);
      const std::uint64_t scaled = pi * (n + 1);
      ++r.checked;
      if (scaled > 2 * qn) ++r.violations;
      r.max_ratio = std::max(r.max_ratio, static_cast<double>(scaled) / static_cast<double>(2 * qn));
    }
    for (unsigned e = 1; e < n; ++e) {
      const std::uint64_t moduli = field.pow(e);
      for (std::uint64_t mi = 0; mi < moduli; ++mi) {
        const Poly m = monic_at(field, e, mi);
        const std::uint64_t phi_m = phi(m, table);
        const auto hist = residue_histogram(n, m, table);
        for (std::uint64_t b = 1; b < hist.size(); ++b) {
          if (*gcd(residue_at(field, e, b), m).degree() != 0) continue;
          // pi <= 2 q^n / (Phi(M) (n - deg M + 1)), compared in integers.
          const std::uint64_t lhs = hist[b] * phi_m * (n - e + 1);
          ++r.checked;
          if (lhs > 2 * qn) ++r.violations;
          r.max_ratio = std::max(r.max_ratio, static_cast<double>(lhs) / static_cast<double>(2 * qn));
        }
      }
    }
  }
  return r;
}

}  // namespace ffcorr
