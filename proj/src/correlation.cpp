#include "ffcorr/correlation.hpp"

#include <chrono>
#include <cmath>
#include <limits>

#include "ffcorr/error.hpp"
#include "parallel.hpp"

namespace ffcorr {

std::string domain_name(Mode mode) { return mode == Mode::kMonic ? "monic" : "prime"; }

CorrelationReport correlate(const CorrelationSpec& spec, const IrreducibleTable& table) {
  const auto start = std::chrono::steady_clock::now();
  const std::uint32_t p = spec.field.p();
  if (table.field() != spec.field) throw ValidationError("table and correlation use different fields");
  if (spec.functions.empty() || spec.functions.size() != spec.shifts.size()) {
    throw ValidationError("need one shift per function and at least one function");
  }
  if (spec.n < 1) throw ValidationError("degree n must be at least 1");
  for (const auto& h : spec.shifts) {
    if (h.modulus() != p) throw ValidationError("shift over a different field");
    if (!h.is_zero() && *h.degree() >= spec.n) {
      throw ValidationError("shift " + format_poly(h) + " must have degree < n = " + std::to_string(spec.n));
    }
  }
  const std::size_t k = spec.functions.size();
  if (spec.want_main_term && k > 2) {
    throw ValidationError("main terms exist only for two-point correlations (k = " + std::to_string(k) + ")");
  }
  const unsigned needed = spec.domain == Mode::kPrime ? spec.n : spec.n / 2;
  if (table.max_deg() < std::max(needed, 1u)) {
    throw ValidationError("table max_deg " + std::to_string(table.max_deg()) + " too small for n = " +
                          std::to_string(spec.n) + " (" + domain_name(spec.domain) + " domain)");
  }

  const detail::Domain dom(spec.domain, spec.n, table);
  const Factorizer factorizer(table);
  std::vector<detail::Shift> shifts;
  std::vector<detail::SpecEvaluator> evals;
  std::vector<bool> trivial;
  bool exact = true;
  for (std::size_t i = 0; i < k; ++i) {
    shifts.emplace_back(spec.shifts[i], spec.n);
    evals.emplace_back(spec.functions[i], spec.n);
    trivial.push_back(spec.functions[i].kind() == FunctionKind::kOne);
    exact = exact && spec.functions[i].integer_valued();
  }

  const unsigned parts = std::max(spec.partitions, 1u);
  std::vector<__int128> int_parts(parts, 0);
  std::vector<detail::CompensatedSum> re_parts(parts), im_parts(parts);

  detail::run_partitions(dom.size(), parts, [&](unsigned part, std::uint64_t lo, std::uint64_t hi) {
    std::vector<PrimePower> fact;
    fact.reserve(64);
    __int128 acc = 0;
    detail::CompensatedSum re, im;
    for (std::uint64_t i = lo; i < hi; ++i) {
      const std::uint64_t idx = dom.index(i);
      if (exact) {
        std::int64_t v = 1;
        for (std::size_t j = 0; j < k && v != 0; ++j) {
          if (trivial[j]) continue;
          factorizer.factor(MonicKey{spec.n, shifts[j].apply(idx)}, fact);
          v *= evals[j].eval_exact(fact);
        }
        acc += v;
      } else {
        Complex v(1.0);
        for (std::size_t j = 0; j < k && v != 0.0; ++j) {
          if (trivial[j]) continue;
          factorizer.factor(MonicKey{spec.n, shifts[j].apply(idx)}, fact);
          v *= evals[j].eval(fact);
        }
        re.add(v.real());
        im.add(v.imag());
      }
    }
    int_parts[part] = acc;
    re_parts[part] = re;
    im_parts[part] = im;
  });

  CorrelationReport r;
  r.q = p;
  r.n = spec.n;
  r.domain = spec.domain;
  r.partitions = parts;
  for (std::size_t i = 0; i < k; ++i) {
    r.functions.push_back(spec.functions[i].name());
    r.shifts.push_back(format_poly(spec.shifts[i]));
  }
  r.domain_size = dom.size();
  if (exact) {
    __int128 total = 0;
    for (auto v : int_parts) total += v;
    if (total > std::numeric_limits<std::int64_t>::max() || total < std::numeric_limits<std::int64_t>::min()) {
      throw BudgetError("exact correlation sum overflows 64 bits");
    }
    r.exact_sum = static_cast<std::int64_t>(total);
    r.raw_sum = Complex(static_cast<double>(*r.exact_sum), 0.0);
  } else {
    detail::CompensatedSum re, im;
    for (unsigned i = 0; i < parts; ++i) {
      re.add(re_parts[i].value());
      im.add(im_parts[i].value());
    }
    r.raw_sum = Complex(re.value(), im.value());
  }
  r.normalized = dom.size() ? r.raw_sum / static_cast<double>(dom.size()) : Complex(0.0);

  bool unit = true;
  for (const auto& f : spec.functions) unit = unit && f.unit_bounded();
  r.deviation = std::numeric_limits<double>::quiet_NaN();
  if (spec.want_main_term && k == 2 && unit) {
    const ShiftPair pair(spec.shifts[0], spec.shifts[1], table);
    r.main_term = main_term(spec.n, spec.gamma, pair, spec.functions[0], spec.functions[1], spec.domain, table,
                            spec.main_options);
    r.deviation = std::abs(r.normalized - r.main_term->total.value);
  }
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return r;
}

std::uint64_t crt_count(const Poly& g1, const Poly& g2, const Poly& h1, const Poly& h2, unsigned n,
                        const FieldSpec& field) {
  const std::uint32_t p = field.p();
  for (const Poly* g : {&g1, &g2}) {
    if (g->modulus() != p || !g->is_monic()) throw ValidationError("crt_count moduli must be monic and nonzero");
  }
  const ExtendedGcd eg = extended_gcd(g1, g2);
  const Poly diff = h1 - h2;
  const DivMod split = divmod(diff, eg.gcd);
  if (!split.remainder.is_zero()) return 0;
  const Poly lcm = make_monic(divmod(g1, eg.gcd).quotient * g2);
  const unsigned dl = *lcm.degree();
  if (dl <= n) return field.pow(n - dl);
  // Only the reduced representative of the residue class can have degree n.
  const Poly f0 = (-h1 + g1 * eg.s * split.quotient) % lcm;
  return f0.is_monic() && *f0.degree() == n ? 1 : 0;
}

std::vector<ScanRow> deviation_scan(const CorrelationSpec& templ, unsigned n_lo, unsigned n_hi, unsigned step,
                                    const IrreducibleTable& table) {
  if (n_lo > n_hi || step == 0) throw ValidationError("bad scan range");
  std::vector<ScanRow> rows;
  for (unsigned n = n_lo; n <= n_hi; n += step) {
    CorrelationSpec spec = templ;
    spec.n = n;
    ScanRow row{correlate(spec, table), std::numeric_limits<double>::quiet_NaN()};
    if (row.report.main_term) {
      const unsigned r = std::min(row.report.main_term->gamma, n);
      try {
        const FunctionSpec one = functions::one();
        const double dist = distance(spec.functions[0], one, r, n, table) + distance(spec.functions[1], one, r, n, table);
        row.error_shape = error_bound_shape(spec.domain, r, n, 0.75, spec.field.p(), dist);
      } catch (const ValidationError&) {
        // Distance window not computable from this table; leave the overlay empty.
      }
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

namespace {

std::string join(const std::vector<std::string>& parts) {
  std::string out;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (i) out += ';';
    out += parts[i];
  }
  return out;
}

}  // namespace

std::vector<std::string> report_columns() {
  return {"q", "n", "domain", "functions", "h-list", "raw_re", "raw_im", "normalized_re", "normalized_im",
                      "main_re", "main_im", "tail_bound", "deviation", "seconds"};
}

std::vector<Cell> report_cells(const CorrelationReport& r, bool with_timing) {
  const double nan = std::numeric_limits<double>::quiet_NaN();
  std::vector<Cell> row{std::uint64_t{r.q}, std::uint64_t{r.n}, domain_name(r.domain), join(r.functions),
                        join(r.shifts)};
  if (r.exact_sum) {
    row.emplace_back(*r.exact_sum);
    row.emplace_back(std::int64_t{0});
  } else {
    row.emplace_back(r.raw_sum.real());
    row.emplace_back(r.raw_sum.imag());
  }
  row.emplace_back(r.normalized.real());
  row.emplace_back(r.normalized.imag());
  row.emplace_back(r.main_term ? r.main_term->total.value.real() : nan);
  row.emplace_back(r.main_term ? r.main_term->total.value.imag() : nan);
  row.emplace_back(r.main_term ? r.main_term->total.tail_bound : nan);
  row.emplace_back(r.deviation);
  row.emplace_back(with_timing ? r.seconds : 0.0);
  return row;
}

}  // namespace ffcorr
