// Batch commands behind the ffcorr tool. Each command reads an
// ExperimentConfig, writes <stem>.csv plus a JSON mirror, and prints a short
// summary.

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>
#include <ostream>
#include <sstream>

#include "ffcorr/arith.hpp"
#include "ffcorr/config.hpp"
#include "ffcorr/correlation.hpp"
#include "ffcorr/error.hpp"
#include "ffcorr/main_term.hpp"
#include "ffcorr/report_table.hpp"
#include "ffcorr/stats.hpp"

namespace ffcorr {

namespace {

// Largest degree with p^d <= 2^20: the default table size for commands whose
// degree is otherwise unbounded (n = infinity).
unsigned default_table_degree(std::uint32_t p) {
  unsigned d = 1;
  while (FieldSpec(p).pow(d + 1) <= (std::uint64_t{1} << 20)) ++d;
  return d;
}

Mode parse_mode(const std::string& s) {
  if (s == "monic") return Mode::kMonic;
  if (s == "prime") return Mode::kPrime;
  throw ValidationError("domain must be monic or prime");
}

std::vector<unsigned> n_values(const ExperimentConfig& c, const char* command) {
  if (c.n_range) {
    std::vector<unsigned> out;
    for (unsigned n = c.n_range->lo; n <= c.n_range->hi; n += c.n_range->step) out.push_back(n);
    return out;
  }
  if (c.n) return {*c.n};
  throw ValidationError(std::string(command) + " needs n or n_range");
}

std::vector<Poly> shifts_of(const ExperimentConfig& c, const FieldSpec& field, std::size_t count, const char* command) {
  if (c.shifts.size() != count) {
    throw ValidationError(std::string(command) + " needs " + std::to_string(count) + " shifts, got " +
                          std::to_string(c.shifts.size()));
  }
  std::vector<Poly> out;
  for (const auto& s : c.shifts) out.push_back(parse_poly(s, field));
  return out;
}

Poly single_shift(const ExperimentConfig& c, const FieldSpec& field) {
  if (c.shifts.empty()) return Poly::zero(field.p());
  if (c.shifts.size() != 1) throw ValidationError("expected a single shift h");
  return parse_poly(c.shifts[0], field);
}

MainTermOptions main_options(const ExperimentConfig& c) {
  MainTermOptions o;
  if (c.depth) o.depth = *c.depth;
  o.cutoff = c.cutoff;
  return o;
}

std::filesystem::path stem_of(const ExperimentConfig& c, std::string_view command) {
  return c.output.empty() ? std::filesystem::path("ffcorr_" + std::string(command)) : std::filesystem::path(c.output);
}

unsigned factor_degree(unsigned n, Mode mode) { return mode == Mode::kPrime ? n : std::max(n / 2, 1u); }

void save(const ReportTable& t, const std::filesystem::path& stem, std::ostream& out) {
  t.save(stem);
  out << "wrote " << stem.string() << ".csv and " << stem.string() << ".json\n";
}

std::vector<AdditiveSpec> additive_pair(const ExperimentConfig& c, const FieldSpec& field, const char* command) {
  if (c.functions.empty() || c.functions.size() > 2) {
    throw ValidationError(std::string(command) + " needs one or two additive specs");
  }
  std::vector<AdditiveSpec> out;
  for (const auto& f : c.functions) out.push_back(parse_additive_spec(f, field));
  if (out.size() == 1) out.push_back(functions::zero_additive());
  return out;
}

int cmd_sieve(const ExperimentConfig& c, std::ostream& out) {
  const FieldSpec field(c.p);
  const unsigned max_deg = c.max_deg.value_or(c.n.value_or(16));
  const IrreducibleTable built = IrreducibleTable::build(field, max_deg);
  const auto path = store_table(c, built);
  // Reloading runs the cache's own necklace verification.
  const IrreducibleTable table = IrreducibleTable::load(path);
  ReportTable t({"q", "d", "count", "necklace_sum", "q_power", "necklace_ok", "rh_deviation", "rh_bound"});
  bool all_ok = true;
  for (unsigned d = 1; d <= table.max_deg(); ++d) {
    const NecklaceReport nr = table.necklace_check(d);
    all_ok = all_ok && nr.ok();
    const double dev = std::abs(static_cast<double>(d) * static_cast<double>(table.count(d)) -
                                static_cast<double>(field.pow(d)));
    t.add_row({std::uint64_t{c.p}, std::uint64_t{d}, table.count(d), nr.weighted_sum, nr.q_power,
               std::string(nr.ok() ? "true" : "false"), dev, 4.0 * std::pow(static_cast<double>(c.p), d / 2.0)});
  }
  out << "sieved p=" << c.p << " up to degree " << max_deg << " -> " << path.string() << '\n';
  out << "necklace identity " << (all_ok ? "holds" : "FAILS") << " for every degree\n";
  save(t, stem_of(c, "sieve"), out);
  return all_ok ? 0 : 1;
}

int cmd_factor(const ExperimentConfig& c, std::ostream& out, std::ostream& err) {
  const FieldSpec field(c.p);
  if (c.poly.empty()) throw ValidationError("factor needs poly");
  const Poly f = parse_poly(c.poly, field);
  if (!f.is_monic()) throw ValidationError("factor needs a monic polynomial");
  const IrreducibleTable table = cached_table(c, std::max(*f.degree() / 2, 1u), &err);
  const Factorization fact = factorize(f, table);
  ReportTable t({"prime", "degree", "multiplicity"});
  out << format_poly(f) << " =";
  for (const auto& pp : fact.factors) {
    const std::string prime = format_poly(from_key(field, pp.prime));
    t.add_row({prime, std::uint64_t{pp.prime.degree}, std::uint64_t{pp.multiplicity}});
    out << " (" << prime << ")";
    if (pp.multiplicity > 1) out << '^' << pp.multiplicity;
  }
  if (fact.factors.empty()) out << " 1";
  out << "\nPhi = " << phi(fact, c.p) << ", Omega = " << fact.big_omega() << ", omega = " << fact.little_omega()
      << '\n';
  save(t, stem_of(c, "factor"), out);
  return 0;
}

CorrelationSpec correlation_template(const ExperimentConfig& c, std::vector<FunctionSpec> fns, std::vector<Poly> hs) {
  CorrelationSpec spec;
  spec.field = FieldSpec(c.p);
  spec.domain = parse_mode(c.domain);
  spec.functions = std::move(fns);
  spec.shifts = std::move(hs);
  spec.gamma = c.gamma;
  spec.main_options = main_options(c);
  spec.want_main_term = spec.functions.size() == 2;
  spec.partitions = c.partitions;
  return spec;
}

void print_report(const CorrelationReport& r, std::ostream& out) {
  out << "n=" << r.n << " raw=";
  if (r.exact_sum) {
    out << *r.exact_sum;
  } else {
    out << format_double(r.raw_sum.real()) << (r.raw_sum.imag() < 0 ? "" : "+") << format_double(r.raw_sum.imag())
        << 'i';
  }
  out << " normalized=" << format_double(r.normalized.real());
  if (r.main_term) {
    out << " main=" << format_double(r.main_term->total.value.real()) << " deviation=" << format_double(r.deviation);
  }
  out << '\n';
}

int cmd_correlate(const ExperimentConfig& c, std::ostream& out, std::ostream& err) {
  const FieldSpec field(c.p);
  if (c.functions.empty()) throw ValidationError("correlate needs at least one function spec");
  std::vector<FunctionSpec> fns;
  for (const auto& f : c.functions) fns.push_back(parse_function_spec(f, field));
  auto spec = correlation_template(c, std::move(fns), shifts_of(c, field, c.functions.size(), "correlate"));
  const auto ns = n_values(c, "correlate");
  const IrreducibleTable table = cached_table(c, factor_degree(ns.back(), spec.domain), &err);
  ReportTable t(report_columns());
  for (const unsigned n : ns) {
    spec.n = n;
    const CorrelationReport r = correlate(spec, table);
    print_report(r, out);
    t.add_row(report_cells(r, c.timing));
  }
  save(t, stem_of(c, "correlate"), out);
  return 0;
}

int cmd_mainterm(const ExperimentConfig& c, std::ostream& out, std::ostream& err) {
  const FieldSpec field(c.p);
  if (c.functions.size() != 2) throw ValidationError("mainterm needs two function specs");
  const auto f1 = parse_function_spec(c.functions[0], field);
  const auto f2 = parse_function_spec(c.functions[1], field);
  const auto hs = shifts_of(c, field, 2, "mainterm");
  const Mode mode = parse_mode(c.domain);
  std::vector<std::optional<unsigned>> ns;
  if (c.n || c.n_range) {
    for (const unsigned n : n_values(c, "mainterm")) ns.emplace_back(n);
  } else {
    ns.emplace_back(std::nullopt);
  }
  unsigned need = c.max_deg.value_or(default_table_degree(c.p));
  for (const auto& n : ns) {
    if (n && !c.max_deg) need = std::min(need, std::max(*n, 1u));
  }
  const IrreducibleTable table = cached_table(c, need, &err);
  const ShiftPair pair(hs[0], hs[1], table);
  ReportTable t({"q", "n", "gamma", "p1_re", "p1_im", "p1_tail", "p2_re", "p2_im", "p2_tail", "main_re", "main_im",
                 "tail_bound"});
  for (const auto& n : ns) {
    const MainTerm m = main_term(n, c.gamma, pair, f1, f2, mode, table, main_options(c));
    const std::string label = n ? std::to_string(*n) : "inf";
    t.add_row({std::uint64_t{c.p}, label, std::uint64_t{m.gamma}, m.p1.value.real(), m.p1.value.imag(),
               m.p1.tail_bound, m.p2.value.real(), m.p2.value.imag(), m.p2.tail_bound, m.total.value.real(),
               m.total.value.imag(), m.total.tail_bound});
    out << "n=" << label << " gamma=" << m.gamma << " P=" << format_double(m.total.value.real())
        << " tail<=" << format_double(m.total.tail_bound) << '\n';
  }
  save(t, stem_of(c, "mainterm"), out);
  return 0;
}

int cmd_chowla(const ExperimentConfig& c, std::ostream& out, std::ostream& err) {
  const FieldSpec field(c.p);
  if (!c.y || *c.y < 1) throw ValidationError("chowla needs y >= 1");
  std::vector<Poly> hs;
  if (c.shifts.size() == 1) {
    hs = {Poly::zero(c.p), parse_poly(c.shifts[0], field)};
  } else {
    hs = shifts_of(c, field, 2, "chowla");
  }
  const FunctionSpec lambda = functions::liouville_truncated(*c.y);
  auto spec = correlation_template(c, {lambda, lambda}, hs);
  const auto ns = n_values(c, "chowla");
  const IrreducibleTable table = cached_table(c, factor_degree(ns.back(), spec.domain), &err);
  const double y = *c.y;
  const double overlay = c.bound_constant * std::pow(std::log(y), 4) / std::pow(y, 4);
  auto columns = report_columns();
  columns.push_back("error_shape");
  columns.push_back("chowla_bound");
  ReportTable t(columns);
  for (const ScanRow& row : deviation_scan(spec, ns.front(), ns.back(), c.n_range ? c.n_range->step : 1, table)) {
    print_report(row.report, out);
    auto cells = report_cells(row.report, c.timing);
    cells.emplace_back(row.error_shape);
    cells.emplace_back(overlay);
    t.add_row(std::move(cells));
  }
  save(t, stem_of(c, "chowla"), out);
  return 0;
}

int cmd_dist(const ExperimentConfig& c, std::ostream& out, std::ostream& err) {
  const FieldSpec field(c.p);
  const auto specs = additive_pair(c, field, "dist");
  const auto hs = shifts_of(c, field, 2, "dist");
  const Mode mode = parse_mode(c.domain);
  const auto ns = n_values(c, "dist");
  const IrreducibleTable table = cached_table(c, factor_degree(ns.back(), mode), &err);
  ReportTable t({"n", "value", "multiplicity"});
  ReportTable ks({"n_a", "n_b", "ks"});
  std::optional<EmpiricalDistribution> prev;
  for (const unsigned n : ns) {
    const auto d = empirical_distribution(specs[0], specs[1], hs[0], hs[1], n, mode, table, c.partitions);
    for (const auto& [v, m] : d.atoms) t.add_row({std::uint64_t{n}, v, m});
    out << "n=" << n << ": " << d.atoms.size() << " distinct values over " << d.domain_size << " samples\n";
    if (prev) {
      const double k = ks_distance(*prev, d);
      ks.add_row({std::uint64_t{n - (c.n_range ? c.n_range->step : 1)}, std::uint64_t{n}, k});
      out << "  KS to previous n: " << format_double(k) << '\n';
    }
    prev = d;
  }
  const auto stem = stem_of(c, "dist");
  save(t, stem, out);
  if (!ks.rows().empty()) save(ks, stem.string() + "_ks", out);
  return 0;
}

int cmd_charfn(const ExperimentConfig& c, std::ostream& out, std::ostream& err) {
  const FieldSpec field(c.p);
  const auto specs = additive_pair(c, field, "charfn");
  const auto hs = shifts_of(c, field, 2, "charfn");
  const Mode mode = parse_mode(c.domain);
  const auto ns = n_values(c, "charfn");
  const std::vector<double> grid = c.t_grid.empty() ? linear_grid(-3.0, 3.0, 0.5) : c.t_grid;
  const IrreducibleTable table = cached_table(c, factor_degree(ns.back(), mode), &err);
  const CharFunctionGrid limit = limit_charfn(specs[0], specs[1], hs[0], hs[1], grid, mode, table, main_options(c));
  if (limit.warning) err << "warning: " << *limit.warning << '\n';
  ReportTable t({"n", "t", "emp_re", "emp_im", "lim_re", "lim_im", "tail_bound", "error"});
  for (const unsigned n : ns) {
    const auto g = combine_charfn(empirical_charfn(specs[0], specs[1], hs[0], hs[1], n, mode, grid, table,
                                                   c.partitions),
                                  limit);
    for (std::size_t i = 0; i < grid.size(); ++i) {
      t.add_row({std::uint64_t{n}, grid[i], g.empirical[i].real(), g.empirical[i].imag(), g.limit[i].value.real(),
                 g.limit[i].value.imag(), g.limit[i].tail_bound, g.error[i]});
    }
    out << "n=" << n << " max |phi_n - phi| = " << format_double(g.max_error()) << '\n';
  }
  save(t, stem_of(c, "charfn"), out);
  return 0;
}

int cmd_tk(const ExperimentConfig& c, std::ostream& out, std::ostream& err) {
  const FieldSpec field(c.p);
  if (c.functions.size() != 1) throw ValidationError("tk needs exactly one additive spec");
  const AdditiveSpec psi = parse_additive_spec(c.functions[0], field);
  const Poly h = single_shift(c, field);
  const Mode mode = parse_mode(c.domain);
  const auto ns = n_values(c, "tk");
  const IrreducibleTable table = cached_table(c, ns.back(), &err);
  ReportTable t({"q", "n", "domain", "psi", "h", "lhs", "rhs", "ratio"});
  for (const unsigned n : ns) {
    const TkReport r = tk_ratio(psi, h, n, mode, table, c.partitions);
    t.add_row({std::uint64_t{c.p}, std::uint64_t{n}, c.domain, psi.name(), format_poly(h), r.lhs, r.rhs, r.ratio});
    out << "n=" << n << " lhs=" << format_double(r.lhs) << " rhs=" << format_double(r.rhs)
        << " ratio=" << format_double(r.ratio) << '\n';
  }
  save(t, stem_of(c, "tk"), out);
  return 0;
}

int cmd_diagnostics(const ExperimentConfig& c, std::ostream& out, std::ostream& err) {
  const FieldSpec field(c.p);
  const Poly h = single_shift(c, field);
  const auto ns = n_values(c, "diagnostics");
  const IrreducibleTable table = cached_table(c, ns.back(), &err);
  ReportTable t({"q", "n", "theta", "theta_ratio", "bv_sum", "bv_envelope", "bv_ratio", "bv_max_degree", "H",
                 "H_over_n2", "divprod_max", "divprod_over_log", "bt_checked", "bt_violations", "bt_max_ratio"});
  bool clean = true;
  for (const unsigned n : ns) {
    const SieveReport r = sieve_diagnostics(n, h, c.bv_t, table);
    const BrunTitchmarshReport bt = brun_titchmarsh_check(n, table, n);
    clean = clean && bt.violations == 0;
    const double hn = r.h_values.back();
    const double logn = n > 1 ? std::log(static_cast<double>(n)) : std::numeric_limits<double>::quiet_NaN();
    t.add_row({std::uint64_t{c.p}, std::uint64_t{n}, r.theta, r.theta_ratio, r.bv_sum, r.bv_envelope,
               r.bv_sum / r.bv_envelope, std::int64_t{r.bv_max_degree}, hn, hn / (double(n) * n), r.divprod_max,
               r.divprod_max / logn, bt.checked, bt.violations, bt.max_ratio});
    out << "n=" << n << " theta/|P_n|^2=" << format_double(r.theta_ratio) << " H(n)/n^2=" << format_double(hn / (double(n) * n))
        << " Brun-Titchmarsh violations=" << bt.violations << '\n';
  }
  save(t, stem_of(c, "diagnostics"), out);
  if (!clean) err << "Brun-Titchmarsh inequality violated; see bt_violations\n";
  return 0;
}

}  // namespace

int dispatch(std::string_view command, const ExperimentConfig& config, std::ostream& out, std::ostream& err) {
  try {
    if (command == "sieve") return cmd_sieve(config, out);
    if (command == "factor") return cmd_factor(config, out, err);
    if (command == "correlate") return cmd_correlate(config, out, err);
    if (command == "mainterm") return cmd_mainterm(config, out, err);
    if (command == "chowla") return cmd_chowla(config, out, err);
    if (command == "dist") return cmd_dist(config, out, err);
    if (command == "charfn") return cmd_charfn(config, out, err);
    if (command == "tk") return cmd_tk(config, out, err);
    if (command == "diagnostics") return cmd_diagnostics(config, out, err);
    err << "error: unknown command '" << command << "'\n";
    return 1;
  } catch (const BudgetError& e) {
    err << "budget exceeded: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
}

}  // namespace ffcorr
