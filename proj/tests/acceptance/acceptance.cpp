// Acceptance suite: one PASS/FAIL line per criterion; exit status 1 if any
// criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "ffcorr/correlation.hpp"
#include "ffcorr/stats.hpp"
#include "oracles.hpp"

using namespace ffcorr;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

Poly P(std::string_view s, std::uint32_t p = 2) { return parse_poly(s, FieldSpec(p)); }

unsigned workers() { return std::max(1u, std::thread::hardware_concurrency()); }

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

struct Grid {
  std::uint32_t p;
  unsigned max_n;
};
const Grid kSieveGrid[] = {{2, 20}, {3, 12}, {5, 8}};

const IrreducibleTable& table_for(std::uint32_t p) {
  static const IrreducibleTable t2 = IrreducibleTable::build(FieldSpec(2), 20);
  static const IrreducibleTable t3 = IrreducibleTable::build(FieldSpec(3), 12);
  static const IrreducibleTable t5 = IrreducibleTable::build(FieldSpec(5), 8);
  return p == 2 ? t2 : p == 3 ? t3 : t5;
}

Outcome sieve_exactness() {
  const auto t0 = std::chrono::steady_clock::now();
  std::uint64_t checked = 0, bad = 0;
  for (const auto& g : kSieveGrid) {
    const auto& t = table_for(g.p);
    for (unsigned n = 1; n <= g.max_n; ++n) {
      ++checked;
      if (!t.necklace_check(n).ok() || t.count(n) != oracle::necklace(g.p, n)) ++bad;
    }
  }
  const double secs = seconds_since(t0);
  return {bad == 0 && secs < 120.0, fmt("%llu identities checked, %llu failures, %.2f s", (unsigned long long)checked,
                                        (unsigned long long)bad, secs)};
}

Outcome rh_shape() {
  double worst = 0.0;
  bool ok = true;
  for (const auto& g : kSieveGrid) {
    const auto& t = table_for(g.p);
    for (unsigned n = 1; n <= g.max_n; ++n) {
      const double lhs = std::fabs(double(n) * double(t.count(n)) - std::pow(double(g.p), n));
      const double bound = 4.0 * std::pow(double(g.p), n / 2.0);
      worst = std::max(worst, lhs / bound);
      ok = ok && lhs <= bound;
    }
  }
  return {ok, fmt("max |n N_n - q^n| / (4 q^(n/2)) = %.4f", worst)};
}

CorrelationSpec spec_of(std::uint32_t p, unsigned n, Mode mode, std::vector<FunctionSpec> fs, std::vector<Poly> hs,
                        unsigned parts = 1) {
  CorrelationSpec s;
  s.field = FieldSpec(p);
  s.n = n;
  s.domain = mode;
  s.functions = std::move(fs);
  s.shifts = std::move(hs);
  s.partitions = parts;
  return s;
}

Outcome trivial_correlations() {
  bool ok = true;
  double worst = 0.0;
  const auto one = functions::one();
  for (const auto& [p, n] : std::vector<std::pair<std::uint32_t, unsigned>>{{2, 12}, {3, 7}, {5, 5}}) {
    const auto& t = table_for(p);
    const auto m = correlate(spec_of(p, n, Mode::kMonic, {one, one}, {P("0", p), P("1", p)}, workers()), t);
    const auto r = correlate(spec_of(p, n, Mode::kPrime, {one, one}, {P("0", p), P("x", p)}, workers()), t);
    ok = ok && m.exact_sum == static_cast<std::int64_t>(oracle::ipow(p, n));
    ok = ok && r.exact_sum == static_cast<std::int64_t>(oracle::necklace(p, n));
    for (const auto* rep : {&m, &r}) {
      if (!rep->main_term) {
        ok = false;
        continue;
      }
      worst = std::max(worst, std::abs(rep->main_term->total.value - 1.0));
    }
  }
  ok = ok && worst <= 1e-12;
  return {ok, fmt("S2 = q^n and R2 = |P_n| exactly; max |main - 1| = %.2e", worst)};
}

Outcome crt_counting() {
  const FieldSpec f2(2);
  std::mt19937_64 rng(oracle::test_seed());
  std::uniform_int_distribution<unsigned> deg_n(1, 10);
  unsigned mismatches = 0, nonzero = 0;
  for (int i = 0; i < 1000; ++i) {
    const unsigned n = deg_n(rng);
    std::uniform_int_distribution<unsigned> deg_g(1, n + 2);
    const unsigned d1 = deg_g(rng), d2 = deg_g(rng);
    const Poly g1 = monic_at(f2, d1, rng() % f2.pow(d1));
    const Poly g2 = monic_at(f2, d2, rng() % f2.pow(d2));
    const Poly h1 = oracle::from_digits(2, n, rng() % f2.pow(n));
    const Poly h2 = oracle::from_digits(2, n, rng() % f2.pow(n));
    const auto got = crt_count(g1, g2, h1, h2, n, f2);
    mismatches += got != oracle::crt_count(g1, g2, h1, h2, n);
    nonzero += got != 0;
  }
  return {mismatches == 0, fmt("1000 random instances, %u mismatches, %u nonzero counts", mismatches, nonzero)};
}

Outcome closed_form() {
  double worst = 0.0;
  const auto lam = functions::liouville_truncated(6);
  for (std::uint32_t q : {2u, 3u}) {
    for (unsigned d = 1; d <= 6; ++d) {
      for (unsigned k = 0; k <= 3; ++k) {
        const auto w = local_factor(MonicKey{d, 0}, k, lam, lam, Mode::kMonic, q);
        worst = std::max(worst, std::abs(w.value - Complex(liouville_local_closed(d, k, q).to_double())));
      }
    }
  }
  return {worst <= 1e-12, fmt("max |W_P - closed form| = %.2e over d <= 6, k <= 3, q in {2,3}", worst)};
}

// Shared by criteria 6 and 11.
std::vector<std::int64_t> g_chowla_sums;

Outcome chowla_trend() {
  const auto t0 = std::chrono::steady_clock::now();
  const auto lam = functions::liouville_truncated(2);
  double dev[2];
  int i = 0;
  for (unsigned n : {10u, 20u}) {
    const auto r = correlate(spec_of(2, n, Mode::kMonic, {lam, lam}, {P("0"), P("x")}, workers()), table_for(2));
    dev[i++] = r.deviation;
    if (n == 20 && r.exact_sum) g_chowla_sums.push_back(*r.exact_sum);
  }
  return {dev[1] < dev[0] && seconds_since(t0) < 600.0,
          fmt("deviation n=10: %.3e, n=20: %.3e (%.1f s)", dev[0], dev[1], seconds_since(t0))};
}

Outcome phi_ratio_product() {
  const auto& t = table_for(2);
  const auto phi = functions::phi_ratio(FieldSpec(2));
  // Closed form prod over P of (1 - 2/|P|^2), from independent prime counts.
  long double closed = 1.0L;
  for (unsigned d = 1; d <= 80; ++d) {
    closed *= std::pow(1.0L - 2.0L * std::pow(2.0L, -2.0L * d), static_cast<long double>(oracle::necklace(2, d)));
  }
  const auto main = main_term(std::nullopt, std::nullopt, ShiftPair(P("0"), P("1"), t), phi, phi, Mode::kMonic, t);
  const double target = main.total.value.real();
  bool ok = main.total.tail_bound <= 1e-10 && std::fabs(target - static_cast<double>(closed)) <= 1e-10;
  std::vector<double> dev;
  for (unsigned n = 8; n <= 18; n += 2) {
    const auto r = correlate(spec_of(2, n, Mode::kMonic, {phi, phi}, {P("0"), P("1")}, workers()), t);
    dev.push_back(std::abs(r.normalized - Complex(target)));
  }
  int decreasing = 0;
  for (std::size_t i = 1; i < dev.size(); ++i) decreasing += dev[i] < dev[i - 1];
  ok = ok && dev.back() < dev.front() && decreasing >= 4;
  std::ostringstream os;
  os << fmt("product %.12f (tail %.1e); deviations n=8..18:", target, main.total.tail_bound);
  for (double d : dev) os << fmt(" %.2e", d);
  os << fmt("; %d of 5 steps decrease", decreasing);
  return {ok, os.str()};
}

// Brute-force Turan-Kubilius ratio at degree n with h = 0, monic domain.
double tk_oracle(const AdditiveSpec& psi, unsigned n) {
  double center = 0.0, weight = 0.0;
  for (unsigned d = 1; d <= n; ++d) {
    const double nd = static_cast<double>(oracle::necklace(2, d)), x = std::ldexp(1.0, -static_cast<int>(d));
    for (unsigned m = 1; m * d <= n; ++m) {
      const double v = psi.value(MonicKey{d, 0}, m), xm = std::pow(x, m);
      center += nd * v * xm * (1 - x);
      weight += nd * v * v * xm;
    }
  }
  double lhs = 0.0;
  for (const Poly& f : oracle::all_monic(2, n)) lhs += std::pow(oracle::eval(psi, f) - center, 2);
  return lhs / (std::ldexp(1.0, n) * weight);
}

Outcome tk_boundedness() {
  bool ok = true;
  std::ostringstream os;
  for (const auto& psi : {functions::little_omega(), functions::squarefree_part_count()}) {
    const double oracle6 = tk_oracle(psi, 6);
    double first = 0.0, worst = 0.0;
    for (unsigned n = 6; n <= 14; ++n) {
      const double r = tk_ratio(psi, P("0"), n, Mode::kMonic, table_for(2), workers()).ratio;
      if (n == 6) {
        first = r;
        ok = ok && std::fabs(r - oracle6) <= 1e-12 * oracle6;
      }
      worst = std::max(worst, r);
    }
    ok = ok && worst <= 2.0 * first;
    os << fmt("%s: n=6 ratio %.6f (oracle %.6f), max %.6f; ", psi.name().c_str(), first, oracle6, worst);
  }
  std::string s = os.str();
  s.resize(s.size() - 2);
  return {ok, s};
}

Outcome limit_law() {
  const auto& t = table_for(2);
  const auto lp = functions::log_phi_ratio(FieldSpec(2));
  const auto grid = linear_grid(-3.0, 3.0, 0.5);
  const auto lim = limit_charfn(lp, lp, P("0"), P("1"), grid, Mode::kMonic, t);
  double err[2];
  bool ok = true;
  int i = 0;
  for (unsigned n : {8u, 16u}) {
    const auto both = combine_charfn(empirical_charfn(lp, lp, P("0"), P("1"), n, Mode::kMonic, grid, t, workers()), lim);
    err[i++] = both.max_error();
    for (std::size_t j = 0; j < grid.size(); ++j) {
      if (grid[j] == 0.0) ok = ok && both.empirical[j] == Complex(1.0) && both.limit[j].value == Complex(1.0);
    }
  }
  ok = ok && err[1] < err[0];
  return {ok, fmt("max |phi_n - phi| n=8: %.3e, n=16: %.3e; phi(0) = phi_n(0) = 1: %s", err[0], err[1],
                  ok ? "yes" : "no")};
}

Outcome brun_titchmarsh() {
  const auto r = brun_titchmarsh_check(10, table_for(2));
  return {r.violations == 0 && r.checked > 0,
          fmt("%llu (n, M, B) triples, %llu violations, max ratio %.4f", (unsigned long long)r.checked,
              (unsigned long long)r.violations, r.max_ratio)};
}

Outcome determinism() {
  const auto lam = functions::liouville_truncated(2);
  std::vector<std::int64_t> sums = g_chowla_sums;
  for (unsigned parts : {1u, 4u, 16u}) {
    const auto r = correlate(spec_of(2, 20, Mode::kMonic, {lam, lam}, {P("0"), P("x")}, parts), table_for(2));
    if (r.exact_sum) sums.push_back(*r.exact_sum);
  }
  const bool ok = sums.size() == 4 && std::all_of(sums.begin(), sums.end(), [&](auto s) { return s == sums[0]; });
  std::ostringstream os;
  os << "raw sums at n=20 (criterion run, 1, 4, 16 partitions):";
  for (auto s : sums) os << ' ' << s;
  return {ok, os.str()};
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria{
      {"sieve exactness", sieve_exactness},
      {"RH-shape prime counts", rh_shape},
      {"trivial correlations", trivial_correlations},
      {"CRT counting", crt_counting},
      {"Liouville local factor closed form", closed_form},
      {"truncated Chowla trend", chowla_trend},
      {"phi-ratio product limit", phi_ratio_product},
      {"Turan-Kubilius boundedness", tk_boundedness},
      {"limit law via characteristic functions", limit_law},
      {"Brun-Titchmarsh exhaustive", brun_titchmarsh},
      {"determinism across partitions", determinism},
  };
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    failures += !o.pass;
    std::printf("%s %2zu %s: %s\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first, o.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%zu criteria, %d failed\n", criteria.size(), failures);
  return failures == 0 ? 0 : 1;
}
