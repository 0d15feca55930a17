#pragma once

// Exact correlation sums of multiplicative functions over all monic
// polynomials (or all irreducibles) of a fixed degree, by exhaustive
// partitioned enumeration, compared against the predicted main term.

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "ffcorr/arith.hpp"
#include "ffcorr/irreducible.hpp"
#include "ffcorr/main_term.hpp"
#include "ffcorr/poly.hpp"
#include "ffcorr/report_table.hpp"

namespace ffcorr {

struct CorrelationSpec {
  FieldSpec field{2};
  unsigned n = 1;
  Mode domain = Mode::kMonic;
  std::vector<Poly> shifts;
  std::vector<FunctionSpec> functions;
  std::optional<unsigned> gamma;
  MainTermOptions main_options;
  bool want_main_term = true;  // rejected for k > 2; ignored for k = 1
  unsigned partitions = 1;
};

struct CorrelationReport {
  std::uint32_t q = 2;
  unsigned n = 0;
  Mode domain = Mode::kMonic;
  std::vector<std::string> functions;
  std::vector<std::string> shifts;
  Complex raw_sum;
  std::optional<std::int64_t> exact_sum;  // set when every spec is integer-valued
  std::uint64_t domain_size = 0;          // q^n or |P_n|
  Complex normalized;
  std::optional<MainTerm> main_term;
  double deviation = 0.0;  // |normalized - main_term|, NaN without a main term
  double seconds = 0.0;
  unsigned partitions = 1;
};

/// Sum over f in the domain of prod_i psi_i(f + h_i). Requires
/// table.max_deg() >= ceil(n / 2) (and >= n for the prime domain).
CorrelationReport correlate(const CorrelationSpec& spec, const IrreducibleTable& table);

/// |{f monic of degree n : g_j | f + h_j, j = 1, 2}|, from the CRT solution.
std::uint64_t crt_count(const Poly& g1, const Poly& g2, const Poly& h1, const Poly& h2, unsigned n,
                        const FieldSpec& field);

struct ScanRow {
  CorrelationReport report;
  double error_shape = 0.0;  // error-bound shape at r = gamma, alpha = 3/4, c = 1
};

/// One correlation per n in [n_lo, n_hi] (step `step`) with the template's
/// functions and shifts.
std::vector<ScanRow> deviation_scan(const CorrelationSpec& templ, unsigned n_lo, unsigned n_hi, unsigned step,
                                    const IrreducibleTable& table);

std::string domain_name(Mode mode);

/// Report columns: q, n, domain, functions, h-list, raw_re, raw_im,
/// normalized_re, normalized_im, main_re, main_im, tail_bound, deviation,
/// seconds.
std::vector<std::string> report_columns();
/// One report row. Timing is written as 0 when `with_timing` is false so
/// that repeated runs produce identical bytes.
std::vector<Cell> report_cells(const CorrelationReport& r, bool with_timing = true);

}  // namespace ffcorr
