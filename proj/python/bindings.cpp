// Python bindings: polynomials cross the boundary as strings, tables as an
// opaque handle.

#include <pybind11/complex.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "ffcorr/config.hpp"
#include "ffcorr/correlation.hpp"
#include "ffcorr/error.hpp"
#include "ffcorr/stats.hpp"

namespace py = pybind11;
using namespace ffcorr;

namespace {

Mode parse_mode(const std::string& domain) {
  if (domain == "monic") return Mode::kMonic;
  if (domain == "prime") return Mode::kPrime;
  throw ValidationError("domain must be monic or prime");
}

std::vector<Poly> parse_shifts(const std::vector<std::string>& shifts, const FieldSpec& field) {
  std::vector<Poly> out;
  for (const auto& s : shifts) out.push_back(parse_poly(s, field));
  return out;
}

py::dict main_term_dict(const MainTerm& m) {
  py::dict d;
  d["gamma"] = m.gamma;
  d["value"] = m.total.value;
  d["tail_bound"] = m.total.tail_bound;
  d["p1"] = m.p1.value;
  d["p2"] = m.p2.value;
  return d;
}

}  // namespace

PYBIND11_MODULE(_ffcorr, m) {
  m.doc() = "Exact correlation sums of multiplicative functions over F_q[x]";

  py::register_exception<ValidationError>(m, "ValidationError", PyExc_ValueError);
  py::register_exception<BudgetError>(m, "BudgetError", PyExc_MemoryError);

  m.def("format_poly", [](const std::string& text, std::uint32_t p) { return format_poly(parse_poly(text, FieldSpec(p))); },
        py::arg("text"), py::arg("p"), "Parses a polynomial over F_p and returns its canonical form.");
  m.def("necklace_count", &necklace_count, py::arg("q"), py::arg("d"),
        "Number of monic irreducibles of degree d over F_q.");

  py::class_<IrreducibleTable>(m, "IrreducibleTable")
      .def_static(
          "build", [](std::uint32_t p, unsigned max_deg) { return IrreducibleTable::build(FieldSpec(p), max_deg); },
          py::arg("p"), py::arg("max_deg"), py::call_guard<py::gil_scoped_release>())
      .def_static("load", [](const std::string& path) { return IrreducibleTable::load(path); }, py::arg("path"))
      .def("save", [](const IrreducibleTable& t, const std::string& path) { t.save(path); }, py::arg("path"))
      .def_property_readonly("p", [](const IrreducibleTable& t) { return t.field().p(); })
      .def_property_readonly("max_deg", &IrreducibleTable::max_deg)
      .def("count", &IrreducibleTable::count, py::arg("d"))
      .def("necklace_ok", [](const IrreducibleTable& t, unsigned n) { return t.necklace_check(n).ok(); }, py::arg("n"))
      .def(
          "primes",
          [](const IrreducibleTable& t, unsigned d) {
            std::vector<std::string> out;
            for (const std::uint64_t idx : t.primes(d)) out.push_back(format_poly(monic_at(t.field(), d, idx)));
            return out;
          },
          py::arg("d"));

  m.def(
      "factorize",
      [](const std::string& text, const IrreducibleTable& t) {
        const Factorization f = factorize(parse_poly(text, t.field()), t);
        std::vector<std::pair<std::string, unsigned>> out;
        for (const auto& pp : f.factors) out.emplace_back(format_poly(from_key(t.field(), pp.prime)), pp.multiplicity);
        return out;
      },
      py::arg("poly"), py::arg("table"), "Prime factorization as (prime, multiplicity) pairs.");

  m.def(
      "correlate",
      [](const IrreducibleTable& t, unsigned n, const std::vector<std::string>& functions,
         const std::vector<std::string>& shifts, const std::string& domain, unsigned partitions, bool main_term) {
        CorrelationSpec s;
        s.field = t.field();
        s.n = n;
        s.domain = parse_mode(domain);
        for (const auto& f : functions) s.functions.push_back(parse_function_spec(f, t.field()));
        s.shifts = parse_shifts(shifts, t.field());
        s.partitions = partitions;
        s.want_main_term = main_term;
        CorrelationReport r;
        {
          py::gil_scoped_release release;
          r = correlate(s, t);
        }
        py::dict d;
        d["n"] = r.n;
        d["raw_sum"] = r.raw_sum;
        d["exact_sum"] = r.exact_sum;
        d["domain_size"] = r.domain_size;
        d["normalized"] = r.normalized;
        d["deviation"] = r.deviation;
        d["main_term"] = r.main_term ? py::object(main_term_dict(*r.main_term)) : py::none();
        return d;
      },
      py::arg("table"), py::arg("n"), py::arg("functions"), py::arg("shifts"), py::arg("domain") = "monic",
      py::arg("partitions") = 1, py::arg("main_term") = true,
      "Sum over the degree-n domain of prod_i psi_i(f + h_i).");

  m.def(
      "main_term",
      [](const IrreducibleTable& t, const std::vector<std::string>& functions, const std::vector<std::string>& shifts,
         std::optional<unsigned> n, std::optional<unsigned> gamma, const std::string& domain) {
        if (functions.size() != 2 || shifts.size() != 2) throw ValidationError("main terms need two functions and two shifts");
        const auto hs = parse_shifts(shifts, t.field());
        const ShiftPair pair(hs[0], hs[1], t);
        return main_term_dict(main_term(n, gamma, pair, parse_function_spec(functions[0], t.field()),
                                        parse_function_spec(functions[1], t.field()), parse_mode(domain), t));
      },
      py::arg("table"), py::arg("functions"), py::arg("shifts"), py::arg("n") = py::none(),
      py::arg("gamma") = py::none(), py::arg("domain") = "monic", "Predicted normalized limit with its tail bound.");

  m.def(
      "crt_count",
      [](const std::string& g1, const std::string& g2, const std::string& h1, const std::string& h2, unsigned n,
         std::uint32_t p) {
        const FieldSpec f(p);
        return crt_count(parse_poly(g1, f), parse_poly(g2, f), parse_poly(h1, f), parse_poly(h2, f), n, f);
      },
      py::arg("g1"), py::arg("g2"), py::arg("h1"), py::arg("h2"), py::arg("n"), py::arg("p"));

  m.def(
      "tk_ratio",
      [](const std::string& psi, const std::string& h, unsigned n, const std::string& domain,
         const IrreducibleTable& t) {
        const TkReport r = tk_ratio(parse_additive_spec(psi, t.field()), parse_poly(h, t.field()), n, parse_mode(domain), t);
        return py::make_tuple(r.lhs, r.rhs, r.ratio);
      },
      py::arg("psi"), py::arg("h"), py::arg("n"), py::arg("domain"), py::arg("table"), "Returns (lhs, rhs, ratio).");

  m.def(
      "brun_titchmarsh_violations",
      [](unsigned max_n, const IrreducibleTable& t) { return brun_titchmarsh_check(max_n, t).violations; },
      py::arg("max_n"), py::arg("table"));

  m.def(
      "run",
      [](const std::string& command, const std::string& config_text) {
        std::ostringstream out, err;
        const int code = dispatch(command, parse_config(config_text), out, err);
        return py::make_tuple(code, out.str(), err.str());
      },
      py::arg("command"), py::arg("config"),
      "Runs a tool command from key=value config text; returns (exit_code, stdout, stderr).");
}
