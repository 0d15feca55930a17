#include "ffcorr/arith.hpp"

#include <cmath>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>

#include "ffcorr/error.hpp"

namespace ffcorr {

FunctionSpec::FunctionSpec(FunctionKind kind, std::string name, Rule rule, SpecFlags flags)
    : kind_(kind), name_(std::move(name)), rule_(std::move(rule)), flags_(flags) {}

FunctionSpec FunctionSpec::conjugate() const {
  auto inner = rule_;
  return FunctionSpec(kind_, "conj(" + name_ + ")",
                      [inner](const MonicKey& p, unsigned m) { return std::conj(inner(p, m)); }, flags_);
}

AdditiveSpec::AdditiveSpec(std::string name, Rule rule, bool degree_symmetric)
    : name_(std::move(name)), rule_(std::move(rule)), degree_symmetric_(degree_symmetric) {}

namespace functions {

namespace {
constexpr SpecFlags kIntegerSymmetric{true, true, true};
}

FunctionSpec one() {
  return FunctionSpec(FunctionKind::kOne, "one", [](const MonicKey&, unsigned) { return Complex(1.0); },
                      kIntegerSymmetric);
}

FunctionSpec moebius() {
  // Non-squarefree arguments map to 0.
  return FunctionSpec(FunctionKind::kMoebius, "moebius",
                      [](const MonicKey&, unsigned m) { return Complex(m == 1 ? -1.0 : 0.0); }, kIntegerSymmetric);
}

FunctionSpec kfree(unsigned k) {
  if (k < 2) throw ValidationError("kfree requires k >= 2");
  return FunctionSpec(FunctionKind::kKFree, "kfree:" + std::to_string(k),
                      [k](const MonicKey&, unsigned m) { return Complex(m < k ? 1.0 : 0.0); }, kIntegerSymmetric);
}

FunctionSpec liouville() {
  return FunctionSpec(FunctionKind::kLiouville, "liouville",
                      [](const MonicKey&, unsigned m) { return Complex(m % 2 ? -1.0 : 1.0); }, kIntegerSymmetric);
}

FunctionSpec liouville_truncated(unsigned y) {
  if (y < 1) throw ValidationError("liouville_trunc requires y >= 1");
  return FunctionSpec(
      FunctionKind::kLiouvilleTruncated, "liouville_trunc:" + std::to_string(y),
      [y](const MonicKey& p, unsigned m) { return Complex(p.degree <= y && m % 2 ? -1.0 : 1.0); },
      kIntegerSymmetric);
}

FunctionSpec phi_ratio(const FieldSpec& field) {
  const double q = field.p();
  return FunctionSpec(
      FunctionKind::kPhiRatio, "phi_ratio",
      [q](const MonicKey& p, unsigned) { return Complex(1.0 - std::pow(q, -static_cast<double>(p.degree))); },
      SpecFlags{true, true, false});
}

AdditiveSpec zero_additive() {
  return AdditiveSpec("zero", [](const MonicKey&, unsigned) { return 0.0; }, true);
}

AdditiveSpec little_omega() {
  return AdditiveSpec("omega", [](const MonicKey&, unsigned) { return 1.0; }, true);
}

AdditiveSpec big_omega() {
  return AdditiveSpec("bigomega", [](const MonicKey&, unsigned m) { return static_cast<double>(m); }, true);
}

AdditiveSpec log_phi_ratio(const FieldSpec& field) {
  const double q = field.p();
  return AdditiveSpec(
      "log_phi_ratio",
      [q](const MonicKey& p, unsigned) { return std::log1p(-std::pow(q, -static_cast<double>(p.degree))); }, true);
}

AdditiveSpec squarefree_part_count() {
  return AdditiveSpec("squarefree_count", [](const MonicKey&, unsigned m) { return m == 1 ? 1.0 : 0.0; }, true);
}

}  // namespace functions

namespace {

struct CustomTable {
  std::map<std::pair<unsigned, unsigned>, Complex> exact;
  std::map<unsigned, Complex> by_degree;
  std::map<unsigned, Complex> by_power;
  Complex fallback;

  Complex lookup(unsigned d, unsigned m) const {
    if (auto it = exact.find({d, m}); it != exact.end()) return it->second;
    if (auto it = by_degree.find(d); it != by_degree.end()) return it->second;
    if (auto it = by_power.find(m); it != by_power.end()) return it->second;
    return fallback;
  }
};

std::string strip(std::string_view s) {
  std::string out;
  for (char c : s) {
    if (!std::isspace(static_cast<unsigned char>(c))) out += c;
  }
  return out;
}

Complex parse_value(const std::string& v, const std::string& where) {
  try {
    const auto comma = v.find(',');
    std::size_t used = 0;
    if (comma == std::string::npos) {
      const double re = std::stod(v, &used);
      if (used != v.size()) throw std::invalid_argument(v);
      return {re, 0.0};
    }
    const std::string a = v.substr(0, comma), b = v.substr(comma + 1);
    const double re = std::stod(a, &used);
    if (used != a.size()) throw std::invalid_argument(v);
    const double im = std::stod(b, &used);
    if (used != b.size()) throw std::invalid_argument(v);
    return {re, im};
  } catch (const std::exception&) {
    throw ValidationError("bad value '" + v + "' in " + where);
  }
}

CustomTable read_custom(const std::filesystem::path& path, Complex default_value) {
  std::ifstream is(path);
  if (!is) throw ValidationError("cannot open custom spec file " + path.string());
  CustomTable t;
  t.fallback = default_value;
  std::string line;
  unsigned lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    const std::string where = path.string() + ":" + std::to_string(lineno);
    if (auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
    const std::string s = strip(line);
    if (s.empty()) continue;
    const auto eq = s.find('=');
    if (eq == std::string::npos) throw ValidationError("expected key=value at " + where);
    const std::string key = s.substr(0, eq);
    const Complex value = parse_value(s.substr(eq + 1), where);
    if (key == "default") {
      t.fallback = value;
      continue;
    }
    if (key.size() < 5 || key.front() != '(' || key.back() != ')') throw ValidationError("bad key at " + where);
    const std::string inner = key.substr(1, key.size() - 2);
    const auto comma = inner.find(',');
    if (comma == std::string::npos) throw ValidationError("bad key at " + where);
    const std::string ds = inner.substr(0, comma), ms = inner.substr(comma + 1);
    auto to_uint = [&](const std::string& x) -> unsigned {
      std::size_t used = 0;
      unsigned long v = 0;
      try {
        v = std::stoul(x, &used);
      } catch (const std::exception&) {
        throw ValidationError("bad key at " + where);
      }
      if (used != x.size() || v == 0) throw ValidationError("bad key at " + where);
      return static_cast<unsigned>(v);
    };
    if (ds == "*" && ms == "*") throw ValidationError("use 'default' instead of (*,*) at " + where);
    if (ds == "*") {
      t.by_power[to_uint(ms)] = value;
    } else if (ms == "*") {
      t.by_degree[to_uint(ds)] = value;
    } else {
      t.exact[{to_uint(ds), to_uint(ms)}] = value;
    }
  }
  return t;
}

bool all_values(const CustomTable& t, auto pred) {
  if (!pred(t.fallback)) return false;
  for (const auto& [k, v] : t.exact) {
    if (!pred(v)) return false;
  }
  for (const auto& [k, v] : t.by_degree) {
    if (!pred(v)) return false;
  }
  for (const auto& [k, v] : t.by_power) {
    if (!pred(v)) return false;
  }
  return true;
}

}  // namespace

FunctionSpec load_custom_spec(const std::filesystem::path& path) {
  auto table = std::make_shared<const CustomTable>(read_custom(path, Complex(1.0)));
  SpecFlags flags;
  flags.degree_symmetric = true;
  flags.unit_bounded = all_values(*table, [](Complex v) { return std::abs(v) <= 1.0 + 1e-15; });
  flags.integer_valued = all_values(*table, [](Complex v) { return v.imag() == 0.0 && v.real() == std::round(v.real()); });
  return FunctionSpec(FunctionKind::kCustom, "custom:" + path.string(),
                      [table](const MonicKey& p, unsigned m) { return table->lookup(p.degree, m); }, flags);
}

AdditiveSpec load_custom_additive(const std::filesystem::path& path) {
  auto table = std::make_shared<const CustomTable>(read_custom(path, Complex(0.0)));
  if (!all_values(*table, [](Complex v) { return v.imag() == 0.0; })) {
    throw ValidationError("additive spec values must be real: " + path.string());
  }
  return AdditiveSpec("custom:" + path.string(),
                      [table](const MonicKey& p, unsigned m) { return table->lookup(p.degree, m).real(); }, true);
}

namespace {

unsigned parse_param(std::string_view text, std::string_view prefix) {
  const std::string rest(text.substr(prefix.size()));
  std::size_t used = 0;
  unsigned long v = 0;
  try {
    v = std::stoul(rest, &used);
  } catch (const std::exception&) {
    throw ValidationError("bad parameter in '" + std::string(text) + "'");
  }
  if (used != rest.size()) throw ValidationError("bad parameter in '" + std::string(text) + "'");
  return static_cast<unsigned>(v);
}

}  // namespace

FunctionSpec parse_function_spec(std::string_view text, const FieldSpec& field) {
  if (text == "one") return functions::one();
  if (text == "moebius") return functions::moebius();
  if (text == "liouville") return functions::liouville();
  if (text == "phi_ratio") return functions::phi_ratio(field);
  if (text.starts_with("kfree:")) return functions::kfree(parse_param(text, "kfree:"));
  if (text.starts_with("liouville_trunc:")) return functions::liouville_truncated(parse_param(text, "liouville_trunc:"));
  if (text.starts_with("custom:")) return load_custom_spec(std::string(text.substr(7)));
  throw ValidationError("unknown function spec '" + std::string(text) + "'");
}

AdditiveSpec parse_additive_spec(std::string_view text, const FieldSpec& field) {
  if (text == "zero") return functions::zero_additive();
  if (text == "omega") return functions::little_omega();
  if (text == "bigomega") return functions::big_omega();
  if (text == "log_phi_ratio") return functions::log_phi_ratio(field);
  if (text == "squarefree_count") return functions::squarefree_part_count();
  if (text.starts_with("custom:")) return load_custom_additive(std::string(text.substr(7)));
  throw ValidationError("unknown additive spec '" + std::string(text) + "'");
}

FunctionSpec exp_additive(const AdditiveSpec& additive, double t) {
  std::ostringstream name;
  name << "exp(i*" << t << "*" << additive.name() << ")";
  AdditiveSpec inner = additive;
  SpecFlags flags{additive.degree_symmetric(), true, t == 0.0};
  return FunctionSpec(FunctionKind::kExpAdditive, name.str(),
                      [inner, t](const MonicKey& p, unsigned m) {
                        const double theta = t * inner.value(p, m);
                        return Complex(std::cos(theta), std::sin(theta));
                      },
                      flags);
}

Complex eval_on(const Factorization& fact, const FunctionSpec& spec) {
  Complex v(1.0);
  for (const auto& pp : fact.factors) v *= spec.value(pp.prime, pp.multiplicity);
  return v;
}

std::int64_t eval_exact(const Factorization& fact, const FunctionSpec& spec) {
  if (!spec.integer_valued()) throw ValidationError("eval_exact on a non-integer spec " + spec.name());
  std::int64_t v = 1;
  for (const auto& pp : fact.factors) {
    v *= std::llround(spec.value(pp.prime, pp.multiplicity).real());
    if (v == 0) break;
  }
  return v;
}

double eval_on(const Factorization& fact, const AdditiveSpec& spec) {
  double v = 0.0;
  for (const auto& pp : fact.factors) v += spec.value(pp.prime, pp.multiplicity);
  return v;
}

std::uint64_t phi(const Factorization& fact, std::uint32_t q) {
  const FieldSpec field(q);
  std::uint64_t v = 1;
  for (const auto& pp : fact.factors) {
    const std::uint64_t base = field.pow(pp.prime.degree);
    std::uint64_t power = base - 1;
    for (unsigned i = 1; i < pp.multiplicity; ++i) power *= base;
    v *= power;
  }
  return v;
}

std::uint64_t phi(const Poly& f, const IrreducibleTable& table) {
  return phi(factorize(f, table), table.field().p());
}

std::uint64_t prime_count(unsigned d, const IrreducibleTable& table) {
  if (d >= 1 && d <= table.max_deg()) return table.count(d);
  return necklace_count(table.field().p(), d);
}

double distance(const FunctionSpec& psi1, const FunctionSpec& psi2, unsigned m, unsigned n,
                const IrreducibleTable& table) {
  if (m < 1) m = 1;
  if (m > n) throw ValidationError("distance requires m <= n");
  if (!psi1.unit_bounded() || !psi2.unit_bounded()) throw ValidationError("distance requires unit-bounded specs");
  const bool symmetric = psi1.degree_symmetric() && psi2.degree_symmetric();
  if (!symmetric && n > table.max_deg()) throw ValidationError("distance window exceeds the table");
  const double q = table.field().p();
  double sum = 0.0;
  for (unsigned d = m; d <= n; ++d) {
    const double weight = std::pow(q, -static_cast<double>(d));
    if (symmetric) {
      const double term = 1.0 - (psi1.value_at_degree(d, 1) * std::conj(psi2.value_at_degree(d, 1))).real();
      sum += term * static_cast<double>(prime_count(d, table)) * weight;
    } else {
      for (const std::uint64_t idx : table.primes(d)) {
        const MonicKey key{d, idx};
        sum += (1.0 - (psi1.value(key, 1) * std::conj(psi2.value(key, 1))).real()) * weight;
      }
    }
  }
  return std::sqrt(std::max(sum, 0.0));
}

std::vector<Complex> closeness_partial_sums(const FunctionSpec& psi, unsigned max_n, const IrreducibleTable& table) {
  if (!psi.degree_symmetric() && max_n > table.max_deg()) {
    throw ValidationError("closeness sums exceed the table");
  }
  const double q = table.field().p();
  std::vector<Complex> out;
  Complex running(0.0);
  for (unsigned d = 1; d <= max_n; ++d) {
    const double weight = std::pow(q, -static_cast<double>(d));
    if (psi.degree_symmetric()) {
      running += (psi.value_at_degree(d, 1) - 1.0) * static_cast<double>(prime_count(d, table)) * weight;
    } else {
      for (const std::uint64_t idx : table.primes(d)) running += (psi.value(MonicKey{d, idx}, 1) - 1.0) * weight;
    }
    out.push_back(running);
  }
  return out;
}

double mertens_sum(unsigned n, const IrreducibleTable& table) {
  if (n > table.max_deg()) throw ValidationError("mertens_sum degree exceeds the table");
  const double q = table.field().p();
  double sum = 0.0;
  for (unsigned d = 1; d <= n; ++d) sum += static_cast<double>(table.count(d)) * std::pow(q, -static_cast<double>(d));
  return sum;
}

bool spot_check_degree_symmetry(const FunctionSpec& spec, const IrreducibleTable& table) {
  if (!spec.degree_symmetric()) return true;
  for (unsigned d = 1; d <= table.max_deg(); ++d) {
    const auto list = table.primes(d);
    if (list.size() < 2) continue;
    const MonicKey a{d, list.front()}, b{d, list.back()};
    for (unsigned m = 1; m <= 3; ++m) {
      if (std::abs(spec.value(a, m) - spec.value(b, m)) > 1e-12) return false;
    }
  }
  return true;
}

}  // namespace ffcorr
