#include "ffcorr/irreducible.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstring>
#include <fstream>

#include "ffcorr/error.hpp"
#include "kernels.hpp"

namespace ffcorr {

unsigned Factorization::big_omega() const noexcept {
  unsigned s = 0;
  for (const auto& pp : factors) s += pp.multiplicity;
  return s;
}

unsigned Factorization::valuation(const MonicKey& prime) const noexcept {
  for (const auto& pp : factors) {
    if (pp.prime == prime) return pp.multiplicity;
  }
  return 0;
}

unsigned Factorization::degree() const noexcept {
  unsigned d = 0;
  for (const auto& pp : factors) d += pp.prime.degree * pp.multiplicity;
  return d;
}

Poly expand(const FieldSpec& field, const Factorization& fact) {
  Poly out = Poly::constant(field.p(), 1);
  for (const auto& pp : fact.factors) {
    const Poly prime = from_key(field, pp.prime);
    for (unsigned i = 0; i < pp.multiplicity; ++i) out = out * prime;
  }
  return out;
}

namespace {

int moebius_small(unsigned n) {
  int mu = 1;
  for (unsigned d = 2; d * d <= n; ++d) {
    if (n % d == 0) {
      n /= d;
      if (n % d == 0) return 0;
      mu = -mu;
    }
  }
  if (n > 1) mu = -mu;
  return mu;
}

}  // namespace

std::uint64_t necklace_count(std::uint32_t q, unsigned d) {
  if (d == 0) return 1;
  const FieldSpec field(q);
  __int128 sum = 0;
  for (unsigned e = 1; e <= d; ++e) {
    if (d % e != 0) continue;
    const int mu = moebius_small(d / e);
    if (mu != 0) sum += static_cast<__int128>(mu) * static_cast<__int128>(field.pow(e));
  }
  return static_cast<std::uint64_t>(sum / d);
}

long double necklace_count_real(std::uint32_t q, unsigned d) {
  if (d == 0) return 1.0L;
  long double sum = 0.0L;
  for (unsigned e = 1; e <= d; ++e) {
    if (d % e != 0) continue;
    const int mu = moebius_small(d / e);
    if (mu != 0) sum += mu * std::pow(static_cast<long double>(q), static_cast<long double>(e));
  }
  return sum / d;
}

IrreducibleTable::IrreducibleTable(FieldSpec field, unsigned max_deg,
                                   std::vector<std::vector<std::uint64_t>> primes)
    : field_(field), max_deg_(max_deg), primes_(std::move(primes)) {}

IrreducibleTable IrreducibleTable::build(const FieldSpec& field, unsigned max_deg, std::uint64_t budget_bytes) {
  if (max_deg < 1) throw ValidationError("max_deg must be at least 1");
  if (max_deg >= detail::kMaxDigits || max_deg > field.max_exponent()) {
    throw BudgetError("degree bound " + std::to_string(max_deg) + " is beyond the representable range");
  }
  const std::uint64_t size = field.pow(max_deg);
  if (size > budget_bytes) {
    throw BudgetError("sieving degree " + std::to_string(max_deg) + " over F_" + std::to_string(field.p()) +
                      " needs " + std::to_string(size) + " bytes, budget is " + std::to_string(budget_bytes));
  }
  const std::uint32_t p = field.p();
  std::vector<std::vector<std::uint64_t>> primes(max_deg + 1);
  std::vector<std::uint8_t> composite;
  for (unsigned d = 1; d <= max_deg; ++d) {
    const std::uint64_t total = field.pow(d);
    composite.assign(total, 0);
    for (unsigned e = 1; 2 * e <= d; ++e) {
      const std::uint64_t cofactors = field.pow(d - e);
      for (const std::uint64_t pi : primes[e]) {
        if (p == 2) {
          const std::uint64_t pp = (std::uint64_t{1} << e) | pi;
          const std::uint64_t top = std::uint64_t{1} << (d - e);
          for (std::uint64_t b = 0; b < cofactors; ++b) {
            const std::uint64_t prod = detail::gf2_mul(pp, top | b);
            composite[prod & (total - 1)] = 1;
          }
        } else {
          const detail::Digits pd = detail::digits_of_monic(p, e, pi);
          for (std::uint64_t b = 0; b < cofactors; ++b) {
            const detail::Digits prod = detail::digits_mul(p, pd, detail::digits_of_monic(p, d - e, b));
            composite[detail::index_of_digits(p, prod)] = 1;
          }
        }
      }
    }
    auto& out = primes[d];
    for (std::uint64_t i = 0; i < total; ++i) {
      if (!composite[i]) out.push_back(i);
    }
  }
  return IrreducibleTable(field, max_deg, std::move(primes));
}

std::uint64_t IrreducibleTable::count(unsigned d) const {
  if (d < 1 || d > max_deg_) {
    throw ValidationError("degree " + std::to_string(d) + " not covered by table (max_deg " +
                          std::to_string(max_deg_) + ")");
  }
  return primes_[d].size();
}

std::span<const std::uint64_t> IrreducibleTable::primes(unsigned d) const {
  if (d < 1 || d > max_deg_) {
    throw ValidationError("degree " + std::to_string(d) + " not covered by table (max_deg " +
                          std::to_string(max_deg_) + ")");
  }
  return primes_[d];
}

bool IrreducibleTable::is_irreducible(const MonicKey& key) const {
  const auto list = primes(key.degree);
  return std::binary_search(list.begin(), list.end(), key.index);
}

NecklaceReport IrreducibleTable::necklace_check(unsigned n) const {
  if (n < 1 || n > max_deg_) throw ValidationError("necklace check degree out of table range");
  NecklaceReport r;
  r.n = n;
  for (unsigned d = 1; d <= n; ++d) {
    if (n % d == 0) r.weighted_sum += d * primes_[d].size();
  }
  r.q_power = field_.pow(n);
  return r;
}

namespace {

constexpr char kMagic[4] = {'F', 'F', 'Q', 'I'};
constexpr std::uint32_t kCacheVersion = 1;

void put_u32(std::ostream& os, std::uint32_t v) {
  std::array<char, 4> b;
  for (int i = 0; i < 4; ++i) b[i] = static_cast<char>((v >> (8 * i)) & 0xff);
  os.write(b.data(), 4);
}

void put_u64(std::ostream& os, std::uint64_t v) {
  std::array<char, 8> b;
  for (int i = 0; i < 8; ++i) b[i] = static_cast<char>((v >> (8 * i)) & 0xff);
  os.write(b.data(), 8);
}

template <typename T>
T get_le(std::istream& is) {
  std::array<unsigned char, sizeof(T)> b;
  if (!is.read(reinterpret_cast<char*>(b.data()), sizeof(T))) throw ValidationError("truncated table cache");
  T v = 0;
  for (std::size_t i = 0; i < sizeof(T); ++i) v |= static_cast<T>(b[i]) << (8 * i);
  return v;
}

}  // namespace

void IrreducibleTable::save(const std::filesystem::path& path) const {
  std::ofstream os(path, std::ios::binary | std::ios::trunc);
  if (!os) throw ValidationError("cannot open " + path.string() + " for writing");
  os.write(kMagic, 4);
  put_u32(os, kCacheVersion);
  put_u32(os, field_.p());
  put_u32(os, max_deg_);
  std::vector<char> rec;
  for (unsigned d = 1; d <= max_deg_; ++d) {
    put_u64(os, primes_[d].size());
    rec.resize(d);
    for (std::uint64_t idx : primes_[d]) {
      for (unsigned i = 0; i < d; ++i) {
        rec[i] = static_cast<char>(idx % field_.p());
        idx /= field_.p();
      }
      os.write(rec.data(), d);
    }
  }
  if (!os) throw ValidationError("failed writing " + path.string());
}

IrreducibleTable IrreducibleTable::load(const std::filesystem::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw ValidationError("cannot open table cache " + path.string());
  char magic[4];
  if (!is.read(magic, 4) || std::memcmp(magic, kMagic, 4) != 0) throw ValidationError("bad table cache magic");
  if (get_le<std::uint32_t>(is) != kCacheVersion) throw ValidationError("unsupported table cache version");
  const FieldSpec field(get_le<std::uint32_t>(is));
  const auto max_deg = get_le<std::uint32_t>(is);
  if (max_deg < 1 || max_deg >= detail::kMaxDigits || max_deg > field.max_exponent()) {
    throw ValidationError("table cache degree bound out of range");
  }
  std::vector<std::vector<std::uint64_t>> primes(max_deg + 1);
  std::vector<unsigned char> rec;
  for (unsigned d = 1; d <= max_deg; ++d) {
    const auto n = get_le<std::uint64_t>(is);
    if (n > field.pow(d)) throw ValidationError("table cache count exceeds q^d");
    primes[d].reserve(n);
    rec.resize(d);
    for (std::uint64_t k = 0; k < n; ++k) {
      if (!is.read(reinterpret_cast<char*>(rec.data()), d)) throw ValidationError("truncated table cache");
      std::uint64_t idx = 0;
      for (unsigned i = d; i-- > 0;) {
        if (rec[i] >= field.p()) throw ValidationError("table cache coefficient out of range");
        idx = idx * field.p() + rec[i];
      }
      if (!primes[d].empty() && primes[d].back() >= idx) throw ValidationError("table cache records not sorted");
      primes[d].push_back(idx);
    }
  }
  IrreducibleTable table(field, max_deg, std::move(primes));
  for (unsigned n = 1; n <= max_deg; ++n) {
    if (!table.necklace_check(n).ok()) {
      throw ValidationError("table cache fails the necklace identity at degree " + std::to_string(n));
    }
  }
  return table;
}

Factorizer::Factorizer(const IrreducibleTable& table) : table_(&table) {
  if (table.field().p() == 2) {
    degree_start_.assign(table.max_deg() + 2, 0);
    for (unsigned d = 1; d <= table.max_deg(); ++d) {
      degree_start_[d] = static_cast<unsigned>(packed2_.size());
      for (std::uint64_t idx : table.primes(d)) packed2_.push_back((std::uint64_t{1} << d) | idx);
    }
    degree_start_[table.max_deg() + 1] = static_cast<unsigned>(packed2_.size());
  }
}

void Factorizer::factor(const MonicKey& key, std::vector<PrimePower>& out) const {
  out.clear();
  const std::uint32_t p = table_->field().p();
  if (key.degree / 2 > table_->max_deg()) {
    throw ValidationError("table max_deg " + std::to_string(table_->max_deg()) + " too small to factor degree " +
                          std::to_string(key.degree));
  }
  if (p == 2) {
    std::uint64_t rem = (std::uint64_t{1} << key.degree) | key.index;
    int rem_deg = static_cast<int>(key.degree);
    for (unsigned d = 1; 2 * static_cast<int>(d) <= rem_deg; ++d) {
      for (unsigned i = degree_start_[d]; i < degree_start_[d + 1]; ++i) {
        const std::uint64_t prime = packed2_[i];
        unsigned mult = 0;
        std::uint64_t quot;
        while (detail::gf2_divides(rem, prime, quot)) {
          rem = quot;
          ++mult;
        }
        if (mult) {
          out.push_back({MonicKey{d, prime ^ (std::uint64_t{1} << d)}, mult});
          rem_deg = detail::gf2_degree(rem);
          if (2 * static_cast<int>(d) > rem_deg) break;
        }
      }
    }
    if (rem_deg >= 1) {
      const auto rd = static_cast<unsigned>(rem_deg);
      out.push_back({MonicKey{rd, rem ^ (std::uint64_t{1} << rd)}, 1});
    }
    return;
  }
  detail::Digits rem = detail::digits_of_monic(p, key.degree, key.index);
  for (unsigned d = 1; 2 * static_cast<int>(d) <= rem.degree; ++d) {
    for (const std::uint64_t idx : table_->primes(d)) {
      const detail::Digits prime = detail::digits_of_monic(p, d, idx);
      unsigned mult = 0;
      while (detail::digits_divide_monic(p, rem, prime)) ++mult;
      if (mult) {
        out.push_back({MonicKey{d, idx}, mult});
        if (2 * static_cast<int>(d) > rem.degree) break;
      }
    }
  }
  if (rem.degree >= 1) {
    out.push_back({MonicKey{static_cast<unsigned>(rem.degree), detail::index_of_digits(p, rem)}, 1});
  }
}

Factorization factorize(const Poly& f, const IrreducibleTable& table) {
  if (f.modulus() != table.field().p()) throw ValidationError("polynomial and table use different fields");
  if (!f.is_monic()) throw ValidationError("factorize requires a monic nonzero polynomial");
  Factorization out;
  Factorizer(table).factor(monic_key(f), out.factors);
  return out;
}

std::vector<std::uint64_t> residue_histogram(unsigned n, const Poly& m, const IrreducibleTable& table) {
  const FieldSpec& field = table.field();
  if (m.modulus() != field.p()) throw ValidationError("modulus over a different field");
  if (!m.is_monic() || *m.degree() < 1) throw ValidationError("modulus must be monic of positive degree");
  const unsigned dm = *m.degree();
  const std::uint64_t classes = field.pow(dm);
  std::vector<std::uint64_t> hist(classes, 0);
  const std::uint32_t p = field.p();
  if (p == 2) {
    const std::uint64_t mb = (std::uint64_t{1} << dm) | monic_key(m).index;
    for (const std::uint64_t idx : table.primes(n)) {
      ++hist[detail::gf2_mod((std::uint64_t{1} << n) | idx, mb)];
    }
    return hist;
  }
  const Poly mm = m;
  for (const std::uint64_t idx : table.primes(n)) {
    const Poly r = monic_at(field, n, idx) % mm;
    std::uint64_t ri = 0;
    const auto c = r.coeffs();
    for (std::size_t i = c.size(); i-- > 0;) ri = ri * p + c[i];
    ++hist[ri];
  }
  return hist;
}

std::uint64_t prime_count_ap(unsigned n, const Poly& m, const Poly& b, const IrreducibleTable& table) {
  if (!m.is_monic() || *m.degree() < 1) throw ValidationError("modulus must be monic of positive degree");
  if (b.modulus() != m.modulus()) throw ValidationError("residue over a different field");
  if (b.is_zero() || *gcd(b, m).degree() != 0) throw ValidationError("residue must be coprime to the modulus");
  const Poly r = b % m;
  std::uint64_t ri = 0;
  const auto c = r.coeffs();
  for (std::size_t i = c.size(); i-- > 0;) ri = ri * m.modulus() + c[i];
  return residue_histogram(n, m, table)[ri];
}

}  // namespace ffcorr
