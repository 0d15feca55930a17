#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>

#include "ffcorr/error.hpp"
#include "ffcorr/irreducible.hpp"
#include "oracles.hpp"

using namespace ffcorr;

namespace {

Poly P(std::string_view s, std::uint32_t p = 2) { return parse_poly(s, FieldSpec(p)); }

std::vector<std::pair<Poly, unsigned>> as_pairs(const FieldSpec& f, const Factorization& fact) {
  std::vector<std::pair<Poly, unsigned>> out;
  for (const auto& pp : fact.factors) out.emplace_back(from_key(f, pp.prime), pp.multiplicity);
  return out;
}

std::filesystem::path temp_file(const std::string& name) {
  return std::filesystem::temp_directory_path() / ("ffcorr_unit_" + name);
}

}  // namespace

TEST_SUITE("irreducible") {

TEST_CASE("counts of irreducibles match brute force") {
  const auto t2 = IrreducibleTable::build(FieldSpec(2), 10);
  CHECK(t2.count(1) == 2);
  CHECK(t2.count(2) == 1);
  CHECK(t2.count(3) == 2);
  CHECK(t2.count(4) == 3);
  for (unsigned d = 1; d <= 10; ++d) CHECK(t2.count(d) == oracle::count_irreducible(2, d));
  const auto t3 = IrreducibleTable::build(FieldSpec(3), 6);
  CHECK(t3.count(1) == 3);
  CHECK(t3.count(2) == 3);
  for (unsigned d = 1; d <= 6; ++d) CHECK(t3.count(d) == oracle::count_irreducible(3, d));
  const auto t5 = IrreducibleTable::build(FieldSpec(5), 4);
  for (unsigned d = 1; d <= 4; ++d) CHECK(t5.count(d) == oracle::count_irreducible(5, d));
}

TEST_CASE("table lists exactly the irreducibles") {
  const auto t = IrreducibleTable::build(FieldSpec(3), 5);
  for (unsigned d = 1; d <= 5; ++d) {
    std::vector<std::uint64_t> expected;
    for (std::uint64_t i = 0; i < oracle::ipow(3, d); ++i) {
      if (oracle::is_irreducible(oracle::monic(3, d, i))) expected.push_back(i);
      CHECK(t.is_irreducible(MonicKey{d, i}) == oracle::is_irreducible(oracle::monic(3, d, i)));
    }
    const auto got = t.primes(d);
    CHECK(std::vector<std::uint64_t>(got.begin(), got.end()) == expected);
  }
}

TEST_CASE("necklace identity") {
  const auto t = IrreducibleTable::build(FieldSpec(2), 4);
  CHECK(t.necklace_check(4).weighted_sum == 16);
  CHECK(t.necklace_check(1).weighted_sum == 2);
  const auto t3 = IrreducibleTable::build(FieldSpec(3), 2);
  CHECK(t3.necklace_check(2).weighted_sum == 9);
  for (std::uint32_t p : {2u, 3u, 5u, 7u, 251u}) {
    const auto tp = IrreducibleTable::build(FieldSpec(p), 2);
    CHECK(tp.necklace_check(2).weighted_sum == std::uint64_t{p} * p);
  }
  for (std::uint32_t q : {2u, 3u, 5u}) {
    for (unsigned d = 1; d <= 30; ++d) {
      if (std::pow(double(q), double(d)) > 1e17) break;
      CHECK(necklace_count(q, d) == oracle::necklace(q, d));
    }
  }
}

TEST_CASE("RH-shape bound on the tabulated range") {
  for (std::uint32_t p : {2u, 3u}) {
    const auto t = IrreducibleTable::build(FieldSpec(p), p == 2 ? 16 : 10);
    for (unsigned n = 1; n <= t.max_deg(); ++n) {
      const double dev = std::abs(double(n) * double(t.count(n)) - double(FieldSpec(p).pow(n)));
      CHECK(dev <= 4.0 * std::pow(double(p), n / 2.0));
    }
  }
}

TEST_CASE("factorization examples") {
  const auto t = IrreducibleTable::build(FieldSpec(2), 4);
  const auto f1 = as_pairs(FieldSpec(2), factorize(P("x^4+x^2"), t));
  REQUIRE(f1.size() == 2);
  CHECK(f1[0] == std::pair{P("x"), 2u});
  CHECK(f1[1] == std::pair{P("x+1"), 2u});
  const auto f2 = as_pairs(FieldSpec(2), factorize(P("x^3+x+1"), t));
  REQUIRE(f2.size() == 1);
  CHECK(f2[0] == std::pair{P("x^3+x+1"), 1u});
  for (std::uint32_t p : {3u, 5u}) {
    const auto tp = IrreducibleTable::build(FieldSpec(p), 2);
    const auto fx = factorize(P("x", p), tp);
    REQUIRE(fx.factors.size() == 1);
    CHECK(fx.factors[0].multiplicity == 1);
  }
  CHECK_THROWS_AS(factorize(P("2x+1", 3), IrreducibleTable::build(FieldSpec(3), 2)), ValidationError);
  CHECK_THROWS_AS(factorize(P("x^12+x+1"), t), ValidationError);
}

TEST_CASE("factorizer matches brute-force factorization exhaustively") {
  for (std::uint32_t p : {2u, 3u}) {
    const unsigned max_n = p == 2 ? 9 : 5;
    const auto t = IrreducibleTable::build(FieldSpec(p), max_n / 2 + 1);
    for (unsigned n = 1; n <= max_n; ++n) {
      bool ok = true;
      for (std::uint64_t i = 0; i < oracle::ipow(p, n); ++i) {
        const Poly f = oracle::monic(p, n, i);
        ok = ok && as_pairs(FieldSpec(p), factorize(f, t)) == oracle::factor(f);
      }
      CHECK_MESSAGE(ok, "p=", p, " n=", n);
    }
  }
}

TEST_CASE("property: factorize then expand is the identity") {
  std::mt19937_64 rng(oracle::test_seed() + 3);
  for (std::uint32_t p : {2u, 3u}) {
    const FieldSpec f(p);
    const unsigned max_n = p == 2 ? 16 : 10;
    const auto t = IrreducibleTable::build(f, max_n / 2);
    std::uniform_int_distribution<unsigned> deg(1, max_n);
    for (int i = 0; i < 5000; ++i) {
      const unsigned n = deg(rng);
      std::uniform_int_distribution<std::uint64_t> idx(0, f.pow(n) - 1);
      const Poly g = monic_at(f, n, idx(rng));
      const Factorization fact = factorize(g, t);
      REQUIRE(expand(f, fact) == g);
      REQUIRE(fact.degree() == n);
      for (const auto& pp : fact.factors) {
        if (pp.prime.degree <= t.max_deg()) {
          REQUIRE(t.is_irreducible(pp.prime));
        } else {
          REQUIRE(oracle::is_irreducible(from_key(f, pp.prime)));
        }
      }
    }
  }
}

TEST_CASE("primes in residue classes") {
  const auto t = IrreducibleTable::build(FieldSpec(2), 8);
  CHECK(prime_count_ap(2, P("x"), P("1"), t) == 1);
  CHECK(prime_count_ap(3, P("x^2+x+1"), P("x"), t) == 1);
  CHECK_THROWS_AS(prime_count_ap(3, P("x^2"), P("x"), t), ValidationError);
  CHECK_THROWS_AS(prime_count_ap(3, P("1"), P("x"), t), ValidationError);

  // Partition: coprime classes carry every degree-n prime except those
  // dividing M.
  for (unsigned n = 2; n <= 8; ++n) {
    for (unsigned e = 1; e <= 3; ++e) {
      for (std::uint64_t mi = 0; mi < oracle::ipow(2, e); ++mi) {
        const Poly m = oracle::monic(2, e, mi);
        const auto hist = residue_histogram(n, m, t);
        std::uint64_t coprime = 0, dividing = 0;
        for (std::uint64_t b = 0; b < hist.size(); ++b) {
          const Poly B = oracle::from_digits(2, e, b);
          if (!B.is_zero() && *gcd(B, m).degree() == 0) coprime += hist[b];
        }
        for (const std::uint64_t idx : t.primes(n)) dividing += (m % monic_at(FieldSpec(2), n, idx)).is_zero();
        CHECK(coprime == t.count(n) - dividing);
        // Histogram against direct reduction.
        std::vector<std::uint64_t> direct(hist.size(), 0);
        for (const Poly& f : oracle::all_monic(2, n)) {
          if (!oracle::is_irreducible(f)) continue;
          const Poly r = f % m;
          std::uint64_t ri = 0;
          for (std::size_t i = r.coeffs().size(); i-- > 0;) ri = ri * 2 + r.coeffs()[i];
          ++direct[ri];
        }
        CHECK(direct == hist);
      }
    }
  }
}

TEST_CASE("cache round trip and corruption") {
  const auto t = IrreducibleTable::build(FieldSpec(3), 6);
  const auto path = temp_file("p3.bin");
  t.save(path);
  const auto back = IrreducibleTable::load(path);
  CHECK(back.max_deg() == 6);
  for (unsigned d = 1; d <= 6; ++d) {
    const auto a = t.primes(d), b = back.primes(d);
    CHECK(std::equal(a.begin(), a.end(), b.begin(), b.end()));
  }
  // Corrupt N_1 (first count after the 16-byte header).
  {
    std::fstream io(path, std::ios::in | std::ios::out | std::ios::binary);
    io.seekg(16);
    char c = 0;
    io.read(&c, 1);
    io.seekp(16);
    c = static_cast<char>(c ^ 0x01);
    io.write(&c, 1);
  }
  CHECK_THROWS(IrreducibleTable::load(path));
  {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    out << "NOPE";
  }
  CHECK_THROWS(IrreducibleTable::load(path));
  std::filesystem::remove(path);
}

TEST_CASE("budget") {
  CHECK_THROWS_AS(IrreducibleTable::build(FieldSpec(2), 20, 1024), BudgetError);
}

}  // TEST_SUITE
