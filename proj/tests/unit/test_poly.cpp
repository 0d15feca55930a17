#include <doctest.h>

#include <random>
#include <set>

#include "ffcorr/error.hpp"
#include "ffcorr/poly.hpp"
#include "oracles.hpp"

using namespace ffcorr;

namespace {

Poly P(std::string_view s, std::uint32_t p = 2) { return parse_poly(s, FieldSpec(p)); }

Poly random_poly(std::mt19937_64& rng, std::uint32_t p, unsigned max_deg, bool allow_zero = true) {
  std::uniform_int_distribution<unsigned> deg(0, max_deg);
  std::uniform_int_distribution<unsigned> coef(0, p - 1);
  while (true) {
    std::vector<std::uint8_t> c(deg(rng) + 1);
    for (auto& v : c) v = static_cast<std::uint8_t>(coef(rng));
    Poly f(p, c);
    if (allow_zero || !f.is_zero()) return f;
  }
}

}  // namespace

TEST_SUITE("poly") {

TEST_CASE("field validation") {
  CHECK_THROWS_AS(FieldSpec(4), ValidationError);
  CHECK_THROWS_AS(FieldSpec(1), ValidationError);
  CHECK_THROWS_AS(FieldSpec(257), ValidationError);
  const FieldSpec f(251);
  for (unsigned a = 1; a < 251; ++a) CHECK((a * f.inv(static_cast<std::uint8_t>(a))) % 251 == 1);
  CHECK(FieldSpec(2).pow(62) == (std::uint64_t{1} << 62));
  CHECK_THROWS_AS((void)FieldSpec(2).pow(64), BudgetError);
}

TEST_CASE("parse and format") {
  const Poly f = P("x^2+x+1");
  REQUIRE(f.coeffs().size() == 3);
  CHECK(f.coeff(0) == 1);
  CHECK(f.coeff(1) == 1);
  CHECK(f.coeff(2) == 1);
  CHECK(P("0", 3).is_zero());
  CHECK_THROWS_AS(P("2x+1"), ValidationError);
  CHECK_THROWS_WITH_AS(P("2x+1"), doctest::Contains("out of range"), ValidationError);
  CHECK_THROWS_AS(P("x+x^2"), ValidationError);
  CHECK_THROWS_AS(P("1x"), ValidationError);
  CHECK_THROWS_AS(P("x^1"), ValidationError);
  CHECK_THROWS_AS(P("x+"), ValidationError);
  CHECK_THROWS_AS(P(""), ValidationError);
  CHECK(format_poly(P("2x^3+x+4", 5)) == "2x^3+x+4");

  std::mt19937_64 rng(oracle::test_seed());
  for (int i = 0; i < 500; ++i) {
    const Poly g = random_poly(rng, 7, 12);
    CHECK(parse_poly(format_poly(g), FieldSpec(7)) == g);
  }
}

TEST_CASE("ring operations") {
  CHECK(P("x+1") * P("x+1") == P("x^2+1"));
  const DivMod dm = divmod(P("x^3"), P("x+1"));
  CHECK(dm.quotient == P("x^2+x+1"));
  CHECK(dm.remainder == P("1"));
  CHECK(P("x^2+x") + P("x^2+1") == P("x+1"));
  CHECK_THROWS_AS(divmod(P("x"), P("0")), ValidationError);
  CHECK(make_monic(P("2x+1", 3)) == P("x+2", 3));
}

TEST_CASE("gcd and lcm") {
  CHECK(gcd(P("x^2+x"), P("x^2+1")) == P("x+1"));
  CHECK(gcd(P("2x^2+2", 3), P("0", 3)) == P("x^2+1", 3));
  CHECK(gcd_lcm(P("x"), P("x+1")).lcm == P("x^2+x"));
  CHECK(gcd_lcm(P("x"), P("0")).lcm.is_zero());
  CHECK_THROWS_AS(gcd(P("0"), P("0")), ValidationError);
}

TEST_CASE("enumeration order") {
  const FieldSpec f2(2);
  const auto quad = enumerate_monic(f2, 2);
  REQUIRE(quad.size() == 4);
  CHECK(quad[0] == P("x^2"));
  CHECK(quad[1] == P("x^2+1"));
  CHECK(quad[2] == P("x^2+x"));
  CHECK(quad[3] == P("x^2+x+1"));
  CHECK(enumerate_monic(FieldSpec(3), 1).size() == 3);
  const auto part = enumerate_monic(f2, 3, 4, 6);
  REQUIRE(part.size() == 2);
  CHECK(part[0] == P("x^3+x^2"));
  CHECK(part[1] == P("x^3+x^2+1"));
}

TEST_CASE("norm") {
  CHECK(norm(P("x^2+1")) == 4);
  CHECK(norm(P("0")) == 0);
  CHECK(norm(P("5", 7)) == 1);
}

TEST_CASE("property: enumeration is a bijection onto monics") {
  std::mt19937_64 rng(oracle::test_seed());
  for (std::uint32_t p : {2u, 3u, 5u}) {
    const FieldSpec f(p);
    const unsigned max_n = p == 2 ? 12 : (p == 3 ? 7 : 5);
    for (unsigned n = 1; n <= max_n; ++n) {
      const auto all = enumerate_monic(f, n);
      std::set<std::vector<std::uint8_t>> seen;
      bool ok = all.size() == f.pow(n);
      for (std::uint64_t i = 0; i < all.size(); ++i) {
        ok = ok && all[i].is_monic() && *all[i].degree() == n && all[i] == oracle::monic(p, n, i);
        ok = ok && monic_key(all[i]) == MonicKey{n, i} && from_key(f, MonicKey{n, i}) == all[i];
        seen.insert({all[i].coeffs().begin(), all[i].coeffs().end()});
      }
      CHECK(ok);
      CHECK(seen.size() == f.pow(n));
    }
  }
}

TEST_CASE("property: division identity") {
  std::mt19937_64 rng(oracle::test_seed() + 1);
  for (std::uint32_t p : {2u, 3u, 251u}) {
    for (int i = 0; i < 10000 / 3; ++i) {
      const Poly a = random_poly(rng, p, 20);
      const Poly b = random_poly(rng, p, 10, false);
      const DivMod dm = divmod(a, b);
      REQUIRE(dm.quotient * b + dm.remainder == a);
      REQUIRE((dm.remainder.is_zero() || *dm.remainder.degree() < *b.degree()));
    }
  }
}

TEST_CASE("property: gcd, lcm, extended gcd, norm") {
  std::mt19937_64 rng(oracle::test_seed() + 2);
  for (std::uint32_t p : {2u, 3u, 7u}) {
    for (int i = 0; i < 1000; ++i) {
      const Poly a = random_poly(rng, p, 9, false);
      const Poly b = random_poly(rng, p, 9, false);
      const GcdLcm gl = gcd_lcm(a, b);
      REQUIRE(gl.gcd.is_monic());
      REQUIRE((a % gl.gcd).is_zero());
      REQUIRE((b % gl.gcd).is_zero());
      REQUIRE((gl.lcm % a).is_zero());
      REQUIRE((gl.lcm % b).is_zero());
      REQUIRE(gl.gcd * gl.lcm == make_monic(a * b));
      const ExtendedGcd eg = extended_gcd(a, b);
      REQUIRE(eg.gcd == gl.gcd);
      REQUIRE(eg.s * a + eg.t * b == eg.gcd);
      REQUIRE(norm(a * b) == norm(a) * norm(b));
    }
  }
}

}  // TEST_SUITE
