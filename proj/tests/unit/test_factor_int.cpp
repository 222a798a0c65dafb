#include <cmath>
#include <complex>
#include <random>

#include "../support/poly_gen.hpp"
#include "doctest.h"
#include "domroots/errors.hpp"
#include "domroots/exact_roots.hpp"
#include "domroots/factor_int.hpp"
#include "domroots/poly_core.hpp"

using namespace domroots;
using testgen::for_each_monic;
using testgen::random_monic;

namespace {

IntPoly P(const char* s) { return parse_poly(s); }

// Reducibility decided from numerical roots: some sub-multiset of d <= n/2
// roots must expand to an integer polynomial that divides f exactly.
bool numerically_reducible(const IntPoly& f) {
  int n = f.degree();
  if (n <= 1) return false;
  std::vector<std::complex<long double>> z;
  for (auto& e : approx_roots(f, mpq_class(1, 1000000000))) {
    for (int m = 0; m < e.multiplicity; ++m) z.emplace_back(e.re.get_d(), e.im.get_d());
  }
  for (int d = 1; d <= n / 2; ++d) {
    std::vector<int> idx(d);
    for (int i = 0; i < d; ++i) idx[i] = i;
    while (true) {
      std::vector<std::complex<long double>> c = {1};
      for (int i : idx) {
        c.push_back(0);
        for (std::size_t j = c.size() - 1; j > 0; --j) c[j] = c[j - 1] - z[i] * c[j];
        c[0] = -z[i] * c[0];
      }
      bool integral = true;
      std::vector<mpz_class> g;
      for (auto& x : c) {
        long double r = std::round(x.real());
        if (std::abs(x.imag()) > 1e-5L || std::abs(x.real() - r) > 1e-5L) {
          integral = false;
          break;
        }
        g.emplace_back(static_cast<long>(r));
      }
      IntPoly q;
      if (integral && try_exact_divide(f, IntPoly(g), q)) return true;
      int i = d - 1;
      while (i >= 0 && idx[i] == n - d + i) --i;
      if (i < 0) break;
      ++idx[i];
      for (int j = i + 1; j < d; ++j) idx[j] = idx[j - 1] + 1;
    }
  }
  return false;
}

}  // namespace

TEST_CASE("perfect powers") {
  auto w = is_perfect_power(64);
  REQUIRE(w);
  CHECK(w->base == 2);
  CHECK(w->exponent == 6u);
  CHECK_FALSE(is_perfect_power(12));
  w = is_perfect_power(1);
  REQUIRE(w);
  CHECK(w->base == 1);
  CHECK(w->exponent == 2u);
  CHECK_THROWS_AS(is_perfect_power(0), DomainError);

  // brute force: largest e with round(a^(1/e))^e == a
  for (long a = 2; a <= 20000; ++a) {
    long best_b = 0, best_e = 0;
    for (long e = 2; (1L << e) <= a; ++e) {
      long b = std::lround(std::pow(double(a), 1.0 / double(e)));
      for (long c = std::max(2L, b - 1); c <= b + 1; ++c) {
        long v = 1;
        for (long i = 0; i < e && v <= a; ++i) v *= c;
        if (v == a) best_b = c, best_e = e;
      }
    }
    auto r = is_perfect_power(a);
    if (best_e == 0) {
      CHECK_FALSE(r);
    } else {
      REQUIRE(r);
      CHECK(r->base == best_b);
      CHECK(r->exponent == static_cast<unsigned long>(best_e));
    }
  }
}

TEST_CASE("divisors") {
  for (long m = 1; m <= 3000; ++m) {
    std::vector<mpz_class> brute;
    for (long d = 1; d <= m; ++d)
      if (m % d == 0) brute.emplace_back(d);
    CHECK(positive_divisors(m) == brute);
    CHECK(positive_divisors(-m) == brute);
  }
  // semiprime beyond trial division
  mpz_class p("1000000007"), q("998244353");
  auto d = positive_divisors(p * q);
  REQUIRE(d.size() == 4);
  CHECK(d[1] == q);
  CHECK(d[2] == p);
}

TEST_CASE("irreducibility examples") {
  CHECK(is_irreducible(P("x^6 - x^4 - 2x^3 + x^2 + x + 1")));
  CHECK_FALSE(is_irreducible(P("x^4 + 4")));
  CHECK(is_irreducible(P("x^3 + 5")));
  CHECK_FALSE(is_irreducible(P("x^3 + 8")));
  CHECK(is_irreducible(P("x - 7")));
  CHECK_FALSE(is_irreducible(P("x^2")));
  CHECK_FALSE(is_irreducible(P("x^4 + x^2 + 1")));
  CHECK(is_irreducible(P("x^4 - 10x^2 + 1")));  // reducible mod every prime
  CHECK_FALSE(is_irreducible(P("x^2 - 2x + 1")));
  CHECK_THROWS_AS(is_irreducible(P("2x^2 + 1")), ContractError);
  CHECK_THROWS_AS(is_irreducible(P("3")), ContractError);

  CHECK(irreducibility_verdict(P("x^4 - 10x^2 + 1")).method == IrreducibilityMethod::ExhaustiveSearch);
  CHECK(irreducibility_verdict(P("x^3 + 8")).method == IrreducibilityMethod::RationalRoot);
}

TEST_CASE("factor_monic examples") {
  auto fx = factor_monic(P("x^4 - 1"));
  REQUIRE(fx.factors.size() == 3);
  CHECK(fx.factors[0].poly == P("x - 1"));
  CHECK(fx.factors[1].poly == P("x + 1"));
  CHECK(fx.factors[2].poly == P("x^2 + 1"));
  CHECK(fx.to_string() == "(x - 1)(x + 1)(x^2 + 1)");

  fx = factor_monic(P("x - 1").pow(2) * P("x^2 + x + 1"));
  REQUIRE(fx.factors.size() == 2);
  CHECK(fx.factors[0].poly == P("x - 1"));
  CHECK(fx.factors[0].multiplicity == 2);
  CHECK(fx.factors[1].poly == P("x^2 + x + 1"));
  CHECK(fx.factors[1].multiplicity == 1);

  fx = factor_monic(P("x^4 + x^2 + 1"));
  REQUIRE(fx.factors.size() == 2);
  CHECK(fx.factors[0].poly == P("x^2 - x + 1"));
  CHECK(fx.factors[1].poly == P("x^2 + x + 1"));

  fx = factor_monic(P("x^4 + 4"));
  CHECK(fx.to_string() == "(x^2 - 2x + 2)(x^2 + 2x + 2)");
  CHECK(fx.to_json() ==
        "{\"factors\": [{\"poly\": [2, -2, 1], \"multiplicity\": 1}, {\"poly\": [2, 2, 1], \"multiplicity\": 1}]}");

  fx = factor_monic(P("x^3") * P("x^2 - 3").pow(2) * P("x^3 - x - 1"));
  CHECK(fx.to_string() == "(x)^3(x^2 - 3)^2(x^3 - x - 1)");
  CHECK(fx.degrees() == std::vector<int>{1, 1, 1, 2, 2, 3});
}

TEST_CASE("capelli criterion") {
  CHECK(capelli_power_irreducible(P("x + 2"), 3));
  CHECK(is_irreducible(P("x^3 + 2")));
  CHECK_FALSE(capelli_power_irreducible(P("x - 4"), 2));
  CHECK_FALSE(is_irreducible(P("x^2 - 4")));
  CHECK_FALSE(capelli_power_irreducible(P("x + 1"), 3));
  CHECK(factor_monic(P("x^3 + 1")).to_string() == "(x + 1)(x^2 - x + 1)");
  CHECK_THROWS_AS(capelli_power_irreducible(P("x^2 - 1"), 2), ContractError);
  CHECK_THROWS_AS(capelli_power_irreducible(P("2x + 1"), 2), ContractError);
}

TEST_CASE("ferguson structure") {
  auto s = ferguson_structure_check(P("x^3 + 2"));
  REQUIRE(s);
  CHECK(s->g == P("x + 2"));
  CHECK(s->k == 3);
  CHECK_FALSE(ferguson_structure_check(P("x^6 - x^4 - 2x^3 + x^2 + x + 1")));
  // Eisenstein at 3, six roots of modulus 3^(1/6), none real
  REQUIRE(is_irreducible(P("x^6 + x^3 + 3")));
  CHECK(dominant_root_count(P("x^6 + x^3 + 3")) == 6);
  CHECK(real_root_count(P("x^6 + x^3 + 3")) == 0);
  CHECK_FALSE(ferguson_structure_check(P("x^6 + x^3 + 3")));
  // even k with a real dominant pair of roots
  s = ferguson_structure_check(P("x^4 - 2"));
  REQUIRE(s);
  CHECK(s->g == P("x - 2"));
  CHECK(s->k == 4);
  s = ferguson_structure_check(P("x^2 - 3x + 1"));
  REQUIRE(s);
  CHECK(s->k == 1);
  CHECK_THROWS_AS(ferguson_structure_check(P("x^2 - 1")), ContractError);
}

TEST_CASE("irreducibility agrees with a numerical root-subset oracle") {
  std::mt19937_64 rng(11);
  int reducible = 0;
  for (int t = 0; t < 4000; ++t) {
    IntPoly f;
    if (t % 2 == 0) {
      f = random_monic(rng, 2 + t % 5, 8);
    } else {
      // products reach the reducible side much more often
      int d1 = 1 + static_cast<int>(rng() % 3), d2 = 1 + static_cast<int>(rng() % 3);
      f = random_monic(rng, d1, 4) * random_monic(rng, d2, 4);
    }
    bool numeric = numerically_reducible(f);
    reducible += numeric;
    CAPTURE(f.to_string());
    CHECK(is_irreducible(f) == !numeric);
  }
  CHECK(reducible > 1000);
}

TEST_CASE("factor-product round trip and height window, deg <= 6 height <= 8") {
  std::mt19937_64 rng(12);
  std::uniform_int_distribution<int> dd(1, 6);
  for (int t = 0; t < 100000; ++t) {
    IntPoly f = random_monic(rng, dd(rng), 8);
    Factorization fx = factor_monic(f);
    REQUIRE(fx.product() == f);
    for (auto& fac : fx.factors) {
      CHECK(fac.poly.is_monic());
      CHECK(fac.multiplicity >= 1);
    }
    for (std::size_t i = 1; i < fx.factors.size(); ++i)
      CHECK(canonical_less(fx.factors[i - 1].poly, fx.factors[i].poly));
    // H(f1) H(f2) <= 2^n sqrt(n+1) H(f) for every split f = f1 f2, squared
    int n = f.degree();
    mpz_class hf = height(f);
    mpz_class rhs = (mpz_class(1) << (2 * n)) * (n + 1) * hf * hf;
    std::vector<IntPoly> flat;
    for (auto& fac : fx.factors)
      for (int m = 0; m < fac.multiplicity; ++m) flat.push_back(fac.poly);
    for (std::size_t mask = 1; mask + 1 < (std::size_t(1) << flat.size()); ++mask) {
      IntPoly f1 = IntPoly::constant(1), f2 = IntPoly::constant(1);
      for (std::size_t i = 0; i < flat.size(); ++i) {
        IntPoly& side = ((mask >> i) & 1) ? f1 : f2;
        side = side * flat[i];
      }
      mpz_class lhs = height(f1) * height(f2);
      CHECK(lhs * lhs <= rhs);
    }
  }
  // factors are irreducible: spot check against the oracle on a subsample
  for (int t = 0; t < 500; ++t) {
    IntPoly f = random_monic(rng, dd(rng), 8);
    for (auto& fac : factor_monic(f).factors) CHECK_FALSE(numerically_reducible(fac.poly));
  }
}

TEST_CASE("sieve soundness audit") {
  std::mt19937_64 rng(13);
  std::uniform_int_distribution<int> dd(4, 7);
  int audited = 0;
  for (int t = 0; t < 60000 && audited < 300; ++t) {
    IntPoly f = random_monic(rng, dd(rng), 10);
    auto v = irreducibility_verdict(f);
    if (v.method != IrreducibilityMethod::ModularSieve) continue;
    if (rng() % 100 != 0 && t > 0) continue;
    ++audited;
    for (int d = 1; d <= f.degree() / 2; ++d) CHECK_FALSE(find_factor_exhaustive(f, d));
  }
  CHECK(audited >= 100);
  // the exhaustive search does find factors when they exist
  CHECK(find_factor_exhaustive(P("x^4 + 4"), 2) == P("x^2 - 2x + 2"));
  CHECK(find_factor_exhaustive(P("x^5 - x^4 - x + 1"), 2));  // f(1) = 0 path
  CHECK(find_factor_exhaustive(P("x^3 - x^2"), 1) == P("x"));
}

TEST_CASE("sieve candidates") {
  CHECK(sieve_candidate_degrees(P("x^4 - 10x^2 + 1")) == std::vector<int>{2});
  CHECK(sieve_candidate_degrees(P("x^5 - x - 1")).empty());
  CHECK(sieve_candidate_degrees(P("x^4 + 1")) == std::vector<int>{2});
}

TEST_CASE("capelli consistency, deg g <= 2 height <= 10, k <= 4") {
  int applied = 0;
  for (int n = 1; n <= 2; ++n) {
    for_each_monic(n, 10, [&](const IntPoly& g) {
      if (!is_irreducible(g)) return;
      for (int k = 1; k <= 4; ++k) {
        if (!capelli_power_irreducible(g, k)) continue;
        ++applied;
        auto fx = factor_monic(compose_power(g, k));
        CHECK(fx.factors.size() == 1);
        CHECK(fx.factors[0].multiplicity == 1);
      }
    });
  }
  CHECK(applied > 300);
}

TEST_CASE("odd dominant count forces the power structure") {
  auto check = [](const IntPoly& f, int& hits) {
    if (f.trailing() == 0 || !is_irreducible(f)) return;
    int k = dominant_root_count(f);
    if (k < 3 || k % 2 == 0) return;
    ++hits;
    CHECK(f.degree() % k == 0);
    auto s = ferguson_structure_check(f);
    REQUIRE(s);
    CHECK(compose_power(s->g, s->k) == f);
  };
  int hits = 0;
  for (int n = 1; n <= 3; ++n) for_each_monic(n, 10, [&](const IntPoly& f) { check(f, hits); });
  CHECK(hits > 0);
  std::mt19937_64 rng(14);
  for (int t = 0; t < 2000; ++t) {
    // bias toward the rare structured case
    IntPoly g = random_monic(rng, t % 2 ? 2 : 1, 10);
    check(compose_power(g, 3), hits);
    check(random_monic(rng, 5 + t % 2, 10), hits);
  }
  CHECK(hits > 500);
}
