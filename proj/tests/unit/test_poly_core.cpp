#include <random>

#include "doctest.h"
#include "domroots/errors.hpp"
#include "domroots/poly_core.hpp"

using namespace domroots;

namespace {

// Sylvester-matrix determinant by rational Gaussian elimination.
mpz_class sylvester_resultant(const IntPoly& f, const IntPoly& g) {
  const int m = f.degree(), n = g.degree();
  const int N = m + n;
  if (N == 0) return 1;
  std::vector<std::vector<mpq_class>> a(N, std::vector<mpq_class>(N));
  for (int r = 0; r < n; ++r)
    for (int i = 0; i <= m; ++i) a[r][r + i] = f[static_cast<std::size_t>(m - i)];
  for (int r = 0; r < m; ++r)
    for (int i = 0; i <= n; ++i) a[n + r][r + i] = g[static_cast<std::size_t>(n - i)];
  mpq_class det = 1;
  for (int c = 0; c < N; ++c) {
    int p = c;
    while (p < N && a[p][c] == 0) ++p;
    if (p == N) return 0;
    if (p != c) {
      std::swap(a[p], a[c]);
      det = -det;
    }
    det *= a[c][c];
    for (int r = c + 1; r < N; ++r) {
      if (a[r][c] == 0) continue;
      mpq_class t = a[r][c] / a[c][c];
      for (int j = c; j < N; ++j) a[r][j] -= t * a[c][j];
    }
  }
  return det.get_num();
}

IntPoly random_poly(std::mt19937_64& rng, int max_deg, long h, bool monic) {
  std::uniform_int_distribution<int> dd(1, max_deg);
  std::uniform_int_distribution<long> cd(-h, h);
  int d = dd(rng);
  std::vector<mpz_class> c(static_cast<std::size_t>(d) + 1);
  for (auto& x : c) x = cd(rng);
  if (monic) c.back() = 1;
  while (c.back() == 0) c.back() = cd(rng);
  return IntPoly(std::move(c));
}

}  // namespace

TEST_CASE("text and json forms round trip") {
  IntPoly f = parse_poly("x^6 - x^4 - 2x^3 + x^2 + x + 1");
  CHECK(f.to_string() == "x^6 - x^4 - 2x^3 + x^2 + x + 1");
  CHECK(parse_poly(f.to_string()) == f);
  CHECK(parse_poly_json(f.to_json()) == f);
  CHECK(f.to_json() == "[1, 1, 1, -2, -1, 0, 1]");
  CHECK(parse_poly("2*x^2 + 3 x - x^2") == IntPoly({0, 3, 1}));
  CHECK(parse_poly("-3") == IntPoly({-3}));
  CHECK(parse_poly("x") == IntPoly({0, 1}));
  IntPoly big(std::vector<mpz_class>{mpz_class("123456789012345678901234567890"), 1});
  CHECK(parse_poly_json(big.to_json()) == big);
  CHECK(parse_poly(big.to_string()) == big);
  CHECK_THROWS_AS(parse_poly("x^"), ParseError);
  CHECK_THROWS_AS(parse_poly("x + + 1"), ParseError);
  CHECK_THROWS_AS(parse_poly_json("{}"), ParseError);
  CHECK_THROWS_AS(parse_poly_json("[1.5]"), ParseError);
}

TEST_CASE("height") {
  CHECK(height(parse_poly("x^3 + 2")) == 2);
  CHECK(height(parse_poly("x^6 - x^4 - 2x^3 + x^2 + x + 1")) == 2);
  CHECK(height(parse_poly("x^7")) == 1);
  CHECK_THROWS_AS(height(IntPoly()), DomainError);
}

TEST_CASE("mahler bounds") {
  auto b = mahler_bounds(parse_poly("x + 3"));
  CHECK(b.lower == mpq_class(3, 2));
  CHECK(b.upper >= 0);
  CHECK(b.upper * b.upper >= 18);
  CHECK(b.upper.get_d() == doctest::Approx(3 * std::sqrt(2.0)).epsilon(1e-12));
  b = mahler_bounds(parse_poly("x^2 - 2"));
  CHECK(b.lower == mpq_class(1, 2));
  CHECK(b.upper * b.upper >= 12);
  b = mahler_bounds(parse_poly("x^4 + 100"));
  CHECK(b.lower == mpq_class(25, 4));
  CHECK(b.upper * b.upper >= 50000);
  CHECK(b.upper.get_d() == doctest::Approx(100 * std::sqrt(5.0)).epsilon(1e-12));
  CHECK_THROWS_AS(mahler_bounds(IntPoly({5})), DomainError);
}

TEST_CASE("compose_power") {
  CHECK(compose_power(parse_poly("x + 2"), 3) == parse_poly("x^3 + 2"));
  CHECK(compose_power(parse_poly("x^2 + x + 1"), 2) == parse_poly("x^4 + x^2 + 1"));
  IntPoly g = parse_poly("3x^2 - x + 7");
  CHECK(compose_power(g, 1) == g);
  std::mt19937_64 rng(7);
  for (int t = 0; t < 2000; ++t) {
    IntPoly f = random_poly(rng, 6, 10, false);
    for (int k = 1; k <= 5; ++k) {
      IntPoly c = compose_power(f, k);
      CHECK(c.degree() == k * f.degree());
      CHECK(height(c) == height(f));
    }
  }
}

TEST_CASE("resultant conventions and oracle") {
  CHECK(resultant(parse_poly("x^2 - 2"), parse_poly("x - 1")) == -1);
  // Res(x - a, x - b) = g(a) = a - b.
  CHECK(resultant(parse_poly("x - 1"), parse_poly("x - 2")) == -1);
  CHECK(resultant(parse_poly("x - 2"), parse_poly("x - 1")) == 1);
  IntPoly f = parse_poly("x^3 - x + 5");
  CHECK(resultant(f, f) == 0);
  CHECK(resultant(f, IntPoly({3})) == 27);
  CHECK(resultant(IntPoly({3}), f) == 27);

  std::mt19937_64 rng(11);
  for (int t = 0; t < 400; ++t) {
    IntPoly a = random_poly(rng, 6, 10, false);
    IntPoly b = random_poly(rng, 6, 10, false);
    CHECK(resultant(a, b) == sylvester_resultant(a, b));
  }
}

TEST_CASE("resultant multiplicativity") {
  std::mt19937_64 rng(12);
  for (int t = 0; t < 1000; ++t) {
    IntPoly f = random_poly(rng, 6, 10, false);
    IntPoly g = random_poly(rng, 6, 10, false);
    IntPoly h = random_poly(rng, 6, 10, false);
    CHECK(resultant(f * g, h) == resultant(f, h) * resultant(g, h));
  }
}

TEST_CASE("discriminant") {
  CHECK(discriminant(parse_poly("x^2 + x + 1")) == -3);
  CHECK(discriminant(parse_poly("x^3 - 3x - 1")) == 81);
  CHECK(discriminant(parse_poly("x^2 - 2x + 1")) == 0);
  CHECK(discriminant(parse_poly("2x^2 + 3x - 5")) == 49);
}

TEST_CASE("gcd and exact division") {
  IntPoly a = parse_poly("x^2 - 1") * parse_poly("x^2 + 3");
  IntPoly b = parse_poly("x^2 - 1") * parse_poly("x - 4");
  CHECK(poly_gcd(a, b) == parse_poly("x^2 - 1"));
  CHECK(poly_gcd(a * mpz_class(6), b * mpz_class(4)) == parse_poly("2x^2 - 2"));
  CHECK(exact_divide(a, parse_poly("x + 1")) == parse_poly("x^3 - x^2 + 3x - 3"));
  CHECK_THROWS_AS(exact_divide(a, parse_poly("x - 2")), ContractError);
  IntPoly q;
  CHECK_FALSE(try_exact_divide(parse_poly("x^2 + 1"), parse_poly("2x + 1"), q));
}

TEST_CASE("squarefree decomposition") {
  auto d = squarefree_decomposition(parse_poly("x - 1").pow(2) * parse_poly("x + 2"));
  REQUIRE(d.size() == 2);
  CHECK(d[0].part == parse_poly("x + 2"));
  CHECK(d[0].multiplicity == 1);
  CHECK(d[1].part == parse_poly("x - 1"));
  CHECK(d[1].multiplicity == 2);
  d = squarefree_decomposition(parse_poly("x^2 + 1"));
  REQUIRE(d.size() == 1);
  CHECK(d[0].part == parse_poly("x^2 + 1"));
  d = squarefree_decomposition(parse_poly("x^4"));
  REQUIRE(d.size() == 1);
  CHECK(d[0].part == parse_poly("x"));
  CHECK(d[0].multiplicity == 4);
  CHECK(squarefree_reduction(parse_poly("x^3 - 3x + 2")) == parse_poly("x^2 + x - 2"));
}

TEST_CASE("squarefree decomposition round trip, monic deg <= 5 height <= 5") {
  long checked = 0;
  for (int n = 1; n <= 5; ++n) {
    std::vector<long> a(static_cast<std::size_t>(n), -5);
    while (true) {
      std::vector<mpz_class> c(a.begin(), a.end());
      c.emplace_back(1);
      IntPoly f(std::move(c));
      IntPoly prod{1};
      auto parts = squarefree_decomposition(f);
      for (std::size_t i = 0; i < parts.size(); ++i) {
        const auto& p = parts[i];
        prod = prod * p.part.pow(static_cast<unsigned>(p.multiplicity));
        if (poly_gcd(p.part, p.part.derivative()).degree() > 0) FAIL("part not square-free");
        for (std::size_t j = 0; j < i; ++j)
          if (poly_gcd(p.part, parts[j].part).degree() > 0) FAIL("parts not coprime");
      }
      if (prod != f) FAIL("round trip failed for " << f.to_string());
      ++checked;
      std::size_t i = 0;
      while (i < a.size() && a[i] == 5) a[i++] = -5;
      if (i == a.size()) break;
      ++a[i];
    }
  }
  CHECK(checked == 11 + 121 + 1331 + 14641 + 161051);
}

TEST_CASE("sturm counts") {
  CHECK(sturm_count(parse_poly("x^2 - 2"), -2, 2) == 2);
  CHECK(sturm_count(parse_poly("x^2 + 1"), -10, 10) == 0);
  CHECK(sturm_count(parse_poly("x^3 - x"), -2, 1) == 3);
  CHECK(sturm_count(parse_poly("x^3 - x"), -1, 1) == 2);
  CHECK(sturm_count(parse_poly("x^3 - x"), -1, 0) == 1);
  CHECK(sturm_count(parse_poly("2x - 1"), 0, mpq_class(1, 2)) == 1);
  CHECK(sturm_count(parse_poly("2x - 1"), mpq_class(1, 2), 1) == 0);
  CHECK_THROWS_AS(sturm_count(parse_poly("x^2 - 2x + 1"), -5, 5), ContractError);
  CHECK_THROWS_AS(sturm_count(parse_poly("x^2 - 2"), 3, 1), ContractError);
  CHECK(real_root_count(parse_poly("x^3 - 3x - 1")) == 3);
  CHECK(real_root_count(parse_poly("x^4 + 1")) == 0);
  CHECK(real_root_count(parse_poly("x^5 - x")) == 3);
}

TEST_CASE("sturm count equals sign scan on integer-rooted products") {
  std::mt19937_64 rng(5);
  std::uniform_int_distribution<long> rd(-20, 20);
  for (int t = 0; t < 300; ++t) {
    std::vector<long> roots;
    IntPoly f{1};
    int n = 1 + t % 5;
    while (static_cast<int>(roots.size()) < n) {
      long r = rd(rng);
      if (std::find(roots.begin(), roots.end(), r) != roots.end()) continue;
      roots.push_back(r);
      f = f * IntPoly::linear_root(r);
    }
    f = f * parse_poly("x^2 + 1");
    long a = rd(rng), b = rd(rng);
    if (a == b) continue;
    if (a > b) std::swap(a, b);
    std::size_t expect = 0;
    for (long r : roots)
      if (r > a && r <= b) ++expect;
    CHECK(sturm_count(f, a, b) == expect);
  }
}

TEST_CASE("real roots strictly inside a square-root interval") {
  CHECK(real_roots_below_square(parse_poly("x^2 - 2"), 2) == 0);
  CHECK(real_roots_below_square(parse_poly("x^2 - 2"), 3) == 2);
  CHECK(real_roots_below_square(parse_poly("x - 2"), 4) == 0);
  CHECK(real_roots_below_square(parse_poly("x - 1"), 4) == 1);
  CHECK(real_roots_below_square(parse_poly("x^2 - x - 1"), 3) == 2);
  CHECK(real_roots_below_square(parse_poly("x^2 - x - 1"), mpq_class(5, 2)) == 1);
  CHECK(real_roots_below_square(parse_poly("x^3 - 8x"), 8) == 1);
}

TEST_CASE("sign of u + v sqrt d") {
  CHECK(sign_of_quadratic(3, -2, 2) == 1);
  CHECK(sign_of_quadratic(2, -2, 2) == -1);
  CHECK(sign_of_quadratic(-4, 2, 4) == 0);
  CHECK(sign_of_quadratic(0, -1, 5) == -1);
  CHECK(sign_of_quadratic(-1, 0, 5) == -1);
}
