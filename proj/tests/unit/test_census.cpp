#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>

#include "../support/poly_gen.hpp"
#include "doctest.h"
#include "domroots/census.hpp"
#include "domroots/errors.hpp"
#include "domroots/factor_int.hpp"
#include "domroots/poly_core.hpp"

using namespace domroots;

namespace {

IntPoly P(const char* s) { return parse_poly(s); }

CensusConfig config(int n, long H, std::vector<long> heights = {}, unsigned threads = 1) {
  CensusConfig c;
  c.n = n;
  c.max_height = H;
  c.heights = std::move(heights);
  c.threads = threads;
  return c;
}

bool is_square(long v) {
  if (v < 0) return false;
  long r = std::lround(std::sqrt(double(v)));
  for (long t = std::max(0L, r - 2); t <= r + 2; ++t)
    if (t * t == v) return true;
  return false;
}

bool is_cube(long v) {
  long r = std::lround(std::cbrt(double(v)));
  for (long t = r - 2; t <= r + 2; ++t)
    if (t * t * t == v) return true;
  return false;
}

std::string temp_path(const char* name) { return (std::filesystem::temp_directory_path() / name).string(); }

}  // namespace

TEST_CASE("classify_one examples") {
  auto c = classify_one(P("x^6 - x^4 - 2x^3 + x^2 + x + 1"));
  CHECK(c.k == 4);
  CHECK(c.irreducible);
  CHECK(c.height == 2);
  c = classify_one(P("x^3 + 8"));
  CHECK(c.k == 3);
  CHECK_FALSE(c.irreducible);
  CHECK(c.height == 8);
  c = classify_one(P("x^2 - 3x + 2"));
  CHECK(c.k == 1);
  CHECK_FALSE(c.irreducible);
  CHECK(c.height == 3);
  c = classify_one(P("x^4"));
  CHECK(c.k == 4);
  CHECK_FALSE(c.irreducible);
  c = classify_one(P("x"));
  CHECK(c.k == 1);
  CHECK(c.irreducible);
  c = classify_one(P("x^2 + x"));
  CHECK(c.k == 1);
  CHECK_FALSE(c.irreducible);
  // coefficients beyond the floating-point screen
  c = classify_one(P("x^2 - 1000000000000"));
  CHECK(c.k == 2);
  CHECK_FALSE(c.irreducible);
  CHECK_FALSE(c.fast_path);
}

TEST_CASE("fast screen agrees with the exact pipeline") {
  std::mt19937_64 rng(21);
  for (int t = 0; t < 3000; ++t) {
    IntPoly f = testgen::random_monic(rng, 1 + t % 6, t % 3 == 0 ? 3 : 40);
    auto c = classify_one(f);
    CAPTURE(f.to_string());
    CHECK(c.k == dominant_root_count(f));
    CHECK(c.irreducible == is_irreducible(f));
  }
}

TEST_CASE("linear census") {
  auto t = run_census(config(1, 5));
  CHECK(t.D(1, 5) == 11);
  CHECK(t.I(1, 5) == 11);
  CHECK(t.R(1, 5) == 0);
}

TEST_CASE("quadratic census matches the discriminant rule") {
  // x^2 + b x + c: k = 2 iff b^2 <= 4c or b = 0; irreducible iff b^2 - 4c is not a square
  const long Hmax = 30;
  std::vector<long> hs;
  for (long h = 0; h <= Hmax; ++h) hs.push_back(h);
  auto t = run_census(config(2, Hmax, hs));
  for (long H : hs) {
    std::uint64_t d[3] = {}, irr[3] = {};
    for (long b = -H; b <= H; ++b)
      for (long c = -H; c <= H; ++c) {
        long disc = b * b - 4 * c;
        int k = (disc <= 0 || b == 0) ? 2 : 1;
        ++d[k];
        if (!is_square(disc)) ++irr[k];
      }
    for (int k = 1; k <= 2; ++k) {
      CHECK(t.D(k, H) == d[k]);
      CHECK(t.I(k, H) == irr[k]);
    }
    // reducible k = 2: (x - a)^2 or x^2 - a^2; the middle coefficient 2a fits once H >= 4
    if (H < 4) continue;
    long s = std::lround(std::floor(std::sqrt(double(H))));
    while ((s + 1) * (s + 1) <= H) ++s;
    while (s * s > H) --s;
    CHECK(t.R(2, H) == static_cast<std::uint64_t>(3 * s + 1));
  }
  CHECK(t.R(2, 9) == 10);
}

TEST_CASE("cubic census: I_3(3,H) is x^3 + a with a not a signed cube") {
  auto t = run_census(config(3, 30, {5, 10, 20, 30}));
  for (long H : {5L, 10L, 20L, 30L}) {
    std::uint64_t want = 0;
    for (long a = -H; a <= H; ++a)
      if (a != 0 && !is_cube(a)) ++want;
    CHECK(t.I(3, H) == want);
  }
  CHECK(t.stats.audited >= 10000);
}

TEST_CASE("census with and without the fast screen agree") {
  for (auto [n, H] : {std::pair{3, 6L}, std::pair{4, 3L}, std::pair{5, 1L}}) {
    auto fast = run_census(config(n, H, {0, 1, H}));
    CensusConfig slow_cfg = config(n, H, {0, 1, H});
    slow_cfg.use_fast_path = false;
    auto slow = run_census(slow_cfg);
    CHECK(fast.same_counts(slow));
    CHECK(slow.stats.fast <= 1);  // only x^n is decided without exact_roots
  }
}

TEST_CASE("partition identity and odd-k zeros") {
  for (int n = 1; n <= 3; ++n) {
    auto t = run_census(config(n, 20, {0, 5, 20}));
    for (long H : {0L, 5L, 20L}) {
      std::uint64_t sum = 0;
      for (int k = 1; k <= n; ++k) {
        sum += t.D(k, H);
        CHECK(t.D(k, H) == t.I(k, H) + t.R(k, H));
      }
      CHECK(sum == census_cardinality(n, H));
    }
  }
  auto t4 = run_census(config(4, 6, {2, 4, 6}));
  for (long H : {2L, 4L, 6L}) CHECK(t4.I(3, H) == 0);
  // H = 0 holds only x^n
  auto t0 = run_census(config(3, 0));
  CHECK(t0.D(3, 0) == 1);
  CHECK(t0.R(3, 0) == 1);
}

TEST_CASE("thread count does not change the table") {
  auto a = run_census(config(3, 15, {5, 10, 15}, 1));
  auto b = run_census(config(3, 15, {5, 10, 15}, 4));
  auto c = run_census(config(3, 15, {5, 10, 15}, 7));
  CHECK(a.same_counts(b));
  CHECK(a.same_counts(c));
  CHECK(a.stats.fast == b.stats.fast);
  CHECK(a.stats.audited == c.stats.audited);
}

TEST_CASE("checkpoint and resume") {
  std::string path = temp_path("domroots_test_ckpt.bin");
  std::filesystem::remove(path);
  auto straight = run_census(config(3, 50, {10, 25, 50}));

  CensusConfig cfg = config(3, 50, {10, 25, 50}, 2);
  cfg.checkpoint_path = path;
  cfg.checkpoint_every = 97;
  cfg.stop_after_shards = straight.stats.shards_total / 2;
  auto partial = run_census(cfg);
  CHECK_FALSE(partial.stats.complete);
  CHECK(partial.stats.shards_done >= straight.stats.shards_total / 2);
  CHECK(partial.stats.shards_done < straight.stats.shards_total);

  cfg.stop_after_shards = 0;
  auto resumed = run_census(cfg);
  CHECK(resumed.stats.complete);
  CHECK(resumed.same_counts(straight));
  CHECK(resumed.stats.audited == straight.stats.audited);

  // completed checkpoint returns the final table without work
  auto again = run_census(cfg);
  CHECK(again.same_counts(straight));

  CensusConfig other = cfg;
  other.heights = {10, 50};
  CHECK_THROWS_AS(run_census(other), CheckpointError);

  std::string bytes;
  {
    std::ifstream f(path, std::ios::binary);
    bytes.assign(std::istreambuf_iterator<char>(f), std::istreambuf_iterator<char>());
  }
  bytes[bytes.size() / 2] = static_cast<char>(bytes[bytes.size() / 2] ^ 0x40);
  {
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    f.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  }
  CHECK_THROWS_AS(run_census(cfg), CheckpointError);
  std::filesystem::remove(path);
}

TEST_CASE("budget guard refuses before starting") {
  CensusConfig cfg = config(8, 100);
  try {
    run_census(cfg);
    FAIL("expected a budget refusal");
  } catch (const BudgetExceeded& e) {
    CHECK(e.cardinality() == census_cardinality(8, 100));
  }
  cfg = config(3, 10);
  cfg.budget = 1000;
  CHECK_THROWS_AS(run_census(cfg), BudgetExceeded);
  CHECK(census_cardinality(3, 100) == 8120601u);
}

TEST_CASE("csv round trip") {
  auto t = run_census(config(3, 8, {2, 4, 8}));
  std::string csv = t.to_csv();
  CHECK(csv.rfind("n,k,H,D,I,R\n3,1,2,", 0) == 0);
  auto back = CensusTable::from_csv(csv);
  CHECK(back.same_counts(t));
  CHECK(back.config_hash == t.config_hash);
  CHECK_THROWS_AS(CensusTable::from_csv("n,k,H,D,I,R\n3,1,2,5,3,1\n"), ParseError);
}

TEST_CASE("invariant checker catches corrupted tables") {
  auto t = run_census(config(3, 8, {2, 4, 8}));
  CHECK_NOTHROW(t.check_invariants());
  auto bad = t;
  bad.d[0] += 1;
  CHECK_THROWS_AS(bad.check_invariants(), InvariantViolation);
  bad = t;
  bad.i[static_cast<std::size_t>(1) * 3 + 2] = bad.d[static_cast<std::size_t>(1) * 3 + 2] + 1;
  CHECK_THROWS_AS(bad.check_invariants(), InvariantViolation);
}

TEST_CASE("F counts") {
  CHECK(count_F(2, 1, 0) == 1);
  for (long H : {1L, 5L, 12L}) {
    std::uint64_t brute = 0;
    for (long b = -H; b <= H; ++b)
      for (long c = -H; c <= H; ++c) brute += is_square(b * b - 4 * c);
    CHECK(count_F(2, 1, H) == brute);
  }
  // cubics: a factor of degree 1 exactly when reducible
  auto t = run_census(config(3, 12, {12}));
  std::uint64_t red = 0;
  for (int k = 1; k <= 3; ++k) red += t.R(k, 12);
  CHECK(count_F(3, 1, 12) == red);

  // quartics against factor_monic directly
  CensusConfig cfg = config(4, 3, {1, 2, 3});
  auto ft = run_fcount(cfg);
  cfg.use_fast_path = false;
  auto slow = run_fcount(cfg);
  std::uint64_t f1 = 0, f2 = 0;
  testgen::for_each_monic(4, 3, [&](const IntPoly& f) {
    std::vector<char> sums(5, 0);
    sums[0] = 1;
    for (int d : factor_monic(f).degrees())
      for (int s = 4; s >= d; --s)
        if (sums[s - d]) sums[s] = 1;
    f1 += sums[1];
    f2 += sums[2];
  });
  CHECK(ft.F(1, 3) == f1);
  CHECK(ft.F(2, 3) == f2);
  CHECK(slow.F(1, 3) == f1);
  CHECK(slow.F(2, 3) == f2);
  CHECK(ft.F(1, 1) <= ft.F(1, 2));
}

TEST_CASE("J counts") {
  CHECK(count_J(1, 0, 25) == 11);
  // non-real quadratics: |roots|^2 = c <= 9 and b^2 < 4c
  std::uint64_t want = 0;
  for (long c = 1; c <= 9; ++c)
    for (long b = -6; b <= 6; ++b) want += b * b < 4 * c;
  CHECK(count_J(2, 1, 9) == want);
  // real quadratics with both roots in [-1, 1], irreducible
  want = 0;
  for (long b = -3; b <= 3; ++b)
    for (long c = -3; c <= 3; ++c) {
      long disc = b * b - 4 * c;
      if (disc <= 0 || is_square(disc)) continue;
      long double r1 = (-b + std::sqrt((long double)disc)) / 2, r2 = (-b - std::sqrt((long double)disc)) / 2;
      want += std::fabs(r1) <= 1 && std::fabs(r2) <= 1;
    }
  CHECK(count_J(2, 0, 1) == want);
  CHECK(want == 0);  // |c| < 1 would be needed, forcing c = 0
  CHECK(j_coefficient_bounds(2, 9) == std::vector<mpz_class>{9, 6});
  CHECK(j_coefficient_bounds(3, 2) == std::vector<mpz_class>{2, 6, 4});
}
