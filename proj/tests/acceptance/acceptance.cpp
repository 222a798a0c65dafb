// Acceptance run. One PASS/FAIL line per criterion; exit status 1 if any fail.
// Usage: acceptance [criterion numbers...]   (default: all)

#include <chrono>
#include <cstdio>
#include <functional>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "domroots/analysis.hpp"
#include "domroots/census.hpp"
#include "domroots/errors.hpp"
#include "domroots/exact_roots.hpp"
#include "domroots/factor_int.hpp"
#include "domroots/families.hpp"
#include "../support/naive_oracle.hpp"
#include "../support/poly_gen.hpp"

using namespace domroots;

namespace {

struct Result {
  bool pass = true;
  std::ostringstream detail;
  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail << " [failed: " << what << "]";
    }
  }
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

unsigned sweep_threads() { return std::max(1u, default_thread_count()); }

// Shared census runs, computed on first use.
const CensusTable& census(int n, long H, std::vector<long> heights, unsigned threads = 0) {
  static std::map<std::string, CensusTable> cache;
  std::ostringstream key;
  key << n << ":" << H << ":" << threads;
  for (long h : heights) key << "," << h;
  auto it = cache.find(key.str());
  if (it != cache.end()) return it->second;
  CensusConfig c;
  c.n = n;
  c.max_height = H;
  c.heights = std::move(heights);
  c.threads = threads ? threads : sweep_threads();
  c.budget = std::uint64_t(1) << 34;
  auto t0 = std::chrono::steady_clock::now();
  CensusTable t = run_census(c);
  std::fprintf(stderr, "  census n=%d H=%ld threads=%u: %.1fs\n", n, H, c.threads, seconds_since(t0));
  return cache.emplace(key.str(), std::move(t)).first->second;
}

const CensusTable& census3() { return census(3, 200, {5, 20, 25, 50, 100, 200}); }
const CensusTable& census4(unsigned threads = 8) { return census(4, 40, {5, 10, 20, 40}, threads); }

IntPoly compose_power(const IntPoly& g, int k) {
  std::vector<mpz_class> c(static_cast<std::size_t>(g.degree() * k) + 1);
  for (int i = 0; i <= g.degree(); ++i) c[static_cast<std::size_t>(i * k)] = g[i];
  return IntPoly(std::move(c));
}

mpz_class height_of(const IntPoly& f) {
  mpz_class h = 0;
  for (auto& c : f.coeffs())
    if (abs(c) > h) h = abs(c);
  return h;
}

// Every monic polynomial of degree <= 4 with height <= 10.
template <class F>
void exhaustive_small(F&& fn) {
  for (int n = 1; n <= 4; ++n) testgen::for_each_monic(n, 10, fn);
}

// ---------------------------------------------------------------------------

void criterion1(Result& r) {
  std::uint64_t cells = 0;
  for (int n = 1; n <= 3; ++n) {
    std::vector<long> hs = {5, 20, 100};
    CensusTable t = n == 3 ? census3() : census(n, 100, hs);
    for (long H : hs) {
      std::uint64_t sum = 0, box = 1;
      for (int i = 0; i < n; ++i) box *= std::uint64_t(2 * H + 1);
      for (int k = 1; k <= n; ++k) {
        sum += t.D(k, H);
        r.require(t.I(k, H) <= t.D(k, H), "I <= D at n=" + std::to_string(n));
        r.require(t.I(k, H) + t.R(k, H) == t.D(k, H), "D = I + R");
        ++cells;
      }
      r.require(sum == box, "sum_k D_" + std::to_string(n) + "(k," + std::to_string(H) + ") = (2H+1)^n");
    }
    // independent recount at H = 5: exact factorization and modulus profile
    std::vector<std::uint64_t> d(static_cast<std::size_t>(n) + 1), irr(static_cast<std::size_t>(n) + 1);
    testgen::for_each_monic(n, 5, [&](const IntPoly& f) {
      int k = modulus_profile(f).dominant_count();
      ++d[static_cast<std::size_t>(k)];
      auto fz = factor_monic(f);
      if (fz.factors.size() == 1 && fz.factors[0].multiplicity == 1) ++irr[static_cast<std::size_t>(k)];
    });
    for (int k = 1; k <= n; ++k) {
      r.require(t.D(k, 5) == d[static_cast<std::size_t>(k)], "recount D_" + std::to_string(n) + "(" + std::to_string(k) + ",5)");
      r.require(t.I(k, 5) == irr[static_cast<std::size_t>(k)], "recount I_" + std::to_string(n) + "(" + std::to_string(k) + ",5)");
    }
  }
  r.detail << cells << " cells, n in {1,2,3}, H in {5,20,100}; H=5 recounted exactly";
}

void criterion2(Result& r) {
  // x^3 + a, a != 0, irreducible exactly when -a is not a cube
  std::uint64_t oracle = 0;
  for (long a = -100; a <= 100; ++a) {
    if (a == 0) continue;
    long c = std::lround(std::cbrt(double(-a)));
    bool cube = false;
    for (long t = c - 1; t <= c + 1; ++t) cube |= t * t * t == -a;
    if (!cube) ++oracle;
  }
  std::uint64_t got = census3().I(3, 100);
  r.require(oracle == 192, "oracle value 192");
  r.require(got == oracle, "census equals oracle");
  r.detail << "I_3(3,100) = " << got << ", oracle " << oracle;
}

void criterion3(Result& r) {
  const CensusTable& t = census4();
  for (long H : {10L, 20L, 40L}) {
    r.require(t.I(3, H) == 0, "I_4(3," + std::to_string(H) + ") = 0");
    r.detail << "I_4(3," << H << ")=" << t.I(3, H) << " ";
  }
}

void criterion4(Result& r) {
  struct Case {
    const char* name;
    int n, k;
    char q;
    double lo, hi;
  };
  const std::vector<Case> cases = {{"D_3(1)", 3, 1, 'D', 2.8, 3.1},
                                   {"D_3(2)", 3, 2, 'D', 2.2, 2.8},
                                   {"R_3(3)", 3, 3, 'R', 0.5, 0.85},
                                   {"I_4(4)", 4, 4, 'I', 1.2, 1.8},
                                   {"R_4(4)", 4, 4, 'R', 0.7, 1.3}};
  for (auto& c : cases) {
    const CensusTable& t = c.n == 3 ? census3() : census4();
    std::vector<long> ladder = c.n == 3 ? std::vector<long>{25, 50, 100, 200} : std::vector<long>{10, 20, 40};
    std::vector<std::pair<long, std::uint64_t>> pts;
    for (long H : ladder) pts.emplace_back(H, c.q == 'D' ? t.D(c.k, H) : c.q == 'I' ? t.I(c.k, H) : t.R(c.k, H));
    auto fit = fit_exponent(pts);
    char buf[96];
    std::snprintf(buf, sizeof buf, "%s %.3f in [%.2f,%.2f]; ", c.name, fit.slope, c.lo, c.hi);
    r.detail << buf;
    r.require(fit.slope >= c.lo && fit.slope <= c.hi, c.name);
  }
}

void criterion5(Result& r) {
  const CensusTable& t = census4();
  std::vector<std::pair<long, std::uint64_t>> pts;
  for (long H : {10L, 20L, 40L}) pts.emplace_back(H, t.R(3, H));
  auto fit = fit_exponent(pts, true);
  double spread = fit.ratio_spread();
  char buf[160];
  std::snprintf(buf, sizeof buf, "R_4(3,H)/(H ln H) = %.3f, %.3f, %.3f; max/min %.3f <= 3", (*fit.hlogh_ratios)[0],
                (*fit.hlogh_ratios)[1], (*fit.hlogh_ratios)[2], spread);
  r.detail << buf;
  r.require(spread <= 3.0, "ratio spread");
}

IntPoly random_structured(std::mt19937_64& rng, int kind) {
  static const long heights[] = {1, 2, 3, 5, 10, 30, 100, 1000};
  auto pick_h = [&] { return heights[std::uniform_int_distribution<int>(0, 7)(rng)]; };
  auto pick = [&](int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); };
  switch (kind) {
    case 0:  // dense box sample
      return testgen::random_monic(rng, pick(1, 6), pick_h());
    case 1: {  // g(x^k): k roots on every modulus circle
      int k = pick(2, 3);
      int d = pick(1, 6 / k);
      return compose_power(testgen::random_monic(rng, d, pick_h()), k);
    }
    case 2: {  // products, including squares
      int d1 = pick(1, 3), d2 = pick(1, 6 - d1);
      IntPoly a = testgen::random_monic(rng, d1, std::min(pick_h(), 10L));
      IntPoly b = pick(0, 3) == 0 && d2 >= d1 ? a : testgen::random_monic(rng, d2, std::min(pick_h(), 10L));
      return a * b;
    }
    case 3: {  // quadratics sharing a constant term: equal moduli in pairs
      long b = pick(1, 30);
      IntPoly q1{b, long(pick(-10, 10)), 1}, q2{b, long(pick(-10, 10)), 1};
      IntPoly f = q1 * q2;
      if (pick(0, 1)) f = f * IntPoly{long(pick(-5, 5)), 1};
      return f;
    }
    case 4: {  // sparse support with zero roots
      int n = pick(2, 6);
      std::vector<mpz_class> c(static_cast<std::size_t>(n) + 1);
      c[static_cast<std::size_t>(n)] = 1;
      long h = pick_h();
      for (int i = pick(0, n - 1); i < n; i += pick(1, 3)) c[static_cast<std::size_t>(i)] = pick(-int(h), int(h));
      return IntPoly(std::move(c));
    }
    default: {  // self-reciprocal: roots paired with their inverses
      int n = 2 * pick(1, 3);
      std::vector<mpz_class> c(static_cast<std::size_t>(n) + 1);
      c[0] = c[static_cast<std::size_t>(n)] = 1;
      for (int i = 1; i <= n / 2; ++i) c[static_cast<std::size_t>(i)] = c[static_cast<std::size_t>(n - i)] = pick(-10, 10);
      return IntPoly(std::move(c));
    }
  }
}

void criterion6(Result& r) {
  oracle::Escalating esc;
  std::uint64_t checked = 0, wrong = 0;
  std::map<int, std::uint64_t> by_prec;
  auto check = [&](const IntPoly& f) {
    int p = esc.check(f, modulus_profile(f));
    ++by_prec[p];
    ++checked;
    if (p == 0) {
      ++wrong;
      if (wrong <= 5) std::fprintf(stderr, "  disagreement: %s\n", f.to_string().c_str());
    }
  };
  auto t0 = std::chrono::steady_clock::now();
  exhaustive_small(check);
  std::uint64_t exhaustive = checked;
  std::mt19937_64 rng(20261014);
  for (int s = 0; s < 100000; ++s) check(random_structured(rng, s % 6));
  r.detail << exhaustive << " exhaustive + " << (checked - exhaustive) << " random; " << wrong
           << " disagreements; oracle escalations " << esc.escalations;
  for (auto& [p, c] : by_prec)
    if (p > 256) r.detail << ", " << c << " settled at " << p << " bits";
  char buf[48];
  std::snprintf(buf, sizeof buf, "; %.0fs", seconds_since(t0));
  r.detail << buf;
  r.require(wrong == 0, "zero disagreements");
  r.require(seconds_since(t0) < 300, "under 5 minutes");
}

void criterion7(Result& r) {
  std::uint64_t odd_checked = 0;
  auto structural = [&](const IntPoly& f) {
    Classification c = classify_one(f);
    if (!c.irreducible || c.k < 3 || c.k % 2 == 0) return;
    ++odd_checked;
    std::string name = f.to_string();
    r.require(f.degree() % c.k == 0, "k | n for " + name);
    auto fs = ferguson_structure_check(f);
    r.require(fs.has_value(), "real dominant root for " + name);
    if (fs) r.require(fs->k == c.k && compose_power(fs->g, fs->k) == f, "f = g(x^k) for " + name);
  };
  exhaustive_small(structural);
  // sparse supports that can carry odd k >= 3 at n = 5, 6
  for (long a = -10; a <= 10; ++a) {
    structural(IntPoly{a, 0, 0, 0, 0, 1});
    for (long b = -10; b <= 10; ++b) structural(IntPoly{b, 0, 0, a, 0, 0, 1});
  }
  std::mt19937_64 rng(7);
  for (int s = 0; s < 40000; ++s) structural(testgen::random_monic(rng, 5 + s % 2, 10));
  r.detail << odd_checked << " irreducible odd-k cases; ";

  // every generator's output, re-derived against the naive oracle
  oracle::NaiveOracle naive(256);
  std::uint64_t members = 0;
  auto recheck = [&](const FamilyMember& m) {
    ++members;
    std::string name = m.f.to_string();
    r.require(m.certificate.passed, "certificate for " + name);
    r.require(height_of(m.f) <= m.H, "height for " + name);
    oracle::Profile p = naive.profile(m.f);
    int k = p.classes.empty() ? p.zero_count : p.classes.front().count;
    r.require(k == m.k, "dominant count for " + name);
    auto fz = factor_monic(m.f);
    bool irr = fz.factors.size() == 1 && fz.factors[0].multiplicity == 1;
    r.require(irr == m.certificate.irreducible, "irreducibility for " + name);
    return true;
  };
  auto spec = [](FamilyName f, int n, int k, long H) {
    FamilySpec s;
    s.name = f;
    s.n = n;
    s.k = k;
    s.H = H;
    return s;
  };
  std::vector<FamilySpec> specs = {spec(FamilyName::PowerCompose, 3, 3, 100), spec(FamilyName::PowerCompose, 6, 3, 5),
                                   spec(FamilyName::PowerCompose, 3, 1, 5),   spec(FamilyName::EvenCircle, 2, 2, 100),
                                   spec(FamilyName::EvenCircle, 4, 4, 10000), spec(FamilyName::EvenCircle, 4, 2, 10000),
                                   spec(FamilyName::OddCircle, 3, 3, 1000),   spec(FamilyName::OddCircle, 1, 1, 10),
                                   spec(FamilyName::R44Quartic, 4, 4, 100),   spec(FamilyName::I44Biquadratic, 4, 4, 100)};
  FamilySpec top = spec(FamilyName::EvenCircle, 4, 4, 10000);
  top.reducible_top = true;
  specs.push_back(top);
  for (auto& s : specs) generate(s, recheck, 300);
  r.detail << members << " family members re-verified; ";

  // cross-membership with the census at H = 20
  const CensusTable& t3 = census3();
  const CensusTable& t4 = census4();
  std::uint64_t pc3 = 0, pc1 = 0, r44 = 0, i44 = 0;
  gen_power_compose(3, 3, 20, [&](const FamilyMember&) { return ++pc3, true; });
  gen_power_compose(3, 1, 20, [&](const FamilyMember&) { return ++pc1, true; });
  auto in_census = [&](const FamilyMember& m) {
    Classification c = classify_one(m.f);
    r.require(c.k == m.k && c.irreducible == m.certificate.irreducible && c.height <= 20,
              "census classification of " + m.f.to_string());
  };
  gen_R44(20, [&](const FamilyMember& m) { return in_census(m), ++r44, true; });
  gen_I44(20, [&](const FamilyMember& m) { return in_census(m), ++i44, true; });
  r.require(pc3 == t3.I(3, 20), "power-compose(3,3,20) = I_3(3,20)");
  r.require(pc1 == t3.I(1, 20), "power-compose(3,1,20) = I_3(1,20)");
  r.require(r44 <= t4.R(4, 20), "r44(20) <= R_4(4,20)");
  r.require(i44 <= t4.I(4, 20), "i44(20) <= I_4(4,20)");
  r.detail << "H=20: power-compose " << pc3 << "/" << pc1 << " = I_3(3)/I_3(1), r44 " << r44 << " <= R_4(4) "
           << t4.R(4, 20) << ", i44 " << i44 << " <= I_4(4) " << t4.I(4, 20);
}

void criterion8(Result& r) {
  r.require(compute_e(3, 3) == mpq_class(2, 3), "e(3,3)");
  r.require(compute_e(4, 4) == mpq_class(5, 4), "e(4,4)");
  r.require(compute_e(3, 1) == mpq_class(4, 3), "e(3,1)");
  r.detail << "e(3,3)=" << compute_e(3, 3).get_str() << " e(4,4)=" << compute_e(4, 4).get_str()
           << " e(3,1)=" << compute_e(3, 1).get_str();
}

void criterion9(Result& r) {
  const CensusTable& t8 = census4(8);
  double wall8 = t8.stats.wall_seconds;
  const CensusTable& t1 = census4(1);
  double rate = t8.stats.escalation_rate();
  char buf[200];
  std::snprintf(buf, sizeof buf,
                "n=4 H=40: %.1fs on 8 threads (%u hardware threads), %.1fs on 1; escalation rate %.4f%%; tables %s",
                wall8, std::thread::hardware_concurrency(), t1.stats.wall_seconds, 100 * rate,
                t1.same_counts(t8) ? "identical" : "differ");
  r.detail << buf;
  r.require(wall8 < 600, "under 10 minutes");
  r.require(rate < 0.05, "escalation rate < 5%");
  r.require(t1.same_counts(t8), "1 vs 8 threads identical");
}

}  // namespace

int main(int argc, char** argv) {
  const std::vector<std::pair<const char*, std::function<void(Result&)>>> criteria = {
      {"partition identity", criterion1},
      {"I_3(3,100) = 192", criterion2},
      {"I_4(3,H) = 0", criterion3},
      {"exponent fits", criterion4},
      {"H log H diagnostic for R_4(3)", criterion5},
      {"oracle equivalence", criterion6},
      {"structural invariants", criterion7},
      {"compute_e pins", criterion8},
      {"performance and thread invariance", criterion9}};
  std::set<int> only;
  for (int i = 1; i < argc; ++i) only.insert(std::atoi(argv[i]));
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    int id = int(i) + 1;
    if (!only.empty() && !only.count(id)) continue;
    Result r;
    auto t0 = std::chrono::steady_clock::now();
    try {
      criteria[i].second(r);
    } catch (const std::exception& e) {
      r.pass = false;
      r.detail << " [exception: " << e.what() << "]";
    }
    std::printf("%s %d %s: %s (%.1fs)\n", r.pass ? "PASS" : "FAIL", id, criteria[i].first, r.detail.str().c_str(),
                seconds_since(t0));
    std::fflush(stdout);
    failed += !r.pass;
  }
  return failed ? 1 : 0;
}
