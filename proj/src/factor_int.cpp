#include "domroots/factor_int.hpp"

#include <algorithm>
#include <cstdint>
#include <functional>
#include <map>
#include <sstream>

#include "domroots/errors.hpp"
#include "domroots/poly_core.hpp"

namespace domroots {

namespace {

constexpr int kSievePrimes[] = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29};

void require_monic(const IntPoly& f, const char* who) {
  if (f.degree() < 1 || !f.is_monic())
    throw ContractError(std::string(who) + ": expected a monic polynomial of degree >= 1, got " + f.to_string());
}

// ---- factoring integers (only needed for divisor lists) ----

mpz_class pollard_brent(const mpz_class& n) {
  if (mpz_even_p(n.get_mpz_t())) return 2;
  for (unsigned long c = 1;; ++c) {
    mpz_class y = 2, x, g = 1, q = 1, ys, t;
    unsigned long r = 1, m = 64;
    auto step = [&](mpz_class& v) {
      v = v * v + c;
      v %= n;
    };
    do {
      x = y;
      for (unsigned long i = 0; i < r; ++i) step(y);
      unsigned long k = 0;
      do {
        ys = y;
        for (unsigned long i = 0; i < std::min(m, r - k); ++i) {
          step(y);
          t = x - y;
          q = (q * abs(t)) % n;
        }
        mpz_gcd(g.get_mpz_t(), q.get_mpz_t(), n.get_mpz_t());
        k += m;
      } while (k < r && g == 1);
      r *= 2;
    } while (g == 1);
    if (g == n) {
      do {
        step(ys);
        t = x - ys;
        t = abs(t);
        mpz_gcd(g.get_mpz_t(), t.get_mpz_t(), n.get_mpz_t());
      } while (g == 1);
    }
    if (g != n) return g;
  }
}

void prime_factors(mpz_class n, std::map<mpz_class, int>& out) {
  for (unsigned long p = 2; p < 1000 && n > 1; ++p) {
    if (mpz_divisible_ui_p(n.get_mpz_t(), p)) {
      while (mpz_divisible_ui_p(n.get_mpz_t(), p)) {
        out[p]++;
        mpz_divexact_ui(n.get_mpz_t(), n.get_mpz_t(), p);
      }
    }
  }
  std::vector<mpz_class> stack;
  if (n > 1) stack.push_back(n);
  while (!stack.empty()) {
    mpz_class m = stack.back();
    stack.pop_back();
    if (m == 1) continue;
    if (mpz_probab_prime_p(m.get_mpz_t(), 30)) {
      out[m]++;
      continue;
    }
    mpz_class d = pollard_brent(m);
    stack.push_back(d);
    stack.push_back(m / d);
  }
}

// ---- polynomials over F_p, p < 2^16 ----

using ModPoly = std::vector<std::uint32_t>;

void trim(ModPoly& a) {
  while (!a.empty() && a.back() == 0) a.pop_back();
}

std::uint32_t inv_mod(std::uint32_t a, std::uint32_t p) {
  std::uint32_t r = 1, e = p - 2;
  std::uint64_t b = a;
  while (e) {
    if (e & 1) r = static_cast<std::uint32_t>(r * b % p);
    b = b * b % p;
    e >>= 1;
  }
  return r;
}

ModPoly reduce_mod(const IntPoly& f, std::uint32_t p) {
  ModPoly a(f.coeffs().size());
  for (std::size_t i = 0; i < a.size(); ++i)
    a[i] = static_cast<std::uint32_t>(mpz_fdiv_ui(f.coeffs()[i].get_mpz_t(), p));
  trim(a);
  return a;
}

// a mod b, b nonzero
void rem_in_place(ModPoly& a, const ModPoly& b, std::uint32_t p) {
  trim(a);
  std::size_t db = b.size() - 1;
  std::uint64_t inv = inv_mod(b.back(), p);
  while (a.size() > db) {
    std::uint64_t q = a.back() * inv % p;
    std::size_t shift = a.size() - 1 - db;
    for (std::size_t i = 0; i <= db; ++i)
      a[shift + i] = static_cast<std::uint32_t>((a[shift + i] + p - q * b[i] % p) % p);
    trim(a);
  }
}

ModPoly div_exact(ModPoly a, const ModPoly& b, std::uint32_t p) {
  std::size_t db = b.size() - 1;
  ModPoly q(a.size() - db, 0);
  std::uint64_t inv = inv_mod(b.back(), p);
  while (a.size() > db) {
    std::uint64_t c = a.back() * inv % p;
    std::size_t shift = a.size() - 1 - db;
    q[shift] = static_cast<std::uint32_t>(c);
    for (std::size_t i = 0; i <= db; ++i)
      a[shift + i] = static_cast<std::uint32_t>((a[shift + i] + p - c * b[i] % p) % p);
    trim(a);
  }
  return q;
}

ModPoly mul_mod(const ModPoly& a, const ModPoly& b, const ModPoly& m, std::uint32_t p) {
  if (a.empty() || b.empty()) return {};
  ModPoly r(a.size() + b.size() - 1, 0);
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j)
      r[i + j] = static_cast<std::uint32_t>((r[i + j] + std::uint64_t(a[i]) * b[j]) % p);
  rem_in_place(r, m, p);
  return r;
}

ModPoly gcd_mod(ModPoly a, ModPoly b, std::uint32_t p) {
  trim(a);
  trim(b);
  while (!b.empty()) {
    rem_in_place(a, b, p);
    std::swap(a, b);
  }
  if (!a.empty()) {
    std::uint64_t inv = inv_mod(a.back(), p);
    for (auto& c : a) c = static_cast<std::uint32_t>(c * inv % p);
  }
  return a;
}

ModPoly derivative_mod(const ModPoly& a, std::uint32_t p) {
  ModPoly d;
  for (std::size_t i = 1; i < a.size(); ++i) d.push_back(static_cast<std::uint32_t>(i % p * a[i] % p));
  trim(d);
  return d;
}

// Degrees of the irreducible factors of a square-free monic a over F_p.
std::vector<int> ddf_degrees(ModPoly a, std::uint32_t p) {
  std::vector<int> degs;
  ModPoly h = {0, 1};  // x
  for (int d = 1; 2 * d <= static_cast<int>(a.size()) - 1; ++d) {
    // h <- h^p mod a
    ModPoly base = h, acc = {1};
    for (std::uint32_t e = p; e; e >>= 1) {
      if (e & 1) acc = mul_mod(acc, base, a, p);
      if (e > 1) base = mul_mod(base, base, a, p);
    }
    h = acc;
    ModPoly hx = h;
    if (hx.size() < 2) hx.resize(2, 0);
    hx[1] = (hx[1] + p - 1) % p;
    trim(hx);
    ModPoly g = gcd_mod(a, hx, p);
    if (g.size() > 1) {
      int gd = static_cast<int>(g.size()) - 1;
      for (int i = 0; i < gd / d; ++i) degs.push_back(d);
      a = div_exact(a, g, p);
      rem_in_place(h, a, p);
    }
  }
  if (a.size() > 1) degs.push_back(static_cast<int>(a.size()) - 1);
  return degs;
}

// Candidate factor degrees in [1, n/2]; nullopt-like flag when no prime was usable.
std::vector<char> sieve_mask(const IntPoly& f, bool& any_prime) {
  int n = f.degree();
  std::vector<char> cand(n + 1, 1);
  any_prime = false;
  for (int p : kSievePrimes) {
    ModPoly a = reduce_mod(f, p);
    ModPoly g = gcd_mod(a, derivative_mod(a, p), p);
    if (g.size() != 1) continue;  // p | disc f
    any_prime = true;
    std::vector<char> sums(n + 1, 0);
    sums[0] = 1;
    for (int d : ddf_degrees(a, p))
      for (int s = n; s >= d; --s)
        if (sums[s - d]) sums[s] = 1;
    bool left = false;
    for (int d = 1; d <= n / 2; ++d) {
      cand[d] = cand[d] && sums[d];
      left = left || cand[d];
    }
    if (!left) break;
  }
  return cand;
}

// ---- exhaustive search ----

std::vector<mpz_class> signed_divisors(const mpz_class& m) {
  std::vector<mpz_class> out;
  for (auto& d : positive_divisors(m)) {
    out.push_back(d);
    out.push_back(-d);
  }
  return out;
}

std::optional<IntPoly> search_degree(const IntPoly& f, int d) {
  int n = f.degree();
  if (d < 1 || d >= n) return std::nullopt;
  const auto& a = f.coeffs();
  if (a[0] == 0) {
    if (d == 1) return IntPoly::monomial(1, 1);
  }
  mpz_class norm2 = 0;
  for (auto& c : a) norm2 += c * c;
  // |b_i| <= C(d,i) M(f) <= C(d,i) ||f||_2
  std::vector<mpz_class> bound(d);
  for (int i = 0; i < d; ++i) {
    mpz_class c = binomial(d, i);
    mpz_class v = norm2 * c * c;
    mpz_sqrt(bound[i].get_mpz_t(), v.get_mpz_t());
  }

  std::vector<mpz_class> b(d + 1);
  b[d] = 1;
  IntPoly quotient;
  auto try_candidate = [&]() -> std::optional<IntPoly> {
    IntPoly g(b);
    if (try_exact_divide(f, g, quotient)) return g;
    return std::nullopt;
  };

  std::vector<mpz_class> b0_list;
  if (a[0] != 0) {
    b0_list = signed_divisors(a[0]);
  } else {
    for (mpz_class v = -bound[0]; v <= bound[0]; ++v) b0_list.push_back(v);
  }

  if (d == 1) {
    for (auto& r : b0_list)
      if (f.eval(-r) == 0) return IntPoly::linear_root(-r);
    return std::nullopt;
  }

  mpz_class f1 = f.eval(1), fm1 = f.eval(-1);
  bool use_pm1 = d >= 3 && f1 != 0 && fm1 != 0;
  bool use_1 = d == 2 && f1 != 0;

  // Indices solved from g(1), g(-1): the highest odd and highest even index below d.
  int io = -1, ie = -1;
  if (use_pm1) {
    io = (d - 1) % 2 == 1 ? d - 1 : d - 2;
    ie = (d - 1) % 2 == 0 ? d - 1 : d - 2;
  } else if (use_1) {
    io = 1;
  }
  std::vector<int> free_idx;
  for (int i = 1; i < d; ++i)
    if (i != io && i != ie) free_idx.push_back(i);

  std::vector<mpz_class> s1_list, sm1_list;
  if (use_pm1 || use_1) s1_list = signed_divisors(f1);
  if (use_pm1) sm1_list = signed_divisors(fm1);

  std::optional<IntPoly> found;
  auto finish = [&](const mpz_class& s1, const mpz_class& sm1) -> bool {
    if (use_pm1) {
      mpz_class E = s1 + sm1, O = s1 - sm1;
      if (mpz_odd_p(E.get_mpz_t())) return false;
      E /= 2;
      O /= 2;
      mpz_class se = 0, so = 0;
      for (int i = 0; i <= d; ++i) {
        if (i == io || i == ie) continue;
        (i % 2 == 0 ? se : so) += b[i];
      }
      b[ie] = E - se;
      b[io] = O - so;
      if (abs(b[ie]) > bound[ie] || abs(b[io]) > bound[io]) return false;
    } else if (use_1) {
      b[1] = s1 - 1 - b[0];
      if (abs(b[1]) > bound[1]) return false;
    }
    found = try_candidate();
    return found.has_value();
  };

  std::function<bool(std::size_t)> rec = [&](std::size_t pos) -> bool {
    if (pos == free_idx.size()) {
      if (use_pm1) {
        for (auto& s1 : s1_list)
          for (auto& sm1 : sm1_list)
            if (finish(s1, sm1)) return true;
        return false;
      }
      if (use_1) {
        for (auto& s1 : s1_list)
          if (finish(s1, 0)) return true;
        return false;
      }
      return finish(0, 0);
    }
    int i = free_idx[pos];
    for (b[i] = -bound[i]; b[i] <= bound[i]; ++b[i])
      if (rec(pos + 1)) return true;
    return false;
  };

  for (auto& b0 : b0_list) {
    if (abs(b0) > bound[0]) continue;
    b[0] = b0;
    if (rec(0)) return found;
  }
  return std::nullopt;
}

std::optional<mpz_class> integer_root(const IntPoly& f) {
  const auto& a = f.coeffs();
  if (a[0] == 0) return mpz_class(0);
  mpz_class cauchy = height(f) + 1;
  for (auto& q : positive_divisors(a[0])) {
    if (q > cauchy) break;
    if (f.eval(q) == 0) return q;
    mpz_class m = -q;
    if (f.eval(m) == 0) return m;
  }
  return std::nullopt;
}

// Smallest-degree nontrivial monic factor of a square-free monic f, or nullopt.
std::optional<IntPoly> smallest_factor(const IntPoly& f) {
  int n = f.degree();
  if (n <= 1) return std::nullopt;
  if (auto r = integer_root(f)) return IntPoly::linear_root(*r);
  if (n <= 3) return std::nullopt;
  bool any_prime = false;
  std::vector<char> cand = sieve_mask(f, any_prime);
  for (int d = 2; d <= n / 2; ++d) {
    if (!cand[d]) continue;
    if (auto g = search_degree(f, d)) return g;
  }
  return std::nullopt;
}

}  // namespace

std::vector<mpz_class> positive_divisors(const mpz_class& m) {
  if (m == 0) throw DomainError("positive_divisors: zero has no finite divisor list");
  std::map<mpz_class, int> pf;
  prime_factors(abs(m), pf);
  std::vector<mpz_class> divs = {1};
  for (auto& [p, e] : pf) {
    std::size_t sz = divs.size();
    mpz_class pk = 1;
    for (int k = 1; k <= e; ++k) {
      pk *= p;
      for (std::size_t i = 0; i < sz; ++i) divs.push_back(divs[i] * pk);
    }
  }
  std::sort(divs.begin(), divs.end());
  return divs;
}

std::optional<PerfectPower> is_perfect_power(const mpz_class& a) {
  if (a < 1) throw DomainError("is_perfect_power: argument must be >= 1");
  if (a == 1) return PerfectPower{1, 2};
  if (!mpz_perfect_power_p(a.get_mpz_t())) return std::nullopt;
  unsigned long top = mpz_sizeinbase(a.get_mpz_t(), 2);
  mpz_class r;
  for (unsigned long e = top; e >= 2; --e) {
    if (mpz_root(r.get_mpz_t(), a.get_mpz_t(), e)) return PerfectPower{r, e};
  }
  return std::nullopt;
}

IntPoly Factorization::product() const {
  IntPoly p = IntPoly::constant(1);
  for (auto& fac : factors) p = p * fac.poly.pow(fac.multiplicity);
  return p;
}

std::vector<int> Factorization::degrees() const {
  std::vector<int> d;
  for (auto& fac : factors)
    for (int i = 0; i < fac.multiplicity; ++i) d.push_back(fac.poly.degree());
  std::sort(d.begin(), d.end());
  return d;
}

std::string Factorization::to_string() const {
  std::ostringstream os;
  for (auto& fac : factors) {
    os << '(' << fac.poly.to_string() << ')';
    if (fac.multiplicity > 1) os << '^' << fac.multiplicity;
  }
  return os.str();
}

std::string Factorization::to_json() const {
  std::ostringstream os;
  os << "{\"factors\": [";
  for (std::size_t i = 0; i < factors.size(); ++i) {
    if (i) os << ", ";
    os << "{\"poly\": " << factors[i].poly.to_json() << ", \"multiplicity\": " << factors[i].multiplicity << '}';
  }
  os << "]}";
  return os.str();
}

std::vector<int> sieve_candidate_degrees(const IntPoly& f) {
  require_monic(f, "sieve_candidate_degrees");
  bool any_prime = false;
  std::vector<char> cand = sieve_mask(f, any_prime);
  std::vector<int> out;
  for (int d = 1; d <= f.degree() / 2; ++d)
    if (cand[d]) out.push_back(d);
  return out;
}

std::optional<IntPoly> find_factor_exhaustive(const IntPoly& f, int d) {
  require_monic(f, "find_factor_exhaustive");
  return search_degree(f, d);
}

IrreducibilityVerdict irreducibility_verdict(const IntPoly& f) {
  require_monic(f, "is_irreducible");
  using M = IrreducibilityMethod;
  int n = f.degree();
  if (n == 1) return {true, M::Trivial};
  if (f.trailing() == 0) return {false, M::Trivial};
  if (integer_root(f)) return {false, M::RationalRoot};
  if (n <= 3) return {true, M::RationalRoot};
  bool any_prime = false;
  std::vector<char> cand = sieve_mask(f, any_prime);
  if (!any_prime) {
    // every sieve prime divides disc f; a repeated factor settles it
    auto parts = squarefree_decomposition(f);
    if (parts.size() != 1 || parts.front().multiplicity != 1) return {false, M::Trivial};
  }
  bool open = false;
  for (int d = 2; d <= n / 2; ++d) open = open || cand[d];
  if (!open) return {true, M::ModularSieve};
  for (int d = 2; d <= n / 2; ++d)
    if (cand[d] && search_degree(f, d)) return {false, M::ExhaustiveSearch};
  return {true, M::ExhaustiveSearch};
}

bool is_irreducible(const IntPoly& f) { return irreducibility_verdict(f).irreducible; }

Factorization factor_monic(const IntPoly& f) {
  require_monic(f, "factor_monic");
  std::vector<Factor> raw;
  int v = f.zero_root_multiplicity();
  if (v > 0) raw.push_back({IntPoly::monomial(1, 1), v});
  IntPoly rest = f.shift_down(v);
  if (rest.degree() >= 1) {
    for (auto& sq : squarefree_decomposition(rest)) {
      std::vector<IntPoly> work = {sq.part};
      while (!work.empty()) {
        IntPoly h = work.back();
        work.pop_back();
        if (h.degree() < 1) continue;
        auto g = smallest_factor(h);
        if (!g) {
          raw.push_back({h, sq.multiplicity});
          continue;
        }
        raw.push_back({*g, sq.multiplicity});
        work.push_back(exact_divide(h, *g));
      }
    }
  }
  std::sort(raw.begin(), raw.end(), [](const Factor& x, const Factor& y) { return canonical_less(x.poly, y.poly); });
  Factorization out;
  for (auto& fac : raw) {
    if (!out.factors.empty() && out.factors.back().poly == fac.poly)
      out.factors.back().multiplicity += fac.multiplicity;
    else
      out.factors.push_back(fac);
  }
  return out;
}

bool capelli_power_irreducible(const IntPoly& g, int k) {
  if (k < 1) throw ContractError("capelli_power_irreducible: k must be >= 1");
  require_monic(g, "capelli_power_irreducible");
  if (!is_irreducible(g)) throw ContractError("capelli_power_irreducible: g is reducible: " + g.to_string());
  mpz_class a = abs(g.trailing());
  if (a < 2) return false;
  return !is_perfect_power(a).has_value();
}

std::optional<FergusonStructure> ferguson_structure_check(const IntPoly& f, const RootConfig& cfg) {
  require_monic(f, "ferguson_structure_check");
  if (!is_irreducible(f)) throw ContractError("ferguson_structure_check: f is reducible: " + f.to_string());
  if (f.trailing() == 0) return FergusonStructure{f, 1};  // f = x
  ModulusProfile prof = modulus_profile(f, cfg);
  int k = prof.dominant_count();
  bool real_dominant;
  if (k % 2 == 1) {
    real_dominant = true;
  } else if (prof.classes.size() == 1) {
    real_dominant = real_root_count(f) > 0;
  } else {
    real_dominant = real_root_count(f) > real_roots_below_square(f, prof.classes.front().lo2);
  }
  if (!real_dominant) return std::nullopt;
  std::vector<mpz_class> g;
  for (int i = 0; i <= f.degree(); ++i) {
    if (i % k == 0) {
      g.push_back(f[i]);
    } else if (f[i] != 0) {
      throw InvariantViolation("ferguson_structure_check: " + f.to_string() + " has a real dominant root and k = " +
                               std::to_string(k) + " but is not a polynomial in x^k");
    }
  }
  return FergusonStructure{IntPoly(std::move(g)), k};
}

}  // namespace domroots
