#include "domroots/poly_core.hpp"

#include <algorithm>
#include <cstdint>

#include "domroots/errors.hpp"

namespace domroots {

mpz_class height(const IntPoly& f) {
  if (f.is_zero()) throw DomainError("height of the zero polynomial is undefined");
  mpz_class h = 0;
  for (const auto& c : f.coeffs())
    if (abs(c) > h) h = abs(c);
  return h;
}

MahlerBounds mahler_bounds(const IntPoly& f) {
  if (f.is_zero()) throw DomainError("Mahler bounds of the zero polynomial");
  if (f.degree() < 1) throw DomainError("Mahler bounds need degree >= 1");
  const int n = f.degree();
  const mpz_class h = height(f);
  MahlerBounds b;
  mpz_class two_n;
  mpz_ui_pow_ui(two_n.get_mpz_t(), 2, static_cast<unsigned long>(n));
  b.lower = mpq_class(h, two_n);
  b.lower.canonicalize();
  // ceil(sqrt((n+1) * 2^128)) / 2^64 >= sqrt(n+1)
  mpz_class scaled = mpz_class(n + 1) << 128;
  mpz_class root = isqrt_ceil(scaled);
  mpz_class denom = mpz_class(1) << 64;
  b.upper = mpq_class(root * h, denom);
  b.upper.canonicalize();
  return b;
}

IntPoly compose_power(const IntPoly& g, int k) {
  if (g.is_zero()) throw DomainError("compose_power of the zero polynomial");
  if (k < 1) throw DomainError("compose_power needs k >= 1");
  if (k == 1) return g;
  std::vector<mpz_class> c(static_cast<std::size_t>(g.degree() * k) + 1);
  for (int i = 0; i <= g.degree(); ++i) c[static_cast<std::size_t>(i * k)] = g[static_cast<std::size_t>(i)];
  return IntPoly(std::move(c));
}

mpz_class content(const IntPoly& f) {
  mpz_class g = 0;
  for (const auto& c : f.coeffs()) {
    mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), c.get_mpz_t());
    if (g == 1) break;
  }
  return g;
}

IntPoly primitive_part(const IntPoly& f) {
  if (f.is_zero()) return f;
  mpz_class c = content(f);
  if (f.leading() < 0) c = -c;
  if (c == 1) return f;
  std::vector<mpz_class> v = f.coeffs();
  for (auto& x : v) mpz_divexact(x.get_mpz_t(), x.get_mpz_t(), c.get_mpz_t());
  return IntPoly(std::move(v));
}

IntPoly pseudo_remainder(const IntPoly& a, const IntPoly& b) {
  if (b.is_zero()) throw DomainError("pseudo-remainder by zero");
  if (a.degree() < b.degree()) return a;
  const int db = b.degree();
  std::vector<mpz_class> r = a.coeffs();
  const mpz_class& lb = b.leading();
  // One multiplication by lc(b) per step gives lc(b)^(deg a - deg b + 1).
  for (int dr = a.degree(); dr >= db; --dr) {
    mpz_class lr = r[static_cast<std::size_t>(dr)];
    for (auto& x : r) x *= lb;
    if (lr != 0) {
      for (int i = 0; i <= db; ++i) r[static_cast<std::size_t>(dr - db + i)] -= lr * b[static_cast<std::size_t>(i)];
    }
    r[static_cast<std::size_t>(dr)] = 0;
  }
  return IntPoly(std::move(r));
}

bool try_exact_divide(const IntPoly& a, const IntPoly& b, IntPoly& quotient) {
  if (b.is_zero()) throw DomainError("division by the zero polynomial");
  if (a.is_zero()) {
    quotient = IntPoly();
    return true;
  }
  if (a.degree() < b.degree()) return false;
  const int db = b.degree();
  std::vector<mpz_class> r = a.coeffs();
  std::vector<mpz_class> q(static_cast<std::size_t>(a.degree() - db) + 1);
  const mpz_class& lb = b.leading();
  const bool unit = (lb == 1);
  mpz_class c;
  for (int dr = a.degree(); dr >= db; --dr) {
    const mpz_class& lr = r[static_cast<std::size_t>(dr)];
    if (lr == 0) continue;
    if (unit) {
      c = lr;
    } else {
      if (!mpz_divisible_p(lr.get_mpz_t(), lb.get_mpz_t())) return false;
      mpz_divexact(c.get_mpz_t(), lr.get_mpz_t(), lb.get_mpz_t());
    }
    q[static_cast<std::size_t>(dr - db)] = c;
    for (int i = 0; i <= db; ++i) r[static_cast<std::size_t>(dr - db + i)] -= c * b[static_cast<std::size_t>(i)];
  }
  for (int i = 0; i < db; ++i)
    if (r[static_cast<std::size_t>(i)] != 0) return false;
  quotient = IntPoly(std::move(q));
  return true;
}

IntPoly exact_divide(const IntPoly& a, const IntPoly& b) {
  IntPoly q;
  if (!try_exact_divide(a, b, q))
    throw ContractError("exact_divide: " + b.to_string() + " does not divide " + a.to_string());
  return q;
}

IntPoly poly_gcd(const IntPoly& a, const IntPoly& b) {
  if (a.is_zero() && b.is_zero()) return {};
  if (a.is_zero()) return primitive_part(b) * content(b);
  if (b.is_zero()) return primitive_part(a) * content(a);
  mpz_class cg;
  mpz_gcd(cg.get_mpz_t(), content(a).get_mpz_t(), content(b).get_mpz_t());
  IntPoly x = primitive_part(a), y = primitive_part(b);
  if (x.degree() < y.degree()) std::swap(x, y);
  while (!y.is_zero()) {
    if (y.degree() == 0) {
      x = IntPoly{1};
      break;
    }
    IntPoly r = primitive_part(pseudo_remainder(x, y));
    x = std::move(y);
    y = std::move(r);
  }
  return x * cg;
}

namespace {

mpz_class ipow(const mpz_class& b, unsigned long e) {
  mpz_class r;
  mpz_pow_ui(r.get_mpz_t(), b.get_mpz_t(), e);
  return r;
}

IntPoly divide_scalar(const IntPoly& p, const mpz_class& s) {
  std::vector<mpz_class> v = p.coeffs();
  for (auto& x : v) mpz_divexact(x.get_mpz_t(), x.get_mpz_t(), s.get_mpz_t());
  return IntPoly(std::move(v));
}

}  // namespace

mpz_class resultant(const IntPoly& f, const IntPoly& g) {
  if (f.is_zero() || g.is_zero()) return 0;
  if (f.degree() == 0 && g.degree() == 0) return 1;
  if (f.degree() == 0) return ipow(f.leading(), static_cast<unsigned long>(g.degree()));
  if (g.degree() == 0) return ipow(g.leading(), static_cast<unsigned long>(f.degree()));

  IntPoly A = f, B = g;
  int s = 1;
  if (A.degree() < B.degree()) {
    std::swap(A, B);
    if ((A.degree() & 1) && (B.degree() & 1)) s = -s;
  }
  mpz_class a = content(A), b = content(B);
  A = divide_scalar(A, a);
  B = divide_scalar(B, b);
  mpz_class t = ipow(a, static_cast<unsigned long>(B.degree())) * ipow(b, static_cast<unsigned long>(A.degree()));
  mpz_class gg = 1, h = 1;
  while (true) {
    const int delta = A.degree() - B.degree();
    if ((A.degree() & 1) && (B.degree() & 1)) s = -s;
    IntPoly R = pseudo_remainder(A, B);
    A = std::move(B);
    if (R.is_zero()) return 0;
    B = divide_scalar(R, gg * ipow(h, static_cast<unsigned long>(delta)));
    gg = A.leading();
    if (delta == 1) {
      h = gg;
    } else if (delta > 1) {
      mpz_class num = ipow(gg, static_cast<unsigned long>(delta));
      mpz_class den = ipow(h, static_cast<unsigned long>(delta - 1));
      mpz_divexact(h.get_mpz_t(), num.get_mpz_t(), den.get_mpz_t());
    }
    if (B.degree() == 0) break;
  }
  const int da = A.degree();
  mpz_class num = ipow(B.leading(), static_cast<unsigned long>(da));
  mpz_class den = ipow(h, static_cast<unsigned long>(da - 1));
  mpz_divexact(h.get_mpz_t(), num.get_mpz_t(), den.get_mpz_t());
  return s * t * h;
}

mpz_class discriminant(const IntPoly& f) {
  if (f.degree() < 1) throw DomainError("discriminant needs degree >= 1");
  const int n = f.degree();
  mpz_class r = resultant(f, f.derivative());
  mpz_divexact(r.get_mpz_t(), r.get_mpz_t(), f.leading().get_mpz_t());
  if (((n * (n - 1)) / 2) & 1) r = -r;
  return r;
}

namespace {

// True when gcd(f, f') is a unit modulo a large prime not dividing n lc(f);
// then f is square-free over Z.
bool squarefree_mod_p(const IntPoly& f) {
  constexpr std::uint64_t p = 2147483647ULL;
  const int n = f.degree();
  auto red = [](const mpz_class& v) {
    return static_cast<std::uint64_t>(mpz_fdiv_ui(v.get_mpz_t(), p));
  };
  if (red(f.leading() * n) == 0) return false;
  auto mulmod = [](std::uint64_t a, std::uint64_t b) { return a * b % p; };
  auto inv = [&](std::uint64_t a) {
    std::uint64_t r = 1, e = p - 2;
    while (e) {
      if (e & 1) r = mulmod(r, a);
      a = mulmod(a, a);
      e >>= 1;
    }
    return r;
  };
  std::vector<std::uint64_t> a(static_cast<std::size_t>(n) + 1), b(static_cast<std::size_t>(n));
  for (int i = 0; i <= n; ++i) a[static_cast<std::size_t>(i)] = red(f[static_cast<std::size_t>(i)]);
  for (int i = 1; i <= n; ++i) b[static_cast<std::size_t>(i - 1)] = red(f[static_cast<std::size_t>(i)] * i);
  auto trim = [](std::vector<std::uint64_t>& v) {
    while (!v.empty() && v.back() == 0) v.pop_back();
  };
  trim(a);
  trim(b);
  while (!b.empty()) {
    if (b.size() == 1) return true;
    const std::uint64_t ib = inv(b.back());
    while (a.size() >= b.size()) {
      const std::uint64_t c = mulmod(a.back(), ib);
      const std::size_t sh = a.size() - b.size();
      for (std::size_t i = 0; i < b.size(); ++i) a[sh + i] = (a[sh + i] + p - mulmod(c, b[i])) % p;
      trim(a);
    }
    std::swap(a, b);
  }
  return a.size() == 1;
}

}  // namespace

std::vector<SquareFreePart> squarefree_decomposition(const IntPoly& f) {
  if (f.is_zero() || f.degree() < 1) throw DomainError("square-free decomposition needs degree >= 1");
  IntPoly p = primitive_part(f);
  std::vector<SquareFreePart> out;
  if (squarefree_mod_p(p)) {
    out.push_back({p, 1});
    return out;
  }
  IntPoly dp = p.derivative();
  IntPoly a0 = poly_gcd(p, dp);
  IntPoly b = exact_divide(p, a0);
  IntPoly c = exact_divide(dp, a0);
  IntPoly d = c - b.derivative();
  int i = 1;
  while (b.degree() > 0) {
    IntPoly a = poly_gcd(b, d);
    if (a.degree() > 0) out.push_back({primitive_part(a), i});
    IntPoly nb = exact_divide(b, a);
    c = exact_divide(d, a);
    b = std::move(nb);
    d = c - b.derivative();
    ++i;
  }
  return out;
}

IntPoly squarefree_reduction(const IntPoly& f) {
  IntPoly p = primitive_part(f);
  if (p.degree() < 1) return p;
  return primitive_part(exact_divide(p, poly_gcd(p, p.derivative())));
}

int sign_of_quadratic(const mpz_class& u, const mpz_class& v, const mpz_class& d) {
  const int su = sgn(u), sv = sgn(v);
  if (d == 0 || sv == 0) return su;
  if (su == 0) return sv;
  if (su == sv) return su;
  const int cmp_val = cmp(u * u, v * v * d);
  if (cmp_val > 0) return su;
  if (cmp_val < 0) return sv;
  return 0;
}

SturmChain::SturmChain(const IntPoly& f) {
  if (f.degree() < 0) throw DomainError("Sturm chain of the zero polynomial");
  chain_.push_back(primitive_part(f));
  if (f.degree() == 0) return;
  chain_.push_back(primitive_part(f.derivative()));
  while (chain_.back().degree() > 0) {
    const IntPoly& a = chain_[chain_.size() - 2];
    const IntPoly& b = chain_.back();
    IntPoly r = pseudo_remainder(a, b);
    if (r.is_zero()) break;
    const int e = a.degree() - b.degree() + 1;
    const bool multiplier_negative = b.leading() < 0 && (e & 1);
    if (!multiplier_negative) r = -r;
    // Dividing by the positive content keeps all signs.
    mpz_class c = content(r);
    chain_.push_back(divide_scalar(r, c));
  }
}

namespace {

int count_changes(const std::vector<int>& signs) {
  int changes = 0, last = 0;
  for (int s : signs) {
    if (s == 0) continue;
    if (last != 0 && s != last) ++changes;
    last = s;
  }
  return changes;
}

int sign_at_rational(const IntPoly& p, const mpq_class& x) {
  const mpz_class& num = x.get_num();
  const mpz_class& den = x.get_den();
  // sum c_i num^i den^(d-i)
  mpz_class acc = 0, den_pow = 1;
  const int d = p.degree();
  std::vector<mpz_class> num_pow(static_cast<std::size_t>(d) + 1);
  num_pow[0] = 1;
  for (int i = 1; i <= d; ++i) num_pow[static_cast<std::size_t>(i)] = num_pow[static_cast<std::size_t>(i - 1)] * num;
  for (int i = d; i >= 0; --i) {
    acc += p[static_cast<std::size_t>(i)] * num_pow[static_cast<std::size_t>(i)] * den_pow;
    den_pow *= den;
  }
  return sgn(acc);
}

}  // namespace

int sign_at(const IntPoly& f, const mpq_class& x) { return sign_at_rational(f, x); }

int SturmChain::sign_changes(const mpq_class& x) const {
  std::vector<int> signs;
  signs.reserve(chain_.size());
  for (const auto& p : chain_) signs.push_back(sign_at_rational(p, x));
  return count_changes(signs);
}

int SturmChain::sign_changes_sqrt(const mpq_class& r, const mpz_class& d) const {
  std::vector<int> signs;
  const mpz_class& p = r.get_num();
  const mpz_class& q = r.get_den();
  for (const auto& poly : chain_) {
    const int deg = poly.degree();
    mpz_class u = 0, v = 0;
    mpz_class p_pow = 1;
    for (int i = 0; i <= deg; ++i) {
      mpz_class term = poly[static_cast<std::size_t>(i)] * p_pow * ipow(q, static_cast<unsigned long>(deg - i)) *
                       ipow(d, static_cast<unsigned long>(i / 2));
      if (i & 1)
        v += term;
      else
        u += term;
      p_pow *= p;
    }
    signs.push_back(sign_of_quadratic(u, v, d));
  }
  return count_changes(signs);
}

int SturmChain::sign_changes_at_infinity(bool positive) const {
  std::vector<int> signs;
  for (const auto& p : chain_) {
    int s = sgn(p.leading());
    if (!positive && (p.degree() & 1)) s = -s;
    signs.push_back(s);
  }
  return count_changes(signs);
}

namespace {

void require_squarefree(const IntPoly& f) {
  if (f.degree() < 1) return;
  if (poly_gcd(f, f.derivative()).degree() > 0)
    throw ContractError("Sturm counting requires a square-free polynomial: " + f.to_string());
}

// Removes the factor (den x - num) when x is a root; returns whether it was.
bool strip_rational_root(IntPoly& f, const mpq_class& x) {
  if (sign_at_rational(f, x) != 0) return false;
  IntPoly lin(std::vector<mpz_class>{-x.get_num(), x.get_den()});
  f = exact_divide(primitive_part(f), lin);
  return true;
}

}  // namespace

std::size_t sturm_count(const IntPoly& f, const mpq_class& a, const mpq_class& b) {
  if (f.is_zero()) throw DomainError("sturm_count of the zero polynomial");
  if (!(a < b)) throw ContractError("sturm_count needs a < b");
  require_squarefree(f);
  IntPoly g = primitive_part(f);
  std::size_t extra = 0;
  if (g.degree() >= 1 && strip_rational_root(g, b)) extra = 1;
  if (g.degree() >= 1) strip_rational_root(g, a);
  if (g.degree() < 1) return extra;
  SturmChain chain(g);
  return static_cast<std::size_t>(chain.sign_changes(a) - chain.sign_changes(b)) + extra;
}

std::size_t real_root_count(const IntPoly& f) {
  if (f.is_zero()) throw DomainError("real_root_count of the zero polynomial");
  require_squarefree(f);
  if (f.degree() < 1) return 0;
  SturmChain chain(f);
  return static_cast<std::size_t>(chain.sign_changes_at_infinity(false) - chain.sign_changes_at_infinity(true));
}

std::size_t real_roots_below_square(const IntPoly& f, const mpq_class& c2) {
  if (f.is_zero()) throw DomainError("real_roots_below_square of the zero polynomial");
  if (c2 <= 0) throw ContractError("real_roots_below_square needs c2 > 0");
  require_squarefree(f);
  IntPoly g = primitive_part(f);
  if (g.degree() < 1) return 0;
  // Roots at +-sqrt(c2) are excluded by dividing out gcd(f, Q x^2 - P).
  IntPoly boundary(std::vector<mpz_class>{-c2.get_num(), 0, c2.get_den()});
  IntPoly common = poly_gcd(g, boundary);
  if (common.degree() > 0) g = exact_divide(g, primitive_part(common));
  if (g.degree() < 1) return 0;
  SturmChain chain(g);
  const mpz_class d = c2.get_num() * c2.get_den();
  const mpq_class r(1, c2.get_den());
  return static_cast<std::size_t>(chain.sign_changes_sqrt(-r, d) - chain.sign_changes_sqrt(r, d));
}

mpz_class isqrt_ceil(const mpz_class& a) {
  if (a < 0) throw DomainError("isqrt of a negative number");
  mpz_class s;
  mpz_sqrt(s.get_mpz_t(), a.get_mpz_t());
  if (s * s < a) ++s;
  return s;
}

mpz_class binomial(unsigned n, unsigned k) {
  mpz_class r;
  mpz_bin_uiui(r.get_mpz_t(), n, k);
  return r;
}

}  // namespace domroots
