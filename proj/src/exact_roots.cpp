#include "domroots/exact_roots.hpp"

#include <mpfr.h>

#include <algorithm>
#include <cmath>
#include <complex>
#include <numeric>
#include <optional>

#include "domroots/errors.hpp"
#include "domroots/poly_core.hpp"

namespace domroots {

namespace {

constexpr mpfr_rnd_t kRnd = MPFR_RNDN;

// Minimal MPFR complex number; precision follows the owning workspace.
struct Cx {
  mpfr_t r, i;
  explicit Cx(mpfr_prec_t p) {
    mpfr_init2(r, p);
    mpfr_init2(i, p);
    mpfr_set_zero(r, 1);
    mpfr_set_zero(i, 1);
  }
  Cx(const Cx& o) {
    mpfr_init2(r, mpfr_get_prec(o.r));
    mpfr_init2(i, mpfr_get_prec(o.i));
    mpfr_set(r, o.r, kRnd);
    mpfr_set(i, o.i, kRnd);
  }
  Cx& operator=(const Cx& o) {
    if (this != &o) {
      mpfr_set_prec(r, mpfr_get_prec(o.r));
      mpfr_set_prec(i, mpfr_get_prec(o.i));
      mpfr_set(r, o.r, kRnd);
      mpfr_set(i, o.i, kRnd);
    }
    return *this;
  }
  ~Cx() {
    mpfr_clear(r);
    mpfr_clear(i);
  }
  void round_to(mpfr_prec_t p) {
    mpfr_prec_round(r, p, kRnd);
    mpfr_prec_round(i, p, kRnd);
  }
};

struct Workspace {
  mpfr_prec_t prec;
  Cx t1, t2, t3, p, dp, w, s, one;
  mpfr_t n;
  explicit Workspace(mpfr_prec_t pr) : prec(pr), t1(pr), t2(pr), t3(pr), p(pr), dp(pr), w(pr), s(pr), one(pr) {
    mpfr_init2(n, pr);
    mpfr_set_ui(one.r, 1, kRnd);
  }
  ~Workspace() { mpfr_clear(n); }
  Workspace(const Workspace&) = delete;
  Workspace& operator=(const Workspace&) = delete;
};

// out = x * y; out must not alias x or y.
// Rounding here only affects the quality of the approximations; enclosures
// are certified exactly afterwards.
thread_local mpfr_t g_scratch;
thread_local mpfr_prec_t g_scratch_prec = 0;

mpfr_ptr scratch(mpfr_prec_t p) {
  if (g_scratch_prec == 0) {
    mpfr_init2(g_scratch, p);
    g_scratch_prec = p;
  } else if (g_scratch_prec != p) {
    mpfr_set_prec(g_scratch, p);
    g_scratch_prec = p;
  }
  return g_scratch;
}

void cmul(Cx& out, const Cx& x, const Cx& y) {
  mpfr_ptr t = scratch(mpfr_get_prec(out.r));
  mpfr_mul(out.r, x.r, y.r, kRnd);
  mpfr_mul(t, x.i, y.i, kRnd);
  mpfr_sub(out.r, out.r, t, kRnd);
  mpfr_mul(out.i, x.r, y.i, kRnd);
  mpfr_mul(t, x.i, y.r, kRnd);
  mpfr_add(out.i, out.i, t, kRnd);
}

// out = x / y; out must not alias x or y. Returns false when y == 0.
bool cdiv(Cx& out, const Cx& x, const Cx& y, mpfr_t den) {
  mpfr_ptr t = scratch(mpfr_get_prec(out.r));
  mpfr_sqr(den, y.r, kRnd);
  mpfr_sqr(t, y.i, kRnd);
  mpfr_add(den, den, t, kRnd);
  if (mpfr_zero_p(den)) return false;
  mpfr_mul(out.r, x.r, y.r, kRnd);
  mpfr_mul(t, x.i, y.i, kRnd);
  mpfr_add(out.r, out.r, t, kRnd);
  mpfr_mul(out.i, x.i, y.r, kRnd);
  mpfr_mul(t, x.r, y.i, kRnd);
  mpfr_sub(out.i, out.i, t, kRnd);
  mpfr_div(out.r, out.r, den, kRnd);
  mpfr_div(out.i, out.i, den, kRnd);
  return true;
}

void csub(Cx& out, const Cx& x, const Cx& y) {
  mpfr_sub(out.r, x.r, y.r, kRnd);
  mpfr_sub(out.i, x.i, y.i, kRnd);
}

void cswap(Cx& a, Cx& b) {
  mpfr_swap(a.r, b.r);
  mpfr_swap(a.i, b.i);
}

// Largest binary exponent among the components (very negative for zero).
long cexp(const Cx& z) {
  long e = -(1L << 40);
  if (!mpfr_zero_p(z.r)) e = std::max<long>(e, mpfr_get_exp(z.r));
  if (!mpfr_zero_p(z.i)) e = std::max<long>(e, mpfr_get_exp(z.i));
  return e;
}

// Double-precision Aberth iteration for starting values.
std::vector<std::complex<double>> double_seeds(const IntPoly& p) {
  const int d = p.degree();
  std::vector<double> a(static_cast<std::size_t>(d) + 1);
  bool finite = true;
  for (int k = 0; k <= d; ++k) {
    a[static_cast<std::size_t>(k)] = p[static_cast<std::size_t>(k)].get_d();
    if (!std::isfinite(a[static_cast<std::size_t>(k)])) finite = false;
  }
  double r0 = 1.0;
  if (finite && a[0] != 0) r0 = std::pow(std::abs(a[0] / a[static_cast<std::size_t>(d)]), 1.0 / d);
  if (!std::isfinite(r0) || r0 <= 0) r0 = 1.0;
  std::vector<std::complex<double>> z(static_cast<std::size_t>(d));
  for (int k = 0; k < d; ++k) z[static_cast<std::size_t>(k)] = std::polar(r0, 2 * M_PI * k / d + 0.7);
  if (!finite) return z;
  for (int it = 0; it < 200; ++it) {
    double worst = 0;
    for (int i = 0; i < d; ++i) {
      std::complex<double> zi = z[static_cast<std::size_t>(i)], pv = a[static_cast<std::size_t>(d)], dv = 0;
      for (int k = d - 1; k >= 0; --k) {
        dv = dv * zi + pv;
        pv = pv * zi + a[static_cast<std::size_t>(k)];
      }
      if (dv == 0.0) continue;
      std::complex<double> w = pv / dv, s = 0;
      for (int j = 0; j < d; ++j)
        if (j != i) s += 1.0 / (zi - z[static_cast<std::size_t>(j)]);
      std::complex<double> c = w / (1.0 - w * s);
      if (!std::isfinite(c.real()) || !std::isfinite(c.imag())) continue;
      z[static_cast<std::size_t>(i)] = zi - c;
      worst = std::max(worst, std::abs(c) / std::max(1.0, std::abs(zi)));
    }
    if (worst < 1e-15) break;
  }
  for (auto& v : z)
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) v = std::polar(r0, 0.3);
  return z;
}

mpq_class pow2q(long e) {
  mpq_class q = 1;
  if (e >= 0)
    mpz_mul_2exp(q.get_num_mpz_t(), q.get_num_mpz_t(), static_cast<mp_bitcnt_t>(e));
  else
    mpz_mul_2exp(q.get_den_mpz_t(), q.get_den_mpz_t(), static_cast<mp_bitcnt_t>(-e));
  return q;
}


// Disk |z - (X + iY) 2^-E| <= R 2^-E on the common scale E of one isolation.
struct Disk {
  mpz_class X, Y, R;
  std::size_t part;
  int multiplicity;
  // Index of the conjugate root's disk (itself when the root is real).
  std::size_t partner;
};

struct PartState {
  IntPoly poly;
  int multiplicity;
  std::vector<Cx> z;
};

// |P((X + iY) 2^-E)|^2 * 4^(E d), exactly.
mpz_class gauss_abs2(const IntPoly& p, const mpz_class& X, const mpz_class& Y, unsigned long E) {
  const int d = p.degree();
  mpz_class A = p.leading(), B = 0, nA, scale = 1;
  for (int k = d - 1; k >= 0; --k) {
    nA = A * X - B * Y;
    B = A * Y + B * X;
    mpz_mul_2exp(scale.get_mpz_t(), scale.get_mpz_t(), E);
    A = nA + p[static_cast<std::size_t>(k)] * scale;
  }
  return A * A + B * B;
}

mpz_class dist2(const mpz_class& ax, const mpz_class& ay, const mpz_class& bx, const mpz_class& by) {
  mpz_class dx = ax - bx, dy = ay - by;
  return dx * dx + dy * dy;
}

// One precision level of Aberth iteration on a square-free part.
void aberth_refine(PartState& st, mpfr_prec_t prec) {
  const int d = st.poly.degree();
  Workspace ws(prec);
  std::vector<Cx> coef;
  coef.reserve(static_cast<std::size_t>(d) + 1);
  for (int k = 0; k <= d; ++k) {
    coef.emplace_back(prec);
    mpfr_set_z(coef.back().r, st.poly[static_cast<std::size_t>(k)].get_mpz_t(), kRnd);
  }
  for (auto& v : st.z) v.round_to(prec);
  const int max_iter = 60 + 4 * d;
  for (int it = 0; it < max_iter; ++it) {
    bool converged = true;
    for (int i = 0; i < d; ++i) {
      Cx& zi = st.z[static_cast<std::size_t>(i)];
      mpfr_set(ws.p.r, coef[static_cast<std::size_t>(d)].r, kRnd);
      mpfr_set_zero(ws.p.i, 1);
      mpfr_set_zero(ws.dp.r, 1);
      mpfr_set_zero(ws.dp.i, 1);
      for (int k = d - 1; k >= 0; --k) {
        cmul(ws.t1, ws.dp, zi);
        mpfr_add(ws.dp.r, ws.t1.r, ws.p.r, kRnd);
        mpfr_add(ws.dp.i, ws.t1.i, ws.p.i, kRnd);
        cmul(ws.t1, ws.p, zi);
        mpfr_add(ws.p.r, ws.t1.r, coef[static_cast<std::size_t>(k)].r, kRnd);
        mpfr_set(ws.p.i, ws.t1.i, kRnd);
      }
      if (mpfr_zero_p(ws.p.r) && mpfr_zero_p(ws.p.i)) continue;
      if (!cdiv(ws.w, ws.p, ws.dp, ws.n)) {
        // Stationary point of P: nudge off it.
        mpfr_mul_2si(ws.t1.r, ws.one.r, cexp(zi) - prec / 2, kRnd);
        mpfr_add(zi.r, zi.r, ws.t1.r, kRnd);
        converged = false;
        continue;
      }
      mpfr_set_zero(ws.s.r, 1);
      mpfr_set_zero(ws.s.i, 1);
      bool clash = false;
      for (int j = 0; j < d; ++j) {
        if (j == i) continue;
        csub(ws.t1, zi, st.z[static_cast<std::size_t>(j)]);
        if (!cdiv(ws.t2, ws.one, ws.t1, ws.n)) {
          clash = true;
          break;
        }
        mpfr_add(ws.s.r, ws.s.r, ws.t2.r, kRnd);
        mpfr_add(ws.s.i, ws.s.i, ws.t2.i, kRnd);
      }
      if (clash) {
        mpfr_mul_2si(ws.t1.i, ws.one.r, cexp(zi) - prec / 3, kRnd);
        mpfr_add(zi.i, zi.i, ws.t1.i, kRnd);
        converged = false;
        continue;
      }
      cmul(ws.t1, ws.w, ws.s);
      csub(ws.t2, ws.one, ws.t1);
      if (!cdiv(ws.t3, ws.w, ws.t2, ws.n)) {
        converged = false;
        continue;
      }
      csub(ws.t1, zi, ws.t3);
      cswap(zi, ws.t1);
      long scale = std::max<long>(cexp(zi), 0);
      if (cexp(ws.t3) > scale - static_cast<long>(prec) + 6) converged = false;
    }
    if (converged) break;
  }
}

// Smith disks for one part: every root lies in the union of
// |z - z_i| <= d |P(z_i)| / |lc prod_{j != i} (z_i - z_j)|, and a component of
// m disks holds m roots. False when the disks do not resolve the part.
bool certify_part(const PartState& st, std::size_t part_index, unsigned long E, std::vector<Disk>& out) {
  const int d = st.poly.degree();
  const auto ud = static_cast<std::size_t>(d);
  std::vector<mpz_class> X(ud), Y(ud);
  mpfr_t t;
  mpfr_init2(t, mpfr_get_prec(st.z[0].r));
  for (std::size_t i = 0; i < ud; ++i) {
    mpfr_mul_2ui(t, st.z[i].r, E, kRnd);
    mpfr_get_z(X[i].get_mpz_t(), t, kRnd);
    mpfr_mul_2ui(t, st.z[i].i, E, kRnd);
    mpfr_get_z(Y[i].get_mpz_t(), t, kRnd);
  }
  mpfr_clear(t);
  const mpz_class lc2 = st.poly.leading() * st.poly.leading();
  std::vector<Disk> disks;
  mpz_class prod, q;
  for (std::size_t i = 0; i < ud; ++i) {
    mpz_class num = gauss_abs2(st.poly, X[i], Y[i], E);
    Disk disk{X[i], Y[i], 0, part_index, st.multiplicity, 0};
    if (num != 0) {
      prod = lc2;
      for (std::size_t j = 0; j < ud; ++j)
        if (j != i) prod *= dist2(X[i], Y[i], X[j], Y[j]);
      if (prod == 0) return false;
      // (r 2^E)^2 = d^2 num / (lc^2 prod dist^2)
      q = num * (d * d);
      mpz_cdiv_q(q.get_mpz_t(), q.get_mpz_t(), prod.get_mpz_t());
      disk.R = isqrt_ceil(q);
    }
    disks.push_back(std::move(disk));
  }
  // Conjugate structure: conj(D_i) must meet exactly one disk of this part.
  const std::size_t base = out.size();
  mpz_class rr;
  for (std::size_t i = 0; i < ud; ++i) {
    const auto& a = disks[i];
    int hits = 0;
    std::size_t who = 0;
    for (std::size_t j = 0; j < ud; ++j) {
      const auto& b = disks[j];
      rr = a.R + b.R;
      if (dist2(a.X, -a.Y, b.X, b.Y) <= rr * rr) {
        ++hits;
        who = j;
      }
    }
    if (hits != 1) return false;
    disks[i].partner = base + who;
  }
  for (std::size_t i = 0; i < ud; ++i)
    if (disks[disks[i].partner - base].partner != base + i) return false;
  for (auto& disk : disks) out.push_back(std::move(disk));
  return true;
}

struct Isolation {
  std::vector<Disk> disks;
  unsigned long E = 0;
};

class Isolator {
 public:
  Isolator(const IntPoly& f, const RootConfig& cfg) : f_(f), cfg_(cfg) {
    if (f.degree() < 1) throw DomainError("root isolation needs degree >= 1");
    for (const auto& sp : squarefree_decomposition(f)) {
      PartState st{sp.part, sp.multiplicity, {}};
      for (const auto& s : double_seeds(sp.part)) {
        st.z.emplace_back(64);
        mpfr_set_d(st.z.back().r, s.real(), kRnd);
        mpfr_set_d(st.z.back().i, s.imag(), kRnd);
      }
      parts_.push_back(std::move(st));
    }
  }

  // Certified disks with every radius <= target, starting at >= min_prec bits.
  Isolation run(const mpq_class& target, unsigned long min_prec) {
    unsigned long prec = std::max(std::max(prec_, min_prec), 64UL);
    while (true) {
      if (prec > cfg_.precision_ceiling)
        throw EscalationError("root isolation exceeded the precision ceiling of " +
                                  std::to_string(cfg_.precision_ceiling) + " bits",
                              f_.to_string());
      prec_ = prec;
      Isolation iso;
      iso.E = prec + 8;
      const bool raw = fresh_;
      if (attempt(prec, target, iso)) return iso;
      if (!raw) prec *= 2;
    }
  }

 private:
  bool attempt(unsigned long prec, const mpq_class& target, Isolation& iso) {
    auto& disks = iso.disks;
    // The first attempt certifies the double-precision seeds as they are.
    const bool raw = fresh_;
    fresh_ = false;
    if (raw) iso.E = 60;
    for (std::size_t p = 0; p < parts_.size(); ++p) {
      if (!raw) aberth_refine(parts_[p], static_cast<mpfr_prec_t>(prec));
      if (!certify_part(parts_[p], p, iso.E, disks)) return false;
    }
    // R 2^-E <= target
    mpz_class lim = target.get_num();
    mpz_mul_2exp(lim.get_mpz_t(), lim.get_mpz_t(), iso.E);
    for (const auto& d : disks)
      if (d.R * target.get_den() > lim) return false;
    mpz_class rr;
    for (std::size_t i = 0; i < disks.size(); ++i)
      for (std::size_t j = i + 1; j < disks.size(); ++j) {
        rr = disks[i].R + disks[j].R;
        if (dist2(disks[i].X, disks[i].Y, disks[j].X, disks[j].Y) <= rr * rr) return false;
      }
    return true;
  }

  IntPoly f_;
  RootConfig cfg_;
  std::vector<PartState> parts_;
  unsigned long prec_ = 64;
  bool fresh_ = true;
};

// A real root or a conjugate pair: roots known to share one modulus. The
// squared modulus lies in [lo2, hi2] * 4^-E.
struct IUnit {
  mpz_class lo2, hi2;
  int count;
};

// Same with rational endpoints.
struct Unit {
  mpq_class lo2, hi2;
  int count;
};

void disk_modulus2(const Disk& d, mpz_class& lo2, mpz_class& hi2) {
  mpz_class n2 = d.X * d.X + d.Y * d.Y;
  mpz_class u = isqrt_ceil(n2);
  mpz_class cross = 2 * d.R * u, r2 = d.R * d.R;
  lo2 = n2 - cross + r2;
  if (lo2 < 0) lo2 = 0;
  hi2 = n2 + cross + r2;
}

std::vector<IUnit> make_units(const Isolation& iso) {
  std::vector<IUnit> units;
  for (std::size_t i = 0; i < iso.disks.size(); ++i) {
    const Disk& d = iso.disks[i];
    if (d.partner == i) {
      // Real root in [X - R, X + R] 2^-E.
      mpz_class a = abs(d.X) - d.R, b = abs(d.X) + d.R;
      IUnit u{a < 0 ? mpz_class(0) : mpz_class(a * a), mpz_class(b * b), d.multiplicity};
      units.push_back(std::move(u));
    } else if (d.partner > i) {
      mpz_class lo_a, hi_a, lo_b, hi_b;
      disk_modulus2(d, lo_a, hi_a);
      disk_modulus2(iso.disks[d.partner], lo_b, hi_b);
      units.push_back({std::max(lo_a, lo_b), std::min(hi_a, hi_b), 2 * d.multiplicity});
    }
  }
  return units;
}

bool overlap(const IUnit& a, const IUnit& b) { return !(a.hi2 < b.lo2 || b.hi2 < a.lo2); }

// Groups units into classes, decreasing modulus. Without delta only identical
// point enclosures may merge; returns nullopt if any other overlap remains.
std::optional<std::vector<Unit>> cluster(const std::vector<IUnit>& units, unsigned long E, bool merge_overlaps) {
  const std::size_t m = units.size();
  std::vector<std::size_t> parent(m);
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = i + 1; j < m; ++j) {
      if (!overlap(units[i], units[j])) continue;
      const bool same_point = units[i].lo2 == units[i].hi2 && units[j].lo2 == units[j].hi2 &&
                              units[i].lo2 == units[j].lo2;
      if (!merge_overlaps && !same_point) return std::nullopt;
      parent[find(i)] = find(j);
    }
  std::vector<IUnit> merged;
  std::vector<std::size_t> slot(m, static_cast<std::size_t>(-1));
  for (std::size_t i = 0; i < m; ++i) {
    std::size_t r = find(i);
    if (slot[r] == static_cast<std::size_t>(-1)) {
      slot[r] = merged.size();
      merged.push_back(units[i]);
    } else {
      IUnit& c = merged[slot[r]];
      c.lo2 = std::max(c.lo2, units[i].lo2);
      c.hi2 = std::min(c.hi2, units[i].hi2);
      c.count += units[i].count;
    }
  }
  std::sort(merged.begin(), merged.end(), [](const IUnit& a, const IUnit& b) { return a.hi2 > b.hi2; });
  const mpq_class scale = pow2q(-2 * static_cast<long>(E));
  std::vector<Unit> classes;
  for (const auto& u : merged) classes.push_back({mpq_class(u.lo2) * scale, mpq_class(u.hi2) * scale, u.count});
  return classes;
}

void require_monic_nonzero(const IntPoly& f, const char* who) {
  if (f.degree() < 1) throw DomainError(std::string(who) + " needs degree >= 1");
  if (!f.is_monic()) throw ContractError(std::string(who) + " needs a monic polynomial: " + f.to_string());
  if (f.trailing() == 0) throw ContractError(std::string(who) + " needs f(0) != 0: " + f.to_string());
}

// p_1..p_count for the roots of monic f.
std::vector<mpz_class> power_sums(const IntPoly& f, int count) {
  const int n = f.degree();
  std::vector<mpz_class> p(static_cast<std::size_t>(count) + 1);
  for (int m = 1; m <= count; ++m) {
    mpz_class s = 0;
    if (m <= n) s = -mpz_class(m) * f[static_cast<std::size_t>(n - m)];
    for (int i = 1; i <= std::min(m - 1, n); ++i) s -= f[static_cast<std::size_t>(n - i)] * p[static_cast<std::size_t>(m - i)];
    p[static_cast<std::size_t>(m)] = s;
  }
  return p;
}

// Monic polynomial of degree D with the given power sums s_1..s_D.
IntPoly from_power_sums(const std::vector<mpz_class>& s, int D) {
  std::vector<mpz_class> e(static_cast<std::size_t>(D) + 1);
  e[0] = 1;
  for (int k = 1; k <= D; ++k) {
    mpz_class acc = 0;
    for (int i = 1; i <= k; ++i) {
      mpz_class t = e[static_cast<std::size_t>(k - i)] * s[static_cast<std::size_t>(i)];
      if (i & 1)
        acc += t;
      else
        acc -= t;
    }
    mpz_divexact_ui(acc.get_mpz_t(), acc.get_mpz_t(), static_cast<unsigned long>(k));
    e[static_cast<std::size_t>(k)] = acc;
  }
  std::vector<mpz_class> c(static_cast<std::size_t>(D) + 1);
  for (int k = 0; k <= D; ++k) c[static_cast<std::size_t>(D - k)] = (k & 1) ? -e[static_cast<std::size_t>(k)] : e[static_cast<std::size_t>(k)];
  return IntPoly(std::move(c));
}

mpz_class mpz_pow(const mpz_class& b, unsigned long e) {
  mpz_class r;
  mpz_pow_ui(r.get_mpz_t(), b.get_mpz_t(), e);
  return r;
}

// Number of fractional bits t with 2^-t <= q, q > 0.
unsigned long bits_below(const mpq_class& q) {
  long t = static_cast<long>(mpz_sizeinbase(q.get_den_mpz_t(), 2)) -
           static_cast<long>(mpz_sizeinbase(q.get_num_mpz_t(), 2)) + 1;
  if (t < 0) t = 0;
  while (pow2q(-t) > q) ++t;
  return static_cast<unsigned long>(t);
}

// Finalizes classes into a profile with modulus enclosures disjoint at some
// dyadic resolution.
void finish_profile(const std::vector<Unit>& classes, ModulusProfile& prof) {
  for (unsigned long bits = 64;; bits *= 2) {
    prof.classes.clear();
    bool ok = true;
    for (const auto& c : classes) {
      ModulusClass mc;
      mc.lo2 = c.lo2;
      mc.hi2 = c.hi2;
      mc.lo = sqrt_lower(c.lo2, bits);
      mc.hi = sqrt_upper(c.hi2, bits);
      mc.count = c.count;
      if (!prof.classes.empty() && !(mc.hi < prof.classes.back().lo)) ok = false;
      prof.classes.push_back(std::move(mc));
    }
    if (ok) return;
  }
}

// Dyadic bounds on q^(1/k), q >= 0.
mpq_class root_bound(const mpq_class& q, unsigned long k, unsigned long bits, bool upper) {
  mpz_class scaled = q.get_num();
  mpz_mul_2exp(scaled.get_mpz_t(), scaled.get_mpz_t(), k * bits);
  if (upper)
    mpz_cdiv_q(scaled.get_mpz_t(), scaled.get_mpz_t(), q.get_den_mpz_t());
  else
    mpz_fdiv_q(scaled.get_mpz_t(), scaled.get_mpz_t(), q.get_den_mpz_t());
  mpz_class r;
  const bool exact = mpz_root(r.get_mpz_t(), scaled.get_mpz_t(), k) != 0;
  if (upper && !exact) ++r;
  mpq_class out(r);
  out *= pow2q(-static_cast<long>(bits));
  return out;
}

}  // namespace

mpq_class sqrt_upper(const mpq_class& q, unsigned long bits) {
  if (q < 0) throw DomainError("sqrt of a negative rational");
  mpz_class scaled = q.get_num();
  mpz_mul_2exp(scaled.get_mpz_t(), scaled.get_mpz_t(), 2 * bits);
  mpz_cdiv_q(scaled.get_mpz_t(), scaled.get_mpz_t(), q.get_den_mpz_t());
  mpq_class r(isqrt_ceil(scaled));
  r *= pow2q(-static_cast<long>(bits));
  return r;
}

mpq_class sqrt_lower(const mpq_class& q, unsigned long bits) {
  if (q < 0) throw DomainError("sqrt of a negative rational");
  mpz_class scaled = q.get_num();
  mpz_mul_2exp(scaled.get_mpz_t(), scaled.get_mpz_t(), 2 * bits);
  mpz_fdiv_q(scaled.get_mpz_t(), scaled.get_mpz_t(), q.get_den_mpz_t());
  mpz_sqrt(scaled.get_mpz_t(), scaled.get_mpz_t());
  mpq_class r(scaled);
  r *= pow2q(-static_cast<long>(bits));
  return r;
}

std::string dyadic_to_decimal(const mpq_class& q) {
  const mpz_class& den = q.get_den();
  const unsigned long e = mpz_scan1(den.get_mpz_t(), 0);
  if (den != mpz_class(mpz_class(1) << e))
    throw ContractError("not a dyadic rational: " + q.get_str());
  // num / 2^e = num * 5^e / 10^e
  mpz_class scaled = abs(q.get_num()) * mpz_pow(5, e);
  std::string digits = scaled.get_str();
  std::string out;
  if (q < 0) out = "-";
  if (e == 0) return out + digits;
  if (digits.size() <= e) digits = std::string(e - digits.size() + 1, '0') + digits;
  out += digits.substr(0, digits.size() - e) + "." + digits.substr(digits.size() - e);
  return out;
}

std::vector<RootEnclosure> approx_roots(const IntPoly& f, const mpq_class& target_radius, const RootConfig& cfg) {
  if (f.is_zero()) throw DomainError("approx_roots of the zero polynomial");
  if (target_radius <= 0) throw ContractError("approx_roots needs a positive target radius");
  Isolator iso(f, cfg);
  unsigned long start = bits_below(target_radius) + 32;
  Isolation res = iso.run(target_radius, start);
  std::vector<RootEnclosure> out;
  for (std::size_t i = 0; i < res.disks.size(); ++i) {
    const Disk& d = res.disks[i];
    const mpq_class scale = pow2q(-static_cast<long>(res.E));
    out.push_back({mpq_class(d.X) * scale, mpq_class(d.Y) * scale, mpq_class(d.R) * scale, d.multiplicity,
                   d.partner == i});
  }
  return out;
}

IntPoly composed_modulus_poly(const IntPoly& f) {
  require_monic_nonzero(f, "composed_modulus_poly");
  const int n = f.degree();
  const int D = n * n;
  auto p = power_sums(f, D);
  std::vector<mpz_class> s(static_cast<std::size_t>(D) + 1);
  for (int m = 1; m <= D; ++m) s[static_cast<std::size_t>(m)] = p[static_cast<std::size_t>(m)] * p[static_cast<std::size_t>(m)];
  return from_power_sums(s, D);
}

IntPoly symmetric_square_poly(const IntPoly& f) {
  require_monic_nonzero(f, "symmetric_square_poly");
  const int n = f.degree();
  const int D = n * (n + 1) / 2;
  auto p = power_sums(f, 2 * D);
  std::vector<mpz_class> s(static_cast<std::size_t>(D) + 1);
  for (int m = 1; m <= D; ++m) {
    mpz_class v = p[static_cast<std::size_t>(m)] * p[static_cast<std::size_t>(m)] + p[static_cast<std::size_t>(2 * m)];
    mpz_divexact_ui(v.get_mpz_t(), v.get_mpz_t(), 2);
    s[static_cast<std::size_t>(m)] = v;
  }
  return from_power_sums(s, D);
}

mpq_class modulus_separation_bound(const IntPoly& f) {
  require_monic_nonzero(f, "modulus_separation_bound");
  IntPoly P = squarefree_reduction(symmetric_square_poly(squarefree_reduction(f)));
  const int d = P.degree();
  if (d <= 1) return 1;
  // sep(P) >= sqrt(3 |disc P|) d^(-(d+2)/2) M(P)^(-(d-1)), with the integer
  // upper bound M(P) <= ceil(sqrt(d+1) H(P)); halved for strictness.
  mpz_class disc = abs(discriminant(P));
  mpz_class num;
  mpz_class t = 3 * disc;
  mpz_sqrt(num.get_mpz_t(), t.get_mpz_t());
  const mpz_class h = height(P);
  mpz_class mbar = isqrt_ceil(mpz_class(d + 1) * h * h);
  mpz_class den = isqrt_ceil(mpz_pow(d, static_cast<unsigned long>(d + 2))) * mpz_pow(mbar, static_cast<unsigned long>(d - 1)) * 2;
  mpq_class delta(num, den);
  delta.canonicalize();
  return delta;
}

ModulusProfile modulus_profile(const IntPoly& f, const RootConfig& cfg) {
  if (f.degree() < 1) throw DomainError("modulus_profile needs degree >= 1");
  if (!f.is_monic()) throw ContractError("modulus_profile needs a monic polynomial: " + f.to_string());
  ModulusProfile prof;
  prof.degree = f.degree();
  prof.zero_count = f.zero_root_multiplicity();
  IntPoly g = f.shift_down(prof.zero_count);
  if (g.degree() < 1) return prof;

  if (cfg.use_power_reduction) {
    int k0 = 0;
    for (int i = 1; i <= g.degree(); ++i)
      if (g[static_cast<std::size_t>(i)] != 0) k0 = std::gcd(k0, i);
    if (k0 > 1) {
      std::vector<mpz_class> hc(static_cast<std::size_t>(g.degree() / k0) + 1);
      for (int i = 0; i <= g.degree(); i += k0) hc[static_cast<std::size_t>(i / k0)] = g[static_cast<std::size_t>(i)];
      // Roots of g are the k0-th roots of the roots of h; moduli map monotonically.
      const ModulusProfile ph = modulus_profile(IntPoly(std::move(hc)), cfg);
      const auto k = static_cast<unsigned long>(k0);
      for (unsigned long bits = 64;; bits *= 2) {
        std::vector<Unit> classes;
        bool ok = true;
        for (const auto& c : ph.classes) {
          classes.push_back({root_bound(c.lo2, k, bits, false), root_bound(c.hi2, k, bits, true), c.count * k0});
          if (classes.size() > 1 && !(classes.back().hi2 < classes[classes.size() - 2].lo2)) ok = false;
        }
        if (ok) {
          finish_profile(classes, prof);
          return prof;
        }
      }
    }
  }

  Isolator iso(g, cfg);
  // Rungs: moderate precision, then tighter disks, then delta-driven merging.
  for (unsigned long bits : {10UL, 60UL}) {
    Isolation res = iso.run(pow2q(-static_cast<long>(bits)), 64);
    auto classes = cluster(make_units(res), res.E, false);
    if (classes) {
      finish_profile(*classes, prof);
      return prof;
    }
  }
  const mpq_class delta = modulus_separation_bound(g);
  mpz_class cauchy = height(g) + 1;
  unsigned long t = bits_below(delta / (16 * (cauchy + 1)));
  while (true) {
    Isolation res = iso.run(pow2q(-static_cast<long>(t)), t + 16);
    auto units = make_units(res);
    // (hi2 - lo2) 4^-E < delta / 4
    mpz_class lim = delta.get_num();
    mpz_mul_2exp(lim.get_mpz_t(), lim.get_mpz_t(), 2 * res.E);
    bool narrow = true;
    for (const auto& u : units)
      if (!(4 * (u.hi2 - u.lo2) * delta.get_den() < lim)) narrow = false;
    if (narrow) {
      finish_profile(*cluster(units, res.E, true), prof);
      return prof;
    }
    t += 16;
  }
}

int dominant_root_count(const IntPoly& f, const RootConfig& cfg) { return modulus_profile(f, cfg).dominant_count(); }

const char* to_string(Ordering o) {
  switch (o) {
    case Ordering::Less:
      return "Less";
    case Ordering::Equal:
      return "Equal";
    case Ordering::Greater:
      return "Greater";
  }
  return "?";
}

Ordering house_compare(const IntPoly& f, const mpq_class& c2, const RootConfig& cfg) {
  require_monic_nonzero(f, "house_compare");
  if (c2 <= 0) throw ContractError("house_compare needs c2 > 0");
  Isolator iso(f, cfg);
  std::optional<bool> is_root;
  std::optional<mpq_class> delta;
  for (unsigned long t = 10;; t *= 2) {
    Isolation res = iso.run(pow2q(-static_cast<long>(t)), 64);
    auto units = make_units(res);
    // r(f)^2 lies in [max lo2, max hi2] 4^-E.
    mpz_class ilo = units.front().lo2, ihi = units.front().hi2;
    for (const auto& u : units) {
      ilo = std::max(ilo, u.lo2);
      ihi = std::max(ihi, u.hi2);
    }
    const mpq_class scale = pow2q(-2 * static_cast<long>(res.E));
    const mpq_class lo = mpq_class(ilo) * scale, hi = mpq_class(ihi) * scale;
    if (c2 < lo) return Ordering::Greater;
    if (c2 > hi) return Ordering::Less;
    if (!is_root) is_root = sign_at(symmetric_square_poly(squarefree_reduction(f)), c2) == 0;
    if (*is_root) {
      if (!delta) delta = modulus_separation_bound(f);
      if (hi - lo < *delta / 4) return Ordering::Equal;
    }
  }
}

std::string ModulusProfile::to_json() const {
  std::string out = "{\"degree\": " + std::to_string(degree) + ", \"zero_count\": " + std::to_string(zero_count) +
                    ", \"k\": " + std::to_string(dominant_count()) + ", \"classes\": [";
  for (std::size_t i = 0; i < classes.size(); ++i) {
    if (i) out += ", ";
    out += "{\"count\": " + std::to_string(classes[i].count) + ", \"modulus_lo\": \"" +
           dyadic_to_decimal(classes[i].lo) + "\", \"modulus_hi\": \"" + dyadic_to_decimal(classes[i].hi) + "\"}";
  }
  return out + "]}";
}

}  // namespace domroots
