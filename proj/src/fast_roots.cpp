#include "fast_roots.hpp"

#include <algorithm>
#include <cmath>

namespace domroots::fast {

namespace {

using cd = std::complex<double>;
using i128 = __int128;

constexpr double kU = 0x1p-53;
constexpr double kSafety = 1.0 + 1e-10;

inline double cabs(cd z) { return std::sqrt(z.real() * z.real() + z.imag() * z.imag()); }

// p(z) and sum |a_i| |z|^i for monic p
inline cd horner(const std::int64_t* a, int n, cd z, double& absval) {
  cd v = 1.0;
  double s = 1.0, az = cabs(z);
  for (int i = n - 1; i >= 0; --i) {
    v = v * z + static_cast<double>(a[i]);
    s = s * az + std::fabs(static_cast<double>(a[i]));
  }
  absval = s;
  return v;
}

inline cd horner_d(const std::int64_t* a, int n, cd z, cd& deriv) {
  cd v = 1.0, d = 0.0;
  for (int i = n - 1; i >= 0; --i) {
    d = d * z + v;
    v = v * z + static_cast<double>(a[i]);
  }
  deriv = d;
  return v;
}

bool aberth(const std::int64_t* a, int n, cd* z) {
  double r0 = std::pow(std::fabs(static_cast<double>(a[0])), 1.0 / n);
  for (int i = 0; i < n; ++i) z[i] = std::polar(r0, 6.283185307179586 * i / n + 0.7);
  bool conv[kMaxDegree] = {};
  int left = n;
  for (int it = 0; it < 80 && left > 0; ++it) {
    for (int i = 0; i < n; ++i) {
      if (conv[i]) continue;
      cd d;
      cd v = horner_d(a, n, z[i], d);
      cd s = 0.0;
      for (int j = 0; j < n; ++j)
        if (j != i) {
          cd w = z[i] - z[j];
          s += std::conj(w) / std::norm(w);
        }
      // v / (d - v s)
      cd den = d - v * s;
      double nd = std::norm(den);
      if (!(nd > 0)) return false;
      cd corr = v * std::conj(den) / nd;
      if (!std::isfinite(corr.real()) || !std::isfinite(corr.imag())) return false;
      z[i] -= corr;
      if (std::norm(corr) <= 1e-28 * std::norm(z[i])) {
        conv[i] = true;
        --left;
      }
    }
  }
  return left == 0;
}

i128 eval_exact(const std::int64_t* a, int n, std::int64_t m) {
  i128 v = 1;
  for (int i = n - 1; i >= 0; --i) v = v * m + a[i];
  return v;
}

bool divides_quadratic(const std::int64_t* a, int n, i128 b, i128 c) {
  i128 r[kMaxDegree + 1];
  for (int i = 0; i < n; ++i) r[i] = a[i];
  r[n] = 1;
  for (int i = n; i >= 2; --i) {
    i128 t = r[i];
    r[i - 1] -= t * b;
    r[i - 2] -= t * c;
  }
  return r[1] == 0 && r[0] == 0;
}

// integers m with |m - x| <= e
template <class F>
bool any_integer_in(double x, double e, F&& fn) {
  double lo = std::ceil(x - e), hi = std::floor(x + e);
  if (hi - lo > 4) return false;  // too wide to be useful; caller treats as failure
  for (double m = lo; m <= hi; m += 1.0)
    if (fn(static_cast<std::int64_t>(m))) return true;
  return false;
}

}  // namespace

Result classify(const std::int64_t* a, int n, bool want_factors) {
  Result out;
  if (n < 1 || n > kMaxDegree) return out;
  if (n == 1) {
    double r = std::fabs(static_cast<double>(a[0]));
    out = {true, 1, r, r, 1, true, true, 0};
    return out;
  }
  cd z[kMaxDegree];
  if (!aberth(a, n, z)) return out;

  double rho[kMaxDegree];
  for (int i = 0; i < n; ++i) {
    double absval;
    cd v = horner(a, n, z[i], absval);
    double num = cabs(v) + (8 * n + 8) * kU * absval;
    double den = 1.0;
    for (int j = 0; j < n; ++j)
      if (j != i) den *= cabs(z[i] - z[j]);
    den *= 1.0 - (4 * n + 4) * kU;
    if (!(den > 0)) return out;
    rho[i] = n * num / den * kSafety + 4 * kU * cabs(z[i]);
  }
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      if (cabs(z[i] - z[j]) * (1 - 1e-12) <= rho[i] + rho[j]) return out;

  // conjugate partner of each disk
  int partner[kMaxDegree];
  for (int i = 0; i < n; ++i) {
    int cnt = 0;
    cd c = std::conj(z[i]);
    for (int j = 0; j < n; ++j) {
      if (cabs(c - z[j]) * (1 - 1e-12) <= rho[i] + rho[j] + 1e-300) {
        partner[i] = j;
        ++cnt;
      }
    }
    if (cnt != 1) return out;
  }
  for (int i = 0; i < n; ++i)
    if (partner[partner[i]] != i) return out;

  struct Unit {
    double lo, hi;
    int count;
  };
  Unit units[kMaxDegree];
  int nu = 0;
  for (int i = 0; i < n; ++i) {
    int j = partner[i];
    if (j == i) {
      double x = std::fabs(z[i].real());
      units[nu++] = {std::max(0.0, x - rho[i]), x + rho[i], 1};
      ++out.real_roots;
    } else if (j > i) {
      double mi = cabs(z[i]), mj = cabs(z[j]);
      double lo = std::max(mi - rho[i], mj - rho[j]), hi = std::min(mi + rho[i], mj + rho[j]);
      if (lo > hi) return out;
      units[nu++] = {std::max(0.0, lo), hi, 2};
    }
  }
  std::sort(units, units + nu, [](const Unit& x, const Unit& y) { return x.hi > y.hi; });
  if (nu > 1) {
    double gap = units[0].lo - units[1].hi;
    double w = std::max(units[0].hi - units[0].lo, units[1].hi - units[1].lo);
    if (!(gap > 0) || gap <= kGapFactor * w) return out;
  }
  out.certified = true;
  out.k = units[0].count;
  out.top_lo = units[0].lo;
  out.top_hi = units[0].hi;

  if (!want_factors || n > 4) return out;

  // Integer roots lie in real disks; at most one integer per disk can be a root.
  int int_roots = 0;
  for (int i = 0; i < n; ++i) {
    if (partner[i] != i) continue;
    double x = z[i].real();
    if (std::ceil(x - rho[i]) + 4 < std::floor(x + rho[i])) return out;
    if (any_integer_in(x, rho[i], [&](std::int64_t m) { return eval_exact(a, n, m) == 0; })) ++int_roots;
  }
  out.factor_known = true;
  if (int_roots > 0) {
    out.irreducible = false;
    out.factor_mask |= 1u << 1;
    if (n == 4 && int_roots >= 2) out.factor_mask |= 1u << 2;
    return out;
  }
  if (n <= 3) {
    out.irreducible = true;
    return out;
  }
  // n == 4: a quadratic factor takes root 0 and exactly one partner j
  for (int j = 1; j < 4; ++j) {
    cd s = z[0] + z[j], p = z[0] * z[j];
    double es = (rho[0] + rho[j]) * kSafety + 8 * kU * (cabs(z[0]) + cabs(z[j]));
    double ep = (cabs(z[0]) * rho[j] + cabs(z[j]) * rho[0] + rho[0] * rho[j]) * kSafety +
                8 * kU * cabs(z[0]) * cabs(z[j]);
    if (std::fabs(s.imag()) > es || std::fabs(p.imag()) > ep) continue;
    if (std::floor(s.real() + es) - std::ceil(s.real() - es) > 4 ||
        std::floor(p.real() + ep) - std::ceil(p.real() - ep) > 4) {
      out.factor_known = false;
      return out;
    }
    bool hit = any_integer_in(s.real(), es, [&](std::int64_t S) {
      return any_integer_in(p.real(), ep, [&](std::int64_t P) { return divides_quadratic(a, n, -S, P); });
    });
    if (hit) {
      out.irreducible = false;
      out.factor_mask |= 1u << 2;
      return out;
    }
  }
  out.irreducible = true;
  return out;
}

}  // namespace domroots::fast
