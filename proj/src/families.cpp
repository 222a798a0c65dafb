#include "domroots/families.hpp"

#include <set>
#include <sstream>

#include "domroots/census.hpp"
#include "domroots/errors.hpp"
#include "domroots/factor_int.hpp"
#include "domroots/poly_core.hpp"

namespace domroots {

namespace {

struct StopStream {};

// odometer over prod [-b_i, b_i]; fn returns false to stop
template <class F>
void for_each_box(const std::vector<mpz_class>& bounds, F&& fn) {
  std::vector<mpz_class> a(bounds.size());
  for (std::size_t i = 0; i < a.size(); ++i) a[i] = -bounds[i];
  while (true) {
    if (!fn(a)) return;
    std::size_t i = 0;
    while (i < a.size() && a[i] == bounds[i]) {
      a[i] = -bounds[i];
      ++i;
    }
    if (i == a.size()) return;
    ++a[i];
  }
}

IntPoly monic_from(const std::vector<mpz_class>& low) {
  std::vector<mpz_class> c = low;
  c.emplace_back(1);
  return IntPoly(std::move(c));
}

mpz_class ipow(const mpz_class& b, unsigned long e) {
  mpz_class r;
  mpz_pow_ui(r.get_mpz_t(), b.get_mpz_t(), e);
  return r;
}

class Emitter {
 public:
  Emitter(FamilyName name, int n, int k, long H, const MemberSink& sink, std::uint64_t limit, const RootConfig& cfg)
      : name_(name), n_(n), k_(k), H_(H), sink_(sink), limit_(limit), cfg_(cfg) {}

  void emit(IntPoly f, Witness w, std::optional<bool> expect_irr) {
    FamilyMember m;
    m.family = name_;
    m.n = n_;
    m.k = k_;
    m.H = H_;
    m.certificate = verify_member(f, k_, H_, expect_irr, cfg_);
    m.f = std::move(f);
    m.witness = std::move(w);
    if (!m.certificate.passed)
      throw InvariantViolation(std::string(to_string(name_)) + " member " + m.f.to_string() +
                               " failed verification (" + m.certificate.failure + "); witness " +
                               m.witness.to_json(name_));
    if (!seen_.insert(m.f.coeffs()).second)
      throw InvariantViolation(std::string(to_string(name_)) + " emitted " + m.f.to_string() +
                               " twice; witness " + m.witness.to_json(name_));
    ++stats.emitted;
    if (!sink_(m) || (limit_ != 0 && stats.emitted >= limit_)) {
      stats.truncated = true;
      throw StopStream{};
    }
  }

  FamilyStats stats;

 private:
  FamilyName name_;
  int n_, k_;
  long H_;
  const MemberSink& sink_;
  std::uint64_t limit_;
  const RootConfig& cfg_;
  std::set<std::vector<mpz_class>> seen_;
};

template <class Body>
FamilyStats run_stream(Emitter& em, Body&& body) {
  try {
    body();
  } catch (const StopStream&) {
  }
  return em.stats;
}

// monic irreducible h of degree d with house(h)^2 <= rho2
std::vector<IntPoly> small_house_polys(int d, const mpq_class& rho2) {
  std::vector<IntPoly> out;
  if (d == 0) {
    out.push_back(IntPoly{1});
    return out;
  }
  for_each_box(j_coefficient_bounds(d, rho2), [&](const std::vector<mpz_class>& a) {
    IntPoly h = monic_from(a);
    if (!is_irreducible(h)) return true;
    if (h.trailing() == 0 || house_compare(h, rho2) != Ordering::Greater) out.push_back(std::move(h));
    return true;
  });
  return out;
}

void check_range(const FamilySpec& s, std::pair<long, long>& r) {
  if (!s.m_range) return;
  if (s.m_range->first > s.m_range->second) throw ContractError("families: m_range must be nonempty");
  r.first = std::max(r.first, s.m_range->first);
  r.second = std::min(r.second, s.m_range->second);
}

FamilyStats power_compose(const FamilySpec& s, const MemberSink& sink, std::uint64_t limit, const RootConfig& cfg) {
  if (s.k < 1 || s.k % 2 == 0 || s.n % s.k != 0)
    throw ContractError("gen_power_compose: k must be odd and divide n");
  if (s.H < 1) throw ContractError("gen_power_compose: H must be >= 1");
  Emitter em(s.name, s.n, s.k, s.H, sink, limit, cfg);
  int d = s.n / s.k;
  std::vector<mpz_class> bounds(static_cast<std::size_t>(d), mpz_class(s.H));
  return run_stream(em, [&] {
    for_each_box(bounds, [&](const std::vector<mpz_class>& a) {
      ++em.stats.candidates;
      if (a[0] == 0) return true;
      IntPoly g = monic_from(a);
      if (!is_irreducible(g) || dominant_root_count(g, cfg) != 1) return true;
      Witness w;
      w.g = g;
      IntPoly f = compose_power(g, s.k);
      if (capelli_power_irreducible(g, s.k)) {
        w.irreducibility = "capelli";
      } else {
        if (s.capelli_only || !is_irreducible(f)) return true;
        w.irreducibility = "factorization";
      }
      em.emit(std::move(f), std::move(w), true);
      return true;
    });
  });
}

FamilyStats even_circle(const FamilySpec& s, const MemberSink& sink, std::uint64_t limit, const RootConfig& cfg) {
  if (s.k < 2 || s.k % 2 != 0 || s.k > s.n) throw ContractError("gen_even_circle: need even k with 2 <= k <= n");
  if (s.H < 1) throw ContractError("gen_even_circle: H must be >= 1");
  bool top = s.reducible_top && s.k == s.n;
  if (top && s.n < 4) throw ContractError("gen_even_circle: the reducible k = n variant needs n >= 4");
  Emitter em(s.name, s.n, s.k, s.H, sink, limit, cfg);
  auto range = circle_m_range(s.n, s.H, true);
  check_range(s, range);
  em.stats.m_lo = range.first;
  em.stats.m_hi = range.second;
  int ell = top ? (s.n - 2) / 2 : s.k / 2;
  int d = s.n - s.k;
  return run_stream(em, [&] {
    for (long m = range.first; m <= range.second; ++m) {
      mpz_class mz = m;
      std::vector<IntPoly> hs = top ? std::vector<IntPoly>{IntPoly{-m, 0, 1}} : small_house_polys(d, mpq_class(mz) / 4);
      mpz_class chain = ipow(4 * mz, static_cast<unsigned long>(s.n));  // bound on height^2
      for_each_beta_poly(ell, 4 * mz, [&](const IntPoly& B) {
        IntPoly g = circle_product(B, mz);
        for (const IntPoly& h : hs) {
          ++em.stats.candidates;
          IntPoly f = g * h;
          mpz_class ht = height(f);
          if (ht * ht > chain)
            throw InvariantViolation("even-circle member " + f.to_string() + " breaks the height chain for m = " +
                                     std::to_string(m));
          Witness w;
          w.m = m;
          w.beta = B;
          w.g = g;
          w.h = h;
          em.emit(std::move(f), std::move(w), d == 0 && !top);
        }
        return true;
      });
    }
  });
}

FamilyStats odd_circle(const FamilySpec& s, const MemberSink& sink, std::uint64_t limit, const RootConfig& cfg) {
  if (s.k < 1 || s.k % 2 == 0 || s.k > s.n) throw ContractError("gen_odd_circle: need odd k with 1 <= k <= n");
  if (s.H < 1) throw ContractError("gen_odd_circle: H must be >= 1");
  Emitter em(s.name, s.n, s.k, s.H, sink, limit, cfg);
  auto range = circle_m_range(s.n, s.H, false);
  check_range(s, range);
  em.stats.m_lo = range.first;
  em.stats.m_hi = range.second;
  int ell = (s.k - 1) / 2;
  int d = s.n - s.k;
  return run_stream(em, [&] {
    for (long m = range.first; m <= range.second; ++m) {
      mpz_class mz = m;
      std::vector<IntPoly> hs = small_house_polys(d, mpq_class(mz * mz) / 4);
      mpz_class chain = ipow(2 * mz, static_cast<unsigned long>(s.n));
      IntPoly lin = IntPoly::linear_root(mz);
      for_each_beta_poly(ell, 4 * mz * mz, [&](const IntPoly& B) {
        IntPoly g = lin * circle_product(B, mz * mz);
        for (const IntPoly& h : hs) {
          ++em.stats.candidates;
          IntPoly f = g * h;
          if (height(f) > chain)
            throw InvariantViolation("odd-circle member " + f.to_string() + " breaks the height chain for m = " +
                                     std::to_string(m));
          Witness w;
          w.m = m;
          w.beta = B;
          w.g = g;
          w.h = h;
          em.emit(std::move(f), std::move(w), s.n == 1);
        }
        return true;
      });
    }
  });
}

FamilyStats r44(const FamilySpec& s, const MemberSink& sink, std::uint64_t limit, const RootConfig& cfg) {
  if (s.H < 1) throw ContractError("gen_R44: H must be >= 1");
  Emitter em(FamilyName::R44Quartic, 4, 4, s.H, sink, limit, cfg);
  mpz_class Hz = s.H;
  return run_stream(em, [&] {
    for (long b = 1; mpz_class(b) * b < Hz; ++b) {
      // a^2 < 4b; a <= c since the two orders give the same product
      long amax = 0;
      while ((amax + 1) * (amax + 1) < 4 * b) ++amax;
      for (long a = -amax; a <= amax; ++a)
        for (long c = a; c <= amax; ++c) {
          ++em.stats.candidates;
          IntPoly f = IntPoly{b, a, 1} * IntPoly{b, c, 1};
          if (height(f) > Hz) {
            ++em.stats.dropped_height;
            continue;
          }
          Witness w;
          w.a = a;
          w.b = b;
          w.c = c;
          w.g = IntPoly{b, a, 1};
          w.h = IntPoly{b, c, 1};
          em.emit(std::move(f), std::move(w), false);
        }
    }
  });
}

FamilyStats i44(const FamilySpec& s, const MemberSink& sink, std::uint64_t limit, const RootConfig& cfg) {
  if (s.H < 1) throw ContractError("gen_I44: H must be >= 1");
  Emitter em(FamilyName::I44Biquadratic, 4, 4, s.H, sink, limit, cfg);
  return run_stream(em, [&] {
    for (long b = 2; b <= s.H; ++b) {
      if (is_perfect_power(mpz_class(b))) continue;
      // b >= 2 forces a^2 < 4b for two roots of equal modulus
      for (long a = -s.H; a <= s.H; ++a) {
        if (a * a >= 4 * b) continue;
        ++em.stats.candidates;
        Witness w;
        w.a = a;
        w.b = b;
        w.g = IntPoly{b, a, 1};
        em.emit(IntPoly{b, 0, a, 0, 1}, std::move(w), true);
      }
    }
  });
}

std::string json_str(const std::string& s) {
  std::string o = "\"";
  for (char ch : s) {
    if (ch == '"' || ch == '\\') o += '\\';
    o += ch;
  }
  return o + "\"";
}

}  // namespace

const char* to_string(FamilyName f) {
  switch (f) {
    case FamilyName::PowerCompose: return "power-compose";
    case FamilyName::EvenCircle: return "even-circle";
    case FamilyName::OddCircle: return "odd-circle";
    case FamilyName::R44Quartic: return "r44";
    case FamilyName::I44Biquadratic: return "i44";
  }
  return "?";
}

FamilyName family_from_string(std::string_view s) {
  if (s == "power-compose" || s == "PowerCompose") return FamilyName::PowerCompose;
  if (s == "even-circle" || s == "EvenCircle") return FamilyName::EvenCircle;
  if (s == "odd-circle" || s == "OddCircle") return FamilyName::OddCircle;
  if (s == "r44" || s == "R44Quartic") return FamilyName::R44Quartic;
  if (s == "i44" || s == "I44Biquadratic") return FamilyName::I44Biquadratic;
  throw ParseError("unknown family '" + std::string(s) + "'");
}

std::string Certificate::to_json() const {
  std::ostringstream o;
  o << "{\"passed\": " << (passed ? "true" : "false") << ", \"k\": " << k << ", \"height\": " << height.get_str()
    << ", \"irreducible\": " << (irreducible ? "true" : "false");
  if (!failure.empty()) o << ", \"failure\": " << json_str(failure);
  o << "}";
  return o.str();
}

std::string Witness::to_json(FamilyName name) const {
  std::ostringstream o;
  switch (name) {
    case FamilyName::PowerCompose:
      o << "{\"g\": " << g.to_json() << ", \"irreducibility\": " << json_str(irreducibility) << "}";
      break;
    case FamilyName::EvenCircle:
    case FamilyName::OddCircle:
      o << "{\"m\": " << m << ", \"beta\": " << beta.to_json() << ", \"g\": " << g.to_json()
        << ", \"h\": " << h.to_json() << "}";
      break;
    case FamilyName::R44Quartic:
      o << "{\"a\": " << a << ", \"b\": " << b << ", \"c\": " << c << "}";
      break;
    case FamilyName::I44Biquadratic:
      o << "{\"a\": " << a << ", \"b\": " << b << ", \"g\": " << g.to_json() << "}";
      break;
  }
  return o.str();
}

std::string FamilyMember::to_json() const {
  std::ostringstream o;
  o << "{\"family\": \"" << domroots::to_string(family) << "\", \"n\": " << n << ", \"k\": " << k << ", \"H\": " << H
    << ", \"f\": " << f.to_json() << ", \"f_text\": " << json_str(f.to_string())
    << ", \"witness\": " << witness.to_json(family) << ", \"certificate\": " << certificate.to_json() << "}";
  return o.str();
}

Certificate verify_member(const IntPoly& f, int expected_k, long H, std::optional<bool> expect_irreducible,
                          const RootConfig& cfg) {
  if (f.degree() < 1 || !f.is_monic()) throw ContractError("verify_member: expected a monic polynomial of degree >= 1");
  Certificate c;
  c.height = height(f);
  c.k = dominant_root_count(f, cfg);
  c.irreducible = is_irreducible(f);
  std::vector<std::string> why;
  if (c.height > H) why.push_back("height " + c.height.get_str() + " > " + std::to_string(H));
  if (c.k != expected_k) why.push_back("k = " + std::to_string(c.k) + ", expected " + std::to_string(expected_k));
  if (expect_irreducible && *expect_irreducible != c.irreducible)
    why.push_back(c.irreducible ? "irreducible, expected reducible" : "reducible, expected irreducible");
  for (std::size_t i = 0; i < why.size(); ++i) c.failure += (i ? "; " : "") + why[i];
  c.passed = why.empty();
  return c;
}

std::pair<long, long> circle_m_range(int n, long H, bool even) {
  if (n < 1 || H < 1) throw ContractError("circle_m_range: need n >= 1 and H >= 1");
  // even: (5m)^n >= H^2 and (4m)^n <= H^2; odd: (3m)^n >= H and (2m)^n <= H
  mpz_class target = even ? mpz_class(H) * H : mpz_class(H);
  long lo_mul = even ? 5 : 3, hi_mul = even ? 4 : 2;
  auto pw = [&](long mul, long m) { return ipow(mpz_class(mul) * m, static_cast<unsigned long>(n)); };
  mpz_class r;
  mpz_root(r.get_mpz_t(), target.get_mpz_t(), static_cast<unsigned long>(n));
  long lo = std::max(1L, r.get_si() / lo_mul - 1);
  while (pw(lo_mul, lo) < target) ++lo;
  long hi = std::max(0L, r.get_si() / hi_mul + 1);
  while (hi > 0 && pw(hi_mul, hi) > target) --hi;
  return {lo, hi};
}

void for_each_beta_poly(int ell, const mpz_class& R2, const std::function<bool(const IntPoly&)>& fn) {
  if (ell < 0 || R2 <= 0) throw ContractError("for_each_beta_poly: need ell >= 0 and R2 > 0");
  if (ell == 0) {
    fn(IntPoly{1});
    return;
  }
  mpq_class r2(R2);
  for_each_box(j_coefficient_bounds(ell, r2), [&](const std::vector<mpz_class>& a) {
    IntPoly B = monic_from(a);
    if (poly_gcd(B, B.derivative()).degree() > 0) return true;
    if (real_roots_below_square(B, r2) != static_cast<std::size_t>(ell) || !is_irreducible(B)) return true;
    return fn(B);
  });
}

IntPoly circle_product(const IntPoly& B, const mpz_class& m) {
  int ell = B.degree();
  if (ell < 0) throw ContractError("circle_product: B must be nonzero");
  IntPoly q{0, 0, 1};
  q += IntPoly::constant(m);
  IntPoly out;
  IntPoly qp{1};
  for (int j = 0; j <= ell; ++j) {
    if (B[j] != 0) out += qp * IntPoly::monomial(B[j], ell - j);
    qp = qp * q;
  }
  return out;
}

FamilyStats generate(const FamilySpec& spec, const MemberSink& sink, std::uint64_t limit, const RootConfig& cfg) {
  switch (spec.name) {
    case FamilyName::PowerCompose: return power_compose(spec, sink, limit, cfg);
    case FamilyName::EvenCircle: return even_circle(spec, sink, limit, cfg);
    case FamilyName::OddCircle: return odd_circle(spec, sink, limit, cfg);
    case FamilyName::R44Quartic: return r44(spec, sink, limit, cfg);
    case FamilyName::I44Biquadratic: return i44(spec, sink, limit, cfg);
  }
  throw ContractError("generate: unknown family");
}

namespace {
FamilySpec make_spec(FamilyName name, int n, int k, long H) {
  FamilySpec s;
  s.name = name;
  s.n = n;
  s.k = k;
  s.H = H;
  return s;
}
}  // namespace

FamilyStats gen_power_compose(int n, int k, long H, const MemberSink& sink, std::uint64_t limit, bool capelli_only) {
  FamilySpec s = make_spec(FamilyName::PowerCompose, n, k, H);
  s.capelli_only = capelli_only;
  return generate(s, sink, limit);
}

FamilyStats gen_even_circle(int n, int k, long H, const MemberSink& sink, std::uint64_t limit) {
  return generate(make_spec(FamilyName::EvenCircle, n, k, H), sink, limit);
}

FamilyStats gen_odd_circle(int n, int k, long H, const MemberSink& sink, std::uint64_t limit) {
  return generate(make_spec(FamilyName::OddCircle, n, k, H), sink, limit);
}

FamilyStats gen_R44(long H, const MemberSink& sink, std::uint64_t limit) {
  return generate(make_spec(FamilyName::R44Quartic, 4, 4, H), sink, limit);
}

FamilyStats gen_I44(long H, const MemberSink& sink, std::uint64_t limit) {
  return generate(make_spec(FamilyName::I44Biquadratic, 4, 4, H), sink, limit);
}

std::vector<FamilyMember> collect_members(const FamilySpec& spec, std::uint64_t limit, FamilyStats* stats) {
  std::vector<FamilyMember> out;
  FamilyStats st = generate(spec, [&](const FamilyMember& m) {
    out.push_back(m);
    return true;
  }, limit);
  if (stats) *stats = st;
  return out;
}

}  // namespace domroots
