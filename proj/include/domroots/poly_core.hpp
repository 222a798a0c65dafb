#pragma once

#include <gmpxx.h>

#include <utility>
#include <vector>

#include "domroots/int_poly.hpp"

namespace domroots {

/// H(f) = max |a_i| over all coefficients including the leading one.
/// Throws DomainError for the zero polynomial.
mpz_class height(const IntPoly& f);

/// Exact rational enclosure of the Mahler measure M(f):
///   H(f) / 2^n <= M(f) <= sqrt(n+1) H(f).
/// The upper end rounds sqrt(n+1) up to 64 fractional bits.
struct MahlerBounds {
  mpq_class lower;
  mpq_class upper;
};
MahlerBounds mahler_bounds(const IntPoly& f);

/// g(x^k)
IntPoly compose_power(const IntPoly& g, int k);

mpz_class content(const IntPoly& f);
/// f / content(f), sign normalized so the leading coefficient is positive.
IntPoly primitive_part(const IntPoly& f);

/// lc(b)^(deg a - deg b + 1) * a = q * b + r.
IntPoly pseudo_remainder(const IntPoly& a, const IntPoly& b);

/// Exact quotient a / b in Z[x]. Returns false if b does not divide a with an
/// integral quotient.
bool try_exact_divide(const IntPoly& a, const IntPoly& b, IntPoly& quotient);
/// As try_exact_divide but throws ContractError on a nonzero remainder.
IntPoly exact_divide(const IntPoly& a, const IntPoly& b);

/// Primitive gcd with positive leading coefficient (content gcd included).
IntPoly poly_gcd(const IntPoly& a, const IntPoly& b);

/// Res(f, g) = lc(f)^deg(g) * prod_{f(alpha)=0} g(alpha), computed with the
/// subresultant pseudo-remainder sequence. Res(f, c) = c^deg(f) for constants.
mpz_class resultant(const IntPoly& f, const IntPoly& g);

/// disc(f) = (-1)^(n(n-1)/2) Res(f, f') / lc(f).
mpz_class discriminant(const IntPoly& f);

struct SquareFreePart {
  IntPoly part;
  int multiplicity;
};
/// Yun decomposition of the primitive part of f: product of part^multiplicity
/// equals primitive_part(f). Parts are square-free, pairwise coprime, have
/// positive leading coefficients and appear in increasing multiplicity.
/// Throws DomainError for constant input.
std::vector<SquareFreePart> squarefree_decomposition(const IntPoly& f);

/// Product of the distinct irreducible factors of primitive_part(f).
IntPoly squarefree_reduction(const IntPoly& f);

/// Sturm sequence over Z for a square-free polynomial.
class SturmChain {
 public:
  explicit SturmChain(const IntPoly& f);

  /// Number of sign changes of the chain at the rational point x.
  int sign_changes(const mpq_class& x) const;
  /// Number of sign changes at x = r * sqrt(d) with r rational and d >= 0 a
  /// nonnegative integer (signs decided exactly).
  int sign_changes_sqrt(const mpq_class& r, const mpz_class& d) const;
  int sign_changes_at_infinity(bool positive) const;
  const std::vector<IntPoly>& chain() const { return chain_; }

 private:
  std::vector<IntPoly> chain_;
};

/// Distinct real roots of the square-free polynomial f in the half-open
/// interval (a, b]. Throws ContractError when f is not square-free or a >= b.
std::size_t sturm_count(const IntPoly& f, const mpq_class& a, const mpq_class& b);

/// Distinct real roots of a square-free polynomial.
std::size_t real_root_count(const IntPoly& f);

/// Distinct real roots beta of the square-free polynomial f with beta^2 < c2,
/// i.e. roots in the open interval (-sqrt(c2), sqrt(c2)); c2 > 0 rational.
std::size_t real_roots_below_square(const IntPoly& f, const mpq_class& c2);

/// Sign of f at a rational point, evaluated exactly.
int sign_at(const IntPoly& f, const mpq_class& x);

/// Sign of u + v * sqrt(d) for integers u, v and d >= 0.
int sign_of_quadratic(const mpz_class& u, const mpz_class& v, const mpz_class& d);

/// Smallest integer >= sqrt(a), a >= 0.
mpz_class isqrt_ceil(const mpz_class& a);
mpz_class binomial(unsigned n, unsigned k);

}  // namespace domroots
