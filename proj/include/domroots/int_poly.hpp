#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <initializer_list>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace domroots {

/// Univariate polynomial with arbitrary-precision integer coefficients.
///
/// Coefficients are stored constant term first (index == exponent) and the
/// sequence never carries trailing zeros, so two equal polynomials always have
/// identical storage. The zero polynomial has an empty coefficient vector and
/// degree -1. Monicity is a property that is queried, never assumed.
class IntPoly {
 public:
  IntPoly() = default;
  explicit IntPoly(std::vector<mpz_class> coeffs);
  IntPoly(std::initializer_list<long> coeffs);

  static IntPoly from_i64(std::span<const std::int64_t> coeffs);
  static IntPoly constant(const mpz_class& c);
  static IntPoly monomial(const mpz_class& c, int degree);
  /// x - root
  static IntPoly linear_root(const mpz_class& root);

  int degree() const { return static_cast<int>(c_.size()) - 1; }
  bool is_zero() const { return c_.empty(); }
  bool is_monic() const { return !c_.empty() && c_.back() == 1; }
  bool is_constant() const { return c_.size() <= 1; }

  const std::vector<mpz_class>& coeffs() const { return c_; }
  /// Coefficient of x^i; zero beyond the degree.
  const mpz_class& operator[](std::size_t i) const;
  const mpz_class& leading() const;
  const mpz_class& trailing() const { return (*this)[0]; }

  mpz_class eval(const mpz_class& x) const;
  IntPoly derivative() const;
  /// p(-x)
  IntPoly reflect() const;
  /// Number of leading zero coefficients from the constant term up, i.e. the
  /// multiplicity of 0 as a root.
  int zero_root_multiplicity() const;
  /// p / x^v
  IntPoly shift_down(int v) const;

  IntPoly& operator+=(const IntPoly& o);
  IntPoly& operator-=(const IntPoly& o);
  IntPoly& operator*=(const mpz_class& s);

  friend IntPoly operator+(IntPoly a, const IntPoly& b) { return a += b; }
  friend IntPoly operator-(IntPoly a, const IntPoly& b) { return a -= b; }
  friend IntPoly operator-(IntPoly a) { return a *= mpz_class(-1); }
  friend IntPoly operator*(const IntPoly& a, const IntPoly& b);
  friend IntPoly operator*(IntPoly a, const mpz_class& s) { return a *= s; }
  friend bool operator==(const IntPoly& a, const IntPoly& b) { return a.c_ == b.c_; }
  friend bool operator!=(const IntPoly& a, const IntPoly& b) { return !(a == b); }

  IntPoly pow(unsigned e) const;

  /// Canonical text form, highest power first: "x^3 - 2x + 1".
  std::string to_string() const;
  /// JSON array, constant term first: "[1, -2, 0, 1]".
  std::string to_json() const;

 private:
  void normalize();
  std::vector<mpz_class> c_;
};

/// Parses "x^3 - 2x + 1", "x^6 - x^4 - 2*x^3 + 1", "-3", "2 x^2". Accepts any
/// term order and repeated powers (they are summed).
IntPoly parse_poly(std::string_view text);
/// Parses a JSON coefficient array; entries may be integers or decimal strings.
IntPoly parse_poly_json(std::string_view text);
/// Dispatches on a leading '[' to the JSON parser, otherwise the text parser.
IntPoly parse_poly_any(std::string_view text);

/// Lexicographic order on (degree, coefficients constant-first).
bool canonical_less(const IntPoly& a, const IntPoly& b);

}  // namespace domroots
