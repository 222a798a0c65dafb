#pragma once

#include <gmpxx.h>

#include <string>
#include <vector>

#include "domroots/int_poly.hpp"

namespace domroots {

struct RootConfig {
  // Working precision (bits) above which isolation gives up with EscalationError.
  unsigned long precision_ceiling = 1UL << 16;
  // Classify f(x) = h(x^k) through the profile of h.
  bool use_power_reduction = true;
};

/// Closed disk |z - (re + i im)| <= radius holding exactly `multiplicity` roots
/// counted with multiplicity. Center and radius are dyadic rationals.
struct RootEnclosure {
  mpq_class re;
  mpq_class im;
  mpq_class radius;
  int multiplicity = 1;
  // The root in this disk is known to be real.
  bool certified_real = false;
};

/// Certified enclosures of all roots of f, each of radius <= target_radius.
/// Disks are pairwise disjoint. Throws EscalationError when the precision
/// ceiling is reached first, DomainError for constant f.
std::vector<RootEnclosure> approx_roots(const IntPoly& f, const mpq_class& target_radius,
                                        const RootConfig& cfg = {});

/// N(z) = Res_x(f(x), x^n f(z/x)) = prod_{i,j} (z - a_i a_j), degree n^2.
/// f must be monic with f(0) != 0 (ContractError otherwise).
IntPoly composed_modulus_poly(const IntPoly& f);

/// prod_{i<=j} (z - a_i a_j), degree n(n+1)/2. Same root set as
/// composed_modulus_poly with smaller degree. Same preconditions.
IntPoly symmetric_square_poly(const IntPoly& f);

/// delta > 0 such that distinct values among |a_i|^2 differ by more than delta.
/// f monic, f(0) != 0.
mpq_class modulus_separation_bound(const IntPoly& f);

struct ModulusClass {
  // lo <= |a| <= hi for every root a of the class; lo2/hi2 enclose |a|^2.
  mpq_class lo, hi;
  mpq_class lo2, hi2;
  int count = 0;
};

struct ModulusProfile {
  int degree = 0;
  int zero_count = 0;
  // Decreasing modulus, pairwise disjoint enclosures.
  std::vector<ModulusClass> classes;

  int dominant_count() const { return classes.empty() ? zero_count : classes.front().count; }
  /// Enclosure of r(f); [0, 0] when f = x^n.
  mpq_class house_lo() const { return classes.empty() ? mpq_class(0) : classes.front().lo; }
  mpq_class house_hi() const { return classes.empty() ? mpq_class(0) : classes.front().hi; }
  /// JSON object with dyadic endpoints as exact decimal strings.
  std::string to_json() const;
};

/// Exact partition of the roots of a monic f into equal-modulus classes.
ModulusProfile modulus_profile(const IntPoly& f, const RootConfig& cfg = {});
int dominant_root_count(const IntPoly& f, const RootConfig& cfg = {});

enum class Ordering { Less, Equal, Greater };
const char* to_string(Ordering o);

/// Exact comparison of r(f)^2 with c2 > 0. f monic with f(0) != 0.
Ordering house_compare(const IntPoly& f, const mpq_class& c2, const RootConfig& cfg = {});

/// Exact decimal expansion of a dyadic rational ("-0.375"). Throws
/// ContractError when the denominator is not a power of two.
std::string dyadic_to_decimal(const mpq_class& q);

/// ceil(sqrt(q) * 2^bits) / 2^bits and floor(sqrt(q) * 2^bits) / 2^bits.
mpq_class sqrt_upper(const mpq_class& q, unsigned long bits);
mpq_class sqrt_lower(const mpq_class& q, unsigned long bits);

}  // namespace domroots
