#pragma once

#include <gmpxx.h>

#include <optional>
#include <string>
#include <vector>

#include "domroots/exact_roots.hpp"
#include "domroots/int_poly.hpp"

namespace domroots {

struct PerfectPower {
  mpz_class base;
  unsigned long exponent;
};

/// Maximal-exponent witness a = base^exponent with exponent >= 2, or nullopt.
/// 1 is reported as 1^2. Throws DomainError for a < 1.
std::optional<PerfectPower> is_perfect_power(const mpz_class& a);

struct Factor {
  IntPoly poly;
  int multiplicity;
};

/// Monic irreducible factors, ordered by degree and then coefficients.
struct Factorization {
  std::vector<Factor> factors;

  IntPoly product() const;
  std::vector<int> degrees() const;  // with multiplicity, ascending
  std::string to_string() const;     // "(x + 2)(x^2 - 2x + 4)"
  std::string to_json() const;
};

enum class IrreducibilityMethod { Trivial, RationalRoot, ModularSieve, ExhaustiveSearch };

struct IrreducibilityVerdict {
  bool irreducible;
  IrreducibilityMethod method;
};

/// Irreducibility over Z of a monic f of degree >= 1 (ContractError if not
/// monic): rational-root screen, mod-p degree sieve, then complete
/// Mignotte-bounded factor search.
bool is_irreducible(const IntPoly& f);
IrreducibilityVerdict irreducibility_verdict(const IntPoly& f);

/// Monic factor of exact degree d found by the complete search, skipping
/// all screens. Intended for auditing the sieve.
std::optional<IntPoly> find_factor_exhaustive(const IntPoly& f, int d);

/// Degrees 1..deg/2 consistent with the factorization patterns of f modulo
/// the fixed primes 2..29 (primes dividing disc f are skipped).
std::vector<int> sieve_candidate_degrees(const IntPoly& f);

Factorization factor_monic(const IntPoly& f);

/// True when |g(0)| >= 2 is not a perfect power, so that g(x^k) is
/// irreducible for every k. g must be monic irreducible (ContractError).
bool capelli_power_irreducible(const IntPoly& g, int k);

struct FergusonStructure {
  IntPoly g;
  int k;
};

/// For monic irreducible f with k dominant roots, at least one of them real,
/// returns g with f(x) = g(x^k); nullopt when no real dominant root exists.
/// Throws InvariantViolation if the hypothesis holds without such g and
/// ContractError for reducible input.
std::optional<FergusonStructure> ferguson_structure_check(const IntPoly& f, const RootConfig& cfg = {});

/// All positive divisors of m != 0, ascending.
std::vector<mpz_class> positive_divisors(const mpz_class& m);

}  // namespace domroots
