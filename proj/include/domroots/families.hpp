#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "domroots/exact_roots.hpp"
#include "domroots/int_poly.hpp"

namespace domroots {

enum class FamilyName { PowerCompose, EvenCircle, OddCircle, R44Quartic, I44Biquadratic };

const char* to_string(FamilyName f);
/// Accepts "power-compose", "even-circle", "odd-circle", "r44", "i44" and the enum spellings.
FamilyName family_from_string(std::string_view s);

struct FamilySpec {
  FamilyName name = FamilyName::PowerCompose;
  int n = 1, k = 1;
  long H = 1;
  // Restricts the construction's own m-range to this interval.
  std::optional<std::pair<long, long>> m_range;
  // PowerCompose: only members certified by the Capelli criterion on g.
  bool capelli_only = false;
  // EvenCircle with k = n: ell = (n-2)/2 and h = x^2 - m, giving reducible members.
  bool reducible_top = false;
};

struct Certificate {
  bool passed = false;
  int k = 0;
  mpz_class height;
  bool irreducible = false;
  std::string failure;  // empty when passed

  std::string to_json() const;
};

struct Witness {
  long m = 0;
  IntPoly beta;  // B(x) = prod (x - beta_i)
  IntPoly g, h;
  long a = 0, b = 0, c = 0;  // R44 / I44 parameters
  std::string irreducibility;  // "capelli" or "factorization" for PowerCompose

  std::string to_json(FamilyName name) const;
};

struct FamilyMember {
  FamilyName family = FamilyName::PowerCompose;
  int n = 0, k = 0;
  long H = 0;
  IntPoly f;
  Witness witness;
  Certificate certificate;

  std::string to_json() const;
};

struct FamilyStats {
  std::uint64_t emitted = 0;
  std::uint64_t dropped_height = 0;  // R44 products above H
  std::uint64_t candidates = 0;
  long m_lo = 0, m_hi = -1;  // empty when m_lo > m_hi
  bool truncated = false;    // stopped at the limit or by the sink

  bool m_range_empty() const { return m_lo > m_hi; }
};

/// Return false to stop the stream.
using MemberSink = std::function<bool(const FamilyMember&)>;

/// The exact height, dominant-count and irreducibility certificate of f.
/// Never throws for a failed check; the reason goes in failure.
Certificate verify_member(const IntPoly& f, int expected_k, long H, std::optional<bool> expect_irreducible,
                          const RootConfig& cfg = {});

/// Integer m with H^{2/n}/5 <= m <= H^{2/n}/4 (even) or H^{1/n}/3 <= m <= H^{1/n}/2 (odd).
std::pair<long, long> circle_m_range(int n, long H, bool even);

/// Monic irreducible B of degree ell with every root real and beta^2 < R2.
/// Calls fn(B) for each in box order; fn returns false to stop.
void for_each_beta_poly(int ell, const mpz_class& R2, const std::function<bool(const IntPoly&)>& fn);

/// x^ell B(x + m/x) = prod (x^2 - beta_i x + m), exact coefficients.
IntPoly circle_product(const IntPoly& B, const mpz_class& m);

/// Each generator validates its parameters (ContractError), then calls the
/// sink once per member in a deterministic order. Every member is verified
/// before it is emitted; a failure or a duplicate throws InvariantViolation
/// naming the member and its witness. limit = 0 means no cap.
FamilyStats generate(const FamilySpec& spec, const MemberSink& sink, std::uint64_t limit = 0,
                     const RootConfig& cfg = {});

FamilyStats gen_power_compose(int n, int k, long H, const MemberSink& sink, std::uint64_t limit = 0,
                              bool capelli_only = false);
FamilyStats gen_even_circle(int n, int k, long H, const MemberSink& sink, std::uint64_t limit = 0);
FamilyStats gen_odd_circle(int n, int k, long H, const MemberSink& sink, std::uint64_t limit = 0);
FamilyStats gen_R44(long H, const MemberSink& sink, std::uint64_t limit = 0);
FamilyStats gen_I44(long H, const MemberSink& sink, std::uint64_t limit = 0);

std::vector<FamilyMember> collect_members(const FamilySpec& spec, std::uint64_t limit = 0,
                                          FamilyStats* stats = nullptr);

}  // namespace domroots
