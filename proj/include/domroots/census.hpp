#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <string>
#include <vector>

#include "domroots/exact_roots.hpp"
#include "domroots/int_poly.hpp"

namespace domroots {

struct Classification {
  int k = 0;
  bool irreducible = false;
  mpz_class height;
  // k was certified by the floating-point screen rather than exact_roots
  bool fast_path = false;
};

/// Dominant-root count, irreducibility and height of a monic f of degree >= 1.
/// EscalationError from exact_roots propagates with f attached.
Classification classify_one(const IntPoly& f, const RootConfig& cfg = {});

struct CensusConfig {
  int n = 1;
  long max_height = 0;
  // Reported heights, each <= max_height. Empty means {max_height}.
  std::vector<long> heights;
  // 0 picks default_thread_count().
  unsigned threads = 0;
  std::uint64_t budget = std::uint64_t(1) << 31;
  RootConfig roots;
  bool use_fast_path = true;
  // About this many fast-path results are re-derived through exact_roots.
  std::uint64_t audit_target = 20000;
  std::string checkpoint_path;
  // Checkpoint after this many newly completed shards (0: about every 2%).
  std::uint64_t checkpoint_every = 0;
  // Stop picking up shards once this many have completed in this call (0: never).
  std::uint64_t stop_after_shards = 0;
};

struct CensusStats {
  std::uint64_t fast = 0;       // k certified on the floating-point screen
  std::uint64_t escalated = 0;  // k needed exact_roots
  std::uint64_t audited = 0;    // fast results re-checked exactly
  std::uint64_t shards_done = 0;
  std::uint64_t shards_total = 0;
  double wall_seconds = 0;
  bool complete = false;

  double escalation_rate() const {
    return fast + escalated == 0 ? 0.0 : double(escalated) / double(fast + escalated);
  }
};

/// Exact counts D_n(k,H), I_n(k,H); R = D - I. H is the box radius
/// max_{i<n} |a_i|, which equals the height except for f = x^n at H = 0.
struct CensusTable {
  int n = 0;
  std::vector<long> heights;
  std::vector<std::uint64_t> d, i;  // index (k-1) * heights.size() + h_index
  CensusStats stats;
  std::uint64_t config_hash = 0;

  std::uint64_t D(int k, long H) const;
  std::uint64_t I(int k, long H) const;
  std::uint64_t R(int k, long H) const { return D(k, H) - I(k, H); }
  bool same_counts(const CensusTable& o) const { return n == o.n && heights == o.heights && d == o.d && i == o.i; }

  /// Throws InvariantViolation on a broken partition identity, I > D, a
  /// nonzero I at odd k not dividing n, or non-monotone H columns.
  void check_invariants() const;

  std::string to_csv() const;
  static CensusTable from_csv(const std::string& text);

 private:
  std::size_t index(int k, long H) const;
};

std::uint64_t census_cardinality(int n, long max_height);  // saturates at UINT64_MAX
unsigned default_thread_count();                           // $DOMROOTS_THREADS or the hardware
std::uint64_t census_config_hash(const CensusConfig& cfg);

/// One pass over [-H, H]^n, sharded by (a_{n-1}, a_{n-2}). Throws
/// BudgetExceeded before starting when the box exceeds cfg.budget,
/// CheckpointError for an unusable checkpoint and InvariantViolation when a
/// table identity or a fast-path audit fails.
CensusTable run_census(const CensusConfig& cfg);

/// F_n(m,H): monic reducible polynomials with a factor of degree m, for each
/// 1 <= m <= n/2. A polynomial counts once for every m that applies.
struct FTable {
  int n = 0;
  std::vector<long> heights;
  std::vector<std::uint64_t> f;  // index (m-1) * heights.size() + h_index
  CensusStats stats;
  std::uint64_t config_hash = 0;

  std::uint64_t F(int m, long H) const;
  std::string to_csv() const;
};

FTable run_fcount(const CensusConfig& cfg);
std::uint64_t count_F(int n, int m, long H, unsigned threads = 0);

/// J_n(s,B): monic irreducible f of degree n with r(f) <= B and exactly 2s
/// non-real roots; B2 = B^2.
std::uint64_t count_J(int n, int s, const mpq_class& B2, const RootConfig& cfg = {},
                      std::uint64_t budget = std::uint64_t(1) << 31);

/// Coefficient box for count_J: |a_{n-i}| <= floor(C(n,i) B^i).
std::vector<mpz_class> j_coefficient_bounds(int n, const mpq_class& B2);

}  // namespace domroots
