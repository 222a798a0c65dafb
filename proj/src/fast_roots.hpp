#pragma once

// Hardware-precision root classification with a-posteriori certificates.
// Everything reported with certified = true is a proof, not an estimate;
// anything that cannot be certified is left to the exact pipeline.

#include <complex>
#include <cstdint>

namespace domroots::fast {

constexpr int kMaxDegree = 8;
// Relative gap between the top unit and the next one, in units of the
// enclosure widths, required before trusting the floating-point ordering.
constexpr double kGapFactor = 1e3;

struct Result {
  bool certified = false;
  int k = 0;
  // r(f) enclosure
  double top_lo = 0, top_hi = 0;
  int real_roots = 0;
  // Set only when degree <= 4 and the root-subset certificate succeeded.
  bool factor_known = false;
  bool irreducible = false;
  // bit m set when f has a monic integer factor of degree m (1 <= m <= n/2)
  unsigned factor_mask = 0;
};

/// f = x^n + a[n-1] x^(n-1) + ... + a[0], with a[0] != 0, 1 <= n <= kMaxDegree.
/// |a[i]| must be below 2^24 so the exact factor tests fit in 128-bit arithmetic.
Result classify(const std::int64_t* a, int n, bool want_factors);

}  // namespace domroots::fast
