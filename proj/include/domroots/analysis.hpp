#pragma once

#include <gmpxx.h>

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "domroots/census.hpp"

namespace domroots {

/// e(n,k), the lower exponent for D_n(k,H) and R_n(k,H). Needs 1 <= k <= n.
mpq_class compute_e(int n, int k);

struct ExponentWindow {
  mpq_class lower, upper;
  std::string source;       // the statement the window comes from
  bool one_sided = false;   // only an upper bound is known; lower is 0
  bool log_factor = false;  // H^upper log H
  bool exact_zero = false;  // the count vanishes identically

  bool is_point() const { return lower == upper; }
};

/// Windows for "D", "I" and "R" at (n,k).
std::map<std::string, ExponentWindow> theory_windows(int n, int k);

struct FitReport {
  std::vector<std::pair<long, std::uint64_t>> points;  // positive counts only
  double slope = 0, intercept = 0, stderr_ = 0, r_squared = 0;
  std::optional<std::vector<double>> hlogh_ratios;  // count / (H ln H)
  std::size_t dropped_zero = 0;

  double ratio_spread() const;  // max/min of hlogh_ratios
};

/// OLS of ln(count) on ln(H). Zero counts are dropped and counted.
/// Throws InsufficientData with fewer than 3 positive points and
/// ContractError on repeated H or H <= 1 in a ratio request.
FitReport fit_exponent(const std::vector<std::pair<long, std::uint64_t>>& points, bool hlogh = false);

struct CellReport {
  std::string quantity;  // D, I or R
  int k = 0;
  std::vector<std::uint64_t> counts;
  std::optional<FitReport> fit;
  ExponentWindow window;
  double lo = 0, hi = 0;  // window widened by the slack
  std::string status;     // pass, flag, exact-zero, insufficient-data
  std::string note;
};

struct ComparisonReport {
  int n = 0;
  std::vector<long> heights;
  double slack = 0.35;
  double ratio_limit = 3.0;
  std::vector<CellReport> cells;

  const CellReport& cell(const std::string& q, int k) const;
  std::size_t flagged() const;
  std::string to_json() const;
};

/// Needs at least 3 heights. The table's own invariants are checked first
/// and an InvariantViolation propagates.
ComparisonReport compare(const CensusTable& table, double slack = 0.35, double ratio_limit = 3.0);

}  // namespace domroots
