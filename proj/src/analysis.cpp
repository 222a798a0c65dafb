#include "domroots/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

#include "domroots/errors.hpp"

namespace domroots {

namespace {

mpq_class Q(long a, long b = 1) {
  mpq_class q(a, b);
  q.canonicalize();
  return q;
}

ExponentWindow point(const mpq_class& e, std::string src, bool log = false) {
  ExponentWindow w;
  w.lower = w.upper = e;
  w.source = std::move(src);
  w.log_factor = log;
  return w;
}

ExponentWindow range(const mpq_class& lo, const mpq_class& hi, std::string src) {
  ExponentWindow w;
  w.lower = lo;
  w.upper = hi;
  w.source = std::move(src);
  return w;
}

ExponentWindow zero(std::string src) {
  ExponentWindow w;
  w.exact_zero = true;
  w.source = std::move(src);
  return w;
}

ExponentWindow upper_only(const mpq_class& hi, std::string src) {
  ExponentWindow w = range(0, hi, std::move(src));
  w.one_sided = true;
  return w;
}

std::string json_str(const std::string& s) {
  std::string o = "\"";
  for (char c : s) {
    if (c == '"' || c == '\\') o += '\\';
    o += c;
  }
  return o + "\"";
}

std::string num(double v) {
  if (!std::isfinite(v)) return "null";
  std::ostringstream o;
  o.precision(10);
  o << v;
  return o.str();
}

}  // namespace

mpq_class compute_e(int n, int k) {
  if (k < 1 || k > n) throw ContractError("compute_e: need 1 <= k <= n");
  mpq_class e = Q(n + 1, 2) - k;
  long kk = k;
  e += k % 2 ? Q(5 * kk * kk - 4 * kk + 7, 8L * n) : Q(5 * kk * kk - 2 * kk + 16, 8L * n);
  return e;
}

std::map<std::string, ExponentWindow> theory_windows(int n, int k) {
  if (k < 1 || k > n) throw ContractError("theory_windows: need 1 <= k <= n");
  std::map<std::string, ExponentWindow> w;
  bool odd = k % 2 == 1;

  // D
  if (k == 1)
    w["D"] = point(n, "D_n(1,H) ~ (2H)^n");
  else if (k == 2)
    w["D"] = point(Q(2 * n - 1, 2), "D_n(2,H) asymp H^{n-1/2}");
  else
    w["D"] = range(compute_e(n, k), odd ? Q(2 * n - k - 1, 2) : Q(2 * n - k + 1, 2),
                   odd ? "H^{e(n,k)} << D_n(k,H) << H^{n-(k+1)/2}" : "H^{e(n,k)} << D_n(k,H) << H^{n-(k-1)/2}");

  // I
  if (odd) {
    if (n % k == 0)
      w["I"] = point(n / k, "I_n(k,H) ~ (2H)^{n/k} for odd k | n");
    else
      w["I"] = zero("I_n(k,H) = 0 for odd k not dividing n");
  } else if (k == 2) {
    w["I"] = point(Q(2 * n - 1, 2), "I_n(2,H) asymp H^{n-1/2}");
  } else if (n == 4 && k == 4) {
    w["I"] = point(Q(3, 2), "I_4(4,H) asymp H^{3/2}");
  } else if (k == n) {
    w["I"] = range(Q(n, 8) + Q(2, n) + Q(1, 4), Q(2 * n - k + 1, 2), "H^{n/8+2/n+1/4} << I_n(n,H) << H^{n-(k-1)/2}");
  } else {
    w["I"] = upper_only(Q(2 * n - k + 1, 2), "I_n(k,H) << H^{n-(k-1)/2}");
  }

  // R
  if (n == 1) {
    w["R"] = zero("linear polynomials are irreducible");
  } else if (n == 2) {
    w["R"] = k == 1 ? point(1, "R_2(1,H) asymp H log H", true) : point(Q(1, 2), "R_2(2,H) asymp H^{1/2}");
  } else if (k == 1) {
    w["R"] = point(n - 1, "R_n(1,H) asymp H^{n-1}");
  } else if (k == 2) {
    w["R"] = point(Q(2 * n - 3, 2), "R_n(2,H) asymp H^{n-3/2}");
  } else if (n == 3 && k == 3) {
    w["R"] = point(Q(2, 3), "R_3(3,H) asymp H^{2/3}");
  } else if (n == 4 && k == 3) {
    w["R"] = point(1, "R_4(3,H) asymp H log H", true);
  } else if (n == 4 && k == 4) {
    w["R"] = point(1, "R_4(4,H) asymp H");
  } else if (k == n && !odd) {
    w["R"] = range(Q(n, 8) + Q(2, n) - Q(1, 4), Q(2 * n - k - 1, 2), "H^{n/8+2/n-1/4} << R_n(n,H) << H^{n-(k+1)/2}");
  } else {
    w["R"] = range(compute_e(n, k), Q(2 * n - k - 1, 2), "H^{e(n,k)} << R_n(k,H) << H^{n-(k+1)/2}");
  }
  return w;
}

double FitReport::ratio_spread() const {
  if (!hlogh_ratios || hlogh_ratios->empty()) return std::nan("");
  auto [lo, hi] = std::minmax_element(hlogh_ratios->begin(), hlogh_ratios->end());
  return *hi / *lo;
}

FitReport fit_exponent(const std::vector<std::pair<long, std::uint64_t>>& points, bool hlogh) {
  FitReport r;
  std::set<long> hs;
  for (auto& [H, c] : points) {
    if (H < 1) throw ContractError("fit_exponent: H must be >= 1");
    if (!hs.insert(H).second) throw ContractError("fit_exponent: repeated H = " + std::to_string(H));
    if (c == 0)
      ++r.dropped_zero;
    else
      r.points.emplace_back(H, c);
  }
  if (r.points.size() < 3)
    throw InsufficientData("fit_exponent: " + std::to_string(r.points.size()) + " positive points, need 3");
  std::size_t N = r.points.size();
  double mx = 0, my = 0;
  std::vector<double> x, y;
  for (auto& [H, c] : r.points) {
    x.push_back(std::log(double(H)));
    y.push_back(std::log(double(c)));
    mx += x.back();
    my += y.back();
  }
  mx /= N;
  my /= N;
  double sxx = 0, sxy = 0, syy = 0;
  for (std::size_t i = 0; i < N; ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
    syy += (y[i] - my) * (y[i] - my);
  }
  r.slope = sxy / sxx;
  r.intercept = my - r.slope * mx;
  double ssr = 0;
  for (std::size_t i = 0; i < N; ++i) {
    double e = y[i] - r.intercept - r.slope * x[i];
    ssr += e * e;
  }
  r.stderr_ = std::sqrt(ssr / double(N - 2) / sxx);
  r.r_squared = syy > 0 ? 1.0 - ssr / syy : 1.0;
  if (hlogh) {
    std::vector<double> ratios;
    for (auto& [H, c] : r.points) {
      if (H <= 1) throw ContractError("fit_exponent: H ln H ratios need H > 1");
      ratios.push_back(double(c) / (double(H) * std::log(double(H))));
    }
    r.hlogh_ratios = std::move(ratios);
  }
  return r;
}

const CellReport& ComparisonReport::cell(const std::string& q, int k) const {
  for (auto& c : cells)
    if (c.quantity == q && c.k == k) return c;
  throw ContractError("ComparisonReport: no cell " + q + "(" + std::to_string(k) + ")");
}

std::size_t ComparisonReport::flagged() const {
  return std::count_if(cells.begin(), cells.end(), [](const CellReport& c) { return c.status == "flag"; });
}

ComparisonReport compare(const CensusTable& table, double slack, double ratio_limit) {
  if (table.heights.size() < 3) throw ContractError("compare: need at least 3 heights");
  table.check_invariants();
  ComparisonReport rep;
  rep.n = table.n;
  rep.heights = table.heights;
  rep.slack = slack;
  rep.ratio_limit = ratio_limit;
  for (int k = 1; k <= table.n; ++k) {
    auto windows = theory_windows(table.n, k);
    for (const char* q : {"D", "I", "R"}) {
      CellReport c;
      c.quantity = q;
      c.k = k;
      c.window = windows.at(q);
      std::vector<std::pair<long, std::uint64_t>> pts;
      for (long H : table.heights) {
        std::uint64_t v = c.quantity == "D" ? table.D(k, H) : c.quantity == "I" ? table.I(k, H) : table.R(k, H);
        c.counts.push_back(v);
        pts.emplace_back(H, v);
      }
      if (c.window.exact_zero) {
        bool allz = std::all_of(c.counts.begin(), c.counts.end(), [](std::uint64_t v) { return v == 0; });
        c.status = allz ? "exact-zero" : "flag";
        if (!allz) c.note = "nonzero count where the count must vanish";
        rep.cells.push_back(std::move(c));
        continue;
      }
      c.lo = c.window.lower.get_d() - slack;
      c.hi = c.window.upper.get_d() + slack;
      try {
        bool ratios = c.window.log_factor && std::all_of(pts.begin(), pts.end(), [](auto& p) { return p.first > 1; });
        c.fit = fit_exponent(pts, ratios);
      } catch (const InsufficientData& e) {
        c.status = "insufficient-data";
        c.note = e.what();
        rep.cells.push_back(std::move(c));
        continue;
      }
      if (c.window.log_factor && c.fit->hlogh_ratios) {
        double spread = c.fit->ratio_spread();
        c.status = spread <= ratio_limit ? "pass" : "flag";
        c.note = "H ln H ratio spread " + num(spread);
      } else {
        c.status = c.fit->slope >= c.lo && c.fit->slope <= c.hi ? "pass" : "flag";
        if (c.window.one_sided) c.note = "one-sided";
      }
      if (c.fit->dropped_zero) c.note += (c.note.empty() ? "" : "; ") + std::to_string(c.fit->dropped_zero) + " zero cells excluded";
      rep.cells.push_back(std::move(c));
    }
  }
  return rep;
}

std::string ComparisonReport::to_json() const {
  std::ostringstream o;
  o << "{\"n\": " << n << ", \"heights\": [";
  for (std::size_t i = 0; i < heights.size(); ++i) o << (i ? ", " : "") << heights[i];
  o << "], \"slack\": " << num(slack) << ", \"ratio_limit\": " << num(ratio_limit) << ", \"cells\": [";
  for (std::size_t i = 0; i < cells.size(); ++i) {
    const CellReport& c = cells[i];
    o << (i ? ", " : "") << "{\"quantity\": \"" << c.quantity << "\", \"k\": " << c.k << ", \"counts\": [";
    for (std::size_t j = 0; j < c.counts.size(); ++j) o << (j ? ", " : "") << c.counts[j];
    o << "], \"slope\": " << (c.fit ? num(c.fit->slope) : "null")
      << ", \"stderr\": " << (c.fit ? num(c.fit->stderr_) : "null")
      << ", \"r_squared\": " << (c.fit ? num(c.fit->r_squared) : "null");
    o << ", \"window\": {\"lower\": \"" << c.window.lower.get_str() << "\", \"upper\": \"" << c.window.upper.get_str()
      << "\", \"lo\": " << num(c.lo) << ", \"hi\": " << num(c.hi) << ", \"source\": " << json_str(c.window.source)
      << ", \"one_sided\": " << (c.window.one_sided ? "true" : "false")
      << ", \"log_factor\": " << (c.window.log_factor ? "true" : "false")
      << ", \"exact_zero\": " << (c.window.exact_zero ? "true" : "false") << "}";
    if (c.fit && c.fit->hlogh_ratios) {
      o << ", \"hlogh_ratios\": [";
      for (std::size_t j = 0; j < c.fit->hlogh_ratios->size(); ++j) o << (j ? ", " : "") << num((*c.fit->hlogh_ratios)[j]);
      o << "]";
    }
    o << ", \"status\": \"" << c.status << "\"";
    if (!c.note.empty()) o << ", \"note\": " << json_str(c.note);
    o << "}";
  }
  o << "]}";
  return o.str();
}

}  // namespace domroots
