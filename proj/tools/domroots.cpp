#include <chrono>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>

#include "CLI11.hpp"
#include "domroots/analysis.hpp"
#include "domroots/census.hpp"
#include "domroots/errors.hpp"
#include "domroots/exact_roots.hpp"
#include "domroots/factor_int.hpp"
#include "domroots/families.hpp"
#include "domroots/poly_core.hpp"
#include "json.hpp"

using namespace domroots;
using json = nlohmann::ordered_json;

namespace {

enum Exit { kOk = 0, kFailure = 1, kUsage = 2, kBudget = 3, kInvariant = 4 };

struct Globals {
  bool json = false;
};

std::string hex64(std::uint64_t h) {
  char b[32];
  std::snprintf(b, sizeof b, "%016llx", static_cast<unsigned long long>(h));
  return b;
}

std::uint64_t fnv1a(const std::string& s) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

std::vector<long> parse_heights(const std::string& s) {
  std::vector<long> out;
  std::stringstream ss(s);
  std::string tok;
  while (std::getline(ss, tok, ','))
    if (!tok.empty()) {
      std::size_t pos = 0;
      long v = std::stol(tok, &pos);
      if (pos != tok.size()) throw ParseError("bad height '" + tok + "'");
      out.push_back(v);
    }
  return out;
}

void write_text(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("cannot write " + path);
  os << text;
}

std::string read_text(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw ParseError("cannot read " + path);
  std::stringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

json stats_json(const CensusStats& s) {
  return {{"fast", s.fast},
          {"escalated", s.escalated},
          {"audited", s.audited},
          {"escalation_rate", s.escalation_rate()},
          {"shards_done", s.shards_done},
          {"shards_total", s.shards_total},
          {"complete", s.complete},
          {"wall_seconds", s.wall_seconds}};
}

// ---- classify

struct ClassifyArgs {
  std::string poly;
  unsigned long ceiling = 1UL << 16;
};

int cmd_classify(const Globals& g, const ClassifyArgs& a) {
  IntPoly f = parse_poly_any(a.poly);
  if (f.degree() < 1 || !f.is_monic()) throw ContractError("classify: expected a monic polynomial of degree >= 1");
  RootConfig cfg;
  cfg.precision_ceiling = a.ceiling;
  ModulusProfile prof = modulus_profile(f, cfg);
  Factorization fac = factor_monic(f);
  bool irr = fac.factors.size() == 1 && fac.factors[0].multiplicity == 1;
  std::optional<FergusonStructure> fer;
  if (irr && f.degree() > 1) fer = ferguson_structure_check(f, cfg);
  int k = prof.dominant_count();
  if (g.json) {
    json j;
    j["polynomial"] = f.to_string();
    j["coefficients"] = json::parse(f.to_json());
    j["degree"] = f.degree();
    j["height"] = height(f).get_str();
    j["k"] = k;
    j["irreducible"] = irr;
    j["house"] = {{"lo", dyadic_to_decimal(prof.house_lo())}, {"hi", dyadic_to_decimal(prof.house_hi())}};
    j["profile"] = json::parse(prof.to_json());
    j["factorization"] = json::parse(fac.to_json());
    if (fer)
      j["ferguson"] = {{"g", json::parse(fer->g.to_json())}, {"k", fer->k}};
    else
      j["ferguson"] = nullptr;
    j["version"] = DOMROOTS_VERSION;
    std::cout << j.dump() << '\n';
    return kOk;
  }
  std::cout << "polynomial: " << f.to_string() << '\n'
            << "degree: " << f.degree() << '\n'
            << "height: " << height(f).get_str() << '\n'
            << "k: " << k << '\n'
            << "r(f) in [" << dyadic_to_decimal(prof.house_lo()) << ", " << dyadic_to_decimal(prof.house_hi()) << "]\n"
            << "zero_count: " << prof.zero_count << '\n'
            << "classes:\n";
  for (auto& c : prof.classes)
    std::cout << "  " << c.count << (c.count == 1 ? " root" : " roots") << ", |z| in [" << dyadic_to_decimal(c.lo)
              << ", " << dyadic_to_decimal(c.hi) << "]\n";
  std::cout << "irreducible: " << (irr ? "yes" : "no") << '\n' << "factorization: " << fac.to_string() << '\n';
  if (fer) std::cout << "ferguson: f(x) = g(x^" << fer->k << "), g = " << fer->g.to_string() << '\n';
  return kOk;
}

// ---- census and fcount

struct CensusArgs {
  int degree = 0;
  long max_height = 0;
  std::string heights, out, checkpoint;
  unsigned threads = 0;
  std::uint64_t budget = std::uint64_t(1) << 31;
  std::uint64_t audit = 20000;
  unsigned long ceiling = 1UL << 16;
  bool no_fast = false;
};

CensusConfig census_config(const CensusArgs& a) {
  CensusConfig c;
  c.n = a.degree;
  c.max_height = a.max_height;
  c.heights = parse_heights(a.heights);
  c.threads = a.threads;
  c.budget = a.budget;
  c.audit_target = a.audit;
  c.roots.precision_ceiling = a.ceiling;
  c.use_fast_path = !a.no_fast;
  c.checkpoint_path = a.checkpoint;
  return c;
}

int cmd_census(const Globals& g, const CensusArgs& a) {
  CensusConfig c = census_config(a);
  CensusTable t = run_census(c);
  std::string csv = t.to_csv();
  if (g.json) {
    if (!a.out.empty()) write_text(a.out, csv);
    json j;
    j["n"] = t.n;
    j["heights"] = t.heights;
    j["config_hash"] = hex64(t.config_hash);
    j["version"] = DOMROOTS_VERSION;
    j["stats"] = stats_json(t.stats);
    json rows = json::array();
    for (int k = 1; k <= t.n; ++k)
      for (long H : t.heights) rows.push_back({{"k", k}, {"H", H}, {"D", t.D(k, H)}, {"I", t.I(k, H)}, {"R", t.R(k, H)}});
    j["cells"] = rows;
    if (!a.out.empty()) j["out"] = a.out;
    std::cout << j.dump() << '\n';
    return kOk;
  }
  write_text(a.out, csv);
  if (!a.out.empty())
    std::cerr << "census n=" << t.n << " H<=" << c.max_height << ": " << (t.stats.fast + t.stats.escalated)
              << " polynomials, escalation rate " << t.stats.escalation_rate() << ", " << t.stats.wall_seconds
              << " s -> " << a.out << '\n';
  return kOk;
}

int cmd_fcount(const Globals& g, const CensusArgs& a) {
  CensusConfig c = census_config(a);
  FTable t = run_fcount(c);
  std::string csv = t.to_csv();
  if (g.json) {
    if (!a.out.empty()) write_text(a.out, csv);
    json rows = json::array();
    for (int m = 1; m <= t.n / 2; ++m)
      for (long H : t.heights) rows.push_back({{"m", m}, {"H", H}, {"F", t.F(m, H)}});
    json j = {{"n", t.n}, {"heights", t.heights}, {"config_hash", hex64(t.config_hash)},
              {"version", DOMROOTS_VERSION}, {"stats", stats_json(t.stats)}, {"cells", rows}};
    std::cout << j.dump() << '\n';
    return kOk;
  }
  write_text(a.out, csv);
  return kOk;
}

// ---- families

struct FamilyArgs {
  std::string name;
  int degree = 0, k = 0;
  long max_height = 0;
  std::uint64_t limit = 0;
  std::string out;
  long m_min = 0, m_max = 0;
  bool capelli_only = false, reducible_top = false;
};

int cmd_families(const Globals& g, const FamilyArgs& a) {
  FamilySpec s;
  s.name = family_from_string(a.name);
  s.n = a.degree;
  s.k = a.k;
  if (s.name == FamilyName::R44Quartic || s.name == FamilyName::I44Biquadratic) {
    if ((s.n && s.n != 4) || (s.k && s.k != 4)) throw ContractError("families: r44 and i44 have n = k = 4");
    s.n = s.k = 4;
  }
  s.H = a.max_height;
  if (a.m_min || a.m_max) s.m_range = std::pair<long, long>{a.m_min, a.m_max ? a.m_max : std::numeric_limits<long>::max()};
  s.capelli_only = a.capelli_only;
  s.reducible_top = a.reducible_top;

  std::ostringstream cfgs;
  cfgs << "families;name=" << to_string(s.name) << ";n=" << s.n << ";k=" << s.k << ";H=" << s.H << ";limit=" << a.limit
       << ";m=" << a.m_min << "," << a.m_max << ";capelli_only=" << s.capelli_only << ";top=" << s.reducible_top;
  json meta = {{"meta",
                {{"version", DOMROOTS_VERSION},
                 {"config_hash", hex64(fnv1a(cfgs.str()))},
                 {"family", to_string(s.name)},
                 {"n", s.n},
                 {"k", s.k},
                 {"H", s.H},
                 {"limit", a.limit}}}};

  std::ofstream file;
  std::ostream* os = &std::cout;
  if (!a.out.empty() && a.out != "-") {
    file.open(a.out, std::ios::binary);
    if (!file) throw std::runtime_error("cannot write " + a.out);
    os = &file;
  }
  bool to_stdout = os == &std::cout;
  if (!to_stdout || g.json) *os << meta.dump() << '\n';
  FamilyStats st = generate(s, [&](const FamilyMember& m) {
    if (!to_stdout || g.json)
      *os << m.to_json() << '\n';
    else
      *os << m.f.to_string() << '\n';
    return true;
  }, a.limit);
  json summary = {{"emitted", st.emitted},        {"candidates", st.candidates},
                  {"dropped_height", st.dropped_height}, {"truncated", st.truncated}};
  if (s.name == FamilyName::EvenCircle || s.name == FamilyName::OddCircle) {
    summary["m_range"] = {st.m_lo, st.m_hi};
    summary["m_range_empty"] = st.m_range_empty();
  }
  if (g.json && !to_stdout)
    std::cout << summary.dump() << '\n';
  else if (!g.json)
    std::cerr << "emitted " << st.emitted << " members" << (st.truncated ? " (limit reached)" : "")
              << (st.m_range_empty() && (s.name == FamilyName::EvenCircle || s.name == FamilyName::OddCircle)
                      ? ", m-range empty"
                      : "")
              << (st.dropped_height ? ", dropped " + std::to_string(st.dropped_height) + " above H" : "") << '\n';
  return kOk;
}

// ---- jcount

struct JArgs {
  int degree = 0, s = 0;
  std::string bound, bound2;
  std::uint64_t budget = std::uint64_t(1) << 31;
};

mpq_class parse_rational(const std::string& t) {
  mpq_class q;
  if (q.set_str(t, 10) != 0) throw ParseError("bad rational '" + t + "'");
  q.canonicalize();
  return q;
}

int cmd_jcount(const Globals& g, const JArgs& a) {
  if (a.bound.empty() == a.bound2.empty()) throw ContractError("jcount: give exactly one of --bound, --bound-squared");
  mpq_class B2 = a.bound.empty() ? parse_rational(a.bound2) : parse_rational(a.bound) * parse_rational(a.bound);
  std::uint64_t c = count_J(a.degree, a.s, B2, {}, a.budget);
  if (g.json)
    std::cout << json{{"n", a.degree}, {"s", a.s}, {"B2", B2.get_str()}, {"J", c}, {"version", DOMROOTS_VERSION}}.dump()
              << '\n';
  else
    std::cout << "J_" << a.degree << "(" << a.s << ", B^2 = " << B2.get_str() << ") = " << c << '\n';
  return kOk;
}

// ---- fit

struct FitArgs {
  std::string table, out;
  double slack = 0.35, ratio_limit = 3.0;
};

int cmd_fit(const Globals& g, const FitArgs& a) {
  CensusTable t = CensusTable::from_csv(read_text(a.table));
  ComparisonReport rep = compare(t, a.slack, a.ratio_limit);
  json j = json::parse(rep.to_json());
  j["version"] = DOMROOTS_VERSION;
  j["table_config_hash"] = hex64(t.config_hash);
  if (!a.out.empty()) write_text(a.out, j.dump(2) + "\n");
  if (g.json) {
    if (a.out.empty()) std::cout << j.dump() << '\n';
  } else {
    for (auto& c : rep.cells) {
      std::printf("%s_%d(%d,.)  ", c.quantity.c_str(), rep.n, c.k);
      if (c.fit)
        std::printf("slope %.4f +- %.4f", c.fit->slope, c.fit->stderr_);
      else
        std::printf("%-22s", "no fit");
      std::printf("  window [%s, %s]  %s%s%s\n", c.window.lower.get_str().c_str(), c.window.upper.get_str().c_str(),
                  c.status.c_str(), c.note.empty() ? "" : "  ", c.note.c_str());
    }
  }
  return kOk;
}

// ---- bench

struct BenchArgs {
  int degree = 4;
  long max_height = 20;
  std::uint64_t sample = 0;
  unsigned threads = 0, compare_threads = 0;
  unsigned long ceiling = 0;
  std::uint64_t seed = 1;
};

int bench_sample(const Globals& g, const BenchArgs& a) {
  std::mt19937_64 rng(a.seed);
  std::uniform_int_distribution<long> cd(-a.max_height, a.max_height);
  RootConfig cfg;
  if (a.ceiling) cfg.precision_ceiling = a.ceiling;
  std::uint64_t fast = 0, escalated = 0, errors = 0, mismatches = 0;
  auto t0 = std::chrono::steady_clock::now();
  for (std::uint64_t s = 0; s < a.sample; ++s) {
    std::vector<mpz_class> c(static_cast<std::size_t>(a.degree) + 1);
    for (auto& x : c) x = cd(rng);
    c.back() = 1;
    IntPoly f(std::move(c));
    try {
      Classification r = classify_one(f, cfg);
      (r.fast_path ? fast : escalated) += 1;
      if (a.ceiling && !r.fast_path) {
        Classification ref = classify_one(f);
        if (ref.k != r.k || ref.irreducible != r.irreducible) ++mismatches;
      }
    } catch (const EscalationError&) {
      ++errors;
      ++escalated;
    }
  }
  double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  double rate = fast + escalated ? double(escalated) / double(fast + escalated) : 0.0;
  json j = {{"mode", "sample"},         {"n", a.degree},         {"H", a.max_height},  {"sample", a.sample},
            {"seed", a.seed},           {"fast", fast},          {"escalated", escalated},
            {"escalation_rate", rate},  {"escalation_errors", errors}, {"misclassified", mismatches},
            {"seconds", secs},          {"polys_per_second", secs > 0 ? double(a.sample) / secs : 0.0},
            {"version", DOMROOTS_VERSION}};
  if (g.json)
    std::cout << j.dump() << '\n';
  else
    std::cout << "sample of " << a.sample << " at n=" << a.degree << ", H=" << a.max_height << ": "
              << j["polys_per_second"].get<double>() << " polys/s, escalation rate " << rate << ", escalation errors "
              << errors << ", misclassified " << mismatches << '\n';
  if (mismatches) throw InvariantViolation("bench: a result under the precision ceiling differs from the reference");
  return kOk;
}

int cmd_bench(const Globals& g, const BenchArgs& a) {
  if (a.sample) return bench_sample(g, a);
  CensusConfig c;
  c.n = a.degree;
  c.max_height = a.max_height;
  c.threads = a.threads;
  if (a.ceiling) c.roots.precision_ceiling = a.ceiling;
  CensusTable t = run_census(c);
  double polys = double(t.stats.fast + t.stats.escalated);
  json j = {{"mode", "census"},
            {"n", a.degree},
            {"H", a.max_height},
            {"threads", a.threads ? a.threads : default_thread_count()},
            {"polynomials", t.stats.fast + t.stats.escalated},
            {"seconds", t.stats.wall_seconds},
            {"polys_per_second", t.stats.wall_seconds > 0 ? polys / t.stats.wall_seconds : 0.0},
            {"escalation_rate", t.stats.escalation_rate()},
            {"audited", t.stats.audited},
            {"config_hash", hex64(t.config_hash)},
            {"version", DOMROOTS_VERSION}};
  bool identical = true;
  if (a.compare_threads) {
    CensusConfig c2 = c;
    c2.threads = a.compare_threads;
    CensusTable t2 = run_census(c2);
    identical = t.same_counts(t2);
    j["compare_threads"] = a.compare_threads;
    j["compare_seconds"] = t2.stats.wall_seconds;
    j["speedup"] = t2.stats.wall_seconds > 0 ? t.stats.wall_seconds / t2.stats.wall_seconds : 0.0;
    j["identical"] = identical;
  }
  if (g.json) {
    std::cout << j.dump() << '\n';
  } else {
    std::cout << "census n=" << a.degree << ", H=" << a.max_height << ": " << j["polynomials"].get<std::uint64_t>()
              << " polynomials in " << t.stats.wall_seconds << " s (" << j["threads"].get<unsigned>() << " threads), "
              << j["polys_per_second"].get<double>() << " polys/s, escalation rate " << t.stats.escalation_rate()
              << '\n';
    if (a.compare_threads)
      std::cout << "with " << a.compare_threads << " threads: " << j["compare_seconds"].get<double>()
                << " s, speedup " << j["speedup"].get<double>() << ", tables " << (identical ? "identical" : "DIFFER")
                << '\n';
  }
  if (!identical) throw InvariantViolation("bench: census tables differ between thread counts");
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Dominant-root census and classification tools"};
  app.set_version_flag("--version", std::string(DOMROOTS_VERSION));
  app.require_subcommand(1);
  app.fallthrough();
  Globals g;
  app.add_flag("--json", g.json, "Machine-readable output");

  ClassifyArgs ca;
  auto* classify = app.add_subcommand("classify", "Classify one monic polynomial");
  classify->add_option("poly", ca.poly, "Polynomial, e.g. \"x^3 + 8\" or [8, 0, 0, 1]")->required();
  classify->add_option("--precision-ceiling", ca.ceiling, "Precision ceiling in bits");

  CensusArgs cea;
  auto* census = app.add_subcommand("census", "Exhaustive census of D, I, R");
  census->add_option("--degree", cea.degree)->required();
  census->add_option("--max-height", cea.max_height)->required();
  census->add_option("--heights", cea.heights, "Comma-separated reported heights");
  census->add_option("--out", cea.out, "CSV output (default stdout)");
  census->add_option("--checkpoint", cea.checkpoint);
  census->add_option("--threads", cea.threads, "0 uses $DOMROOTS_THREADS or the hardware");
  census->add_option("--budget", cea.budget);
  census->add_option("--audit-target", cea.audit);
  census->add_option("--precision-ceiling", cea.ceiling);
  census->add_flag("--no-fast-path", cea.no_fast);

  CensusArgs fa;
  auto* fcount = app.add_subcommand("fcount", "Count reducible polynomials with a factor of each degree");
  fcount->add_option("--degree", fa.degree)->required();
  fcount->add_option("--max-height", fa.max_height)->required();
  fcount->add_option("--heights", fa.heights);
  fcount->add_option("--out", fa.out);
  fcount->add_option("--threads", fa.threads);
  fcount->add_option("--budget", fa.budget);

  FamilyArgs fm;
  auto* families = app.add_subcommand("families", "Generate verified family members (JSON lines)");
  families->add_option("--name", fm.name, "power-compose, even-circle, odd-circle, r44, i44")->required();
  families->add_option("--degree", fm.degree);
  families->add_option("--k", fm.k);
  families->add_option("--max-height", fm.max_height)->required();
  families->add_option("--limit", fm.limit, "Stop after this many members (0: no cap)");
  families->add_option("--out", fm.out);
  families->add_option("--m-min", fm.m_min);
  families->add_option("--m-max", fm.m_max);
  families->add_flag("--capelli-only", fm.capelli_only);
  families->add_flag("--reducible-top", fm.reducible_top);

  JArgs ja;
  auto* jcount = app.add_subcommand("jcount", "Count irreducible f with r(f) <= B and 2s non-real roots");
  jcount->add_option("--degree", ja.degree)->required();
  jcount->add_option("--s", ja.s)->required();
  jcount->add_option("--bound", ja.bound, "B as an integer or p/q");
  jcount->add_option("--bound-squared", ja.bound2, "B^2 as an integer or p/q");
  jcount->add_option("--budget", ja.budget);

  FitArgs fta;
  auto* fit = app.add_subcommand("fit", "Fit exponents of a census table against the theory windows");
  fit->add_option("--table", fta.table)->required();
  fit->add_option("--out", fta.out);
  fit->add_option("--slack", fta.slack);
  fit->add_option("--ratio-limit", fta.ratio_limit);

  BenchArgs ba;
  auto* bench = app.add_subcommand("bench", "Throughput and escalation rate");
  bench->add_option("--degree", ba.degree);
  bench->add_option("--max-height", ba.max_height);
  bench->add_option("--sample", ba.sample, "Random sample size (0: full census)");
  bench->add_option("--threads", ba.threads);
  bench->add_option("--compare-threads", ba.compare_threads, "Rerun with this many threads and compare");
  bench->add_option("--precision-ceiling", ba.ceiling);
  bench->add_option("--seed", ba.seed);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? kOk : kUsage;
  }

  try {
    if (*classify) return cmd_classify(g, ca);
    if (*census) return cmd_census(g, cea);
    if (*fcount) return cmd_fcount(g, fa);
    if (*families) return cmd_families(g, fm);
    if (*jcount) return cmd_jcount(g, ja);
    if (*fit) return cmd_fit(g, fta);
    if (*bench) return cmd_bench(g, ba);
  } catch (const BudgetExceeded& e) {
    std::cerr << "budget: " << e.what() << " (cardinality " << e.cardinality() << ")\n";
    return kBudget;
  } catch (const InvariantViolation& e) {
    std::cerr << "invariant violation: " << e.what() << '\n';
    return kInvariant;
  } catch (const ParseError& e) {
    std::cerr << "parse error: " << e.what() << '\n';
    return kUsage;
  } catch (const ContractError& e) {
    std::cerr << "usage: " << e.what() << '\n';
    return kUsage;
  } catch (const DomainError& e) {
    std::cerr << "usage: " << e.what() << '\n';
    return kUsage;
  } catch (const EscalationError& e) {
    std::cerr << "escalation: " << e.what() << " for " << e.polynomial() << '\n';
    return kFailure;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kFailure;
  }
  return kUsage;
}
