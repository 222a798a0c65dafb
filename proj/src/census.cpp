#include "domroots/census.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <filesystem>
#include <fstream>
#include <limits>
#include <mutex>
#include <optional>
#include <sstream>
#include <thread>

#include "domroots/errors.hpp"
#include "domroots/factor_int.hpp"
#include "domroots/poly_core.hpp"
#include "fast_roots.hpp"

namespace domroots {

namespace {

constexpr std::int64_t kFastCoeffLimit = std::int64_t(1) << 24;

IntPoly poly_from(const std::int64_t* a, int n) {
  std::vector<mpz_class> c(static_cast<std::size_t>(n) + 1);
  for (int i = 0; i < n; ++i) c[i] = static_cast<long>(a[i]);
  c[n] = 1;
  return IntPoly(std::move(c));
}

unsigned subset_sum_mask(const std::vector<int>& degs, int n) {
  std::vector<char> s(n + 1, 0);
  s[0] = 1;
  for (int d : degs)
    for (int t = n; t >= d; --t)
      if (s[t - d]) s[t] = 1;
  unsigned mask = 0;
  for (int m = 1; m <= n / 2; ++m)
    if (s[m]) mask |= 1u << m;
  return mask;
}

struct Outcome {
  int k = 0;
  bool irreducible = false;
  bool fast = false;
  unsigned mask = 0;
};

struct Counters {
  std::uint64_t fast = 0, escalated = 0, audited = 0;
  void add(const Counters& o) {
    fast += o.fast;
    escalated += o.escalated;
    audited += o.audited;
  }
};

// r^k <= M(f) <= sqrt(n+1) H for the certified lower end r of the house
void check_height_filter_exact(const IntPoly& f, const ModulusProfile& p, long h) {
  if (p.classes.empty()) return;
  mpq_class lo2 = p.classes.front().lo2, pw = 1;
  for (int i = 0; i < p.dominant_count(); ++i) pw *= lo2;
  mpq_class rhs = mpq_class(f.degree() + 1) * h * h;
  if (pw > rhs)
    throw InvariantViolation("height filter violated by " + f.to_string() + ": r(f)^k exceeds sqrt(n+1) H");
}

struct Classifier {
  const RootConfig& cfg;
  bool use_fast;

  // a[0..n-1] are the non-leading coefficients of a monic f, h = max |a_i|.
  Outcome run(const std::int64_t* a, int n, long h, bool want_irr, bool want_mask, bool audit, Counters& ctr) const {
    Outcome o;
    int v = 0;
    while (v < n && a[v] == 0) ++v;
    if (v == n) {  // x^n
      o.k = n;
      o.irreducible = n == 1;
      o.fast = true;
      for (int m = 1; m <= n / 2; ++m) o.mask |= 1u << m;
      ++ctr.fast;
      return o;
    }
    const int m = n - v;
    const std::int64_t* g = a + v;
    bool need_factors = v == 0 && (want_irr || want_mask);
    fast::Result fr;
    if (use_fast && m <= fast::kMaxDegree && h < kFastCoeffLimit) fr = fast::classify(g, m, need_factors && m <= 4);

    std::optional<IntPoly> fpoly;
    auto F = [&]() -> const IntPoly& {
      if (!fpoly) fpoly = poly_from(a, n);
      return *fpoly;
    };

    if (fr.certified) {
      o.k = fr.k;
      o.fast = true;
      ++ctr.fast;
      double lhs = std::pow(fr.top_lo, 2.0 * o.k), rhs = double(n + 1) * double(h) * double(h);
      if (lhs > rhs * (1 + 1e-9))
        throw InvariantViolation("height filter violated by " + F().to_string());
    } else {
      ++ctr.escalated;
      ModulusProfile p = modulus_profile(poly_from(g, m), cfg);
      o.k = p.dominant_count();
      check_height_filter_exact(poly_from(g, m), p, h);
    }

    bool factors_fast = fr.certified && fr.factor_known && v == 0;
    if (want_irr) {
      if (v > 0)
        o.irreducible = false;
      else
        o.irreducible = factors_fast ? fr.irreducible : is_irreducible(F());
    }
    if (want_mask) o.mask = factors_fast ? fr.factor_mask : subset_sum_mask(factor_monic(F()).degrees(), n);

    if (audit && o.fast) {
      ++ctr.audited;
      IntPoly gp = poly_from(g, m);
      ModulusProfile p = modulus_profile(gp, cfg);
      if (p.dominant_count() != o.k)
        throw InvariantViolation("fast-path audit mismatch on " + F().to_string() + ": screen k = " +
                                 std::to_string(o.k) + ", certified k = " + std::to_string(p.dominant_count()));
      check_height_filter_exact(gp, p, h);
      if (factors_fast && want_irr && is_irreducible(F()) != o.irreducible)
        throw InvariantViolation("fast-path audit mismatch on irreducibility of " + F().to_string());
      if (factors_fast && want_mask && subset_sum_mask(factor_monic(F()).degrees(), n) != o.mask)
        throw InvariantViolation("fast-path audit mismatch on factor degrees of " + F().to_string());
    }
    return o;
  }
};

// ---- sharded enumeration ----

struct Box {
  int n;
  long H;
  std::uint64_t width;   // 2H + 1
  int top;               // coefficients fixed per shard
  std::uint64_t shards;  // width^top
  std::uint64_t inner;   // width^(n - top)

  Box(int n_, long H_) : n(n_), H(H_), width(2 * static_cast<std::uint64_t>(H_) + 1), top(std::min(n_, 2)) {
    shards = 1;
    for (int i = 0; i < top; ++i) shards *= width;
    inner = 1;
    for (int i = top; i < n; ++i) inner *= width;
  }

  // Visit every polynomial of the shard: fn(a, h, global_index)
  template <class Fn>
  void visit(std::uint64_t s, Fn&& fn) const {
    std::int64_t a[fast::kMaxDegree * 2 + 2];
    std::uint64_t t = s;
    for (int j = 0; j < top; ++j) {
      a[n - 1 - j] = static_cast<std::int64_t>(t % width) - H;
      t /= width;
    }
    int free_n = n - top;
    for (int i = 0; i < free_n; ++i) a[i] = -H;
    for (std::uint64_t idx = 0; idx < inner; ++idx) {
      long h = 0;
      for (int i = 0; i < n; ++i) h = std::max<long>(h, std::labs(static_cast<long>(a[i])));
      fn(a, h, s * inner + idx);
      int i = 0;
      while (i < free_n && a[i] == H) a[i++] = -H;
      if (i < free_n) ++a[i];
    }
  }
};

struct ShardRunner {
  const Box& box;
  unsigned threads;
  std::uint64_t stop_after;
  std::vector<char>& done;

  // work(s) computes and merges shard s; shards marked done are skipped.
  template <class Work>
  void run(Work&& work) {
    std::atomic<std::uint64_t> next{0};
    std::atomic<std::uint64_t> completed{0};
    std::atomic<bool> abort{false};
    std::exception_ptr err;
    std::mutex err_mu;
    auto worker = [&]() {
      try {
        while (!abort.load()) {
          if (stop_after && completed.load() >= stop_after) return;
          std::uint64_t s = next.fetch_add(1);
          if (s >= box.shards) return;
          if (done[s]) continue;
          work(s);
          completed.fetch_add(1);
        }
      } catch (...) {
        std::lock_guard<std::mutex> lk(err_mu);
        if (!err) err = std::current_exception();
        abort = true;
      }
    };
    unsigned nt = std::max(1u, threads);
    if (nt == 1) {
      worker();
    } else {
      std::vector<std::thread> pool;
      for (unsigned t = 0; t < nt; ++t) pool.emplace_back(worker);
      for (auto& th : pool) th.join();
    }
    if (err) std::rethrow_exception(err);
  }
};

// ---- checkpoint (little-endian) ----

constexpr char kMagic[4] = {'D', 'R', 'C', 'K'};
constexpr std::uint32_t kCheckpointVersion = 1;

std::uint64_t fnv1a(const std::string& bytes) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

void put_u64(std::string& out, std::uint64_t v) {
  for (int i = 0; i < 8; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}
void put_u32(std::string& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}

struct Reader {
  const std::string& s;
  std::size_t pos = 0;
  std::uint64_t u64() {
    if (pos + 8 > s.size()) throw CheckpointError("checkpoint truncated");
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v |= std::uint64_t(static_cast<unsigned char>(s[pos + i])) << (8 * i);
    pos += 8;
    return v;
  }
  std::uint32_t u32() {
    if (pos + 4 > s.size()) throw CheckpointError("checkpoint truncated");
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i) v |= std::uint32_t(static_cast<unsigned char>(s[pos + i])) << (8 * i);
    pos += 4;
    return v;
  }
};

struct CensusState {
  std::vector<char> done;
  std::vector<std::uint64_t> dbin, ibin;  // (k - 1) * (H + 1) + h
  Counters ctr;
  std::uint64_t shards_done = 0;
};

void write_checkpoint(const std::string& path, std::uint64_t hash, const Box& box, const CensusState& st) {
  std::string out(kMagic, 4);
  put_u32(out, kCheckpointVersion);
  put_u64(out, hash);
  put_u32(out, static_cast<std::uint32_t>(box.n));
  put_u64(out, static_cast<std::uint64_t>(box.H));
  put_u64(out, box.shards);
  put_u64(out, st.shards_done);
  std::string bitmap((box.shards + 7) / 8, '\0');
  for (std::uint64_t s = 0; s < box.shards; ++s)
    if (st.done[s]) bitmap[s / 8] = static_cast<char>(bitmap[s / 8] | (1 << (s % 8)));
  out += bitmap;
  put_u64(out, st.dbin.size());
  for (auto v : st.dbin) put_u64(out, v);
  for (auto v : st.ibin) put_u64(out, v);
  put_u64(out, st.ctr.fast);
  put_u64(out, st.ctr.escalated);
  put_u64(out, st.ctr.audited);
  put_u64(out, fnv1a(out));

  std::string tmp = path + ".tmp";
  {
    std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
    if (!f) throw CheckpointError("cannot write checkpoint " + tmp);
    f.write(out.data(), static_cast<std::streamsize>(out.size()));
    if (!f) throw CheckpointError("cannot write checkpoint " + tmp);
  }
  std::filesystem::rename(tmp, path);
}

bool read_checkpoint(const std::string& path, std::uint64_t hash, const Box& box, CensusState& st) {
  std::ifstream f(path, std::ios::binary);
  if (!f) return false;
  std::string s((std::istreambuf_iterator<char>(f)), std::istreambuf_iterator<char>());
  if (s.size() < 12 || s.compare(0, 4, std::string(kMagic, 4)) != 0) throw CheckpointError("not a census checkpoint: " + path);
  std::string body = s.substr(0, s.size() - 8);
  Reader tail{s, s.size() - 8};
  if (tail.u64() != fnv1a(body)) throw CheckpointError("checkpoint checksum mismatch: " + path);
  Reader r{body, 4};
  if (r.u32() != kCheckpointVersion) throw CheckpointError("unsupported checkpoint version");
  if (r.u64() != hash) throw CheckpointError("checkpoint was written for a different configuration");
  if (r.u32() != static_cast<std::uint32_t>(box.n) || r.u64() != static_cast<std::uint64_t>(box.H) ||
      r.u64() != box.shards)
    throw CheckpointError("checkpoint geometry mismatch");
  st.shards_done = r.u64();
  std::size_t nbytes = (box.shards + 7) / 8;
  if (r.pos + nbytes > body.size()) throw CheckpointError("checkpoint truncated");
  std::uint64_t counted = 0;
  for (std::uint64_t sh = 0; sh < box.shards; ++sh) {
    st.done[sh] = (static_cast<unsigned char>(body[r.pos + sh / 8]) >> (sh % 8)) & 1;
    counted += st.done[sh];
  }
  if (counted != st.shards_done) throw CheckpointError("checkpoint shard count mismatch");
  r.pos += nbytes;
  if (r.u64() != st.dbin.size()) throw CheckpointError("checkpoint bin size mismatch");
  for (auto& v : st.dbin) v = r.u64();
  for (auto& v : st.ibin) v = r.u64();
  st.ctr.fast = r.u64();
  st.ctr.escalated = r.u64();
  st.ctr.audited = r.u64();
  return true;
}

std::vector<long> normalized_heights(const CensusConfig& cfg) {
  std::vector<long> hs = cfg.heights.empty() ? std::vector<long>{cfg.max_height} : cfg.heights;
  std::sort(hs.begin(), hs.end());
  hs.erase(std::unique(hs.begin(), hs.end()), hs.end());
  for (long h : hs)
    if (h < 0 || h > cfg.max_height) throw ContractError("census: reported heights must lie in [0, max_height]");
  return hs;
}

void validate(const CensusConfig& cfg) {
  if (cfg.n < 1 || cfg.n > fast::kMaxDegree) throw ContractError("census: degree must be in 1..8");
  if (cfg.max_height < 0) throw ContractError("census: max_height must be >= 0");
  std::uint64_t card = census_cardinality(cfg.n, cfg.max_height);
  if (card > cfg.budget) throw BudgetExceeded("census box exceeds the budget", card);
}

}  // namespace

Classification classify_one(const IntPoly& f, const RootConfig& cfg) {
  if (f.degree() < 1 || !f.is_monic()) throw ContractError("classify_one: expected a monic polynomial of degree >= 1");
  Classification c;
  c.height = height(f);
  int n = f.degree();
  bool small = n <= fast::kMaxDegree;
  std::int64_t a[fast::kMaxDegree];
  long h = 0;
  for (int i = 0; small && i < n; ++i) {
    if (abs(f[i]) >= kFastCoeffLimit) {
      small = false;
      break;
    }
    a[i] = f[i].get_si();
    h = std::max<long>(h, std::labs(static_cast<long>(a[i])));
  }
  if (small) {
    Counters ctr;
    Outcome o = Classifier{cfg, true}.run(a, n, h, true, false, false, ctr);
    c.k = o.k;
    c.irreducible = o.irreducible;
    c.fast_path = o.fast;
    return c;
  }
  c.k = dominant_root_count(f, cfg);
  c.irreducible = is_irreducible(f);
  return c;
}

std::uint64_t census_cardinality(int n, long max_height) {
  std::uint64_t w = 2 * static_cast<std::uint64_t>(max_height) + 1, c = 1;
  for (int i = 0; i < n; ++i) {
    if (c > UINT64_MAX / w) return UINT64_MAX;
    c *= w;
  }
  return c;
}

unsigned default_thread_count() {
  if (const char* env = std::getenv("DOMROOTS_THREADS")) {
    long v = std::strtol(env, nullptr, 10);
    if (v > 0) return static_cast<unsigned>(v);
  }
  unsigned hw = std::thread::hardware_concurrency();
  return hw ? hw : 1;
}

std::uint64_t census_config_hash(const CensusConfig& cfg) {
  std::ostringstream os;
  os << "census;n=" << cfg.n << ";H=" << cfg.max_height << ";heights=";
  for (long h : normalized_heights(cfg)) os << h << ',';
  os << ";fast=" << cfg.use_fast_path << ";audit=" << cfg.audit_target << ";ceiling=" << cfg.roots.precision_ceiling
     << ";reduction=" << cfg.roots.use_power_reduction;
  return fnv1a(os.str());
}

std::size_t CensusTable::index(int k, long H) const {
  auto it = std::find(heights.begin(), heights.end(), H);
  if (k < 1 || k > n || it == heights.end()) throw ContractError("census table has no cell (k=" + std::to_string(k) + ", H=" + std::to_string(H) + ")");
  return static_cast<std::size_t>(k - 1) * heights.size() + static_cast<std::size_t>(it - heights.begin());
}

std::uint64_t CensusTable::D(int k, long H) const { return d[index(k, H)]; }
std::uint64_t CensusTable::I(int k, long H) const { return i[index(k, H)]; }

void CensusTable::check_invariants() const {
  for (std::size_t hi = 0; hi < heights.size(); ++hi) {
    long H = heights[hi];
    std::uint64_t sum = 0;
    for (int k = 1; k <= n; ++k) {
      sum += D(k, H);
      if (I(k, H) > D(k, H)) throw InvariantViolation("I exceeds D at k=" + std::to_string(k));
      if (k % 2 == 1 && n % k != 0 && I(k, H) != 0)
        throw InvariantViolation("nonzero I_" + std::to_string(n) + "(" + std::to_string(k) + ", " + std::to_string(H) +
                                 ") for odd k not dividing n");
      if (hi > 0 && (D(k, H) < D(k, heights[hi - 1]) || I(k, H) < I(k, heights[hi - 1])))
        throw InvariantViolation("census counts decrease in H");
    }
    if (sum != census_cardinality(n, H))
      throw InvariantViolation("partition identity fails at H=" + std::to_string(H));
  }
}

std::string CensusTable::to_csv() const {
  std::ostringstream os;
  os << "n,k,H,D,I,R\n";
  for (int k = 1; k <= n; ++k)
    for (long H : heights) os << n << ',' << k << ',' << H << ',' << D(k, H) << ',' << I(k, H) << ',' << R(k, H) << '\n';
  char hash[32];
  std::snprintf(hash, sizeof hash, "%016llx", static_cast<unsigned long long>(config_hash));
  os << "# version=" << DOMROOTS_VERSION << "\n# config_hash=" << hash << "\n# fast=" << stats.fast
     << " escalated=" << stats.escalated << " audited=" << stats.audited << "\n# shards=" << stats.shards_done << '/'
     << stats.shards_total << " complete=" << (stats.complete ? 1 : 0) << "\n# wall_seconds=" << stats.wall_seconds
     << '\n';
  return os.str();
}

CensusTable CensusTable::from_csv(const std::string& text) {
  std::istringstream is(text);
  std::string line;
  if (!std::getline(is, line) || line.rfind("n,k,H,D,I,R", 0) != 0) throw ParseError("census csv: missing header");
  struct Row {
    int n, k;
    long H;
    std::uint64_t D, I, R;
  };
  std::vector<Row> rows;
  CensusTable t;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    if (line[0] == '#') {
      auto p = line.find("config_hash=");
      if (p != std::string::npos) t.config_hash = std::stoull(line.substr(p + 12), nullptr, 16);
      continue;
    }
    Row r;
    char c1, c2, c3, c4, c5;
    std::istringstream ls(line);
    if (!(ls >> r.n >> c1 >> r.k >> c2 >> r.H >> c3 >> r.D >> c4 >> r.I >> c5 >> r.R) || r.I + r.R != r.D)
      throw ParseError("census csv: bad row '" + line + "'");
    rows.push_back(r);
  }
  if (rows.empty()) throw ParseError("census csv: no rows");
  t.n = rows.front().n;
  for (auto& r : rows) {
    if (r.n != t.n || r.k < 1 || r.k > t.n) throw ParseError("census csv: inconsistent degree column");
    t.heights.push_back(r.H);
  }
  std::sort(t.heights.begin(), t.heights.end());
  t.heights.erase(std::unique(t.heights.begin(), t.heights.end()), t.heights.end());
  std::size_t cells = static_cast<std::size_t>(t.n) * t.heights.size();
  if (rows.size() != cells) throw ParseError("census csv: expected one row per (k, H)");
  t.d.assign(cells, 0);
  t.i.assign(cells, 0);
  std::vector<char> seen(cells, 0);
  for (auto& r : rows) {
    std::size_t ix = t.index(r.k, r.H);
    if (seen[ix]++) throw ParseError("census csv: duplicate cell");
    t.d[ix] = r.D;
    t.i[ix] = r.I;
  }
  t.stats.complete = true;
  return t;
}

CensusTable run_census(const CensusConfig& cfg) {
  validate(cfg);
  auto t0 = std::chrono::steady_clock::now();
  const std::vector<long> heights = normalized_heights(cfg);
  const int n = cfg.n;
  const long H = cfg.max_height;
  const Box box(n, H);
  const std::size_t nbins = static_cast<std::size_t>(n) * (H + 1);
  const std::uint64_t hash = census_config_hash(cfg);
  const std::uint64_t total = box.shards * box.inner;
  const std::uint64_t audit_rate = std::max<std::uint64_t>(1, cfg.audit_target ? total / cfg.audit_target : total + 1);
  const bool audit_on = cfg.audit_target > 0;

  CensusState st;
  st.done.assign(box.shards, 0);
  st.dbin.assign(nbins, 0);
  st.ibin.assign(nbins, 0);
  if (!cfg.checkpoint_path.empty()) read_checkpoint(cfg.checkpoint_path, hash, box, st);

  const std::uint64_t every =
      cfg.checkpoint_every ? cfg.checkpoint_every : std::max<std::uint64_t>(1, box.shards / 50);
  std::uint64_t since_ckpt = 0;
  std::mutex mu;
  Classifier cls{cfg.roots, cfg.use_fast_path};

  ShardRunner runner{box, cfg.threads ? cfg.threads : default_thread_count(), cfg.stop_after_shards, st.done};
  try {
    if (st.shards_done < box.shards) {
      runner.run([&](std::uint64_t s) {
        std::vector<std::uint64_t> dl(nbins, 0), il(nbins, 0);
        Counters ctr;
        box.visit(s, [&](const std::int64_t* a, long h, std::uint64_t gidx) {
          bool audit = audit_on && gidx % audit_rate == 0;
          Outcome o = cls.run(a, n, h, true, false, audit, ctr);
          std::size_t b = static_cast<std::size_t>(o.k - 1) * (H + 1) + static_cast<std::size_t>(h);
          ++dl[b];
          if (o.irreducible) ++il[b];
        });
        std::lock_guard<std::mutex> lk(mu);
        for (std::size_t j = 0; j < nbins; ++j) {
          st.dbin[j] += dl[j];
          st.ibin[j] += il[j];
        }
        st.ctr.add(ctr);
        st.done[s] = 1;
        ++st.shards_done;
        if (!cfg.checkpoint_path.empty() && ++since_ckpt >= every) {
          write_checkpoint(cfg.checkpoint_path, hash, box, st);
          since_ckpt = 0;
        }
      });
    }
  } catch (...) {
    std::lock_guard<std::mutex> lk(mu);
    if (!cfg.checkpoint_path.empty()) write_checkpoint(cfg.checkpoint_path, hash, box, st);
    throw;
  }
  if (!cfg.checkpoint_path.empty()) write_checkpoint(cfg.checkpoint_path, hash, box, st);

  CensusTable t;
  t.n = n;
  t.heights = heights;
  t.config_hash = hash;
  t.d.assign(static_cast<std::size_t>(n) * heights.size(), 0);
  t.i.assign(t.d.size(), 0);
  for (int k = 1; k <= n; ++k) {
    std::uint64_t cd = 0, ci = 0;
    std::size_t hi = 0;
    for (long h = 0; h <= H; ++h) {
      std::size_t b = static_cast<std::size_t>(k - 1) * (H + 1) + static_cast<std::size_t>(h);
      cd += st.dbin[b];
      ci += st.ibin[b];
      while (hi < heights.size() && heights[hi] == h) {
        t.d[static_cast<std::size_t>(k - 1) * heights.size() + hi] = cd;
        t.i[static_cast<std::size_t>(k - 1) * heights.size() + hi] = ci;
        ++hi;
      }
    }
  }
  t.stats.fast = st.ctr.fast;
  t.stats.escalated = st.ctr.escalated;
  t.stats.audited = st.ctr.audited;
  t.stats.shards_done = st.shards_done;
  t.stats.shards_total = box.shards;
  t.stats.complete = st.shards_done == box.shards;
  t.stats.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (t.stats.complete) t.check_invariants();
  return t;
}

std::uint64_t FTable::F(int m, long H) const {
  auto it = std::find(heights.begin(), heights.end(), H);
  if (m < 1 || m > n / 2 || it == heights.end()) throw ContractError("F table has no such cell");
  return f[static_cast<std::size_t>(m - 1) * heights.size() + static_cast<std::size_t>(it - heights.begin())];
}

std::string FTable::to_csv() const {
  std::ostringstream os;
  os << "n,m,H,F\n";
  for (int m = 1; m <= n / 2; ++m)
    for (long H : heights) os << n << ',' << m << ',' << H << ',' << F(m, H) << '\n';
  char hash[32];
  std::snprintf(hash, sizeof hash, "%016llx", static_cast<unsigned long long>(config_hash));
  os << "# version=" << DOMROOTS_VERSION << "\n# config_hash=" << hash << "\n# fast=" << stats.fast
     << " escalated=" << stats.escalated << "\n# wall_seconds=" << stats.wall_seconds << '\n';
  return os.str();
}

FTable run_fcount(const CensusConfig& cfg) {
  validate(cfg);
  if (cfg.n < 2) throw ContractError("fcount: degree must be >= 2");
  auto t0 = std::chrono::steady_clock::now();
  const std::vector<long> heights = normalized_heights(cfg);
  const int n = cfg.n, mmax = n / 2;
  const long H = cfg.max_height;
  const Box box(n, H);
  const std::size_t nbins = static_cast<std::size_t>(mmax) * (H + 1);
  std::vector<std::uint64_t> bins(nbins, 0);
  std::vector<char> done(box.shards, 0);
  Counters total;
  std::mutex mu;
  Classifier cls{cfg.roots, cfg.use_fast_path};
  ShardRunner runner{box, cfg.threads ? cfg.threads : default_thread_count(), 0, done};
  runner.run([&](std::uint64_t s) {
    std::vector<std::uint64_t> local(nbins, 0);
    Counters ctr;
    box.visit(s, [&](const std::int64_t* a, long h, std::uint64_t) {
      Outcome o = cls.run(a, n, h, false, true, false, ctr);
      for (int m = 1; m <= mmax; ++m)
        if (o.mask & (1u << m)) ++local[static_cast<std::size_t>(m - 1) * (H + 1) + static_cast<std::size_t>(h)];
    });
    std::lock_guard<std::mutex> lk(mu);
    for (std::size_t j = 0; j < nbins; ++j) bins[j] += local[j];
    total.add(ctr);
  });
  FTable t;
  t.n = n;
  t.heights = heights;
  t.config_hash = census_config_hash(cfg) ^ 0x46434f554e54ULL;  // distinct from the census of the same box
  t.f.assign(static_cast<std::size_t>(mmax) * heights.size(), 0);
  for (int m = 1; m <= mmax; ++m) {
    std::uint64_t c = 0;
    std::size_t hi = 0;
    for (long h = 0; h <= H; ++h) {
      c += bins[static_cast<std::size_t>(m - 1) * (H + 1) + static_cast<std::size_t>(h)];
      while (hi < heights.size() && heights[hi] == h) t.f[static_cast<std::size_t>(m - 1) * heights.size() + hi++] = c;
    }
  }
  t.stats.fast = total.fast;
  t.stats.escalated = total.escalated;
  t.stats.shards_done = t.stats.shards_total = box.shards;
  t.stats.complete = true;
  t.stats.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return t;
}

std::uint64_t count_F(int n, int m, long H, unsigned threads) {
  if (m < 1 || 2 * m > n) throw ContractError("count_F: need 1 <= m <= n/2");
  CensusConfig cfg;
  cfg.n = n;
  cfg.max_height = H;
  cfg.threads = threads;
  return run_fcount(cfg).F(m, H);
}

std::vector<mpz_class> j_coefficient_bounds(int n, const mpq_class& B2) {
  if (B2 <= 0) throw ContractError("count_J: B^2 must be positive");
  std::vector<mpz_class> bounds(static_cast<std::size_t>(n));
  // bound for a_{n-i} is floor(sqrt(C(n,i)^2 B2^i))
  for (int i = 1; i <= n; ++i) {
    mpz_class c = binomial(n, i);
    mpq_class v = c * c;
    for (int j = 0; j < i; ++j) v *= B2;
    mpz_class fl = v.get_num() / v.get_den();
    mpz_class r;
    mpz_sqrt(r.get_mpz_t(), fl.get_mpz_t());
    bounds[static_cast<std::size_t>(n - i)] = r;
  }
  return bounds;
}

std::uint64_t count_J(int n, int s, const mpq_class& B2, const RootConfig& cfg, std::uint64_t budget) {
  if (n < 1 || s < 0 || 2 * s > n) throw ContractError("count_J: need n >= 1 and 0 <= s <= n/2");
  std::vector<mpz_class> bounds = j_coefficient_bounds(n, B2);
  mpz_class card = 1;
  for (auto& b : bounds) card *= 2 * b + 1;
  if (card > mpz_class(std::to_string(budget)))
    throw BudgetExceeded("count_J box exceeds the budget",
                         card.fits_ulong_p() ? card.get_ui() : std::numeric_limits<std::uint64_t>::max());
  std::vector<mpz_class> a(bounds.size());
  for (std::size_t i = 0; i < a.size(); ++i) a[i] = -bounds[i];
  std::uint64_t count = 0;
  while (true) {
    std::vector<mpz_class> c = a;
    c.emplace_back(1);
    IntPoly f(std::move(c));
    if (is_irreducible(f)) {
      bool inside = f.trailing() == 0 || house_compare(f, B2, cfg) != Ordering::Greater;
      if (inside && static_cast<int>(f.degree() - real_root_count(f)) == 2 * s) ++count;
    }
    std::size_t i = 0;
    while (i < a.size() && a[i] == bounds[i]) {
      a[i] = -bounds[i];
      ++i;
    }
    if (i == a.size()) break;
    ++a[i];
  }
  return count;
}

}  // namespace domroots
