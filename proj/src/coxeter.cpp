#include "bordify/coxeter.hpp"

#include <algorithm>
#include <array>
#include <cassert>
#include <cstdlib>
#include <deque>
#include <set>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

namespace bordify {

namespace {

long long env_limit(const char* name, long long fallback) {
  if (const char* v = std::getenv(name)) {
    char* end = nullptr;
    long long parsed = std::strtoll(v, &end, 10);
    if (end != v && parsed > 0) return parsed;
  }
  return fallback;
}

struct WordHash {
  std::size_t operator()(const Word& w) const {
    std::size_t h = 1469598103934665603ull;
    for (Gen g : w) {
      h ^= static_cast<std::size_t>(g) + 0x9e3779b9;
      h *= 1099511628211ull;
    }
    return h;
  }
};

long long floor_div(long long a, long long b) {
  long long q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}

// ---------------------------------------------------------------------------
// Per-component reduction engines.  Words handed to an engine use local
// generator indices 0..r-1 and the result is the ShortLex-minimal reduced word.

struct EngineBase {
  virtual ~EngineBase() = default;
  virtual Word reduce(const Word& w) const = 0;
  virtual bool geometric() const { return false; }
  virtual int families() const { return 0; }
  virtual long long scale(int) const { return 1; }
  virtual std::vector<long long> base_coords() const { return {}; }
  virtual std::vector<long long> coords(const Word&) const { return {}; }
  virtual std::optional<WallCoord> wall(const Word&) const { return std::nullopt; }
  /// Word of the alcove containing the point vals/den (same scaling as
  /// coords); points on a wall resolve to the alcove just above it.
  virtual Word at(const std::vector<long long>&, long long) const {
    throw internal_error("engine has no alcove model");
  }
};

/// Exhaustive braid/nil rewriting (Tits), memoized.  Correct for every matrix;
/// the closure search is exponential for long words in infinite groups, which
/// is why affine components get dedicated engines below.
struct TitsEngine : EngineBase {
  std::vector<std::vector<int>> m;
  std::size_t closure_limit;
  std::size_t memo_limit;
  mutable std::unordered_map<Word, Word, WordHash> memo;
  mutable std::mutex mu;

  TitsEngine(std::vector<std::vector<int>> mat, long long limit)
      : m(std::move(mat)),
        closure_limit(static_cast<std::size_t>(limit)),
        memo_limit(static_cast<std::size_t>(limit)) {}

  static std::optional<std::size_t> nil_position(const Word& w) {
    for (std::size_t i = 0; i + 1 < w.size(); ++i)
      if (w[i] == w[i + 1]) return i;
    return std::nullopt;
  }

  Word reduce(const Word& input) const override {
    {
      std::lock_guard<std::mutex> lock(mu);
      auto it = memo.find(input);
      if (it != memo.end()) return it->second;
    }
    Word current = input;
    for (;;) {
      if (auto p = nil_position(current)) {
        current.erase(current.begin() + *p, current.begin() + *p + 2);
        continue;
      }
      // Braid closure of a nil-free word; restart if any member has a nil pair.
      std::set<Word> closure{current};
      std::deque<Word> queue{current};
      bool restarted = false;
      while (!queue.empty()) {
        Word u = queue.front();
        queue.pop_front();
        for (std::size_t i = 0; i + 1 < u.size() && !restarted; ++i) {
          Gen s = u[i], t = u[i + 1];
          if (s == t) continue;
          int mm = m[s][t];
          if (mm == 0 || i + mm > u.size()) continue;
          bool alt = true;
          for (int k = 0; k < mm; ++k)
            if (u[i + k] != ((k % 2 == 0) ? s : t)) { alt = false; break; }
          if (!alt) continue;
          Word v = u;
          for (int k = 0; k < mm; ++k) v[i + k] = (k % 2 == 0) ? t : s;
          if (nil_position(v)) {
            auto p = *nil_position(v);
            v.erase(v.begin() + p, v.begin() + p + 2);
            current = v;
            restarted = true;
            break;
          }
          if (closure.insert(v).second) queue.push_back(v);
        }
        if (restarted) break;
        if (closure.size() > closure_limit)
          throw horizon_error("braid closure exceeded the rewrite budget; "
                              "raise BORDIFY_MEMO_LIMIT or use a smaller word");
      }
      if (restarted) continue;
      Word best = *closure.begin();
      std::lock_guard<std::mutex> lock(mu);
      if (memo.size() + closure.size() < memo_limit) {
        for (const Word& u : closure) memo.emplace(u, best);
        memo.emplace(input, best);
      }
      return best;
    }
  }
};

/// Infinite dihedral group acting on the line, alcoves (k, k+1) with walls at
/// the integers.  Local generator g reflects at g in {0, 1}.  Coordinates are
/// doubled so the alcove sample points are odd integers.
struct DihedralInfEngine : EngineBase {
  static long long apply(Gen g, long long x) { return 4 * g - x; }

  Word reduce(const Word& w) const override {
    Word out;
    for (Gen g : w) {
      if (!out.empty() && out.back() == g) out.pop_back();
      else out.push_back(g);
    }
    return out;
  }

  bool geometric() const override { return true; }
  int families() const override { return 1; }
  long long scale(int) const override { return 2; }
  std::vector<long long> base_coords() const override { return {1}; }

  std::vector<long long> coords(const Word& w) const override {
    long long p = 1;
    for (auto it = w.rbegin(); it != w.rend(); ++it) p = apply(*it, p);
    return {p};
  }

  std::optional<WallCoord> wall(const Word& refl) const override {
    long long sign = 1, off = 0;  // composed map x -> sign*x + off
    for (auto it = refl.rbegin(); it != refl.rend(); ++it) {
      sign = -sign;
      off = 4 * (*it) - off;
    }
    if (sign != -1 || off % 4 != 0) return std::nullopt;
    return WallCoord{0, off / 4};
  }

  Word at(const std::vector<long long>& vals, long long den) const override {
    if (vals.size() != 1) throw usage_error("dihedral point needs one coordinate");
    // Nudge strictly off every wall so on-wall points resolve to the alcove
    // above; interior points stay in their alcove.
    long long x = 4 * vals[0] + 1;
    const long long d = 4 * den;
    auto len = [d](long long p) { return std::llabs(floor_div(p, 2 * d)); };
    Word out;
    long long l = len(x);
    while (l > 0) {
      bool stepped = false;
      for (Gen g = 0; g < 2 && !stepped; ++g) {
        long long q = 4 * g * d - x;
        long long lq = len(q);
        if (lq < l) {
          out.push_back(g);
          x = q;
          l = lq;
          stepped = true;
        }
      }
      internal_check(stepped, "alcove walk found no descent");
    }
    return out;
  }
};

/// Affine Weyl group of rank 3 with all orders 3, acting on the plane.  The
/// three wall families are the level sets of x, y and x+y; coordinates are
/// tripled so the fundamental alcove sample point is (1, 1).  Elements biject
/// with alcoves, so reduction just walks the sample point home, always taking
/// the smallest descent.
struct AffineA2Engine : EngineBase {
  using P = std::array<long long, 2>;

  static P apply(Gen g, P p) {
    switch (g) {
      case 0: return {-p[0], p[0] + p[1]};
      case 1: return {p[0] + p[1], -p[1]};
      default: return {3 - p[1], 3 - p[0]};
    }
  }

  static long long length_of(P p) {
    return std::llabs(floor_div(p[0], 3)) + std::llabs(floor_div(p[1], 3)) +
           std::llabs(floor_div(p[0] + p[1], 3));
  }

  Word reduce(const Word& w) const override {
    P p{1, 1};
    for (auto it = w.rbegin(); it != w.rend(); ++it) p = apply(*it, p);
    Word out;
    long long len = length_of(p);
    while (len > 0) {
      bool stepped = false;
      for (Gen g = 0; g < 3 && !stepped; ++g) {
        P q = apply(g, p);
        long long lq = length_of(q);
        if (lq < len) {
          out.push_back(g);
          p = q;
          len = lq;
          stepped = true;
        }
      }
      internal_check(stepped, "affine reduction found no descent");
    }
    internal_check(p[0] == 1 && p[1] == 1, "affine reduction missed the base alcove");
    return out;
  }

  bool geometric() const override { return true; }
  int families() const override { return 3; }
  long long scale(int) const override { return 3; }
  std::vector<long long> base_coords() const override { return {1, 1, 2}; }

  std::vector<long long> coords(const Word& w) const override {
    P p{1, 1};
    for (auto it = w.rbegin(); it != w.rend(); ++it) p = apply(*it, p);
    return {p[0], p[1], p[0] + p[1]};
  }

  std::optional<WallCoord> wall(const Word& refl) const override {
    // Compose the affine map v -> Mv + t.
    std::array<std::array<long long, 2>, 2> M{{{1, 0}, {0, 1}}};
    std::array<long long, 2> t{0, 0};
    auto pre = [&](Gen g) {
      // map := gen_g o map
      std::array<std::array<long long, 2>, 2> G{};
      std::array<long long, 2> gt{0, 0};
      switch (g) {
        case 0: G = {{{-1, 0}, {1, 1}}}; break;
        case 1: G = {{{1, 1}, {0, -1}}}; break;
        default: G = {{{0, -1}, {-1, 0}}}; gt = {3, 3}; break;
      }
      std::array<std::array<long long, 2>, 2> nm{};
      for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
          nm[i][j] = G[i][0] * M[0][j] + G[i][1] * M[1][j];
      std::array<long long, 2> nt{G[0][0] * t[0] + G[0][1] * t[1] + gt[0],
                                  G[1][0] * t[0] + G[1][1] * t[1] + gt[1]};
      M = nm;
      t = nt;
    };
    for (auto it = refl.rbegin(); it != refl.rend(); ++it) pre(*it);

    static const std::array<std::array<std::array<long long, 2>, 2>, 3> fams{{
        {{{-1, 0}, {1, 1}}},
        {{{1, 1}, {0, -1}}},
        {{{0, -1}, {-1, 0}}},
    }};
    for (int f = 0; f < 3; ++f) {
      if (M == fams[f]) {
        // family functional evaluated at p and at T(p) sums to 2*3k
        std::array<long long, 2> p{1, 1};
        std::array<long long, 2> ip{M[0][0] * p[0] + M[0][1] * p[1] + t[0],
                                    M[1][0] * p[0] + M[1][1] * p[1] + t[1]};
        auto fv = [f](const std::array<long long, 2>& v) {
          return f == 0 ? v[0] : (f == 1 ? v[1] : v[0] + v[1]);
        };
        long long s = fv(p) + fv(ip);
        if (s % 6 != 0) return std::nullopt;
        return WallCoord{f, s / 6};
      }
    }
    return std::nullopt;
  }

  Word at(const std::vector<long long>& vals, long long den) const override {
    if (vals.size() != 3) throw usage_error("affine plane point needs three coordinates");
    if (vals[2] != vals[0] + vals[1])
      throw usage_error("affine plane point has inconsistent third coordinate");
    // Nudge strictly off every wall so on-wall points resolve to the alcove
    // above in each family; interior points stay in their alcove.
    P p{4 * vals[0] + 1, 4 * vals[1] + 1};
    const long long d = 4 * den;
    auto len = [d](P q) {
      return std::llabs(floor_div(q[0], 3 * d)) + std::llabs(floor_div(q[1], 3 * d)) +
             std::llabs(floor_div(q[0] + q[1], 3 * d));
    };
    auto step = [d](Gen g, P q) -> P {
      switch (g) {
        case 0: return {-q[0], q[0] + q[1]};
        case 1: return {q[0] + q[1], -q[1]};
        default: return {3 * d - q[1], 3 * d - q[0]};
      }
    };
    Word out;
    long long l = len(p);
    while (l > 0) {
      bool stepped = false;
      for (Gen g = 0; g < 3 && !stepped; ++g) {
        P q = step(g, p);
        long long lq = len(q);
        if (lq < l) {
          out.push_back(g);
          p = q;
          l = lq;
          stepped = true;
        }
      }
      internal_check(stepped, "alcove walk found no descent");
    }
    return out;
  }
};

bool finite_component(const CoxeterMatrix& M, const std::vector<Gen>& comp) {
  const std::size_t n = comp.size();
  if (n == 1) return true;
  std::map<Gen, int> pos;
  for (std::size_t i = 0; i < n; ++i) pos[comp[i]] = static_cast<int>(i);
  std::vector<std::vector<int>> nbr(n);
  std::vector<std::pair<std::pair<int, int>, int>> edges;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      int mm = M.m[comp[i]][comp[j]];
      if (mm == 2) continue;
      if (mm == 0) return false;
      nbr[i].push_back(static_cast<int>(j));
      nbr[j].push_back(static_cast<int>(i));
      edges.push_back({{static_cast<int>(i), static_cast<int>(j)}, mm});
    }
  if (n == 2) return true;
  if (edges.size() != n - 1) return false;  // a cycle
  std::vector<int> deg(n);
  for (std::size_t i = 0; i < n; ++i) deg[i] = static_cast<int>(nbr[i].size());
  int branches = 0, branch = -1;
  for (std::size_t i = 0; i < n; ++i) {
    if (deg[i] >= 4) return false;
    if (deg[i] == 3) { ++branches; branch = static_cast<int>(i); }
  }
  if (branches > 1) return false;
  if (branches == 1) {
    for (auto& e : edges)
      if (e.second != 3) return false;
    std::vector<int> arms;
    for (int start : nbr[branch]) {
      int prev = branch, cur = start, len = 1;
      while (deg[cur] == 2) {
        int nxt = (nbr[cur][0] == prev) ? nbr[cur][1] : nbr[cur][0];
        prev = cur;
        cur = nxt;
        ++len;
      }
      arms.push_back(len);
    }
    std::sort(arms.begin(), arms.end());
    if (arms[0] != 1) return false;
    if (arms[1] == 1) return true;            // D series
    return arms[1] == 2 && arms[2] <= 4;      // E6, E7, E8
  }
  // A path; read off the labels from one endpoint.
  int end = -1;
  for (std::size_t i = 0; i < n; ++i)
    if (deg[i] == 1) { end = static_cast<int>(i); break; }
  if (end < 0) return false;
  std::vector<int> labels;
  int prev = -1, cur = end;
  while (labels.size() < n - 1) {
    int nxt = -1;
    for (int cand : nbr[cur])
      if (cand != prev) { nxt = cand; break; }
    if (nxt < 0) return false;
    labels.push_back(M.m[comp[cur]][comp[nxt]]);
    prev = cur;
    cur = nxt;
  }
  int big = 0, fours = 0, fives = 0;
  for (int l : labels) {
    if (l >= 6) ++big;
    else if (l == 4) ++fours;
    else if (l == 5) ++fives;
  }
  if (big > 0 || fours + fives > 1) return false;
  if (fours == 1) {
    if (labels.front() == 4 || labels.back() == 4) return true;   // B/C series
    return labels.size() == 3 && labels[1] == 4;                  // F4
  }
  if (fives == 1) {
    if (labels.front() != 5 && labels.back() != 5) return false;
    return n <= 4;                                                // H3, H4
  }
  return true;  // A series
}

}  // namespace

// ---------------------------------------------------------------------------

void CoxeterMatrix::validate() const {
  if (rank <= 0) throw usage_error("coxeter matrix: rank must be positive");
  if (static_cast<int>(m.size()) != rank)
    throw usage_error("coxeter matrix: row count does not match rank");
  for (int i = 0; i < rank; ++i) {
    if (static_cast<int>(m[i].size()) != rank)
      throw usage_error("coxeter matrix: column count does not match rank");
    if (m[i][i] != 1) throw usage_error("coxeter matrix: diagonal entries must be 1");
    for (int j = 0; j < rank; ++j) {
      if (m[i][j] != m[j][i]) throw usage_error("coxeter matrix: must be symmetric");
      if (i != j && m[i][j] != 0 && m[i][j] < 2)
        throw usage_error("coxeter matrix: off-diagonal entries are >= 2 or 0");
    }
  }
}

CoxeterMatrix coxeter_a2() { return {2, {{1, 3}, {3, 1}}}; }
CoxeterMatrix coxeter_b2() { return {2, {{1, 4}, {4, 1}}}; }
CoxeterMatrix coxeter_i2(int m) { return {2, {{1, m}, {m, 1}}}; }
CoxeterMatrix coxeter_affine_a2() {
  return {3, {{1, 3, 3}, {3, 1, 3}, {3, 3, 1}}};
}
CoxeterMatrix coxeter_dihedral_inf() { return {2, {{1, 0}, {0, 1}}}; }

CoxeterMatrix coxeter_product(const CoxeterMatrix& a, const CoxeterMatrix& b) {
  CoxeterMatrix out;
  out.rank = a.rank + b.rank;
  out.m.assign(out.rank, std::vector<int>(out.rank, 2));
  for (int i = 0; i < a.rank; ++i)
    for (int j = 0; j < a.rank; ++j) out.m[i][j] = a.m[i][j];
  for (int i = 0; i < b.rank; ++i)
    for (int j = 0; j < b.rank; ++j) out.m[a.rank + i][a.rank + j] = b.m[i][j];
  return out;
}

struct CoxeterGroup::Impl {
  struct Comp {
    std::vector<Gen> gens;  // global indices, ascending
    std::unique_ptr<EngineBase> engine;
    int family_offset = 0;
  };

  std::vector<Comp> comps;
  std::vector<int> comp_of;   // generator -> component index
  std::vector<int> local_of;  // generator -> local index inside its component
  int total_families = 0;
  std::vector<long long> base;  // concatenated base coordinates
  long long ball_limit = 0;

  mutable std::mutex mu;
  mutable std::vector<std::vector<Word>> levels;  // levels[k] = elements of length k
  mutable std::map<int, std::vector<Reflection>> refl_cache;
  mutable std::map<TypeSet, std::vector<Word>> para_cache;
  mutable std::optional<std::vector<TypeSet>> spherical_cache;
  mutable std::optional<int> max_spherical_cache;
};

CoxeterGroup::CoxeterGroup(CoxeterMatrix m) : mat_(std::move(m)), impl_(new Impl) {
  mat_.validate();
  long long rewrite_limit = env_limit("BORDIFY_MEMO_LIMIT", 4'000'000);
  impl_->ball_limit = env_limit("BORDIFY_BALL_LIMIT", 4'000'000);

  // Components of the diagram: edges wherever the order is not 2.
  std::vector<int> comp_of(mat_.rank, -1);
  int ncomp = 0;
  for (int i = 0; i < mat_.rank; ++i) {
    if (comp_of[i] >= 0) continue;
    std::deque<int> queue{i};
    comp_of[i] = ncomp;
    while (!queue.empty()) {
      int u = queue.front();
      queue.pop_front();
      for (int v = 0; v < mat_.rank; ++v)
        if (v != u && comp_of[v] < 0 && mat_.m[u][v] != 2) {
          comp_of[v] = ncomp;
          queue.push_back(v);
        }
    }
    ++ncomp;
  }
  impl_->comp_of = comp_of;
  impl_->local_of.assign(mat_.rank, -1);
  impl_->comps.resize(ncomp);
  for (int g = 0; g < mat_.rank; ++g) {
    auto& comp = impl_->comps[comp_of[g]];
    impl_->local_of[g] = static_cast<int>(comp.gens.size());
    comp.gens.push_back(g);
  }

  int family_offset = 0;
  for (auto& comp : impl_->comps) {
    const std::size_t r = comp.gens.size();
    bool dinf = r == 2 && mat_.m[comp.gens[0]][comp.gens[1]] == 0;
    bool aff2 = r == 3 && mat_.m[comp.gens[0]][comp.gens[1]] == 3 &&
                mat_.m[comp.gens[0]][comp.gens[2]] == 3 &&
                mat_.m[comp.gens[1]][comp.gens[2]] == 3;
    if (dinf) {
      comp.engine = std::make_unique<DihedralInfEngine>();
    } else if (aff2) {
      comp.engine = std::make_unique<AffineA2Engine>();
    } else {
      std::vector<std::vector<int>> local(r, std::vector<int>(r));
      for (std::size_t i = 0; i < r; ++i)
        for (std::size_t j = 0; j < r; ++j)
          local[i][j] = mat_.m[comp.gens[i]][comp.gens[j]];
      comp.engine = std::make_unique<TitsEngine>(std::move(local), rewrite_limit);
    }
    comp.family_offset = family_offset;
    family_offset += comp.engine->families();
    auto bc = comp.engine->base_coords();
    impl_->base.insert(impl_->base.end(), bc.begin(), bc.end());
  }
  impl_->total_families = family_offset;
  impl_->levels.push_back({Word{}});
}

CoxeterGroup::~CoxeterGroup() = default;

Word CoxeterGroup::reduce(const Word& w) const {
  for (Gen g : w)
    if (g < 0 || g >= mat_.rank) throw usage_error("word uses an unknown generator");
  // Split across commuting components, reduce each, and merge ShortLex:
  // the merged head is always the smallest head among the component forms.
  std::vector<Word> parts(impl_->comps.size());
  for (Gen g : w) parts[impl_->comp_of[g]].push_back(impl_->local_of[g]);
  std::vector<Word> canon(parts.size());
  for (std::size_t c = 0; c < parts.size(); ++c)
    if (!parts[c].empty()) canon[c] = impl_->comps[c].engine->reduce(parts[c]);
  std::vector<std::size_t> at(parts.size(), 0);
  Word out;
  for (;;) {
    int best_comp = -1;
    Gen best_gen = 0;
    for (std::size_t c = 0; c < canon.size(); ++c) {
      if (at[c] >= canon[c].size()) continue;
      Gen g = impl_->comps[c].gens[canon[c][at[c]]];
      if (best_comp < 0 || g < best_gen) {
        best_comp = static_cast<int>(c);
        best_gen = g;
      }
    }
    if (best_comp < 0) break;
    out.push_back(best_gen);
    ++at[best_comp];
  }
  return out;
}

Word CoxeterGroup::product(const Word& a, const Word& b) const {
  Word w = a;
  w.insert(w.end(), b.begin(), b.end());
  return reduce(w);
}

Word CoxeterGroup::product(const Word& a, const Word& b, const Word& c) const {
  Word w = a;
  w.insert(w.end(), b.begin(), b.end());
  w.insert(w.end(), c.begin(), c.end());
  return reduce(w);
}

Word CoxeterGroup::inverse_of(const Word& w) const {
  Word r(w.rbegin(), w.rend());
  return reduce(r);
}

Word CoxeterGroup::reflection_through(const Word& g, Gen s) const {
  Word w = g;
  w.push_back(s);
  w.insert(w.end(), g.rbegin(), g.rend());
  return reduce(w);
}

bool CoxeterGroup::right_descends(const Word& w, Gen s) const {
  Word c = reduce(w);
  c.push_back(s);
  return reduce(c).size() < c.size();
}

bool CoxeterGroup::left_descends(Gen s, const Word& w) const {
  Word c = reduce(w);
  c.insert(c.begin(), s);
  return reduce(c).size() < c.size();
}

std::vector<Word> CoxeterGroup::ball(int radius) const {
  if (radius < 0) throw usage_error("ball radius must be nonnegative");
  std::lock_guard<std::mutex> lock(impl_->mu);
  auto& levels = impl_->levels;
  std::size_t total = 0;
  for (auto& l : levels) total += l.size();
  while (static_cast<int>(levels.size()) <= radius) {
    const auto& prev = levels.back();
    if (prev.empty()) break;  // the group is finite and exhausted
    std::set<Word> next;
    for (const Word& w : prev)
      for (Gen s = 0; s < mat_.rank; ++s) {
        Word c = w;
        c.push_back(s);
        Word r = reduce(c);
        if (r.size() == w.size() + 1) next.insert(std::move(r));
      }
    total += next.size();
    if (total > static_cast<std::size_t>(impl_->ball_limit))
      throw horizon_error("ball of radius " + std::to_string(radius) +
                          " exceeds the element budget; raise BORDIFY_BALL_LIMIT");
    levels.emplace_back(next.begin(), next.end());
  }
  std::vector<Word> out;
  for (int k = 0; k <= radius && k < static_cast<int>(levels.size()); ++k)
    out.insert(out.end(), levels[k].begin(), levels[k].end());
  return out;
}

std::vector<Reflection> CoxeterGroup::reflections_in_ball(int radius) const {
  {
    std::lock_guard<std::mutex> lock(impl_->mu);
    auto it = impl_->refl_cache.find(radius);
    if (it != impl_->refl_cache.end()) return it->second;
  }
  std::map<Word, Word> first_witness;
  for (const Word& w : ball(radius))
    for (Gen s = 0; s < mat_.rank; ++s) {
      Word t = reflection_through(w, s);
      first_witness.emplace(t, w);  // ball order makes the first witness minimal
    }
  std::vector<Reflection> out;
  out.reserve(first_witness.size());
  for (auto& [t, w] : first_witness) out.push_back({t, w});
  std::sort(out.begin(), out.end(), [](const Reflection& a, const Reflection& b) {
    if (a.element.size() != b.element.size()) return a.element.size() < b.element.size();
    return a.element < b.element;
  });
  std::lock_guard<std::mutex> lock(impl_->mu);
  impl_->refl_cache[radius] = out;
  return out;
}

Side CoxeterGroup::side_of(const Root& r, const Word& chamber) const {
  Word c = reduce(chamber);
  Word tc = product(r.reflection, c);
  bool on_plus = tc.size() > c.size();
  bool want_plus = r.sign == Sign::plus;
  return on_plus == want_plus ? Side::inside : Side::outside;
}

std::vector<TypeSet> CoxeterGroup::spherical_types() const {
  {
    std::lock_guard<std::mutex> lock(impl_->mu);
    if (impl_->spherical_cache) return *impl_->spherical_cache;
  }
  if (mat_.rank > 16)
    throw usage_error("spherical type enumeration supports rank <= 16");
  std::vector<TypeSet> out;
  for (unsigned mask = 0; mask < (1u << mat_.rank); ++mask) {
    TypeSet J;
    for (int g = 0; g < mat_.rank; ++g)
      if (mask & (1u << g)) J.push_back(g);
    if (is_spherical(J)) out.push_back(J);
  }
  std::sort(out.begin(), out.end(), [](const TypeSet& a, const TypeSet& b) {
    if (a.size() != b.size()) return a.size() < b.size();
    return a < b;
  });
  std::lock_guard<std::mutex> lock(impl_->mu);
  impl_->spherical_cache = out;
  return out;
}

bool CoxeterGroup::is_spherical(const TypeSet& J) const {
  for (Gen g : J)
    if (g < 0 || g >= mat_.rank) throw usage_error("type set uses an unknown generator");
  // Decompose J and classify each piece against the finite type list.
  std::vector<char> seen(mat_.rank, 0);
  for (Gen g : J) seen[g] = 1;
  std::vector<char> visited(mat_.rank, 0);
  for (Gen g : J) {
    if (visited[g]) continue;
    std::vector<Gen> comp;
    std::deque<Gen> queue{g};
    visited[g] = 1;
    while (!queue.empty()) {
      Gen u = queue.front();
      queue.pop_front();
      comp.push_back(u);
      for (Gen v : J)
        if (!visited[v] && mat_.m[u][v] != 2) {
          visited[v] = 1;
          queue.push_back(v);
        }
    }
    std::sort(comp.begin(), comp.end());
    if (!finite_component(mat_, comp)) return false;
  }
  return true;
}

std::vector<Word> CoxeterGroup::parabolic(const TypeSet& J) const {
  TypeSet key = J;
  std::sort(key.begin(), key.end());
  {
    std::lock_guard<std::mutex> lock(impl_->mu);
    auto it = impl_->para_cache.find(key);
    if (it != impl_->para_cache.end()) return it->second;
  }
  if (!is_spherical(key))
    throw usage_error("parabolic enumeration requires a spherical type set");
  std::set<Word> seen{Word{}};
  std::deque<Word> queue{Word{}};
  while (!queue.empty()) {
    Word w = queue.front();
    queue.pop_front();
    for (Gen s : key) {
      Word c = w;
      c.push_back(s);
      Word r = reduce(c);
      if (seen.insert(r).second) queue.push_back(r);
    }
    internal_check(seen.size() < 2'000'000, "parabolic enumeration runaway");
  }
  std::vector<Word> out(seen.begin(), seen.end());
  std::sort(out.begin(), out.end(), [](const Word& a, const Word& b) {
    if (a.size() != b.size()) return a.size() < b.size();
    return a < b;
  });
  std::lock_guard<std::mutex> lock(impl_->mu);
  impl_->para_cache[key] = out;
  return out;
}

Word CoxeterGroup::longest_in(const TypeSet& J) const {
  auto elems = parabolic(J);
  internal_check(!elems.empty(), "empty parabolic");
  const Word& last = elems.back();
  if (elems.size() >= 2) {
    const Word& prev = elems[elems.size() - 2];
    internal_check(prev.size() < last.size(),
                   "longest parabolic element is not unique");
  }
  return last;
}

std::vector<Word> CoxeterGroup::parabolic_reflections(const TypeSet& J) const {
  std::set<Word> out;
  for (const Word& u : parabolic(J))
    for (Gen s : J) out.insert(reflection_through(u, s));
  return {out.begin(), out.end()};
}

int CoxeterGroup::max_spherical_length() const {
  {
    std::lock_guard<std::mutex> lock(impl_->mu);
    if (impl_->max_spherical_cache) return *impl_->max_spherical_cache;
  }
  int best = 0;
  for (const TypeSet& J : spherical_types())
    best = std::max(best, static_cast<int>(longest_in(J).size()));
  std::lock_guard<std::mutex> lock(impl_->mu);
  impl_->max_spherical_cache = best;
  return best;
}

Word CoxeterGroup::min_coset_rep(Word w, const TypeSet& J) const {
  w = reduce(w);
  for (;;) {
    bool moved = false;
    for (Gen s : J) {
      Word c = w;
      c.push_back(s);
      Word r = reduce(c);
      if (r.size() < w.size()) {
        w = std::move(r);
        moved = true;
        break;
      }
    }
    if (!moved) return w;
  }
}

bool CoxeterGroup::has_geometry() const {
  for (auto& comp : impl_->comps)
    if (!comp.engine->geometric()) return false;
  return true;
}

int CoxeterGroup::family_count() const { return impl_->total_families; }

long long CoxeterGroup::family_scale(int family) const {
  for (auto& comp : impl_->comps) {
    int nf = comp.engine->families();
    if (family < comp.family_offset + nf && family >= comp.family_offset)
      return comp.engine->scale(family - comp.family_offset);
  }
  throw usage_error("unknown wall family");
}

std::vector<long long> CoxeterGroup::chamber_coords(const Word& chamber) const {
  Word c = reduce(chamber);
  std::vector<Word> parts(impl_->comps.size());
  for (Gen g : c) parts[impl_->comp_of[g]].push_back(impl_->local_of[g]);
  std::vector<long long> out;
  for (std::size_t i = 0; i < impl_->comps.size(); ++i) {
    auto& comp = impl_->comps[i];
    if (!comp.engine->geometric()) continue;
    auto v = comp.engine->coords(parts[i]);
    out.insert(out.end(), v.begin(), v.end());
  }
  return out;
}

Word CoxeterGroup::chamber_at(const std::vector<long long>& family_values,
                              long long den) const {
  if (!has_geometry()) throw usage_error("chamber_at needs an exact alcove model");
  if (den <= 0) throw usage_error("chamber_at denominator must be positive");
  if (static_cast<int>(family_values.size()) != family_count())
    throw usage_error("chamber_at expects one value per wall family");
  Word out;
  for (auto& comp : impl_->comps) {
    int nf = comp.engine->families();
    std::vector<long long> local(family_values.begin() + comp.family_offset,
                                 family_values.begin() + comp.family_offset + nf);
    for (Gen g : comp.engine->at(local, den)) out.push_back(comp.gens[g]);
  }
  return reduce(out);
}

std::optional<WallCoord> CoxeterGroup::wall_coord(const Word& reflection) const {
  if (reflection.empty()) return std::nullopt;
  int comp = impl_->comp_of[reflection.front()];
  Word local;
  for (Gen g : reflection) {
    if (impl_->comp_of[g] != comp) return std::nullopt;
    local.push_back(impl_->local_of[g]);
  }
  auto& c = impl_->comps[comp];
  auto wc = c.engine->wall(local);
  if (!wc) return std::nullopt;
  wc->family += c.family_offset;
  return wc;
}

bool CoxeterGroup::identity_above(const WallCoord& wc) const {
  return impl_->base.at(wc.family) > family_scale(wc.family) * wc.level;
}

std::string word_str(const Word& w) {
  if (w.empty()) return "e";
  std::ostringstream os;
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (i) os << '.';
    os << w[i];
  }
  return os.str();
}

}  // namespace bordify
