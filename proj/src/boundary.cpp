#include "bordify/boundary.hpp"

#include <algorithm>
#include <map>
#include <mutex>
#include <set>
#include <sstream>

#include "bordify/errors.hpp"

namespace bordify {

namespace {

WallClass side_to_class(SideOfRoot s) {
  switch (s) {
    case SideOfRoot::contains: return WallClass::plus;
    case SideOfRoot::not_contains: return WallClass::minus;
    default: return WallClass::both;
  }
}

/// Walls through a residue: the reflections u j u^-1 over members u and
/// letters j of the type, i.e. the reflections stabilizing the coset.
std::vector<Word> walls_of(const CoxeterGroup& g, const SphericalResidue& r) {
  std::set<Word> seen;
  std::vector<Word> out;
  for (const Word& u : residue_members(g, r)) {
    Word ui = g.inverse_of(u);
    for (Gen j : r.type) {
      Word refl = g.product(u, Word{j}, ui);
      if (seen.insert(refl).second) out.push_back(refl);
    }
  }
  return out;
}

std::pair<Word, TypeSet> residue_key(const SphericalResidue& r) {
  return {r.rep, r.type};
}

}  // namespace

struct BoundaryPoint::Impl {
  const CoxeterGroup* g = nullptr;
  Kind kind = Kind::interior;
  std::optional<SphericalResidue> res;
  std::vector<long long> pos;  // numerators over den, chamber_coords units
  long long den = 1;
  std::vector<long long> vel;
  std::vector<SphericalResidue> seq;
  int confirm = 0;
  mutable std::mutex mu;
  mutable std::map<Word, std::optional<WallClass>> cache;
};

BoundaryPoint::BoundaryPoint(std::shared_ptr<const Impl> impl) : impl_(std::move(impl)) {}

BoundaryPoint BoundaryPoint::interior(const CoxeterGroup& g, SphericalResidue r) {
  auto im = std::make_shared<Impl>();
  im->g = &g;
  im->kind = Kind::interior;
  im->res = std::move(r);
  return BoundaryPoint(im);
}

BoundaryPoint BoundaryPoint::affine_direction(const CoxeterGroup& g,
                                              std::vector<long long> position,
                                              std::vector<long long> velocity,
                                              long long den) {
  if (!g.has_geometry()) throw usage_error("affine boundary points need an alcove model");
  if (velocity.size() != position.size() ||
      static_cast<int>(position.size()) != g.family_count())
    throw usage_error("affine point needs one value per wall family");
  if (std::all_of(velocity.begin(), velocity.end(), [](long long v) { return v == 0; }))
    throw usage_error("direction is zero; use an interior point");
  g.chamber_at(position, den);  // validates den and family consistency
  std::vector<long long> ahead = position;
  for (std::size_t i = 0; i < ahead.size(); ++i) ahead[i] += den * velocity[i];
  g.chamber_at(ahead, den);  // validates velocity consistency
  auto im = std::make_shared<Impl>();
  im->g = &g;
  im->kind = Kind::affine;
  im->pos = std::move(position);
  im->den = den;
  im->vel = std::move(velocity);
  return BoundaryPoint(im);
}

BoundaryPoint BoundaryPoint::affine_ray(const CoxeterGroup& g, const Word& base,
                                        const Word& toward) {
  Word b = g.reduce(base), t = g.reduce(toward);
  if (b == t) throw usage_error("ray needs two distinct chambers");
  auto p = g.chamber_coords(b);
  auto q = g.chamber_coords(t);
  std::vector<long long> v(p.size());
  for (std::size_t i = 0; i < p.size(); ++i) v[i] = q[i] - p[i];
  return affine_direction(g, std::move(p), std::move(v), 1);
}

BoundaryPoint BoundaryPoint::sequence(const CoxeterGroup& g,
                                      std::vector<SphericalResidue> seq, int confirm) {
  if (seq.empty()) throw usage_error("boundary sequence is empty");
  if (confirm < 1) throw usage_error("confirmation run must be positive");
  auto im = std::make_shared<Impl>();
  im->g = &g;
  im->kind = Kind::sequence;
  im->seq = std::move(seq);
  im->confirm = confirm;
  return BoundaryPoint(im);
}

const CoxeterGroup& BoundaryPoint::group() const { return *impl_->g; }
BoundaryPoint::Kind BoundaryPoint::kind() const { return impl_->kind; }
bool BoundaryPoint::exact() const { return impl_->kind != Kind::sequence; }

const SphericalResidue& BoundaryPoint::residue() const {
  if (impl_->kind != Kind::interior) throw usage_error("not an interior point");
  return *impl_->res;
}

const std::vector<long long>& BoundaryPoint::position() const {
  if (impl_->kind != Kind::affine) throw usage_error("not an affine point");
  return impl_->pos;
}

const std::vector<long long>& BoundaryPoint::velocity() const {
  if (impl_->kind != Kind::affine) throw usage_error("not an affine point");
  return impl_->vel;
}

long long BoundaryPoint::denominator() const {
  if (impl_->kind != Kind::affine) throw usage_error("not an affine point");
  return impl_->den;
}

const std::vector<SphericalResidue>& BoundaryPoint::sequence_data() const {
  if (impl_->kind != Kind::sequence) throw usage_error("not a sequence point");
  return impl_->seq;
}

int BoundaryPoint::confirmation() const {
  if (impl_->kind != Kind::sequence) throw usage_error("not a sequence point");
  return impl_->confirm;
}

std::optional<WallClass> BoundaryPoint::classify_fresh(const Word& refl) const {
  const Impl& im = *impl_;
  const CoxeterGroup& g = *im.g;
  switch (im.kind) {
    case BoundaryPoint::Kind::interior:
      return side_to_class(residue_side(g, Root{refl, Sign::plus}, *im.res));
    case BoundaryPoint::Kind::affine: {
      auto wc = g.wall_coord(refl);
      if (!wc) throw usage_error("wall has no alcove coordinates: " + word_str(refl));
      long long wall_num = wc->level * g.family_scale(wc->family) * im.den;
      long long v = im.vel[wc->family];
      bool above;
      if (v != 0)
        above = v > 0;
      else if (im.pos[wc->family] == wall_num)
        return WallClass::both;
      else
        above = im.pos[wc->family] > wall_num;
      return above == g.identity_above(*wc) ? WallClass::plus : WallClass::minus;
    }
    default: {
      int n = static_cast<int>(im.seq.size());
      if (n < im.confirm) return std::nullopt;
      WallClass last = side_to_class(residue_side(g, Root{refl, Sign::plus}, im.seq[n - 1]));
      for (int i = n - im.confirm; i < n - 1; ++i)
        if (side_to_class(residue_side(g, Root{refl, Sign::plus}, im.seq[i])) != last)
          return std::nullopt;
      return last;
    }
  }
}

std::optional<WallClass> BoundaryPoint::wall_class(const Word& reflection) const {
  Word key = impl_->g->reduce(reflection);
  {
    std::lock_guard<std::mutex> lock(impl_->mu);
    auto it = impl_->cache.find(key);
    if (it != impl_->cache.end()) return it->second;
  }
  auto cls = classify_fresh(key);
  // Idempotent write: the same key always computes the same value.
  std::lock_guard<std::mutex> lock(impl_->mu);
  impl_->cache.emplace(key, cls);
  return cls;
}

std::optional<bool> BoundaryPoint::in_root(const Root& r) const {
  auto cls = wall_class(r.reflection);
  if (!cls) return std::nullopt;
  if (*cls == WallClass::both) return true;
  return (*cls == WallClass::plus) == (r.sign == Sign::plus);
}

std::vector<SphericalResidue> BoundaryPoint::ray_sequence(int count) const {
  if (impl_->kind != Kind::affine) throw usage_error("only affine points define a ray");
  if (count < 1) throw usage_error("ray needs a positive length");
  const CoxeterGroup& g = *impl_->g;
  std::vector<SphericalResidue> out;
  std::vector<long long> vals(impl_->pos.size());
  for (int n = 0; n < count; ++n) {
    for (std::size_t i = 0; i < vals.size(); ++i)
      vals[i] = impl_->pos[i] + n * impl_->den * impl_->vel[i];
    out.push_back(chamber_of(g, g.chamber_at(vals, impl_->den)));
  }
  return out;
}

SphericalResidue xi_value(const BoundaryPoint& xi, const SphericalResidue& sigma) {
  const CoxeterGroup& g = xi.group();
  if (xi.kind() == BoundaryPoint::Kind::interior) {
    const SphericalResidue& T = xi.residue();
    return projection(g, sigma, T, hull_horizon(g, sigma, T));
  }
  std::vector<std::pair<Word, WallClass>> cls;
  for (const Word& w : walls_of(g, sigma)) {
    auto c = xi.wall_class(w);
    if (!c)
      throw horizon_error("projection from the boundary undecided at wall " + word_str(w));
    cls.push_back({w, *c});
  }
  // St(sigma) cut down to xi's side of every wall through sigma; the minimum
  // of the survivors is the stabilized projection.
  std::vector<SphericalResidue> keep;
  for (const auto& T : star(g, sigma)) {
    bool ok = true;
    for (const auto& [w, c] : cls) {
      auto side = residue_side(g, Root{w, Sign::plus}, T);
      if (c == WallClass::plus)
        ok = side != SideOfRoot::not_contains;
      else if (c == WallClass::minus)
        ok = side != SideOfRoot::contains;
      else
        ok = side == SideOfRoot::on_wall;
      if (!ok) break;
    }
    if (ok) keep.push_back(T);
  }
  internal_check(!keep.empty(), "no star element matches the boundary point");
  for (const auto& cand : keep) {
    bool dominated_by_all = true;
    for (const auto& other : keep)
      if (!coset_within(g, cand, other)) {
        dominated_by_all = false;
        break;
      }
    if (dominated_by_all) return cand;
  }
  throw internal_error("projection from the boundary has no minimum");
}

SphericalResidue residual_projection(const BoundaryPoint& xi, const Word& C) {
  const CoxeterGroup& g = xi.group();
  Word c = g.reduce(C);
  SphericalResidue self = chamber_of(g, c);
  TypeSet I;
  for (Gen s = 0; s < g.rank(); ++s)
    if (xi_value(xi, make_residue(g, c, {s})) != self) I.push_back(s);
  auto R = make_residue(g, c, I);
  internal_check(g.is_spherical(I), "residual projection type is not spherical");
  auto proj = xi_value(xi, R);
  internal_check(proj.type.empty(), "residual projection is not a chamber");
  internal_check(g.product(g.inverse_of(c), proj.rep) == g.longest_in(I),
                 "residual projection is not opposite the chamber");
  return R;
}

Sector sector(const ApartmentWindow& win, const SphericalResidue& x,
              const BoundaryPoint& xi) {
  if (&xi.group() != &win.group())
    throw usage_error("boundary point and window use different groups");
  using RSide = ApartmentWindow::RSide;
  auto mx = win.mask_or_classify(x);
  const auto& walls = win.walls();
  Sector out{x, {}, {}};
  std::vector<std::pair<int, bool>> tests;  // wall index, plus root?
  std::vector<int> undecided;
  for (int w = 0; w < static_cast<int>(walls.size()); ++w) {
    auto c = xi.wall_class(walls[w].element);
    if (!c) {
      undecided.push_back(w);
      continue;
    }
    auto sx = win.side(mx, w);
    if (sx != RSide::minus && (*c == WallClass::plus || *c == WallClass::both)) {
      out.roots.push_back(Root{walls[w].element, Sign::plus});
      tests.push_back({w, true});
    }
    if (sx != RSide::plus && (*c == WallClass::minus || *c == WallClass::both)) {
      out.roots.push_back(Root{walls[w].element, Sign::minus});
      tests.push_back({w, false});
    }
  }
  if (!undecided.empty()) {
    std::ostringstream os;
    os << "sector undecided at walls:";
    for (int w : undecided) os << ' ' << word_str(walls[w].element);
    throw horizon_error(os.str());
  }
  const auto& res = win.residues();
  for (int i = 0; i < static_cast<int>(res.size()); ++i) {
    const auto& m = win.mask(i);
    bool ok = true;
    for (const auto& [w, plus] : tests) {
      auto s = win.side(m, w);
      if (plus ? s == RSide::minus : s == RSide::plus) {
        ok = false;
        break;
      }
    }
    if (ok) out.members.push_back(res[i]);
  }
  return out;
}

std::vector<SphericalResidue> sector_via_hulls(const ApartmentWindow& win,
                                               const SphericalResidue& x,
                                               const std::vector<SphericalResidue>& seq,
                                               int inner_horizon, int confirm) {
  if (seq.empty()) throw usage_error("empty sequence");
  if (confirm < 0) confirm = win.residue_horizon();
  if (confirm < 1) confirm = 1;
  const CoxeterGroup& g = win.group();
  const auto& res = win.residues();
  std::vector<int> inner;
  for (int i = 0; i < static_cast<int>(res.size()); ++i)
    if (member_span(g, res[i]) <= inner_horizon) inner.push_back(i);
  std::vector<std::vector<char>> restricted;
  for (const auto& r : seq) {
    std::vector<char> in(res.size(), 0);
    for (const auto& h : convex_hull_in(win, x, r)) {
      auto idx = win.index_of(h);
      internal_check(idx.has_value(), "hull member escaped the window");
      in[*idx] = 1;
    }
    std::vector<char> slice(inner.size());
    for (std::size_t k = 0; k < inner.size(); ++k) slice[k] = in[inner[k]];
    restricted.push_back(std::move(slice));
  }
  int run = 1;
  for (int i = static_cast<int>(restricted.size()) - 2; i >= 0 && run < confirm; --i) {
    if (restricted[i] != restricted.back()) break;
    ++run;
  }
  if (run < confirm)
    throw horizon_error("hull restrictions did not stabilize; extend the sequence");
  std::vector<SphericalResidue> out;
  for (std::size_t k = 0; k < inner.size(); ++k)
    if (restricted.back()[k]) out.push_back(res[inner[k]]);
  return out;
}

SphericalResidue common_subsector(const ApartmentWindow& win, const SphericalResidue& x,
                                  const SphericalResidue& y, const BoundaryPoint& xi) {
  Sector sx = sector(win, x, xi);
  Sector sy = sector(win, y, xi);
  std::set<std::pair<Word, TypeSet>> inter;
  for (const auto& r : sy.members) inter.insert(residue_key(r));
  std::vector<SphericalResidue> cand;
  for (const auto& r : sx.members)
    if (inter.count(residue_key(r))) cand.push_back(r);
  inter.clear();
  for (const auto& r : cand) inter.insert(residue_key(r));
  std::stable_sort(cand.begin(), cand.end(),
                   [&](const SphericalResidue& a, const SphericalResidue& b) {
                     auto da = win.distance(x, a), db = win.distance(x, b);
                     if (da != db) return da < db;
                     return residue_less(a, b);
                   });
  for (const auto& z : cand) {
    Sector sz = sector(win, z, xi);
    bool ok = true;
    for (const auto& r : sz.members)
      if (!inter.count(residue_key(r))) {
        ok = false;
        break;
      }
    if (ok) return z;
  }
  throw window_escape_error("no verified common subsector in the window; enlarge it");
}

std::optional<BoundaryPoint> converges(const ApartmentWindow& win,
                                       const std::vector<SphericalResidue>& seq,
                                       int confirm) {
  if (seq.empty()) throw usage_error("empty sequence");
  if (confirm < 0) confirm = win.residue_horizon();
  if (confirm < 1) confirm = 1;
  if (static_cast<int>(seq.size()) < confirm) return std::nullopt;
  std::vector<ApartmentWindow::Mask> masks;
  for (const auto& r : seq) masks.push_back(win.mask_or_classify(r));
  int n = static_cast<int>(masks.size());
  for (int w = 0; w < static_cast<int>(win.walls().size()); ++w) {
    auto last = win.side(masks[n - 1], w);
    for (int i = n - confirm; i < n - 1; ++i)
      if (win.side(masks[i], w) != last) return std::nullopt;
  }
  return BoundaryPoint::sequence(win.group(), seq, confirm);
}

std::optional<SphericalResidue> interior_limit(const ApartmentWindow& win,
                                               const BoundaryPoint& xi) {
  using RSide = ApartmentWindow::RSide;
  const auto& walls = win.walls();
  std::vector<WallClass> cls(walls.size());
  for (int w = 0; w < static_cast<int>(walls.size()); ++w) {
    auto c = xi.wall_class(walls[w].element);
    if (!c) return std::nullopt;
    cls[w] = *c;
  }
  std::optional<SphericalResidue> found;
  const auto& res = win.residues();
  for (int i = 0; i < static_cast<int>(res.size()); ++i) {
    const auto& m = win.mask(i);
    bool all = true;
    for (int w = 0; w < static_cast<int>(walls.size()) && all; ++w) {
      auto s = win.side(m, w);
      all = (s == RSide::plus && cls[w] == WallClass::plus) ||
            (s == RSide::minus && cls[w] == WallClass::minus) ||
            (s == RSide::on && cls[w] == WallClass::both);
    }
    if (all) {
      internal_check(!found.has_value(), "two residues with one classification tuple");
      found = res[i];
    }
  }
  return found;
}

namespace {

/// Eventual contribution of one wall to 2*d(R_n, y), given the tail's class
/// and y's side: opposite strict sides 2, one party on the wall 1, same 0.
int wall_contrib_twice(WallClass c, ApartmentWindow::RSide s) {
  using RSide = ApartmentWindow::RSide;
  switch (c) {
    case WallClass::plus: return s == RSide::plus ? 0 : s == RSide::on ? 1 : 2;
    case WallClass::minus: return s == RSide::minus ? 0 : s == RSide::on ? 1 : 2;
    default: return s == RSide::on ? 0 : 1;
  }
}

}  // namespace

HalfInt horofunction(const ApartmentWindow& win, const BoundaryPoint& xi,
                     const SphericalResidue& y, const SphericalResidue& y0) {
  if (&xi.group() != &win.group())
    throw usage_error("boundary point and window use different groups");
  auto my = win.mask_or_classify(y);
  auto m0 = win.mask_or_classify(y0);
  std::int64_t twice = 0;
  const auto& walls = win.walls();
  for (int w = 0; w < static_cast<int>(walls.size()); ++w) {
    auto sy = win.side(my, w);
    auto s0 = win.side(m0, w);
    if (sy == s0) continue;  // cancels exactly for every tail element
    auto c = xi.wall_class(walls[w].element);
    if (!c)
      throw horizon_error("horofunction undecided at wall " + word_str(walls[w].element));
    twice += wall_contrib_twice(*c, sy) - wall_contrib_twice(*c, s0);
  }
  return HalfInt::from_twice(twice);
}

bool same_limit(const ApartmentWindow& win, const BoundaryPoint& a,
                const BoundaryPoint& b) {
  const auto& walls = win.walls();
  for (int w = 0; w < static_cast<int>(walls.size()); ++w) {
    auto ca = a.wall_class(walls[w].element);
    auto cb = b.wall_class(walls[w].element);
    if (!ca || !cb)
      throw horizon_error("limit comparison undecided at wall " +
                          word_str(walls[w].element));
    if (*ca != *cb) return false;
  }
  return true;
}

std::optional<SphericalResidue> limit_witness(const ApartmentWindow& win,
                                              const BoundaryPoint& a,
                                              const BoundaryPoint& b,
                                              const SphericalResidue& base) {
  if (same_limit(win, a, b)) return std::nullopt;
  for (const auto& r : win.residues())
    if (horofunction(win, a, r, base) != horofunction(win, b, r, base)) return r;
  return std::nullopt;
}

std::vector<AffineBoundaryClass> affine_boundary_census(const CoxeterGroup& g) {
  if (g.rank() != 3 || g.family_count() != 3 || !g.has_geometry())
    throw usage_error("the boundary census needs the rank-3 affine alcove model");
  std::vector<AffineBoundaryClass> out;
  struct Reg {
    std::array<long long, 3> v;
    std::array<int, 3> signs;
  };
  // Every realizable sign pattern of the three family functionals along a
  // generic direction; (+,+,-) and (-,-,+) are impossible since the third
  // functional is the sum of the first two.
  const Reg regs[6] = {
      {{2, 1, 3}, {1, 1, 1}},    {{2, -1, 1}, {1, -1, 1}},  {{1, -2, -1}, {1, -1, -1}},
      {{-1, 2, 1}, {-1, 1, 1}},  {{-2, 1, -1}, {-1, 1, -1}}, {{-2, -1, -3}, {-1, -1, -1}},
  };
  for (const auto& r : regs) {
    std::string name = "regular(";
    for (int i = 0; i < 3; ++i) name += r.signs[i] > 0 ? '+' : '-';
    name += ')';
    out.push_back(AffineBoundaryClass{
        name, r.signs, -1,
        BoundaryPoint::affine_direction(g, {1, 1, 2}, {r.v[0], r.v[1], r.v[2]}, 1)});
  }
  for (int f = 0; f < 3; ++f)
    for (Sign eps : {Sign::plus, Sign::minus}) {
      int e = eps == Sign::plus ? 1 : -1;
      // The third functional is the sum of the first two, so when family 2 is
      // bounded the transverse pair must diverge with opposite signs.
      std::array<int, 3> signs{};
      switch (f) {
        case 0: signs = {0, e, e}; break;
        case 1: signs = {e, 0, e}; break;
        default: signs = {e, -e, 0}; break;
      }
      std::string name = "threshold(a";
      name += static_cast<char>('0' + f);
      name += eps == Sign::plus ? ",+)" : ",-)";
      out.push_back(
          AffineBoundaryClass{name, signs, f, affine_threshold_point(g, f, eps, 0)});
    }
  return out;
}

BoundaryPoint affine_threshold_point(const CoxeterGroup& g, int bounded_family,
                                     Sign transverse, long long k) {
  if (g.rank() != 3 || g.family_count() != 3 || !g.has_geometry())
    throw usage_error("threshold points need the rank-3 affine alcove model");
  if (bounded_family < 0 || bounded_family > 2)
    throw usage_error("bounded family out of range");
  long long e = transverse == Sign::plus ? 3 : -3;
  // Pin the bounded family inside the strip between walls k and k+1 and let
  // the transverse functionals diverge with the chosen sign.
  std::vector<long long> p, v;
  switch (bounded_family) {
    case 0:
      p = {1 + 3 * k, 1, 2 + 3 * k};
      v = {0, e, e};
      break;
    case 1:
      p = {1, 1 + 3 * k, 2 + 3 * k};
      v = {e, 0, e};
      break;
    default:
      p = {1 + 3 * k, 1, 2 + 3 * k};
      v = {e, -e, 0};
      break;
  }
  return BoundaryPoint::affine_direction(g, std::move(p), std::move(v), 1);
}

// --- building windows -------------------------------------------------------

namespace {

using BRes = ChamberSystem::BResidue;

int endpoint_of_color(const ChamberSystem& sys, int edge, Gen color) {
  auto [a, b] = sys.edge_endpoints(edge);
  return color == 0 ? a : b;
}

/// Neighbor of w on the path to t; t must differ from w.
int tree_toward(const ChamberSystem& sys, int w, int t) {
  int a = t, prev = -1;
  while (sys.vertex_depth(a) > sys.vertex_depth(w)) {
    prev = a;
    a = sys.vertex_parent(a);
  }
  if (a == w) return prev;
  return sys.vertex_parent(w);  // w is off t's root path, so w is not the root
}

int tree_vertex_distance(const ChamberSystem& sys, int u, int v) {
  int a = u, b = v, d = 0;
  while (sys.vertex_depth(a) > sys.vertex_depth(b)) {
    a = sys.vertex_parent(a);
    ++d;
  }
  while (sys.vertex_depth(b) > sys.vertex_depth(a)) {
    b = sys.vertex_parent(b);
    ++d;
  }
  while (a != b) {
    a = sys.vertex_parent(a);
    b = sys.vertex_parent(b);
    d += 2;
  }
  return d;
}

/// Side of the wall at vertex w seen from a residue: -1 on the wall,
/// otherwise the neighbor of w in the residue's direction.
int tree_side_of(const ChamberSystem& sys, const BRes& r, int w) {
  if (r.type.empty()) {
    auto [a, b] = sys.edge_endpoints(r.chamber);
    if (w == a) return b;
    if (w == b) return a;
    return tree_toward(sys, w, a);
  }
  int u = endpoint_of_color(sys, r.chamber, r.type[0]);
  if (u == w) return -1;
  return tree_toward(sys, w, u);
}

int edge_between(const ChamberSystem& sys, int u, int n) {
  for (int c : sys.vertex_edges(u)) {
    auto [a, b] = sys.edge_endpoints(c);
    if (a == n || b == n) return c;
  }
  throw internal_error("vertices are not adjacent");
}

/// Does the window clip the star of this vertex?
bool star_clipped(const ChamberSystem& sys, int v) {
  return !sys.panel_complete(sys.vertex_edges(v).front(), sys.vertex_color(v));
}

std::pair<int, int> product_type_split(const ChamberSystem& sys) {
  return {sys.left_factor().weyl().rank(), sys.right_factor().weyl().rank()};
}

std::pair<BRes, BRes> split_residue(const ChamberSystem& sys, const BRes& r) {
  auto [ca, cb] = sys.split_chamber(r.chamber);
  int ra = product_type_split(sys).first;
  TypeSet Ja, Jb;
  for (Gen t : r.type)
    if (t < ra)
      Ja.push_back(t);
    else
      Jb.push_back(t - ra);
  return {sys.left_factor().residue_of(ca, Ja), sys.right_factor().residue_of(cb, Jb)};
}

BRes join_residue(const ChamberSystem& sys, const BRes& a, const BRes& b) {
  int ra = product_type_split(sys).first;
  TypeSet J = a.type;
  for (Gen t : b.type) J.push_back(t + ra);
  return sys.residue_of(sys.join_chamber(a.chamber, b.chamber), J);
}

int building_horizon(const ChamberSystem& sys) {
  int r = sys.window_radius();
  return 4 * (r > 0 ? r : 8);
}

std::pair<int, TypeSet> bres_key(const BRes& r) { return {r.chamber, r.type}; }

}  // namespace

struct BuildingPoint::Impl {
  const ChamberSystem* sys = nullptr;
  Kind kind = Kind::interior;
  std::optional<BRes> res;
  int end = -1;
  std::shared_ptr<const BuildingPoint> left, right;
  std::vector<BRes> seq;
  int confirm = 0;
  mutable std::mutex mu;
  mutable std::map<int, std::optional<int>> side_cache;
};

BuildingPoint::BuildingPoint(std::shared_ptr<const Impl> impl) : impl_(std::move(impl)) {}

BuildingPoint BuildingPoint::interior(const ChamberSystem& sys, ChamberSystem::BResidue r) {
  auto im = std::make_shared<Impl>();
  im->sys = &sys;
  im->kind = Kind::interior;
  im->res = sys.residue_of(r.chamber, r.type);  // canonicalize
  return BuildingPoint(im);
}

BuildingPoint BuildingPoint::tree_end(const ChamberSystem& sys, int boundary_vertex) {
  if (sys.kind() != ChamberSystem::Kind::tree)
    throw usage_error("tree ends need a tree backend");
  if (boundary_vertex < 0 || boundary_vertex >= sys.vertex_count())
    throw usage_error("no such vertex");
  if (!star_clipped(sys, boundary_vertex))
    throw usage_error("an end must leave through a window-clipped vertex");
  auto im = std::make_shared<Impl>();
  im->sys = &sys;
  im->kind = Kind::tree_end;
  im->end = boundary_vertex;
  return BuildingPoint(im);
}

BuildingPoint BuildingPoint::product(const ChamberSystem& sys, BuildingPoint left,
                                     BuildingPoint right) {
  if (sys.kind() != ChamberSystem::Kind::product)
    throw usage_error("product points need a product backend");
  if (&left.system() != &sys.left_factor() || &right.system() != &sys.right_factor())
    throw usage_error("factor points must live on the product's factors");
  // Two interior factors describe an interior residue of the product, not a
  // genuine boundary pair; collapse so limit comparisons see one kind.
  if (left.kind() == Kind::interior && right.kind() == Kind::interior)
    return interior(sys, join_residue(sys, left.residue(), right.residue()));
  auto im = std::make_shared<Impl>();
  im->sys = &sys;
  im->kind = Kind::product;
  im->left = std::make_shared<const BuildingPoint>(std::move(left));
  im->right = std::make_shared<const BuildingPoint>(std::move(right));
  return BuildingPoint(im);
}

BuildingPoint BuildingPoint::sequence(const ChamberSystem& sys,
                                      std::vector<ChamberSystem::BResidue> seq,
                                      int confirm) {
  if (seq.empty()) throw usage_error("boundary sequence is empty");
  if (confirm < 1) throw usage_error("confirmation run must be positive");
  auto im = std::make_shared<Impl>();
  im->sys = &sys;
  im->kind = Kind::sequence;
  im->seq.reserve(seq.size());
  for (const auto& r : seq) im->seq.push_back(sys.residue_of(r.chamber, r.type));
  im->confirm = confirm;
  return BuildingPoint(im);
}

const ChamberSystem& BuildingPoint::system() const { return *impl_->sys; }
BuildingPoint::Kind BuildingPoint::kind() const { return impl_->kind; }

bool BuildingPoint::exact() const {
  switch (impl_->kind) {
    case Kind::sequence: return false;
    case Kind::product: return impl_->left->exact() && impl_->right->exact();
    default: return true;
  }
}

const ChamberSystem::BResidue& BuildingPoint::residue() const {
  if (impl_->kind != Kind::interior) throw usage_error("not an interior point");
  return *impl_->res;
}

int BuildingPoint::end_vertex() const {
  if (impl_->kind != Kind::tree_end) throw usage_error("not a tree end");
  return impl_->end;
}

std::pair<BuildingPoint, BuildingPoint> BuildingPoint::factors() const {
  if (impl_->kind != Kind::product) throw usage_error("not a product point");
  return {*impl_->left, *impl_->right};
}

const std::vector<ChamberSystem::BResidue>& BuildingPoint::sequence_data() const {
  if (impl_->kind != Kind::sequence) throw usage_error("not a sequence point");
  return impl_->seq;
}

int BuildingPoint::confirmation() const {
  if (impl_->kind != Kind::sequence) throw usage_error("not a sequence point");
  return impl_->confirm;
}

std::optional<int> BuildingPoint::tree_side(int w) const {
  const Impl& im = *impl_;
  if (im.sys->kind() != ChamberSystem::Kind::tree)
    throw usage_error("tree walls need a tree backend");
  if (w < 0 || w >= im.sys->vertex_count()) throw usage_error("no such vertex");
  switch (im.kind) {
    case Kind::interior:
      return tree_side_of(*im.sys, *im.res, w);
    case Kind::tree_end:
      if (w == im.end) return -2;
      return tree_toward(*im.sys, w, im.end);
    default: {
      {
        std::lock_guard<std::mutex> lock(im.mu);
        auto it = im.side_cache.find(w);
        if (it != im.side_cache.end()) return it->second;
      }
      std::optional<int> out;
      int n = static_cast<int>(im.seq.size());
      if (n >= im.confirm) {
        int last = tree_side_of(*im.sys, im.seq[n - 1], w);
        bool stable = true;
        for (int i = n - im.confirm; i < n - 1 && stable; ++i)
          stable = tree_side_of(*im.sys, im.seq[i], w) == last;
        if (stable) out = last;
      }
      std::lock_guard<std::mutex> lock(im.mu);
      im.side_cache.emplace(w, out);
      return out;
    }
  }
}

std::optional<BuildingPoint> BuildingPoint::resolved() const {
  if (impl_->kind != Kind::sequence) return *this;
  return converges(*impl_->sys, impl_->seq, impl_->confirm);
}

ChamberSystem::BResidue xi_value(const BuildingPoint& xi,
                                 const ChamberSystem::BResidue& sigma_in) {
  const ChamberSystem& sys = xi.system();
  BRes sigma = sys.residue_of(sigma_in.chamber, sigma_in.type);
  switch (xi.kind()) {
    case BuildingPoint::Kind::interior:
      return sys.project_residue(sigma, xi.residue());
    case BuildingPoint::Kind::tree_end: {
      if (sigma.type.empty()) return sigma;
      int u = endpoint_of_color(sys, sigma.chamber, sigma.type[0]);
      if (u == xi.end_vertex())
        throw window_escape_error(
            "projection toward the end leaves the window at its boundary vertex");
      int n = tree_toward(sys, u, xi.end_vertex());
      return BRes{edge_between(sys, u, n), {}};
    }
    case BuildingPoint::Kind::product: {
      auto [sa, sb] = split_residue(sys, sigma);
      auto [pa, pb] = xi.factors();
      return join_residue(sys, xi_value(pa, sa), xi_value(pb, sb));
    }
    default: {
      // Stabilized gate: the trailing confirmation run must agree.
      const auto& seq = xi.sequence_data();
      int confirm = xi.confirmation();
      int n = static_cast<int>(seq.size());
      if (n < confirm) throw horizon_error("projection certificate too short");
      BRes last = sys.project_residue(sigma, seq[n - 1]);
      for (int i = n - confirm; i < n - 1; ++i)
        if (!(sys.project_residue(sigma, seq[i]) == last))
          throw horizon_error("projection along the sequence has not stabilized");
      return last;
    }
  }
}

std::optional<BuildingPoint> converges(const ChamberSystem& sys,
                                       const std::vector<ChamberSystem::BResidue>& seq,
                                       int confirm) {
  if (seq.empty()) throw usage_error("empty sequence");
  if (confirm < 0) confirm = std::max(2, sys.window_radius());
  if (confirm < 1) confirm = 1;
  int n = static_cast<int>(seq.size());
  if (n < confirm) return std::nullopt;
  switch (sys.kind()) {
    case ChamberSystem::Kind::tree: {
      int V = sys.vertex_count();
      std::vector<int> cl(V);
      for (int w = 0; w < V; ++w) {
        int last = tree_side_of(sys, seq[n - 1], w);
        for (int i = n - confirm; i < n - 1; ++i)
          if (tree_side_of(sys, seq[i], w) != last) return std::nullopt;
        cl[w] = last;
      }
      // A residue sequence cannot leave the window, so a stabilized one is
      // eventually constant; ends only arise as explicitly constructed points.
      for (const auto& r : sys.residues()) {
        bool all = true;
        for (int w = 0; w < V && all; ++w) all = tree_side_of(sys, r, w) == cl[w];
        if (all) return BuildingPoint::interior(sys, r);
      }
      return std::nullopt;  // stabilized onto a clipped residue
    }
    case ChamberSystem::Kind::product: {
      std::vector<BRes> sa, sb;
      for (const auto& r : seq) {
        auto [a, b] = split_residue(sys, r);
        sa.push_back(a);
        sb.push_back(b);
      }
      auto la = converges(sys.left_factor(), sa, confirm);
      auto lb = converges(sys.right_factor(), sb, confirm);
      if (!la || !lb) return std::nullopt;
      return BuildingPoint::product(sys, *la, *lb);
    }
    default: {
      // Finite or thin backends: convergence in the window means an
      // eventually-frozen sequence.
      BRes last = sys.residue_of(seq[n - 1].chamber, seq[n - 1].type);
      for (int i = n - confirm; i < n - 1; ++i)
        if (!(sys.residue_of(seq[i].chamber, seq[i].type) == last)) return std::nullopt;
      return BuildingPoint::interior(sys, last);
    }
  }
}

HalfInt horofunction(const BuildingPoint& xi, const ChamberSystem::BResidue& y_in,
                     const ChamberSystem::BResidue& y0_in) {
  const ChamberSystem& sys = xi.system();
  BRes y = sys.residue_of(y_in.chamber, y_in.type);
  BRes y0 = sys.residue_of(y0_in.chamber, y0_in.type);
  int H = building_horizon(sys);
  switch (xi.kind()) {
    case BuildingPoint::Kind::interior:
      return sys.residue_distance(xi.residue(), y, H) -
             sys.residue_distance(xi.residue(), y0, H);
    case BuildingPoint::Kind::tree_end: {
      std::int64_t twice = 0;
      int v = xi.end_vertex();
      for (int w = 0; w < sys.vertex_count(); ++w) {
        int sy = tree_side_of(sys, y, w);
        int s0 = tree_side_of(sys, y0, w);
        if (sy == s0) continue;  // cancels exactly for every tail element
        int cls = w == v ? -2 : tree_toward(sys, w, v);
        auto contrib = [cls](int s) { return s == cls ? 0 : s == -1 ? 1 : 2; };
        twice += contrib(sy) - contrib(s0);
      }
      return HalfInt::from_twice(twice);
    }
    case BuildingPoint::Kind::product: {
      auto [ya, yb] = split_residue(sys, y);
      auto [za, zb] = split_residue(sys, y0);
      auto [pa, pb] = xi.factors();
      return horofunction(pa, ya, za) + horofunction(pb, yb, zb);
    }
    default: {
      const auto& seq = xi.sequence_data();
      int confirm = xi.confirmation();
      int n = static_cast<int>(seq.size());
      if (n < confirm) throw horizon_error("horofunction certificate too short");
      HalfInt last =
          sys.residue_distance(seq[n - 1], y, H) - sys.residue_distance(seq[n - 1], y0, H);
      for (int i = n - confirm; i < n - 1; ++i)
        if (sys.residue_distance(seq[i], y, H) - sys.residue_distance(seq[i], y0, H) != last)
          throw horizon_error("horofunction along the sequence has not stabilized");
      return last;
    }
  }
}

std::vector<ChamberSystem::BResidue> building_sector(const BuildingPoint& xi,
                                                     const ChamberSystem::BResidue& x_in) {
  const ChamberSystem& sys = xi.system();
  BRes x = sys.residue_of(x_in.chamber, x_in.type);
  switch (xi.kind()) {
    case BuildingPoint::Kind::interior: {
      // Conv(x, R), read through a chart showing both residues.
      const BRes& R = xi.residue();
      auto chart = sys.find_apartment(x.chamber, R.chamber);
      auto tx = sys.chart_residue(chart, x);
      auto tR = sys.chart_residue(chart, R);
      const CoxeterGroup& g = sys.weyl();
      std::vector<BRes> out;
      for (const auto& h : convex_hull(g, tx, tR, hull_horizon(g, tx, tR))) {
        auto it = chart.to_chamber.find(h.rep);
        internal_check(it != chart.to_chamber.end(), "hull member off the chart");
        out.push_back(sys.residue_of(it->second, h.type));
      }
      return out;
    }
    case BuildingPoint::Kind::tree_end: {
      int v = xi.end_vertex();
      std::vector<BRes> out;
      int cur, via_edge = x.chamber;
      if (x.type.empty()) {
        auto [a, b] = sys.edge_endpoints(x.chamber);
        cur = tree_vertex_distance(sys, a, v) <= tree_vertex_distance(sys, b, v) ? a : b;
        int rear = cur == a ? b : a;
        out.push_back(x);
        // The rear vertex lies on the last wall behind x, hence inside every
        // closed defining root; skip it when the window clips its star.
        if (!star_clipped(sys, rear))
          out.push_back(sys.residue_of(x.chamber, TypeSet{sys.vertex_color(rear)}));
      } else {
        cur = endpoint_of_color(sys, x.chamber, x.type[0]);
        if (star_clipped(sys, cur))
          throw window_escape_error("sector base touches the window boundary");
      }
      for (;;) {
        // The star of the end vertex itself is clipped by the window.
        if (cur == v) break;
        out.push_back(sys.residue_of(via_edge, TypeSet{sys.vertex_color(cur)}));
        int nxt = tree_toward(sys, cur, v);
        via_edge = edge_between(sys, cur, nxt);
        out.push_back(BRes{via_edge, {}});
        cur = nxt;
      }
      return out;
    }
    case BuildingPoint::Kind::product: {
      auto [xa, xb] = split_residue(sys, x);
      auto [pa, pb] = xi.factors();
      auto sa = building_sector(pa, xa);
      auto sb = building_sector(pb, xb);
      std::vector<BRes> out;
      for (const auto& ra : sa)
        for (const auto& rb : sb) out.push_back(join_residue(sys, ra, rb));
      return out;
    }
    default:
      throw usage_error("sectors need an exact boundary point");
  }
}

ChamberSystem::BResidue building_common_subsector(const BuildingPoint& xi,
                                                  const ChamberSystem::BResidue& x,
                                                  const ChamberSystem::BResidue& y) {
  const ChamberSystem& sys = xi.system();
  auto sx = building_sector(xi, x);
  auto sy = building_sector(xi, y);
  std::set<std::pair<int, TypeSet>> inter;
  for (const auto& r : sy) inter.insert(bres_key(r));
  std::vector<BRes> cand;
  for (const auto& r : sx)
    if (inter.count(bres_key(r))) cand.push_back(r);
  inter.clear();
  for (const auto& r : cand) inter.insert(bres_key(r));
  int H = building_horizon(sys);
  BRes base = sys.residue_of(x.chamber, x.type);
  std::stable_sort(cand.begin(), cand.end(), [&](const BRes& a, const BRes& b) {
    auto da = sys.residue_distance(base, a, H), db = sys.residue_distance(base, b, H);
    if (da != db) return da < db;
    return bres_key(a) < bres_key(b);
  });
  for (const auto& z : cand) {
    bool ok = true;
    for (const auto& r : building_sector(xi, z))
      if (!inter.count(bres_key(r))) {
        ok = false;
        break;
      }
    if (ok) return z;
  }
  throw window_escape_error("no verified common subsector in the window; enlarge it");
}

bool same_limit(const BuildingPoint& a, const BuildingPoint& b) {
  if (&a.system() != &b.system())
    throw usage_error("limit comparison needs one chamber system");
  auto ra = a.resolved();
  auto rb = b.resolved();
  if (!ra || !rb) throw horizon_error("limit comparison undecided");
  if (ra->kind() != rb->kind()) return false;
  switch (ra->kind()) {
    case BuildingPoint::Kind::interior: return ra->residue() == rb->residue();
    case BuildingPoint::Kind::tree_end: return ra->end_vertex() == rb->end_vertex();
    case BuildingPoint::Kind::product: {
      auto [la, raf] = ra->factors();
      auto [lb, rbf] = rb->factors();
      return same_limit(la, lb) && same_limit(raf, rbf);
    }
    default: throw internal_error("resolved point is still a sequence");
  }
}

std::optional<ChamberSystem::BResidue> limit_witness(const BuildingPoint& a,
                                                     const BuildingPoint& b,
                                                     const ChamberSystem::BResidue& base) {
  if (same_limit(a, b)) return std::nullopt;
  for (const auto& r : a.system().residues())
    if (horofunction(a, r, base) != horofunction(b, r, base)) return r;
  return std::nullopt;
}

}  // namespace bordify
