#include "bordify/residues.hpp"

#include <algorithm>
#include <bit>
#include <climits>
#include <set>
#include <sstream>

namespace bordify {

namespace {

struct ResidueLess {
  bool operator()(const SphericalResidue& a, const SphericalResidue& b) const {
    return residue_less(a, b);
  }
};

struct WordLess {
  bool operator()(const Word& a, const Word& b) const {
    if (a.size() != b.size()) return a.size() < b.size();
    return a < b;
  }
};

TypeSet normalize_type(const CoxeterGroup& g, TypeSet J) {
  std::sort(J.begin(), J.end());
  J.erase(std::unique(J.begin(), J.end()), J.end());
  for (Gen s : J)
    if (s < 0 || s >= g.rank())
      throw usage_error("generator " + std::to_string(s) + " out of range");
  return J;
}

}  // namespace

bool residue_less(const SphericalResidue& a, const SphericalResidue& b) {
  if (a.type.size() != b.type.size()) return a.type.size() < b.type.size();
  if (a.type != b.type) return a.type < b.type;
  if (a.rep.size() != b.rep.size()) return a.rep.size() < b.rep.size();
  return a.rep < b.rep;
}

SphericalResidue make_residue(const CoxeterGroup& g, Word w, TypeSet J) {
  J = normalize_type(g, std::move(J));
  if (!g.is_spherical(J))
    throw usage_error("type set does not span a finite parabolic");
  Word rep = g.min_coset_rep(std::move(w), J);
  return SphericalResidue{std::move(rep), std::move(J)};
}

SphericalResidue chamber_of(const CoxeterGroup& g, Word w) {
  return SphericalResidue{g.reduce(w), {}};
}

std::vector<Word> residue_members(const CoxeterGroup& g, const SphericalResidue& r) {
  std::vector<Word> out;
  for (const Word& u : g.parabolic(r.type)) {
    Word m = g.product(r.rep, u);
    internal_check(m.size() == r.rep.size() + u.size(),
                   "coset representative is not length-minimal");
    out.push_back(std::move(m));
  }
  std::sort(out.begin(), out.end(), WordLess{});
  return out;
}

int member_span(const CoxeterGroup& g, const SphericalResidue& r) {
  return static_cast<int>(r.rep.size() + g.longest_in(r.type).size());
}

SideOfRoot residue_side(const CoxeterGroup& g, const Root& r, const SphericalResidue& R) {
  // The reflection either stabilizes the coset (then members sit on both
  // sides and the simplex lies on the wall) or the whole coset is strictly
  // on one side, so testing the representative decides.
  Word t_rep = g.product(r.reflection, R.rep);
  if (g.min_coset_rep(t_rep, R.type) == R.rep) return SideOfRoot::on_wall;
  return g.side_of(r, R.rep) == Side::inside ? SideOfRoot::contains
                                             : SideOfRoot::not_contains;
}

bool residue_in_root(const CoxeterGroup& g, const Root& r, const SphericalResidue& R) {
  return residue_side(g, r, R) != SideOfRoot::not_contains;
}

bool coset_within(const CoxeterGroup& g, const SphericalResidue& inner,
                  const SphericalResidue& outer) {
  if (!std::includes(outer.type.begin(), outer.type.end(), inner.type.begin(),
                     inner.type.end()))
    return false;
  return g.min_coset_rep(inner.rep, outer.type) == outer.rep;
}

std::vector<SphericalResidue> star(const CoxeterGroup& g, const SphericalResidue& r) {
  std::set<SphericalResidue, ResidueLess> seen;
  auto members = residue_members(g, r);
  const std::size_t n = r.type.size();
  for (std::size_t bits = 0; bits < (std::size_t{1} << n); ++bits) {
    TypeSet K;
    for (std::size_t i = 0; i < n; ++i)
      if (bits & (std::size_t{1} << i)) K.push_back(r.type[i]);
    for (const Word& c : members) seen.insert({g.min_coset_rep(c, K), K});
  }
  return {seen.begin(), seen.end()};
}

std::vector<SphericalResidue> faces_of(const CoxeterGroup& g, const SphericalResidue& r) {
  std::vector<SphericalResidue> out;
  for (const TypeSet& J : g.spherical_types()) {
    if (!std::includes(J.begin(), J.end(), r.type.begin(), r.type.end())) continue;
    out.push_back({g.min_coset_rep(r.rep, J), J});
  }
  std::sort(out.begin(), out.end(), ResidueLess{});
  return out;
}

std::vector<SphericalResidue> closure(const CoxeterGroup& g,
                                      std::vector<SphericalResidue> set) {
  std::set<SphericalResidue, ResidueLess> seen(set.begin(), set.end());
  for (const auto& r : set) {
    auto faces = faces_of(g, r);
    seen.insert(faces.begin(), faces.end());
  }
  return {seen.begin(), seen.end()};
}

bool is_closed(const CoxeterGroup& g, const std::vector<SphericalResidue>& set) {
  auto sorted = set;
  std::sort(sorted.begin(), sorted.end(), ResidueLess{});
  return closure(g, set) == sorted;
}

std::vector<Root> separating_roots(const CoxeterGroup& g, const SphericalResidue& r1,
                                   const SphericalResidue& r2, int horizon) {
  int s1 = member_span(g, r1), s2 = member_span(g, r2);
  if (s1 > horizon || s2 > horizon)
    throw horizon_error("separating roots: residue spans " + std::to_string(s1) +
                        ", " + std::to_string(s2) + " exceed horizon " +
                        std::to_string(horizon));
  // Candidate walls: walls crossed by minimal galleries between member pairs.
  // Complete, because a separating root has some member of r1 strictly inside
  // and every member of r2 strictly outside, so its wall is crossed by any
  // minimal gallery between that pair.
  auto m1 = residue_members(g, r1), m2 = residue_members(g, r2);
  std::set<Word, WordLess> walls;
  for (const Word& c1 : m1)
    for (const Word& c2 : m2) {
      Word gal = g.product(g.inverse_of(c1), c2);
      Word cur = c1;
      for (Gen s : gal) {
        walls.insert(g.reflection_through(cur, s));
        cur = g.product(cur, Word{s});
      }
    }
  std::vector<Root> out;
  for (const Word& t : walls)
    for (Sign sg : {Sign::plus, Sign::minus}) {
      Root root{t, sg};
      if (residue_in_root(g, root, r1) &&
          residue_side(g, root, r2) == SideOfRoot::not_contains)
        out.push_back(root);
    }
  return out;
}

HalfInt root_distance(const CoxeterGroup& g, const SphericalResidue& r1,
                      const SphericalResidue& r2, int horizon) {
  auto f12 = separating_roots(g, r1, r2, horizon);
  auto f21 = separating_roots(g, r2, r1, horizon);
  return HalfInt::from_twice(static_cast<std::int64_t>(f12.size() + f21.size()));
}

int gallery_distance(const CoxeterGroup& g, const Word& c1, const Word& c2) {
  return static_cast<int>(g.product(g.inverse_of(c1), c2).size());
}

std::vector<SphericalResidue> residues_in_ball(const CoxeterGroup& g, int h) {
  if (h < 0) throw usage_error("ball radius must be nonnegative");
  std::vector<SphericalResidue> out;
  for (const TypeSet& J : g.spherical_types()) {
    int lj = static_cast<int>(g.longest_in(J).size());
    if (lj > h) continue;
    for (const Word& w : g.ball(h - lj)) {
      bool minimal = true;
      for (Gen s : J)
        if (g.right_descends(w, s)) {
          minimal = false;
          break;
        }
      if (minimal) out.push_back({w, J});
    }
  }
  std::sort(out.begin(), out.end(), ResidueLess{});
  return out;
}

ApartmentWindow::ApartmentWindow(const CoxeterGroup& g, int residue_horizon)
    : g_(g), horizon_(residue_horizon), wall_horizon_(3 * residue_horizon) {
  if (residue_horizon < 0) throw usage_error("window horizon must be nonnegative");
  residues_ = residues_in_ball(g, residue_horizon);
  for (std::size_t i = 0; i < residues_.size(); ++i)
    index_[{residues_[i].rep, residues_[i].type}] = static_cast<int>(i);
  // Any wall separating members of two window residues is crossed by a
  // minimal gallery between chambers of length <= horizon, so its chambers
  // stay within 3 * horizon; this table is therefore distance-complete.
  walls_ = g.reflections_in_ball(wall_horizon_);
  wall_info_.reserve(walls_.size());
  for (const auto& w : walls_) {
    WallInfo info;
    info.coord = g.wall_coord(w.element);
    if (info.coord) {
      info.position = g.family_scale(info.coord->family) * info.coord->level;
      info.plus_above = g.identity_above(*info.coord);
    }
    wall_info_.push_back(info);
  }
  masks_.reserve(residues_.size());
  for (const auto& r : residues_) masks_.push_back(classify(r));
}

std::optional<int> ApartmentWindow::index_of(const SphericalResidue& r) const {
  auto it = index_.find({r.rep, r.type});
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

ApartmentWindow::Mask ApartmentWindow::classify(const SphericalResidue& r) const {
  const std::size_t nwords = (walls_.size() + 63) / 64;
  Mask m{std::vector<std::uint64_t>(nwords, 0), std::vector<std::uint64_t>(nwords, 0)};
  auto members = residue_members(g_, r);
  const bool geom = g_.has_geometry();
  const int nf = geom ? g_.family_count() : 0;
  std::vector<long long> lo(nf, LLONG_MAX), hi(nf, LLONG_MIN);
  if (geom)
    for (const Word& c : members) {
      auto v = g_.chamber_coords(c);
      for (int f = 0; f < nf; ++f) {
        lo[f] = std::min(lo[f], v[f]);
        hi[f] = std::max(hi[f], v[f]);
      }
    }
  for (std::size_t wi = 0; wi < walls_.size(); ++wi) {
    RSide side;
    const WallInfo& info = wall_info_[wi];
    if (geom && info.coord) {
      // Sample points never sit on a wall, so the coset straddles the wall
      // exactly when its extent does.
      int f = info.coord->family;
      if (lo[f] > info.position)
        side = info.plus_above ? RSide::plus : RSide::minus;
      else if (hi[f] < info.position)
        side = info.plus_above ? RSide::minus : RSide::plus;
      else
        side = RSide::on;
    } else {
      SideOfRoot s = residue_side(g_, Root{walls_[wi].element, Sign::plus}, r);
      side = s == SideOfRoot::on_wall ? RSide::on
             : s == SideOfRoot::contains ? RSide::plus
                                         : RSide::minus;
    }
    if (side != RSide::minus) m.plus[wi >> 6] |= std::uint64_t{1} << (wi & 63);
    if (side != RSide::plus) m.minus[wi >> 6] |= std::uint64_t{1} << (wi & 63);
  }
  return m;
}

ApartmentWindow::Mask ApartmentWindow::mask_or_classify(const SphericalResidue& r) const {
  if (auto i = index_of(r)) return masks_[*i];
  return classify(r);
}

HalfInt ApartmentWindow::distance(const Mask& a, const Mask& b) const {
  std::int64_t full = 0, half = 0;
  for (std::size_t i = 0; i < a.plus.size(); ++i) {
    std::uint64_t on_a = a.plus[i] & a.minus[i], on_b = b.plus[i] & b.minus[i];
    std::uint64_t sp_a = a.plus[i] & ~on_a, sm_a = a.minus[i] & ~on_a;
    std::uint64_t sp_b = b.plus[i] & ~on_b, sm_b = b.minus[i] & ~on_b;
    full += std::popcount((sp_a & sm_b) | (sm_a & sp_b));
    half += std::popcount((on_a & (sp_b | sm_b)) | ((sp_a | sm_a) & on_b));
  }
  return HalfInt::from_twice(2 * full + half);
}

HalfInt ApartmentWindow::distance(const SphericalResidue& a,
                                  const SphericalResidue& b) const {
  int sa = member_span(g_, a), sb = member_span(g_, b);
  if (sa > horizon_ || sb > horizon_)
    throw horizon_error("window distance: spans " + std::to_string(sa) + ", " +
                        std::to_string(sb) + " exceed window horizon " +
                        std::to_string(horizon_));
  return distance(mask_or_classify(a), mask_or_classify(b));
}

ApartmentWindow::RSide ApartmentWindow::side(const Mask& m, int wall_index) const {
  bool p = m.plus[wall_index >> 6] >> (wall_index & 63) & 1;
  bool mi = m.minus[wall_index >> 6] >> (wall_index & 63) & 1;
  internal_check(p || mi, "wall classification missing");
  if (p && mi) return RSide::on;
  return p ? RSide::plus : RSide::minus;
}

int hull_horizon(const CoxeterGroup& g, const SphericalResidue& r1,
                 const SphericalResidue& r2) {
  int span = std::max(member_span(g, r1), member_span(g, r2));
  int gd = 0;
  for (const Word& c1 : residue_members(g, r1))
    for (const Word& c2 : residue_members(g, r2))
      gd = std::max(gd, gallery_distance(g, c1, c2));
  // Walls crossed en route to a hull or interval member either separate the
  // pair (at most the gallery diameter, wall-counted) or stabilize one of the
  // residues involved (at most the longest spherical length each), so members
  // stay within span + diameter + 3 * longest.
  return span + gd + 3 * g.max_spherical_length();
}

std::vector<SphericalResidue> convex_hull_in(const ApartmentWindow& win,
                                             const SphericalResidue& r1,
                                             const SphericalResidue& r2) {
  const CoxeterGroup& g = win.group();
  int need = hull_horizon(g, r1, r2);
  if (win.residue_horizon() < need)
    throw horizon_error("convex hull needs a window of radius " +
                        std::to_string(need) + ", have " +
                        std::to_string(win.residue_horizon()));
  auto m1 = win.mask_or_classify(r1);
  auto m2 = win.mask_or_classify(r2);
  // sigma is in the hull iff no root containing both r1 and r2 misses sigma.
  std::vector<std::uint64_t> need_plus(m1.plus.size()), need_minus(m1.plus.size());
  for (std::size_t i = 0; i < m1.plus.size(); ++i) {
    need_plus[i] = m1.plus[i] & m2.plus[i];
    need_minus[i] = m1.minus[i] & m2.minus[i];
  }
  std::vector<SphericalResidue> out;
  for (std::size_t ri = 0; ri < win.residues().size(); ++ri) {
    const auto& m = win.mask(static_cast<int>(ri));
    bool ok = true;
    for (std::size_t i = 0; i < m.plus.size() && ok; ++i)
      ok = !(need_plus[i] & ~m.plus[i]) && !(need_minus[i] & ~m.minus[i]);
    if (ok) out.push_back(win.residues()[ri]);
  }
  internal_check(std::find(out.begin(), out.end(), r1) != out.end() &&
                     std::find(out.begin(), out.end(), r2) != out.end(),
                 "hull lost its defining pair");
  return out;
}

std::vector<SphericalResidue> convex_hull(const CoxeterGroup& g,
                                          const SphericalResidue& r1,
                                          const SphericalResidue& r2, int horizon) {
  int need = hull_horizon(g, r1, r2);
  if (horizon < need)
    throw horizon_error("convex hull needs horizon " + std::to_string(need) +
                        ", have " + std::to_string(horizon));
  ApartmentWindow win(g, need);
  return convex_hull_in(win, r1, r2);
}

std::vector<SphericalResidue> interval_in(const ApartmentWindow& win,
                                          const SphericalResidue& r1,
                                          const SphericalResidue& r2) {
  const CoxeterGroup& g = win.group();
  int need = hull_horizon(g, r1, r2);
  if (win.residue_horizon() < need)
    throw horizon_error("interval needs a window of radius " + std::to_string(need) +
                        ", have " + std::to_string(win.residue_horizon()));
  auto m1 = win.mask_or_classify(r1);
  auto m2 = win.mask_or_classify(r2);
  HalfInt d12 = win.distance(m1, m2);
  std::vector<SphericalResidue> out;
  for (std::size_t ri = 0; ri < win.residues().size(); ++ri) {
    const auto& m = win.mask(static_cast<int>(ri));
    if (win.distance(m1, m) + win.distance(m, m2) == d12)
      out.push_back(win.residues()[ri]);
  }
  internal_check(std::find(out.begin(), out.end(), r1) != out.end() &&
                     std::find(out.begin(), out.end(), r2) != out.end(),
                 "interval lost its endpoints");
  return out;
}

std::vector<SphericalResidue> interval(const CoxeterGroup& g, const SphericalResidue& r1,
                                       const SphericalResidue& r2, int horizon) {
  int need = hull_horizon(g, r1, r2);
  if (horizon < need)
    throw horizon_error("interval needs horizon " + std::to_string(need) + ", have " +
                        std::to_string(horizon));
  ApartmentWindow win(g, need);
  return interval_in(win, r1, r2);
}

SphericalResidue projection(const CoxeterGroup& g, const SphericalResidue& R,
                            const SphericalResidue& T, int horizon) {
  auto candidates = star(g, R);
  const SphericalResidue* best = nullptr;
  HalfInt best_d{};
  bool tie = false;
  for (const auto& c : candidates) {
    HalfInt d = root_distance(g, c, T, horizon);
    if (!best || d < best_d) {
      best = &c;
      best_d = d;
      tie = false;
    } else if (d == best_d) {
      tie = true;
    }
  }
  internal_check(best && !tie, "projection minimizer is not unique");
  return *best;
}

SphericalResidue projection_in(const ApartmentWindow& win, const SphericalResidue& R,
                               const SphericalResidue& T) {
  auto candidates = star(win.group(), R);
  auto mt = win.mask_or_classify(T);
  const SphericalResidue* best = nullptr;
  HalfInt best_d{};
  bool tie = false;
  for (const auto& c : candidates) {
    HalfInt d = win.distance(win.mask_or_classify(c), mt);
    if (!best || d < best_d) {
      best = &c;
      best_d = d;
      tie = false;
    } else if (d == best_d) {
      tie = true;
    }
  }
  internal_check(best && !tie, "projection minimizer is not unique");
  return *best;
}

namespace {

SphericalResidue hull_face_maximum(const CoxeterGroup& g,
                                   const std::vector<SphericalResidue>& hull,
                                   const SphericalResidue& R) {
  auto st = star(g, R);
  std::vector<SphericalResidue> cands;
  for (const auto& s : st)
    if (std::find(hull.begin(), hull.end(), s) != hull.end()) cands.push_back(s);
  internal_check(!cands.empty(), "hull misses the star of its endpoint");
  // The face-maximal candidate is the one with the smallest coset; it must
  // dominate every other candidate or the hull is inconsistent.
  const SphericalResidue* best = &cands.front();
  for (const auto& c : cands)
    if (c.type.size() < best->type.size()) best = &c;
  for (const auto& c : cands)
    internal_check(coset_within(g, *best, c),
                   "hull star candidates have no single face-maximal element");
  return *best;
}

}  // namespace

SphericalResidue projection_via_hull(const CoxeterGroup& g, const SphericalResidue& R,
                                     const SphericalResidue& T, int horizon) {
  return hull_face_maximum(g, convex_hull(g, R, T, horizon), R);
}

SphericalResidue projection_via_hull_in(const ApartmentWindow& win,
                                        const SphericalResidue& R,
                                        const SphericalResidue& T) {
  return hull_face_maximum(win.group(), convex_hull_in(win, R, T), R);
}

bool is_convex(const CoxeterGroup& g, const std::vector<SphericalResidue>& set,
               int horizon) {
  if (!is_closed(g, set)) return false;
  for (const auto& a : set)
    for (const auto& b : set) {
      if (a == b) continue;
      auto p = projection(g, a, b, horizon);
      if (std::find(set.begin(), set.end(), p) == set.end()) return false;
    }
  return true;
}

std::string residue_str(const SphericalResidue& r) {
  std::ostringstream os;
  os << word_str(r.rep) << ":{";
  for (std::size_t i = 0; i < r.type.size(); ++i) {
    if (i) os << ',';
    os << r.type[i];
  }
  os << '}';
  return os.str();
}

}  // namespace bordify
