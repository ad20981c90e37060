#include "bordify/cube.hpp"

#include <algorithm>
#include <array>
#include <deque>
#include <set>

namespace bordify {

namespace {

void check_vertex(const MedianGraph& g, int v) {
  if (v < 0 || v >= g.vertex_count()) throw usage_error("no such vertex");
}

/// Decided orientation as a 0/1 row; horizon_error when a wall is open.
std::vector<char> decided_row(const MedianGraph& g, const Ultrafilter& uf) {
  std::vector<char> row(g.wall_count());
  for (int w = 0; w < g.wall_count(); ++w) {
    auto s = uf.side(w);
    if (!s) throw horizon_error("orientation leaves a wall undecided");
    row[w] = *s ? 1 : 0;
  }
  return row;
}

}  // namespace

MedianGraph MedianGraph::grid(std::vector<std::pair<long long, long long>> ranges) {
  if (ranges.empty()) throw usage_error("grid window needs at least one axis");
  long long total = 1;
  for (auto [lo, hi] : ranges) {
    if (lo > hi) throw usage_error("grid range is empty");
    total *= hi - lo + 1;
    if (total > 200000) throw usage_error("grid window too large");
  }
  MedianGraph g;
  g.kind_ = Kind::grid;
  g.axes_ = static_cast<int>(ranges.size());
  g.ranges_ = std::move(ranges);
  for (int a = 0; a < g.axes_; ++a)
    for (long long t = g.ranges_[a].first; t < g.ranges_[a].second; ++t) {
      g.wall_axis_.push_back(a);
      g.wall_threshold_.push_back(t);
    }
  g.walls_ = static_cast<int>(g.wall_axis_.size());
  std::vector<long long> c(g.axes_);
  for (int a = 0; a < g.axes_; ++a) c[a] = g.ranges_[a].first;
  for (;;) {
    g.coords_.push_back(c);
    std::vector<char> row(g.walls_);
    for (int w = 0; w < g.walls_; ++w)
      row[w] = c[g.wall_axis_[w]] > g.wall_threshold_[w] ? 1 : 0;
    g.side_.push_back(std::move(row));
    std::string name;
    for (int a = 0; a < g.axes_; ++a) {
      if (a) name += ',';
      name += std::to_string(c[a]);
    }
    g.names_.push_back(std::move(name));
    int a = g.axes_ - 1;
    while (a >= 0 && c[a] == g.ranges_[a].second) {
      c[a] = g.ranges_[a].first;
      --a;
    }
    if (a < 0) break;
    ++c[a];
  }
  g.index();
  return g;
}

MedianGraph MedianGraph::tree_graph(const std::vector<std::pair<int, int>>& edges) {
  int n = 0;
  for (auto [u, v] : edges) {
    if (u < 0 || v < 0 || u == v) throw usage_error("bad tree edge");
    n = std::max(n, std::max(u, v) + 1);
  }
  if (edges.empty()) n = 1;
  if (static_cast<int>(edges.size()) != n - 1) throw usage_error("edge count is not vertices - 1");
  std::vector<std::vector<std::pair<int, int>>> adj(n);  // (neighbor, wall)
  for (int w = 0; w < static_cast<int>(edges.size()); ++w) {
    adj[edges[w].first].emplace_back(edges[w].second, w);
    adj[edges[w].second].emplace_back(edges[w].first, w);
  }
  MedianGraph g;
  g.kind_ = Kind::tree;
  g.walls_ = static_cast<int>(edges.size());
  g.wall_edge_ = edges;
  g.side_.assign(n, std::vector<char>(g.walls_, 0));
  // Plus side of wall w: the component of the edge's second endpoint.
  for (int w = 0; w < g.walls_; ++w) {
    std::deque<int> queue{edges[w].second};
    std::vector<char> seen(n, 0);
    seen[edges[w].second] = 1;
    while (!queue.empty()) {
      int x = queue.front();
      queue.pop_front();
      g.side_[x][w] = 1;
      for (auto [y, e] : adj[x])
        if (e != w && !seen[y]) {
          seen[y] = 1;
          queue.push_back(y);
        }
    }
  }
  // Connectivity: every vertex must be on some side of wall 0's BFS or, with
  // no walls, n == 1; a disconnected input would leave an unreached vertex.
  {
    std::vector<char> seen(n, 0);
    std::deque<int> queue{0};
    seen[0] = 1;
    int reached = 1;
    while (!queue.empty()) {
      int x = queue.front();
      queue.pop_front();
      for (auto [y, e] : adj[x])
        if (!seen[y]) {
          seen[y] = 1;
          ++reached;
          queue.push_back(y);
        }
    }
    if (reached != n) throw usage_error("tree edges do not connect the vertices");
  }
  for (int v = 0; v < n; ++v) g.names_.push_back(std::to_string(v));
  g.index();
  return g;
}

MedianGraph MedianGraph::cube(int n) {
  if (n < 0 || n > 16) throw usage_error("cube dimension out of range");
  MedianGraph g;
  g.kind_ = Kind::cube;
  g.walls_ = n;
  for (int mask = 0; mask < (1 << n); ++mask) {
    std::vector<char> row(n);
    std::string name;
    for (int i = 0; i < n; ++i) {
      row[i] = (mask >> i) & 1;
      name += row[i] ? '1' : '0';
    }
    g.side_.push_back(std::move(row));
    g.names_.push_back(std::move(name));
  }
  g.index();
  return g;
}

MedianGraph MedianGraph::closure(int n, const std::vector<std::vector<int>>& pts) {
  if (n < 1 || n > 16) throw usage_error("coordinate count out of range");
  if (pts.empty()) throw usage_error("no points to close");
  std::set<std::vector<char>> verts;
  for (const auto& p : pts) {
    if (static_cast<int>(p.size()) != n) throw usage_error("point has wrong coordinate count");
    std::vector<char> row(n);
    for (int i = 0; i < n; ++i) {
      if (p[i] != 0 && p[i] != 1) throw usage_error("coordinates must be 0 or 1");
      row[i] = static_cast<char>(p[i]);
    }
    verts.insert(std::move(row));
  }
  // Median closure: iterate majority votes of all triples to a fixpoint.
  for (bool grew = true; grew;) {
    grew = false;
    std::vector<std::vector<char>> cur(verts.begin(), verts.end());
    for (std::size_t i = 0; i < cur.size(); ++i)
      for (std::size_t j = i + 1; j < cur.size(); ++j)
        for (std::size_t k = j + 1; k < cur.size(); ++k) {
          std::vector<char> m(n);
          for (int t = 0; t < n; ++t)
            m[t] = (cur[i][t] + cur[j][t] + cur[k][t]) >= 2 ? 1 : 0;
          grew |= verts.insert(std::move(m)).second;
        }
  }
  std::vector<std::vector<char>> all(verts.begin(), verts.end());
  // Keep one wall per induced partition: drop constant coordinates and merge
  // coordinates that cut the vertex set identically (up to relabeling), so
  // the l1 metric stays the wall-separation count.
  std::vector<int> keep;
  std::set<std::vector<char>> partitions;
  for (int t = 0; t < n; ++t) {
    std::vector<char> cut(all.size());
    for (std::size_t v = 0; v < all.size(); ++v) cut[v] = all[v][t];
    bool constant = std::all_of(cut.begin(), cut.end(), [&](char c) { return c == cut[0]; });
    if (constant) continue;
    std::vector<char> flip(cut);
    for (auto& c : flip) c = 1 - c;
    if (partitions.count(cut) || partitions.count(flip)) continue;
    partitions.insert(cut);
    keep.push_back(t);
  }
  MedianGraph g;
  g.kind_ = Kind::points;
  g.walls_ = static_cast<int>(keep.size());
  for (const auto& row : all) {
    std::vector<char> sides(g.walls_);
    for (int w = 0; w < g.walls_; ++w) sides[w] = row[keep[w]];
    g.side_.push_back(std::move(sides));
    std::string name;
    for (int t = 0; t < n; ++t) name += row[t] ? '1' : '0';
    g.names_.push_back(std::move(name));
  }
  g.index();
  return g;
}

void MedianGraph::index() {
  for (std::size_t v = 0; v < names_.size(); ++v) {
    by_name_[names_[v]] = static_cast<int>(v);
    by_sides_[side_[v]] = static_cast<int>(v);
  }
  internal_check(by_sides_.size() == side_.size(), "two vertices share a side vector");
}

bool MedianGraph::side(int v, int w) const {
  check_vertex(*this, v);
  if (w < 0 || w >= walls_) throw usage_error("no such wall");
  return side_[v][w] != 0;
}

const std::string& MedianGraph::vertex_name(int v) const {
  check_vertex(*this, v);
  return names_[v];
}

int MedianGraph::vertex_by_name(const std::string& name) const {
  auto it = by_name_.find(name);
  if (it == by_name_.end()) throw usage_error("no vertex named " + name);
  return it->second;
}

int MedianGraph::axes() const {
  if (kind_ != Kind::grid) throw usage_error("axes need a grid backend");
  return axes_;
}

std::pair<long long, long long> MedianGraph::axis_range(int axis) const {
  if (kind_ != Kind::grid) throw usage_error("axis ranges need a grid backend");
  if (axis < 0 || axis >= axes_) throw usage_error("no such axis");
  return ranges_[axis];
}

long long MedianGraph::coordinate(int v, int axis) const {
  if (kind_ != Kind::grid) throw usage_error("coordinates need a grid backend");
  check_vertex(*this, v);
  if (axis < 0 || axis >= axes_) throw usage_error("no such axis");
  return coords_[v][axis];
}

int MedianGraph::vertex_at(const std::vector<long long>& coords) const {
  if (kind_ != Kind::grid) throw usage_error("coordinates need a grid backend");
  if (static_cast<int>(coords.size()) != axes_) throw usage_error("wrong coordinate count");
  int id = 0;
  for (int a = 0; a < axes_; ++a) {
    auto [lo, hi] = ranges_[a];
    if (coords[a] < lo || coords[a] > hi)
      throw window_escape_error("coordinates outside the window");
    id = id * static_cast<int>(hi - lo + 1) + static_cast<int>(coords[a] - lo);
  }
  return id;
}

int MedianGraph::wall_axis(int w) const {
  if (kind_ != Kind::grid) throw usage_error("wall axes need a grid backend");
  if (w < 0 || w >= walls_) throw usage_error("no such wall");
  return wall_axis_[w];
}

long long MedianGraph::wall_threshold(int w) const {
  if (kind_ != Kind::grid) throw usage_error("wall thresholds need a grid backend");
  if (w < 0 || w >= walls_) throw usage_error("no such wall");
  return wall_threshold_[w];
}

std::pair<int, int> MedianGraph::wall_edge(int w) const {
  if (kind_ != Kind::tree) throw usage_error("wall edges need a tree backend");
  if (w < 0 || w >= walls_) throw usage_error("no such wall");
  return wall_edge_[w];
}

std::optional<int> MedianGraph::vertex_with_sides(const std::vector<char>& sides) const {
  auto it = by_sides_.find(sides);
  if (it == by_sides_.end()) return std::nullopt;
  return it->second;
}

int median(const MedianGraph& g, int u, int v, int w) {
  check_vertex(g, u);
  check_vertex(g, v);
  check_vertex(g, w);
  std::vector<char> m(g.wall_count());
  for (int i = 0; i < g.wall_count(); ++i) {
    int votes = (g.side(u, i) ? 1 : 0) + (g.side(v, i) ? 1 : 0) + (g.side(w, i) ? 1 : 0);
    m[i] = votes >= 2 ? 1 : 0;
  }
  auto found = g.vertex_with_sides(m);
  if (!found) throw window_escape_error("median leaves the window");
  return *found;
}

std::vector<HalfSpace> cube_phi(const MedianGraph& g, int a, int b) {
  check_vertex(g, a);
  check_vertex(g, b);
  std::vector<HalfSpace> out;
  for (int w = 0; w < g.wall_count(); ++w)
    if (g.side(a, w) != g.side(b, w)) out.push_back(HalfSpace{w, g.side(a, w)});
  return out;
}

int l1_distance(const MedianGraph& g, int a, int b) {
  return static_cast<int>(cube_phi(g, a, b).size());
}

Ultrafilter Ultrafilter::principal(const MedianGraph& g, int v) {
  check_vertex(g, v);
  Ultrafilter uf;
  uf.kind_ = Kind::principal;
  uf.base_ = v;
  uf.side_.resize(g.wall_count());
  for (int w = 0; w < g.wall_count(); ++w) uf.side_[w] = g.side(v, w) ? 1 : 0;
  return uf;
}

Ultrafilter Ultrafilter::directional(const MedianGraph& g, std::vector<AxisLimit> limits) {
  if (g.kind() != MedianGraph::Kind::grid)
    throw usage_error("directional points need a grid backend");
  if (static_cast<int>(limits.size()) != g.axes())
    throw usage_error("one axis limit per axis");
  Ultrafilter uf;
  uf.kind_ = Kind::directional;
  uf.limits_ = std::move(limits);
  uf.side_.resize(g.wall_count());
  for (int w = 0; w < g.wall_count(); ++w) {
    const AxisLimit& l = uf.limits_[g.wall_axis(w)];
    switch (l.tag) {
      case AxisLimit::Tag::plus_infinity: uf.side_[w] = 1; break;
      case AxisLimit::Tag::minus_infinity: uf.side_[w] = 0; break;
      case AxisLimit::Tag::at: uf.side_[w] = l.value > g.wall_threshold(w) ? 1 : 0; break;
    }
  }
  return uf;
}

Ultrafilter Ultrafilter::explicit_orientation(const MedianGraph& g,
                                              std::vector<std::optional<bool>> sides) {
  if (static_cast<int>(sides.size()) != g.wall_count())
    throw usage_error("one side per wall");
  Ultrafilter uf;
  uf.kind_ = Kind::explicit_orientation;
  uf.side_.resize(g.wall_count());
  for (int w = 0; w < g.wall_count(); ++w)
    uf.side_[w] = sides[w] ? (*sides[w] ? 1 : 0) : -1;
  return uf;
}

std::optional<bool> Ultrafilter::side(int w) const {
  if (w < 0 || w >= static_cast<int>(side_.size())) throw usage_error("no such wall");
  if (side_[w] < 0) return std::nullopt;
  return side_[w] > 0;
}

bool Ultrafilter::decided() const {
  return std::none_of(side_.begin(), side_.end(), [](std::int8_t s) { return s < 0; });
}

int Ultrafilter::base_vertex() const {
  if (kind_ != Kind::principal) throw usage_error("not a principal point");
  return base_;
}

const std::vector<AxisLimit>& Ultrafilter::limits() const {
  if (kind_ != Kind::directional) throw usage_error("not a directional point");
  return limits_;
}

std::optional<std::pair<HalfSpace, HalfSpace>> validate_ultrafilter(const MedianGraph& g,
                                                                    const Ultrafilter& uf) {
  std::vector<HalfSpace> chosen;
  for (int w = 0; w < g.wall_count(); ++w)
    if (auto s = uf.side(w)) chosen.push_back(HalfSpace{w, *s});
  for (std::size_t i = 0; i < chosen.size(); ++i)
    for (std::size_t j = i + 1; j < chosen.size(); ++j) {
      bool meet = false;
      for (int v = 0; v < g.vertex_count() && !meet; ++v)
        meet = g.side(v, chosen[i].wall) == chosen[i].plus &&
               g.side(v, chosen[j].wall) == chosen[j].plus;
      if (!meet) return std::make_pair(chosen[i], chosen[j]);
    }
  if (uf.kind() == Ultrafilter::Kind::directional) {
    // Per axis the chosen family must be a cut: plus up to a threshold, then
    // minus; the construction guarantees it, so a violation is a bug.
    for (int a = 0; a < g.axes(); ++a) {
      bool seen_minus = false;
      for (int w = 0; w < g.wall_count(); ++w) {
        if (g.wall_axis(w) != a) continue;  // thresholds ascend within an axis
        bool plus = *uf.side(w);
        internal_check(!(plus && seen_minus), "directional orientation is not a cut");
        seen_minus = seen_minus || !plus;
      }
    }
  }
  return std::nullopt;
}

std::vector<int> cube_hull(const MedianGraph& g, const std::vector<int>& pts) {
  if (pts.empty()) throw usage_error("hull of no points");
  for (int p : pts) check_vertex(g, p);
  std::vector<int> out;
  for (int v = 0; v < g.vertex_count(); ++v) {
    bool in = true;
    for (int w = 0; w < g.wall_count() && in; ++w) {
      bool s = g.side(pts[0], w), same = true;
      for (std::size_t i = 1; i < pts.size() && same; ++i) same = g.side(pts[i], w) == s;
      if (same) in = g.side(v, w) == s;
    }
    if (in) out.push_back(v);
  }
  return out;
}

std::vector<int> cube_sector(const MedianGraph& g, int v, const Ultrafilter& xi) {
  check_vertex(g, v);
  auto want = decided_row(g, xi);
  std::vector<int> out;
  for (int x = 0; x < g.vertex_count(); ++x) {
    bool in = true;
    for (int w = 0; w < g.wall_count() && in; ++w)
      if ((want[w] != 0) == g.side(v, w)) in = g.side(x, w) == g.side(v, w);
    if (in) out.push_back(x);
  }
  return out;
}

std::vector<int> cube_sector_via_hulls(const MedianGraph& g, int v,
                                       const std::vector<int>& seq, int confirm) {
  check_vertex(g, v);
  if (seq.empty()) throw usage_error("empty sequence");
  if (confirm < 1) throw usage_error("confirmation run must be positive");
  int n = static_cast<int>(seq.size());
  if (n < confirm) throw horizon_error("hull certificate too short");
  auto last = cube_hull(g, {v, seq[n - 1]});
  for (int i = n - confirm; i < n - 1; ++i)
    if (cube_hull(g, {v, seq[i]}) != last)
      throw horizon_error("hulls along the sequence have not stabilized");
  return last;
}

int cube_filtering(const MedianGraph& g, int u, int v, const Ultrafilter& xi) {
  auto su = cube_sector(g, u, xi);
  auto sv = cube_sector(g, v, xi);
  std::set<int> inter(su.begin(), su.end());
  std::vector<int> cand;
  for (int x : sv)
    if (inter.count(x)) cand.push_back(x);
  std::set<int> both(cand.begin(), cand.end());
  std::stable_sort(cand.begin(), cand.end(), [&](int a, int b) {
    int da = l1_distance(g, u, a), db = l1_distance(g, u, b);
    if (da != db) return da < db;
    return a < b;
  });
  for (int z : cand) {
    bool ok = true;
    for (int x : cube_sector(g, z, xi))
      if (!both.count(x)) {
        ok = false;
        break;
      }
    if (ok) return z;
  }
  throw window_escape_error("window exhausted: no verified filtering vertex");
}

long long cube_horofunction(const MedianGraph& g, const Ultrafilter& xi, int y, int y0) {
  check_vertex(g, y);
  check_vertex(g, y0);
  auto want = decided_row(g, xi);
  long long h = 0;
  for (int w = 0; w < g.wall_count(); ++w) {
    if (g.side(y, w) == g.side(y0, w)) continue;  // cancels for every tail element
    h += g.side(y, w) == (want[w] != 0) ? -1 : 1;
  }
  return h;
}

bool is_principal(const MedianGraph& g, const Ultrafilter& uf) {
  switch (uf.kind()) {
    case Ultrafilter::Kind::principal: return true;
    case Ultrafilter::Kind::directional:
      for (const auto& l : uf.limits())
        if (l.tag != AxisLimit::Tag::at) return false;
      return true;
    default: return g.vertex_with_sides(decided_row(g, uf)).has_value();
  }
}

std::vector<Ultrafilter> roller_points(const MedianGraph& g, int max_walls) {
  int W = g.wall_count();
  if (W > max_walls || W > 20)
    throw usage_error("wall set too large for an exhaustive orientation scan");
  // Which side pairs of two walls miss each other on the window.
  std::vector<std::vector<std::array<bool, 4>>> empty(
      W, std::vector<std::array<bool, 4>>(W, {true, true, true, true}));
  for (int v = 0; v < g.vertex_count(); ++v)
    for (int i = 0; i < W; ++i)
      for (int j = i + 1; j < W; ++j)
        empty[i][j][(g.side(v, i) ? 2 : 0) + (g.side(v, j) ? 1 : 0)] = false;
  std::vector<Ultrafilter> out;
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << W); ++mask) {
    bool ok = true;
    for (int i = 0; i < W && ok; ++i)
      for (int j = i + 1; j < W && ok; ++j)
        ok = !empty[i][j][((mask >> i) & 1 ? 2 : 0) + ((mask >> j) & 1 ? 1 : 0)];
    if (!ok) continue;
    std::vector<std::optional<bool>> sides(W);
    for (int w = 0; w < W; ++w) sides[w] = ((mask >> w) & 1) != 0;
    out.push_back(Ultrafilter::explicit_orientation(g, std::move(sides)));
  }
  return out;
}

std::optional<Ultrafilter> cube_converges(const MedianGraph& g, const std::vector<int>& seq,
                                          int confirm) {
  if (seq.empty()) throw usage_error("empty sequence");
  if (confirm < 1) throw usage_error("confirmation run must be positive");
  for (int v : seq) check_vertex(g, v);
  int n = static_cast<int>(seq.size());
  if (n < confirm) return std::nullopt;
  std::vector<std::optional<bool>> sides(g.wall_count());
  for (int w = 0; w < g.wall_count(); ++w) {
    bool last = g.side(seq[n - 1], w);
    for (int i = n - confirm; i < n - 1; ++i)
      if (g.side(seq[i], w) != last) return std::nullopt;
    sides[w] = last;
  }
  return Ultrafilter::explicit_orientation(g, std::move(sides));
}

}  // namespace bordify
