#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <deque>
#include <optional>
#include <random>
#include <set>
#include <utility>
#include <vector>

#include "bordify/cube.hpp"
#include "bordify/errors.hpp"

using namespace bordify;

namespace {

using G = MedianGraph;

/// Independent all-pairs distances: breadth-first steps over moves that flip
/// exactly one wall, never touching the library metric.
std::vector<std::vector<int>> bfs_distances(const G& g) {
  int n = g.vertex_count();
  std::vector<std::vector<int>> adj(n);
  for (int u = 0; u < n; ++u)
    for (int v = u + 1; v < n; ++v) {
      int diff = 0;
      for (int w = 0; w < g.wall_count() && diff < 2; ++w) diff += g.side(u, w) != g.side(v, w);
      if (diff == 1) {
        adj[u].push_back(v);
        adj[v].push_back(u);
      }
    }
  std::vector<std::vector<int>> dist(n, std::vector<int>(n, -1));
  for (int s = 0; s < n; ++s) {
    std::deque<int> queue{s};
    dist[s][s] = 0;
    while (!queue.empty()) {
      int x = queue.front();
      queue.pop_front();
      for (int y : adj[x])
        if (dist[s][y] < 0) {
          dist[s][y] = dist[s][x] + 1;
          queue.push_back(y);
        }
    }
  }
  return dist;
}

/// A ten-vertex test tree: a spine 0-1-2-3-4 with leaves 5, 6, 7, 8, 9.
G caterpillar() {
  return G::tree_graph({{0, 1}, {1, 2}, {2, 3}, {3, 4}, {1, 5}, {2, 6}, {2, 7}, {3, 8}, {0, 9}});
}

G tripod() { return G::closure(3, {{0, 0, 1}, {0, 1, 0}, {1, 0, 0}}); }

G folded() { return G::closure(4, {{0, 0, 1, 1}, {1, 1, 0, 0}, {0, 1, 0, 1}}); }

/// Fully decided orientation as a 0/1 row.
std::vector<char> row_of(const G& g, const Ultrafilter& uf) {
  std::vector<char> row(g.wall_count());
  for (int w = 0; w < g.wall_count(); ++w) row[w] = *uf.side(w) ? 1 : 0;
  return row;
}

long long drift(long long a, long long b) { return a < b ? b - a : a - b; }

}  // namespace

TEST_CASE("grid windows expose coordinates, walls, and names") {
  auto g = G::grid({{-4, 4}, {-4, 4}});
  CHECK(g.kind() == G::Kind::grid);
  CHECK(!g.is_complete());
  CHECK(g.vertex_count() == 81);
  CHECK(g.wall_count() == 16);
  CHECK(g.axes() == 2);
  CHECK((g.axis_range(1) == std::pair<long long, long long>{-4, 4}));

  SUBCASE("vertex lookup round-trips ids, names, and coordinates") {
    int v = g.vertex_at({1, -3});
    CHECK(g.coordinate(v, 0) == 1);
    CHECK(g.coordinate(v, 1) == -3);
    CHECK(g.vertex_name(v) == "1,-3");
    CHECK(g.vertex_by_name("1,-3") == v);
    for (int u : {0, 7, 40, 80}) CHECK(g.vertex_by_name(g.vertex_name(u)) == u);
  }

  SUBCASE("walls are axis thresholds with ascending levels") {
    for (int w = 0; w < 8; ++w) {
      CHECK(g.wall_axis(w) == 0);
      CHECK(g.wall_threshold(w) == w - 4);
      CHECK(g.wall_axis(w + 8) == 1);
      CHECK(g.wall_threshold(w + 8) == w - 4);
    }
    int v = g.vertex_at({0, 2});
    for (int w = 0; w < g.wall_count(); ++w)
      CHECK(g.side(v, w) == (g.coordinate(v, g.wall_axis(w)) > g.wall_threshold(w)));
  }

  SUBCASE("every wall has both sides inhabited") {
    for (const G& h : {g, caterpillar(), G::cube(3), tripod(), folded()})
      for (int w = 0; w < h.wall_count(); ++w) {
        bool plus = false, minus = false;
        for (int v = 0; v < h.vertex_count(); ++v) (h.side(v, w) ? plus : minus) = true;
        CHECK(plus);
        CHECK(minus);
      }
  }

  SUBCASE("tree walls sit on their own edges") {
    auto t = caterpillar();
    CHECK(t.kind() == G::Kind::tree);
    CHECK(t.is_complete());
    for (int w = 0; w < t.wall_count(); ++w) {
      auto [u, v] = t.wall_edge(w);
      CHECK(!t.side(u, w));
      CHECK(t.side(v, w));
      CHECK(l1_distance(t, u, v) == 1);
    }
  }

  SUBCASE("construction rejects malformed input") {
    CHECK_THROWS_AS(G::grid({}), usage_error);
    CHECK_THROWS_AS(G::grid({{3, 2}}), usage_error);
    CHECK_THROWS_AS(G::grid({{0, 600}, {0, 600}}), usage_error);
    CHECK_THROWS_AS(G::cube(17), usage_error);
    CHECK_THROWS_AS(G::tree_graph({{0, 1}, {1, 2}, {2, 0}}), usage_error);
    CHECK_THROWS_AS(G::tree_graph({{0, 1}, {2, 3}, {3, 2}}), usage_error);
    CHECK_THROWS_AS(G::closure(3, {}), usage_error);
    CHECK_THROWS_AS(G::closure(3, {{0, 1}}), usage_error);
    CHECK_THROWS_AS(G::closure(2, {{0, 2}}), usage_error);
    CHECK_THROWS_AS(g.vertex_at({9, 0}), window_escape_error);
    CHECK_THROWS_AS(g.vertex_at({0}), usage_error);
    CHECK_THROWS_AS(g.wall_edge(0), usage_error);
    CHECK_THROWS_AS(caterpillar().axes(), usage_error);
    CHECK_THROWS_AS(g.vertex_by_name("nowhere"), usage_error);
  }
}

TEST_CASE("medians follow coordinatewise and path-intersection oracles") {
  SUBCASE("plane medians are coordinatewise") {
    auto g = G::grid({{-4, 4}, {-4, 4}});
    CHECK(median(g, g.vertex_at({0, 0}), g.vertex_at({2, 0}), g.vertex_at({1, 3})) ==
          g.vertex_at({1, 0}));
    std::mt19937 rng(2026);
    std::uniform_int_distribution<long long> pick(-4, 4);
    auto mid = [](long long a, long long b, long long c) {
      return std::max(std::min(a, b), std::min(std::max(a, b), c));
    };
    for (int trial = 0; trial < 300; ++trial) {
      long long xs[3], ys[3];
      for (int i = 0; i < 3; ++i) {
        xs[i] = pick(rng);
        ys[i] = pick(rng);
      }
      int m = median(g, g.vertex_at({xs[0], ys[0]}), g.vertex_at({xs[1], ys[1]}),
                     g.vertex_at({xs[2], ys[2]}));
      CHECK(g.coordinate(m, 0) == mid(xs[0], xs[1], xs[2]));
      CHECK(g.coordinate(m, 1) == mid(ys[0], ys[1], ys[2]));
    }
  }

  SUBCASE("tree medians are the unique vertex on all three pairwise paths") {
    auto t = caterpillar();
    auto d = bfs_distances(t);
    for (int u = 0; u < t.vertex_count(); ++u)
      for (int v = 0; v < t.vertex_count(); ++v)
        for (int w = 0; w < t.vertex_count(); ++w) {
          std::vector<int> common;
          for (int x = 0; x < t.vertex_count(); ++x)
            if (d[u][x] + d[x][v] == d[u][v] && d[v][x] + d[x][w] == d[v][w] &&
                d[u][x] + d[x][w] == d[u][w])
              common.push_back(x);
          REQUIRE(common.size() == 1);
          CHECK(median(t, u, v, w) == common.front());
        }
  }

  SUBCASE("degenerate triples collapse") {
    for (const G& h : {G::cube(4), folded(), tripod()})
      for (int u = 0; u < h.vertex_count(); ++u)
        for (int v = 0; v < h.vertex_count(); ++v) {
          CHECK(median(h, u, u, v) == u);
          CHECK(median(h, u, v, v) == v);
          CHECK(median(h, u, v, u) == u);
        }
  }

  SUBCASE("the majority row is permutation-blind") {
    auto g = G::grid({{0, 3}, {0, 3}});
    for (int u = 0; u < g.vertex_count(); ++u)
      for (int v = 0; v < g.vertex_count(); v += 3)
        for (int w = 0; w < g.vertex_count(); w += 5) {
          int m = median(g, u, v, w);
          CHECK(median(g, v, w, u) == m);
          CHECK(median(g, w, u, v) == m);
        }
  }
}

TEST_CASE("wall crossings give the l1 metric and match breadth-first distances") {
  SUBCASE("plane distance is the coordinate drift") {
    auto g = G::grid({{-4, 4}, {-4, 4}});
    CHECK(l1_distance(g, g.vertex_at({0, 0}), g.vertex_at({2, 3})) == 5);
    std::mt19937 rng(7);
    std::uniform_int_distribution<int> pick(0, g.vertex_count() - 1);
    for (int trial = 0; trial < 100; ++trial) {
      int a = pick(rng), b = pick(rng);
      CHECK(cube_phi(g, a, b).size() == cube_phi(g, b, a).size());
      CHECK(l1_distance(g, a, b) == drift(g.coordinate(a, 0), g.coordinate(b, 0)) +
                                        drift(g.coordinate(a, 1), g.coordinate(b, 1)));
    }
  }

  SUBCASE("crossed walls flip orientation between the endpoints") {
    auto t = caterpillar();
    for (int a = 0; a < t.vertex_count(); ++a)
      for (int b = 0; b < t.vertex_count(); ++b) {
        auto sep = cube_phi(t, a, b);
        CHECK(static_cast<int>(sep.size()) == l1_distance(t, a, b));
        for (const auto& h : sep) {
          CHECK(t.side(a, h.wall) == h.plus);
          CHECK(t.side(b, h.wall) == !h.plus);
        }
      }
  }

  SUBCASE("graph distance equals wall separation on every backend") {
    for (const G& h : {G::grid({{0, 3}, {0, 3}}), caterpillar(), G::cube(3), tripod(), folded()}) {
      auto d = bfs_distances(h);
      for (int a = 0; a < h.vertex_count(); ++a)
        for (int b = 0; b < h.vertex_count(); ++b) CHECK(d[a][b] == l1_distance(h, a, b));
    }
  }

  SUBCASE("coordinate dedup keeps the two-point closure metric") {
    auto c = folded();
    CHECK(c.kind() == G::Kind::points);
    CHECK(c.vertex_count() == 3);
    CHECK(c.wall_count() == 2);
    int a = c.vertex_by_name("0011"), b = c.vertex_by_name("1100"), m = c.vertex_by_name("0101");
    CHECK(l1_distance(c, a, m) == 1);
    CHECK(l1_distance(c, m, b) == 1);
    CHECK(l1_distance(c, a, b) == 2);
    CHECK(median(c, a, b, m) == m);
  }

  SUBCASE("the closure adds exactly the missing majority points") {
    auto c = tripod();
    CHECK(c.vertex_count() == 4);
    CHECK(c.wall_count() == 3);
    int hub = c.vertex_by_name("000");
    for (const char* leaf : {"001", "010", "100"})
      CHECK(l1_distance(c, hub, c.vertex_by_name(leaf)) == 1);
    CHECK(l1_distance(c, c.vertex_by_name("001"), c.vertex_by_name("010")) == 2);
    CHECK(median(c, c.vertex_by_name("001"), c.vertex_by_name("010"), c.vertex_by_name("100")) ==
          hub);
  }
}

TEST_CASE("hulls are exactly the metric intervals") {
  for (const G& h : {G::grid({{0, 3}, {0, 3}}), caterpillar(), G::cube(3), tripod()}) {
    auto d = bfs_distances(h);
    for (int u = 0; u < h.vertex_count(); ++u)
      for (int v = 0; v < h.vertex_count(); ++v) {
        std::vector<int> oracle;
        for (int x = 0; x < h.vertex_count(); ++x)
          if (d[u][x] + d[x][v] == d[u][v]) oracle.push_back(x);
        CHECK(cube_hull(h, {u, v}) == oracle);
      }
  }

  SUBCASE("hulls grow with their generating set and are fixed points") {
    auto g = G::grid({{-4, 4}, {-4, 4}});
    int u = g.vertex_at({-2, 1}), v = g.vertex_at({3, -1}), w = g.vertex_at({0, 4});
    auto pair_hull = cube_hull(g, {u, v});
    CHECK(pair_hull.size() == 18);  // the 6-by-3 box between the corners
    auto triple = cube_hull(g, {u, v, w});
    for (int x : pair_hull) CHECK(std::find(triple.begin(), triple.end(), x) != triple.end());
    CHECK(std::find(triple.begin(), triple.end(), median(g, u, v, w)) != triple.end());
    CHECK(cube_hull(g, triple) == triple);
    CHECK(cube_hull(g, {u}) == std::vector<int>{u});
    CHECK_THROWS_AS(cube_hull(g, {}), usage_error);
  }
}

TEST_CASE("orientations validate with witnessing half-space pairs") {
  auto line = G::grid({{0, 7}});

  SUBCASE("principal points always validate") {
    for (const G& h : {line, caterpillar(), G::cube(3)})
      for (int v = 0; v < h.vertex_count(); ++v) {
        auto uf = Ultrafilter::principal(h, v);
        CHECK(uf.kind() == Ultrafilter::Kind::principal);
        CHECK(uf.decided());
        CHECK(uf.base_vertex() == v);
        CHECK(!validate_ultrafilter(h, uf).has_value());
        CHECK(is_principal(h, uf));
      }
  }

  SUBCASE("disjoint half-spaces are reported as a pair") {
    std::vector<std::optional<bool>> sides(line.wall_count());
    sides[2] = false;  // x <= 2
    sides[4] = true;   // x >= 5
    auto uf = Ultrafilter::explicit_orientation(line, sides);
    CHECK(!uf.decided());
    CHECK(!uf.side(0).has_value());
    CHECK(uf.side(4) == true);
    auto witness = validate_ultrafilter(line, uf);
    REQUIRE(witness.has_value());
    CHECK(witness->first == HalfSpace{2, false});
    CHECK(witness->second == HalfSpace{4, true});
  }

  SUBCASE("directional limits orient axes as cuts") {
    auto plane = G::grid({{-4, 4}, {-4, 4}});
    auto corner = Ultrafilter::directional(
        plane, {AxisLimit::plus_infinity(), AxisLimit::plus_infinity()});
    CHECK(corner.kind() == Ultrafilter::Kind::directional);
    CHECK(corner.decided());
    CHECK(!validate_ultrafilter(plane, corner).has_value());
    CHECK(!is_principal(plane, corner));
    auto strip =
        Ultrafilter::directional(plane, {AxisLimit::plus_infinity(), AxisLimit::at_value(3)});
    CHECK(!validate_ultrafilter(plane, strip).has_value());
    CHECK(!is_principal(plane, strip));
    auto pinned =
        Ultrafilter::directional(plane, {AxisLimit::at_value(-1), AxisLimit::at_value(3)});
    CHECK(is_principal(plane, pinned));
    CHECK(row_of(plane, pinned) ==
          row_of(plane, Ultrafilter::principal(plane, plane.vertex_at({-1, 3}))));
    CHECK(pinned.limits().size() == 2);
    CHECK_THROWS_AS(corner.base_vertex(), usage_error);
    CHECK_THROWS_AS(Ultrafilter::principal(plane, 0).limits(), usage_error);
    CHECK_THROWS_AS(Ultrafilter::directional(caterpillar(), {AxisLimit::at_value(0)}),
                    usage_error);
    CHECK_THROWS_AS(Ultrafilter::directional(plane, {AxisLimit::at_value(0)}), usage_error);
    CHECK_THROWS_AS(Ultrafilter::explicit_orientation(plane, {}), usage_error);
  }

  SUBCASE("an explicit row is principal exactly when a vertex realizes it") {
    std::vector<std::optional<bool>> all_plus(line.wall_count(), true);
    auto edge = Ultrafilter::explicit_orientation(line, all_plus);
    CHECK(!validate_ultrafilter(line, edge).has_value());
    CHECK(is_principal(line, edge));  // the right end of the window realizes it
    std::vector<std::optional<bool>> torn(line.wall_count(), true);
    torn[0] = false;  // x <= 0 against x >= 2 and beyond
    auto uf = Ultrafilter::explicit_orientation(line, torn);
    CHECK(!is_principal(line, uf));
    auto witness = validate_ultrafilter(line, uf);
    REQUIRE(witness.has_value());
    CHECK(witness->first == HalfSpace{0, false});
    CHECK(witness->second == HalfSpace{1, true});
  }
}

TEST_CASE("sectors match half-space constraints and stabilized hulls") {
  auto g = G::grid({{-4, 4}, {-4, 4}});
  auto corner =
      Ultrafilter::directional(g, {AxisLimit::plus_infinity(), AxisLimit::plus_infinity()});
  auto strip = Ultrafilter::directional(g, {AxisLimit::plus_infinity(), AxisLimit::at_value(3)});

  SUBCASE("a corner point cuts out the quadrant") {
    auto sec = cube_sector(g, g.vertex_at({-1, 1}), corner);
    std::vector<int> want;
    for (int v = 0; v < g.vertex_count(); ++v)
      if (g.coordinate(v, 0) >= -1 && g.coordinate(v, 1) >= 1) want.push_back(v);
    CHECK(sec == want);
    CHECK(sec.size() == 24);
  }

  SUBCASE("a strip point caps the pinned axis on both sides") {
    auto sec = cube_sector(g, g.vertex_at({0, 0}), strip);
    std::vector<int> want;
    for (int v = 0; v < g.vertex_count(); ++v)
      if (g.coordinate(v, 0) >= 0 && g.coordinate(v, 1) >= 0 && g.coordinate(v, 1) <= 3)
        want.push_back(v);
    CHECK(sec == want);
    CHECK(sec.size() == 20);
  }

  SUBCASE("hull limits certify the same sector") {
    std::vector<int> diag, shelf;
    for (long long n = 0; n <= 4; ++n) diag.push_back(g.vertex_at({n, n}));
    for (int pad = 0; pad < 3; ++pad) diag.push_back(g.vertex_at({4, 4}));
    CHECK(cube_sector_via_hulls(g, g.vertex_at({-1, 1}), diag, 3) ==
          cube_sector(g, g.vertex_at({-1, 1}), corner));
    for (long long n = 0; n <= 4; ++n) shelf.push_back(g.vertex_at({n, 3}));
    for (int pad = 0; pad < 3; ++pad) shelf.push_back(g.vertex_at({4, 3}));
    CHECK(cube_sector_via_hulls(g, g.vertex_at({0, 0}), shelf, 3) ==
          cube_sector(g, g.vertex_at({0, 0}), strip));
  }

  SUBCASE("principal sectors are two-point hulls") {
    auto t = caterpillar();
    for (int v = 0; v < t.vertex_count(); ++v)
      for (int w = 0; w < t.vertex_count(); ++w)
        CHECK(cube_sector(t, v, Ultrafilter::principal(t, w)) == cube_hull(t, {v, w}));
    for (int v = 0; v < g.vertex_count(); v += 7)
      for (int w = 0; w < g.vertex_count(); w += 11)
        CHECK(cube_sector(g, v, Ultrafilter::principal(g, w)) == cube_hull(g, {v, w}));
  }

  SUBCASE("moving into a sector only shrinks it") {
    for (const auto& xi : {corner, strip}) {
      auto base = cube_sector(g, g.vertex_at({-2, -2}), xi);
      std::set<int> inside(base.begin(), base.end());
      for (std::size_t i = 0; i < base.size(); i += 3)
        for (int x : cube_sector(g, base[i], xi)) CHECK(inside.count(x) == 1);
    }
  }

  SUBCASE("undecided walls and unsettled sequences raise the horizon") {
    std::vector<std::optional<bool>> open(g.wall_count());
    open[0] = true;
    auto uf = Ultrafilter::explicit_orientation(g, open);
    CHECK_THROWS_AS(cube_sector(g, 0, uf), horizon_error);
    CHECK_THROWS_AS(cube_horofunction(g, uf, 0, 1), horizon_error);
    std::vector<int> swinging;
    for (int r = 0; r < 2; ++r) {
      swinging.push_back(g.vertex_at({0, 0}));
      swinging.push_back(g.vertex_at({4, 4}));
    }
    CHECK_THROWS_AS(cube_sector_via_hulls(g, 0, swinging, 3), horizon_error);
    CHECK_THROWS_AS(cube_sector_via_hulls(g, 0, {g.vertex_at({1, 1})}, 3), horizon_error);
    CHECK_THROWS_AS(cube_sector_via_hulls(g, 0, swinging, 0), usage_error);
  }
}

TEST_CASE("filtering picks the nearest verified vertex") {
  auto g = G::grid({{-4, 4}, {-4, 4}});
  auto corner =
      Ultrafilter::directional(g, {AxisLimit::plus_infinity(), AxisLimit::plus_infinity()});

  SUBCASE("the quadrant example meets at the join") {
    CHECK(cube_filtering(g, g.vertex_at({0, 1}), g.vertex_at({1, 0}), corner) ==
          g.vertex_at({1, 1}));
    CHECK(cube_filtering(g, g.vertex_at({4, -4}), g.vertex_at({-4, 4}), corner) ==
          g.vertex_at({4, 4}));
  }

  SUBCASE("a point filters with itself") {
    for (int v = 0; v < g.vertex_count(); v += 5) CHECK(cube_filtering(g, v, v, corner) == v);
  }

  SUBCASE("toward a principal point the filter is the median") {
    auto t = caterpillar();
    for (int u = 0; u < t.vertex_count(); ++u)
      for (int v = 0; v < t.vertex_count(); ++v)
        for (int l = 0; l < t.vertex_count(); ++l)
          CHECK(cube_filtering(t, u, v, Ultrafilter::principal(t, l)) == median(t, u, v, l));
  }

  SUBCASE("the result's sector refines both inputs'") {
    int far = g.vertex_at({4, 4});
    std::mt19937 rng(11);
    std::uniform_int_distribution<int> pick(0, g.vertex_count() - 1);
    for (int trial = 0; trial < 60; ++trial) {
      int u = pick(rng), v = pick(rng);
      int z = cube_filtering(g, u, v, corner);
      CHECK(z == median(g, u, v, far));  // at window scale the corner acts like far
      auto su = cube_sector(g, u, corner), sv = cube_sector(g, v, corner);
      std::set<int> iu(su.begin(), su.end()), iv(sv.begin(), sv.end());
      CHECK(iu.count(z) == 1);
      CHECK(iv.count(z) == 1);
      for (int x : cube_sector(g, z, corner)) {
        CHECK(iu.count(x) == 1);
        CHECK(iv.count(x) == 1);
      }
    }
  }
}

TEST_CASE("horofunctions telescope, separate, and ignore the construction route") {
  SUBCASE("line values fall one unit per step toward the end") {
    auto line = G::grid({{-6, 6}});
    auto plus_end = Ultrafilter::directional(line, {AxisLimit::plus_infinity()});
    auto minus_end = Ultrafilter::directional(line, {AxisLimit::minus_infinity()});
    int y0 = line.vertex_at({0});
    for (long long k = -6; k <= 6; ++k) {
      CHECK(cube_horofunction(line, plus_end, line.vertex_at({k}), y0) == -k);
      CHECK(cube_horofunction(line, minus_end, line.vertex_at({k}), y0) == k);
    }
  }

  SUBCASE("plane corner values add the coordinate drifts") {
    auto g = G::grid({{-4, 4}, {-4, 4}});
    auto corner =
        Ultrafilter::directional(g, {AxisLimit::plus_infinity(), AxisLimit::plus_infinity()});
    int y0 = g.vertex_at({0, 0});
    CHECK(cube_horofunction(g, corner, g.vertex_at({1, 2}), y0) == -3);
    int far = g.vertex_at({4, 4});
    for (int y = 0; y < g.vertex_count(); ++y) {
      CHECK(cube_horofunction(g, corner, y, y0) == -(g.coordinate(y, 0) + g.coordinate(y, 1)));
      // within the window the far corner already telescopes the limit
      CHECK(cube_horofunction(g, corner, y, y0) ==
            l1_distance(g, far, y) - l1_distance(g, far, y0));
    }
  }

  SUBCASE("principal values telescope through the base point exactly") {
    auto t = caterpillar();
    for (int b = 0; b < t.vertex_count(); ++b)
      for (int y = 0; y < t.vertex_count(); ++y)
        for (int y0 = 0; y0 < t.vertex_count(); ++y0)
          CHECK(cube_horofunction(t, Ultrafilter::principal(t, b), y, y0) ==
                l1_distance(t, b, y) - l1_distance(t, b, y0));
  }

  SUBCASE("values difference like a cocycle") {
    auto g = G::grid({{-4, 4}, {-4, 4}});
    auto strip =
        Ultrafilter::directional(g, {AxisLimit::minus_infinity(), AxisLimit::at_value(-2)});
    std::mt19937 rng(5);
    std::uniform_int_distribution<int> pick(0, g.vertex_count() - 1);
    for (int trial = 0; trial < 100; ++trial) {
      int y = pick(rng), mid = pick(rng), y0 = pick(rng);
      CHECK(cube_horofunction(g, strip, y, y0) ==
            cube_horofunction(g, strip, y, mid) + cube_horofunction(g, strip, mid, y0));
    }
  }

  SUBCASE("three routes to one point give one function") {
    auto line = G::grid({{0, 7}});
    auto direct = Ultrafilter::directional(line, {AxisLimit::at_value(2)});
    auto through = Ultrafilter::principal(line, line.vertex_at({2}));
    std::vector<std::optional<bool>> sides(line.wall_count());
    for (int w = 0; w < line.wall_count(); ++w) sides[w] = line.side(line.vertex_at({2}), w);
    auto spelled = Ultrafilter::explicit_orientation(line, sides);
    for (int y = 0; y < line.vertex_count(); ++y) {
      auto v = cube_horofunction(line, direct, y, 0);
      CHECK(v == cube_horofunction(line, through, y, 0));
      CHECK(v == cube_horofunction(line, spelled, y, 0));
    }
    CHECK(cube_sector(line, 0, direct) == cube_sector(line, 0, through));
  }

  SUBCASE("distinct directions are separated by some window point") {
    auto line = G::grid({{-6, 6}});
    std::vector<Ultrafilter> points = {
        Ultrafilter::directional(line, {AxisLimit::plus_infinity()}),
        Ultrafilter::directional(line, {AxisLimit::minus_infinity()}),
        Ultrafilter::directional(line, {AxisLimit::at_value(-2)}),
        Ultrafilter::directional(line, {AxisLimit::at_value(3)})};
    int y0 = line.vertex_at({0});
    for (std::size_t i = 0; i < points.size(); ++i)
      for (std::size_t j = i + 1; j < points.size(); ++j) {
        bool split = false;
        for (int y = 0; y < line.vertex_count() && !split; ++y)
          split = cube_horofunction(line, points[i], y, y0) !=
                  cube_horofunction(line, points[j], y, y0);
        CHECK(split);
      }
  }
}

TEST_CASE("roller points enumerate the consistent orientations") {
  SUBCASE("complete structures carry principal points only") {
    auto t = caterpillar();
    auto points = roller_points(t);
    CHECK(points.size() == 10);
    std::set<std::vector<char>> got, want;
    for (const auto& uf : points) {
      CHECK(uf.decided());
      CHECK(is_principal(t, uf));
      CHECK(!validate_ultrafilter(t, uf).has_value());
      got.insert(row_of(t, uf));
    }
    for (int v = 0; v < t.vertex_count(); ++v) {
      std::vector<char> row(t.wall_count());
      for (int w = 0; w < t.wall_count(); ++w) row[w] = t.side(v, w) ? 1 : 0;
      want.insert(row);
    }
    CHECK(got == want);
  }

  SUBCASE("cubes realize every orientation") {
    auto c = G::cube(3);
    auto points = roller_points(c);
    CHECK(points.size() == 8);
    for (const auto& uf : points) CHECK(is_principal(c, uf));
  }

  SUBCASE("closures drop the orientations their points rule out") {
    auto c = tripod();
    auto points = roller_points(c);
    CHECK(points.size() == 4);
    for (const auto& uf : points) CHECK(is_principal(c, uf));
  }

  SUBCASE("a twelve-wall path fits the default budget") {
    std::vector<std::pair<int, int>> edges;
    for (int i = 0; i < 12; ++i) edges.push_back({i, i + 1});
    auto p = G::tree_graph(edges);
    auto points = roller_points(p);
    CHECK(points.size() == 13);
    for (const auto& uf : points) CHECK(is_principal(p, uf));
  }

  SUBCASE("beyond the budget the scan refuses") {
    auto wide = G::grid({{0, 13}});
    CHECK_THROWS_AS(roller_points(wide), usage_error);
    CHECK(roller_points(wide, 13).size() == 14);
    CHECK_THROWS_AS(roller_points(G::grid({{0, 21}}), 21), usage_error);
  }
}

TEST_CASE("sequence limits recover orientations") {
  auto g = G::grid({{-4, 4}, {-4, 4}});

  SUBCASE("a marching diagonal settles on the corner") {
    std::vector<int> seq;
    for (long long n = 0; n <= 4; ++n) seq.push_back(g.vertex_at({n, n}));
    for (int pad = 0; pad < 3; ++pad) seq.push_back(g.vertex_at({4, 4}));
    auto limit = cube_converges(g, seq, 3);
    REQUIRE(limit.has_value());
    CHECK(limit->kind() == Ultrafilter::Kind::explicit_orientation);
    CHECK(limit->decided());
    auto corner =
        Ultrafilter::directional(g, {AxisLimit::plus_infinity(), AxisLimit::plus_infinity()});
    CHECK(row_of(g, *limit) == row_of(g, corner));
    CHECK(is_principal(g, *limit));  // the window edge realizes the limit row
  }

  SUBCASE("swinging sequences stay open") {
    std::vector<int> swinging;
    for (int r = 0; r < 4; ++r) {
      swinging.push_back(g.vertex_at({0, 0}));
      swinging.push_back(g.vertex_at({4, 4}));
    }
    CHECK(!cube_converges(g, swinging, 3).has_value());
    CHECK(!cube_converges(g, {0, 1}, 3).has_value());  // shorter than the run
    CHECK_THROWS_AS(cube_converges(g, {}, 3), usage_error);
    CHECK_THROWS_AS(cube_converges(g, {0}, 0), usage_error);
  }

  SUBCASE("settled sequences match their final vertex") {
    std::mt19937 rng(23);
    std::uniform_int_distribution<int> pick(0, g.vertex_count() - 1);
    for (int trial = 0; trial < 40; ++trial) {
      std::vector<int> seq;
      for (int i = 0; i < 4; ++i) seq.push_back(pick(rng));
      int rest = pick(rng);
      for (int i = 0; i < 4; ++i) seq.push_back(rest);
      auto limit = cube_converges(g, seq, 4);
      REQUIRE(limit.has_value());
      CHECK(g.vertex_with_sides(row_of(g, *limit)) == rest);
    }
  }
}
