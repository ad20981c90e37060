#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "bordify/errors.hpp"

namespace bordify {

/// One side of a wall of a median graph.
struct HalfSpace {
  int wall = 0;
  bool plus = false;
  friend bool operator==(const HalfSpace&, const HalfSpace&) = default;
  friend auto operator<=>(const HalfSpace&, const HalfSpace&) = default;
};

/// A finite window of a CAT(0) cube complex's vertex set, presented through
/// its hyperplane system: every vertex answers a side for every wall, the
/// l1 metric counts separating walls, and medians are wall-wise majorities.
///
/// Backends and wall orientations:
///   grid    box windows of Z^d; the wall (axis, t) has plus side coord > t,
///           with thresholds strictly inside the box so both sides meet it.
///   tree    a finite tree on vertices 0..n-1; one wall per edge, plus side
///           the component of the edge's second endpoint.
///   cube    the full n-cube {0,1}^n; wall i has plus side bit i set.
///   points  the median closure of explicit vertices in {0,1}^n, with
///           constant coordinates dropped and coordinates inducing the same
///           partition merged, so distances stay wall-separation counts.
/// Grid backends are windows of an unbounded complex; the rest are complete.
class MedianGraph {
public:
  enum class Kind { grid, tree, cube, points };

  static MedianGraph grid(std::vector<std::pair<long long, long long>> ranges);
  static MedianGraph tree_graph(const std::vector<std::pair<int, int>>& edges);
  static MedianGraph cube(int n);
  static MedianGraph closure(int n, const std::vector<std::vector<int>>& pts);

  Kind kind() const { return kind_; }
  bool is_complete() const { return kind_ != Kind::grid; }
  int vertex_count() const { return static_cast<int>(side_.size()); }
  int wall_count() const { return walls_; }
  /// Does the plus half-space of the wall contain the vertex?
  bool side(int v, int w) const;
  const std::string& vertex_name(int v) const;
  int vertex_by_name(const std::string& name) const;

  // Grid structure.
  int axes() const;
  std::pair<long long, long long> axis_range(int axis) const;
  long long coordinate(int v, int axis) const;
  int vertex_at(const std::vector<long long>& coords) const;
  int wall_axis(int w) const;
  long long wall_threshold(int w) const;

  // Tree structure.
  std::pair<int, int> wall_edge(int w) const;

  /// The vertex with exactly this side vector, if the window holds it.
  std::optional<int> vertex_with_sides(const std::vector<char>& sides) const;

private:
  MedianGraph() = default;
  void index();

  Kind kind_ = Kind::grid;
  int walls_ = 0;
  std::vector<std::vector<char>> side_;
  std::vector<std::string> names_;
  std::map<std::string, int> by_name_;
  std::map<std::vector<char>, int> by_sides_;

  int axes_ = 0;
  std::vector<std::pair<long long, long long>> ranges_;
  std::vector<std::vector<long long>> coords_;
  std::vector<int> wall_axis_;
  std::vector<long long> wall_threshold_;
  std::vector<std::pair<int, int>> wall_edge_;
};

/// The unique vertex on all three pairwise l1-geodesics: the wall-wise
/// majority vote.  All provided backends are median-closed, so the lookup
/// only fails if a window invariant is broken.
int median(const MedianGraph& g, int u, int v, int w);

/// Half-spaces containing a but not b; the l1 distance is their number.
std::vector<HalfSpace> cube_phi(const MedianGraph& g, int a, int b);
int l1_distance(const MedianGraph& g, int a, int b);

/// Eventual behavior of one grid axis: pinned at a value or diverging.
struct AxisLimit {
  enum class Tag { minus_infinity, at, plus_infinity };
  Tag tag = Tag::at;
  long long value = 0;
  static AxisLimit at_value(long long v) { return {Tag::at, v}; }
  static AxisLimit plus_infinity() { return {Tag::plus_infinity, 0}; }
  static AxisLimit minus_infinity() { return {Tag::minus_infinity, 0}; }
  friend bool operator==(const AxisLimit&, const AxisLimit&) = default;
};

/// A point of the ultrafilter compactification, described as an orientation
/// of the wall set: principal points orient every wall toward one vertex,
/// directional points orient grid walls by per-axis limits, and explicit
/// orientations may leave walls undecided.
class Ultrafilter {
public:
  enum class Kind { principal, directional, explicit_orientation };

  static Ultrafilter principal(const MedianGraph& g, int v);
  static Ultrafilter directional(const MedianGraph& g, std::vector<AxisLimit> limits);
  static Ultrafilter explicit_orientation(const MedianGraph& g,
                                          std::vector<std::optional<bool>> sides);

  Kind kind() const { return kind_; }
  /// Chosen side of the wall; nullopt when the orientation leaves it open.
  std::optional<bool> side(int w) const;
  bool decided() const;  // every wall oriented
  int base_vertex() const;                      // principal only
  const std::vector<AxisLimit>& limits() const;  // directional only

private:
  Ultrafilter() = default;

  Kind kind_ = Kind::explicit_orientation;
  std::vector<std::int8_t> side_;  // -1 undecided, 0 minus, 1 plus
  int base_ = -1;
  std::vector<AxisLimit> limits_;
};

/// Nullopt when every pair of chosen half-spaces meets the window; otherwise
/// one offending disjoint pair as a witness.
std::optional<std::pair<HalfSpace, HalfSpace>> validate_ultrafilter(const MedianGraph& g,
                                                                    const Ultrafilter& uf);

/// Combinatorial convex hull: the vertices inside every half-space that
/// contains all the given points.
std::vector<int> cube_hull(const MedianGraph& g, const std::vector<int>& pts);

/// Combinatorial sector: the vertices inside every half-space chosen by both
/// the base vertex and the ultrafilter.  The orientation must be decided.
std::vector<int> cube_sector(const MedianGraph& g, int v, const Ultrafilter& xi);

/// Independent route to the sector: the stabilized value of Conv(v, seq[n]),
/// certified by a trailing run of confirm equal hulls.
std::vector<int> cube_sector_via_hulls(const MedianGraph& g, int v,
                                       const std::vector<int>& seq, int confirm);

/// A vertex z with cube_sector(z, xi) inside both sectors, scanned by
/// distance from u and postcondition-verified before returning.
int cube_filtering(const MedianGraph& g, int u, int v, const Ultrafilter& xi);

/// Stabilized value of d(v_n, y) - d(v_n, y0): each wall separating y from
/// y0 contributes -1 when y is on the chosen side and +1 otherwise.
long long cube_horofunction(const MedianGraph& g, const Ultrafilter& xi, int y, int y0);

/// Does the point coincide with a vertex's orientation?  Directional axes at
/// +/-infinity orient walls beyond any window, so they are never principal;
/// on grid backends an explicit match certifies principality on the window.
bool is_principal(const MedianGraph& g, const Ultrafilter& uf);

/// Every pairwise-consistent total orientation, by exhaustive enumeration;
/// the 2^walls scan is refused beyond max_walls.  On a complete backend these
/// are exactly the principal points.
std::vector<Ultrafilter> roller_points(const MedianGraph& g, int max_walls = 12);

/// Orientation induced by the sequence when every wall stabilizes with a
/// trailing run of confirm entries; nullopt as soon as one wall keeps
/// flipping.
std::optional<Ultrafilter> cube_converges(const MedianGraph& g, const std::vector<int>& seq,
                                          int confirm);

}  // namespace bordify
