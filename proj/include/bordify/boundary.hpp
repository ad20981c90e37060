#pragma once

#include <array>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "bordify/chamber_system.hpp"
#include "bordify/residues.hpp"

namespace bordify {

/// Eventual position of a boundary point relative to a wall: strictly inside
/// the plus root, strictly inside the minus root, or on the wall ("both": the
/// tail of any representing sequence lies on the wall, so both closed roots
/// contain the point).
enum class WallClass : unsigned char { plus, minus, both };

/// A point of the combinatorial bordification of a thin apartment, described
/// intensionally as a side-of-wall oracle.  Interior residues and affine
/// directions of the alcove model answer every wall exactly; an explicit
/// sequence answers with a trailing confirmation run and may be undecided.
class BoundaryPoint {
public:
  enum class Kind { interior, affine, sequence };

  static BoundaryPoint interior(const CoxeterGroup& g, SphericalResidue r);
  /// Limit of the alcoves met by base + t * (toward - base) in sample-point
  /// coordinates; the two chambers must be distinct.  Exact.
  static BoundaryPoint affine_ray(const CoxeterGroup& g, const Word& base,
                                  const Word& toward);
  /// Limit of the alcoves along position/den + t * velocity, all values in
  /// chamber_coords units; velocity must be family-consistent and nonzero.
  static BoundaryPoint affine_direction(const CoxeterGroup& g,
                                        std::vector<long long> position,
                                        std::vector<long long> velocity,
                                        long long den = 1);
  /// Explicit residue sequence.  A wall classifies only when the trailing
  /// confirm entries agree on it; results carry that certificate, not a proof.
  static BoundaryPoint sequence(const CoxeterGroup& g,
                                std::vector<SphericalResidue> seq, int confirm);

  const CoxeterGroup& group() const;
  Kind kind() const;
  /// Interior and affine points answer every wall; sequences may be undecided.
  bool exact() const;
  const SphericalResidue& residue() const;

  // Defining data, for serialization.  Affine points only:
  const std::vector<long long>& position() const;  // numerators over denominator()
  const std::vector<long long>& velocity() const;
  long long denominator() const;
  // Sequence points only:
  const std::vector<SphericalResidue>& sequence_data() const;
  int confirmation() const;

  /// Eventual side of the wall; nullopt when the certificate is exhausted.
  std::optional<WallClass> wall_class(const Word& reflection) const;
  /// Does the closed root eventually contain the point?
  std::optional<bool> in_root(const Root& r) const;

  /// Alcoves visited along the defining ray (affine points only): the chamber
  /// at position + n * velocity for n = 0 .. count-1.
  std::vector<SphericalResidue> ray_sequence(int count) const;

private:
  struct Impl;
  explicit BoundaryPoint(std::shared_ptr<const Impl> impl);
  std::optional<WallClass> classify_fresh(const Word& reduced) const;
  std::shared_ptr<const Impl> impl_;
};

/// Stabilized projection to the star of sigma: the coset-minimal element of
/// St(sigma) inside every closed root on xi's side of a wall through sigma.
/// For interior points this is the combinatorial projection.
SphericalResidue xi_value(const BoundaryPoint& xi, const SphericalResidue& sigma);

/// Residue at C whose type collects the panels of C projecting away from C
/// under xi.  Asserts the type is spherical and the projection is opposite C
/// inside the result; xi at C itself degenerates to C with empty type.
SphericalResidue residual_projection(const BoundaryPoint& xi, const Word& C);

/// Combinatorial sector: base, the defining roots shared by Phi(base) and
/// Phi(xi) within the window's wall table, and every window residue inside
/// all of them.
struct Sector {
  SphericalResidue base;
  std::vector<Root> roots;
  std::vector<SphericalResidue> members;
};

Sector sector(const ApartmentWindow& win, const SphericalResidue& x,
              const BoundaryPoint& xi);

/// Independent route to the sector on the inner ball: the stabilized value
/// of Conv(x, seq[n]) restricted to residues spanning at most inner_horizon,
/// certified by a trailing run of confirm equal restrictions (default: the
/// window radius).  The hulls themselves must fit in the window.
std::vector<SphericalResidue> sector_via_hulls(const ApartmentWindow& win,
                                               const SphericalResidue& x,
                                               const std::vector<SphericalResidue>& seq,
                                               int inner_horizon, int confirm = -1);

/// A residue z with sector(z, xi) inside sector(x, xi) and sector(y, xi),
/// found by scanning the intersection by distance from x; the containment is
/// verified before returning.
SphericalResidue common_subsector(const ApartmentWindow& win, const SphericalResidue& x,
                                  const SphericalResidue& y, const BoundaryPoint& xi);

/// Boundary point induced by the sequence when every table wall stabilizes
/// with a trailing run of confirm entries (default: the window radius);
/// nullopt as soon as one wall stays undecided.
std::optional<BoundaryPoint> converges(const ApartmentWindow& win,
                                       const std::vector<SphericalResidue>& seq,
                                       int confirm = -1);

/// The window residue classifying every table wall exactly like xi, if any;
/// such a tuple pins the point to that residue on the window.
std::optional<SphericalResidue> interior_limit(const ApartmentWindow& win,
                                               const BoundaryPoint& xi);

/// Stabilized value of d(R_n, y) - d(R_n, y0): walls with y and y0 on one
/// side cancel exactly, so the sum runs over the separating walls only.
HalfInt horofunction(const ApartmentWindow& win, const BoundaryPoint& xi,
                     const SphericalResidue& y, const SphericalResidue& y0);

/// Do the two points classify every table wall identically?
bool same_limit(const ApartmentWindow& win, const BoundaryPoint& a,
                const BoundaryPoint& b);

/// A window residue whose horofunction value against base separates the two
/// points, when they differ on some table wall.
std::optional<SphericalResidue> limit_witness(const ApartmentWindow& win,
                                              const BoundaryPoint& a,
                                              const BoundaryPoint& b,
                                              const SphericalResidue& base);

/// One boundary class of the affine-A2 alcove model: a regular direction
/// (every family functional diverges, signs as listed) or a threshold family
/// (one family pinned between consecutive walls, a line of points indexed by
/// the strip offset).
struct AffineBoundaryClass {
  std::string name;
  std::array<int, 3> signs;  // eventual sign per family; 0 = bounded
  int bounded_family = -1;
  BoundaryPoint point;  // representative; strip offset 0 for threshold classes
};

/// The census of the affine-A2 boundary: six regular classes and six
/// threshold families, in a fixed order.
std::vector<AffineBoundaryClass> affine_boundary_census(const CoxeterGroup& g);

/// Member k of a threshold family: the bounded family stays inside the strip
/// between walls k and k+1 while the others diverge with the transverse sign.
BoundaryPoint affine_threshold_point(const CoxeterGroup& g, int bounded_family,
                                     Sign transverse, long long k);

// --- building windows -------------------------------------------------------

/// Boundary point of a building window: an interior residue, an end of a tree
/// window (a vertex whose star the window clips), a componentwise product
/// point, or an
/// explicit residue sequence with a confirmation certificate.
class BuildingPoint {
public:
  enum class Kind { interior, tree_end, product, sequence };

  static BuildingPoint interior(const ChamberSystem& sys, ChamberSystem::BResidue r);
  static BuildingPoint tree_end(const ChamberSystem& sys, int boundary_vertex);
  static BuildingPoint product(const ChamberSystem& sys, BuildingPoint left,
                               BuildingPoint right);
  static BuildingPoint sequence(const ChamberSystem& sys, std::vector<ChamberSystem::BResidue> seq,
                                int confirm);

  const ChamberSystem& system() const;
  Kind kind() const;
  bool exact() const;
  const ChamberSystem::BResidue& residue() const;
  int end_vertex() const;
  std::pair<BuildingPoint, BuildingPoint> factors() const;
  const std::vector<ChamberSystem::BResidue>& sequence_data() const;
  int confirmation() const;

  /// Side of the tree wall at vertex w: -1 on the wall, -2 beyond the window
  /// boundary, otherwise the neighbor of w toward the point.  Trees only;
  /// nullopt when a sequence certificate is exhausted.
  std::optional<int> tree_side(int w) const;

  /// The point with certificates discharged: sequences are replaced by the
  /// limit they stabilize to (nullopt when undecided), everything else is
  /// returned unchanged.
  std::optional<BuildingPoint> resolved() const;

private:
  struct Impl;
  explicit BuildingPoint(std::shared_ptr<const Impl> impl);
  std::shared_ptr<const Impl> impl_;
};

/// Stabilized projection of xi to the star of sigma.
ChamberSystem::BResidue xi_value(const BuildingPoint& xi, const ChamberSystem::BResidue& sigma);

/// Boundary point induced by the sequence when it stabilizes: the interior
/// residue it freezes at, the tree end it walks out through, or the pair of
/// factor limits; nullopt when some wall keeps flipping.
std::optional<BuildingPoint> converges(const ChamberSystem& sys,
                                       const std::vector<ChamberSystem::BResidue>& seq,
                                       int confirm = -1);

/// Stabilized value of d(R_n, y) - d(R_n, y0) over the building window.
HalfInt horofunction(const BuildingPoint& xi, const ChamberSystem::BResidue& y, const ChamberSystem::BResidue& y0);

/// Members of the sector from x toward xi: for a tree end the half-line of
/// residues along the ray from x, clipped to the window.
std::vector<ChamberSystem::BResidue> building_sector(const BuildingPoint& xi, const ChamberSystem::BResidue& x);

/// A residue z whose sector sits inside both given sectors, scanned by
/// distance from x and verified before returning.
ChamberSystem::BResidue building_common_subsector(const BuildingPoint& xi, const ChamberSystem::BResidue& x,
                                   const ChamberSystem::BResidue& y);

bool same_limit(const BuildingPoint& a, const BuildingPoint& b);

/// A window residue whose horofunction value against base separates the two
/// points, when some wall classifies differently.
std::optional<ChamberSystem::BResidue> limit_witness(const BuildingPoint& a, const BuildingPoint& b,
                                      const ChamberSystem::BResidue& base);

}  // namespace bordify
