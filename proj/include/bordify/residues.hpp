#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <vector>

#include "bordify/coxeter.hpp"
#include "bordify/half_integer.hpp"

namespace bordify {

/// Spherical residue of the thin chamber system of W: a coset w W_J with J
/// spherical, stored by its minimal-length representative.
struct SphericalResidue {
  Word rep;
  TypeSet type;

  friend bool operator==(const SphericalResidue&, const SphericalResidue&) = default;
};

/// Deterministic ordering: by rank, then type, then representative.
bool residue_less(const SphericalResidue& a, const SphericalResidue& b);

SphericalResidue make_residue(const CoxeterGroup& g, Word w, TypeSet J);
SphericalResidue chamber_of(const CoxeterGroup& g, Word w);
inline bool is_chamber(const SphericalResidue& r) { return r.type.empty(); }

std::vector<Word> residue_members(const CoxeterGroup& g, const SphericalResidue& r);
/// Largest chamber length over the coset; the coset sits inside ball(span).
int member_span(const CoxeterGroup& g, const SphericalResidue& r);

enum class SideOfRoot { contains, not_contains, on_wall };

/// contains: the coset lies on the root's open side.  on_wall: the wall
/// reflection stabilizes the coset, so both closed roots contain it.
SideOfRoot residue_side(const CoxeterGroup& g, const Root& r, const SphericalResidue& R);
/// Closed containment: contains or on_wall.
bool residue_in_root(const CoxeterGroup& g, const Root& r, const SphericalResidue& R);

/// Chamber-set containment inner ⊆ outer.  The simplicial face order runs the
/// opposite way: inner's simplex has outer's simplex as a face.
bool coset_within(const CoxeterGroup& g, const SphericalResidue& inner,
                  const SphericalResidue& outer);

/// Residues whose chamber set lies inside R: the star of R's simplex.
std::vector<SphericalResidue> star(const CoxeterGroup& g, const SphericalResidue& r);
/// Residues whose chamber set contains R: the faces of R's simplex.
std::vector<SphericalResidue> faces_of(const CoxeterGroup& g, const SphericalResidue& r);
std::vector<SphericalResidue> closure(const CoxeterGroup& g,
                                      std::vector<SphericalResidue> set);
bool is_closed(const CoxeterGroup& g, const std::vector<SphericalResidue>& set);

/// Roots whose closed half contains R1 but not R2.  Exact: candidate walls are
/// read off minimal galleries between the two chamber sets, which meet every
/// separating wall.  The horizon only bounds the declared working region.
std::vector<Root> separating_roots(const CoxeterGroup& g, const SphericalResidue& r1,
                                   const SphericalResidue& r2, int horizon);

/// Half the separating-root count in each direction; restricted to chambers
/// this is the gallery metric.
HalfInt root_distance(const CoxeterGroup& g, const SphericalResidue& r1,
                      const SphericalResidue& r2, int horizon);

int gallery_distance(const CoxeterGroup& g, const Word& c1, const Word& c2);

/// All spherical residues whose chamber set lies in ball(h).
std::vector<SphericalResidue> residues_in_ball(const CoxeterGroup& g, int h);

/// Precomputed wall classifications for every residue in a ball, used by the
/// window-scale operations.  Wall w of the table gets two bits per residue:
/// within the closed plus root, within the closed minus root (both = on wall).
class ApartmentWindow {
public:
  ApartmentWindow(const CoxeterGroup& g, int residue_horizon);

  const CoxeterGroup& group() const { return g_; }
  int residue_horizon() const { return horizon_; }
  int wall_horizon() const { return wall_horizon_; }
  const std::vector<SphericalResidue>& residues() const { return residues_; }
  std::optional<int> index_of(const SphericalResidue& r) const;
  const std::vector<Reflection>& walls() const { return walls_; }

  struct Mask {
    std::vector<std::uint64_t> plus, minus;
  };
  const Mask& mask(int index) const { return masks_[index]; }
  /// Classification of an arbitrary residue (not restricted to the window)
  /// against the table's walls.
  Mask classify(const SphericalResidue& r) const;
  Mask mask_or_classify(const SphericalResidue& r) const;

  HalfInt distance(const Mask& a, const Mask& b) const;
  HalfInt distance(const SphericalResidue& a, const SphericalResidue& b) const;

  enum class RSide : unsigned char { plus, minus, on };
  RSide side(const Mask& m, int wall_index) const;

private:
  const CoxeterGroup& g_;
  int horizon_;
  int wall_horizon_;
  std::vector<SphericalResidue> residues_;
  std::map<std::pair<Word, TypeSet>, int> index_;
  std::vector<Reflection> walls_;
  struct WallInfo {
    std::optional<WallCoord> coord;
    long long position = 0;  // scaled wall position when geometric
    bool plus_above = false;
  };
  std::vector<WallInfo> wall_info_;
  std::vector<Mask> masks_;
};

/// Horizon large enough that hulls and intervals of the pair provably fit.
int hull_horizon(const CoxeterGroup& g, const SphericalResidue& r1,
                 const SphericalResidue& r2);

/// Combinatorial projection: the element of star(R) nearest to T in the root
/// metric.  A tie is an internal consistency failure.
SphericalResidue projection(const CoxeterGroup& g, const SphericalResidue& R,
                            const SphericalResidue& T, int horizon);
SphericalResidue projection_in(const ApartmentWindow& win, const SphericalResidue& R,
                               const SphericalResidue& T);
/// Independent route: the chamber-set-minimal element of hull ∩ star(R),
/// checked to dominate every other candidate.
SphericalResidue projection_via_hull(const CoxeterGroup& g, const SphericalResidue& R,
                                     const SphericalResidue& T, int horizon);
SphericalResidue projection_via_hull_in(const ApartmentWindow& win,
                                        const SphericalResidue& R,
                                        const SphericalResidue& T);

std::vector<SphericalResidue> convex_hull(const CoxeterGroup& g,
                                          const SphericalResidue& r1,
                                          const SphericalResidue& r2, int horizon);
std::vector<SphericalResidue> convex_hull_in(const ApartmentWindow& win,
                                             const SphericalResidue& r1,
                                             const SphericalResidue& r2);
std::vector<SphericalResidue> interval(const CoxeterGroup& g, const SphericalResidue& r1,
                                       const SphericalResidue& r2, int horizon);
std::vector<SphericalResidue> interval_in(const ApartmentWindow& win,
                                          const SphericalResidue& r1,
                                          const SphericalResidue& r2);

/// Closed and stable under pairwise projections.
bool is_convex(const CoxeterGroup& g, const std::vector<SphericalResidue>& set,
               int horizon);

std::string residue_str(const SphericalResidue& r);

}  // namespace bordify
