#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "bordify/errors.hpp"

namespace bordify {

using Gen = int;
/// A word in the generators.  Wherever a Word names a group element it is the
/// ShortLex-minimal reduced word, so Words compare and hash as elements.
using Word = std::vector<Gen>;
using TypeSet = std::vector<Gen>;  // sorted subset of generators

struct CoxeterMatrix {
  int rank = 0;
  std::vector<std::vector<int>> m;  // m[i][j]; 0 encodes an infinite order

  int order(Gen a, Gen b) const { return m[a][b]; }
  void validate() const;
};

CoxeterMatrix coxeter_a2();
CoxeterMatrix coxeter_b2();
CoxeterMatrix coxeter_i2(int m);
CoxeterMatrix coxeter_affine_a2();
CoxeterMatrix coxeter_dihedral_inf();
CoxeterMatrix coxeter_product(const CoxeterMatrix& a, const CoxeterMatrix& b);

enum class Sign { plus, minus };
inline Sign flip(Sign s) { return s == Sign::plus ? Sign::minus : Sign::plus; }

/// Reflection w s w^-1 together with the ShortLex-first shortest witness w.
struct Reflection {
  Word element;
  Word witness;
};

/// Half-apartment: a reflection plus a side.  The plus side is the one
/// containing the identity chamber.
struct Root {
  Word reflection;
  Sign sign = Sign::plus;
};

enum class Side { inside, outside };

/// Wall position for components with an exact alcove realization: the wall is
/// the level set {family functional = level}.
struct WallCoord {
  int family = 0;
  long long level = 0;
};

/// A Coxeter system with a solved word problem.  Reduction uses exhaustive
/// braid/nil rewriting with ShortLex tie-breaking and a memo table; components
/// of affine type A2 or infinite dihedral type carry an exact integer alcove
/// model that shortcuts the rewriting, and words split across commuting
/// components before reduction.
///
/// All caches are guarded by an internal mutex, so concurrent use from several
/// threads is safe; cached results are idempotent.
class CoxeterGroup {
public:
  explicit CoxeterGroup(CoxeterMatrix m);
  ~CoxeterGroup();
  CoxeterGroup(const CoxeterGroup&) = delete;
  CoxeterGroup& operator=(const CoxeterGroup&) = delete;

  const CoxeterMatrix& matrix() const { return mat_; }
  int rank() const { return mat_.rank; }
  int order(Gen a, Gen b) const { return mat_.m[a][b]; }

  Word reduce(const Word& w) const;
  Word product(const Word& a, const Word& b) const;
  Word product(const Word& a, const Word& b, const Word& c) const;
  Word inverse_of(const Word& w) const;
  /// Canonical form of g s g^-1.
  Word reflection_through(const Word& g, Gen s) const;
  bool right_descends(const Word& w, Gen s) const;
  bool left_descends(Gen s, const Word& w) const;

  /// All elements of length <= radius, ordered by length then lexicographically.
  std::vector<Word> ball(int radius) const;
  /// All reflections w s w^-1 with l(w) <= radius, each with its first witness,
  /// ordered by element word.
  std::vector<Reflection> reflections_in_ball(int radius) const;

  Side side_of(const Root& r, const Word& chamber) const;

  /// Subsets J whose standard parabolic W_J is finite, decided by the finite
  /// type classification of the induced diagram.
  std::vector<TypeSet> spherical_types() const;
  bool is_spherical(const TypeSet& J) const;
  /// Elements of a finite standard parabolic, ordered by length then lex.
  std::vector<Word> parabolic(const TypeSet& J) const;
  Word longest_in(const TypeSet& J) const;
  /// Reflections lying in W_J (J spherical).
  std::vector<Word> parabolic_reflections(const TypeSet& J) const;
  int max_spherical_length() const;

  /// Minimal-length representative of w W_J.
  Word min_coset_rep(Word w, const TypeSet& J) const;

  // Alcove geometry, present when every component has an exact model.
  bool has_geometry() const;
  int family_count() const;
  long long family_scale(int family) const;
  /// Coordinates of the chamber's sample point, scaled so walls of family f
  /// sit at multiples of family_scale(f).
  std::vector<long long> chamber_coords(const Word& chamber) const;
  /// Chamber whose closed alcove contains the point family_values/den, given
  /// in chamber_coords units; a point on a wall resolves to the chamber just
  /// above that wall in every family.
  Word chamber_at(const std::vector<long long>& family_values, long long den) const;
  std::optional<WallCoord> wall_coord(const Word& reflection) const;
  /// Side of the wall containing the identity chamber: true if the identity
  /// sample point lies above level*scale.
  bool identity_above(const WallCoord& wc) const;

private:
  struct Impl;
  CoxeterMatrix mat_;
  std::unique_ptr<Impl> impl_;
};

std::string word_str(const Word& w);

}  // namespace bordify
