#pragma once

#include <map>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "bordify/coxeter.hpp"
#include "bordify/half_integer.hpp"
#include "bordify/residues.hpp"

namespace bordify {

/// A building presented as a chamber system: chambers with typed adjacency
/// and a Weyl distance.  Infinite backends are generated out to a window
/// radius; operations that would leave the window raise window_escape.
///
/// Backends and their stable chamber names:
///   thin     group elements; names are dot-joined words ("e", "0.1").
///   tree     edges of a biregular tree; vertices of color 0 are "a<i>",
///            color 1 are "b<j>" in generation order, edges "a<i>-b<j>".
///            The color-s endpoint is the s-panel.
///   fano     point-line flags "p<i>-l<j>" of the 7-point projective plane,
///            lines l<j> = {j, j+1, j+3} mod 7; panels of type 0 share the
///            point, type 1 the line.
///   product  pairs "<left>*<right>" with the right factor's generators
///            shifted past the left's.
class ChamberSystem {
public:
  enum class Kind { thin, tree, fano, product };

  static std::shared_ptr<const ChamberSystem> make_thin(CoxeterMatrix m,
                                                        int window_radius);
  static std::shared_ptr<const ChamberSystem> make_tree(std::vector<int> valences,
                                                        int window_radius);
  static std::shared_ptr<const ChamberSystem> make_fano();
  static std::shared_ptr<const ChamberSystem> make_product(
      std::shared_ptr<const ChamberSystem> a, std::shared_ptr<const ChamberSystem> b);

  Kind kind() const { return kind_; }
  const CoxeterGroup& weyl() const { return *weyl_; }
  /// -1 when the backend is a complete building.
  int window_radius() const { return radius_; }
  bool is_complete() const { return radius_ < 0; }
  int chamber_count() const { return static_cast<int>(names_.size()); }
  const std::string& chamber_name(int c) const { return names_[c]; }
  int chamber_id(const std::string& name) const;
  int base_chamber() const { return 0; }

  /// All chambers of the s-panel through c (including c), ascending ids.
  const std::vector<int>& panel(int c, Gen s) const { return panels_[c][s]; }
  /// False when the window clips this panel.
  bool panel_complete(int c, Gen s) const { return complete_[c][s] != 0; }

  Word delta(int c, int d) const;
  int gallery_dist(int c, int d) const { return static_cast<int>(delta(c, d).size()); }

  /// Isometric embedding of (part of) the thin system of the Weyl group.
  struct Chart {
    int base = 0;  // image of the identity
    std::map<Word, int> to_chamber;
    std::map<int, Word> to_word;
  };
  /// Deterministic chart containing both chambers (canonical tie-breaking
  /// per backend); window_escape when the window cannot complete one.
  Chart find_apartment(int c, int d) const;
  /// Every canonical chart through c.  Exhaustive for fano (all hexagons);
  /// the single canonical chart for the other backends.
  std::vector<Chart> apartments_through(int c) const;
  /// The chamber fixed-chart retraction centered at a charted chamber.
  int retract(const Chart& chart, int center, int c) const;

  /// Residue of the building: the J-connected component of a chamber,
  /// canonicalized by its smallest member id.
  struct BResidue {
    int chamber = 0;
    TypeSet type;
    friend bool operator==(const BResidue&, const BResidue&) = default;
  };
  BResidue residue_of(int c, TypeSet J) const;
  /// Ascending member ids; window_escape when the window clips the residue.
  std::vector<int> residue_chambers(const BResidue& r) const;
  /// All residues whose chamber set is complete in the window.
  std::vector<BResidue> residues() const;

  /// Classical gate: the unique chamber of R nearest to c.
  int project_chamber(int c, const BResidue& R) const;
  /// Gate residue: smallest residue of St(R) containing every chamber gate
  /// of T; equals the root-distance minimizer over St(R).
  BResidue project_residue(const BResidue& R, const BResidue& T) const;

  /// The residue's simplex read in a chart that shows one of its members.
  SphericalResidue chart_residue(const Chart& chart, const BResidue& r) const;
  /// Image of a residue under the chamber retraction, as a thin residue.
  SphericalResidue retract_residue(const Chart& chart, int center,
                                   const BResidue& r) const;
  /// Root-distance computed in a containing apartment (choice-independent).
  HalfInt residue_distance(const BResidue& a, const BResidue& b, int horizon) const;

  // Tree backend structure, needed for ends and medians.
  const std::vector<int>& tree_valences() const;
  std::pair<int, int> edge_endpoints(int c) const;  // (color-0, color-1) vertex
  int vertex_count() const;
  int vertex_color(int v) const;
  int vertex_depth(int v) const;
  int vertex_parent(int v) const;  // -1 at the base edge's color-0 endpoint
  const std::string& vertex_name(int v) const;
  int vertex_by_name(const std::string& name) const;
  const std::vector<int>& vertex_edges(int v) const;

  // Product backend structure.
  const ChamberSystem& left_factor() const;
  const ChamberSystem& right_factor() const;
  std::pair<int, int> split_chamber(int c) const;
  int join_chamber(int ca, int cb) const;
  /// Splits a merged Weyl word into factor words.
  std::pair<Word, Word> split_word(const Word& w) const;
  Word join_word(const Word& wa, const Word& wb) const;

private:
  ChamberSystem() = default;
  void index_names();
  void check_tree() const;
  void check_product() const;
  Word tree_delta(int c, int d) const;

  Kind kind_ = Kind::thin;
  std::shared_ptr<const CoxeterGroup> weyl_;
  int radius_ = -1;
  std::vector<std::string> names_;
  std::map<std::string, int> by_name_;
  std::vector<std::vector<std::vector<int>>> panels_;
  std::vector<std::vector<char>> complete_;

  // thin
  std::vector<Word> words_;
  std::map<Word, int> word_id_;

  // tree
  struct Vert {
    int color = 0, depth = 0, parent = -1;
    std::string name;
    std::vector<int> edges;
  };
  std::vector<Vert> verts_;
  std::map<std::string, int> vert_by_name_;
  std::vector<std::pair<int, int>> edge_ends_;
  std::vector<int> valences_;

  // fano
  std::vector<std::pair<int, int>> flags_;
  std::vector<std::vector<Word>> delta_table_;

  // product
  std::shared_ptr<const ChamberSystem> fa_, fb_;
};

bool bresidue_less(const ChamberSystem::BResidue& a, const ChamberSystem::BResidue& b);

}  // namespace bordify
