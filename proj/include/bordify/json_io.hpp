#pragma once

#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"

#include "bordify/boundary.hpp"
#include "bordify/chamber_system.hpp"
#include "bordify/coxeter.hpp"
#include "bordify/cube.hpp"
#include "bordify/half_integer.hpp"
#include "bordify/residues.hpp"

namespace bordify {

/// All documents use insertion-ordered keys, so identical values serialize to
/// identical bytes.  Parsers throw usage_error on malformed documents; the
/// numeric encodings are exact (half-integers as {"num","den"}, never floats).
using json = nlohmann::ordered_json;

/// Fixed rendering: two-space indent, trailing newline.
std::string json_text(const json& j);

json half_int_json(HalfInt h);
HalfInt half_int_from_json(const json& j);

// --- Coxeter layer ----------------------------------------------------------

/// {"rank": n, "matrix": [[...]]} with 0 encoding an infinite order.
json matrix_json(const CoxeterMatrix& m);
CoxeterMatrix matrix_from_json(const json& j);

json word_json(const Word& w);
Word word_from_json(const json& j);

/// {"reflection": [...], "sign": "plus"|"minus"}
json root_json(const Root& r);
Root root_from_json(const CoxeterGroup& g, const json& j);

/// {"rep": [...], "type": [...]}
json residue_json(const SphericalResidue& r);
SphericalResidue residue_from_json(const CoxeterGroup& g, const json& j);

/// {"base": ..., "roots": [...], "members": [...]}
json sector_json(const Sector& s);

/// {"variant": "interior"|"affine"|"sequence", ...}.  Affine points accept
/// either {"position","velocity","den"} or the two-chamber {"base","toward"}
/// form; they always serialize to the position form.
json boundary_point_json(const BoundaryPoint& p);
BoundaryPoint boundary_point_from_json(const CoxeterGroup& g, const json& j);

// --- building layer ---------------------------------------------------------

/// {"kind": "thin"|"tree"|"fano"|"product", ...}; windowed backends carry
/// "window_radius".
json building_spec_json(const ChamberSystem& sys);
std::shared_ptr<const ChamberSystem> building_from_json(const json& j);

/// {"chamber": "<name>", "type": [...]}; chambers are named, not numbered,
/// so documents survive re-generation.
json bresidue_json(const ChamberSystem& sys, const ChamberSystem::BResidue& r);
ChamberSystem::BResidue bresidue_from_json(const ChamberSystem& sys, const json& j);

/// {"variant": "interior"|"tree_end"|"product"|"sequence", ...}
json building_point_json(const BuildingPoint& p);
BuildingPoint building_point_from_json(const ChamberSystem& sys, const json& j);

// --- cube layer -------------------------------------------------------------

/// {"kind": "grid"|"tree"|"cube"|"points", ...}
json cube_spec_json(const MedianGraph& g);
MedianGraph cube_from_json(const json& j);

/// {"variant": "principal"|"directional"|"explicit", ...}
json ultrafilter_json(const MedianGraph& g, const Ultrafilter& uf);
Ultrafilter ultrafilter_from_json(const MedianGraph& g, const json& j);

// --- DOT rendering ----------------------------------------------------------

/// Undirected graph document: one line per node and per edge, nodes labeled,
/// members of `flagged` drawn filled.  Deterministic byte-for-byte; an empty
/// node set gives an empty graph document.
std::string dot_graph(const std::vector<std::string>& labels,
                      const std::vector<std::pair<int, int>>& edges,
                      const std::vector<int>& flagged);

/// Chamber ball of the thin system, edges between gallery-adjacent chambers,
/// flagged residues filling each chamber of their coset.
std::string dot_apartment(const CoxeterGroup& g, int radius,
                          const std::vector<SphericalResidue>& flagged);

/// Chamber graph of a building window with panel adjacency.
std::string dot_building(const ChamberSystem& sys,
                         const std::vector<ChamberSystem::BResidue>& flagged);

/// One-wall adjacency graph of a median structure.
std::string dot_cube(const MedianGraph& g, const std::vector<int>& flagged);

}  // namespace bordify
