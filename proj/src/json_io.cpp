#include "bordify/json_io.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <sstream>

namespace bordify {

namespace {

const json& need(const json& j, const char* key) {
  if (!j.is_object() || !j.contains(key))
    throw usage_error(std::string("missing key \"") + key + '"');
  return j.at(key);
}

long long need_int(const json& j, const char* key) {
  const json& v = need(j, key);
  if (!v.is_number_integer())
    throw usage_error(std::string("\"") + key + "\" must be an integer");
  return v.get<long long>();
}

std::string need_str(const json& j, const char* key) {
  const json& v = need(j, key);
  if (!v.is_string()) throw usage_error(std::string("\"") + key + "\" must be a string");
  return v.get<std::string>();
}

const json& need_list(const json& j, const char* key) {
  const json& v = need(j, key);
  if (!v.is_array()) throw usage_error(std::string("\"") + key + "\" must be an array");
  return v;
}

std::vector<long long> int_list(const json& v, const char* what) {
  if (!v.is_array()) throw usage_error(std::string(what) + " must be an array");
  std::vector<long long> out;
  for (const auto& e : v) {
    if (!e.is_number_integer())
      throw usage_error(std::string(what) + " must hold integers");
    out.push_back(e.get<long long>());
  }
  return out;
}

std::vector<int> gen_list(const json& v, const char* what) {
  std::vector<int> out;
  for (long long x : int_list(v, what)) out.push_back(static_cast<int>(x));
  return out;
}

std::string quoted(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  out += '"';
  return out;
}

}  // namespace

std::string json_text(const json& j) { return j.dump(2) + "\n"; }

json half_int_json(HalfInt h) {
  json j;
  if (h.is_integral()) {
    j["num"] = h.twice() / 2;
    j["den"] = 1;
  } else {
    j["num"] = h.twice();
    j["den"] = 2;
  }
  return j;
}

HalfInt half_int_from_json(const json& j) {
  long long num = need_int(j, "num"), den = need_int(j, "den");
  if (den == 1) return HalfInt::whole(num);
  if (den == 2) return HalfInt::from_twice(num);
  throw usage_error("half-integer denominator must be 1 or 2");
}

// --- Coxeter layer ----------------------------------------------------------

json matrix_json(const CoxeterMatrix& m) {
  json j;
  j["rank"] = m.rank;
  j["matrix"] = m.m;
  return j;
}

CoxeterMatrix matrix_from_json(const json& j) {
  CoxeterMatrix m;
  m.rank = static_cast<int>(need_int(j, "rank"));
  for (const auto& row : need_list(j, "matrix")) m.m.push_back(gen_list(row, "matrix row"));
  m.validate();
  return m;
}

json word_json(const Word& w) { return json(w); }

Word word_from_json(const json& j) { return gen_list(j, "word"); }

json root_json(const Root& r) {
  json j;
  j["reflection"] = word_json(r.reflection);
  j["sign"] = r.sign == Sign::plus ? "plus" : "minus";
  return j;
}

Root root_from_json(const CoxeterGroup& g, const json& j) {
  Word w = g.reduce(word_from_json(need(j, "reflection")));
  if (w.empty() || g.inverse_of(w) != w)
    throw usage_error("root reflection must be a nontrivial involution");
  std::string sign = need_str(j, "sign");
  if (sign != "plus" && sign != "minus") throw usage_error("sign must be plus or minus");
  return Root{std::move(w), sign == "plus" ? Sign::plus : Sign::minus};
}

json residue_json(const SphericalResidue& r) {
  json j;
  j["rep"] = word_json(r.rep);
  j["type"] = json(r.type);
  return j;
}

SphericalResidue residue_from_json(const CoxeterGroup& g, const json& j) {
  return make_residue(g, word_from_json(need(j, "rep")), gen_list(need(j, "type"), "type"));
}

json sector_json(const Sector& s) {
  json j;
  j["base"] = residue_json(s.base);
  j["roots"] = json::array();
  for (const auto& r : s.roots) j["roots"].push_back(root_json(r));
  j["members"] = json::array();
  for (const auto& m : s.members) j["members"].push_back(residue_json(m));
  return j;
}

json boundary_point_json(const BoundaryPoint& p) {
  json j;
  switch (p.kind()) {
    case BoundaryPoint::Kind::interior:
      j["variant"] = "interior";
      j["residue"] = residue_json(p.residue());
      return j;
    case BoundaryPoint::Kind::affine:
      j["variant"] = "affine";
      j["position"] = json(p.position());
      j["velocity"] = json(p.velocity());
      j["den"] = p.denominator();
      return j;
    case BoundaryPoint::Kind::sequence: {
      j["variant"] = "sequence";
      j["members"] = json::array();
      for (const auto& r : p.sequence_data()) j["members"].push_back(residue_json(r));
      j["confirm"] = p.confirmation();
      return j;
    }
  }
  throw internal_error("unhandled boundary point kind");
}

BoundaryPoint boundary_point_from_json(const CoxeterGroup& g, const json& j) {
  std::string variant = need_str(j, "variant");
  if (variant == "interior")
    return BoundaryPoint::interior(g, residue_from_json(g, need(j, "residue")));
  if (variant == "affine") {
    if (j.contains("position"))
      return BoundaryPoint::affine_direction(
          g, int_list(need(j, "position"), "position"),
          int_list(need(j, "velocity"), "velocity"),
          j.contains("den") ? need_int(j, "den") : 1);
    return BoundaryPoint::affine_ray(g, word_from_json(need(j, "base")),
                                     word_from_json(need(j, "toward")));
  }
  if (variant == "sequence") {
    std::vector<SphericalResidue> seq;
    for (const auto& e : need_list(j, "members")) seq.push_back(residue_from_json(g, e));
    return BoundaryPoint::sequence(g, std::move(seq),
                                   static_cast<int>(need_int(j, "confirm")));
  }
  throw usage_error("unknown boundary point variant " + variant);
}

// --- building layer ---------------------------------------------------------

json building_spec_json(const ChamberSystem& sys) {
  json j;
  switch (sys.kind()) {
    case ChamberSystem::Kind::thin:
      j["kind"] = "thin";
      j["rank"] = sys.weyl().rank();
      j["matrix"] = sys.weyl().matrix().m;
      j["window_radius"] = sys.window_radius();
      return j;
    case ChamberSystem::Kind::tree:
      j["kind"] = "tree";
      j["valences"] = json(sys.tree_valences());
      j["window_radius"] = sys.window_radius();
      return j;
    case ChamberSystem::Kind::fano: j["kind"] = "fano"; return j;
    case ChamberSystem::Kind::product:
      j["kind"] = "product";
      j["left"] = building_spec_json(sys.left_factor());
      j["right"] = building_spec_json(sys.right_factor());
      return j;
  }
  throw internal_error("unhandled chamber system kind");
}

std::shared_ptr<const ChamberSystem> building_from_json(const json& j) {
  std::string kind = need_str(j, "kind");
  if (kind == "thin")
    return ChamberSystem::make_thin(matrix_from_json(j),
                                    static_cast<int>(need_int(j, "window_radius")));
  if (kind == "tree")
    return ChamberSystem::make_tree(gen_list(need(j, "valences"), "valences"),
                                    static_cast<int>(need_int(j, "window_radius")));
  if (kind == "fano") return ChamberSystem::make_fano();
  if (kind == "product")
    return ChamberSystem::make_product(building_from_json(need(j, "left")),
                                       building_from_json(need(j, "right")));
  throw usage_error("unknown building kind " + kind);
}

json bresidue_json(const ChamberSystem& sys, const ChamberSystem::BResidue& r) {
  json j;
  j["chamber"] = sys.chamber_name(r.chamber);
  j["type"] = json(r.type);
  return j;
}

ChamberSystem::BResidue bresidue_from_json(const ChamberSystem& sys, const json& j) {
  return sys.residue_of(sys.chamber_id(need_str(j, "chamber")),
                        gen_list(need(j, "type"), "type"));
}

json building_point_json(const BuildingPoint& p) {
  const ChamberSystem& sys = p.system();
  json j;
  switch (p.kind()) {
    case BuildingPoint::Kind::interior:
      j["variant"] = "interior";
      j["residue"] = bresidue_json(sys, p.residue());
      return j;
    case BuildingPoint::Kind::tree_end:
      j["variant"] = "tree_end";
      j["vertex"] = sys.vertex_name(p.end_vertex());
      return j;
    case BuildingPoint::Kind::product: {
      auto [left, right] = p.factors();
      j["variant"] = "product";
      j["left"] = building_point_json(left);
      j["right"] = building_point_json(right);
      return j;
    }
    case BuildingPoint::Kind::sequence: {
      j["variant"] = "sequence";
      j["members"] = json::array();
      for (const auto& r : p.sequence_data()) j["members"].push_back(bresidue_json(sys, r));
      j["confirm"] = p.confirmation();
      return j;
    }
  }
  throw internal_error("unhandled building point kind");
}

BuildingPoint building_point_from_json(const ChamberSystem& sys, const json& j) {
  std::string variant = need_str(j, "variant");
  if (variant == "interior")
    return BuildingPoint::interior(sys, bresidue_from_json(sys, need(j, "residue")));
  if (variant == "tree_end")
    return BuildingPoint::tree_end(sys, sys.vertex_by_name(need_str(j, "vertex")));
  if (variant == "product")
    return BuildingPoint::product(
        sys, building_point_from_json(sys.left_factor(), need(j, "left")),
        building_point_from_json(sys.right_factor(), need(j, "right")));
  if (variant == "sequence") {
    std::vector<ChamberSystem::BResidue> seq;
    for (const auto& e : need_list(j, "members")) seq.push_back(bresidue_from_json(sys, e));
    return BuildingPoint::sequence(sys, std::move(seq),
                                   static_cast<int>(need_int(j, "confirm")));
  }
  throw usage_error("unknown building point variant " + variant);
}

// --- cube layer -------------------------------------------------------------

json cube_spec_json(const MedianGraph& g) {
  json j;
  switch (g.kind()) {
    case MedianGraph::Kind::grid: {
      j["kind"] = "grid";
      j["ranges"] = json::array();
      for (int a = 0; a < g.axes(); ++a) {
        auto [lo, hi] = g.axis_range(a);
        j["ranges"].push_back(json::array({lo, hi}));
      }
      return j;
    }
    case MedianGraph::Kind::tree: {
      j["kind"] = "tree";
      j["edges"] = json::array();
      for (int w = 0; w < g.wall_count(); ++w) {
        auto [u, v] = g.wall_edge(w);
        j["edges"].push_back(json::array({u, v}));
      }
      return j;
    }
    case MedianGraph::Kind::cube:
      j["kind"] = "cube";
      j["dimension"] = g.wall_count();
      return j;
    case MedianGraph::Kind::points: {
      // Vertex names keep the original coordinates, including the merged and
      // constant ones, so the closure reconstructs exactly.
      j["kind"] = "points";
      j["coordinates"] = g.vertex_name(0).size();
      j["points"] = json::array();
      for (int v = 0; v < g.vertex_count(); ++v) {
        json row = json::array();
        for (char c : g.vertex_name(v)) row.push_back(c == '1' ? 1 : 0);
        j["points"].push_back(std::move(row));
      }
      return j;
    }
  }
  throw internal_error("unhandled cube backend kind");
}

MedianGraph cube_from_json(const json& j) {
  std::string kind = need_str(j, "kind");
  if (kind == "grid") {
    std::vector<std::pair<long long, long long>> ranges;
    for (const auto& r : need_list(j, "ranges")) {
      auto pair = int_list(r, "range");
      if (pair.size() != 2) throw usage_error("range must be [lo, hi]");
      ranges.emplace_back(pair[0], pair[1]);
    }
    return MedianGraph::grid(std::move(ranges));
  }
  if (kind == "tree") {
    std::vector<std::pair<int, int>> edges;
    for (const auto& e : need_list(j, "edges")) {
      auto pair = gen_list(e, "edge");
      if (pair.size() != 2) throw usage_error("edge must be [u, v]");
      edges.emplace_back(pair[0], pair[1]);
    }
    return MedianGraph::tree_graph(edges);
  }
  if (kind == "cube") return MedianGraph::cube(static_cast<int>(need_int(j, "dimension")));
  if (kind == "points") {
    std::vector<std::vector<int>> pts;
    for (const auto& p : need_list(j, "points")) pts.push_back(gen_list(p, "point"));
    return MedianGraph::closure(static_cast<int>(need_int(j, "coordinates")), pts);
  }
  throw usage_error("unknown cube backend kind " + kind);
}

json ultrafilter_json(const MedianGraph& g, const Ultrafilter& uf) {
  json j;
  switch (uf.kind()) {
    case Ultrafilter::Kind::principal:
      j["variant"] = "principal";
      j["vertex"] = g.vertex_name(uf.base_vertex());
      return j;
    case Ultrafilter::Kind::directional: {
      j["variant"] = "directional";
      j["limits"] = json::array();
      for (const auto& l : uf.limits()) {
        json lim;
        switch (l.tag) {
          case AxisLimit::Tag::plus_infinity: lim["tag"] = "plus_infinity"; break;
          case AxisLimit::Tag::minus_infinity: lim["tag"] = "minus_infinity"; break;
          case AxisLimit::Tag::at:
            lim["tag"] = "at";
            lim["value"] = l.value;
            break;
        }
        j["limits"].push_back(std::move(lim));
      }
      return j;
    }
    case Ultrafilter::Kind::explicit_orientation: {
      j["variant"] = "explicit";
      j["sides"] = json::array();
      for (int w = 0; w < g.wall_count(); ++w) {
        auto s = uf.side(w);
        j["sides"].push_back(s ? json(*s) : json(nullptr));
      }
      return j;
    }
  }
  throw internal_error("unhandled ultrafilter kind");
}

Ultrafilter ultrafilter_from_json(const MedianGraph& g, const json& j) {
  std::string variant = need_str(j, "variant");
  if (variant == "principal")
    return Ultrafilter::principal(g, g.vertex_by_name(need_str(j, "vertex")));
  if (variant == "directional") {
    std::vector<AxisLimit> limits;
    for (const auto& l : need_list(j, "limits")) {
      std::string tag = need_str(l, "tag");
      if (tag == "plus_infinity") limits.push_back(AxisLimit::plus_infinity());
      else if (tag == "minus_infinity") limits.push_back(AxisLimit::minus_infinity());
      else if (tag == "at") limits.push_back(AxisLimit::at_value(need_int(l, "value")));
      else throw usage_error("unknown axis limit tag " + tag);
    }
    return Ultrafilter::directional(g, std::move(limits));
  }
  if (variant == "explicit") {
    std::vector<std::optional<bool>> sides;
    for (const auto& s : need_list(j, "sides")) {
      if (s.is_null()) sides.push_back(std::nullopt);
      else if (s.is_boolean()) sides.push_back(s.get<bool>());
      else throw usage_error("sides must hold booleans or null");
    }
    return Ultrafilter::explicit_orientation(g, std::move(sides));
  }
  throw usage_error("unknown ultrafilter variant " + variant);
}

// --- DOT rendering ----------------------------------------------------------

std::string dot_graph(const std::vector<std::string>& labels,
                      const std::vector<std::pair<int, int>>& edges,
                      const std::vector<int>& flagged) {
  int n = static_cast<int>(labels.size());
  std::set<int> marked;
  for (int f : flagged) {
    if (f < 0 || f >= n) throw usage_error("flagged node out of range");
    marked.insert(f);
  }
  std::ostringstream out;
  out << "graph window {\n";
  if (n > 0) out << "  node [shape=box];\n";
  for (int i = 0; i < n; ++i) {
    out << "  n" << i << " [label=" << quoted(labels[i]);
    if (marked.count(i)) out << ", style=filled, fillcolor=lightblue";
    out << "];\n";
  }
  for (auto [a, b] : edges) {
    if (a < 0 || a >= n || b < 0 || b >= n) throw usage_error("edge endpoint out of range");
    out << "  n" << a << " -- n" << b << ";\n";
  }
  out << "}\n";
  return out.str();
}

std::string dot_apartment(const CoxeterGroup& g, int radius,
                          const std::vector<SphericalResidue>& flagged) {
  auto chambers = g.ball(radius);
  std::map<Word, int> index;
  std::vector<std::string> labels;
  for (const auto& c : chambers) {
    index[c] = static_cast<int>(labels.size());
    labels.push_back(word_str(c));
  }
  std::vector<std::pair<int, int>> edges;
  for (const auto& c : chambers)
    for (Gen s = 0; s < g.rank(); ++s) {
      auto it = index.find(g.product(c, {s}));
      if (it != index.end() && index[c] < it->second) edges.emplace_back(index[c], it->second);
    }
  std::vector<int> marks;
  for (const auto& r : flagged)
    for (const auto& member : residue_members(g, r)) {
      auto it = index.find(member);
      if (it != index.end()) marks.push_back(it->second);
    }
  return dot_graph(labels, edges, marks);
}

std::string dot_building(const ChamberSystem& sys,
                         const std::vector<ChamberSystem::BResidue>& flagged) {
  std::vector<std::string> labels;
  for (int c = 0; c < sys.chamber_count(); ++c) labels.push_back(sys.chamber_name(c));
  std::set<std::pair<int, int>> edge_set;
  for (int c = 0; c < sys.chamber_count(); ++c)
    for (Gen s = 0; s < sys.weyl().rank(); ++s)
      for (int d : sys.panel(c, s))
        if (c < d) edge_set.emplace(c, d);
  std::vector<std::pair<int, int>> edges(edge_set.begin(), edge_set.end());
  std::vector<int> marks;
  for (const auto& r : flagged)
    for (int c : sys.residue_chambers(r)) marks.push_back(c);
  return dot_graph(labels, edges, marks);
}

std::string dot_cube(const MedianGraph& g, const std::vector<int>& flagged) {
  std::vector<std::string> labels;
  for (int v = 0; v < g.vertex_count(); ++v) labels.push_back(g.vertex_name(v));
  std::vector<std::pair<int, int>> edges;
  for (int v = 0; v < g.vertex_count(); ++v) {
    std::vector<char> row(g.wall_count());
    for (int w = 0; w < g.wall_count(); ++w) row[w] = g.side(v, w) ? 1 : 0;
    for (int w = 0; w < g.wall_count(); ++w) {
      row[w] = row[w] ? 0 : 1;
      if (auto u = g.vertex_with_sides(row); u && v < *u) edges.emplace_back(v, *u);
      row[w] = row[w] ? 0 : 1;
    }
  }
  std::sort(edges.begin(), edges.end());
  return dot_graph(labels, edges, flagged);
}

}  // namespace bordify
