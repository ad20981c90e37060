#include "bordify/chamber_system.hpp"

#include <algorithm>
#include <deque>
#include <set>

namespace bordify {

namespace {

constexpr int fano_lines[7][3] = {{0, 1, 3}, {1, 2, 4}, {2, 3, 5}, {3, 4, 6},
                                  {4, 5, 0}, {5, 6, 1}, {6, 0, 2}};

bool on_line(int p, int l) {
  return p == fano_lines[l][0] || p == fano_lines[l][1] || p == fano_lines[l][2];
}

int line_through(int p, int q) {
  for (int l = 0; l < 7; ++l)
    if (on_line(p, l) && on_line(q, l)) return l;
  throw internal_error("projective plane lost a joining line");
}

/// Flag sets of all thin sub-hexagons: one per non-collinear point triple,
/// in lexicographic triple order.
std::vector<std::set<int>> fano_hexagons(const ChamberSystem& sys) {
  std::vector<std::set<int>> out;
  for (int i = 0; i < 7; ++i)
    for (int j = i + 1; j < 7; ++j)
      for (int k = j + 1; k < 7; ++k) {
        int lij = line_through(i, j);
        if (on_line(k, lij)) continue;
        int ljk = line_through(j, k), lik = line_through(i, k);
        std::set<int> hex;
        auto add = [&](int p, int l) {
          hex.insert(sys.chamber_id("p" + std::to_string(p) + "-l" + std::to_string(l)));
        };
        add(i, lij);
        add(j, lij);
        add(j, ljk);
        add(k, ljk);
        add(i, lik);
        add(k, lik);
        internal_check(hex.size() == 6, "hexagon has six flags");
        out.push_back(std::move(hex));
      }
  return out;
}

/// Chart of a hexagon based at one of its flags: panels inside a hexagon
/// have exactly two members, so the walk is forced.
ChamberSystem::Chart hexagon_chart(const ChamberSystem& sys, const std::set<int>& hex,
                                   int base) {
  ChamberSystem::Chart chart;
  chart.base = base;
  chart.to_chamber[Word{}] = base;
  chart.to_word[base] = Word{};
  for (const Word& w : sys.weyl().ball(3)) {
    if (w.empty()) continue;
    Gen s = w.back();
    Word parent = sys.weyl().reduce(Word(w.begin(), w.end() - 1));
    int pc = chart.to_chamber.at(parent);
    int nxt = -1;
    for (int e : sys.panel(pc, s))
      if (e != pc && hex.count(e)) nxt = e;
    internal_check(nxt >= 0, "hexagon panel has an opposite member");
    chart.to_chamber[w] = nxt;
    chart.to_word[nxt] = w;
  }
  return chart;
}

}  // namespace

bool bresidue_less(const ChamberSystem::BResidue& a, const ChamberSystem::BResidue& b) {
  if (a.type.size() != b.type.size()) return a.type.size() < b.type.size();
  if (a.type != b.type) return a.type < b.type;
  return a.chamber < b.chamber;
}

void ChamberSystem::index_names() {
  for (std::size_t i = 0; i < names_.size(); ++i)
    by_name_[names_[i]] = static_cast<int>(i);
}

int ChamberSystem::chamber_id(const std::string& name) const {
  auto it = by_name_.find(name);
  if (it == by_name_.end()) throw usage_error("unknown chamber: " + name);
  return it->second;
}

std::shared_ptr<const ChamberSystem> ChamberSystem::make_thin(CoxeterMatrix m,
                                                              int window_radius) {
  if (window_radius < 0) throw usage_error("window radius must be nonnegative");
  auto sys = std::shared_ptr<ChamberSystem>(new ChamberSystem());
  sys->kind_ = Kind::thin;
  sys->weyl_ = std::make_shared<const CoxeterGroup>(m);
  const CoxeterGroup& g = *sys->weyl_;
  sys->words_ = g.ball(window_radius);
  bool saturated = g.ball(window_radius + 1).size() == sys->words_.size();
  sys->radius_ = saturated ? -1 : window_radius;
  for (std::size_t i = 0; i < sys->words_.size(); ++i) {
    sys->word_id_[sys->words_[i]] = static_cast<int>(i);
    sys->names_.push_back(word_str(sys->words_[i]));
  }
  sys->index_names();
  const int n = static_cast<int>(sys->words_.size());
  sys->panels_.assign(n, std::vector<std::vector<int>>(m.rank));
  sys->complete_.assign(n, std::vector<char>(m.rank, 0));
  for (int c = 0; c < n; ++c)
    for (Gen s = 0; s < m.rank; ++s) {
      Word nb = g.product(sys->words_[c], Word{s});
      auto it = sys->word_id_.find(nb);
      std::vector<int> panel{c};
      if (it != sys->word_id_.end()) {
        panel.push_back(it->second);
        sys->complete_[c][s] = 1;
      }
      std::sort(panel.begin(), panel.end());
      sys->panels_[c][s] = std::move(panel);
    }
  return sys;
}

std::shared_ptr<const ChamberSystem> ChamberSystem::make_tree(std::vector<int> valences,
                                                              int window_radius) {
  if (valences.size() != 2) throw usage_error("tree backend takes two valences");
  if (valences[0] < 2 || valences[1] < 2) throw usage_error("tree valences must be >= 2");
  if (window_radius < 0) throw usage_error("window radius must be nonnegative");
  auto sys = std::shared_ptr<ChamberSystem>(new ChamberSystem());
  sys->kind_ = Kind::tree;
  sys->weyl_ = std::make_shared<const CoxeterGroup>(coxeter_dihedral_inf());
  sys->valences_ = valences;
  sys->radius_ = window_radius;

  int color_count[2] = {0, 0};
  auto new_vertex = [&](int color, int parent, int depth) {
    Vert v;
    v.color = color;
    v.parent = parent;
    v.depth = depth;
    v.name = (color == 0 ? "a" : "b") + std::to_string(color_count[color]++);
    sys->verts_.push_back(std::move(v));
    return static_cast<int>(sys->verts_.size() - 1);
  };
  auto new_edge = [&](int v0, int v1) {
    int id = static_cast<int>(sys->edge_ends_.size());
    sys->edge_ends_.emplace_back(v0, v1);
    sys->verts_[v0].edges.push_back(id);
    sys->verts_[v1].edges.push_back(id);
    sys->names_.push_back(sys->verts_[v0].name + "-" + sys->verts_[v1].name);
    return id;
  };

  int a0 = new_vertex(0, -1, 0);
  int b0 = new_vertex(1, a0, 1);
  std::vector<int> edge_depth{0};
  new_edge(a0, b0);
  std::deque<int> queue{0};
  while (!queue.empty()) {
    int e = queue.front();
    queue.pop_front();
    if (edge_depth[e] + 1 > window_radius) continue;
    int ends[2] = {sys->edge_ends_[e].first, sys->edge_ends_[e].second};
    for (int side = 0; side < 2; ++side) {
      int v = ends[side];
      int color = sys->verts_[v].color;
      while (static_cast<int>(sys->verts_[v].edges.size()) < valences[color]) {
        int w = new_vertex(1 - color, v, sys->verts_[v].depth + 1);
        int ne = color == 0 ? new_edge(v, w) : new_edge(w, v);
        edge_depth.push_back(edge_depth[e] + 1);
        queue.push_back(ne);
      }
    }
  }

  sys->index_names();
  for (std::size_t i = 0; i < sys->verts_.size(); ++i)
    sys->vert_by_name_[sys->verts_[i].name] = static_cast<int>(i);
  const int n = static_cast<int>(sys->names_.size());
  sys->panels_.assign(n, std::vector<std::vector<int>>(2));
  sys->complete_.assign(n, std::vector<char>(2, 0));
  for (int c = 0; c < n; ++c) {
    int ends[2] = {sys->edge_ends_[c].first, sys->edge_ends_[c].second};
    for (Gen s = 0; s < 2; ++s) {
      auto panel = sys->verts_[ends[s]].edges;
      std::sort(panel.begin(), panel.end());
      sys->complete_[c][s] =
          static_cast<int>(panel.size()) == valences[s] ? 1 : 0;
      sys->panels_[c][s] = std::move(panel);
    }
  }
  return sys;
}

std::shared_ptr<const ChamberSystem> ChamberSystem::make_fano() {
  auto sys = std::shared_ptr<ChamberSystem>(new ChamberSystem());
  sys->kind_ = Kind::fano;
  sys->weyl_ = std::make_shared<const CoxeterGroup>(coxeter_a2());
  sys->radius_ = -1;
  for (int p = 0; p < 7; ++p)
    for (int l = 0; l < 7; ++l)
      if (on_line(p, l)) {
        sys->flags_.emplace_back(p, l);
        sys->names_.push_back("p" + std::to_string(p) + "-l" + std::to_string(l));
      }
  sys->index_names();
  const int n = static_cast<int>(sys->flags_.size());
  internal_check(n == 21, "flag count of the 7-point plane");
  sys->panels_.assign(n, std::vector<std::vector<int>>(2));
  sys->complete_.assign(n, std::vector<char>(2, 1));
  for (int c = 0; c < n; ++c)
    for (int d = 0; d < n; ++d) {
      if (sys->flags_[c].first == sys->flags_[d].first) sys->panels_[c][0].push_back(d);
      if (sys->flags_[c].second == sys->flags_[d].second) sys->panels_[c][1].push_back(d);
    }

  // Weyl distance by breadth-first propagation; the building axioms make the
  // assignments forced, so clashes are internal failures.
  const CoxeterGroup& g = *sys->weyl_;
  sys->delta_table_.assign(n, std::vector<Word>(n));
  for (int c = 0; c < n; ++c) {
    std::vector<int> dist(n, -1);
    dist[c] = 0;
    std::deque<int> queue{c};
    while (!queue.empty()) {
      int u = queue.front();
      queue.pop_front();
      for (Gen s = 0; s < 2; ++s)
        for (int v : sys->panels_[u][s]) {
          if (v == u) continue;
          Word cand = g.product(sys->delta_table_[c][u], Word{s});
          if (dist[v] < 0) {
            dist[v] = dist[u] + 1;
            internal_check(static_cast<int>(cand.size()) == dist[v],
                           "Weyl distance does not grow along galleries");
            sys->delta_table_[c][v] = std::move(cand);
            queue.push_back(v);
          } else if (dist[v] == dist[u] + 1) {
            internal_check(sys->delta_table_[c][v] == cand,
                           "Weyl distance is not well defined");
          }
        }
    }
    for (int d = 0; d < n; ++d)
      internal_check(dist[d] >= 0, "flag complex is connected");
  }
  return sys;
}

std::shared_ptr<const ChamberSystem> ChamberSystem::make_product(
    std::shared_ptr<const ChamberSystem> a, std::shared_ptr<const ChamberSystem> b) {
  if (!a || !b) throw usage_error("product factors must be present");
  auto sys = std::shared_ptr<ChamberSystem>(new ChamberSystem());
  sys->kind_ = Kind::product;
  sys->fa_ = a;
  sys->fb_ = b;
  sys->weyl_ = std::make_shared<const CoxeterGroup>(
      coxeter_product(a->weyl().matrix(), b->weyl().matrix()));
  if (a->is_complete() && b->is_complete())
    sys->radius_ = -1;
  else if (a->is_complete())
    sys->radius_ = b->window_radius();
  else if (b->is_complete())
    sys->radius_ = a->window_radius();
  else
    sys->radius_ = std::min(a->window_radius(), b->window_radius());
  const int ra = a->weyl().rank(), rb = b->weyl().rank();
  const int na = a->chamber_count(), nb = b->chamber_count();
  sys->names_.reserve(static_cast<std::size_t>(na) * nb);
  for (int ca = 0; ca < na; ++ca)
    for (int cb = 0; cb < nb; ++cb)
      sys->names_.push_back(a->chamber_name(ca) + "*" + b->chamber_name(cb));
  sys->index_names();
  sys->panels_.assign(static_cast<std::size_t>(na) * nb,
                      std::vector<std::vector<int>>(ra + rb));
  sys->complete_.assign(static_cast<std::size_t>(na) * nb,
                        std::vector<char>(ra + rb, 0));
  for (int ca = 0; ca < na; ++ca)
    for (int cb = 0; cb < nb; ++cb) {
      int c = ca * nb + cb;
      for (Gen s = 0; s < ra; ++s) {
        for (int x : a->panel(ca, s)) sys->panels_[c][s].push_back(x * nb + cb);
        std::sort(sys->panels_[c][s].begin(), sys->panels_[c][s].end());
        sys->complete_[c][s] = a->panel_complete(ca, s) ? 1 : 0;
      }
      for (Gen s = 0; s < rb; ++s) {
        for (int x : b->panel(cb, s)) sys->panels_[c][ra + s].push_back(ca * nb + x);
        std::sort(sys->panels_[c][ra + s].begin(), sys->panels_[c][ra + s].end());
        sys->complete_[c][ra + s] = b->panel_complete(cb, s) ? 1 : 0;
      }
    }
  return sys;
}

void ChamberSystem::check_tree() const {
  if (kind_ != Kind::tree) throw usage_error("operation requires the tree backend");
}

void ChamberSystem::check_product() const {
  if (kind_ != Kind::product) throw usage_error("operation requires the product backend");
}

const std::vector<int>& ChamberSystem::tree_valences() const {
  check_tree();
  return valences_;
}

std::pair<int, int> ChamberSystem::edge_endpoints(int c) const {
  check_tree();
  return edge_ends_[c];
}

int ChamberSystem::vertex_count() const {
  check_tree();
  return static_cast<int>(verts_.size());
}

int ChamberSystem::vertex_color(int v) const {
  check_tree();
  return verts_[v].color;
}

int ChamberSystem::vertex_depth(int v) const {
  check_tree();
  return verts_[v].depth;
}

int ChamberSystem::vertex_parent(int v) const {
  check_tree();
  return verts_[v].parent;
}

const std::string& ChamberSystem::vertex_name(int v) const {
  check_tree();
  return verts_[v].name;
}

int ChamberSystem::vertex_by_name(const std::string& name) const {
  check_tree();
  auto it = vert_by_name_.find(name);
  if (it == vert_by_name_.end()) throw usage_error("unknown vertex: " + name);
  return it->second;
}

const std::vector<int>& ChamberSystem::vertex_edges(int v) const {
  check_tree();
  return verts_[v].edges;
}

const ChamberSystem& ChamberSystem::left_factor() const {
  check_product();
  return *fa_;
}

const ChamberSystem& ChamberSystem::right_factor() const {
  check_product();
  return *fb_;
}

std::pair<int, int> ChamberSystem::split_chamber(int c) const {
  check_product();
  int nb = fb_->chamber_count();
  return {c / nb, c % nb};
}

int ChamberSystem::join_chamber(int ca, int cb) const {
  check_product();
  return ca * fb_->chamber_count() + cb;
}

std::pair<Word, Word> ChamberSystem::split_word(const Word& w) const {
  check_product();
  const int ra = fa_->weyl().rank();
  Word wa, wb;
  for (Gen s : w)
    if (s < ra)
      wa.push_back(s);
    else
      wb.push_back(s - ra);
  return {fa_->weyl().reduce(wa), fb_->weyl().reduce(wb)};
}

Word ChamberSystem::join_word(const Word& wa, const Word& wb) const {
  check_product();
  const int ra = fa_->weyl().rank();
  Word w = wa;
  for (Gen s : wb) w.push_back(s + ra);
  return weyl_->reduce(w);
}

namespace {

/// Unique vertex path x .. y in a rooted tree, endpoints included.
std::vector<int> rooted_path(const std::vector<int>& depth, const std::vector<int>& parent,
                             int x, int y) {
  std::vector<int> left{x}, right{y};
  int a = x, b = y;
  while (depth[a] > depth[b]) left.push_back(a = parent[a]);
  while (depth[b] > depth[a]) right.push_back(b = parent[b]);
  while (a != b) {
    left.push_back(a = parent[a]);
    right.push_back(b = parent[b]);
  }
  right.pop_back();
  left.insert(left.end(), right.rbegin(), right.rend());
  return left;
}

}  // namespace

Word ChamberSystem::tree_delta(int c, int d) const {
  if (c == d) return {};
  std::vector<int> depth(verts_.size()), parent(verts_.size());
  for (std::size_t i = 0; i < verts_.size(); ++i) {
    depth[i] = verts_[i].depth;
    parent[i] = verts_[i].parent;
  }
  auto vdist = [&](int x, int y) {
    return static_cast<int>(rooted_path(depth, parent, x, y).size()) - 1;
  };
  int exs[2] = {edge_ends_[c].first, edge_ends_[c].second};
  int eys[2] = {edge_ends_[d].first, edge_ends_[d].second};
  int bx = -1, by = -1, best = -1;
  bool tie = false;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) {
      int dd = vdist(exs[i], eys[j]);
      if (best < 0 || dd < best) {
        best = dd;
        bx = exs[i];
        by = eys[j];
        tie = false;
      } else if (dd == best) {
        tie = true;
      }
    }
  internal_check(!tie, "closest endpoint pair of distinct tree edges is unique");
  Word w;
  for (int v : rooted_path(depth, parent, bx, by)) w.push_back(verts_[v].color);
  for (std::size_t i = 1; i < w.size(); ++i)
    internal_check(w[i] != w[i - 1], "tree pivot colors alternate");
  return w;
}

Word ChamberSystem::delta(int c, int d) const {
  switch (kind_) {
    case Kind::thin:
      return weyl_->product(weyl_->inverse_of(words_[c]), words_[d]);
    case Kind::tree:
      return tree_delta(c, d);
    case Kind::fano:
      return delta_table_[c][d];
    case Kind::product: {
      auto [ca, cb] = split_chamber(c);
      auto [da, db] = split_chamber(d);
      return join_word(fa_->delta(ca, da), fb_->delta(cb, db));
    }
  }
  throw internal_error("unreachable backend kind");
}

ChamberSystem::Chart ChamberSystem::find_apartment(int c, int d) const {
  switch (kind_) {
    case Kind::thin: {
      Chart chart;
      chart.base = word_id_.at(Word{});
      for (int i = 0; i < chamber_count(); ++i) {
        chart.to_chamber[words_[i]] = i;
        chart.to_word[i] = words_[i];
      }
      return chart;
    }
    case Kind::tree: {
      // The line through both edges: the connecting path, extended on both
      // ends greedily by smallest edge id as far as the window allows.
      std::deque<int> line;
      Word dl = tree_delta(c, d);
      int cur = c;
      line.push_back(c);
      for (Gen s : dl) {
        int nxt = -1;
        for (int e : panels_[cur][s]) {
          if (e == cur) continue;
          if (gallery_dist(e, d) == gallery_dist(cur, d) - 1) {
            nxt = e;
            break;
          }
        }
        internal_check(nxt >= 0, "gallery toward the far edge exists");
        line.push_back(nxt);
        cur = nxt;
      }
      internal_check(cur == d, "line reaches the far edge");
      // Extend past d, then past c, alternating panel colors.
      auto extend = [&](bool front) {
        while (true) {
          int tip = front ? line.front() : line.back();
          int prev = -1;
          if (line.size() >= 2) prev = front ? line[1] : line[line.size() - 2];
          // The continuing panel is the endpoint not shared with prev.
          Gen s;
          if (prev < 0) {
            s = front ? 0 : 1;  // only for a single-edge line: pick fixed ends
          } else {
            auto te = edge_ends_[tip];
            auto pe = edge_ends_[prev];
            s = (te.first == pe.first || te.first == pe.second) ? 1 : 0;
          }
          int nxt = -1;
          for (int e : panels_[tip][s])
            if (e != tip && (prev < 0 || e != prev)) {
              nxt = e;
              break;
            }
          if (nxt < 0) break;  // window boundary
          if (front)
            line.push_front(nxt);
          else
            line.push_back(nxt);
        }
      };
      extend(false);
      extend(true);
      // Chart words: position 0 at c; +k toward the 0-panel neighbor.
      int pos0 = static_cast<int>(std::find(line.begin(), line.end(), c) - line.begin());
      // Determine which direction from c is the 0-side.
      bool zero_is_front;
      if (pos0 > 0 &&
          (edge_ends_[line[pos0 - 1]].first == edge_ends_[c].first))
        zero_is_front = true;
      else if (pos0 + 1 < static_cast<int>(line.size()) &&
               (edge_ends_[line[pos0 + 1]].first == edge_ends_[c].first))
        zero_is_front = false;
      else
        zero_is_front = true;  // degenerate single-edge line
      Chart chart;
      chart.base = c;
      for (int i = 0; i < static_cast<int>(line.size()); ++i) {
        int off = i - pos0;
        int k = zero_is_front ? -off : off;  // k > 0 on the 0-side
        Word w;
        Gen lead = k > 0 ? 0 : 1;
        for (int j = 0; j < std::abs(k); ++j) w.push_back((j % 2 == 0) ? lead : 1 - lead);
        chart.to_chamber[w] = line[i];
        chart.to_word[line[i]] = w;
      }
      return chart;
    }
    case Kind::fano: {
      for (const auto& hex : fano_hexagons(*this)) {
        if (!hex.count(c) || !hex.count(d)) continue;
        Chart chart = hexagon_chart(*this, hex, c);
        internal_check(chart.to_word.count(d) == 1, "hexagon chart covers both flags");
        return chart;
      }
      throw internal_error("no hexagon contains the flag pair");
    }
    case Kind::product: {
      auto [ca, cb] = split_chamber(c);
      auto [da, db] = split_chamber(d);
      Chart la = fa_->find_apartment(ca, da);
      Chart lb = fb_->find_apartment(cb, db);
      Chart chart;
      chart.base = join_chamber(la.base, lb.base);
      for (const auto& [wa, xa] : la.to_chamber)
        for (const auto& [wb, xb] : lb.to_chamber) {
          Word w = join_word(wa, wb);
          int x = join_chamber(xa, xb);
          chart.to_chamber[w] = x;
          chart.to_word[x] = w;
        }
      return chart;
    }
  }
  throw internal_error("unreachable backend kind");
}

std::vector<ChamberSystem::Chart> ChamberSystem::apartments_through(int c) const {
  if (kind_ != Kind::fano) return {find_apartment(c, c)};
  std::vector<Chart> out;
  for (const auto& hex : fano_hexagons(*this))
    if (hex.count(c)) out.push_back(hexagon_chart(*this, hex, c));
  return out;
}

int ChamberSystem::retract(const Chart& chart, int center, int c) const {
  auto it = chart.to_word.find(center);
  if (it == chart.to_word.end())
    throw usage_error("retraction center must lie in the chart");
  Word w = weyl_->product(it->second, delta(center, c));
  auto jt = chart.to_chamber.find(w);
  if (jt == chart.to_chamber.end())
    throw window_escape_error("retraction image " + word_str(w) +
                              " falls outside the charted window");
  return jt->second;
}

ChamberSystem::BResidue ChamberSystem::residue_of(int c, TypeSet J) const {
  std::sort(J.begin(), J.end());
  J.erase(std::unique(J.begin(), J.end()), J.end());
  if (!weyl_->is_spherical(J))
    throw usage_error("residue type must span a finite parabolic");
  std::set<int> seen{c};
  std::deque<int> queue{c};
  while (!queue.empty()) {
    int u = queue.front();
    queue.pop_front();
    for (Gen s : J)
      for (int v : panels_[u][s])
        if (seen.insert(v).second) queue.push_back(v);
  }
  return BResidue{*seen.begin(), std::move(J)};
}

std::vector<int> ChamberSystem::residue_chambers(const BResidue& r) const {
  std::set<int> seen{r.chamber};
  std::deque<int> queue{r.chamber};
  while (!queue.empty()) {
    int u = queue.front();
    queue.pop_front();
    for (Gen s : r.type) {
      if (!panel_complete(u, s))
        throw window_escape_error("residue " + names_[r.chamber] +
                                  " is clipped by the window");
      for (int v : panels_[u][s])
        if (seen.insert(v).second) queue.push_back(v);
    }
  }
  return {seen.begin(), seen.end()};
}

std::vector<ChamberSystem::BResidue> ChamberSystem::residues() const {
  std::vector<BResidue> out;
  for (const TypeSet& J : weyl_->spherical_types())
    for (int c = 0; c < chamber_count(); ++c) {
      BResidue r = residue_of(c, J);
      if (r.chamber != c) continue;  // canonical member only
      bool complete = true;
      std::set<int> seen{c};
      std::deque<int> queue{c};
      while (!queue.empty() && complete) {
        int u = queue.front();
        queue.pop_front();
        for (Gen s : J) {
          if (!panel_complete(u, s)) {
            complete = false;
            break;
          }
          for (int v : panels_[u][s])
            if (seen.insert(v).second) queue.push_back(v);
        }
      }
      if (complete) out.push_back(std::move(r));
    }
  std::sort(out.begin(), out.end(), bresidue_less);
  return out;
}

int ChamberSystem::project_chamber(int c, const BResidue& R) const {
  auto members = residue_chambers(R);
  int best = -1, best_d = -1;
  bool tie = false;
  for (int m : members) {
    int d = gallery_dist(c, m);
    if (best < 0 || d < best_d) {
      best = m;
      best_d = d;
      tie = false;
    } else if (d == best_d) {
      tie = true;
    }
  }
  internal_check(best >= 0 && !tie, "chamber gate of a residue is unique");
  return best;
}

ChamberSystem::BResidue ChamberSystem::project_residue(const BResidue& R,
                                                       const BResidue& T) const {
  auto t_members = residue_chambers(T);
  std::vector<int> gates;
  for (int c : t_members) gates.push_back(project_chamber(c, R));
  int g0 = gates.front();
  std::set<Gen> support;
  for (int gate : gates)
    for (Gen s : delta(g0, gate)) support.insert(s);
  TypeSet K(support.begin(), support.end());
  internal_check(std::includes(R.type.begin(), R.type.end(), K.begin(), K.end()),
                 "gates of a residue stay inside it");
  return residue_of(g0, K);
}

SphericalResidue ChamberSystem::chart_residue(const Chart& chart, const BResidue& r) const {
  auto members = residue_chambers(r);
  for (int m : members) {
    auto it = chart.to_word.find(m);
    if (it != chart.to_word.end()) return make_residue(*weyl_, it->second, r.type);
  }
  throw window_escape_error("residue has no member in the chart");
}

SphericalResidue ChamberSystem::retract_residue(const Chart& chart, int center,
                                                const BResidue& r) const {
  auto members = residue_chambers(r);
  std::optional<SphericalResidue> out;
  for (int m : members) {
    int im = retract(chart, center, m);
    Word w = chart.to_word.at(im);
    if (!out) {
      out = make_residue(*weyl_, w, r.type);
    } else {
      internal_check(weyl_->min_coset_rep(w, r.type) == out->rep,
                     "retraction maps a residue into one residue");
    }
  }
  internal_check(out.has_value(), "residue has members");
  return *out;
}

HalfInt ChamberSystem::residue_distance(const BResidue& a, const BResidue& b,
                                        int horizon) const {
  Chart chart = find_apartment(a.chamber, b.chamber);
  SphericalResidue ra = chart_residue(chart, a);
  SphericalResidue rb = chart_residue(chart, b);
  return root_distance(*weyl_, ra, rb, horizon);
}

}  // namespace bordify
