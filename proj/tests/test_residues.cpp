#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <set>

#include "bordify/residues.hpp"

using namespace bordify;

namespace {

SphericalResidue res(const CoxeterGroup& g, Word w, TypeSet J) {
  return make_residue(g, std::move(w), std::move(J));
}

std::vector<SphericalResidue> sorted(std::vector<SphericalResidue> v) {
  std::sort(v.begin(), v.end(), residue_less);
  return v;
}

}  // namespace

TEST_CASE("sides, phi sets and distances on A2") {
  CoxeterGroup g(coxeter_a2());
  auto cham_e = chamber_of(g, {});
  auto cham_s = chamber_of(g, {0});
  auto panel_s = res(g, {}, {0});

  CHECK(residue_side(g, Root{{0}, Sign::plus}, cham_e) == SideOfRoot::contains);
  CHECK(residue_side(g, Root{{0}, Sign::plus}, panel_s) == SideOfRoot::on_wall);
  CHECK(residue_side(g, Root{{0}, Sign::minus}, cham_e) == SideOfRoot::not_contains);

  CHECK(separating_roots(g, cham_e, cham_s, 9).size() == 1);
  CHECK(separating_roots(g, cham_e, cham_e, 9).empty());
  // A root contains a simplex when some member chamber lies strictly inside,
  // so the chamber's phi set toward its own panel is empty while the panel
  // keeps the root on the chamber's far side.
  CHECK(separating_roots(g, cham_e, panel_s, 9).empty());
  CHECK(separating_roots(g, panel_s, cham_e, 9).size() == 1);

  // Emptiness criterion: phi(R1, R2) is empty exactly when the chamber set
  // of R1 sits inside that of R2.
  auto all = residues_in_ball(g, 3);
  for (const auto& r1 : all)
    for (const auto& r2 : all)
      CHECK(separating_roots(g, r1, r2, 9).empty() == coset_within(g, r1, r2));

  CHECK(root_distance(g, cham_e, cham_s, 9) == HalfInt::whole(1));
  CHECK(root_distance(g, panel_s, cham_e, 9) == HalfInt::from_twice(1));
  CHECK(root_distance(g, panel_s, panel_s, 9) == HalfInt::whole(0));
}

TEST_CASE("stars, faces and closure on A2") {
  CoxeterGroup g(coxeter_a2());
  auto panel_s = res(g, {}, {0});
  auto vertex = res(g, {}, TypeSet{0, 1});

  auto st = star(g, panel_s);
  CHECK(st.size() == 3);
  CHECK(std::find(st.begin(), st.end(), chamber_of(g, {})) != st.end());
  CHECK(std::find(st.begin(), st.end(), chamber_of(g, {0})) != st.end());
  CHECK(std::find(st.begin(), st.end(), panel_s) != st.end());

  CHECK(star(g, chamber_of(g, {0, 1})) ==
        std::vector<SphericalResidue>{chamber_of(g, {0, 1})});
  CHECK(star(g, vertex).size() == 13);

  auto cl = closure(g, {chamber_of(g, {})});
  CHECK(cl.size() == 4);  // the chamber, two panels, one vertex
  CHECK(is_closed(g, cl));
  CHECK(!is_closed(g, {chamber_of(g, {})}));

  CHECK(residues_in_ball(g, 3).size() == 13);
  CHECK(residues_in_ball(g, 2).size() == 9);
}

TEST_CASE("projection on A2") {
  CoxeterGroup g(coxeter_a2());
  auto panel_s = res(g, {}, {0});
  auto vertex = res(g, {}, TypeSet{0, 1});

  CHECK(projection(g, panel_s, chamber_of(g, {0, 1}), 9) == chamber_of(g, {0}));
  CHECK(projection(g, panel_s, chamber_of(g, {0}), 9) == chamber_of(g, {0}));
  for (const Word& w : g.ball(3))
    CHECK(projection(g, vertex, chamber_of(g, w), 9) == chamber_of(g, w));
}

TEST_CASE("hulls and intervals on A2 against the explicit root oracle") {
  CoxeterGroup g(coxeter_a2());
  auto all = residues_in_ball(g, 3);
  REQUIRE(all.size() == 13);

  // Explicit chamber sets of the six roots.
  struct RootSet {
    Root root;
    std::set<Word> chambers;
  };
  std::vector<RootSet> roots;
  for (const Reflection& t : g.reflections_in_ball(3))
    for (Sign sg : {Sign::plus, Sign::minus}) {
      RootSet rs{{t.element, sg}, {}};
      for (const Word& w : g.ball(3))
        if (g.side_of(rs.root, w) == Side::inside) rs.chambers.insert(w);
      CHECK(rs.chambers.size() == 3);
      roots.push_back(std::move(rs));
    }
  REQUIRE(roots.size() == 6);
  auto simplex_in = [&](const RootSet& rs, const SphericalResidue& r) {
    for (const Word& m : residue_members(g, r))
      if (rs.chambers.count(m)) return true;
    return false;
  };

  for (const auto& r1 : all)
    for (const auto& r2 : all) {
      std::vector<SphericalResidue> oracle;
      for (const auto& s : all) {
        bool in = true;
        for (const auto& rs : roots)
          if (simplex_in(rs, r1) && simplex_in(rs, r2) && !simplex_in(rs, s)) {
            in = false;
            break;
          }
        if (in) oracle.push_back(s);
      }
      CHECK(sorted(convex_hull(g, r1, r2, 64)) == sorted(oracle));
    }

  auto sts = chamber_of(g, {0, 1, 0});
  CHECK(convex_hull(g, chamber_of(g, {}), sts, 64).size() == 13);
  CHECK(sorted(convex_hull(g, sts, sts, 64)) == closure(g, {sts}));

  CHECK(sorted(interval(g, chamber_of(g, {}), chamber_of(g, {0}), 64)) ==
        sorted({chamber_of(g, {}), chamber_of(g, {0}), res(g, {}, {0})}));
  CHECK(interval(g, sts, sts, 64) == std::vector<SphericalResidue>{sts});
  CHECK(sorted(closure(g, interval(g, chamber_of(g, {}), sts, 64))) ==
        sorted(convex_hull(g, chamber_of(g, {}), sts, 64)));
}

TEST_CASE("hull/interval duality, convexity and the projection routes on A2 and B2") {
  for (auto matrix : {coxeter_a2(), coxeter_b2()}) {
    CoxeterGroup g(matrix);
    int diam = static_cast<int>(g.longest_in({0, 1}).size());
    auto all = residues_in_ball(g, diam);
    ApartmentWindow win(g, hull_horizon(g, res(g, {}, {0, 1}), res(g, {}, {0, 1})) + 2 * diam);
    for (const auto& r1 : all)
      for (const auto& r2 : all) {
        auto hull = convex_hull_in(win, r1, r2);
        CHECK(sorted(closure(g, interval_in(win, r1, r2))) == sorted(hull));
        CHECK(projection_in(win, r1, r2) == projection_via_hull_in(win, r1, r2));
        CHECK(is_convex(g, hull, 64));
      }
    CHECK(!is_convex(g, {chamber_of(g, {}), chamber_of(g, {0, 1, 0})}, 64));
  }
}

TEST_CASE("interval dichotomy on A2") {
  CoxeterGroup g(coxeter_a2());
  auto all = residues_in_ball(g, 3);
  for (const auto& r1 : all)
    for (const auto& r2 : all) {
      if (r1 == r2) continue;
      bool pair_only = sorted(interval(g, r1, r2, 64)) == sorted({r1, r2});
      bool nested = coset_within(g, r1, r2) || coset_within(g, r2, r1);
      bool sandwiched = false;
      for (const auto& s : all) {
        if (s == r1 || s == r2) continue;
        if ((coset_within(g, r1, s) && coset_within(g, s, r2)) ||
            (coset_within(g, r2, s) && coset_within(g, s, r1)))
          sandwiched = true;
      }
      CHECK(pair_only == (nested && !sandwiched));
    }
}

TEST_CASE("window tables agree with direct classification") {
  CoxeterGroup g(coxeter_affine_a2());
  ApartmentWindow win(g, 3);
  REQUIRE(g.has_geometry());
  for (std::size_t ri = 0; ri < win.residues().size(); ++ri) {
    const auto& r = win.residues()[ri];
    const auto& m = win.mask(static_cast<int>(ri));
    for (std::size_t wi = 0; wi < win.walls().size(); ++wi) {
      auto side = win.side(m, static_cast<int>(wi));
      auto direct = residue_side(g, Root{win.walls()[wi].element, Sign::plus}, r);
      switch (direct) {
        case SideOfRoot::contains:
          CHECK(side == ApartmentWindow::RSide::plus);
          break;
        case SideOfRoot::not_contains:
          CHECK(side == ApartmentWindow::RSide::minus);
          break;
        case SideOfRoot::on_wall:
          CHECK(side == ApartmentWindow::RSide::on);
          break;
      }
    }
  }
}

TEST_CASE("window distances equal gallery and root distances") {
  CoxeterGroup g(coxeter_affine_a2());
  ApartmentWindow win(g, 3);
  auto all = win.residues();
  for (const auto& r1 : all)
    for (const auto& r2 : all) {
      HalfInt d = win.distance(r1, r2);
      CHECK(d == root_distance(g, r1, r2, 9));
      if (is_chamber(r1) && is_chamber(r2))
        CHECK(d == HalfInt::whole(gallery_distance(g, r1.rep, r2.rep)));
    }
}

TEST_CASE("metric axioms on a small affine window") {
  CoxeterGroup g(coxeter_affine_a2());
  ApartmentWindow win(g, 2);
  auto all = win.residues();
  std::vector<ApartmentWindow::Mask> masks;
  for (const auto& r : all) masks.push_back(win.mask_or_classify(r));
  for (std::size_t i = 0; i < all.size(); ++i)
    for (std::size_t j = 0; j < all.size(); ++j) {
      HalfInt dij = win.distance(masks[i], masks[j]);
      CHECK(dij == win.distance(masks[j], masks[i]));
      CHECK((dij == HalfInt::whole(0)) == (all[i] == all[j]));
      for (std::size_t k = 0; k < all.size(); ++k)
        CHECK(win.distance(masks[i], masks[k]) + win.distance(masks[k], masks[j]) >= dij);
    }
}

TEST_CASE("horizon guards fire instead of truncating") {
  CoxeterGroup g(coxeter_affine_a2());
  auto c1 = chamber_of(g, {});
  auto c2 = chamber_of(g, {0, 1, 2, 0, 1});
  CHECK_THROWS_AS(convex_hull(g, c1, c2, 3), horizon_error);
  CHECK_THROWS_AS(separating_roots(g, c1, c2, 3), horizon_error);
  CHECK_NOTHROW(separating_roots(g, c1, c2, 5));
}

TEST_CASE("projection gate matches nearest members on B2 panels") {
  CoxeterGroup g(coxeter_b2());
  for (const Word& w : g.ball(4))
    for (Gen s = 0; s < 2; ++s) {
      auto panel = res(g, w, {s});
      for (const Word& c : g.ball(4)) {
        auto p = projection(g, panel, chamber_of(g, c), 12);
        // Classical gate: the member at minimal gallery distance.
        int best = -1;
        Word gate;
        for (const Word& m : residue_members(g, panel)) {
          int d = gallery_distance(g, m, c);
          if (best < 0 || d < best) {
            best = d;
            gate = m;
          }
        }
        CHECK(p == chamber_of(g, gate));
      }
    }
}
