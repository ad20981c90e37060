#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <array>
#include <map>
#include <set>

#include "bordify/coxeter.hpp"

using namespace bordify;

namespace {

// Independent word-problem oracles: permutation models with lengths read off
// the Cayley graph, never through the code under test.

template <std::size_t N>
using Perm = std::array<int, N>;

template <std::size_t N>
Perm<N> pmul(const Perm<N>& a, const Perm<N>& b) {  // (a*b)(i) = a(b(i))
  Perm<N> r{};
  for (std::size_t i = 0; i < N; ++i) r[i] = a[b[i]];
  return r;
}

template <std::size_t N>
Perm<N> pid() {
  Perm<N> r{};
  for (std::size_t i = 0; i < N; ++i) r[i] = static_cast<int>(i);
  return r;
}

template <std::size_t N, std::size_t G>
Perm<N> of_word(const std::array<Perm<N>, G>& gens, const Word& w) {
  Perm<N> p = pid<N>();
  for (Gen s : w) p = pmul(p, gens[s]);
  return p;
}

template <std::size_t N, std::size_t G>
std::map<Perm<N>, int> cayley_lengths(const std::array<Perm<N>, G>& gens) {
  std::map<Perm<N>, int> dist{{pid<N>(), 0}};
  std::vector<Perm<N>> frontier{pid<N>()};
  while (!frontier.empty()) {
    std::vector<Perm<N>> next;
    for (const auto& p : frontier)
      for (const auto& g : gens) {
        auto q = pmul(p, g);
        if (dist.emplace(q, dist[p] + 1).second) next.push_back(q);
      }
    frontier = std::move(next);
  }
  return dist;
}

void all_words(int rank, int len, Word& cur, const std::function<void(const Word&)>& f) {
  if (len == 0) {
    f(cur);
    return;
  }
  for (Gen s = 0; s < rank; ++s) {
    cur.push_back(s);
    all_words(rank, len - 1, cur, f);
    cur.pop_back();
  }
}

void for_all_words(int rank, int max_len, const std::function<void(const Word&)>& f) {
  Word cur;
  for (int len = 0; len <= max_len; ++len) all_words(rank, len, cur, f);
}

/// Affine model of the infinite dihedral group: x -> sign*x + off with
/// g0: x -> -x and g1: x -> 2 - x (walls at the integers 0 and 1).
struct Aff {
  int sign = 1;
  long long off = 0;
  friend auto operator<=>(const Aff&, const Aff&) = default;
};

Aff aff_mul(const Aff& a, const Aff& b) {
  return Aff{a.sign * b.sign, a.sign * b.off + a.off};
}

Aff aff_gen(Gen s) { return s == 0 ? Aff{-1, 0} : Aff{-1, 2}; }

Aff aff_of_word(const Word& w) {
  Aff p;
  for (Gen s : w) p = aff_mul(p, aff_gen(s));
  return p;
}

}  // namespace

TEST_CASE("A2 reduction matches the symmetric group S3") {
  CoxeterGroup g(coxeter_a2());
  const std::array<Perm<3>, 2> gens{Perm<3>{1, 0, 2}, Perm<3>{0, 2, 1}};
  auto lengths = cayley_lengths(gens);
  REQUIRE(lengths.size() == 6);

  std::map<Perm<3>, Word> canonical;  // lexicographically least reduced word seen
  for_all_words(2, 6, [&](const Word& w) {
    Word r = g.reduce(w);
    auto p = of_word(gens, w);
    CHECK(of_word(gens, r) == p);
    CHECK(static_cast<int>(r.size()) == lengths.at(p));
    if (static_cast<int>(w.size()) == lengths.at(p)) {
      auto it = canonical.find(p);
      if (it == canonical.end() || w < it->second) canonical[p] = w;
    }
  });
  for (const auto& [p, w] : canonical) CHECK(g.reduce(w) == w);

  CHECK(g.ball(3).size() == 6);
  CHECK(g.ball(2).size() == 5);
  CHECK(g.longest_in({0, 1}) == Word{0, 1, 0});
  CHECK(g.reflections_in_ball(3).size() == 3);
  CHECK(g.min_coset_rep({0, 1, 0}, {0}) == Word{0, 1});
}

TEST_CASE("B2 reduction matches the dihedral group of order 8") {
  CoxeterGroup g(coxeter_b2());
  // Symmetries of a square on corners 0..3: an edge flip and a diagonal flip.
  const std::array<Perm<4>, 2> gens{Perm<4>{1, 0, 3, 2}, Perm<4>{0, 3, 2, 1}};
  auto lengths = cayley_lengths(gens);
  REQUIRE(lengths.size() == 8);

  for_all_words(2, 8, [&](const Word& w) {
    Word r = g.reduce(w);
    auto p = of_word(gens, w);
    CHECK(of_word(gens, r) == p);
    CHECK(static_cast<int>(r.size()) == lengths.at(p));
  });

  CHECK(g.ball(4).size() == 8);
  CHECK(g.ball(9).size() == 8);
  CHECK(g.longest_in({0, 1}).size() == 4);
  CHECK(g.reflections_in_ball(4).size() == 4);
}

TEST_CASE("infinite dihedral reduction matches the affine line model") {
  CoxeterGroup g(coxeter_dihedral_inf());
  for_all_words(2, 9, [&](const Word& w) {
    Word r = g.reduce(w);
    CHECK(aff_of_word(r) == aff_of_word(w));
  });
  // Lengths via breadth-first search over affine maps.
  std::map<Aff, int> dist{{Aff{}, 0}};
  std::vector<Aff> frontier{Aff{}};
  for (int level = 1; level <= 9; ++level) {
    std::vector<Aff> next;
    for (const auto& p : frontier)
      for (Gen s : {0, 1}) {
        Aff q = aff_mul(p, aff_gen(s));
        if (dist.emplace(q, level).second) next.push_back(q);
      }
    frontier = std::move(next);
  }
  for_all_words(2, 9, [&](const Word& w) {
    CHECK(static_cast<int>(g.reduce(w).size()) == dist.at(aff_of_word(w)));
  });

  for (int r = 0; r <= 6; ++r) {
    CHECK(g.ball(r).size() == static_cast<std::size_t>(2 * r + 1));
    CHECK(g.reflections_in_ball(r).size() == static_cast<std::size_t>(2 * r + 2));
  }
  CHECK(g.spherical_types() == std::vector<TypeSet>{{}, {0}, {1}});
  CHECK(g.max_spherical_length() == 1);
}

TEST_CASE("affine A2 alcove engine is a Coxeter system") {
  CoxeterGroup g(coxeter_affine_a2());

  SUBCASE("ball growth follows the alcove count") {
    for (int r = 0; r <= 6; ++r)
      CHECK(g.ball(r).size() == static_cast<std::size_t>(1 + 3 * r * (r + 1) / 2));
  }

  SUBCASE("defining relations hold and reduction is idempotent") {
    for_all_words(3, 5, [&](const Word& w) {
      Word r = g.reduce(w);
      CHECK(g.reduce(r) == r);
      // parity is preserved
      CHECK((r.size() + w.size()) % 2 == 0);
    });
    for (Gen a = 0; a < 3; ++a) {
      CHECK(g.reduce({a, a}).empty());
      for (Gen b = 0; b < 3; ++b)
        if (a != b) CHECK(g.reduce({a, b, a}) == g.reduce({b, a, b}));
    }
  }

  SUBCASE("deletion condition on the radius-5 ball") {
    for (const Word& w : g.ball(5))
      for (Gen s = 0; s < 3; ++s) {
        if (!g.right_descends(w, s)) continue;
        Word ws = g.product(w, {s});
        bool found = false;
        for (std::size_t i = 0; i < w.size() && !found; ++i) {
          Word dropped;
          for (std::size_t j = 0; j < w.size(); ++j)
            if (j != i) dropped.push_back(w[j]);
          found = g.reduce(dropped) == ws;
        }
        CHECK(found);
      }
  }

  SUBCASE("walls act by reflection on the matching coordinate") {
    for (const Reflection& t : g.reflections_in_ball(4)) {
      auto wc = g.wall_coord(t.element);
      REQUIRE(wc.has_value());
      long long pos = g.family_scale(wc->family) * wc->level;
      for (const Word& x : g.ball(3)) {
        auto cx = g.chamber_coords(x);
        auto ctx = g.chamber_coords(g.product(t.element, x));
        CHECK(ctx[wc->family] == 2 * pos - cx[wc->family]);
      }
    }
  }

  SUBCASE("spherical structure") {
    CHECK(g.spherical_types().size() == 7);  // everything except the full set
    CHECK(g.max_spherical_length() == 3);
    CHECK(g.longest_in({0, 2}) == Word{0, 2, 0});
    CHECK(g.parabolic({0, 1}).size() == 6);
  }
}

TEST_CASE("commuting components reduce independently and merge canonically") {
  CoxeterGroup g(coxeter_product(coxeter_a2(), coxeter_dihedral_inf()));
  CHECK(g.rank() == 4);
  CHECK(g.reduce({2, 0}) == Word{0, 2});
  CHECK(g.reduce({3, 1, 2}) == g.reduce({1, 3, 2}));

  CoxeterGroup a2(coxeter_a2());
  CoxeterGroup dinf(coxeter_dihedral_inf());
  for_all_words(4, 5, [&](const Word& w) {
    Word wa, wb;
    for (Gen s : w)
      if (s < 2)
        wa.push_back(s);
      else
        wb.push_back(s - 2);
    CHECK(g.reduce(w).size() == a2.reduce(wa).size() + dinf.reduce(wb).size());
  });

  // |ball(r)| is the convolution of the factor level counts.
  CHECK(g.ball(2).size() == 13);
  CHECK(g.spherical_types().size() == 4 * 3);  // subsets of A2 x {empty,{2},{3}}

  CoxeterGroup dd(coxeter_product(coxeter_dihedral_inf(), coxeter_dihedral_inf()));
  CHECK(dd.spherical_types().size() == 9);
}

TEST_CASE("chamber_at inverts chamber_coords and resolves walls upward") {
  SUBCASE("infinite dihedral") {
    CoxeterGroup g(coxeter_dihedral_inf());
    for (const Word& w : g.ball(8)) {
      CHECK(g.chamber_at(g.chamber_coords(w), 1) == w);
      // Scaling the point does not move it.
      auto c = g.chamber_coords(w);
      CHECK(g.chamber_at({7 * c[0]}, 7) == w);
    }
    // Walls sit at even coordinates; on-wall points pick the upper alcove.
    CHECK(g.chamber_at({0}, 1) == Word{});
    CHECK(g.chamber_at({2}, 1) == Word{1});
    CHECK(g.chamber_at({-2}, 1) == Word{0});
    CHECK(g.chamber_at({5}, 2) == Word{1});   // 2.5 lies in (2, 4)
    CHECK(g.chamber_at({-5}, 2) == Word{0, 1});  // -2.5 lies in (-4, -2)
    CHECK_THROWS_AS(g.chamber_at({0, 0}, 1), usage_error);
    CHECK_THROWS_AS(g.chamber_at({0}, 0), usage_error);
  }

  SUBCASE("affine A2") {
    CoxeterGroup g(coxeter_affine_a2());
    for (const Word& w : g.ball(6)) {
      auto c = g.chamber_coords(w);
      CHECK(g.chamber_at(c, 1) == w);
      CHECK(g.chamber_at({3 * c[0], 3 * c[1], 3 * c[2]}, 3) == w);
    }
    CHECK(g.chamber_at({0, 0, 0}, 1) == Word{});
    // A wall corner resolves above in all families at once: the alcove over
    // (3, 3) equals the alcove of the interior point (3.25, 3.25).
    CHECK(g.chamber_at({3, 3, 6}, 1) == g.chamber_at({13, 13, 26}, 4));
    CHECK_THROWS_AS(g.chamber_at({1, 1, 3}, 1), usage_error);  // x+y mismatch
  }

  SUBCASE("products concatenate family slices") {
    CoxeterGroup dd(coxeter_product(coxeter_dihedral_inf(), coxeter_dihedral_inf()));
    for (const Word& w : dd.ball(5)) CHECK(dd.chamber_at(dd.chamber_coords(w), 1) == w);
    CHECK(dd.chamber_at({0, 2}, 1) == Word{3});

    CoxeterGroup g(coxeter_product(coxeter_a2(), coxeter_dihedral_inf()));
    CHECK_FALSE(g.has_geometry());
    CHECK_THROWS_AS(g.chamber_at({0}, 1), usage_error);
  }
}
