#include <gtest/gtest.h>

#include "hkb/analysis.hpp"
#include "hkb/bounds.hpp"
#include "hkb/constructions.hpp"

using namespace hkb;

namespace {

std::uint64_t th(unsigned n, unsigned d, std::uint64_t q) { return theta(n, d, q).convert_to<std::uint64_t>(); }

errc code_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const error& e) {
    return e.code();
  }
  return errc::invalid_argument;
}

}  // namespace

TEST(SpaceFilling, CorollarySurfaceOverF2) {
  AntisymmetricSpec spec(2);
  spec.set(0, 1, 1);
  spec.set(2, 3, 1);
  auto x = space_filling(spec, get_field(2, 1));
  EXPECT_EQ(render(x.poly()), "x0^2*x1+x0*x1^2+x2^2*x3+x2*x3^2");
  EXPECT_EQ(count_points(x), 15u);
  EXPECT_EQ(count_points(space_filling(spec, get_field(3, 1))), 40u);
  EXPECT_EQ(count_points(space_filling(spec, get_field(2, 2))), 85u);
}

TEST(SpaceFilling, SpecRejectsDiagonalAndZero) {
  AntisymmetricSpec spec(2);
  EXPECT_THROW(spec.set(1, 1, 1), error);
  EXPECT_THROW(spec.set(2, 1, 1), error);
  EXPECT_EQ(code_of([&] { space_filling(spec, get_field(2, 1)); }), errc::zero_form);
  spec.set(0, 3, 2);
  const auto a = spec.matrix(*get_field(3, 1));
  EXPECT_EQ(a(0, 3), 2u);
  EXPECT_EQ(a(3, 0), 1u);
  EXPECT_EQ(a(0, 0), 0u);
}

TEST(SpaceFilling, RandomSpecsAlwaysFill) {
  Rng rng(201);
  for (auto [p, s] : std::vector<std::pair<unsigned, unsigned>>{{2, 1}, {3, 1}, {2, 2}})
    for (std::size_t n : {1u, 2u})
      for (int trial = 0; trial < 20; ++trial) {
        auto f = get_field(p, s);
        auto x = space_filling(AntisymmetricSpec::random(*f, n, rng), f);
        EXPECT_EQ(x.degree(), f->order() + 1);
        EXPECT_TRUE(is_space_filling(x));
      }
}

TEST(Hermitian, Identity) {
  auto f4 = get_field(2, 2);
  auto x = hermitian(f4);
  EXPECT_EQ(render(x.poly()), "x0^3+x1^3+x2^3+x3^3");
  EXPECT_EQ(count_points(x), 45u);
  EXPECT_EQ(count_points(x), th(2, 3, 4));
  auto y = hermitian(get_field(3, 2));
  EXPECT_EQ(y.degree(), 4u);
  EXPECT_EQ(count_points(y), 280u);
}

TEST(Hermitian, Errors) {
  auto f4 = get_field(2, 2);
  HermitianSpec bad = HermitianSpec::identity(4);
  bad.a(0, 1) = bad.a(1, 0) = 2;  // alpha vs alpha^2
  EXPECT_EQ(code_of([&] { hermitian(bad, f4); }), errc::non_hermitian_matrix);
  EXPECT_EQ(code_of([&] { hermitian(get_field(2, 3)); }), errc::not_a_square);
  EXPECT_EQ(code_of([&] { hermitian(HermitianSpec{Matrix(4, 4)}, f4); }), errc::zero_form);
}

TEST(Hermitian, ConjugationFixesIdentityForm) {
  for (auto [p, s] : std::vector<std::pair<unsigned, unsigned>>{{2, 2}, {3, 2}, {2, 4}, {5, 2}}) {
    auto f = get_field(p, s);
    auto g = hermitian(f).poly();
    EXPECT_EQ(g.map_coefficients(f, [&](Elem c) { return f->frobenius(c, s / 2); }), g);
  }
}

// nondegenerate Hermitian forms are all unitarily equivalent, so they share the count
TEST(Hermitian, RandomNondegenerateSpecsCount45) {
  auto f4 = get_field(2, 2);
  Rng rng(203);
  int done = 0;
  while (done < 10) {
    HermitianSpec h{Matrix(4, 4)};
    for (std::size_t i = 0; i < 4; ++i) {
      h.a(i, i) = static_cast<Elem>(uniform_below(rng, 2));  // F2 subfield
      for (std::size_t j = i + 1; j < 4; ++j) {
        h.a(i, j) = static_cast<Elem>(uniform_below(rng, 4));
        h.a(j, i) = f4->frobenius(h.a(i, j), 1);
      }
    }
    if (determinant(*f4, h.a) == 0) continue;
    EXPECT_EQ(count_points(hermitian(h, f4)), 45u);
    ++done;
  }
}

TEST(HermitianCone, CountsFollowConeFormula) {
  auto f4 = get_field(2, 2);
  EXPECT_EQ(count_points(hermitian_cone(f4, 3)), 4u * 45u + 1u);
  EXPECT_EQ(count_points(hermitian_cone(f4, 3)), th(3, 3, 4));
  EXPECT_EQ(count_points(hermitian_cone(f4, 4)), 16u * 45u + 5u);
  EXPECT_EQ(count_points(hermitian_cone(f4, 4)), th(4, 3, 4));
  EXPECT_EQ(code_of([&] { hermitian_cone(get_field(2, 3), 3); }), errc::not_a_square);
  EXPECT_EQ(code_of([&] { hermitian_cone(f4, 2); }), errc::unsupported_dimension);
}

TEST(QuadricPencil, HyperbolicExample) {
  for (auto [p, s] : std::vector<std::pair<unsigned, unsigned>>{{2, 1}, {3, 1}, {5, 1}, {2, 2}}) {
    auto f = get_field(p, s);
    auto qp = quadric_pencil({0, 0, 0, 1}, {0, 0, f->neg(1), 0}, f);
    EXPECT_FALSE(qp.singular_by_det());
    EXPECT_FALSE(qp.reducible());
    const std::uint64_t q = f->order();
    EXPECT_EQ(count_points(qp.surface), (q + 1) * (q + 1));
    EXPECT_TRUE(singular_points(qp.surface, 2).empty());
  }
}

TEST(QuadricPencil, P4OverF3) {
  auto f3 = get_field(3, 1);
  auto qp = quadric_pencil({0, 0, 1, 0, 0}, {0, 0, 0, 1, 0}, f3);  // X0X2 + X1X3
  EXPECT_EQ(count_points(qp.surface), 49u);
  EXPECT_EQ(count_points(qp.surface), th(3, 2, 3));
  EXPECT_TRUE(qp.singular_by_det());
  EXPECT_FALSE(singular_points(qp.surface, 1).empty());
}

TEST(QuadricPencil, ReducibleAndZero) {
  auto f3 = get_field(3, 1);
  auto sq = quadric_pencil({1, 0, 0, 0}, {0, 0, 0, 0}, f3);
  EXPECT_EQ(render(sq.surface.poly()), "x0^2");
  EXPECT_TRUE(sq.reducible());
  EXPECT_EQ(sq.components, (std::vector<LinearForm>{{1, 0, 0, 0}}));
  EXPECT_EQ(code_of([&] { quadric_pencil({0, 1, 0, 0}, {2, 0, 0, 0}, f3); }), errc::zero_form);
  EXPECT_EQ(code_of([&] { quadric_pencil({0, 1, 0}, {2, 0, 0}, f3); }), errc::unsupported_dimension);
}

// det of the bordered matrix decides singularity at n = 2 (checked against the
// singular locus over F_q and F_{q^2}); for n >= 3 a rational singular point
// always exists.
TEST(QuadricPencil, DeterminantCriterion) {
  Rng rng(205);
  int trials = 0;
  for (auto [p, s] : std::vector<std::pair<unsigned, unsigned>>{{3, 1}, {2, 1}, {2, 2}, {5, 1}}) {
    auto f = get_field(p, s);
    for (int i = 0; i < 50; ++i) {
      std::vector<Elem> a(4), b(4);
      for (auto& c : a) c = static_cast<Elem>(uniform_below(rng, f->order()));
      for (auto& c : b) c = static_cast<Elem>(uniform_below(rng, f->order()));
      QuadricPencil qp = [&] {
        try {
          return quadric_pencil(a, b, f);
        } catch (const error&) {
          return quadric_pencil({0, 0, 1, 0}, {0, 0, 0, 1}, f);
        }
      }();
      EXPECT_EQ(qp.singular_by_det(), !singular_points(qp.surface, 2).empty()) << render(qp.surface.poly());
      ++trials;
    }
    for (int i = 0; i < 10; ++i) {
      std::vector<Elem> a(5), b(5);
      for (auto& c : a) c = static_cast<Elem>(uniform_below(rng, f->order()));
      for (auto& c : b) c = static_cast<Elem>(uniform_below(rng, f->order()));
      if (MultiPoly::variable(f, 5, 0) * MultiPoly::linear(f, a) + MultiPoly::variable(f, 5, 1) * MultiPoly::linear(f, b) ==
          MultiPoly(f, 5))
        continue;
      auto qp = quadric_pencil(a, b, f);
      EXPECT_TRUE(qp.singular_by_det());
      EXPECT_GT(singular_points(qp.surface, 1).rational_count(), 0u);
    }
  }
  EXPECT_EQ(trials, 200);
}

TEST(PencilUnion, Examples) {
  auto f3 = get_field(3, 1);
  auto two = hyperplane_pencil_union({{1, 0, 0, 0}, {0, 1, 0, 0}}, f3);
  EXPECT_EQ(count_points(two), 22u);
  EXPECT_EQ(serre_bound(2, 2, 3), 22);
  auto three = hyperplane_pencil_union({{1, 0, 0, 0}, {0, 1, 0, 0}, {1, 1, 0, 0}}, f3);
  EXPECT_EQ(count_points(three), 31u);
  EXPECT_EQ(code_of([&] { hyperplane_pencil_union({{1, 0, 0, 0}, {0, 1, 0, 0}, {0, 0, 1, 0}}, f3); }), errc::not_a_pencil);
  EXPECT_EQ(code_of([&] { hyperplane_pencil_union({{1, 0, 0, 0}, {2, 0, 0, 0}}, f3); }), errc::repeated_form);
}

TEST(PencilUnion, AchievesSerre) {
  for (auto [p, s] : std::vector<std::pair<unsigned, unsigned>>{{2, 1}, {3, 1}, {2, 2}}) {
    auto f = get_field(p, s);
    const unsigned q = f->order();
    // the pencil through X0 = X1 = 0: X1 and X0 + t X1
    std::vector<LinearForm> all{{0, 1, 0, 0}};
    for (Elem t = 0; t < q; ++t) all.push_back({1, t, 0, 0});
    for (unsigned d = 2; d <= q + 1; ++d) {
      auto x = hyperplane_pencil_union({all.begin(), all.begin() + d}, f);
      EXPECT_EQ(x.degree(), d);
      if (d <= q) EXPECT_EQ(BigInt(count_points(x)), serre_bound(2, d, q));
      else EXPECT_EQ(count_points(x), proj_point_count(q, 3));
    }
  }
}

TEST(Gamma, Curve) {
  auto g = gamma_curve(get_field(2, 2));
  EXPECT_EQ(count_points(g), 14u);
  EXPECT_EQ(sziklai_bound(4, 4), 14);
  EXPECT_TRUE(linear_components(g).empty());
  EXPECT_EQ(g.poly().terms().size(), 9u);
  EXPECT_EQ(code_of([] { gamma_curve(get_field(2, 1)); }), errc::wrong_field);
}

TEST(Corollary, SurfacesOverF4AndF3) {
  auto c4 = corollary_surfaces(get_field(2, 2));
  ASSERT_TRUE(c4.hermitian);
  EXPECT_EQ(count_points(c4.space_filling), 85u);
  EXPECT_EQ(count_points(*c4.hermitian), 45u);
  EXPECT_EQ(count_points(c4.hyperbolic), 25u);
  auto c3 = corollary_surfaces(get_field(3, 1));
  EXPECT_FALSE(c3.hermitian);
  EXPECT_NE(c3.notice.find("NotASquare"), std::string::npos);
  EXPECT_EQ(count_points(c3.space_filling), 40u);
  EXPECT_EQ(count_points(c3.hyperbolic), 16u);
}

TEST(Corollary, NonsingularExtremalAndComponentFree) {
  for (auto [p, s] : std::vector<std::pair<unsigned, unsigned>>{{2, 1}, {3, 1}, {2, 2}}) {
    auto f = get_field(p, s);
    auto c = corollary_surfaces(f);
    std::vector<Hypersurface> xs{c.space_filling, c.hyperbolic};
    if (c.hermitian) xs.push_back(*c.hermitian);
    for (const auto& x : xs) {
      EXPECT_TRUE(linear_components(x).empty()) << render(x.poly());
      EXPECT_TRUE(singular_points(x, 2).empty()) << render(x.poly());
      EXPECT_EQ(count_points(x), th(2, x.degree(), f->order()));
    }
  }
}
