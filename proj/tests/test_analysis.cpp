#include <gtest/gtest.h>

#include <algorithm>
#include <set>

#include "hkb/analysis.hpp"
#include "hkb/constructions.hpp"
#include "test_support.hpp"

using namespace hkb;
using hkb::testing::random_form;

namespace {

// Embed a form in more variables; the extra coordinates form a vertex.
MultiPoly pad(const MultiPoly& f, std::size_t nvars) {
  std::vector<Term> ts;
  for (auto t : f.terms()) {
    t.exps.resize(nvars, 0);
    ts.push_back(t);
  }
  return MultiPoly::from_terms(f.field_ptr(), nvars, ts);
}

bool has_point(const std::vector<Coords>& pts, const Coords& p) { return std::find(pts.begin(), pts.end(), p) != pts.end(); }

}  // namespace

TEST(Singular, HermitianSurfaceIsSmoothThroughF16) {
  auto rep = singular_points(hermitian(get_field(2, 2)), 2);
  EXPECT_EQ(rep.tested_extensions, (std::vector<unsigned>{1, 2}));
  EXPECT_TRUE(rep.empty());
  EXPECT_FALSE(rep.gradient_identically_zero);
}

TEST(Singular, HermitianConeVertex) {
  auto rep = singular_points(hermitian_cone(get_field(2, 2), 3), 1);
  EXPECT_TRUE(has_point(rep.points[0], Coords{0, 0, 0, 0, 1}));
  EXPECT_EQ(rep.rational_count(), 1u);
}

TEST(Singular, PthPowerForm) {
  auto rep = singular_points(parse_hypersurface("x0^2", get_field(2, 1), 3), 1);
  EXPECT_TRUE(rep.gradient_identically_zero);
  ASSERT_TRUE(rep.pth_root);
  EXPECT_EQ(render(*rep.pth_root), "x0");
  EXPECT_EQ(rep.rational_count(), 3u);  // the whole line X0 = 0
}

TEST(Singular, QuadricConeOverF3) {
  auto rep = singular_points(parse_hypersurface("x0*x1 - x2^2", get_field(3, 1), 4), 2);
  EXPECT_EQ(rep.points[0], (std::vector<Coords>{{0, 0, 0, 1}}));
  EXPECT_EQ(rep.points[1].size(), 1u);
}

TEST(Singular, MatchesBruteForceOnRandomForms) {
  Rng rng(101);
  for (int trial = 0; trial < 30; ++trial) {
    auto f = get_field(trial % 2 ? 3 : 2, 1);
    auto g = random_form(f, 4, 2 + static_cast<unsigned>(trial % 3), rng);
    auto rep = singular_points(Hypersurface(g), 1);
    std::vector<Coords> brute;
    for (const auto& p : enum_points(f, 3)) {
      bool sing = g.evaluate(p) == 0;
      for (std::size_t i = 0; i < 4 && sing; ++i) sing = partial_derivative(g, i).evaluate(p) == 0;
      if (sing) brute.push_back(p);
    }
    EXPECT_EQ(rep.points[0], brute);
  }
}

TEST(LinearComponents, Examples) {
  EXPECT_TRUE(linear_components(parse_hypersurface("x0*x1 - x2*x3", get_field(2, 1))).empty());
  EXPECT_TRUE(linear_components(gamma_curve(get_field(2, 2))).empty());
  auto f3 = get_field(3, 1);
  auto x = parse_hypersurface("x0^2*x1 + x0*x1^2", f3, 4);  // X0 X1 (X0 + X1)
  auto comps = linear_components(x);
  std::set<LinearForm> got(comps.begin(), comps.end());
  EXPECT_EQ(got, (std::set<LinearForm>{{1, 0, 0, 0}, {0, 1, 0, 0}, {1, 1, 0, 0}}));
  EXPECT_EQ(comps.size(), 3u);
}

// Oracle without the zero-set prefilter: divides_linear on every dual point.
TEST(LinearComponents, AgreesWithUnfilteredScan) {
  Rng rng(103);
  for (int trial = 0; trial < 40; ++trial) {
    auto f = get_field(trial % 2 ? 3 : 2, trial % 5 == 0 ? 2 : 1);
    MultiPoly g = random_form(f, 4, 1 + static_cast<unsigned>(trial % 3), rng);
    if (trial % 2 == 0) g = g * random_form(f, 4, 1, rng);
    std::vector<LinearForm> brute;
    for (const auto& h : enum_points(f, 3))
      if (divides_linear(g, h)) brute.push_back(h);
    EXPECT_EQ(linear_components(g), brute);
    for (const auto& l : brute) {
      auto x = Hypersurface(g);
      EXPECT_TRUE(section(x, l).fully_contained());
      EXPECT_GE(count_points(x), proj_point_count(f->order(), 2));
    }
  }
}

TEST(SpaceFilling, Examples) {
  auto f3 = get_field(3, 1);
  auto a = corollary_surfaces(f3).space_filling;
  EXPECT_TRUE(is_space_filling(a));
  EXPECT_EQ(count_points(a), 40u);
  EXPECT_FALSE(is_space_filling(hyperbolic_quadric(f3)));
  AntisymmetricSpec one(2);
  one.set(0, 1, 1);
  EXPECT_TRUE(is_space_filling(space_filling(one, get_field(2, 1))));
}

TEST(Cone, HermitianCone) {
  auto f4 = get_field(2, 2);
  auto rep = cone_analysis(hermitian_cone(f4, 3));
  EXPECT_EQ(rep.vertex_dimension(), 0);
  EXPECT_EQ(rep.vertex.points(), (std::vector<Coords>{{0, 0, 0, 0, 1}}));
  EXPECT_EQ(rep.base_ambient(), 3u);
  ASSERT_TRUE(rep.base());
  EXPECT_EQ(rep.base()->poly(), hermitian(f4).poly());

  auto rep2 = cone_analysis(hermitian_cone(f4, 4));
  EXPECT_EQ(rep2.vertex_dimension(), 1);
  EXPECT_EQ(rep2.base_ambient(), 3u);
}

TEST(Cone, NonConesHaveEmptyVertex) {
  EXPECT_TRUE(cone_analysis(hermitian(get_field(2, 2))).vertex.is_empty());
  EXPECT_TRUE(cone_analysis(hyperbolic_quadric(get_field(3, 1))).vertex.is_empty());
}

TEST(Cone, QuadricMissingLastVariable) {
  auto f3 = get_field(3, 1);
  auto x = parse_hypersurface("x0*x2 + x0^2 + x1*x3 + 2*x1*x0", f3, 5);
  auto rep = cone_analysis(x);
  EXPECT_TRUE(rep.vertex.contains(std::vector<Elem>{0, 0, 0, 0, 1}));
}

// count(cone) = q^{k+1} count(base) + |P^k|, and the vertex is projectively invariant.
TEST(Cone, CountFormulaOnRandomCones) {
  Rng rng(107);
  for (int trial = 0; trial < 20; ++trial) {
    auto f = get_field(trial % 2 ? 3 : 2, 1);
    const std::size_t base_vars = 3 + trial % 2;
    auto g = random_form(f, base_vars, 2 + static_cast<unsigned>(trial % 2), rng);
    auto x = Hypersurface(pad(g, 5));
    auto m = random_invertible(*f, 5, rng);
    auto xm = linear_change(x, m);
    for (const auto& y : {x, xm}) {
      auto rep = cone_analysis(y);
      ASSERT_GE(rep.vertex_dimension(), static_cast<int>(4 - base_vars));
      const unsigned k = static_cast<unsigned>(rep.vertex_dimension());
      const std::uint64_t base_count = rep.base() ? count_points(*rep.base()) : count_zeros(rep.base_form);
      EXPECT_EQ(count_points(y), ipow(f->order(), k + 1) * base_count + proj_point_count(f->order(), k));
      for (const auto& v : rep.vertex.points()) EXPECT_TRUE(detail::is_vertex_point(y.poly(), v));
    }
    EXPECT_EQ(cone_analysis(x).vertex_dimension(), cone_analysis(xm).vertex_dimension());
  }
}

TEST(Lines, CoveredSurfaces) {
  auto h = covered_by_lines(hermitian(get_field(2, 2)));
  EXPECT_TRUE(h.covered);
  EXPECT_EQ(h.witnesses.size(), 45u);
  for (auto q : {std::pair{2u, 1u}, {3u, 1u}, {2u, 2u}, {5u, 1u}}) {
    auto f = get_field(q.first, q.second);
    auto x = hyperbolic_quadric(f);
    auto cov = covered_by_lines(x);
    EXPECT_TRUE(cov.covered);
    for (const auto& [p, w] : cov.witnesses) {
      ASSERT_TRUE(w);
      for (Elem t = 0; t < f->order(); ++t) {
        Coords v(4);
        for (int i = 0; i < 4; ++i) v[i] = f->add(p[i], f->mul(t, (*w)[i]));
        EXPECT_EQ(x.poly().evaluate(v), 0u);
      }
    }
  }
}

TEST(Lines, UncoveredCubic) {
  auto f4 = get_field(2, 2);
  Rng rng(109);
  bool found = false;
  for (int trial = 0; trial < 200 && !found; ++trial) {
    auto x = Hypersurface(random_form(f4, 4, 3, rng));
    if (count_points(x) >= 45 || !linear_components(x).empty()) continue;
    auto cov = covered_by_lines(x);
    if (cov.covered) continue;
    found = true;
    ASSERT_TRUE(cov.first_uncovered);
    const Coords p = *cov.first_uncovered;
    EXPECT_EQ(x.poly().evaluate(p), 0u);
    // oracle: every line through p has a rational point off X
    for (const auto& r : lines_through(p, f4, 3)) {
      bool off = x.poly().evaluate(r) != 0;
      for (Elem t = 0; t < 4 && !off; ++t) {
        Coords v(4);
        for (int i = 0; i < 4; ++i) v[i] = f4->add(r[i], f4->mul(t, p[i]));
        off = x.poly().evaluate(v) != 0;
      }
      EXPECT_TRUE(off);
    }
  }
  EXPECT_TRUE(found);
}

TEST(Lines, OnlySurfaces) {
  try {
    covered_by_lines(gamma_curve(get_field(2, 2)));
    FAIL();
  } catch (const error& e) {
    EXPECT_EQ(e.code(), errc::ambient_not_supported);
  }
}

TEST(Spectrum, HyperbolicQuadricOverF2) {
  auto spec = section_spectrum(hyperbolic_quadric(get_field(2, 1)));
  EXPECT_EQ(spec, (std::map<std::uint64_t, std::uint64_t>{{3, 6}, {5, 9}}));
}

TEST(Spectrum, GammaLineSections) {
  auto spec = section_spectrum(gamma_curve(get_field(2, 2)));
  std::uint64_t lines = 0, incidences = 0;
  for (auto [c, m] : spec) {
    EXPECT_LE(c, 4u);
    lines += m;
    incidences += c * m;
  }
  EXPECT_EQ(lines, 21u);
  EXPECT_EQ(incidences, 14u * 5u);  // each point on q+1 lines
}

TEST(Spectrum, AgreesWithSectionAndIsInvariant) {
  Rng rng(113);
  for (int trial = 0; trial < 10; ++trial) {
    auto f = get_field(trial % 2 ? 3 : 2, 1);
    auto x = Hypersurface(random_form(f, 4, 2 + static_cast<unsigned>(trial % 2), rng));
    auto counts = section_counts(x);
    auto hs = enum_points(f, 3);
    for (std::size_t i = 0; i < hs.size(); ++i) {
      auto sec = section(x, hs[i]);
      EXPECT_EQ(counts[i], sec.fully_contained() ? proj_point_count(f->order(), 2) : count_points(*sec.curve));
    }
    EXPECT_EQ(section_spectrum(x), section_spectrum(linear_change(x, random_invertible(*f, 4, rng))));
  }
}
