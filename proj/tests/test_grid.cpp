#include <doctest.h>

#include <cmath>
#include <sstream>

#include "imexllg/error.hpp"
#include "imexllg/grid.hpp"
#include "support.hpp"

using namespace llg;

TEST_CASE("grid spec validates dimension and size") {
  CHECK_THROWS_AS(GridSpec(2, 8), DimensionError);
  CHECK_THROWS_AS(GridSpec(1, 1), DimensionError);
  const GridSpec g(3, 4);
  CHECK(g.h() == doctest::Approx(0.25));
  CHECK(g.interior_size() == 64);
  CHECK(g.padded_size() == 216);
  CHECK(g.line_count() == 16);
  const Vec3 x = g.center(1, 2, 4);
  CHECK(x[0] == doctest::Approx(0.125));
  CHECK(x[1] == doctest::Approx(0.375));
  CHECK(x[2] == doctest::Approx(0.875));
  const GridSpec line(1, 5);
  CHECK(line.center(5)[0] == doctest::Approx(0.9));
  CHECK(line.center(5)[1] == 0.0);
}

TEST_CASE("ghost fill mirrors the neighbouring interior cell, corners included") {
  const GridSpec g(3, 3);
  VectorField f = testing::random_field(g, 7);
  const int n = g.n();
  for (int c = 0; c < 3; ++c) {
    // every ghost equals the value at the index clamped into 1..n
    for (int k = 0; k <= n + 1; ++k)
      for (int j = 0; j <= n + 1; ++j)
        for (int i = 0; i <= n + 1; ++i) {
          auto clamp = [n](int v) { return v < 1 ? 1 : (v > n ? n : v); };
          CHECK(f(c, i, j, k) == f(c, clamp(i), clamp(j), clamp(k)));
        }
  }
  const GridSpec g1(1, 4);
  VectorField f1 = testing::random_field(g1, 8);
  CHECK(f1(0, 0) == f1(0, 1));
  CHECK(f1(2, 5) == f1(2, 4));
}

TEST_CASE("laplacian of a quadratic is exact in the interior") {
  const GridSpec g(1, 10);
  const VectorField f = sample(g, [](const Vec3& x) { return Vec3{x[0] * x[0], 3.0, -x[0] * x[0]}; });
  const VectorField lap = laplacian(f);
  for (int i = 2; i <= 9; ++i) {
    CHECK(lap(0, i) == doctest::Approx(2.0).epsilon(1e-10));
    CHECK(lap(1, i) == 0.0);
    CHECK(lap(2, i) == doctest::Approx(-2.0).epsilon(1e-10));
  }
  // Boundary cell: the ghost copy drops the outer link.
  const double h = g.h();
  const double expected = (f(0, 2) - f(0, 1)) / (h * h);
  CHECK(lap(0, 1) == doctest::Approx(expected).epsilon(1e-12));
}

TEST_CASE("3-D laplacian agrees with a separable hand computation") {
  const GridSpec g(3, 6);
  const VectorField f = sample(g, [](const Vec3& x) {
    return Vec3{x[0] * x[0] + x[1] * x[1] + x[2] * x[2], x[0] * x[1], 1.0};
  });
  const VectorField lap = laplacian(f);
  for (int k = 2; k <= 5; ++k)
    for (int j = 2; j <= 5; ++j)
      for (int i = 2; i <= 5; ++i) {
        CHECK(lap(0, i, j, k) == doctest::Approx(6.0).epsilon(1e-9));
        CHECK(std::abs(lap(1, i, j, k)) < 1e-9);
        CHECK(lap(2, i, j, k) == 0.0);
      }
}

TEST_CASE("summation by parts holds to 1e-12") {
  for (int dim : {1, 3}) {
    for (int n : {3, 7, 12}) {
      const GridSpec g(dim, n);
      for (std::uint64_t seed = 0; seed < 5; ++seed) {
        const VectorField f = testing::random_field(g, 100 + seed);
        const VectorField v = testing::random_field(g, 200 + seed);
        VectorField lap = laplacian(f);
        lap.scale(-1.0);
        const double lhs = inner(lap, v);
        const double rhs = grad_inner(f, v);
        CHECK(std::abs(lhs - rhs) <= 1e-12 * std::max(1.0, std::abs(rhs)));
        // symmetric form: <-Lap f, f> = |grad f|^2 >= 0
        CHECK(grad_inner(f, f) >= 0.0);
      }
    }
  }
}

TEST_CASE("norms of constant and linear fields") {
  const GridSpec g(3, 5);
  const VectorField c(g, Vec3{3.0, -4.0, 0.0});
  const Norms nc = norms(c);
  CHECK(nc.l2 == doctest::Approx(5.0).epsilon(1e-14));
  CHECK(nc.linf == 4.0);
  CHECK(nc.h1 == doctest::Approx(5.0).epsilon(1e-14));

  // m = (x, 0, 0) in 1-D: forward differences are exactly 1 on n - 1 links.
  const GridSpec g1(1, 8);
  const VectorField lin = sample(g1, [](const Vec3& x) { return Vec3{x[0], 0.0, 0.0}; });
  const double grad_sq = grad_inner(lin, lin);
  CHECK(grad_sq == doctest::Approx(7.0 / 8.0).epsilon(1e-13));
  double l2sq = 0.0;
  for (int i = 1; i <= 8; ++i) l2sq += g1.h() * std::pow((i - 0.5) * g1.h(), 2);
  const Norms nl = norms(lin);
  CHECK(nl.l2 == doctest::Approx(std::sqrt(l2sq)).epsilon(1e-14));
  CHECK(nl.linf == doctest::Approx(7.5 / 8.0));
  CHECK(nl.h1 == doctest::Approx(std::sqrt(l2sq + 7.0 / 8.0)).epsilon(1e-14));
}

TEST_CASE("averaged gradient of a linear field") {
  const GridSpec g(1, 6);
  const VectorField lin = sample(g, [](const Vec3& x) { return Vec3{2.0 * x[0], -x[0], 0.0}; });
  const ScalarField gs = avg_gradient_sq(lin);
  for (int i = 2; i <= 5; ++i) CHECK(gs(i) == doctest::Approx(5.0).epsilon(1e-12));
  // One-sided at the wall: ghost copy halves the centered difference.
  CHECK(gs(1) == doctest::Approx(5.0 / 4.0).epsilon(1e-12));
}

TEST_CASE("inner product is symmetric and bilinear") {
  const GridSpec g(3, 4);
  const VectorField a = testing::random_field(g, 1);
  const VectorField b = testing::random_field(g, 2);
  CHECK(inner(a, b) == doctest::Approx(inner(b, a)).epsilon(1e-15));
  VectorField a2 = a;
  a2.scale(2.5);
  CHECK(inner(a2, b) == doctest::Approx(2.5 * inner(a, b)).epsilon(1e-14));
}

TEST_CASE("pointwise cross product and grid mismatch") {
  const GridSpec g(1, 4);
  const VectorField ex(g, Vec3{1.0, 0.0, 0.0});
  const VectorField ey(g, Vec3{0.0, 1.0, 0.0});
  const VectorField ez = cross(ex, ey);
  for (int i = 0; i <= 5; ++i) CHECK(ez.cell(i) == Vec3{0.0, 0.0, 1.0});
  CHECK_THROWS_AS(cross(ex, VectorField(GridSpec(1, 5))), DimensionError);
  CHECK_THROWS_AS(inner(ex, VectorField(GridSpec(3, 4))), DimensionError);
}

TEST_CASE("unit length drift and finiteness") {
  const GridSpec g(1, 6);
  VectorField m = testing::random_unit_field(g, 3);
  CHECK(unit_length_drift(m) < 1e-15);
  m(0, 3) += 0.5;
  CHECK(unit_length_drift(m) > 0.0);
  CHECK(m.all_finite());
  m(1, 2) = std::nan("");
  CHECK_FALSE(m.all_finite());
}

TEST_CASE("snapshot csv layout") {
  const GridSpec g(1, 2);
  const VectorField m(g, Vec3{0.0, 0.0, 1.0});
  std::ostringstream os;
  write_snapshot_csv(os, m);
  CHECK(os.str() == "i,x,m1,m2,m3\n1,0.25,0,0,1\n2,0.75,0,0,1\n");
  std::ostringstream os3;
  write_snapshot_csv(os3, VectorField(GridSpec(3, 2)));
  CHECK(os3.str().rfind("i,j,k,x,y,z,m1,m2,m3\n", 0) == 0);
}
