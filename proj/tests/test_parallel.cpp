#include <doctest.h>

#include <omp.h>

#include <cmath>

#include "imexllg/dynamics.hpp"
#include "imexllg/parallel.hpp"
#include "imexllg/reference.hpp"
#include "support.hpp"

using namespace llg;

// The 3-D grid is above the parallel threshold, so the OpenMP paths run.
namespace {

struct ThreadScope {
  int saved = omp_get_max_threads();
  explicit ThreadScope(int n) { omp_set_num_threads(n); }
  ~ThreadScope() { omp_set_num_threads(saved); }
};

}  // namespace

TEST_CASE("parallel kernels agree with the serial reference") {
  REQUIRE(GridSpec(3, 20).interior_size() >= parallel::kMinParallelCells);
  for (int threads : {1, 2, 4}) {
    ThreadScope scope(threads);
    for (int dim : {1, 3}) {
      const GridSpec g(dim, dim == 1 ? 5000 : 20);
      const VectorField a = testing::random_field(g, 1);
      const VectorField b = testing::random_field(g, 2);

      VectorField lap_ref(g);
      reference::laplacian(a, lap_ref);
      const VectorField lap = laplacian(a);
      CHECK(testing::max_interior_diff(lap, lap_ref) <= 1e-12 * testing::max_interior_abs(lap_ref));

      const ScalarField gs = avg_gradient_sq(a);
      const ScalarField gs_ref = reference::avg_gradient_sq(a);
      double worst = 0.0;
      for (std::size_t p = 0; p < gs.values().size(); ++p) {
        worst = std::max(worst, std::abs(gs.values()[p] - gs_ref.values()[p]) /
                                    std::max(1.0, std::abs(gs_ref.values()[p])));
      }
      CHECK(worst <= 1e-13);

      CHECK(inner(a, b) == doctest::Approx(reference::inner(a, b)).epsilon(1e-12));
      CHECK(grad_inner(a, b) == doctest::Approx(reference::grad_inner(a, b)).epsilon(1e-12));
      const Norms n = norms(a);
      const Norms r = reference::norms(a);
      CHECK(n.l2 == doctest::Approx(r.l2).epsilon(1e-13));
      CHECK(n.linf == r.linf);
      CHECK(n.h1 == doctest::Approx(r.h1).epsilon(1e-13));

      const VectorField m = testing::random_unit_field(g, 3);
      for (Variant v : {Variant::FullLL, Variant::DampingOnly, Variant::PureDiffusion}) {
        ModelConfig cfg;
        cfg.variant = v;
        cfg.field = [](double t, const Vec3& x) { return Vec3{x[0], t, 1.0}; };
        cfg.source = [](double t, const Vec3& x) { return Vec3{0.0, x[0] * t, -1.0}; };
        const VectorField fast = nonlinear_part(cfg, m, 0.5);
        VectorField slow(g);
        reference::nonlinear_part(cfg, m, 0.5, slow);
        CHECK(testing::max_interior_diff(fast, slow) <=
              1e-12 * std::max(1.0, testing::max_interior_abs(slow)));
      }
    }
  }
}

TEST_CASE("reductions do not depend on the thread count") {
  const GridSpec g(3, 24);
  const VectorField a = testing::random_field(g, 9);
  const VectorField b = testing::random_field(g, 10);
  double base_inner = 0.0, base_grad = 0.0;
  {
    ThreadScope scope(1);
    base_inner = inner(a, b);
    base_grad = grad_inner(a, b);
  }
  for (int threads : {2, 3, 4}) {
    ThreadScope scope(threads);
    CHECK(inner(a, b) == base_inner);
    CHECK(grad_inner(a, b) == base_grad);
  }
}

TEST_CASE("thread cap from the environment") {
  const int saved = omp_get_max_threads();
  setenv("LLG_THREADS", "2", 1);
  parallel::configure_from_env();
  CHECK(parallel::max_threads() == 2);
  unsetenv("LLG_THREADS");
  omp_set_num_threads(saved);
}
