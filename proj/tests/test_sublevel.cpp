#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "rlab/builtins.hpp"
#include "rlab/quadrature.hpp"
#include "rlab/sublevel.hpp"

using namespace rlab;

namespace {
constexpr double kPi = 3.14159265358979323846;
}

TEST_CASE("monte carlo volume hits closed-form lengths and areas") {
  const SurfacePatch parab = make_builtin_surface("parabola");
  const VolumeEstimate v1 = volume_mc(parab, 0.25, 1000000, 11);
  // {x^2 <= 1/4} has length 1
  CHECK(std::abs(v1.value - 1.0) < 3.0 * v1.stderr_value + 1e-9);

  const SurfacePatch parab3 = make_builtin_surface("paraboloid");
  const VolumeEstimate v2 = volume_mc(parab3, 0.25, 1000000, 11);
  // disk of radius 1/2
  CHECK(std::abs(v2.value - kPi / 4.0) < 3.0 * v2.stderr_value);

  CHECK_THROWS_AS(volume_mc(parab, 0.25, 999, 1), ValidationError);
  CHECK_THROWS_AS(volume_mc(parab, -0.1, 10000, 1), ValidationError);
}

TEST_CASE("monte carlo estimates are seed-deterministic") {
  const SurfacePatch s = make_builtin_surface("mixed");
  const VolumeEstimate a = volume_mc(s, 0.1, 200000, 99);
  const VolumeEstimate b = volume_mc(s, 0.1, 200000, 99);
  CHECK(a.value == b.value);
  const VolumeEstimate c = volume_mc(s, 0.1, 200000, 100);
  CHECK(a.value != c.value);
}

TEST_CASE("grid bracket encloses the truth and saturates to |K|") {
  const SurfacePatch parab = make_builtin_surface("parabola");
  const VolumeEstimate g1 = volume_grid(parab, 0.25, 4096);
  CHECK(g1.lower <= 1.0);
  CHECK(g1.upper >= 1.0);
  CHECK(g1.upper - g1.lower < 1e-3);

  const SurfacePatch disk = make_builtin_surface("paraboloid");
  const VolumeEstimate g2 = volume_grid(disk, 0.25, 1024);
  CHECK(g2.lower <= kPi / 4.0);
  CHECK(g2.upper >= kPi / 4.0);

  // delta above max Phi on K: the bracket collapses to |K| exactly
  const VolumeEstimate g3 = volume_grid(parab, 2.0, 64);
  CHECK(g3.lower == doctest::Approx(2.0).epsilon(1e-14));
  CHECK(g3.upper == doctest::Approx(2.0).epsilon(1e-14));

  CHECK_THROWS_AS(volume_grid(parab, 0.25, 15), ValidationError);
  CHECK_THROWS_AS(volume_grid(disk, 0.25, 2048), ValidationError);  // 2^22 cells
}

TEST_CASE("polar volumes reproduce closed forms") {
  const MixedHomogeneousPoly parab = builtin_poly("parabola");
  for (double delta : {0.25, 0.01, 1e-4}) {
    const VolumeEstimate v = volume_polar_exact(parab, delta);
    CHECK(v.value ==
          doctest::Approx(2.0 * std::sqrt(delta)).epsilon(1e-6));
  }
  const MixedHomogeneousPoly disk = builtin_poly("paraboloid");
  for (double delta : {0.5, 0.03125}) {
    const VolumeEstimate v = volume_polar_exact(disk, delta);
    CHECK(v.value == doctest::Approx(kPi * delta).epsilon(1e-6));
  }
}

TEST_CASE("polar volume matches monte carlo for the anisotropic model") {
  const SurfacePatch s = make_builtin_surface("mixed");
  for (int k = 4; k <= 10; k += 2) {
    const double delta = std::pow(2.0, -k);
    const VolumeEstimate mc = volume_mc(s, delta, 2000000, 17);
    const VolumeEstimate po = volume_polar_exact(s.q(), delta);
    INFO("delta = ", delta);
    CHECK(std::abs(mc.value - po.value) < 3.0 * mc.stderr_value);
  }
}

TEST_CASE("polar volumes scale exactly under the dilation group") {
  const MixedHomogeneousPoly q = builtin_poly("quartic-quartic");
  const double v1 = volume_polar_exact(q, 1.0).value;
  for (double delta : {0.5, 0.01, 1e-5}) {
    const double v = volume_polar_exact(q, delta).value;
    CHECK(v / v1 ==
          doctest::Approx(std::pow(delta, 0.5)).epsilon(1e-12));
  }
}

TEST_CASE("exponent fit recovers exact power laws to near machine precision") {
  std::vector<std::pair<double, VolumeEstimate>> pts;
  for (int k = 2; k <= 12; ++k) {
    VolumeEstimate e;
    e.value = 3.7 * std::pow(std::pow(2.0, -k), 0.625);
    pts.emplace_back(std::pow(2.0, -k), e);
  }
  const ExponentFit fit = fit_growth_exponent(pts);
  CHECK(fit.slope == doctest::Approx(0.625).epsilon(1e-9));
  CHECK(fit.r2 == doctest::Approx(1.0).epsilon(1e-12));

  pts.resize(3);
  CHECK_THROWS_AS(fit_growth_exponent(pts), ValidationError);
}

TEST_CASE("fitted growth exponents match (n-1)/m for 1-D builtins") {
  for (const char* name : {"parabola", "quartic-curve"}) {
    const SurfacePatch s = make_builtin_surface(name);
    std::vector<std::pair<double, VolumeEstimate>> pts;
    for (int k = 2; k <= 12; ++k)
      pts.emplace_back(std::pow(2.0, -k),
                       volume_polar_exact(s.q(), std::pow(2.0, -k)));
    const ExponentFit fit = fit_growth_exponent(pts);
    INFO(name);
    CHECK(std::abs(fit.slope - s.weights().r_vol) < 0.005);
  }
}

TEST_CASE("covering boxes scale vertexwise with the dilation") {
  const MixedHomogeneousPoly q = builtin_poly("mixed");
  const Polytope p1 = build_P_delta(q, 1.0, 1.1);
  const double delta = std::pow(2.0, -7);
  const Polytope pd = build_P_delta(q, delta, 1.1);
  REQUIRE(p1.vertex_count() == pd.vertex_count());
  for (std::size_t i = 0; i < p1.vertex_count(); ++i) {
    const Vec scaled = dilate(p1.vertices()[i], delta, q.weights());
    for (int j = 0; j < 2; ++j)
      CHECK(std::abs(scaled[j] - pd.vertices()[i][j]) < 1e-12);
  }
  // |P_delta| = |P_1| delta^{(n-1)/m}
  CHECK(pd.volume() ==
        doctest::Approx(p1.volume() * std::pow(delta, 0.75)).epsilon(1e-12));
}

TEST_CASE("unit covering box for the anisotropic model is [-c,c]^2") {
  const MixedHomogeneousPoly q = builtin_poly("mixed");
  const Polytope p = build_P_delta(q, 1.0, 1.25);
  CHECK(p.box_hi()[0] == doctest::Approx(1.25).epsilon(1e-6));
  CHECK(p.box_hi()[1] == doctest::Approx(1.25).epsilon(1e-6));
  CHECK_THROWS_AS(build_P_delta(q, 0.0, 1.1), ValidationError);
  CHECK_THROWS_AS(build_P_delta(q, 0.5, -1.0), ValidationError);
}

TEST_CASE("containment oracle accepts covering boxes and catches undersized ones") {
  const SurfacePatch parab = make_builtin_surface("parabola");
  const double delta = std::pow(2.0, -8);
  const Polytope good = build_P_delta(parab.q(), delta, 1.1);
  const ContainmentReport ok =
      check_containment(parab, delta, good, 200000, 5);
  CHECK(ok.pass);
  CHECK(ok.violations == 0);
  CHECK(ok.ratio == doctest::Approx(1.1).epsilon(0.05));

  const Polytope bad = build_P_delta(parab.q(), delta, 0.5);
  const ContainmentReport fail =
      check_containment(parab, delta, bad, 200000, 5);
  CHECK_FALSE(fail.pass);
  CHECK(fail.violations > 0);
}

TEST_CASE("covering ratio is delta-stable for the anisotropic model") {
  const SurfacePatch s = make_builtin_surface("mixed");
  std::vector<double> ratios;
  for (int k = 2; k <= 10; k += 4) {
    const double delta = std::pow(2.0, -k);
    const Polytope p = build_P_delta(s.q(), delta, 1.2);
    ratios.push_back(check_containment(s, delta, p, 400000, 21).ratio);
  }
  for (double r : ratios)
    CHECK(std::abs(r - ratios.front()) / ratios.front() < 0.02);
}

TEST_CASE("staircase demo: closed forms, divergence, and descent agreement") {
  // region area at delta = 1/e is 8/e
  CHECK(hyperbola_region_area(std::exp(-1.0)) ==
        doctest::Approx(8.0 * std::exp(-1.0)).epsilon(1e-14));

  // independent numeric check of the region area
  for (double delta : {1e-2, 1e-4}) {
    const double numeric =
        4.0 * (delta + adaptive_simpson(
                           [delta](double x) { return delta / x; }, delta,
                           1.0, 1e-12));
    CHECK(hyperbola_region_area(delta) ==
          doctest::Approx(numeric).epsilon(1e-10));
  }

  const auto rows = hyperbola_demo({1e-2, 1e-4, 1e-6}, 4);
  REQUIRE(rows.size() == 3);
  CHECK(rows[0].ratio < rows[1].ratio);
  CHECK(rows[1].ratio < rows[2].ratio);
  for (const auto& r : rows) CHECK(r.descent_gap < 1e-9);

  // at fixed delta the ratio decreases in k toward 1
  double prev = 1e100;
  for (int k : {2, 4, 8, 16, 32, 64}) {
    const double ratio =
        hyperbola_cover_area(1e-3, k) / hyperbola_region_area(1e-3);
    CHECK(ratio < prev);
    prev = ratio;
  }
  CHECK(prev < 1.05);
  CHECK(prev > 1.0);

  CHECK_THROWS_AS(hyperbola_demo({0.5}, 1), ValidationError);
  CHECK_THROWS_AS(hyperbola_demo({1.5}, 4), ValidationError);
}

TEST_CASE("tangent ball membership follows the graph height") {
  const SurfacePatch s = make_builtin_surface("parabola");
  const TangentBall ball(s, 0.25);
  CHECK(ball.contains({0.4}));
  CHECK_FALSE(ball.contains({0.6}));
  CHECK_FALSE(ball.contains({1.4}));  // outside K
  CHECK_THROWS_AS(TangentBall(s, 0.0), ValidationError);
}
