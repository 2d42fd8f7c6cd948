#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "rlab/builtins.hpp"
#include "rlab/surface.hpp"

using namespace rlab;

TEST_CASE("weight systems derive the homogeneity degree exactly") {
  const WeightSystem w = make_weights({2, 4});
  CHECK(w.m == Rational(8, 3));  // (n-1)/m = 1/2 + 1/4 = 3/4
  CHECK(w.r_vol == doctest::Approx(0.75).epsilon(1e-15));
  CHECK(w.graph_dim() == 2);
  CHECK(w.ambient_dim() == 3);

  const WeightSystem iso = make_weights({2, 2});
  CHECK(iso.m == Rational(2));
  CHECK(iso.r_vol == doctest::Approx(1.0));

  CHECK_THROWS_AS(make_weights({}), ValidationError);
  CHECK_THROWS_AS(make_weights({2, 0}), ValidationError);
  CHECK_THROWS_AS(make_weights({-3}), ValidationError);
}

TEST_CASE("dilation acts with exponents 1/a_j") {
  const WeightSystem w = make_weights({2, 4});
  const Vec y = dilate({1.0, 1.0}, 16.0, w);
  CHECK(y[0] == doctest::Approx(4.0).epsilon(1e-15));
  CHECK(y[1] == doctest::Approx(2.0).epsilon(1e-15));
  CHECK_THROWS_AS(dilate({1.0, 1.0}, 0.0, w), ValidationError);
  CHECK_THROWS_AS(dilate({1.0}, 2.0, w), ValidationError);
}

TEST_CASE("monomial exponents must satisfy the weighted-degree identity") {
  const WeightSystem w = make_weights({2, 4});
  // x1^2 and x2^4 are admissible; x1^2 x2^2 is not (1 + 1/2 != 1)
  CHECK_NOTHROW(MixedHomogeneousPoly({{{2, 0}, 1.0}, {{0, 4}, 1.0}}, w));
  CHECK_THROWS_AS(MixedHomogeneousPoly({{{2, 2}, 1.0}}, w),
                  ConstructionError);
  CHECK_THROWS_AS(MixedHomogeneousPoly({}, w), ConstructionError);
}

TEST_CASE("positivity on the sphere is enforced at construction") {
  // x1 * x2 vanishes on the axes and changes sign
  CHECK_THROWS_AS(builtin_poly("saddle"), ConstructionError);
  CHECK_THROWS_AS(
      MixedHomogeneousPoly({{{2, 0}, 1.0}, {{0, 2}, -1.0}},
                           make_weights({2, 2})),
      ConstructionError);
}

TEST_CASE("sampled scaling identity holds for every constructible builtin") {
  for (const char* name :
       {"parabola", "quartic-curve", "paraboloid", "mixed",
        "quartic-quartic"}) {
    const MixedHomogeneousPoly q = builtin_poly(name);
    const HomogeneityReport rep = check_mixed_homogeneity(q, 500, 42);
    INFO(name);
    CHECK(rep.pass);
    CHECK(rep.max_rel_err < 1e-10);
  }
}

TEST_CASE("gradient matches central differences") {
  const MixedHomogeneousPoly q = builtin_poly("mixed");
  const Vec x{0.37, -0.54};
  const Vec g = q.gradient(x);
  const double h = 1e-6;
  CHECK(g[0] ==
        doctest::Approx((q({x[0] + h, x[1]}) - q({x[0] - h, x[1]})) / (2 * h))
            .epsilon(1e-7));
  CHECK(g[1] ==
        doctest::Approx((q({x[0], x[1] + h}) - q({x[0], x[1] - h})) / (2 * h))
            .epsilon(1e-7));
}

TEST_CASE("remainder smallness certificate accepts admissible perturbations") {
  const WeightSystem w = make_weights({2});
  const Remainder good = builtin_remainder("cubic_perturbation", w);
  const auto cert = good.certificate(w, {1.0, 0.1, 0.01, 1e-3, 1e-4});
  CHECK(Remainder::certificate_ok(cert));

  // |y|^{1/2} scales like t^{1/4} against the t^1 of Q: blows up relative
  // to the dilation and must be rejected
  const Remainder bad([](const Vec& y) {
    return std::sqrt(std::abs(y[0]));
  });
  const auto bad_cert = bad.certificate(w, {1.0, 0.1, 0.01, 1e-3, 1e-4});
  CHECK_FALSE(Remainder::certificate_ok(bad_cert));
}

TEST_CASE("remainder numeric gradient is used when no analytic one exists") {
  const Remainder r([](const Vec& y) { return y[0] * y[0] * y[0]; });
  const Vec g = r.gradient({0.5});
  CHECK(g[0] == doctest::Approx(0.75).epsilon(1e-6));
}

TEST_CASE("cutoff profile is a monotone bump with exact plateaus") {
  const CutoffProfile psi{0.5, 0.9};
  CHECK(psi(0.0) == 1.0);
  CHECK(psi(0.5) == 1.0);
  CHECK(psi(0.9) == 0.0);
  CHECK(psi(2.0) == 0.0);
  double prev = 1.0;
  for (int i = 0; i <= 100; ++i) {
    const double v = psi(0.5 + 0.4 * i / 100.0);
    CHECK(v <= prev + 1e-15);
    prev = v;
  }
  // approximate C^1 continuity at the seams
  const double h = 1e-6;
  CHECK(std::abs((psi(0.5 + h) - psi(0.5 - h)) / (2 * h)) < 1e-4);
  CHECK(std::abs((psi(0.9 + h) - psi(0.9 - h)) / (2 * h)) < 1e-4);
}

TEST_CASE("surface patches validate the origin normalization") {
  const SurfacePatch s = make_builtin_surface("parabola");
  CHECK(s.phi({0.0}) == doctest::Approx(0.0));
  CHECK(s.phi_gradient({0.0})[0] == doctest::Approx(0.0));
  CHECK(s.phi({0.5}) == doctest::Approx(0.25));
  // sqrt(1 + (2y)^2) at y = 0.5
  CHECK(s.measure_weight({0.5}) == doctest::Approx(std::sqrt(2.0)));
  CHECK_THROWS_AS(s.eval({1.5}), DomainError);

  const SurfacePatch shifted = make_builtin_surface("parabola", 1.0, 0.5, 0.9,
                                                    /*offset=*/3.0);
  CHECK(shifted.phi({0.0}) == doctest::Approx(3.0));
  CHECK(shifted.phi_rel({0.0}) == doctest::Approx(0.0));
}

TEST_CASE("patch construction rejects bad cutoff and halfwidth") {
  MixedHomogeneousPoly q = builtin_poly("parabola");
  CHECK_THROWS_AS(SurfacePatch(q, Remainder(), 0.0, -1.0, CutoffProfile{}),
                  ValidationError);
  CHECK_THROWS_AS(
      SurfacePatch(q, Remainder(), 0.0, 1.0, CutoffProfile{0.9, 0.5}),
      ValidationError);
}

TEST_CASE("gradient bound dominates sampled gradients on the cutoff support") {
  const SurfacePatch s = make_builtin_surface("mixed");
  const double b0 = s.gradient_bound(0);
  const double b1 = s.gradient_bound(1);
  for (double y0 : {-0.8, -0.3, 0.0, 0.4, 0.85})
    for (double y1 : {-0.85, -0.2, 0.3, 0.8}) {
      const Vec g = s.phi_gradient({y0, y1});
      CHECK(std::abs(g[0]) <= b0);
      CHECK(std::abs(g[1]) <= b1);
    }
  CHECK_THROWS_AS(s.gradient_bound(2), ValidationError);
}

TEST_CASE("sphere samples are deterministic and unit-length") {
  const auto a = sphere_sample(3, 50, 7);
  const auto b = sphere_sample(3, 50, 7);
  REQUIRE(a.size() == 50);
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(a[i] == b[i]);
    CHECK(norm2(a[i]) == doctest::Approx(1.0).epsilon(1e-12));
  }
  const auto c = sphere_sample(3, 50, 8);
  CHECK(a[0] != c[0]);
}

TEST_CASE("builtin table lists six models with predicted exponents") {
  const auto& table = builtin_table();
  REQUIRE(table.size() == 6);
  int no_fpt = 0;
  for (const auto& row : table) {
    if (!row.finite_polyhedral_type) {
      ++no_fpt;
      CHECK(row.name == "saddle");
    } else {
      const WeightSystem w = make_weights(row.a);
      CHECK(row.r_predicted == doctest::Approx(w.r_vol).epsilon(1e-15));
    }
  }
  CHECK(no_fpt == 1);
}
