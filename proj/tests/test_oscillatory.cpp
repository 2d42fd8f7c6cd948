#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>

#include "rlab/builtins.hpp"
#include "rlab/oscillatory.hpp"
#include "rlab/quadrature.hpp"

using namespace rlab;

namespace {
constexpr double kPi = 3.14159265358979323846;
}

TEST_CASE("zero frequency gives the weighted patch area") {
  const SurfacePatch s = make_builtin_surface("parabola");
  const std::complex<double> f0 = surface_measure_ft(s, {0.0, 0.0});
  CHECK(std::abs(f0.imag()) < 1e-12);
  // independent 1-D quadrature of psi(y) sqrt(1 + 4 y^2)
  const CutoffProfile psi = s.cutoff();
  const double oracle = adaptive_simpson(
      [&](double y) {
        return psi(std::abs(y)) * std::sqrt(1.0 + 4.0 * y * y);
      },
      -0.9, 0.9, 1e-12);
  CHECK(f0.real() == doctest::Approx(oracle).epsilon(1e-8));
}

TEST_CASE("input validation and the panel budget") {
  const SurfacePatch s = make_builtin_surface("parabola");
  CHECK_THROWS_AS(surface_measure_ft(s, {0.0, 0.0, 0.0}), ValidationError);
  CHECK_THROWS_AS(surface_measure_ft(s, {0.0, 0.0}, 1LL << 23, 4),
                  ValidationError);
  CHECK_THROWS_AS(surface_measure_ft(s, {0.0, 5000.0}, /*max_panels=*/16),
                  BudgetError);
}

TEST_CASE("normal-direction magnitude follows the Fresnel law") {
  const SurfacePatch s = make_builtin_surface("parabola");
  for (double lam : {256.0, 1024.0}) {
    const std::complex<double> f = surface_measure_ft(s, {0.0, lam});
    const double predicted = std::sqrt(kPi / lam);
    INFO("lambda = ", lam);
    CHECK(std::abs(f) == doctest::Approx(predicted).epsilon(0.02));
  }
}

TEST_CASE("quadrature self-convergence at high frequency") {
  const SurfacePatch s = make_builtin_surface("parabola");
  const Vec xi{0.0, 1000.0};
  const std::complex<double> coarse = surface_measure_ft(s, xi);
  const std::complex<double> fine =
      surface_measure_ft(s, xi, 1LL << 23, 8, 0.5);
  CHECK(std::abs(coarse - fine) < 1e-8);
}

TEST_CASE("conjugate symmetry and the zero-frequency maximum") {
  const SurfacePatch s = make_builtin_surface("mixed");
  const double f0 = surface_measure_ft(s, {0.0, 0.0, 0.0}).real();
  for (const Vec& xi : {Vec{3.0, -2.0, 17.0}, Vec{-8.0, 5.0, 40.0}}) {
    const auto a = surface_measure_ft(s, xi);
    const auto b = surface_measure_ft(s, {-xi[0], -xi[1], -xi[2]});
    CHECK(std::abs(a - std::conj(b)) < 1e-12);
    CHECK(std::abs(a) <= f0);
  }
}

TEST_CASE("tangential frequencies decay fast (no stationary point)") {
  const SurfacePatch s = make_builtin_surface("parabola");
  for (double lam : {64.0, 128.0, 256.0}) {
    const double v = std::abs(surface_measure_ft(s, {lam, 0.0}));
    INFO("lambda = ", lam);
    CHECK(v < 1.0 / (lam * lam));
  }
}

TEST_CASE("decay profiles: grid shape, envelope, and the zero sample") {
  const SurfacePatch s = make_builtin_surface("parabola");
  const DecayProfile prof = decay_profile(s, {0.0, 1.0}, 2.0, 512.0, 25);
  REQUIRE(prof.lambdas.size() == 25);
  CHECK(prof.value_at_zero > 0.0);
  for (std::size_t i = 1; i < prof.lambdas.size(); ++i)
    CHECK(prof.lambdas[i] > prof.lambdas[i - 1]);
  int flagged = 0;
  for (char f : prof.envelope_flag) flagged += f;
  CHECK(flagged >= 5);
  CHECK_THROWS_AS(decay_profile(s, {0.0, 2.0}, 2.0, 64.0, 10),
                  ValidationError);
}

TEST_CASE("fitted decay exponents match the predicted rates (curves)") {
  struct Case {
    const char* name;
    double r;
  };
  for (const Case& c : {Case{"parabola", 0.5}, Case{"quartic-curve", 0.25}}) {
    const SurfacePatch s = make_builtin_surface(c.name);
    const DecayProfile prof = decay_profile(s, {0.0, 1.0}, 2.0, 2048.0, 41);
    const ExponentFit fit = fit_decay_exponent(prof);
    INFO(c.name);
    CHECK(std::abs(fit.slope - c.r) < 0.05);
  }
}

TEST_CASE("fitted decay exponent for the rotationally symmetric bowl") {
  const SurfacePatch s = make_builtin_surface("paraboloid");
  const DecayProfile prof =
      decay_profile(s, {0.0, 0.0, 1.0}, 2.0, 256.0, 29);
  const ExponentFit fit = fit_decay_exponent(prof);
  CHECK(std::abs(fit.slope - 1.0) < 0.05);
}

TEST_CASE("direction scan: slow decay lives on the patch normal cone") {
  const SurfacePatch s = make_builtin_surface("parabola");
  const ScanReport rep = isotropic_decay_scan(s, 64, 256.0);
  REQUIRE(rep.worst_index >= 0);

  // every normal of the patch graph tilts from e2 by at most
  // atan(max |phi'|); directions outside that cone have no stationary
  // point and must decay fast
  const Vec& worst = rep.directions[rep.worst_index];
  const double tilt = std::acos(std::min(1.0, std::abs(worst[1])));
  const double halfwidth = 0.9;  // support of the builtin cutoff
  const double cone = std::atan(2.0 * halfwidth);
  CHECK(tilt < cone + 2.0 * kPi / 180.0);

  // the flat-point normal sits within a modest constant of the worst
  double normal_probe = 0.0, tangent_val = 0.0;
  for (std::size_t i = 0; i < rep.directions.size(); ++i) {
    if (std::abs(rep.directions[i][1]) > 0.999)
      normal_probe = std::max(normal_probe, rep.abs_at_probe[i]);
    if (std::abs(rep.directions[i][0]) > 0.996)
      tangent_val = std::max(tangent_val, rep.abs_at_probe[i]);
  }
  const double worst_val = rep.abs_at_probe[rep.worst_index];
  CHECK(normal_probe > 0.0);
  CHECK(worst_val <= 2.5 * normal_probe);

  // tangential probe well below the worst probe
  CHECK(tangent_val < 0.1 * worst_val);
}

TEST_CASE("profile fit input validation") {
  const SurfacePatch s = make_builtin_surface("parabola");
  DecayProfile narrow = decay_profile(s, {0.0, 1.0}, 64.0, 256.0, 8);
  CHECK_THROWS_AS(fit_decay_exponent(narrow), ValidationError);  // < 4 octaves
}
