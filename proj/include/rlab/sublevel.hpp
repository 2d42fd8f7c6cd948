#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "rlab/fit.hpp"
#include "rlab/polytope.hpp"
#include "rlab/surface.hpp"

namespace rlab {

// {y in K : Phi(y) - c <= delta}, the graph-chart realization of the
// tangent-plane neighborhood at the origin.
struct TangentBall {
  const SurfacePatch* surface = nullptr;
  double delta = 0.0;

  TangentBall(const SurfacePatch& s, double d) : surface(&s), delta(d) {
    if (!(delta > 0.0)) throw ValidationError("tangent ball: delta <= 0");
  }
  bool contains(const Vec& y) const {
    return surface->in_domain(y) && surface->phi_rel(y) <= delta;
  }
};

struct VolumeEstimate {
  double value = 0.0;
  double lower = 0.0;  // bracket / value - stderr
  double upper = 0.0;  // bracket / value + stderr
  double stderr_value = 0.0;
  std::string method;  // monte_carlo | grid_bracket | polar_exact
  long long samples = 0;
  std::uint64_t seed = 0;
};

// Unbiased hit-count estimate over K; deterministic given the seed and
// independent of the worker count.
VolumeEstimate volume_mc(const SurfacePatch& s, double delta, long long n,
                         std::uint64_t seed);

// Corner-classification bracket: lower counts cells fully inside, upper
// counts cells touching the set.
VolumeEstimate volume_grid(const SurfacePatch& s, double delta, int resolution);

// C_Q * delta^{(n-1)/m} with
// C_Q = 1/(n-1) * integral over S^{n-2} of (sum_j (m/a_j) w_j^2) Q(w)^{-(n-1)/m}.
VolumeEstimate volume_polar_exact(const MixedHomogeneousPoly& q, double delta,
                                  int angular_nodes = 64);

ExponentFit fit_growth_exponent(
    const std::vector<std::pair<double, VolumeEstimate>>& volumes);

// Axis-aligned covering box for {Q <= delta}: product of
// [-h_j delta^{1/a_j}, h_j delta^{1/a_j}] with h_j = margin * (extent of
// {Q <= 1} along axis j).
Polytope build_P_delta(const MixedHomogeneousPoly& q, double delta,
                       double margin);

struct ContainmentReport {
  long long in_set = 0;      // accepted rejection samples
  long long violations = 0;  // accepted samples outside P
  double set_volume = 0.0;   // MC estimate of |B|
  double ratio = 0.0;        // |P| / |B|
  bool pass = false;
};

// Rejection-samples the sublevel set {Phi - c <= delta} inside K and checks
// membership in P; pass iff no violations and ratio in [1, c2].
ContainmentReport check_containment(const SurfacePatch& s, double delta,
                                    const Polytope& p, long long samples,
                                    std::uint64_t seed, double c2 = 16.0);

struct HyperbolaRow {
  double delta = 0.0;
  double region_area = 0.0;  // 4 delta (1 + ln(1/delta))
  double cover_area = 0.0;   // minimal k-step staircase cover
  double ratio = 0.0;        // cover / region
  double descent_gap = 0.0;  // |closed form - numeric descent| relative
};

// Staircase covers of {|x1 x2| <= delta} in [-1,1]^2 with k steps per
// quadrant branch; the optimal breakpoints form a geometric progression,
// cross-checked by coordinate descent.
std::vector<HyperbolaRow> hyperbola_demo(const std::vector<double>& deltas,
                                         int k);

// Closed forms used by the demo.
double hyperbola_region_area(double delta);
double hyperbola_cover_area(double delta, int k);

}  // namespace rlab
