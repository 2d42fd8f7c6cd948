#pragma once

#include <vector>

#include "rlab/fit.hpp"
#include "rlab/polytope.hpp"
#include "rlab/sublevel.hpp"
#include "rlab/surface.hpp"

namespace rlab {

// p_star(r) = 2(r+1)/(r+2), the critical exponent for decay/growth rate r.
double p_star(double r);
// r_star(p) = 2(p-1)/(2-p), its inverse on 1 < p < 2.
double r_star(double p);
// Hoelder conjugate p/(p-1).
double dual_exponent(double p);

// Frequency support P_delta x [0, delta] of the test function f_delta.
struct KnappSupport {
  Polytope base;  // P_delta, an axis-aligned box in R^{n-1}
  double delta = 0.0;
  double margin = 0.0;
  double volume = 0.0;  // delta * |P_delta|

  int ambient_dim() const { return base.dim() + 1; }
};

// Throws DomainError if P_delta is not contained in the chart box K.
KnappSupport build_knapp_function(const SurfacePatch& s, double delta,
                                  double margin);

// ||R f_delta||_2 = sqrt(sigma(cap)) where the cap is the part of the graph
// lying inside the support; midpoint counting over P_delta.
double restriction_norm(const SurfacePatch& s, const KnappSupport& support,
                        int cells_per_axis = 0);

// c_p = integral over R of |2 sin(u/2) / u|^p du (1 < p < 2).
double kernel_constant_cp(double p);

// ||f_delta||_p for the box support, in the convention f(x) =
// (2 pi)^{-n} * integral of e^{i<x,xi>} over the support:
// (2 pi)^{-n} c_p^{n/p} (prod of side lengths)^{1/p'}.
double lp_norm_knapp(const KnappSupport& support, double p);

struct KnappRow {
  double delta = 0.0;
  double restriction = 0.0;  // ||R f_delta||_2
  double lp = 0.0;           // ||f_delta||_p
  double cap_ratio = 0.0;    // ||R f_delta||_2^2 / |B^pi(0, delta)|
};

struct ScalingVerdict {
  double p = 0.0;
  double rho2 = 0.0;   // slope of log ||R f_delta||_2 vs log delta
  double rhop = 0.0;   // slope of log ||f_delta||_p vs log delta
  double r_hat = 0.0;  // 2 * rho2
  bool admissible = false;  // rho2 >= rhop - 0.02
  ExponentFit fit2, fitp;
  std::vector<KnappRow> rows;
};

// Fits both delta-scaling exponents over the given geometric grid.
ScalingVerdict fit_knapp_exponents(const SurfacePatch& s,
                                   const std::vector<double>& deltas, double p,
                                   double margin = 1.1);

// Slopes reported against the box side length delta^{1/a} instead of the
// slab thickness, for surfaces with uniform weight a: multiplies by a.
double slope_in_boxside_units(double slab_slope, const WeightSystem& w);

// Bisection for the p where rho2 == rhop on the scanned grid.
double critical_p_scan(const SurfacePatch& s, const std::vector<double>& deltas,
                       double p_lo = 1.05, double p_hi = 1.95,
                       double tol = 1e-4, double margin = 1.1);

}  // namespace rlab
