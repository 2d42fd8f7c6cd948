#pragma once

#include <complex>
#include <vector>

#include "rlab/fit.hpp"
#include "rlab/surface.hpp"

namespace rlab {

// F_S(xi) = integral of e^{-i(<y, xi'> + Phi(y) xi_n)} psi(y)
// sqrt(1 + |grad Phi|^2) dy over the cutoff support, by panel-adaptive
// tensor Gauss quadrature (quarter-period panels, >= 8 nodes per axis).
// Throws BudgetError when the panel count would exceed max_panels.
std::complex<double> surface_measure_ft(const SurfacePatch& s, const Vec& xi,
                                        long long max_panels = 1LL << 23,
                                        int nodes_per_axis = 8,
                                        double panel_scale = 1.0);

struct DecayProfile {
  Vec theta;  // unit direction in R^n
  std::vector<double> lambdas;
  std::vector<std::complex<double>> values;
  std::vector<char> envelope_flag;  // windowed maxima, one-octave window
  double value_at_zero = 0.0;       // weighted patch area
};

DecayProfile decay_profile(const SurfacePatch& s, const Vec& theta,
                           double lambda_min, double lambda_max, int points,
                           long long max_panels = 1LL << 23);

// Least squares of log(1/envelope) on log(lambda); slope is r_hat > 0 for
// decaying profiles.  Requires >= 5 envelope points spanning >= 4 octaves.
ExponentFit fit_decay_exponent(const DecayProfile& profile);

struct ScanReport {
  std::vector<Vec> directions;       // upper hemisphere
  std::vector<double> abs_at_probe;  // windowed |F_S| near lambda_probe
  int worst_index = -1;              // slowest decay (largest value)
  double lambda_probe = 0.0;
};

ScanReport isotropic_decay_scan(const SurfacePatch& s, int direction_count,
                                double lambda_probe,
                                long long max_panels = 1LL << 23);

}  // namespace rlab
