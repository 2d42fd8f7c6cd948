#pragma once

#include <complex>
#include <functional>
#include <vector>

#include "rlab/common.hpp"

namespace rlab {

struct GaussRule {
  std::vector<double> nodes;    // on [-1, 1]
  std::vector<double> weights;  // sum to 2
};

// Gauss-Legendre rule of order n (cached per n, thread-safe after first use).
const GaussRule& gauss_legendre(int n);

// Integrate f over [a, b] with a composite n-point Gauss rule on `panels`
// equal panels, compensated summation.
double composite_gauss(const std::function<double(double)>& f, double a,
                       double b, int panels, int n);

// Adaptive Simpson to absolute tolerance `tol`.
double adaptive_simpson(const std::function<double(double)>& f, double a,
                        double b, double tol, int max_depth = 60);

}  // namespace rlab
