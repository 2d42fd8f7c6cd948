#pragma once

#include <cmath>
#include <utility>
#include <vector>

#include "rlab/common.hpp"

namespace rlab {

// Least-squares power-law fit on (log x, log y) pairs.
struct ExponentFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r2 = 0.0;
  std::vector<double> residuals;  // log-space, per point
  std::vector<double> grid;       // the x values used
};

// Plain least squares y = a*x + b.
inline void linear_least_squares(const std::vector<double>& x,
                                 const std::vector<double>& y, double& slope,
                                 double& intercept) {
  const std::size_t n = x.size();
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < n; ++i) {
    sx += x[i];
    sy += y[i];
    sxx += x[i] * x[i];
    sxy += x[i] * y[i];
  }
  const double d = n * sxx - sx * sx;
  slope = (n * sxy - sx * sy) / d;
  intercept = (sy - slope * sx) / n;
}

// points: (x, y), all positive; fits y ~ C x^slope.  Refuses < 4 points.
inline ExponentFit fit_loglog(
    const std::vector<std::pair<double, double>>& points) {
  if (points.size() < 4)
    throw ValidationError("fit_loglog: need at least 4 points, got " +
                          std::to_string(points.size()));
  std::vector<double> lx, ly;
  lx.reserve(points.size());
  ly.reserve(points.size());
  for (const auto& [x, y] : points) {
    if (!(x > 0.0) || !(y > 0.0))
      throw ValidationError("fit_loglog: nonpositive value in input");
    lx.push_back(std::log(x));
    ly.push_back(std::log(y));
  }
  ExponentFit fit;
  linear_least_squares(lx, ly, fit.slope, fit.intercept);
  double ss_res = 0, ss_tot = 0, mean = 0;
  for (double v : ly) mean += v;
  mean /= static_cast<double>(ly.size());
  fit.residuals.resize(ly.size());
  fit.grid.resize(ly.size());
  for (std::size_t i = 0; i < ly.size(); ++i) {
    const double r = ly[i] - (fit.slope * lx[i] + fit.intercept);
    fit.residuals[i] = r;
    fit.grid[i] = points[i].first;
    ss_res += r * r;
    ss_tot += (ly[i] - mean) * (ly[i] - mean);
  }
  fit.r2 = ss_tot > 0 ? 1.0 - ss_res / ss_tot : 1.0;
  if (fit.r2 < 0) fit.r2 = 0;
  if (fit.r2 > 1) fit.r2 = 1;
  return fit;
}

// Geometric grid lo..hi inclusive.
inline std::vector<double> geometric_grid(double lo, double hi, int points) {
  if (points < 2 || !(lo > 0) || !(hi > lo))
    throw ValidationError("geometric_grid: bad parameters");
  std::vector<double> g(points);
  const double q = std::log(hi / lo) / (points - 1);
  for (int i = 0; i < points; ++i) g[i] = lo * std::exp(q * i);
  g.front() = lo;
  g.back() = hi;
  return g;
}

}  // namespace rlab
