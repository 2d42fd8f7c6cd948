#include "rlab/oscillatory.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "rlab/parallel.hpp"
#include "rlab/quadrature.hpp"

namespace rlab {

namespace {

constexpr double kPi = 3.14159265358979323846;
using Cplx = std::complex<double>;

// Allocation-light evaluator for Phi and its gradient.
struct PatchEval {
  const SurfacePatch& s;
  bool has_r;

  explicit PatchEval(const SurfacePatch& patch)
      : s(patch), has_r(!patch.remainder().is_zero()) {}

  // returns Q(y) + R(y); writes the gradient into grad
  double eval(const Vec& y, Vec& grad) const {
    const int d = static_cast<int>(y.size());
    double value = 0.0;
    std::fill(grad.begin(), grad.end(), 0.0);
    for (const auto& mono : s.q().monomials()) {
      double term = mono.coeff;
      for (int j = 0; j < d; ++j)
        for (int k = 0; k < mono.alpha[j]; ++k) term *= y[j];
      value += term;
      for (int j = 0; j < d; ++j) {
        if (mono.alpha[j] == 0) continue;
        double g = mono.coeff * mono.alpha[j];
        for (int k = 0; k < d; ++k) {
          const int e = mono.alpha[k] - (k == j ? 1 : 0);
          for (int q = 0; q < e; ++q) g *= y[k];
        }
        grad[j] += g;
      }
    }
    if (has_r) {
      value += s.remainder()(y);
      const Vec gr = s.remainder().gradient(y);
      for (int j = 0; j < d; ++j) grad[j] += gr[j];
    }
    return value;
  }
};

struct Axis {
  std::vector<double> coords;   // all node coordinates along the axis
  std::vector<double> weights;  // matching quadrature weights
};

Axis build_axis(double lo, double hi, long long panels, const GaussRule& g) {
  Axis ax;
  const double h = (hi - lo) / static_cast<double>(panels);
  ax.coords.reserve(panels * g.nodes.size());
  ax.weights.reserve(panels * g.nodes.size());
  for (long long p = 0; p < panels; ++p) {
    const double a = lo + p * h;
    for (std::size_t k = 0; k < g.nodes.size(); ++k) {
      ax.coords.push_back(a + 0.5 * h * (g.nodes[k] + 1.0));
      ax.weights.push_back(0.5 * h * g.weights[k]);
    }
  }
  return ax;
}

// Panels aligned with the cutoff seams at +-rho0, so the integrand is smooth
// inside every panel and Gauss panels converge superalgebraically.
Axis build_axis_segmented(double rho0, double rho1, double width,
                          const GaussRule& g, long long max_panels,
                          long long& panels_out) {
  const double seams[4] = {-rho1, -rho0, rho0, rho1};
  Axis ax;
  panels_out = 0;
  for (int seg = 0; seg < 3; ++seg) {
    const double lo = seams[seg], hi = seams[seg + 1];
    const long long m = std::max<long long>(
        2, static_cast<long long>(std::ceil((hi - lo) / width)));
    panels_out += m;
    if (panels_out > max_panels)
      throw BudgetError("surface_measure_ft: panel budget exceeded");
    const Axis part = build_axis(lo, hi, m, g);
    ax.coords.insert(ax.coords.end(), part.coords.begin(), part.coords.end());
    ax.weights.insert(ax.weights.end(), part.weights.begin(),
                     part.weights.end());
  }
  return ax;
}

}  // namespace

std::complex<double> surface_measure_ft(const SurfacePatch& s, const Vec& xi,
                                        long long max_panels,
                                        int nodes_per_axis,
                                        double panel_scale) {
  const int d = s.graph_dim();
  if (static_cast<int>(xi.size()) != d + 1)
    throw ValidationError("surface_measure_ft: xi must be ambient-dimensional");
  if (nodes_per_axis < 8)
    throw ValidationError("surface_measure_ft: needs >= 8 nodes per axis");
  const double rho1 = s.cutoff().rho1;
  if (rho1 > s.halfwidth() * (1.0 + 1e-12))
    throw ValidationError(
        "surface_measure_ft: cutoff support must lie inside the chart box");
  const double xin = xi[d];

  // quarter-period panels per axis, with a floor so the amplitude (the
  // cutoff and the area weight) stays resolved at low frequency
  const double rho0 = s.cutoff().rho0;
  const GaussRule& g = gauss_legendre(nodes_per_axis);
  std::vector<Axis> axes;
  long long total = 1;
  for (int k = 0; k < d; ++k) {
    const double rate =
        std::abs(xi[k]) + std::abs(xin) * s.gradient_bound(k);
    double w = rate > 0.0 ? 2.0 * kPi / (4.0 * rate) : 2.0 * rho1;
    w *= panel_scale;
    if (d == 1) {
      long long m = 0;
      axes.push_back(build_axis_segmented(rho0, rho1, w, g, max_panels, m));
      total = m;
    } else {
      const long long m = std::max<long long>(
          16, static_cast<long long>(std::ceil(2.0 * rho1 / w)));
      total *= m;
      if (total > max_panels)
        throw BudgetError(
            "surface_measure_ft: panel budget exceeded at |xi| = " +
            std::to_string(norm2(xi)));
      axes.push_back(build_axis(-rho1, rho1, m, g));
    }
  }

  const PatchEval pe(s);
  const double c = s.offset();

  if (d == 1) {
    KahanSum re, im;
    Vec y(1), grad(1);
    for (std::size_t i = 0; i < axes[0].coords.size(); ++i) {
      y[0] = axes[0].coords[i];
      const double psi = s.cutoff_value(y);
      if (psi == 0.0) continue;
      const double phi = pe.eval(y, grad) + c;
      const double wgt =
          axes[0].weights[i] * psi * std::sqrt(1.0 + grad[0] * grad[0]);
      const double ph = y[0] * xi[0] + phi * xin;
      re.add(wgt * std::cos(ph));
      im.add(-wgt * std::sin(ph));
    }
    return {re.value(), im.value()};
  }

  // d == 2: rows over axis-0 nodes, ordered reduction
  const std::size_t n0 = axes[0].coords.size();
  std::vector<double> row_re(n0, 0.0), row_im(n0, 0.0);
  parallel_for(n0, [&](std::size_t i0) {
    KahanSum re, im;
    Vec y(2), grad(2);
    y[0] = axes[0].coords[i0];
    const double w0 = axes[0].weights[i0];
    for (std::size_t i1 = 0; i1 < axes[1].coords.size(); ++i1) {
      y[1] = axes[1].coords[i1];
      const double psi = s.cutoff_value(y);
      if (psi == 0.0) continue;
      const double phi = pe.eval(y, grad) + c;
      const double wgt =
          w0 * axes[1].weights[i1] * psi *
          std::sqrt(1.0 + grad[0] * grad[0] + grad[1] * grad[1]);
      const double ph = y[0] * xi[0] + y[1] * xi[1] + phi * xin;
      re.add(wgt * std::cos(ph));
      im.add(-wgt * std::sin(ph));
    }
    row_re[i0] = re.value();
    row_im[i0] = im.value();
  });
  KahanSum re, im;
  for (std::size_t i = 0; i < n0; ++i) {
    re.add(row_re[i]);
    im.add(row_im[i]);
  }
  return {re.value(), im.value()};
}

DecayProfile decay_profile(const SurfacePatch& s, const Vec& theta,
                           double lambda_min, double lambda_max, int points,
                           long long max_panels) {
  const int n = s.ambient_dim();
  if (static_cast<int>(theta.size()) != n)
    throw ValidationError("decay_profile: direction must be ambient-dimensional");
  if (std::abs(norm2(theta) - 1.0) > 1e-10)
    throw ValidationError("decay_profile: direction must be a unit vector");
  DecayProfile prof;
  prof.theta = theta;
  prof.lambdas = geometric_grid(lambda_min, lambda_max, points);
  prof.value_at_zero =
      surface_measure_ft(s, Vec(n, 0.0), max_panels).real();

  prof.values.resize(prof.lambdas.size());
  for (std::size_t i = 0; i < prof.lambdas.size(); ++i) {
    Vec xi(n);
    for (int k = 0; k < n; ++k) xi[k] = prof.lambdas[i] * theta[k];
    prof.values[i] = surface_measure_ft(s, xi, max_panels);
  }

  // windowed maxima: the largest sample in each octave bin rides the
  // envelope; samples near oscillation nulls stay unflagged
  prof.envelope_flag.assign(prof.lambdas.size(), 0);
  const double base = prof.lambdas.front();
  std::size_t bin_start = 0;
  while (bin_start < prof.lambdas.size()) {
    const int bin =
        static_cast<int>(std::floor(std::log2(prof.lambdas[bin_start] / base) +
                                    1e-12));
    std::size_t best = bin_start, end = bin_start;
    while (end < prof.lambdas.size() &&
           static_cast<int>(std::floor(std::log2(prof.lambdas[end] / base) +
                                       1e-12)) == bin) {
      if (std::abs(prof.values[end]) > std::abs(prof.values[best])) best = end;
      ++end;
    }
    prof.envelope_flag[best] = 1;
    bin_start = end;
  }
  return prof;
}

ExponentFit fit_decay_exponent(const DecayProfile& profile) {
  // restrict to the top four octaves: the low-lambda end of the profile is
  // pre-asymptotic and biases the slope
  const double lambda_floor = profile.lambdas.back() / 16.0 * (1.0 - 1e-9);
  std::vector<std::pair<double, double>> pts;
  for (std::size_t i = 0; i < profile.lambdas.size(); ++i)
    if (profile.envelope_flag[i] && profile.lambdas[i] >= lambda_floor) {
      const double v = std::abs(profile.values[i]);
      if (v > 0.0) pts.emplace_back(profile.lambdas[i], 1.0 / v);
    }
  if (pts.size() < 5)
    throw ValidationError("fit_decay_exponent: fewer than 5 envelope points");
  // span measured in whole octave bins (the flagged sample may sit anywhere
  // inside its bin)
  const int bin_span = static_cast<int>(
      std::floor(std::log2(pts.back().first / pts.front().first) + 0.5));
  if (bin_span < 4)
    throw ValidationError("fit_decay_exponent: envelope spans < 4 octaves");
  return fit_loglog(pts);  // slope is r_hat
}

ScanReport isotropic_decay_scan(const SurfacePatch& s, int direction_count,
                                double lambda_probe, long long max_panels) {
  if (direction_count < 4)
    throw ValidationError("isotropic_decay_scan: too few directions");
  if (!(lambda_probe > 1.0))
    throw ValidationError("isotropic_decay_scan: probe frequency too small");
  const int n = s.ambient_dim();
  ScanReport rep;
  rep.lambda_probe = lambda_probe;

  if (n == 2) {
    for (int i = 0; i < direction_count; ++i) {
      const double th = kPi * (i + 0.5) / direction_count;
      rep.directions.push_back({std::cos(th), std::sin(th)});
    }
  } else {
    // Fibonacci spiral on the upper hemisphere
    const double golden = kPi * (3.0 - std::sqrt(5.0));
    for (int i = 0; i < direction_count; ++i) {
      const double z = (i + 0.5) / direction_count;
      const double r = std::sqrt(std::max(0.0, 1.0 - z * z));
      const double phi = golden * i;
      rep.directions.push_back({r * std::cos(phi), r * std::sin(phi), z});
    }
  }

  rep.abs_at_probe.resize(rep.directions.size());
  for (std::size_t i = 0; i < rep.directions.size(); ++i) {
    // short window below the probe smooths over oscillation near-zeros
    double best = 0.0;
    for (int j = 0; j < 3; ++j) {
      const double lam = lambda_probe * std::pow(2.0, -j / 3.0);
      Vec xi(n);
      for (int k = 0; k < n; ++k) xi[k] = lam * rep.directions[i][k];
      best = std::max(best, std::abs(surface_measure_ft(s, xi, max_panels)));
    }
    rep.abs_at_probe[i] = best;
  }
  rep.worst_index = static_cast<int>(
      std::max_element(rep.abs_at_probe.begin(), rep.abs_at_probe.end()) -
      rep.abs_at_probe.begin());
  return rep;
}

}  // namespace rlab
