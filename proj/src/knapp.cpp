#include "rlab/knapp.hpp"

#include <algorithm>
#include <cmath>

#include "rlab/parallel.hpp"
#include "rlab/quadrature.hpp"

namespace rlab {

namespace {
constexpr double kPi = 3.14159265358979323846;
constexpr double kTwoPi = 2.0 * kPi;
}  // namespace

double p_star(double r) {
  if (!(r > 0.0)) throw ValidationError("p_star: r must be positive");
  return 2.0 * (r + 1.0) / (r + 2.0);
}

double r_star(double p) {
  if (!(p > 1.0) || !(p < 2.0))
    throw ValidationError("r_star: p must lie in (1, 2)");
  return 2.0 * (p - 1.0) / (2.0 - p);
}

double dual_exponent(double p) {
  if (!(p > 1.0)) throw ValidationError("dual_exponent: p must exceed 1");
  return p / (p - 1.0);
}

KnappSupport build_knapp_function(const SurfacePatch& s, double delta,
                                  double margin) {
  KnappSupport sup{build_P_delta(s.q(), delta, margin), delta, margin, 0.0};
  const double h = s.halfwidth();
  for (double hi : sup.base.box_hi())
    if (hi > h * (1.0 + 1e-12))
      throw DomainError(
          "build_knapp_function: P_delta sticks out of the chart box K");
  sup.volume = delta * sup.base.volume();
  return sup;
}

double restriction_norm(const SurfacePatch& s, const KnappSupport& support,
                        int cells_per_axis) {
  const int d = s.graph_dim();
  if (support.base.dim() != d)
    throw ValidationError("restriction_norm: support built for another surface");
  if (cells_per_axis == 0) cells_per_axis = d == 1 ? 40000 : 1200;
  const Vec& lo = support.base.box_lo();
  const Vec& hi = support.base.box_hi();
  const double h = s.halfwidth();
  Vec clo(d), chi(d);
  double cell_vol = 1.0;
  for (int j = 0; j < d; ++j) {
    clo[j] = std::max(lo[j], -h);
    chi[j] = std::min(hi[j], h);
    cell_vol *= (chi[j] - clo[j]) / cells_per_axis;
  }

  const double delta = support.delta;
  double sigma = 0.0;
  if (d == 1) {
    KahanSum sum;
    Vec y(1);
    for (int i = 0; i < cells_per_axis; ++i) {
      y[0] = clo[0] + (chi[0] - clo[0]) * (i + 0.5) / cells_per_axis;
      if (s.phi_rel(y) <= delta) sum.add(s.measure_weight(y));
    }
    sigma = sum.value() * cell_vol;
  } else {
    std::vector<double> rows(cells_per_axis, 0.0);
    parallel_for(static_cast<std::size_t>(cells_per_axis), [&](std::size_t i) {
      KahanSum sum;
      Vec y(d);
      y[0] = clo[0] + (chi[0] - clo[0]) * (i + 0.5) / cells_per_axis;
      for (int j2 = 0; j2 < cells_per_axis; ++j2) {
        y[1] = clo[1] + (chi[1] - clo[1]) * (j2 + 0.5) / cells_per_axis;
        if (s.phi_rel(y) <= delta) sum.add(s.measure_weight(y));
      }
      rows[i] = sum.value();
    });
    KahanSum sum;
    for (double r : rows) sum.add(r);
    sigma = sum.value() * cell_vol;
  }
  return std::sqrt(std::max(sigma, 0.0));
}

double kernel_constant_cp(double p) {
  if (!(p > 1.0) || !(p < 2.0))
    throw ValidationError("kernel_constant_cp: p must lie in (1, 2)");
  // numeric part to T, then an averaged-oscillation tail:
  // integral_T^inf |2 sin(u/2)/u|^p du ~ A_p 2^p T^{1-p}/(p-1) with
  // A_p = mean of |sin|^p over a period
  const double t_cut = 20000.0 * kPi;
  const int panels = 40000;  // half-period pi panels
  const double head =
      2.0 * composite_gauss(
                [p](double u) {
                  if (u < 1e-9) return std::pow(1.0 - u * u / 24.0, p);
                  return std::pow(std::abs(2.0 * std::sin(0.5 * u) / u), p);
                },
                0.0, t_cut, panels, 8);
  const double a_p =
      composite_gauss([p](double u) { return std::pow(std::sin(u), p); }, 0.0,
                      kPi, 64, 12) /
      kPi;
  const double tail =
      2.0 * a_p * std::pow(2.0, p) * std::pow(t_cut, 1.0 - p) / (p - 1.0);
  return head + tail;
}

double lp_norm_knapp(const KnappSupport& support, double p) {
  if (!(p > 1.0) || !(p < 2.0))
    throw ValidationError("lp_norm_knapp: p must lie in (1, 2)");
  const int n = support.ambient_dim();
  const double cp = kernel_constant_cp(p);
  const double inv_pprime = (p - 1.0) / p;
  double sides = support.delta;  // the slab side
  const Vec& lo = support.base.box_lo();
  const Vec& hi = support.base.box_hi();
  for (std::size_t j = 0; j < lo.size(); ++j) sides *= hi[j] - lo[j];
  return std::pow(kTwoPi, -static_cast<double>(n)) *
         std::pow(cp, static_cast<double>(n) / p) *
         std::pow(sides, inv_pprime);
}

ScalingVerdict fit_knapp_exponents(const SurfacePatch& s,
                                   const std::vector<double>& deltas, double p,
                                   double margin) {
  if (deltas.size() < 5)
    throw ValidationError("fit_knapp_exponents: need at least 5 delta points");
  ScalingVerdict v;
  v.p = p;
  std::vector<std::pair<double, double>> pts2, ptsp;
  for (double delta : deltas) {
    const KnappSupport sup = build_knapp_function(s, delta, margin);
    KnappRow row;
    row.delta = delta;
    row.restriction = restriction_norm(s, sup);
    row.lp = lp_norm_knapp(sup, p);
    const double ball =
        volume_polar_exact(s.q(), delta).value;  // |B^pi(0, delta)|
    row.cap_ratio = row.restriction * row.restriction / ball;
    v.rows.push_back(row);
    pts2.emplace_back(delta, row.restriction);
    ptsp.emplace_back(delta, row.lp);
  }
  v.fit2 = fit_loglog(pts2);
  v.fitp = fit_loglog(ptsp);
  v.rho2 = v.fit2.slope;
  v.rhop = v.fitp.slope;
  v.r_hat = 2.0 * v.rho2;
  v.admissible = v.rho2 >= v.rhop - 0.02;
  return v;
}

double slope_in_boxside_units(double slab_slope, const WeightSystem& w) {
  for (long long aj : w.a)
    if (aj != w.a.front())
      throw ValidationError(
          "slope_in_boxside_units: weights must be uniform for this rescaling");
  return slab_slope * static_cast<double>(w.a.front());
}

double critical_p_scan(const SurfacePatch& s, const std::vector<double>& deltas,
                       double p_lo, double p_hi, double tol, double margin) {
  if (deltas.size() < 5)
    throw ValidationError("critical_p_scan: need at least 5 delta points");
  // restriction side is p-independent; compute once
  std::vector<std::pair<double, double>> pts2;
  std::vector<KnappSupport> sups;
  for (double delta : deltas) {
    sups.push_back(build_knapp_function(s, delta, margin));
    pts2.emplace_back(delta, restriction_norm(s, sups.back()));
  }
  const double rho2 = fit_loglog(pts2).slope;

  // the p-dependent prefactor c_p^{n/p} is delta-independent, so the slope
  // only needs the support volumes raised to 1/p'
  std::vector<double> support_vols;
  for (const auto& sup : sups) {
    double sides = sup.delta;
    for (std::size_t j = 0; j < sup.base.box_lo().size(); ++j)
      sides *= sup.base.box_hi()[j] - sup.base.box_lo()[j];
    support_vols.push_back(sides);
  }
  auto rhop = [&](double p) {
    const double inv_pprime = (p - 1.0) / p;
    std::vector<std::pair<double, double>> pts;
    for (std::size_t i = 0; i < sups.size(); ++i)
      pts.emplace_back(sups[i].delta, std::pow(support_vols[i], inv_pprime));
    return fit_loglog(pts).slope;
  };
  // rhop is increasing in p; balance rho2 == rhop by bisection
  double flo = rhop(p_lo) - rho2, fhi = rhop(p_hi) - rho2;
  if (flo > 0.0 || fhi < 0.0)
    throw ConstructionError("critical_p_scan: no balance point in [p_lo, p_hi]");
  while (p_hi - p_lo > tol) {
    const double mid = 0.5 * (p_lo + p_hi);
    if (rhop(mid) - rho2 < 0.0)
      p_lo = mid;
    else
      p_hi = mid;
  }
  return 0.5 * (p_lo + p_hi);
}

}  // namespace rlab
