#include "rlab/sublevel.hpp"

#include <algorithm>
#include <cmath>

#include "rlab/parallel.hpp"
#include "rlab/quadrature.hpp"
#include "rlab/rng.hpp"

namespace rlab {

namespace {
constexpr double kPi = 3.14159265358979323846;
}

VolumeEstimate volume_mc(const SurfacePatch& s, double delta, long long n,
                         std::uint64_t seed) {
  if (!(delta > 0.0)) throw ValidationError("volume_mc: delta <= 0");
  if (n < 1000) throw ValidationError("volume_mc: needs at least 10^3 samples");
  const int d = s.graph_dim();
  const double h = s.halfwidth();
  const double box_vol = std::pow(2.0 * h, d);
  const CounterRng rng(seed);

  // fixed block partition; integer per-block hit counts make the total
  // independent of how blocks are assigned to workers
  const std::size_t blocks = 256;
  std::vector<long long> hits(blocks, 0);
  parallel_for(blocks, [&](std::size_t b) {
    const long long lo = static_cast<long long>(b) * n / blocks;
    const long long hi = static_cast<long long>(b + 1) * n / blocks;
    long long count = 0;
    Vec y(d);
    for (long long i = lo; i < hi; ++i) {
      for (int j = 0; j < d; ++j)
        y[j] = rng.uniform(static_cast<std::uint64_t>(i), j, -h, h);
      if (s.phi_rel(y) <= delta) ++count;
    }
    hits[b] = count;
  });
  long long total = 0;
  for (long long c : hits) total += c;

  const double p = static_cast<double>(total) / static_cast<double>(n);
  VolumeEstimate est;
  est.value = p * box_vol;
  est.stderr_value = std::sqrt(std::max(p * (1.0 - p), 0.0) / n) * box_vol;
  est.lower = est.value - est.stderr_value;
  est.upper = est.value + est.stderr_value;
  est.method = "monte_carlo";
  est.samples = n;
  est.seed = seed;
  return est;
}

VolumeEstimate volume_grid(const SurfacePatch& s, double delta,
                           int resolution) {
  if (!(delta > 0.0)) throw ValidationError("volume_grid: delta <= 0");
  if (resolution < 16)
    throw ValidationError("volume_grid: resolution must be >= 16");
  const int d = s.graph_dim();
  double total_cells = std::pow(static_cast<double>(resolution), d);
  if (total_cells > static_cast<double>(1 << 20))
    throw ValidationError("volume_grid: more than 2^20 cells requested");
  const double h = s.halfwidth();
  const double cell_vol = std::pow(2.0 * h / resolution, d);

  // corner classification on the (resolution+1)^d lattice
  auto inside = [&](const std::vector<int>& idx) {
    Vec y(d);
    for (int j = 0; j < d; ++j)
      y[j] = -h + 2.0 * h * idx[j] / resolution;
    return s.phi_rel(y) <= delta;
  };

  long long lower_cells = 0, upper_cells = 0;
  std::vector<int> cell(d, 0);
  std::vector<int> corner(d, 0);
  for (;;) {
    bool all = true, any = false;
    for (int mask = 0; mask < (1 << d); ++mask) {
      for (int j = 0; j < d; ++j) corner[j] = cell[j] + ((mask >> j) & 1);
      if (inside(corner))
        any = true;
      else
        all = false;
      if (any && !all) break;
    }
    if (all) ++lower_cells;
    if (any) ++upper_cells;
    int j = 0;
    while (j < d && ++cell[j] == resolution) cell[j++] = 0;
    if (j == d) break;
  }

  VolumeEstimate est;
  est.lower = lower_cells * cell_vol;
  est.upper = upper_cells * cell_vol;
  est.value = 0.5 * (est.lower + est.upper);
  est.stderr_value = 0.5 * (est.upper - est.lower);
  est.method = "grid_bracket";
  est.samples = static_cast<long long>(total_cells);
  return est;
}

VolumeEstimate volume_polar_exact(const MixedHomogeneousPoly& q, double delta,
                                  int angular_nodes) {
  if (!(delta > 0.0)) throw ValidationError("volume_polar_exact: delta <= 0");
  const WeightSystem& w = q.weights();
  const int d = w.graph_dim();
  if (d != 1 && d != 2)
    throw ValidationError("volume_polar_exact: angular quadrature covers n-1 in {1,2}");
  const double r = w.r_vol;
  const double m = w.m_value;

  auto integrand = [&](const Vec& omega) {
    const double qv = q(omega);
    if (qv < 1e-14)
      throw ConstructionError("volume_polar_exact: Q vanishes on the sphere");
    double jac = 0.0;
    for (int j = 0; j < d; ++j)
      jac += (m / static_cast<double>(w.a[j])) * omega[j] * omega[j];
    return jac * std::pow(qv, -r);
  };

  double c_q;
  if (d == 1) {
    c_q = integrand({1.0}) + integrand({-1.0});
  } else {
    if (angular_nodes < 8)
      throw ValidationError("volume_polar_exact: too few angular nodes");
    c_q = 0.5 * composite_gauss(
                    [&](double th) {
                      return integrand({std::cos(th), std::sin(th)});
                    },
                    0.0, 2.0 * kPi, angular_nodes, 12);
  }

  VolumeEstimate est;
  est.value = c_q * std::pow(delta, r);
  est.lower = est.value;
  est.upper = est.value;
  est.method = "polar_exact";
  est.samples = d == 1 ? 2 : angular_nodes * 12;
  return est;
}

ExponentFit fit_growth_exponent(
    const std::vector<std::pair<double, VolumeEstimate>>& volumes) {
  std::vector<std::pair<double, double>> pts;
  pts.reserve(volumes.size());
  for (const auto& [delta, est] : volumes) pts.emplace_back(delta, est.value);
  return fit_loglog(pts);
}

Polytope build_P_delta(const MixedHomogeneousPoly& q, double delta,
                       double margin) {
  if (!(delta > 0.0)) throw ValidationError("build_P_delta: delta <= 0");
  if (!(margin > 0.0)) throw ValidationError("build_P_delta: margin <= 0");
  const WeightSystem& w = q.weights();
  const int d = w.graph_dim();

  // extent of {Q <= 1} along axis j: max over directions of
  // |w_j| Q(w)^{-1/a_j} (polar parameterization of the boundary)
  const auto sample = sphere_sample(d, std::max(4096, 2 * d));
  Vec extent(d, 0.0);
  for (const auto& omega : sample) {
    const double qv = q(omega);
    if (!(qv > 0.0))
      throw ConstructionError("build_P_delta: Q not coercive on a ray");
    for (int j = 0; j < d; ++j)
      extent[j] = std::max(
          extent[j], std::abs(omega[j]) *
                         std::pow(qv, -1.0 / static_cast<double>(w.a[j])));
  }
  // axis rays resolved by exact bisection on t -> Q(t e_j)
  for (int j = 0; j < d; ++j) {
    Vec e(d, 0.0);
    e[j] = 1.0;
    const double qe = q(e);
    if (qe > 0.0)
      extent[j] = std::max(extent[j],
                           std::pow(qe, -1.0 / static_cast<double>(w.a[j])));
  }

  Vec lo(d), hi(d);
  for (int j = 0; j < d; ++j) {
    const double half =
        margin * extent[j] *
        std::pow(delta, 1.0 / static_cast<double>(w.a[j]));
    lo[j] = -half;
    hi[j] = half;
  }
  return Polytope::box(lo, hi);
}

ContainmentReport check_containment(const SurfacePatch& s, double delta,
                                    const Polytope& p, long long samples,
                                    std::uint64_t seed, double c2) {
  if (!(delta > 0.0)) throw ValidationError("check_containment: delta <= 0");
  if (samples < 100)
    throw ValidationError("check_containment: too few samples");
  if (p.dim() != s.graph_dim())
    throw ValidationError("check_containment: dimension mismatch");
  const int d = s.graph_dim();
  const double h = s.halfwidth();
  const CounterRng rng(seed);

  const std::size_t blocks = 128;
  std::vector<long long> in_set(blocks, 0), viol(blocks, 0);
  parallel_for(blocks, [&](std::size_t b) {
    const long long lo = static_cast<long long>(b) * samples / blocks;
    const long long hi = static_cast<long long>(b + 1) * samples / blocks;
    long long count = 0, bad = 0;
    Vec y(d);
    for (long long i = lo; i < hi; ++i) {
      for (int j = 0; j < d; ++j)
        y[j] = rng.uniform(static_cast<std::uint64_t>(i), j, -h, h);
      if (s.phi_rel(y) > delta) continue;
      ++count;
      if (!p.contains(y, 1e-12)) ++bad;
    }
    in_set[b] = count;
    viol[b] = bad;
  });

  ContainmentReport rep;
  for (std::size_t b = 0; b < blocks; ++b) {
    rep.in_set += in_set[b];
    rep.violations += viol[b];
  }
  if (rep.in_set == 0)
    throw DomainError("check_containment: sublevel set appears empty");
  rep.set_volume = std::pow(2.0 * h, d) * static_cast<double>(rep.in_set) /
                   static_cast<double>(samples);
  rep.ratio = p.volume() / rep.set_volume;
  rep.pass = rep.violations == 0 && rep.ratio >= 1.0 && rep.ratio <= c2;
  return rep;
}

double hyperbola_region_area(double delta) {
  return 4.0 * delta * (1.0 + std::log(1.0 / delta));
}

// Per quadrant: the strip [0, delta] x [0, 1] plus k rectangles over
// geometric breakpoints x_i = delta^{1 - i/k}; each contributes
// delta (delta^{-1/k} - 1).
double hyperbola_cover_area(double delta, int k) {
  const double step = std::pow(delta, -1.0 / k) - 1.0;
  return 4.0 * (delta + k * delta * step);
}

std::vector<HyperbolaRow> hyperbola_demo(const std::vector<double>& deltas,
                                         int k) {
  if (k < 2) throw ValidationError("hyperbola_demo: k must be >= 2");
  std::vector<HyperbolaRow> rows;
  for (double delta : deltas) {
    if (!(delta > 0.0) || !(delta < 1.0))
      throw ValidationError("hyperbola_demo: delta must lie in (0, 1)");
    HyperbolaRow row;
    row.delta = delta;
    row.region_area = hyperbola_region_area(delta);
    row.cover_area = hyperbola_cover_area(delta, k);
    row.ratio = row.cover_area / row.region_area;

    // numeric descent over breakpoints delta = x_0 < ... < x_k = 1,
    // minimizing sum (x_i - x_{i-1}) / x_{i-1}; the interior stationarity
    // condition is x_i = sqrt(x_{i-1} x_{i+1})
    std::vector<double> x(k + 1);
    for (int i = 0; i <= k; ++i)
      x[i] = delta + (1.0 - delta) * i / k;  // start far from optimal
    for (int sweep = 0; sweep < 2000; ++sweep) {
      double moved = 0.0;
      for (int i = 1; i < k; ++i) {
        const double nx = std::sqrt(x[i - 1] * x[i + 1]);
        moved = std::max(moved, std::abs(nx - x[i]));
        x[i] = nx;
      }
      if (moved < 1e-15) break;
    }
    double descent_cost = 0.0;
    for (int i = 1; i <= k; ++i) descent_cost += (x[i] - x[i - 1]) / x[i - 1];
    const double descent_area = 4.0 * (delta + delta * descent_cost);
    row.descent_gap =
        std::abs(descent_area - row.cover_area) / row.cover_area;
    rows.push_back(row);
  }
  return rows;
}

}  // namespace rlab
