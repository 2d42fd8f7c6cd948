#include "rlab/surface.hpp"

#include <algorithm>
#include <cmath>

#include "rlab/rng.hpp"

namespace rlab {

WeightSystem make_weights(const std::vector<long long>& a) {
  if (a.empty()) throw ValidationError("make_weights: empty weight list");
  Rational sum(0);
  for (long long aj : a) {
    if (aj < 1)
      throw ValidationError("make_weights: nonpositive weight " +
                            std::to_string(aj));
    sum += Rational(1, aj);
  }
  WeightSystem w;
  w.a = a;
  const long long d = static_cast<long long>(a.size());
  w.m = Rational(d) / sum;  // (n-1)/m = sum 1/a_j
  w.m_value = boost::rational_cast<double>(w.m);
  w.r_vol = boost::rational_cast<double>(sum);
  return w;
}

Vec dilate(const Vec& x, double t, const WeightSystem& w) {
  if (!(t > 0.0)) throw ValidationError("dilate: scale must be positive");
  if (x.size() != w.a.size())
    throw ValidationError("dilate: dimension mismatch");
  Vec y(x.size());
  for (std::size_t j = 0; j < x.size(); ++j)
    y[j] = std::pow(t, 1.0 / static_cast<double>(w.a[j])) * x[j];
  return y;
}

std::vector<Vec> sphere_sample(int d, int count, std::uint64_t seed) {
  if (d < 1 || count < 1) throw ValidationError("sphere_sample: bad arguments");
  std::vector<Vec> out;
  out.reserve(count);
  if (d == 1) {
    for (int i = 0; i < count; ++i) out.push_back({i % 2 == 0 ? 1.0 : -1.0});
    return out;
  }
  if (d == 2) {
    for (int i = 0; i < count; ++i) {
      const double th = 2.0 * M_PI * i / count;
      out.push_back({std::cos(th), std::sin(th)});
    }
    return out;
  }
  CounterRng rng(seed);
  for (int i = 0; i < count; ++i) {
    Vec v(d);
    double n = 0;
    for (int k = 0; k < d; ++k) {
      v[k] = rng.normal(i, 2 * k);
      n += v[k] * v[k];
    }
    n = std::sqrt(std::max(n, 1e-300));
    for (int k = 0; k < d; ++k) v[k] /= n;
    out.push_back(std::move(v));
  }
  return out;
}

MixedHomogeneousPoly::MixedHomogeneousPoly(std::vector<Monomial> monomials,
                                           WeightSystem weights)
    : monomials_(std::move(monomials)), weights_(std::move(weights)) {
  const int d = weights_.graph_dim();
  if (monomials_.empty())
    throw ConstructionError("mixed-homogeneous poly: no monomials (Q == 0)");
  for (const auto& mono : monomials_) {
    if (static_cast<int>(mono.alpha.size()) != d)
      throw ConstructionError("mixed-homogeneous poly: exponent vector length");
    Rational s(0);
    for (int j = 0; j < d; ++j) {
      if (mono.alpha[j] < 0)
        throw ConstructionError("mixed-homogeneous poly: negative exponent");
      s += Rational(mono.alpha[j], weights_.a[j]);
    }
    if (s != Rational(1))
      throw ConstructionError(
          "mixed-homogeneous poly: monomial violates sum alpha_j/a_j == 1");
  }
  // positivity away from the origin, checked on a deterministic sphere sample
  const auto sample = sphere_sample(d, std::max(1000, 2 * d));
  for (const auto& omega : sample) {
    if (!((*this)(omega) > 0.0))
      throw ConstructionError(
          "mixed-homogeneous poly: Q not positive on the unit sphere");
  }
}

double MixedHomogeneousPoly::operator()(const Vec& x) const {
  KahanSum s;
  for (const auto& mono : monomials_) {
    double term = mono.coeff;
    for (std::size_t j = 0; j < mono.alpha.size(); ++j) {
      double p = 1.0;
      const double xj = x[j];
      for (int k = 0; k < mono.alpha[j]; ++k) p *= xj;
      term *= p;
    }
    s.add(term);
  }
  return s.value();
}

Vec MixedHomogeneousPoly::gradient(const Vec& x) const {
  const int d = n_vars();
  Vec g(d, 0.0);
  for (const auto& mono : monomials_) {
    for (int j = 0; j < d; ++j) {
      if (mono.alpha[j] == 0) continue;
      double term = mono.coeff * mono.alpha[j];
      for (int k = 0; k < d; ++k) {
        const int e = mono.alpha[k] - (k == j ? 1 : 0);
        for (int q = 0; q < e; ++q) term *= x[k];
      }
      g[j] += term;
    }
  }
  return g;
}

HomogeneityReport check_mixed_homogeneity(const MixedHomogeneousPoly& q,
                                          int samples, std::uint64_t seed) {
  CounterRng rng(seed);
  const int d = q.n_vars();
  HomogeneityReport rep;
  for (int i = 0; i < samples; ++i) {
    Vec x(d);
    for (int j = 0; j < d; ++j) x[j] = rng.uniform(i, j, -2.0, 2.0);
    const double t = std::pow(10.0, rng.uniform(i, d, -4.0, 4.0));
    const double lhs = q(dilate(x, t, q.weights()));
    const double rhs = t * q(x);
    const double rel = std::abs(lhs - rhs) / (std::abs(rhs) + 1e-300);
    rep.max_rel_err = std::max(rep.max_rel_err, rel);
  }
  rep.pass = rep.max_rel_err < 1e-10;
  return rep;
}

Vec Remainder::gradient(const Vec& x) const {
  const int d = static_cast<int>(x.size());
  if (!value_) return Vec(d, 0.0);
  if (grad_) return grad_(x);
  const double h = 1e-5;
  Vec g(d);
  Vec xp = x, xm = x;
  for (int j = 0; j < d; ++j) {
    xp[j] = x[j] + h;
    xm[j] = x[j] - h;
    g[j] = (value_(xp) - value_(xm)) / (2.0 * h);
    xp[j] = x[j];
    xm[j] = x[j];
  }
  return g;
}

std::vector<std::pair<double, double>> Remainder::certificate(
    const WeightSystem& w, const std::vector<double>& t_grid,
    int sphere_samples) const {
  std::vector<std::pair<double, double>> table;
  const auto sample = sphere_sample(w.graph_dim(), sphere_samples);
  for (double t : t_grid) {
    if (!(t > 0.0)) throw ValidationError("remainder certificate: t <= 0");
    double worst = 0.0;
    for (const auto& omega : sample) {
      const double v = std::abs((*this)(dilate(omega, t, w))) / t;
      worst = std::max(worst, v);
    }
    table.emplace_back(t, worst);
  }
  return table;
}

bool Remainder::certificate_ok(
    const std::vector<std::pair<double, double>>& table) {
  if (table.size() < 2) return false;
  return table.back().second < 0.1 * table.front().second + 1e-300;
}

double CutoffProfile::operator()(double r) const {
  if (r <= rho0) return 1.0;
  if (r >= rho1) return 0.0;
  const double u = (r - rho0) / (rho1 - rho0);
  // quintic smoothstep, C^2 at both ends
  return 1.0 - u * u * u * (10.0 - 15.0 * u + 6.0 * u * u);
}

SurfacePatch::SurfacePatch(MixedHomogeneousPoly q, Remainder r, double offset,
                           double halfwidth, CutoffProfile cutoff)
    : q_(std::move(q)),
      r_(std::move(r)),
      offset_(offset),
      halfwidth_(halfwidth),
      cutoff_(cutoff) {
  if (!(halfwidth_ > 0.0))
    throw ValidationError("surface patch: halfwidth must be positive");
  if (!(cutoff_.rho0 > 0.0) || !(cutoff_.rho1 > cutoff_.rho0))
    throw ValidationError("surface patch: bad cutoff radii");
  const int d = q_.n_vars();
  // graph normalized at the origin
  const Vec origin(d, 0.0);
  if (std::abs(phi(origin) - offset_) > 1e-10)
    throw ConstructionError("surface patch: Phi(0) != c");
  Vec g0 = phi_gradient(origin);
  for (double g : g0)
    if (std::abs(g) > 1e-10)
      throw ConstructionError("surface patch: grad Phi(0) != 0");
  if (!r_.is_zero()) {
    const auto cert = r_.certificate(q_.weights(),
                                     {1.0, 0.1, 0.01, 1e-3, 1e-4, 1e-5});
    if (!Remainder::certificate_ok(cert))
      throw ConstructionError(
          "surface patch: remainder smallness certificate failed");
  }
  // Phi - c >= 0 on K, shrinking the domain if the remainder dips below
  for (int attempt = 0;; ++attempt) {
    double worst = 0.0;
    const int grid = 33;
    std::vector<int> idx(d, 0);
    for (;;) {
      Vec y(d);
      for (int j = 0; j < d; ++j)
        y[j] = -halfwidth_ + 2.0 * halfwidth_ * idx[j] / (grid - 1);
      worst = std::min(worst, phi_rel(y));
      int j = 0;
      while (j < d && ++idx[j] == grid) idx[j++] = 0;
      if (j == d) break;
    }
    if (worst >= -1e-12) break;
    if (attempt >= 8)
      throw ConstructionError(
          "surface patch: Phi - c negative on K even after shrinking");
    halfwidth_ *= 0.5;
  }
}

bool SurfacePatch::in_domain(const Vec& y) const {
  if (static_cast<int>(y.size()) != q_.n_vars()) return false;
  for (double v : y)
    if (std::abs(v) > halfwidth_ * (1.0 + 1e-12)) return false;
  return true;
}

double SurfacePatch::phi(const Vec& y) const { return phi_rel(y) + offset_; }

double SurfacePatch::phi_rel(const Vec& y) const { return q_(y) + r_(y); }

Vec SurfacePatch::phi_gradient(const Vec& y) const {
  Vec g = q_.gradient(y);
  if (!r_.is_zero()) {
    Vec gr = r_.gradient(y);
    for (std::size_t j = 0; j < g.size(); ++j) g[j] += gr[j];
  }
  return g;
}

double SurfacePatch::measure_weight(const Vec& y) const {
  const Vec g = phi_gradient(y);
  return std::sqrt(1.0 + dot(g, g));
}

SurfacePatch::Eval SurfacePatch::eval(const Vec& y) const {
  if (!in_domain(y))
    throw DomainError("surface patch: point outside the domain box");
  Eval e;
  e.height = phi(y);
  e.gradient = phi_gradient(y);
  e.measure_weight = std::sqrt(1.0 + dot(e.gradient, e.gradient));
  return e;
}

double SurfacePatch::gradient_bound(int axis) const {
  const int d = q_.n_vars();
  if (axis < 0 || axis >= d) throw ValidationError("gradient_bound: bad axis");
  const double r = std::min(cutoff_.rho1, halfwidth_);
  const int grid = 17;
  double worst = 0.0;
  std::vector<int> idx(d, 0);
  for (;;) {
    Vec y(d);
    for (int j = 0; j < d; ++j) y[j] = -r + 2.0 * r * idx[j] / (grid - 1);
    worst = std::max(worst, std::abs(phi_gradient(y)[axis]));
    int j = 0;
    while (j < d && ++idx[j] == grid) idx[j++] = 0;
    if (j == d) break;
  }
  return worst * 1.05;  // sampling slack
}

}  // namespace rlab
