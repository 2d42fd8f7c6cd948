#pragma once

#include <boost/rational.hpp>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "rlab/common.hpp"

namespace rlab {

using Rational = boost::rational<long long>;

// Anisotropic dilation weights (a_1, ..., a_{n-1}) with the derived
// homogeneity degree m, (n-1)/m = sum_j 1/a_j held exactly.
struct WeightSystem {
  std::vector<long long> a;
  Rational m;
  double m_value = 0.0;
  double r_vol = 0.0;  // (n-1)/m, the volume-growth exponent

  int graph_dim() const { return static_cast<int>(a.size()); }  // n-1
  int ambient_dim() const { return graph_dim() + 1; }           // n
};

WeightSystem make_weights(const std::vector<long long>& a);

// (t^{1/a_1} x_1, ..., t^{1/a_{n-1}} x_{n-1}); t must be positive.
Vec dilate(const Vec& x, double t, const WeightSystem& w);

struct Monomial {
  std::vector<int> alpha;
  double coeff = 0.0;
};

// Q in explicit monomial form.  Construction enforces, per monomial,
// sum_j alpha_j / a_j == 1 in exact arithmetic (equivalent to
// Q(dilate(x, t)) = t Q(x)) and positivity of Q on a deterministic
// sphere sample.
class MixedHomogeneousPoly {
 public:
  MixedHomogeneousPoly(std::vector<Monomial> monomials, WeightSystem weights);

  double operator()(const Vec& x) const;
  Vec gradient(const Vec& x) const;

  int n_vars() const { return weights_.graph_dim(); }
  const WeightSystem& weights() const { return weights_; }
  const std::vector<Monomial>& monomials() const { return monomials_; }

 private:
  std::vector<Monomial> monomials_;
  WeightSystem weights_;
};

struct HomogeneityReport {
  double max_rel_err = 0.0;
  bool pass = false;
};

// Sampled check of Q(dilate(x,t)) = t Q(x); report-only.
HomogeneityReport check_mixed_homogeneity(const MixedHomogeneousPoly& q,
                                          int samples, std::uint64_t seed);

// Smooth remainder term with a numerical smallness certificate:
// max_x |R(dilate(x,t))| / t must decay to zero along a t-grid before the
// remainder may be used in experiments.
class Remainder {
 public:
  using ValueFn = std::function<double(const Vec&)>;
  using GradFn = std::function<Vec(const Vec&)>;

  Remainder() = default;  // identically zero
  explicit Remainder(ValueFn value, GradFn grad = nullptr)
      : value_(std::move(value)), grad_(std::move(grad)) {}

  bool is_zero() const { return !value_; }
  double operator()(const Vec& x) const { return value_ ? value_(x) : 0.0; }
  Vec gradient(const Vec& x) const;  // central differences if no analytic grad

  // (t, max_x |R(dilate(x,t))| / t) over sphere samples.
  std::vector<std::pair<double, double>> certificate(
      const WeightSystem& w, const std::vector<double>& t_grid,
      int sphere_samples = 256) const;

  static bool certificate_ok(
      const std::vector<std::pair<double, double>>& table);

 private:
  ValueFn value_;
  GradFn grad_;
};

// C^2 radial bump: 1 for |y| <= rho0, 0 for |y| >= rho1.
struct CutoffProfile {
  double rho0 = 0.5;
  double rho1 = 0.9;
  double operator()(double r) const;
  double eval(const Vec& y) const { return (*this)(norm2(y)); }
};

// Graph surface x_n = Q(y) + R(y) + c over K = [-halfwidth, halfwidth]^{n-1}.
class SurfacePatch {
 public:
  SurfacePatch(MixedHomogeneousPoly q, Remainder r, double offset,
               double halfwidth, CutoffProfile cutoff);

  struct Eval {
    double height = 0.0;
    Vec gradient;
    double measure_weight = 1.0;  // sqrt(1 + |grad|^2)
  };

  // Throws DomainError if y is outside K.
  Eval eval(const Vec& y) const;

  double phi(const Vec& y) const;      // Q + R + c
  double phi_rel(const Vec& y) const;  // Q + R, height above the tangent plane
  Vec phi_gradient(const Vec& y) const;
  double measure_weight(const Vec& y) const;
  double cutoff_value(const Vec& y) const { return cutoff_.eval(y); }

  const MixedHomogeneousPoly& q() const { return q_; }
  const Remainder& remainder() const { return r_; }
  const WeightSystem& weights() const { return q_.weights(); }
  double offset() const { return offset_; }
  double halfwidth() const { return halfwidth_; }
  const CutoffProfile& cutoff() const { return cutoff_; }
  int graph_dim() const { return q_.n_vars(); }
  int ambient_dim() const { return q_.n_vars() + 1; }
  bool in_domain(const Vec& y) const;

  // max |d phi / d y_k| over the cutoff support, sampled; used for panel
  // sizing in oscillatory quadrature.
  double gradient_bound(int axis) const;

 private:
  MixedHomogeneousPoly q_;
  Remainder r_;
  double offset_;
  double halfwidth_;
  CutoffProfile cutoff_;
};

// Deterministic unit-sphere sample in dimension d (d >= 1).
std::vector<Vec> sphere_sample(int d, int count, std::uint64_t seed = 0x5EED);

}  // namespace rlab
