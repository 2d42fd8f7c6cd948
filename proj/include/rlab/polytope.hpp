#pragma once

#include <complex>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "rlab/common.hpp"

namespace rlab {

// Nondegenerate d-simplex; vertex order normalized so the signed volume
// det([v_1-v_0, ..., v_d-v_0]) / d! is positive.
struct Simplex {
  int dim = 0;
  std::vector<Vec> vertices;  // dim + 1
  double volume = 0.0;

  Simplex(int d, std::vector<Vec> verts);

  double diameter() const;
  // Barycentric membership; strict=true requires all coordinates > tol.
  bool contains(const Vec& y, double tol = 1e-12, bool strict = false) const;
};

using Matrix = std::vector<Vec>;  // row-major, square

// Vertex-list polytope with a simplex decomposition.
class Polytope {
 public:
  // Simple polygon (vertices in boundary order, either orientation);
  // ear clipping handles nonconvex input.
  static Polytope polygon(std::vector<Vec> vertices);
  // Axis-aligned box, Kuhn decomposition into d! simplices.
  static Polytope box(const Vec& lo, const Vec& hi);
  // Convex point cloud in R^3, centroid fan over the hull boundary.
  static Polytope convex_3d(std::vector<Vec> points);
  // Explicit decomposition.
  static Polytope from_simplices(int dim, std::vector<Vec> vertices,
                                 std::vector<std::vector<int>> simplex_indices);

  int dim() const { return dim_; }
  const std::vector<Vec>& vertices() const { return vertices_; }
  const std::vector<std::vector<int>>& simplex_indices() const {
    return simplices_;
  }
  std::size_t vertex_count() const { return vertices_.size(); }
  double volume() const { return volume_; }
  double diameter() const;
  bool contains(const Vec& y, double tol = 1e-12) const;
  bool is_box() const { return is_box_; }
  const Vec& box_lo() const { return box_lo_; }
  const Vec& box_hi() const { return box_hi_; }

  // Plain-text vertex list: first line "d N", then N lines of d coords.
  static Polytope load_text(const std::string& path);
  void save_text(const std::string& path) const;

 private:
  Polytope() = default;
  void finalize(int n_max);

  int dim_ = 0;
  std::vector<Vec> vertices_;
  std::vector<std::vector<int>> simplices_;
  double volume_ = 0.0;
  bool is_box_ = false;
  Vec box_lo_, box_hi_;
};

// Realized simplex decomposition; volumes sum to |P|.
std::vector<Simplex> triangulate(const Polytope& p);

// Divided difference of g(t) = exp(-i t) over the given nodes.
std::complex<double> divdiff_exp_partial_fraction(std::span<const double> t);
std::complex<double> divdiff_exp_series(std::span<const double> t);
// Chooses partial fractions for well-separated nodes, the series path when
// any node pair is closer than `theta`.
std::complex<double> divided_difference_exp(std::span<const double> t,
                                            double theta = 1e-3);

// Exact integral of exp(-i<x, xi>) over the simplex / polytope.
std::complex<double> simplex_ft(const Simplex& s, const Vec& xi);
std::complex<double> polytope_ft(const Polytope& p, const Vec& xi);

Polytope affine_image(const Polytope& p, const Matrix& t, const Vec& shift);
double det(const Matrix& m);

// max over xi of the relative defect in chi_hat_{TP}(xi) = |det T| *
// chi_hat_P(T^t xi).
double check_affine_covariance(const Polytope& p, const Matrix& t,
                               const std::vector<Vec>& xis);

struct LpNormResult {
  double p = 0.0;
  double lambda = 0.0;    // truncation radius (sup norm)
  double truncated = 0.0;       // p-norm over |xi|_inf <= lambda
  double truncated_half = 0.0;  // p-norm over |xi|_inf <= lambda / 2
  // Limit estimate: the truncation error decays like lambda^{1-p} (edge-normal
  // directions contribute |chi_hat| ~ 1/|xi|), so the two truncations are
  // Richardson-extrapolated at that rate.  Converges much faster in lambda
  // than the raw truncations.
  double estimate = 0.0;
  double tail_bound = 0.0;  // upper bound on the tail, in ||.||^p units
  double total = 0.0;       // (truncated^p + tail_bound)^{1/p}
  int nodes_per_panel = 0;
  long long panels = 0;
};

// Truncated tensor-quadrature p-norm of chi_hat_P plus an analytic tail
// bound from per-simplex decay envelopes.  Requires p > 1.
LpNormResult lp_norm_ft(const Polytope& p, double exponent, double lambda,
                        int nodes_per_panel = 12, double panel_scale = 1.0);

// ||chi_hat_P||_p / (N |P|^{1/p'})
double knapp_norm_bound_check(const Polytope& p, double exponent,
                              double lambda);

struct DecompositionReport {
  long long tested = 0;
  long long overlapping = 0;
  bool pass = false;
};

// Sampled pairwise-interior-disjointness check: each strictly interior
// sample must lie in exactly one simplex.
DecompositionReport check_decomposition(const Polytope& p, long long samples,
                                        std::uint64_t seed);

}  // namespace rlab
