#include "rlab/polytope.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "rlab/parallel.hpp"
#include "rlab/quadrature.hpp"
#include "rlab/rng.hpp"

namespace rlab {

namespace {

constexpr double kPi = 3.14159265358979323846;
using Cplx = std::complex<double>;
const Cplx kI(0.0, 1.0);

double factorial(int n) {
  double f = 1.0;
  for (int k = 2; k <= n; ++k) f *= k;
  return f;
}

// determinant by partial-pivot elimination
double det_inplace(std::vector<Vec> m) {
  const int n = static_cast<int>(m.size());
  double d = 1.0;
  for (int c = 0; c < n; ++c) {
    int piv = c;
    for (int r = c + 1; r < n; ++r)
      if (std::abs(m[r][c]) > std::abs(m[piv][c])) piv = r;
    if (m[piv][c] == 0.0) return 0.0;
    if (piv != c) {
      std::swap(m[piv], m[c]);
      d = -d;
    }
    d *= m[c][c];
    for (int r = c + 1; r < n; ++r) {
      const double f = m[r][c] / m[c][c];
      for (int k = c; k < n; ++k) m[r][k] -= f * m[c][k];
    }
  }
  return d;
}

// solve n x n system (small n), returns false if singular
bool solve_small(std::vector<Vec> a, Vec b, Vec& x) {
  const int n = static_cast<int>(a.size());
  for (int c = 0; c < n; ++c) {
    int piv = c;
    for (int r = c + 1; r < n; ++r)
      if (std::abs(a[r][c]) > std::abs(a[piv][c])) piv = r;
    if (std::abs(a[piv][c]) < 1e-300) return false;
    std::swap(a[piv], a[c]);
    std::swap(b[piv], b[c]);
    for (int r = c + 1; r < n; ++r) {
      const double f = a[r][c] / a[c][c];
      for (int k = c; k < n; ++k) a[r][k] -= f * a[c][k];
      b[r] -= f * b[c];
    }
  }
  x.assign(n, 0.0);
  for (int r = n - 1; r >= 0; --r) {
    double s = b[r];
    for (int k = r + 1; k < n; ++k) s -= a[r][k] * x[k];
    x[r] = s / a[r][r];
  }
  return true;
}

}  // namespace

double det(const Matrix& m) { return det_inplace(m); }

Simplex::Simplex(int d, std::vector<Vec> verts)
    : dim(d), vertices(std::move(verts)) {
  if (static_cast<int>(vertices.size()) != d + 1)
    throw ConstructionError("simplex: needs d+1 vertices");
  for (const auto& v : vertices)
    if (static_cast<int>(v.size()) != d)
      throw ConstructionError("simplex: vertex dimension mismatch");
  std::vector<Vec> edges(d, Vec(d));
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j)
      edges[i][j] = vertices[i + 1][j] - vertices[0][j];
  double signed_vol = det_inplace(edges) / factorial(d);
  const double dia = diameter();
  if (std::abs(signed_vol) <= 1e-14 * std::pow(dia, d))
    throw ConstructionError("simplex: degenerate (volume ~ 0)");
  if (signed_vol < 0.0) {
    std::swap(vertices[d - 1], vertices[d]);
    signed_vol = -signed_vol;
  }
  volume = signed_vol;
}

double Simplex::diameter() const {
  double d2 = 0.0;
  for (std::size_t i = 0; i < vertices.size(); ++i)
    for (std::size_t j = i + 1; j < vertices.size(); ++j) {
      double s = 0.0;
      for (std::size_t k = 0; k < vertices[i].size(); ++k) {
        const double t = vertices[i][k] - vertices[j][k];
        s += t * t;
      }
      d2 = std::max(d2, s);
    }
  return std::sqrt(d2);
}

bool Simplex::contains(const Vec& y, double tol, bool strict) const {
  std::vector<Vec> a(dim, Vec(dim));
  Vec b(dim);
  for (int i = 0; i < dim; ++i) {
    for (int j = 0; j < dim; ++j)
      a[j][i] = vertices[i + 1][j] - vertices[0][j];  // columns are edges
    b[i] = y[i] - vertices[0][i];
  }
  Vec lam;
  if (!solve_small(a, b, lam)) return false;
  double sum = 0.0;
  for (double l : lam) {
    if (strict ? l <= tol : l < -tol) return false;
    sum += l;
  }
  const double rest = 1.0 - sum;  // barycentric weight of v_0
  return strict ? rest > tol : rest >= -tol;
}

void Polytope::finalize(int n_max) {
  if (static_cast<int>(vertices_.size()) > n_max)
    throw ConstructionError("polytope: vertex count exceeds N_max");
  KahanSum vol;
  for (const auto& idx : simplices_) {
    std::vector<Vec> verts;
    for (int i : idx) verts.push_back(vertices_[i]);
    vol.add(Simplex(dim_, std::move(verts)).volume);
  }
  volume_ = vol.value();
  if (!(volume_ > 0.0)) throw ConstructionError("polytope: zero volume");
}

double Polytope::diameter() const {
  double d2 = 0.0;
  for (std::size_t i = 0; i < vertices_.size(); ++i)
    for (std::size_t j = i + 1; j < vertices_.size(); ++j) {
      double s = 0.0;
      for (std::size_t k = 0; k < vertices_[i].size(); ++k) {
        const double t = vertices_[i][k] - vertices_[j][k];
        s += t * t;
      }
      d2 = std::max(d2, s);
    }
  return std::sqrt(d2);
}

bool Polytope::contains(const Vec& y, double tol) const {
  if (is_box_) {
    for (int j = 0; j < dim_; ++j)
      if (y[j] < box_lo_[j] - tol || y[j] > box_hi_[j] + tol) return false;
    return true;
  }
  for (const auto& s : triangulate(*this))
    if (s.contains(y, tol)) return true;
  return false;
}

std::vector<Simplex> triangulate(const Polytope& p) {
  std::vector<Simplex> out;
  out.reserve(p.simplex_indices().size());
  for (const auto& idx : p.simplex_indices()) {
    std::vector<Vec> verts;
    for (int i : idx) verts.push_back(p.vertices()[i]);
    out.emplace_back(p.dim(), std::move(verts));
  }
  return out;
}

namespace {

double polygon_signed_area(const std::vector<Vec>& v) {
  double a = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    const auto& p = v[i];
    const auto& q = v[(i + 1) % v.size()];
    a += p[0] * q[1] - q[0] * p[1];
  }
  return 0.5 * a;
}

double cross2(const Vec& o, const Vec& a, const Vec& b) {
  return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0]);
}

bool point_in_triangle(const Vec& p, const Vec& a, const Vec& b, const Vec& c,
                       double tol) {
  const double d1 = cross2(a, b, p);
  const double d2 = cross2(b, c, p);
  const double d3 = cross2(c, a, p);
  const bool neg = d1 < -tol || d2 < -tol || d3 < -tol;
  const bool pos = d1 > tol || d2 > tol || d3 > tol;
  return !(neg && pos);
}

}  // namespace

Polytope Polytope::polygon(std::vector<Vec> vertices) {
  if (vertices.size() < 3) throw ValidationError("polygon: needs >= 3 vertices");
  for (const auto& v : vertices)
    if (v.size() != 2) throw ValidationError("polygon: vertices must be 2-D");
  Polytope p;
  p.dim_ = 2;
  p.vertices_ = vertices;

  std::vector<int> ring(vertices.size());
  for (std::size_t i = 0; i < ring.size(); ++i) ring[i] = static_cast<int>(i);
  double area = polygon_signed_area(vertices);
  if (std::abs(area) < 1e-14)
    throw ConstructionError("polygon: degenerate (area ~ 0)");
  if (area < 0.0) std::reverse(ring.begin(), ring.end());

  double scale = 0.0;
  for (const auto& v : vertices)
    scale = std::max({scale, std::abs(v[0]), std::abs(v[1])});
  const double tol = 1e-12 * std::max(1.0, scale * scale);

  // ear clipping
  while (ring.size() > 3) {
    bool clipped = false;
    for (std::size_t i = 0; i < ring.size(); ++i) {
      const int ia = ring[(i + ring.size() - 1) % ring.size()];
      const int ib = ring[i];
      const int ic = ring[(i + 1) % ring.size()];
      const Vec &a = vertices[ia], &b = vertices[ib], &c = vertices[ic];
      if (cross2(a, b, c) <= tol) continue;  // reflex or flat corner
      bool blocked = false;
      for (int j : ring) {
        if (j == ia || j == ib || j == ic) continue;
        if (point_in_triangle(vertices[j], a, b, c, tol)) {
          blocked = true;
          break;
        }
      }
      if (blocked) continue;
      p.simplices_.push_back({ia, ib, ic});
      ring.erase(ring.begin() + static_cast<long>(i));
      clipped = true;
      break;
    }
    if (!clipped)
      throw ConstructionError("polygon: ear clipping failed (self-intersecting?)");
  }
  p.simplices_.push_back({ring[0], ring[1], ring[2]});
  p.finalize(1024);
  return p;
}

Polytope Polytope::box(const Vec& lo, const Vec& hi) {
  const int d = static_cast<int>(lo.size());
  if (d < 1 || d > 3 || hi.size() != lo.size())
    throw ValidationError("box: dimension must be 1..3");
  for (int j = 0; j < d; ++j)
    if (!(hi[j] > lo[j])) throw ValidationError("box: hi must exceed lo");
  Polytope p;
  p.dim_ = d;
  p.is_box_ = true;
  p.box_lo_ = lo;
  p.box_hi_ = hi;
  for (int mask = 0; mask < (1 << d); ++mask) {
    Vec v(d);
    for (int j = 0; j < d; ++j) v[j] = (mask >> j) & 1 ? hi[j] : lo[j];
    p.vertices_.push_back(std::move(v));
  }
  // Kuhn decomposition: one simplex per axis permutation
  std::vector<int> perm(d);
  for (int j = 0; j < d; ++j) perm[j] = j;
  do {
    std::vector<int> simplex{0};
    int mask = 0;
    for (int j = 0; j < d; ++j) {
      mask |= 1 << perm[j];
      simplex.push_back(mask);
    }
    p.simplices_.push_back(std::move(simplex));
  } while (std::next_permutation(perm.begin(), perm.end()));
  p.finalize(64);
  return p;
}

Polytope Polytope::convex_3d(std::vector<Vec> points) {
  const std::size_t n = points.size();
  if (n < 4) throw ValidationError("convex_3d: needs >= 4 points");
  for (const auto& v : points)
    if (v.size() != 3) throw ValidationError("convex_3d: points must be 3-D");
  double scale = 1.0;
  for (const auto& v : points)
    for (double x : v) scale = std::max(scale, std::abs(x));
  const double tol = 1e-9 * scale;

  Vec centroid(3, 0.0);
  for (const auto& v : points)
    for (int k = 0; k < 3; ++k) centroid[k] += v[k] / static_cast<double>(n);

  struct Plane {
    Vec normal;
    double offset;
  };
  std::vector<Plane> planes;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      for (std::size_t k = j + 1; k < n; ++k) {
        Vec u(3), w(3);
        for (int q = 0; q < 3; ++q) {
          u[q] = points[j][q] - points[i][q];
          w[q] = points[k][q] - points[i][q];
        }
        Vec nrm = {u[1] * w[2] - u[2] * w[1], u[2] * w[0] - u[0] * w[2],
                   u[0] * w[1] - u[1] * w[0]};
        const double len = norm2(nrm);
        if (len < tol * tol) continue;
        for (double& x : nrm) x /= len;
        double off = dot(nrm, points[i]);
        bool lower = true, upper = true;
        for (const auto& v : points) {
          const double s = dot(nrm, v) - off;
          if (s > tol) upper = false;
          if (s < -tol) lower = false;
        }
        if (!lower && !upper) continue;
        if (lower) {  // flip so the normal points outward
          for (double& x : nrm) x = -x;
          off = -off;
        }
        bool known = false;
        for (const auto& pl : planes)
          if (std::abs(pl.normal[0] - nrm[0]) < 1e-7 &&
              std::abs(pl.normal[1] - nrm[1]) < 1e-7 &&
              std::abs(pl.normal[2] - nrm[2]) < 1e-7 &&
              std::abs(pl.offset - off) < tol * 10) {
            known = true;
            break;
          }
        if (!known) planes.push_back({nrm, off});
      }
  if (planes.size() < 4)
    throw ConstructionError("convex_3d: degenerate point cloud");

  Polytope p;
  p.dim_ = 3;
  p.vertices_ = points;
  const std::size_t centroid_idx = p.vertices_.size();
  p.vertices_.push_back(centroid);

  for (const auto& pl : planes) {
    std::vector<int> facet;
    for (std::size_t i = 0; i < n; ++i)
      if (std::abs(dot(pl.normal, points[i]) - pl.offset) < tol * 10)
        facet.push_back(static_cast<int>(i));
    if (facet.size() < 3) continue;
    // order facet vertices by angle around the facet centroid
    Vec fc(3, 0.0);
    for (int i : facet)
      for (int k = 0; k < 3; ++k) fc[k] += points[i][k] / facet.size();
    Vec e1(3), e2(3);
    for (int k = 0; k < 3; ++k) e1[k] = points[facet[0]][k] - fc[k];
    const double e1n = norm2(e1);
    for (double& x : e1) x /= e1n;
    e2 = {pl.normal[1] * e1[2] - pl.normal[2] * e1[1],
          pl.normal[2] * e1[0] - pl.normal[0] * e1[2],
          pl.normal[0] * e1[1] - pl.normal[1] * e1[0]};
    std::sort(facet.begin(), facet.end(), [&](int a, int b) {
      Vec da(3), db(3);
      for (int k = 0; k < 3; ++k) {
        da[k] = points[a][k] - fc[k];
        db[k] = points[b][k] - fc[k];
      }
      return std::atan2(dot(da, e2), dot(da, e1)) <
             std::atan2(dot(db, e2), dot(db, e1));
    });
    for (std::size_t t = 1; t + 1 < facet.size(); ++t)
      p.simplices_.push_back({static_cast<int>(centroid_idx), facet[0],
                              facet[t], facet[t + 1]});
  }
  p.finalize(64);
  return p;
}

Polytope Polytope::from_simplices(int dim, std::vector<Vec> vertices,
                                  std::vector<std::vector<int>> idx) {
  Polytope p;
  p.dim_ = dim;
  p.vertices_ = std::move(vertices);
  p.simplices_ = std::move(idx);
  p.finalize(1024);
  return p;
}

Polytope Polytope::load_text(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open polytope file: " + path);
  int d = 0, n = 0;
  if (!(in >> d >> n) || d < 1 || d > 3 || n < 2)
    throw ValidationError("polytope file: bad header in " + path);
  std::vector<Vec> verts(n, Vec(d));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < d; ++j)
      if (!(in >> verts[i][j]))
        throw ValidationError("polytope file: truncated coordinates in " +
                              path);
  if (d == 1) {
    double lo = verts[0][0], hi = verts[0][0];
    for (const auto& v : verts) {
      lo = std::min(lo, v[0]);
      hi = std::max(hi, v[0]);
    }
    return box({lo}, {hi});
  }
  if (d == 2) return polygon(std::move(verts));
  return convex_3d(std::move(verts));
}

void Polytope::save_text(const std::string& path) const {
  std::ofstream out(path);
  if (!out) throw ValidationError("cannot write polytope file: " + path);
  char buf[64];
  out << dim_ << " " << vertices_.size() << "\n";
  for (const auto& v : vertices_) {
    for (int j = 0; j < dim_; ++j) {
      std::snprintf(buf, sizeof buf, "%.17g", v[j]);
      out << buf << (j + 1 < dim_ ? " " : "\n");
    }
  }
}

// ---------------------------------------------------------------------------
// divided differences of exp(-i t)

std::complex<double> divdiff_exp_partial_fraction(std::span<const double> t) {
  const std::size_t n = t.size();
  Cplx sum(0.0, 0.0);
  for (std::size_t j = 0; j < n; ++j) {
    double denom = 1.0;
    for (std::size_t k = 0; k < n; ++k) {
      if (k == j) continue;
      denom *= t[j] - t[k];
    }
    if (denom == 0.0)
      throw ValidationError("partial fractions: coincident nodes");
    sum += std::exp(-kI * t[j]) / denom;
  }
  return sum;
}

// Shifted series about the node mean, in the matrix form: the divided
// difference equals entry (0, n-1) of exp(-i Z) with Z bidiagonal
// (nodes on the diagonal, ones above), evaluated by scaling-and-squaring
// of the Taylor series of exp(-i (Z - mu I)).
std::complex<double> divdiff_exp_series(std::span<const double> t) {
  const int n = static_cast<int>(t.size());
  if (n == 1) return std::exp(-kI * t[0]);
  double mu = 0.0;
  for (double v : t) mu += v;
  mu /= n;

  std::vector<Cplx> m(n * n, Cplx(0.0));
  double nrm = 0.0;
  for (int j = 0; j < n; ++j) {
    m[j * n + j] = -kI * (t[j] - mu);
    if (j + 1 < n) m[j * n + j + 1] = -kI;
    double row = std::abs(t[j] - mu) + (j + 1 < n ? 1.0 : 0.0);
    nrm = std::max(nrm, row);
  }
  int squarings = 0;
  while (nrm > 1.0 && squarings < 60) {
    nrm *= 0.5;
    ++squarings;
  }
  const double scale = std::ldexp(1.0, -squarings);
  for (auto& x : m) x *= scale;

  auto matmul = [n](const std::vector<Cplx>& a, const std::vector<Cplx>& b) {
    std::vector<Cplx> c(n * n, Cplx(0.0));
    for (int i = 0; i < n; ++i)
      for (int k = 0; k < n; ++k) {
        const Cplx aik = a[i * n + k];
        if (aik == Cplx(0.0)) continue;
        for (int j = 0; j < n; ++j) c[i * n + j] += aik * b[k * n + j];
      }
    return c;
  };

  // exp(M) by Taylor; M is upper triangular with norm <= 1
  std::vector<Cplx> e(n * n, Cplx(0.0)), term(n * n, Cplx(0.0));
  for (int i = 0; i < n; ++i) {
    e[i * n + i] = 1.0;
    term[i * n + i] = 1.0;
  }
  for (int k = 1; k <= 40; ++k) {
    term = matmul(term, m);
    for (auto& x : term) x /= static_cast<double>(k);
    double tn = 0.0;
    for (const auto& x : term) tn += std::norm(x);
    for (int i = 0; i < n * n; ++i) e[i] += term[i];
    if (k >= 10 && tn < 1e-40) break;
  }
  for (int s = 0; s < squarings; ++s) e = matmul(e, e);
  return std::exp(-kI * mu) * e[n - 1];  // entry (0, n-1)
}

std::complex<double> divided_difference_exp(std::span<const double> t,
                                            double theta) {
  const std::size_t n = t.size();
  if (n == 0) throw ValidationError("divided difference: no nodes");
  if (n == 1) return std::exp(-kI * t[0]);
  double min_gap = std::numeric_limits<double>::infinity();
  for (std::size_t j = 0; j < n; ++j)
    for (std::size_t k = j + 1; k < n; ++k)
      min_gap = std::min(min_gap, std::abs(t[j] - t[k]));
  if (min_gap < theta) return divdiff_exp_series(t);
  return divdiff_exp_partial_fraction(t);
}

std::complex<double> simplex_ft(const Simplex& s, const Vec& xi) {
  const int d = s.dim;
  if (static_cast<int>(xi.size()) != d)
    throw ValidationError("simplex_ft: frequency dimension mismatch");
  std::vector<double> t(d + 1);
  for (int j = 0; j <= d; ++j) t[j] = dot(s.vertices[j], xi);
  const Cplx dd = divided_difference_exp(t);
  Cplx ipow(1.0, 0.0);  // i^d
  for (int k = 0; k < d; ++k) ipow *= kI;
  return factorial(d) * s.volume * ipow * dd;
}

std::complex<double> polytope_ft(const Polytope& p, const Vec& xi) {
  KahanSum re, im;
  for (const auto& s : triangulate(p)) {
    const Cplx v = simplex_ft(s, xi);
    re.add(v.real());
    im.add(v.imag());
  }
  return {re.value(), im.value()};
}

Polytope affine_image(const Polytope& p, const Matrix& t, const Vec& shift) {
  const int d = p.dim();
  if (static_cast<int>(t.size()) != d || static_cast<int>(shift.size()) != d)
    throw ValidationError("affine_image: dimension mismatch");
  const double dt = det(t);
  if (std::abs(dt) < 1e-300)
    throw ValidationError("affine_image: singular linear map");
  std::vector<Vec> verts;
  verts.reserve(p.vertex_count());
  for (const auto& v : p.vertices()) {
    Vec w(d, 0.0);
    for (int i = 0; i < d; ++i) {
      for (int j = 0; j < d; ++j) w[i] += t[i][j] * v[j];
      w[i] += shift[i];
    }
    verts.push_back(std::move(w));
  }
  return Polytope::from_simplices(d, std::move(verts), p.simplex_indices());
}

double check_affine_covariance(const Polytope& p, const Matrix& t,
                               const std::vector<Vec>& xis) {
  const int d = p.dim();
  const Polytope tp = affine_image(p, t, Vec(d, 0.0));
  const double adet = std::abs(det(t));
  double worst = 0.0;
  for (const auto& xi : xis) {
    Vec txi(d, 0.0);  // T^t xi
    for (int j = 0; j < d; ++j)
      for (int i = 0; i < d; ++i) txi[j] += t[i][j] * xi[i];
    const Cplx lhs = polytope_ft(tp, xi);
    const Cplx rhs = adet * polytope_ft(p, txi);
    worst = std::max(worst, std::abs(lhs - rhs) / (std::abs(rhs) + 1e-30));
  }
  return worst;
}

// ---------------------------------------------------------------------------
// L^p norms of chi_hat

namespace {

// integral_R^inf min(A, kappa/l, s/l^2)^p l dl  (s may be +inf)
double radial_tail(double a_cap, double kappa, double s, double r, double p) {
  const double inf = std::numeric_limits<double>::infinity();
  auto seg_a = [&](double lo, double hi) {
    return std::pow(a_cap, p) * 0.5 * (hi * hi - lo * lo);
  };
  auto seg_k = [&](double lo, double hi) {
    if (p < 2.0)
      return std::pow(kappa, p) * (std::pow(hi, 2.0 - p) - std::pow(lo, 2.0 - p)) /
             (2.0 - p);
    if (p == 2.0) return kappa * kappa * std::log(hi / lo);
    return std::pow(kappa, p) * (std::pow(lo, 2.0 - p) - std::pow(hi, 2.0 - p)) /
           (p - 2.0);
  };
  auto seg_s = [&](double lo, double hi) {
    const double e = 2.0 - 2.0 * p;  // < 0
    const double hi_part = std::isinf(hi) ? 0.0 : std::pow(hi, e);
    return std::pow(s, p) * (std::pow(lo, e) - hi_part) / (2.0 * p - 2.0);
  };

  if (std::isinf(s)) {
    // no quadratic-decay branch; the integral diverges for p <= 2
    if (p <= 2.0) return inf;
    const double lam1 = kappa / a_cap;
    if (r >= lam1) return seg_k(r, inf);
    return seg_a(r, lam1) + seg_k(lam1, inf);
  }

  const double lam_ak = kappa / a_cap;
  double total = 0.0;
  if (kappa * kappa <= a_cap * s) {
    const double lam_ks = s / kappa;
    // A then kappa/l then s/l^2
    if (r < lam_ak) total += seg_a(r, lam_ak);
    const double k_lo = std::max(r, lam_ak);
    if (k_lo < lam_ks) total += seg_k(k_lo, lam_ks);
    total += seg_s(std::max(r, lam_ks), inf);
  } else {
    const double lam_as = std::sqrt(s / a_cap);
    if (r < lam_as) total += seg_a(r, lam_as);
    total += seg_s(std::max(r, lam_as), inf);
  }
  return total;
}

// Contribution of the cell [0, w] adjacent to a singular angle, where the
// vanishing cosine factor is bounded below by (2/pi) * eps, so
// s(eps) <= s_scale / eps.
double singular_cell(double a_cap, double kappa, double s_scale, double w,
                     double r, double p) {
  // constant-in-eps part: the A-branch up to lam_ak
  const double lam_ak = kappa / a_cap;
  double base = 0.0;
  if (r < lam_ak)
    base = std::pow(a_cap, p) * 0.5 * (lam_ak * lam_ak - r * r);
  double sing;
  if (p < 2.0) {
    const double c = std::pow(kappa, 2.0 * p - 2.0) *
                     (1.0 / (2.0 - p) + 1.0 / (2.0 * p - 2.0));
    sing = c * std::pow(s_scale, 2.0 - p) * std::pow(w, p - 1.0) / (p - 1.0);
  } else if (p == 2.0) {
    // kappa-branch: kappa^2 ln(s/(kappa r)) with s = s_scale/eps,
    // plus the s-branch constant kappa^2 / 2
    const double arg = std::max(s_scale / (w * kappa * std::max(r, 1e-300)), 1.0);
    sing = kappa * kappa * w * (std::log(arg) + 1.0 + 0.5);
  } else {
    // p > 2: the kappa-branch alone already integrates; crude cap
    sing = w * radial_tail(a_cap, kappa,
                           std::numeric_limits<double>::infinity(), r, p);
  }
  return base * w + sing;
}

// Upper bound on integral over {|xi|_inf > lambda} of
// min(A, kappa/|xi|, s_j(theta)/|xi|^2)^p for the vertex-j envelope term
// of a 2-D simplex.
double tail_vertex_term(const Simplex& sx, int j, double p, double lambda) {
  const int k1 = (j + 1) % 3, k2 = (j + 2) % 3;
  Vec f1(2), f2(2);
  for (int q = 0; q < 2; ++q) {
    f1[q] = sx.vertices[j][q] - sx.vertices[k1][q];
    f2[q] = sx.vertices[j][q] - sx.vertices[k2][q];
  }
  const double l1 = norm2(f1), l2 = norm2(f2);
  const double phi1 = std::atan2(f1[1], f1[0]);
  const double phi2 = std::atan2(f2[1], f2[0]);
  const double c = 2.0 * sx.volume / (l1 * l2);
  const double a_cap = sx.volume;
  const double kappa = 2.0 * sx.diameter();

  auto wrap = [](double x) {
    x = std::fmod(x, 2.0 * kPi);
    return x < 0.0 ? x + 2.0 * kPi : x;
  };
  std::vector<double> sing = {wrap(phi1 + kPi / 2), wrap(phi1 - kPi / 2),
                              wrap(phi2 + kPi / 2), wrap(phi2 - kPi / 2)};
  std::sort(sing.begin(), sing.end());
  sing.erase(std::unique(sing.begin(), sing.end(),
                         [](double a, double b) { return std::abs(a - b) < 1e-12; }),
             sing.end());

  auto cos1 = [&](double th) { return std::abs(std::cos(th - phi1)); };
  auto cos2 = [&](double th) { return std::abs(std::cos(th - phi2)); };

  double total = 0.0;
  const std::size_t ns = sing.size();
  for (std::size_t i = 0; i < ns; ++i) {
    const double alpha = sing[i];
    const double beta = i + 1 < ns ? sing[i + 1] : sing[0] + 2.0 * kPi;
    const double width = beta - alpha;
    if (width < 1e-14) continue;

    // graded breakpoints toward both singular endpoints
    std::vector<double> bp = {alpha, beta};
    for (int k = 1; k <= 30; ++k) {
      const double off = width * std::ldexp(1.0, -k);
      if (off < width * 0.5 - 1e-18) {
        bp.push_back(alpha + off);
        bp.push_back(beta - off);
      }
    }
    bp.push_back(alpha + 0.5 * width);
    std::sort(bp.begin(), bp.end());
    bp.erase(std::unique(bp.begin(), bp.end()), bp.end());

    for (std::size_t q = 0; q + 1 < bp.size(); ++q) {
      const double u = bp[q], v = bp[q + 1];
      const double w = v - u;
      const bool at_alpha = q == 0;
      const bool at_beta = q + 2 == bp.size();
      if (at_alpha || at_beta) {
        // which factor vanishes at this endpoint?
        const double endp = at_alpha ? alpha : beta;
        const double inner = at_alpha ? v : u;  // non-singular cell end
        const bool first_vanishes = cos1(endp) < cos2(endp);
        const double other_min =
            first_vanishes ? std::min(cos2(endp), cos2(inner))
                           : std::min(cos1(endp), cos1(inner));
        const double s_scale =
            c / ((2.0 / kPi) * std::max(other_min, 1e-15));
        total += singular_cell(a_cap, kappa, s_scale, w, lambda, p);
      } else {
        const double m1 = std::min(cos1(u), cos1(v));
        const double m2 = std::min(cos2(u), cos2(v));
        const double s = c / std::max(m1 * m2, 1e-30);
        total += w * radial_tail(a_cap, kappa, s, lambda, p);
      }
    }
  }
  return total;
}

double tail_bound_simplex(const Simplex& sx, double p, double lambda) {
  if (sx.dim == 1) {
    // |chi_hat| <= min(L, 2/|u|); two half-lines
    const double len = sx.volume;
    if (lambda < 2.0 / len)
      throw ValidationError("lp_norm_ft: truncation radius too small");
    return 2.0 * std::pow(2.0, p) * std::pow(lambda, 1.0 - p) / (p - 1.0);
  }
  double norm_sum = 0.0;  // Minkowski over the three vertex terms
  for (int j = 0; j < 3; ++j)
    norm_sum += std::pow(tail_vertex_term(sx, j, p, lambda), 1.0 / p);
  return std::pow(norm_sum, p);
}

}  // namespace

LpNormResult lp_norm_ft(const Polytope& poly, double exponent, double lambda,
                        int nodes_per_panel, double panel_scale) {
  if (!(exponent > 1.0))
    throw ValidationError(
        "lp_norm_ft: p must exceed 1 (the norm may diverge otherwise)");
  if (poly.dim() > 2)
    throw ValidationError("lp_norm_ft: only 1-D and 2-D polytopes supported");
  if (!(lambda > 0.0)) throw ValidationError("lp_norm_ft: bad truncation radius");
  const double p = exponent;
  const auto simplices = triangulate(poly);

  auto ft_abs = [&](const Vec& xi) {
    KahanSum re, im;
    for (const auto& s : simplices) {
      const Cplx v = simplex_ft(s, xi);
      re.add(v.real());
      im.add(v.imag());
    }
    return std::hypot(re.value(), im.value());
  };

  const double h =
      std::min(kPi / poly.diameter(), lambda / 8.0) * panel_scale;
  const GaussRule& g = gauss_legendre(nodes_per_panel);

  LpNormResult res;
  res.p = p;
  res.lambda = lambda;
  res.nodes_per_panel = nodes_per_panel;

  // Panel counts are rounded so the half-radius box |xi|_inf <= lambda/2 is
  // a union of whole panels; its partial sum is accumulated in the same
  // sweep and used for Richardson extrapolation below.
  double truncated_p = 0.0;
  double truncated_half_p = 0.0;
  if (poly.dim() == 1) {
    long long m = static_cast<long long>(std::ceil(lambda / h));
    m += m % 2;
    const double hh = lambda / m;
    KahanSum sum, half;
    for (long long i = 0; i < m; ++i) {
      const double lo = i * hh;
      KahanSum panel;
      for (int a = 0; a < nodes_per_panel; ++a) {
        const double x = lo + 0.5 * hh * (g.nodes[a] + 1.0);
        panel.add(0.5 * hh * g.weights[a] * std::pow(ft_abs({x}), p));
      }
      sum.add(panel.value());
      if (i < m / 2) half.add(panel.value());
    }
    truncated_p = 2.0 * sum.value();  // conjugate symmetry
    truncated_half_p = 2.0 * half.value();
    res.panels = m;
  } else {
    long long m1 = static_cast<long long>(std::ceil(2.0 * lambda / h));
    m1 += (4 - m1 % 4) % 4;
    long long m2 = static_cast<long long>(std::ceil(lambda / h));
    m2 += m2 % 2;
    const double h1 = 2.0 * lambda / m1, h2 = lambda / m2;
    std::vector<double> rows(m2, 0.0), rows_half(m2, 0.0);
    parallel_for(static_cast<std::size_t>(m2), [&](std::size_t j2) {
      const double lo2 = j2 * h2;
      KahanSum row, row_half;
      Vec xi(2);
      for (long long j1 = 0; j1 < m1; ++j1) {
        const double lo1 = -lambda + j1 * h1;
        const bool in_half = j1 >= m1 / 4 && j1 < 3 * (m1 / 4);
        KahanSum panel;
        for (int b = 0; b < nodes_per_panel; ++b) {
          xi[1] = lo2 + 0.5 * h2 * (g.nodes[b] + 1.0);
          const double w2 = 0.5 * h2 * g.weights[b];
          for (int a = 0; a < nodes_per_panel; ++a) {
            xi[0] = lo1 + 0.5 * h1 * (g.nodes[a] + 1.0);
            panel.add(0.5 * h1 * g.weights[a] * w2 * std::pow(ft_abs(xi), p));
          }
        }
        row.add(panel.value());
        if (in_half && j2 < static_cast<std::size_t>(m2) / 2)
          row_half.add(panel.value());
      }
      rows[j2] = row.value();
      rows_half[j2] = row_half.value();
    });
    KahanSum sum, half;
    for (double r : rows) sum.add(r);
    for (double r : rows_half) half.add(r);
    truncated_p = 2.0 * sum.value();  // upper half-plane doubled
    truncated_half_p = 2.0 * half.value();
    res.panels = m1 * m2;
  }

  double tail_norm = 0.0;
  for (const auto& s : simplices)
    tail_norm += std::pow(tail_bound_simplex(s, p, lambda), 1.0 / p);
  res.tail_bound = std::pow(tail_norm, p);
  res.truncated = std::pow(truncated_p, 1.0 / p);
  res.truncated_half = std::pow(truncated_half_p, 1.0 / p);
  res.total = std::pow(truncated_p + res.tail_bound, 1.0 / p);
  // S(L) = S_inf - c L^{1-p}  =>  eliminate c from the L and L/2 partial sums
  const double q = std::pow(2.0, 1.0 - p);
  double est_p = (truncated_p - q * truncated_half_p) / (1.0 - q);
  est_p = std::max(est_p, truncated_p);
  est_p = std::min(est_p, truncated_p + res.tail_bound);
  res.estimate = std::pow(est_p, 1.0 / p);
  return res;
}

double knapp_norm_bound_check(const Polytope& p, double exponent,
                              double lambda) {
  const LpNormResult r = lp_norm_ft(p, exponent, lambda);
  const double pprime = exponent / (exponent - 1.0);
  return r.total / (static_cast<double>(p.vertex_count()) *
                    std::pow(p.volume(), 1.0 / pprime));
}

DecompositionReport check_decomposition(const Polytope& p, long long samples,
                                        std::uint64_t seed) {
  const auto simplices = triangulate(p);
  const int d = p.dim();
  Vec lo(d, std::numeric_limits<double>::infinity());
  Vec hi(d, -std::numeric_limits<double>::infinity());
  for (const auto& v : p.vertices())
    for (int j = 0; j < d; ++j) {
      lo[j] = std::min(lo[j], v[j]);
      hi[j] = std::max(hi[j], v[j]);
    }
  CounterRng rng(seed);
  DecompositionReport rep;
  for (long long i = 0; i < samples; ++i) {
    Vec y(d);
    for (int j = 0; j < d; ++j)
      y[j] = rng.uniform(static_cast<std::uint64_t>(i), j, lo[j], hi[j]);
    int strict = 0;
    for (const auto& s : simplices)
      if (s.contains(y, 1e-9, /*strict=*/true)) ++strict;
    if (strict == 0) continue;
    ++rep.tested;
    if (strict > 1) ++rep.overlapping;
  }
  rep.pass = rep.overlapping == 0;
  return rep;
}

}  // namespace rlab
