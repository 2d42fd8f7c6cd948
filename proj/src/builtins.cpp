#include "rlab/builtins.hpp"

#include <cmath>

namespace rlab {

const std::vector<BuiltinInfo>& builtin_table() {
  static const std::vector<BuiltinInfo> table = {
      {"parabola", {2}, 0.5, true, "x^2 in the plane"},
      {"quartic-curve", {4}, 0.25, true, "x^4 in the plane"},
      {"paraboloid", {2, 2}, 1.0, true, "x1^2 + x2^2"},
      {"mixed", {2, 4}, 0.75, true, "x1^2 + x2^4"},
      {"quartic-quartic", {4, 4}, 0.5, true, "x1^4 + x2^4"},
      {"saddle", {2, 2}, 1.0, false, "x1*x2, no-fpt demo only"},
  };
  return table;
}

MixedHomogeneousPoly builtin_poly(const std::string& name) {
  if (name == "parabola")
    return MixedHomogeneousPoly({{{2}, 1.0}}, make_weights({2}));
  if (name == "quartic-curve")
    return MixedHomogeneousPoly({{{4}, 1.0}}, make_weights({4}));
  if (name == "paraboloid")
    return MixedHomogeneousPoly({{{2, 0}, 1.0}, {{0, 2}, 1.0}},
                                make_weights({2, 2}));
  if (name == "mixed")
    return MixedHomogeneousPoly({{{2, 0}, 1.0}, {{0, 4}, 1.0}},
                                make_weights({2, 4}));
  if (name == "quartic-quartic")
    return MixedHomogeneousPoly({{{4, 0}, 1.0}, {{0, 4}, 1.0}},
                                make_weights({4, 4}));
  if (name == "saddle")
    // x1*x2 changes sign; the positivity invariant rejects it.
    return MixedHomogeneousPoly({{{1, 1}, 1.0}}, make_weights({2, 2}));
  throw ValidationError("unknown builtin surface: " + name);
}

Remainder builtin_remainder(const std::string& name, const WeightSystem& w,
                            double eps) {
  if (name == "none") return Remainder();
  if (name == "cubic_perturbation") {
    std::vector<long long> a = w.a;
    return Remainder(
        [a, eps](const Vec& y) {
          double s = 0.0;
          for (std::size_t j = 0; j < a.size(); ++j)
            s += eps * std::pow(y[j], static_cast<double>(a[j] + 1));
          return s;
        },
        [a, eps](const Vec& y) {
          Vec g(y.size());
          for (std::size_t j = 0; j < a.size(); ++j)
            g[j] = eps * (a[j] + 1) *
                   std::pow(y[j], static_cast<double>(a[j]));
          return g;
        });
  }
  throw ValidationError("unknown builtin remainder: " + name);
}

SurfacePatch make_builtin_surface(const std::string& name, double halfwidth,
                                  double rho0, double rho1, double offset,
                                  const std::string& remainder) {
  MixedHomogeneousPoly q = builtin_poly(name);
  Remainder r = builtin_remainder(remainder, q.weights());
  return SurfacePatch(std::move(q), std::move(r), offset, halfwidth,
                      CutoffProfile{rho0, rho1});
}

}  // namespace rlab
