#pragma once

#include <string>
#include <vector>

#include "rlab/surface.hpp"

namespace rlab {

struct BuiltinInfo {
  std::string name;
  std::vector<long long> a;
  double r_predicted = 0.0;  // (n-1)/m
  bool finite_polyhedral_type = true;
  std::string note;
};

// parabola, quartic-curve, paraboloid, mixed, quartic-quartic, saddle.
const std::vector<BuiltinInfo>& builtin_table();

// Q for a constructible builtin (throws ValidationError for unknown names,
// ConstructionError for the saddle, which has no positive Q).
MixedHomogeneousPoly builtin_poly(const std::string& name);

// Named builtin remainder: "none" or "cubic_perturbation"
// (eps * sum_j y_j^{a_j + 1}).
Remainder builtin_remainder(const std::string& name, const WeightSystem& w,
                            double eps = 0.1);

SurfacePatch make_builtin_surface(const std::string& name,
                                  double halfwidth = 1.0, double rho0 = 0.5,
                                  double rho1 = 0.9, double offset = 0.0,
                                  const std::string& remainder = "none");

}  // namespace rlab
