#pragma once

#include <cmath>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace rlab {

using Vec = std::vector<double>;

// Bad argument values, rejected configs, degenerate inputs.
struct ValidationError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// Point outside the declared domain of an operation.
struct DomainError : std::domain_error {
  using std::domain_error::domain_error;
};

// Invariant failure while building a value (non-positive Q, degenerate
// simplex, failed bisection, ...).
struct ConstructionError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Quadrature/panel budget exceeded.
struct BudgetError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

inline double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

inline double norm2(std::span<const double> a) { return std::sqrt(dot(a, a)); }

// Compensated accumulator so that summation order mismatches stay below
// the documented 1e-12 reproducibility tolerance.
struct KahanSum {
  double sum = 0.0;
  double carry = 0.0;
  void add(double x) {
    double y = x - carry;
    double t = sum + y;
    carry = (t - sum) - y;
    sum = t;
  }
  double value() const { return sum; }
};

}  // namespace rlab
