#pragma once

#include <memory>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace fuzzkit {

struct Triangular {
  double a, b, c;
  bool operator==(const Triangular&) const = default;
};

struct Trapezoidal {
  double a, b, c, d;
  bool operator==(const Trapezoidal&) const = default;
};

struct Gaussian {
  double mu, sigma;
  bool operator==(const Gaussian&) const = default;
};

/// 1 exactly at `c`, 0 everywhere else (floating-point equality).
struct Singleton {
  double c;
  bool operator==(const Singleton&) const = default;
};

/// 1 / (1 + |(x - c) / a|^(2b))
struct GeneralizedBell {
  double a, b, c;
  bool operator==(const GeneralizedBell&) const = default;
};

/// 1 / (1 + exp(-a (x - c)))
struct Sigmoid {
  double a, c;
  bool operator==(const Sigmoid&) const = default;
};

/// Linear interpolation between (x, mu) breakpoints; constant beyond the first
/// and last breakpoint.
struct PiecewiseLinear {
  std::vector<std::pair<double, double>> points;
  bool operator==(const PiecewiseLinear&) const = default;
};

/// User-supplied membership function. Implementations must be pure and return
/// values in [0, 1]; everything that works on the built-in shapes (inference,
/// plotting) works on these too. Code generation and DSL printing do not.
class CustomMembership {
 public:
  virtual ~CustomMembership() = default;
  virtual double operator()(double x) const = 0;
  virtual std::string name() const = 0;
};

struct Custom {
  std::shared_ptr<const CustomMembership> impl;
  bool operator==(const Custom&) const = default;
};

using MembershipFunction = std::variant<Triangular, Trapezoidal, Gaussian, Singleton,
                                        GeneralizedBell, Sigmoid, PiecewiseLinear, Custom>;

/// Throws ModelError when the parameters break the shape's invariants.
void validate(const MembershipFunction& mf);

/// Degree of membership of `x`; always in [0, 1].
double eval_mf(const MembershipFunction& mf, double x);

/// Constructor name as used in the DSL (e.g. "TriangularMF").
std::string mf_constructor_name(const MembershipFunction& mf);

/// Numeric parameters in DSL constructor order (flattened pairs for
/// PiecewiseLinear).
std::vector<double> mf_parameters(const MembershipFunction& mf);

/// Interval type-2 membership: the footprint of uncertainty between two
/// type-1 curves.
struct IntervalMF {
  MembershipFunction lower;
  MembershipFunction upper;
  bool operator==(const IntervalMF&) const = default;
};

// Formula kernels shared with the generated code. Keep the expressions in sync
// with codegen.cpp: bit-identical results between the two are tested.
namespace mf_formula {

inline double triangular(double a, double b, double c, double x) {
  if (!(x >= a && x <= c)) return 0.0;
  if (x < b) return (x - a) / (b - a);
  if (x > b) return (c - x) / (c - b);
  return 1.0;
}

inline double trapezoidal(double a, double b, double c, double d, double x) {
  if (!(x >= a && x <= d)) return 0.0;
  if (x < b) return (x - a) / (b - a);
  if (x > c) return (d - x) / (d - c);
  return 1.0;
}

}  // namespace mf_formula

}  // namespace fuzzkit
