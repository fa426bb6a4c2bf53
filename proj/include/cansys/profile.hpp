#pragma once

#include <utility>
#include <variant>
#include <vector>

#include "cansys/matrix2.hpp"

namespace cansys {

/// Which one-sided limit to take at a jump.
enum class Side { left, right };

struct ConstantCoef {
  double value = 0.0;
};

/// Piecewise constant: values[k] on [breaks[k], breaks[k+1]), zero elsewhere.
struct StepCoef {
  std::vector<double> breaks;
  std::vector<double> values;
};

/// amplitude * (1 - cos(2 pi (t - start) / (end - start))) / 2 on [start, end], zero elsewhere.
struct BumpCoef {
  double amplitude = 0.0;
  double start = 0.0;
  double end = 1.0;
};

enum class Interp { constant, linear };

/// Tabulated values at nondecreasing times; a repeated time marks a jump
/// (first value is the left limit). Held constant outside the table.
struct SampledCoef {
  std::vector<double> t;
  std::vector<double> values;
  Interp interp = Interp::linear;
};

/// One real coefficient function of t >= 0.
class Coefficient {
 public:
  using Repr = std::variant<ConstantCoef, StepCoef, BumpCoef, SampledCoef>;

  Coefficient() : repr_(ConstantCoef{}) {}
  Coefficient(Repr repr);  // NOLINT(google-explicit-constructor)

  static Coefficient constant(double v) { return Coefficient(ConstantCoef{v}); }
  static Coefficient step(double value, double start, double end) {
    return Coefficient(StepCoef{{start, end}, {value}});
  }
  static Coefficient bump(double amplitude, double start, double end) {
    return Coefficient(BumpCoef{amplitude, start, end});
  }

  double value(double t, Side side = Side::right) const;

  /// Points where the function may be discontinuous or lose smoothness.
  std::vector<double> breakpoints() const;

  /// True when the function is constant on the open interval (lo, hi),
  /// provided (lo, hi) contains no breakpoint.
  bool constant_between(double lo, double hi) const;

  const Repr& repr() const { return repr_; }

 private:
  Repr repr_;
};

struct CoefficientValues {
  double a = 0.0;
  double b = 0.0;
  double c = 0.0;

  double det() const { return a * a - b * b - c * c; }
};

/// A-gauge coefficient triple (a, b, c) on [0, T0] followed by the free tail
/// a = a_tail, b = c = 0 on [T0, infinity).
class ArovProfile {
 public:
  /// Validates the profile; throws InvalidProfile.
  ArovProfile(Coefficient a, Coefficient b, Coefficient c, double t0, double a_tail);

  /// a = a_tail everywhere, b = c = 0.
  static ArovProfile free(double a = 1.0);

  CoefficientValues at(double t, Side side = Side::right) const;

  /// Sorted breakpoints in [0, T0], always containing 0 and T0.
  const std::vector<double>& breakpoints() const { return breaks_; }

  /// Breakpoint-aligned pieces covering [0, T]; pieces past T0 are the tail.
  std::vector<std::pair<double, double>> pieces(double T) const;

  bool constant_between(double lo, double hi) const;

  double t0() const { return t0_; }
  double a_tail() const { return a_tail_; }
  const Coefficient& a() const { return a_; }
  const Coefficient& b() const { return b_; }
  const Coefficient& c() const { return c_; }

 private:
  Coefficient a_, b_, c_;
  double t0_;
  double a_tail_;
  std::vector<double> breaks_;
};

inline constexpr double kPsdClamp = 1e-12;

/// sqrt(a^2 - b^2 - c^2) with values in [-kPsdClamp, 0) clamped to zero;
/// throws InvalidProfile below that.
double sqrt_det(const CoefficientValues& v);

/// A = [[a, b+ic], [b-ic, a]], B = [[0, b+ic], [-b+ic, 0]].
std::pair<Matrix2, Matrix2> coeff_matrices(const ArovProfile& p, double t, Side side = Side::right);

/// Integrals over [0, T] of a, sqrt(det A) and tr A - 2 sqrt(det A).
double integral_a(const ArovProfile& p, double T);
double integral_sqrt_det(const ArovProfile& p, double T);
double integral_gap(const ArovProfile& p, double T);

}  // namespace cansys
