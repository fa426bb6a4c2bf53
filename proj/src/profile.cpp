#include "cansys/profile.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "cansys/error.hpp"

namespace cansys {

namespace {

[[noreturn]] void invalid(const std::string& what) { throw Error(ErrorCode::InvalidProfile, what); }

void check_finite(double v, const char* what) {
  if (!std::isfinite(v)) invalid(std::string(what) + " is not finite");
}

struct Validator {
  void operator()(const ConstantCoef& c) const { check_finite(c.value, "constant value"); }

  void operator()(const StepCoef& s) const {
    if (s.breaks.size() < 2 || s.values.size() + 1 != s.breaks.size()) {
      invalid("step coefficient needs n+1 breaks for n values");
    }
    for (std::size_t i = 0; i < s.breaks.size(); ++i) {
      check_finite(s.breaks[i], "step break");
      if (i > 0 && !(s.breaks[i] > s.breaks[i - 1])) invalid("step breaks must increase strictly");
    }
    for (double v : s.values) check_finite(v, "step value");
  }

  void operator()(const BumpCoef& b) const {
    check_finite(b.amplitude, "bump amplitude");
    check_finite(b.start, "bump start");
    check_finite(b.end, "bump end");
    if (!(b.end > b.start)) invalid("bump needs end > start");
  }

  void operator()(const SampledCoef& s) const {
    if (s.t.empty() || s.t.size() != s.values.size()) invalid("sampled coefficient needs matching t/values");
    for (std::size_t i = 0; i < s.t.size(); ++i) {
      check_finite(s.t[i], "sample time");
      check_finite(s.values[i], "sample value");
      if (i > 0 && s.t[i] < s.t[i - 1]) invalid("sample times must be nondecreasing");
      if (i > 1 && s.t[i] == s.t[i - 2]) invalid("a sample time may repeat at most once");
    }
  }
};

// Index of the interval [t_i, t_{i+1}) holding t for the chosen side.
std::ptrdiff_t locate(const std::vector<double>& t, double x, Side side) {
  const auto it = side == Side::right ? std::upper_bound(t.begin(), t.end(), x)
                                      : std::lower_bound(t.begin(), t.end(), x);
  return (it - t.begin()) - 1;
}

double sampled_value(const SampledCoef& s, double x, Side side) {
  const auto& t = s.t;
  if (x < t.front() || (x == t.front() && side == Side::left)) return s.values.front();
  if (x > t.back() || (x == t.back() && side == Side::right)) return s.values.back();
  const std::ptrdiff_t i = locate(t, x, side);
  const auto k = static_cast<std::size_t>(std::max<std::ptrdiff_t>(i, 0));
  if (s.interp == Interp::constant || k + 1 >= t.size()) return s.values[k];
  const double t0 = t[k];
  const double t1 = t[k + 1];
  if (t1 == t0) return s.values[side == Side::left ? k : k + 1];
  const double u = (x - t0) / (t1 - t0);
  return (1.0 - u) * s.values[k] + u * s.values[k + 1];
}

template <class F>
double integrate_piecewise(const ArovProfile& p, double T, F&& integrand) {
  double total = 0.0;
  for (const auto& [lo, hi] : p.pieces(T)) {
    if (p.constant_between(lo, hi)) {
      total += integrand(0.5 * (lo + hi)) * (hi - lo);
      continue;
    }
    double err = 0.0;
    total += boost::math::quadrature::gauss_kronrod<double, 61>::integrate(integrand, lo, hi, 15, 1e-14, &err);
  }
  return total;
}

}  // namespace

Coefficient::Coefficient(Repr repr) : repr_(std::move(repr)) { std::visit(Validator{}, repr_); }

double Coefficient::value(double t, Side side) const {
  return std::visit(
      [&](const auto& r) -> double {
        using T = std::decay_t<decltype(r)>;
        if constexpr (std::is_same_v<T, ConstantCoef>) {
          return r.value;
        } else if constexpr (std::is_same_v<T, StepCoef>) {
          const std::ptrdiff_t k = locate(r.breaks, t, side);
          if (k < 0 || k >= static_cast<std::ptrdiff_t>(r.values.size())) return 0.0;
          return r.values[static_cast<std::size_t>(k)];
        } else if constexpr (std::is_same_v<T, BumpCoef>) {
          if (t < r.start || t > r.end) return 0.0;
          const double phase = 2.0 * std::numbers::pi * (t - r.start) / (r.end - r.start);
          return r.amplitude * 0.5 * (1.0 - std::cos(phase));
        } else {
          return sampled_value(r, t, side);
        }
      },
      repr_);
}

std::vector<double> Coefficient::breakpoints() const {
  return std::visit(
      [](const auto& r) -> std::vector<double> {
        using T = std::decay_t<decltype(r)>;
        if constexpr (std::is_same_v<T, ConstantCoef>) {
          return {};
        } else if constexpr (std::is_same_v<T, StepCoef>) {
          return r.breaks;
        } else if constexpr (std::is_same_v<T, BumpCoef>) {
          return {r.start, r.end};
        } else {
          return r.t;
        }
      },
      repr_);
}

bool Coefficient::constant_between(double lo, double hi) const {
  return std::visit(
      [&](const auto& r) -> bool {
        using T = std::decay_t<decltype(r)>;
        if constexpr (std::is_same_v<T, BumpCoef>) {
          return hi <= r.start || lo >= r.end;
        } else if constexpr (std::is_same_v<T, SampledCoef>) {
          if (r.interp == Interp::constant) return true;
          const double mid = 0.5 * (lo + hi);
          if (mid <= r.t.front() || mid >= r.t.back()) return true;
          const auto k = static_cast<std::size_t>(locate(r.t, mid, Side::right));
          return r.values[k] == r.values[k + 1];
        } else {
          return true;
        }
      },
      repr_);
}

ArovProfile::ArovProfile(Coefficient a, Coefficient b, Coefficient c, double t0, double a_tail)
    : a_(std::move(a)), b_(std::move(b)), c_(std::move(c)), t0_(t0), a_tail_(a_tail) {
  if (!std::isfinite(t0_) || t0_ < 0.0) invalid("T0 must be finite and >= 0");
  if (!std::isfinite(a_tail_) || !(a_tail_ > 0.0)) invalid("a_tail must be > 0");

  breaks_ = {0.0, t0_};
  for (const Coefficient* coef : {&a_, &b_, &c_}) {
    for (double x : coef->breakpoints()) {
      if (x > 0.0 && x < t0_) breaks_.push_back(x);
    }
  }
  std::sort(breaks_.begin(), breaks_.end());
  breaks_.erase(std::unique(breaks_.begin(), breaks_.end()), breaks_.end());

  // Sample every piece densely, including both one-sided limits at its ends.
  constexpr int kSamples = 64;
  auto check = [&](double t, Side side) {
    const CoefficientValues v = at(t, side);
    if (v.a < 0.0) invalid("a(t) < 0 at t = " + std::to_string(t));
    if (v.det() < -kPsdClamp) invalid("a^2 - b^2 - c^2 < 0 at t = " + std::to_string(t));
  };
  for (std::size_t i = 0; i + 1 < breaks_.size(); ++i) {
    const double lo = breaks_[i];
    const double hi = breaks_[i + 1];
    check(lo, Side::right);
    check(hi, Side::left);
    for (int k = 1; k < kSamples; ++k) check(lo + (hi - lo) * k / kSamples, Side::right);
  }
}

ArovProfile ArovProfile::free(double a) {
  return {Coefficient::constant(a), Coefficient::constant(0.0), Coefficient::constant(0.0), 0.0, a};
}

CoefficientValues ArovProfile::at(double t, Side side) const {
  const bool tail = t > t0_ || (t == t0_ && side == Side::right);
  if (tail) return {a_tail_, 0.0, 0.0};
  return {a_.value(t, side), b_.value(t, side), c_.value(t, side)};
}

std::vector<std::pair<double, double>> ArovProfile::pieces(double T) const {
  std::vector<std::pair<double, double>> out;
  for (std::size_t i = 0; i + 1 < breaks_.size(); ++i) {
    const double lo = breaks_[i];
    const double hi = std::min(breaks_[i + 1], T);
    if (hi > lo) out.emplace_back(lo, hi);
    if (breaks_[i + 1] >= T) return out;
  }
  if (T > t0_) out.emplace_back(t0_, T);
  return out;
}

bool ArovProfile::constant_between(double lo, double hi) const {
  if (lo >= t0_) return true;
  return a_.constant_between(lo, hi) && b_.constant_between(lo, hi) && c_.constant_between(lo, hi);
}

double sqrt_det(const CoefficientValues& v) {
  const double d = v.det();
  if (d < -kPsdClamp) invalid("coefficient matrix is not PSD");
  return d > 0.0 ? std::sqrt(d) : 0.0;
}

std::pair<Matrix2, Matrix2> coeff_matrices(const ArovProfile& p, double t, Side side) {
  if (t < 0.0) throw Error(ErrorCode::InvalidArgument, "coeff_matrices needs t >= 0");
  const CoefficientValues v = p.at(t, side);
  if (v.a < 0.0 || v.det() < -kPsdClamp) invalid("A(t) is not PSD at t = " + std::to_string(t));
  const cplx off(v.b, v.c);
  const Matrix2 A{v.a, off, std::conj(off), v.a};
  const Matrix2 B{0.0, off, -std::conj(off), 0.0};
  return {A, B};
}

double integral_a(const ArovProfile& p, double T) {
  return integrate_piecewise(p, T, [&](double t) { return p.at(t).a; });
}

double integral_sqrt_det(const ArovProfile& p, double T) {
  return integrate_piecewise(p, T, [&](double t) { return sqrt_det(p.at(t)); });
}

double integral_gap(const ArovProfile& p, double T) {
  return integrate_piecewise(p, T, [&](double t) {
    const CoefficientValues v = p.at(t);
    return 2.0 * v.a - 2.0 * sqrt_det(v);
  });
}

}  // namespace cansys
