#include <doctest.h>

#include <cmath>
#include <numbers>

#include <boost/math/quadrature/tanh_sinh.hpp>

#include "cansys/error.hpp"
#include "cansys/jalg.hpp"
#include "cansys/profile.hpp"
#include "support.hpp"

using namespace cansys;

namespace {

ErrorCode profile_error(auto&& make) {
  try {
    make();
  } catch (const Error& e) {
    return e.code();
  }
  return ErrorCode::InvalidArgument;
}

}  // namespace

TEST_CASE("coefficient matrices of the A-gauge") {
  auto [A, B] = coeff_matrices(ArovProfile::free(1.0), 0.3);
  CHECK(max_abs(A - Matrix2::identity()) == 0.0);
  CHECK(max_abs(B) == 0.0);

  std::tie(A, B) = coeff_matrices(testsupport::step_b(), 0.5);
  CHECK(max_abs(A - Matrix2{1.0, 0.6, 0.6, 1.0}) < 1e-15);
  CHECK(max_abs(B - Matrix2{0.0, 0.6, -0.6, 0.0}) < 1e-15);

  for (double t : {0.0, 0.2, 0.5, 0.7, 1.2, 1.49}) {
    std::tie(A, B) = coeff_matrices(testsupport::two_step(), t);
    CHECK(std::abs((A * jalg::kJay).trace()) < 1e-15);
    CHECK(std::abs((B * jalg::kJay).trace()) < 1e-15);
    CHECK(max_abs(B + B.adjoint()) < 1e-15);
    CHECK(hermitian_defect(A) < 1e-15);
    CHECK(hermitian_eigenvalues(A)[0] >= 0.0);
    CHECK(std::abs((A + B).e21) < 1e-15);  // upper triangular
  }
  CHECK_THROWS_AS(coeff_matrices(testsupport::step_b(), -0.1), Error);
}

TEST_CASE("one-sided values at a jump and the tail") {
  const ArovProfile p = testsupport::step_b();
  CHECK(p.at(1.0, Side::left).b == 0.6);
  CHECK(p.at(1.0, Side::right).b == 0.0);
  CHECK(p.at(0.0).b == 0.6);
  CHECK(p.at(5.0).a == 1.0);
  CHECK(p.breakpoints() == std::vector<double>{0.0, 1.0});
  const auto pieces = p.pieces(2.5);
  REQUIRE(pieces.size() == 2);
  CHECK(pieces[1].first == 1.0);
  CHECK(pieces[1].second == 2.5);
  CHECK(p.pieces(0.5).size() == 1);
  CHECK(p.pieces(0.0).empty());
}

TEST_CASE("sampled coefficients with a repeated time") {
  const Coefficient c(SampledCoef{{0.0, 1.0, 1.0, 2.0}, {0.0, 1.0, 3.0, 3.0}, Interp::linear});
  CHECK(c.value(0.5) == doctest::Approx(0.5));
  CHECK(c.value(1.0, Side::left) == doctest::Approx(1.0));
  CHECK(c.value(1.0, Side::right) == doctest::Approx(3.0));
  CHECK(c.value(7.0) == doctest::Approx(3.0));
  CHECK(c.constant_between(1.2, 1.8));
  CHECK_FALSE(c.constant_between(0.2, 0.8));

  const Coefficient k(SampledCoef{{0.0, 0.5, 1.0}, {2.0, 4.0, 4.0}, Interp::constant});
  CHECK(k.value(0.25) == 2.0);
  CHECK(k.value(0.5, Side::left) == 2.0);
  CHECK(k.value(0.5, Side::right) == 4.0);
}

TEST_CASE("profile validation") {
  auto psd_violation = [] {
    ArovProfile(Coefficient::constant(1.0), Coefficient::step(1.2, 0.0, 1.0), Coefficient::constant(0.0), 1.0, 1.0);
  };
  CHECK(profile_error(psd_violation) == ErrorCode::InvalidProfile);
  CHECK(profile_error([] {
          ArovProfile(Coefficient::constant(-1.0), Coefficient::constant(0.0), Coefficient::constant(0.0), 1.0, 1.0);
        }) == ErrorCode::InvalidProfile);
  CHECK(profile_error([] { ArovProfile::free(0.0); }) == ErrorCode::InvalidProfile);
  CHECK(profile_error([] { Coefficient(StepCoef{{0.0, 1.0, 1.0}, {1.0, 2.0}}); }) == ErrorCode::InvalidProfile);
  CHECK(profile_error([] { Coefficient::bump(1.0, 2.0, 1.0); }) == ErrorCode::InvalidProfile);
  CHECK(profile_error([] { Coefficient(SampledCoef{{0.0, 1.0, 1.0, 1.0}, {1, 2, 3, 4}}); }) ==
        ErrorCode::InvalidProfile);
  // Rounding-level negative determinant is tolerated.
  CHECK_NOTHROW(ArovProfile(Coefficient::constant(1.0), Coefficient::step(1.0 + 1e-14, 0.0, 1.0),
                            Coefficient::constant(0.0), 1.0, 1.0));
  CHECK(sqrt_det({1.0, 1.0 + 1e-14, 0.0}) == 0.0);
}

TEST_CASE("integrals of the battery profiles") {
  CHECK(integral_a(testsupport::step_b(), 1.0) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(integral_sqrt_det(testsupport::step_b(), 1.0) == doctest::Approx(0.8).epsilon(1e-14));
  CHECK(integral_gap(testsupport::step_b(), 1.0) == doctest::Approx(0.4).epsilon(1e-14));
  CHECK(integral_gap(testsupport::step_c(), 3.0) == doctest::Approx(0.4).epsilon(1e-14));
  CHECK(integral_sqrt_det(ArovProfile::free(1.0), 2.5) == doctest::Approx(2.5));

  const double expected = testsupport::rhs_pieces({{0.5, 1.0, 0.3, 0.4}, {0.5, 1.0, 0.5, 0.4}, {0.5, 1.0, 0.5, -0.2}});
  CHECK(integral_gap(testsupport::two_step(), 1.5) == doctest::Approx(expected).epsilon(1e-14));

  // Bump: independent tanh-sinh quadrature of the closed form.
  boost::math::quadrature::tanh_sinh<double> ts;
  const double bump = ts.integrate(
      [](double t) {
        const double b = 0.8 * 0.5 * (1.0 - std::cos(2.0 * std::numbers::pi * t));
        return 2.0 - 2.0 * std::sqrt(1.0 - b * b);
      },
      0.0, 1.0);
  CHECK(std::abs(integral_gap(testsupport::bump_b(), 1.0) - bump) < 1e-12);
}
