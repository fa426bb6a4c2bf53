#pragma once

#include <cstddef>
#include <vector>

namespace cansys {

/// Gauss-Legendre rule on [-1, 1], nodes ascending.
struct GaussLegendre {
  std::vector<double> nodes;
  std::vector<double> weights;
};

/// Cached n-point rule (Newton iteration on the three-term recurrence).
/// Thread safe; the returned reference stays valid for the program lifetime.
const GaussLegendre& gauss_legendre(std::size_t n);

/// Nodes of the weight dx / (pi (1 + x^2)) on the real line obtained from an
/// n-point rule in theta = atan x. Weights sum to 1.
struct TanRule {
  std::vector<double> theta;
  std::vector<double> x;
  std::vector<double> weights;
};

TanRule tan_rule(std::size_t n);

}  // namespace cansys
