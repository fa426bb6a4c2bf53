#include "cansys/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "cansys/error.hpp"
#include "cansys/jalg.hpp"
#include "cansys/quadrature.hpp"

namespace cansys {

namespace {

constexpr cplx kI{0.0, 1.0};

double log_defect(cplx w, double floor, std::size_t& clamps) {
  const double r2 = std::norm(w);
  if (1.0 - r2 < floor) {
    ++clamps;
    return std::log(floor);
  }
  return std::log1p(-r2);
}

}  // namespace

cplx schur_at(const ArovProfile& p, cplx z, cplx E, const SchurOptions& opts) {
  if (!(std::abs(E) <= 1.0)) throw Error(ErrorCode::InvalidArgument, "Schur parameter needs |E| <= 1");
  const Matrix2 m = transfer(p, z, p.t0(), opts.transfer).matrix;
  if (E == cplx(0.0)) return jalg::mobius(m, 0.0);

  // On the tail M(z, T0 + s) = M(z, T0) diag(e^{i z a s}, e^{-i z a s}), which
  // acts on E as multiplication by e^{2 i z a s}.
  const double a = p.a_tail();
  auto value = [&](double s) { return jalg::mobius(m, std::exp(2.0 * kI * z * a * s) * E); };
  double s = std::max(1.0, p.t0());
  cplx prev = value(s);
  while (p.t0() + 2.0 * s <= opts.t_cap) {
    s *= 2.0;
    const cplx cur = value(s);
    if (std::abs(cur - prev) < opts.e_tol) return cur;
    prev = cur;
  }
  throw Error(ErrorCode::NoConvergence, "Schur limit did not settle before T = " + std::to_string(opts.t_cap));
}

cplx schur_at_pdb(const PdBHamiltonian& H, cplx z, const TransferOptions& opts) {
  if (!H.tail()) throw Error(ErrorCode::InvalidArgument, "PdB Schur evaluation needs a Hamiltonian tail");
  const Matrix2& tail = *H.tail();
  const double d = tail.det().real();
  if (!(d > 0.0)) throw Error(ErrorCode::InvalidArgument, "Hamiltonian tail must be positive definite");
  // tail = a M0 M0* with M0 in SU(1,1); the positive root of M0 M0* differs
  // from M0 by a diagonal phase, which fixes 0 under the Mobius action.
  const Matrix2 root = jalg::psd_sqrt2(tail * (1.0 / std::sqrt(d)));
  const Matrix2 m = pdb_transfer(H, z, H.t_end(), opts).matrix;
  return jalg::mobius(m * root, 0.0);
}

SchurGrid schur_grid(const ArovProfile& p, std::size_t n_nodes, const SchurOptions& opts) {
  if (n_nodes < 2) throw Error(ErrorCode::InvalidArgument, "Schur grid needs at least 2 nodes");
  const TanRule rule = tan_rule(n_nodes);
  SchurGrid g{rule.theta, rule.x, rule.weights, std::vector<cplx>(n_nodes), 0.0, 0.0};
  for_each_index(n_nodes, [&](std::size_t k) { g.w[k] = schur_at(p, g.x[k], 0.0, opts); }, opts.exec);
  g.w_at_i = schur_at(p, kI, 0.0, opts);
  return g;
}

SchurGrid synthetic_grid(std::size_t n_nodes, const std::function<cplx(double)>& w, cplx w_at_i_value) {
  if (n_nodes < 2) throw Error(ErrorCode::InvalidArgument, "grid needs at least 2 nodes");
  const TanRule rule = tan_rule(n_nodes);
  SchurGrid g{rule.theta, rule.x, rule.weights, std::vector<cplx>(n_nodes), w_at_i_value, 0.0};
  for (std::size_t k = 0; k < n_nodes; ++k) g.w[k] = w(g.x[k]);
  return g;
}

double entropy_estimate(const SchurGrid& g, double floor, std::size_t* clamps) {
  if (g.w.empty() || g.w.size() != g.weights.size()) throw Error(ErrorCode::InvalidArgument, "empty grid");
  std::size_t hits = 0;
  double sum = 0.0;
  for (std::size_t k = 0; k < g.w.size(); ++k) sum -= g.weights[k] * log_defect(g.w[k], floor, hits);
  if (clamps) *clamps = hits;
  return std::max(0.0, sum);
}

EntropyReport entropy(const std::function<SchurGrid(std::size_t)>& grid_at, const EntropyOptions& opts) {
  if (opts.min_nodes < 2 || opts.max_nodes < opts.min_nodes) {
    throw Error(ErrorCode::InvalidArgument, "entropy needs 2 <= min_nodes <= max_nodes");
  }
  if (!(opts.tol > 0.0) || !(opts.floor > 0.0)) throw Error(ErrorCode::InvalidArgument, "tolerances must be > 0");
  EntropyReport r;
  std::size_t n = opts.min_nodes;
  for (;;) {
    EntropySample s;
    s.nodes = n;
    s.estimate = entropy_estimate(grid_at(n), opts.floor, &s.clamps);
    r.history.push_back(s);
    const std::size_t h = r.history.size();
    if (h >= 2 && std::abs(r.history[h - 1].estimate - r.history[h - 2].estimate) < opts.tol) {
      r.converged = true;
      break;
    }
    if (n >= opts.max_nodes) break;
    n = std::min(2 * n, opts.max_nodes);
  }
  r.value = r.history.back().estimate;
  const std::size_t h = r.history.size();
  if (!r.converged && h >= 2) {
    const auto& last = r.history[h - 1];
    const auto& before = r.history[h - 2];
    r.infinite = last.estimate > before.estimate && last.clamps > before.clamps;
  }
  return r;
}

EntropyReport entropy(const ArovProfile& p, const EntropyOptions& opts, const SchurOptions& sopts) {
  return entropy([&](std::size_t n) { return schur_grid(p, n, sopts); }, opts);
}

double sigma_type(const ArovProfile& p, double T) {
  if (!(T >= 0.0)) throw Error(ErrorCode::InvalidArgument, "T must be >= 0");
  return integral_sqrt_det(p, T);
}

MeanLogCheck mean_log_a22_check(const ArovProfile& p, double T, std::size_t n_nodes, const SchurOptions& opts) {
  if (n_nodes < 2) throw Error(ErrorCode::InvalidArgument, "mean-log check needs at least 2 nodes");
  const TanRule rule = tan_rule(n_nodes);
  std::vector<cplx> z(rule.x.begin(), rule.x.end());
  const auto m = transfer_nodes(p, z, T, opts.transfer, opts.exec);
  MeanLogCheck c;
  for (std::size_t k = 0; k < n_nodes; ++k) c.lhs += rule.weights[k] * std::log(std::abs(m[k].e22));
  const TransferAtI at = transfer_at_i(p, T, opts.transfer);
  c.rhs = std::log(at.lambda) - sigma_type(p, T);
  c.residual = std::abs(c.lhs - c.rhs);
  return c;
}

SumRuleReport sumrule(const ArovProfile& p, const SumRuleOptions& opts) {
  SumRuleReport r;
  r.rhs_coefficient_integral = integral_gap(p, p.t0());
  r.entropy = entropy(p, opts.entropy, opts.schur);
  r.lhs_entropy = r.entropy.value;
  r.abs_diff = std::abs(r.lhs_entropy - r.rhs_coefficient_integral);
  r.rel_diff = r.rhs_coefficient_integral > 0.0 ? r.abs_diff / r.rhs_coefficient_integral : 0.0;
  r.agrees = !r.entropy.infinite &&
             r.abs_diff <= std::max(opts.abs_tol, opts.rel_tol * r.rhs_coefficient_integral);
  r.w_at_i = schur_at(p, kI, 0.0, opts.schur);

  const double scale = p.t0() > 0.0 ? p.t0() : 1.0;
  const std::size_t n = std::max<std::size_t>(1, opts.sigma_points);
  std::vector<double> ts;
  for (std::size_t k = 0; k <= n; ++k) ts.push_back(scale * static_cast<double>(k) / static_cast<double>(n));
  ts.push_back(1.5 * scale);
  ts.push_back(2.0 * scale);
  for (double T : ts) {
    SigmaPoint s{T, integral_a(p, T), sigma_type(p, T), 0.0};
    s.gap = 2.0 * (s.integral_a - s.sigma);
    r.sigma_series.push_back(s);
  }
  return r;
}

double herglotz_density(cplx w) {
  const double den = std::norm(1.0 + w);
  if (den <= 1e-28) throw Error(ErrorCode::PoleHit, "density undefined at w = -1");
  return (1.0 - std::norm(w)) / den;
}

HerglotzCheck herglotz_identity_check(const ArovProfile& p, std::size_t n_nodes, const SchurOptions& opts,
                                      double imag_tol) {
  HerglotzCheck c;
  c.w_at_i = schur_at(p, kI, 0.0, opts);
  if (std::abs(c.w_at_i.imag()) > imag_tol || !(c.w_at_i.real() > -1.0)) {
    throw Error(ErrorCode::ComplexWAtI, "w(i) = " + std::to_string(c.w_at_i.real()) + " + " +
                                            std::to_string(c.w_at_i.imag()) + "i is not real and > -1");
  }
  const SchurGrid g = schur_grid(p, n_nodes, opts);
  constexpr double kFloor = 1e-15;
  std::size_t clamps = 0;
  for (std::size_t k = 0; k < n_nodes; ++k) {
    if (std::norm(1.0 + g.w[k]) <= 1e-28) throw Error(ErrorCode::PoleHit, "w = -1 on the grid");
    const double log_density = log_defect(g.w[k], kFloor, clamps) - std::log(std::norm(1.0 + g.w[k]));
    c.lhs -= g.weights[k] * log_density;
  }
  c.rhs = entropy_estimate(g, kFloor) + 2.0 * std::log1p(c.w_at_i.real());
  c.residual = std::abs(c.lhs - c.rhs);
  return c;
}

}  // namespace cansys
