#pragma once

#include <iosfwd>
#include <optional>
#include <span>
#include <vector>

#include "cansys/matrix2.hpp"
#include "cansys/profile.hpp"
#include "cansys/transfer.hpp"

namespace cansys {

/// Hamiltonian H(t) of the B = 0 chain d/dt M jay = -i z M H.
///
/// Samples sit at nondecreasing times starting at 0; a repeated time marks a
/// jump (left limit first). Between samples H is interpolated by the cubic
/// through the four nearest samples of the same smooth segment. Past the last
/// sample H equals the optional constant tail.
class PdBHamiltonian {
 public:
  /// Validates: Hermitian, PSD and h11 = h22 (needed for det of the chain to
  /// stay 1). Throws InvalidArgument.
  PdBHamiltonian(std::vector<double> t, std::vector<Matrix2> h, std::optional<Matrix2> tail = {});

  /// H sampled at 0 and T with the same value in between, plus that value as tail.
  static PdBHamiltonian constant(const Matrix2& h, double T);

  Matrix2 at(double t, Side side = Side::right) const;

  const std::vector<double>& times() const { return t_; }
  const std::vector<Matrix2>& values() const { return h_; }
  const std::optional<Matrix2>& tail() const { return tail_; }
  double t_end() const { return t_.back(); }

  /// Sample cells covering [0, T] (tail pieces past t_end).
  std::vector<std::pair<double, double>> pieces(double T) const;
  bool constant_between(double lo, double hi) const;

  /// [first, last) sample index ranges of the smooth segments.
  const std::vector<std::pair<std::size_t, std::size_t>>& segments() const { return seg_; }

 private:
  std::size_t segment_of(double t, Side side) const;

  std::vector<double> t_;
  std::vector<Matrix2> h_;
  std::optional<Matrix2> tail_;
  std::vector<std::pair<std::size_t, std::size_t>> seg_;
};

struct PdBOptions {
  TransferOptions transfer;
  /// Largest spacing of the H samples inside a smooth piece.
  double sample_step = 1e-2;
};

/// H(t) = M(0,t) A(t) M(0,t)* sampled on [0, T], aligned to the profile's
/// breakpoints. The constant tail is attached when T >= T0.
PdBHamiltonian to_pdb(const ArovProfile& p, double T, const PdBOptions& opts = {});

/// max over samples of |det H(t) - det A(t)|.
double det_consistency(const ArovProfile& p, const PdBHamiltonian& H);

TransferResult pdb_transfer(const PdBHamiltonian& H, cplx z, double T, const TransferOptions& opts = {});

std::vector<Matrix2> pdb_transfer_path(const PdBHamiltonian& H, cplx z, std::span<const double> times,
                                       const TransferOptions& opts = {});

struct ArovFromPdBOptions {
  TransferOptions transfer{.step = 1e-3, .estimate_error = false};
  /// Successive finite-difference extractions must agree to this.
  double fd_tol = 1e-6;
  double initial_fd_step = 1e-2;
  int max_halvings = 30;
  /// Largest spacing of the output samples inside a smooth segment.
  double sample_step = 1e-2;
};

/// Recovers the A-gauge profile by normalizing the chain at z = i and
/// differentiating lambda and h/lambda. The result is sampled at the
/// Hamiltonian's times, refined to sample_step, with linear interpolation;
/// a_tail = sqrt(det H_tail) when H has a tail and 1 otherwise.
ArovProfile arov_from_pdb(const PdBHamiltonian& H, const ArovFromPdBOptions& opts = {});

/// Ordered product of exp(-i z H(tau_k) jay dt_k) over the cells of the
/// partition, tau_k the cell midpoint.
Matrix2 mult_integral(const PdBHamiltonian& H, cplx z, std::span<const double> partition);

/// Columns t,h11,re_h12,im_h12,h22; a final row with t = inf holds the tail.
void write_pdb_csv(std::ostream& os, const PdBHamiltonian& H);
PdBHamiltonian read_pdb_csv(std::istream& is);

}  // namespace cansys
