#include "cansys/gauge.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>
#include <string>

#include "cansys/error.hpp"
#include "cansys/jalg.hpp"
#include "chain.hpp"

namespace cansys {

namespace {

[[noreturn]] void bad(const std::string& what) { throw Error(ErrorCode::InvalidArgument, what); }

Matrix2 sanitize(const Matrix2& h, std::size_t k) {
  if (!h.is_finite()) bad("H sample " + std::to_string(k) + " is not finite");
  const double scale = std::max(1.0, max_abs(h));
  if (hermitian_defect(h) > 1e-10 * scale) bad("H sample " + std::to_string(k) + " is not Hermitian");
  if (std::abs(h.e11 - h.e22) > 1e-8 * scale) {
    bad("H sample " + std::to_string(k) + " has h11 != h22 (tr(H jay) must vanish)");
  }
  if (hermitian_eigenvalues(h)[0] < -1e-10 * scale) bad("H sample " + std::to_string(k) + " is not PSD");
  const double d = 0.5 * (h.e11.real() + h.e22.real());
  const cplx off = 0.5 * (h.e12 + std::conj(h.e21));
  return {d, off, std::conj(off), d};
}

struct PdbModel {
  const PdBHamiltonian& H;

  std::vector<std::pair<double, double>> pieces(double T) const { return H.pieces(T); }
  bool constant_between(double lo, double hi) const { return H.constant_between(lo, hi); }
  std::pair<Matrix2, Matrix2> coefficients(double t, Side side) const { return {H.at(t, side), Matrix2::zero()}; }
};

void require_upper_half_plane(cplx z) {
  if (!std::isfinite(z.real()) || !std::isfinite(z.imag()) || z.imag() < 0.0) {
    bad("z must be finite with Im z >= 0");
  }
}

// Side convention for the k-th sample: the first of a repeated pair and the
// final sample are left limits.
Side sample_side(const std::vector<double>& t, std::size_t k) {
  if (k + 1 < t.size() && t[k + 1] == t[k]) return Side::left;
  if (k + 1 == t.size() && k > 0) return Side::left;
  return Side::right;
}

}  // namespace

PdBHamiltonian::PdBHamiltonian(std::vector<double> t, std::vector<Matrix2> h, std::optional<Matrix2> tail)
    : t_(std::move(t)), h_(std::move(h)), tail_(std::move(tail)) {
  if (t_.empty() || t_.size() != h_.size()) bad("Hamiltonian needs matching nonempty times and values");
  if (t_.front() != 0.0) bad("Hamiltonian samples must start at t = 0");
  for (std::size_t i = 0; i < t_.size(); ++i) {
    if (!std::isfinite(t_[i])) bad("sample time is not finite");
    if (i > 0 && t_[i] < t_[i - 1]) bad("sample times must be nondecreasing");
    if (i > 1 && t_[i] == t_[i - 2]) bad("a sample time may repeat at most once");
    h_[i] = sanitize(h_[i], i);
  }
  if (tail_) tail_ = sanitize(*tail_, t_.size());

  std::size_t start = 0;
  for (std::size_t i = 1; i < t_.size(); ++i) {
    if (t_[i] == t_[i - 1]) {
      seg_.emplace_back(start, i);
      start = i;
    }
  }
  seg_.emplace_back(start, t_.size());
}

PdBHamiltonian PdBHamiltonian::constant(const Matrix2& h, double T) {
  if (!(T > 0.0)) bad("constant Hamiltonian needs T > 0");
  return PdBHamiltonian({0.0, T}, {h, h}, h);
}

std::size_t PdBHamiltonian::segment_of(double t, Side side) const {
  if (side == Side::right) {
    std::size_t k = 0;
    for (std::size_t i = 0; i < seg_.size(); ++i) {
      if (t_[seg_[i].first] <= t) k = i;
    }
    return k;
  }
  for (std::size_t i = 0; i < seg_.size(); ++i) {
    if (t_[seg_[i].second - 1] >= t) return i;
  }
  return seg_.size() - 1;
}

namespace {

struct Stencil {
  std::size_t start = 0;
  std::size_t count = 1;
};

Stencil stencil_for(const std::vector<double>& t, std::pair<std::size_t, std::size_t> seg, double x) {
  const auto [s, e] = seg;
  const std::size_t n = e - s;
  if (n <= 1) return {s, 1};
  auto it = std::upper_bound(t.begin() + static_cast<std::ptrdiff_t>(s), t.begin() + static_cast<std::ptrdiff_t>(e), x);
  std::size_t j = static_cast<std::size_t>(it - t.begin());
  j = std::clamp<std::size_t>(j == 0 ? 0 : j - 1, s, e - 2);
  const std::size_t count = std::min<std::size_t>(4, n);
  const std::size_t lo = j >= s + 1 ? j - 1 : s;
  return {std::min(lo, e - count), count};
}

}  // namespace

Matrix2 PdBHamiltonian::at(double t, Side side) const {
  if (!(t >= 0.0)) bad("H(t) needs t >= 0");
  const double end = t_.back();
  if (t > end || (t == end && side == Side::right && tail_)) {
    if (!tail_) bad("t = " + std::to_string(t) + " is past the last sample and H has no tail");
    return *tail_;
  }
  const auto st = stencil_for(t_, seg_[segment_of(t, side)], t);
  if (st.count == 1) return h_[st.start];
  Matrix2 out = Matrix2::zero();
  for (std::size_t i = st.start; i < st.start + st.count; ++i) {
    double w = 1.0;
    for (std::size_t j = st.start; j < st.start + st.count; ++j) {
      if (j != i) w *= (t - t_[j]) / (t_[i] - t_[j]);
    }
    out += h_[i] * w;
  }
  return out;
}

std::vector<std::pair<double, double>> PdBHamiltonian::pieces(double T) const {
  std::vector<std::pair<double, double>> out;
  for (std::size_t i = 1; i < t_.size() && t_[i - 1] < T; ++i) {
    const double hi = std::min(t_[i], T);
    if (hi > t_[i - 1]) out.emplace_back(t_[i - 1], hi);
  }
  if (T > t_.back()) {
    if (!tail_) bad("T = " + std::to_string(T) + " is past the last sample and H has no tail");
    out.emplace_back(t_.back(), T);
  }
  return out;
}

bool PdBHamiltonian::constant_between(double lo, double hi) const {
  if (lo >= t_.back()) return true;
  const double mid = 0.5 * (lo + hi);
  const auto st = stencil_for(t_, seg_[segment_of(mid, Side::right)], mid);
  for (std::size_t i = st.start + 1; i < st.start + st.count; ++i) {
    const Matrix2& a = h_[i];
    const Matrix2& b = h_[st.start];
    if (a.e11 != b.e11 || a.e12 != b.e12 || a.e21 != b.e21 || a.e22 != b.e22) return false;
  }
  return true;
}

PdBHamiltonian to_pdb(const ArovProfile& p, double T, const PdBOptions& opts) {
  if (!(T >= 0.0)) bad("T must be >= 0");
  if (!(opts.sample_step > 0.0)) bad("sample_step must be > 0");
  std::vector<double> times;
  std::vector<Side> sides;
  for (const auto& [lo, hi] : p.pieces(T)) {
    const auto n = static_cast<std::size_t>(std::max(1.0, std::ceil((hi - lo) / opts.sample_step - 1e-9)));
    for (std::size_t k = 0; k <= n; ++k) {
      times.push_back(k == n ? hi : lo + (hi - lo) * static_cast<double>(k) / static_cast<double>(n));
      sides.push_back(k == n ? Side::left : Side::right);
    }
  }
  if (times.empty()) {
    times.push_back(0.0);
    sides.push_back(Side::right);
  }
  const auto chain = transfer_path(p, 0.0, times, opts.transfer);
  std::vector<Matrix2> h(times.size());
  for (std::size_t k = 0; k < times.size(); ++k) {
    h[k] = chain[k] * coeff_matrices(p, times[k], sides[k]).first * chain[k].adjoint();
  }
  std::optional<Matrix2> tail;
  if (T >= p.t0()) tail = chain.back() * chain.back().adjoint() * p.a_tail();
  return {std::move(times), std::move(h), tail};
}

double det_consistency(const ArovProfile& p, const PdBHamiltonian& H) {
  double worst = 0.0;
  const auto& t = H.times();
  for (std::size_t k = 0; k < t.size(); ++k) {
    const double det_a = p.at(t[k], sample_side(t, k)).det();
    worst = std::max(worst, std::abs(H.values()[k].det() - det_a));
  }
  return worst;
}

TransferResult pdb_transfer(const PdBHamiltonian& H, cplx z, double T, const TransferOptions& opts) {
  require_upper_half_plane(z);
  return detail::solve_with_estimate(PdbModel{H}, z, T, opts, Gauge::pdb);
}

std::vector<Matrix2> pdb_transfer_path(const PdBHamiltonian& H, cplx z, std::span<const double> times,
                                       const TransferOptions& opts) {
  require_upper_half_plane(z);
  return detail::integrate_path(PdbModel{H}, z, times, {opts.step, opts.scheme, opts.exploit_constant_pieces});
}

namespace {

struct FdRule {
  std::vector<double> offsets;
  std::vector<double> weights;  // multiplied by 1/delta
};

const FdRule kCentral{{-1.0, 1.0}, {-0.5, 0.5}};
const FdRule kForward{{0.0, 1.0, 2.0}, {-1.5, 2.0, -0.5}};
const FdRule kBackward{{-2.0, -1.0, 0.0}, {0.5, -2.0, 1.5}};

struct Extracted {
  std::vector<double> a;
  std::vector<cplx> bc;
};

}  // namespace

ArovProfile arov_from_pdb(const PdBHamiltonian& H, const ArovFromPdBOptions& opts) {
  if (H.times().size() < 2) bad("arov_from_pdb needs at least two samples");
  if (!(opts.sample_step > 0.0)) bad("sample_step must be positive");

  // Output grid: the Hamiltonian's samples plus uniform fill inside each
  // smooth segment, with the segment bounds of every point.
  std::vector<double> ts;
  std::vector<std::pair<double, double>> bounds;
  double shortest = opts.initial_fd_step * 4.0;
  for (const auto& [s, e] : H.segments()) {
    const double lo = H.times()[s];
    const double hi = H.times()[e - 1];
    if (hi <= lo) throw Error(ErrorCode::NonsmoothHamiltonian, "isolated sample at t = " + std::to_string(lo));
    shortest = std::min(shortest, hi - lo);
    std::vector<double> seg(H.times().begin() + s, H.times().begin() + e);
    const auto cells = static_cast<std::size_t>(std::ceil((hi - lo) / opts.sample_step));
    for (std::size_t k = 1; k < cells; ++k) seg.push_back(lo + (hi - lo) * static_cast<double>(k) / cells);
    std::sort(seg.begin(), seg.end());
    seg.erase(std::unique(seg.begin(), seg.end()), seg.end());
    for (double t : seg) {
      ts.push_back(t);
      bounds.emplace_back(lo, hi);
    }
  }
  const std::size_t n = ts.size();
  const double delta0 = std::min(opts.initial_fd_step, shortest / 4.0);

  auto extract = [&](double delta) {
    std::vector<const FdRule*> rules(n);
    std::vector<double> query;
    for (std::size_t k = 0; k < n; ++k) {
      const auto [lo, hi] = bounds[k];
      const double t = ts[k];
      if (t - delta >= lo && t + delta <= hi) {
        rules[k] = &kCentral;
      } else if (t + 2.0 * delta <= hi) {
        rules[k] = &kForward;
      } else {
        rules[k] = &kBackward;
      }
      query.push_back(t);
      for (double o : rules[k]->offsets) query.push_back(t + o * delta);
    }
    std::sort(query.begin(), query.end());
    query.erase(std::unique(query.begin(), query.end()), query.end());
    const auto chain = pdb_transfer_path(H, cplx(0.0, 1.0), query, opts.transfer);

    std::map<double, std::pair<double, cplx>> tri;  // t -> (log lambda, h / lambda)
    for (std::size_t q = 0; q < query.size(); ++q) {
      try {
        const auto split = jalg::arov_normalize(chain[q]);
        tri[query[q]] = {std::log(split.factor.lambda), split.factor.h / split.factor.lambda};
      } catch (const Error& e) {
        throw Error(ErrorCode::NormalizationFailure,
                    "at t = " + std::to_string(query[q]) + ": " + std::string(e.what()));
      }
    }

    Extracted out{std::vector<double>(n), std::vector<cplx>(n)};
    for (std::size_t k = 0; k < n; ++k) {
      double dlog = 0.0;
      cplx dratio = 0.0;
      const FdRule& r = *rules[k];
      for (std::size_t i = 0; i < r.offsets.size(); ++i) {
        const auto& v = tri.at(ts[k] + r.offsets[i] * delta);
        dlog += r.weights[i] * v.first;
        dratio += r.weights[i] * v.second;
      }
      const double lambda = std::exp(tri.at(ts[k]).first);
      out.a[k] = dlog / delta;
      out.bc[k] = 0.5 * lambda * lambda * dratio / delta;
    }
    return out;
  };

  double delta = delta0;
  Extracted prev = extract(delta);
  bool converged = false;
  for (int m = 0; m < opts.max_halvings; ++m) {
    delta *= 0.5;
    Extracted cur = extract(delta);
    double change = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
      change = std::max({change, std::abs(cur.a[k] - prev.a[k]), std::abs(cur.bc[k] - prev.bc[k])});
    }
    prev = std::move(cur);
    if (change < opts.fd_tol) {
      converged = true;
      break;
    }
  }
  if (!converged) {
    throw Error(ErrorCode::NonsmoothHamiltonian, "finite differences did not settle under step halving");
  }

  std::vector<double> b(n), c(n);
  for (std::size_t k = 0; k < n; ++k) {
    b[k] = prev.bc[k].real();
    c[k] = prev.bc[k].imag();
  }
  const double a_tail = H.tail() ? std::sqrt(std::max(0.0, H.tail()->det().real())) : 1.0;
  return ArovProfile(Coefficient(SampledCoef{ts, prev.a, Interp::linear}),
                     Coefficient(SampledCoef{ts, b, Interp::linear}),
                     Coefficient(SampledCoef{ts, c, Interp::linear}), H.t_end(), a_tail);
}

Matrix2 mult_integral(const PdBHamiltonian& H, cplx z, std::span<const double> partition) {
  if (partition.size() < 2) bad("partition needs at least two points");
  Matrix2 out = Matrix2::identity();
  for (std::size_t k = 1; k < partition.size(); ++k) {
    const double dt = partition[k] - partition[k - 1];
    if (dt < 0.0) bad("partition must be nondecreasing");
    if (dt == 0.0) continue;
    const Matrix2 h = H.at(partition[k - 1] + 0.5 * dt);
    out = out * expm(detail::times_jay(h) * (cplx(0.0, -1.0) * z * dt));
  }
  return out;
}

namespace {

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_row(std::ostream& os, const std::string& t, const Matrix2& h) {
  os << t << ',' << fmt(h.e11.real()) << ',' << fmt(h.e12.real()) << ',' << fmt(h.e12.imag()) << ','
     << fmt(h.e22.real()) << '\n';
}

}  // namespace

void write_pdb_csv(std::ostream& os, const PdBHamiltonian& H) {
  os << "t,h11,re_h12,im_h12,h22\n";
  for (std::size_t k = 0; k < H.times().size(); ++k) write_row(os, fmt(H.times()[k]), H.values()[k]);
  if (H.tail()) write_row(os, "inf", *H.tail());
}

PdBHamiltonian read_pdb_csv(std::istream& is) {
  std::string line;
  if (!std::getline(is, line)) bad("empty Hamiltonian CSV");
  std::vector<double> t;
  std::vector<Matrix2> h;
  std::optional<Matrix2> tail;
  std::size_t lineno = 1;
  while (std::getline(is, line)) {
    ++lineno;
    if (line.empty() || line == "\r") continue;
    if (tail) bad("rows after the tail row in Hamiltonian CSV");
    std::stringstream ss(line);
    std::string cell;
    std::vector<double> v;
    while (std::getline(ss, cell, ',')) {
      try {
        std::size_t used = 0;
        v.push_back(std::stod(cell, &used));
        if (cell.find_first_not_of(" \r", used) != std::string::npos) throw std::invalid_argument(cell);
      } catch (const std::exception&) {
        bad("bad number '" + cell + "' on CSV line " + std::to_string(lineno));
      }
    }
    if (v.size() != 5) bad("CSV line " + std::to_string(lineno) + " needs 5 columns");
    const Matrix2 m{v[1], cplx(v[2], v[3]), cplx(v[2], -v[3]), v[4]};
    if (std::isinf(v[0])) {
      tail = m;
    } else {
      t.push_back(v[0]);
      h.push_back(m);
    }
  }
  return {std::move(t), std::move(h), tail};
}

}  // namespace cansys
