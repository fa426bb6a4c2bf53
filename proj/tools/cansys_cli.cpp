// cansys: command-line front end.
// Exit codes: 0 success, 1 input or configuration error, 2 verification failure.

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "cansys/error.hpp"
#include "cansys/gauge.hpp"
#include "cansys/io.hpp"
#include "cansys/jalg.hpp"
#include "cansys/nodes.hpp"
#include "cansys/spectral.hpp"
#include "cansys/transfer.hpp"

namespace fs = std::filesystem;
using namespace cansys;
using io::Json;

namespace {

constexpr int kOk = 0;
constexpr int kInputError = 1;
constexpr int kVerificationFailure = 2;

struct InputError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct RunConfig {
  std::string profile;
  std::string z = "i";
  std::optional<double> T;
  double ode_step = 1e-3;
  std::size_t nodes = 2048;
  double tol = 1e-3;
  double rel_tol = 1e-2;
  std::string out;
  std::string formats = "csv,json,svg";
  std::uint64_t seed = 1;
  std::string direction = "arov2pdb";
  std::string matrix;
  std::string dims = "2,1";
};

std::set<std::string> parse_formats(const std::string& s) {
  std::set<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item != "csv" && item != "json" && item != "svg") throw InputError("unknown output format '" + item + "'");
    out.insert(item);
  }
  return out;
}

void validate(const RunConfig& c) {
  if (!(c.ode_step > 0.0)) throw InputError("--ode-step must be > 0");
  if (c.nodes < 64 || (c.nodes & (c.nodes - 1)) != 0) throw InputError("--nodes must be a power of two >= 64");
  if (!(c.tol > 0.0) || !(c.rel_tol >= 0.0)) throw InputError("--tol must be > 0 and --rel-tol >= 0");
  if (c.T && !(*c.T >= 0.0)) throw InputError("--T must be >= 0");
  parse_formats(c.formats);
}

// Writes text output files; only called when --out is set.
class Sink {
 public:
  Sink(const RunConfig& c) : dir_(c.out), formats_(parse_formats(c.formats)) {
    if (!dir_.empty()) fs::create_directories(dir_);
  }
  bool wants(const std::string& fmt) const { return !dir_.empty() && formats_.count(fmt) > 0; }
  void write(const std::string& name, const std::string& body) const {
    std::ofstream f(fs::path(dir_) / name, std::ios::binary);
    if (!f) throw InputError("cannot write '" + (fs::path(dir_) / name).string() + "'");
    f << body;
  }

 private:
  std::string dir_;
  std::set<std::string> formats_;
};

void emit(const Json& report, const Sink& sink, const std::string& name) {
  const std::string text = report.dump(2) + "\n";
  std::cout << text;
  if (sink.wants("json")) sink.write(name + ".json", text);
}

TransferOptions transfer_options(const RunConfig& c) {
  TransferOptions t;
  t.step = c.ode_step;
  return t;
}

Json transfer_defaults(const TransferOptions& t) {
  Json j;
  j["ode_step"] = t.step;
  j["scheme"] = to_string(t.scheme);
  j["estimate_error"] = t.estimate_error;
  j["error_tol"] = t.error_tol;
  return j;
}

// ---------------------------------------------------------------- sumrule

int cmd_sumrule(const RunConfig& c) {
  const ArovProfile p = io::load_profile(c.profile);
  const Sink sink(c);

  SumRuleOptions o;
  o.entropy.max_nodes = c.nodes;
  o.entropy.min_nodes = std::min<std::size_t>(o.entropy.min_nodes, c.nodes);
  o.schur.transfer.step = c.ode_step;
  o.abs_tol = c.tol;
  o.rel_tol = c.rel_tol;
  const SumRuleReport r = sumrule(p, o);

  Json cfg;
  cfg["command"] = "sumrule";
  cfg["profile"] = c.profile;
  cfg["nodes"] = c.nodes;
  cfg["min_nodes"] = o.entropy.min_nodes;
  cfg["entropy_tol"] = o.entropy.tol;
  cfg["clamp_floor"] = o.entropy.floor;
  cfg["abs_tol"] = o.abs_tol;
  cfg["rel_tol"] = o.rel_tol;
  cfg["schur_parameter"] = io::complex_json(0.0);
  cfg["transfer"] = transfer_defaults(o.schur.transfer);
  Json report;
  report["config"] = cfg;
  report["profile"] = io::profile_to_json(p);
  const Json body = io::sumrule_json(r);
  for (const auto& [k, v] : body.items()) report[k] = v;
  emit(report, sink, "sumrule");

  if (sink.wants("csv") || sink.wants("svg")) {
    const SchurGrid g = schur_grid(p, c.nodes, o.schur);
    if (sink.wants("csv")) {
      std::ostringstream os;
      io::write_schur_csv(os, g);
      sink.write("schur_grid.csv", os.str());
    }
    if (sink.wants("svg")) {
      std::vector<std::pair<double, double>> modulus, history;
      for (std::size_t k = 0; k < g.w.size(); ++k) modulus.emplace_back(g.theta[k], std::abs(g.w[k]));
      for (const auto& s : r.entropy.history) history.emplace_back(std::log2(static_cast<double>(s.nodes)), s.estimate);
      sink.write("schur_modulus.svg", io::svg_polyline(modulus, "|w(tan theta)|", "theta", "|w|"));
      sink.write("entropy_refinement.svg", io::svg_polyline(history, "entropy estimate", "log2 nodes", "estimate"));
    }
  }
  std::cerr << "lhs " << io::fmt(r.lhs_entropy) << "  rhs " << io::fmt(r.rhs_coefficient_integral) << "  |diff| "
            << io::fmt(r.abs_diff) << (r.agrees ? "  (agree)" : "  (MISMATCH)") << '\n';
  return r.agrees ? kOk : kVerificationFailure;
}

// ---------------------------------------------------------------- transfer

int cmd_transfer(const RunConfig& c) {
  const ArovProfile p = io::load_profile(c.profile);
  const cplx z = io::parse_complex(c.z);
  const double T = c.T.value_or(p.t0());
  const TransferOptions t = transfer_options(c);
  const TransferResult r = transfer(p, z, T, t);

  Json checks;
  checks["det_ok"] = r.diagnostics.det_defect <= 1e-8;
  if (z.imag() == 0.0) {
    checks["j_unitary_ok"] = r.diagnostics.unitarity_defect <= 1e-8;
  } else {
    checks["expansion_ok"] = r.diagnostics.expansion_min_eig >= -1e-8;
  }
  checks["su11_member"] = jalg::in_su11(r.matrix);
  checks["classification"] = jalg::to_string(jalg::classify(r.matrix));

  Json cfg;
  cfg["command"] = "transfer";
  cfg["profile"] = c.profile;
  cfg["transfer"] = transfer_defaults(t);
  Json report;
  report["config"] = cfg;
  const Json body = io::transfer_json(r);
  for (const auto& [k, v] : body.items()) report[k] = v;
  report["checks"] = checks;
  emit(report, Sink(c), "transfer");

  const bool ok = checks["det_ok"].get<bool>() && checks.value("j_unitary_ok", true) && checks.value("expansion_ok", true);
  return ok ? kOk : kVerificationFailure;
}

// ---------------------------------------------------------------- gauge

// Largest coefficient gap between two profiles at the midpoints of the grid.
double profile_gap(const ArovProfile& p, const ArovProfile& q, const std::vector<double>& ts) {
  double worst = 0.0;
  for (std::size_t k = 0; k + 1 < ts.size(); ++k) {
    if (ts[k + 1] <= ts[k]) continue;
    const double t = 0.5 * (ts[k] + ts[k + 1]);
    const auto a = p.at(t), b = q.at(t);
    worst = std::max({worst, std::abs(a.a - b.a), std::abs(a.b - b.b), std::abs(a.c - b.c)});
  }
  return worst;
}

double hamiltonian_gap(const PdBHamiltonian& h, const PdBHamiltonian& g) {
  double worst = 0.0;
  const auto& ts = h.times();
  for (std::size_t k = 0; k + 1 < ts.size(); ++k) {
    if (ts[k + 1] <= ts[k]) continue;
    const double t = 0.5 * (ts[k] + ts[k + 1]);
    worst = std::max(worst, max_abs(h.at(t) - g.at(t)));
  }
  return worst;
}

int cmd_gauge(const RunConfig& c) {
  const Sink sink(c);
  PdBOptions po;
  po.transfer = transfer_options(c);
  ArovFromPdBOptions ao;
  ao.transfer.step = c.ode_step;

  Json cfg;
  cfg["command"] = "gauge";
  cfg["direction"] = c.direction;
  cfg["profile"] = c.profile;
  cfg["sample_step"] = po.sample_step;
  cfg["fd_tol"] = ao.fd_tol;
  cfg["tol"] = c.tol;
  cfg["transfer"] = transfer_defaults(po.transfer);
  Json report;
  report["config"] = cfg;

  double residual = 0.0;
  if (c.direction == "arov2pdb") {
    const ArovProfile p = io::load_profile(c.profile);
    const double T = c.T.value_or(p.t0());
    const PdBHamiltonian h = to_pdb(p, T, po);
    const ArovProfile back = arov_from_pdb(h, ao);
    residual = profile_gap(p, back, h.times());
    report["T"] = T;
    report["samples"] = h.times().size();
    report["det_consistency"] = det_consistency(p, h);
    report["has_tail"] = h.tail().has_value();
    if (sink.wants("csv")) {
      std::ostringstream os;
      write_pdb_csv(os, h);
      sink.write("hamiltonian.csv", os.str());
    }
  } else if (c.direction == "pdb2arov") {
    std::ifstream in(c.profile);
    if (!in) throw InputError("cannot open Hamiltonian '" + c.profile + "'");
    const PdBHamiltonian h = read_pdb_csv(in);
    const ArovProfile p = arov_from_pdb(h, ao);
    residual = hamiltonian_gap(h, to_pdb(p, h.t_end(), po));
    report["T"] = h.t_end();
    report["samples"] = h.times().size();
    report["reconstructed_profile"] = io::profile_to_json(p);
  } else {
    throw InputError("--direction must be arov2pdb or pdb2arov");
  }
  report["round_trip_residual"] = residual;
  report["agrees"] = residual <= c.tol;
  emit(report, sink, "gauge");
  std::cerr << "round-trip residual " << io::fmt(residual) << '\n';
  return residual <= c.tol ? kOk : kVerificationFailure;
}

// ---------------------------------------------------------------- jmod

Matrix2 parse_matrix(const std::string& s) {
  std::vector<cplx> v;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) v.push_back(io::parse_complex(item));
  if (v.size() != 4) throw InputError("--matrix needs four comma-separated entries m11,m12,m21,m22");
  return {v[0], v[1], v[2], v[3]};
}

int cmd_jmod(const RunConfig& c) {
  const Matrix2 w = parse_matrix(c.matrix);
  const jalg::JClass cls = jalg::classify(w);
  if (cls == jalg::JClass::j_expanding) {
    std::cerr << "input is j-expanding, not j-contractive; Orlov's formula applies to its inverse "
                 "(use W^-1 when det W = 1, or the left polar form W = L V)\n";
    return kVerificationFailure;
  }
  const jalg::Polar p = jalg::polar_ju(w);
  Json cfg;
  cfg["command"] = "jmod";
  cfg["tol"] = jalg::kIdentityTol;
  Json report;
  report["config"] = cfg;
  report["W"] = io::matrix_json(w);
  report["classification"] = jalg::to_string(cls);
  report["R"] = io::matrix_json(p.modulus);
  report["U"] = io::matrix_json(p.unitary);
  Json res;
  res["polar"] = max_abs(p.unitary * p.modulus - w);
  res["u_j_unitary"] = max_abs(p.unitary.adjoint() * jalg::kJay * p.unitary - jalg::kJay);
  res["r_j_hermitian"] = max_abs(jalg::kJay * p.modulus - p.modulus.adjoint() * jalg::kJay);
  res["r_squared"] = max_abs(jalg::kJay * p.modulus * p.modulus - w.adjoint() * jalg::kJay * w);
  report["residuals"] = res;
  emit(report, Sink(c), "jmod");
  const bool ok = res["polar"].get<double>() <= 1e-10 && res["u_j_unitary"].get<double>() <= 1e-8;
  return ok ? kOk : kVerificationFailure;
}

// ---------------------------------------------------------------- nodes-demo

int cmd_nodes_demo(const RunConfig& c) {
  using namespace cansys::nodes;
  Index nK = 0, nE = 0;
  {
    char sep = 0;
    std::stringstream ss(c.dims);
    if (!(ss >> nK >> sep >> nE) || sep != ',' || !ss.eof() || nK < 0 || nE < 1) {
      throw InputError("--dims must be 'nK,nE' with nK >= 0 and nE >= 1");
    }
  }
  std::mt19937_64 rng(c.seed);
  // rank nK keeps dim N1 = dim E1, which the Potapov-Ginzburg step needs
  const IsometrySpec v = random_isometry(nK, nE, nE, nK, rng);
  const AGNode a = ag_extension(v);
  const Index n = a.node.U.rows();

  Json res;
  res["ag_unitarity"] = (a.node.U.adjoint() * a.node.U - Mat::Identity(n, n)).cwiseAbs().maxCoeff();
  {
    const Mat on_dv = a.node.U.leftCols(nK + nE) * v.domain;
    Mat expect = Mat::Zero(on_dv.rows(), on_dv.cols());
    expect.topRows(nK) = v.image.topRows(nK);
    expect.bottomRows(nE) = v.image.bottomRows(nE);
    res["restriction_to_domain"] = on_dv.size() ? (on_dv - expect).cwiseAbs().maxCoeff() : 0.0;
  }
  res["s_at_zero"] = ag_blocks(a, 0.0).s.cwiseAbs().maxCoeff();

  double pg = 0.0, contract = 0.0;
  const std::vector<cplx> points{0.0, 0.3, cplx(0.0, 0.7)};
  for (cplx zeta : points) {
    const AGBlocks b = ag_blocks(a, zeta);
    for (int j = 0; j < 5; ++j) {
      const Mat E = random_contraction(b.s.cols(), b.s.rows(), rng);
      pg = std::max(pg, pg_consistency(b, E));
      contract = std::max(contract, spectral_norm(redheffer(b, E)) - 1.0);
    }
    contract = std::max(contract, spectral_norm(char_function(a.node, zeta)) - 1.0);
  }
  res["pg_consistency"] = pg;
  res["contractivity_excess"] = std::max(0.0, contract);

  const UnitaryNode u = unitary_completion(a, v, random_unitary(a.dims.n1, rng));
  const BallMembership m = ball_membership(ag_blocks(a, 0.0), char_function(u, 0.0));
  res["completion_ball_residual"] = m.residual;
  res["completion_ball_excess"] = std::max(0.0, m.param_norm - 1.0);

  Json cf = Json::array();
  const Mat w0 = char_function(u, 0.0);
  bool constant = true;
  for (cplx zeta : {cplx(0.0), cplx(0.5), cplx(0.0, -0.5)}) {
    const Mat w = char_function(u, zeta);
    Json e;
    e["zeta"] = io::complex_json(zeta);
    Json rows = Json::array();
    for (Index i = 0; i < w.rows(); ++i) {
      Json row = Json::array();
      for (Index j = 0; j < w.cols(); ++j) row.push_back(io::complex_json(w(i, j)));
      rows.push_back(row);
    }
    e["w"] = rows;
    cf.push_back(e);
    constant = constant && (w - w0).cwiseAbs().maxCoeff() <= 1e-12;
  }

  Json cfg;
  cfg["command"] = "nodes-demo";
  cfg["seed"] = c.seed;
  cfg["nK"] = nK;
  cfg["nE"] = nE;
  cfg["parameters_per_point"] = 5;
  cfg["threshold"] = 1e-10;
  Json dims;
  dims["nK"] = a.dims.nK;
  dims["nE1"] = a.dims.nE1;
  dims["nE2"] = a.dims.nE2;
  dims["n1"] = a.dims.n1;
  dims["n2"] = a.dims.n2;
  Json report;
  report["config"] = cfg;
  report["dims"] = dims;
  report["residuals"] = res;
  report["characteristic_function"] = cf;
  report["constant_characteristic_function"] = constant;
  bool ok = true;
  for (const auto& [k, val] : res.items()) ok = ok && val.get<double>() <= 1e-10;
  report["all_within_threshold"] = ok;
  emit(report, Sink(c), "nodes_demo");
  return ok ? kOk : kVerificationFailure;
}

int exit_code_for(const Error& e) {
  switch (e.code()) {
    case ErrorCode::InvalidProfile:
    case ErrorCode::InvalidArgument:
      return kInputError;
    default:
      return kVerificationFailure;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Canonical systems in the Arov gauge: transfer matrices, Schur functions and the entropy sum rule"};
  app.require_subcommand(1);
  RunConfig cfg;

  auto common = [&](CLI::App* s) {
    s->add_option("--ode-step", cfg.ode_step, "integrator step")->capture_default_str();
    s->add_option("--out", cfg.out, "output directory (files are written only when set)");
    s->add_option("--formats", cfg.formats, "subset of csv,json,svg")->capture_default_str();
  };

  auto* sum = app.add_subcommand("sumrule", "entropy of the Schur function against the coefficient integral");
  sum->add_option("--profile", cfg.profile, "profile JSON")->required();
  sum->add_option("--nodes", cfg.nodes, "largest quadrature node count (power of two >= 64)")->capture_default_str();
  sum->add_option("--tol", cfg.tol, "absolute agreement tolerance")->capture_default_str();
  sum->add_option("--rel-tol", cfg.rel_tol, "relative agreement tolerance")->capture_default_str();
  common(sum);

  auto* tr = app.add_subcommand("transfer", "transfer matrix M(z, T)");
  tr->add_option("--profile", cfg.profile, "profile JSON")->required();
  tr->add_option("--z", cfg.z, "spectral parameter, e.g. 1.5+0.2i")->capture_default_str();
  tr->add_option("--T", cfg.T, "end time (default T0)");
  common(tr);

  auto* ga = app.add_subcommand("gauge", "conversion between the Arov and Potapov-de Branges gauges");
  ga->add_option("--profile", cfg.profile, "profile JSON (arov2pdb) or Hamiltonian CSV (pdb2arov)")->required();
  ga->add_option("--direction", cfg.direction, "arov2pdb or pdb2arov")->capture_default_str();
  ga->add_option("--T", cfg.T, "end time for arov2pdb (default T0)");
  ga->add_option("--tol", cfg.tol, "round-trip tolerance")->capture_default_str();
  common(ga);

  auto* jm = app.add_subcommand("jmod", "j-modulus and polar form of a j-contractive matrix");
  jm->add_option("--matrix", cfg.matrix, "entries m11,m12,m21,m22")->required();
  common(jm);

  auto* nd = app.add_subcommand("nodes-demo", "unitary node, extension, Redheffer and Potapov-Ginzburg checks");
  nd->add_option("--seed", cfg.seed, "random seed")->capture_default_str();
  nd->add_option("--dims", cfg.dims, "nK,nE")->capture_default_str();
  common(nd);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kOk : kInputError;
  }

  try {
    validate(cfg);
    if (*sum) return cmd_sumrule(cfg);
    if (*tr) return cmd_transfer(cfg);
    if (*ga) return cmd_gauge(cfg);
    if (*jm) return cmd_jmod(cfg);
    return cmd_nodes_demo(cfg);
  } catch (const InputError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kInputError;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return exit_code_for(e);
  } catch (const fs::filesystem_error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kInputError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kVerificationFailure;
  }
}
