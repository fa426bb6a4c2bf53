#include "cansys/io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <ostream>
#include <regex>
#include <sstream>

#include "cansys/error.hpp"

namespace cansys::io {

namespace {

[[noreturn]] void invalid(const std::string& what) { throw Error(ErrorCode::InvalidProfile, what); }

double number(const Json& j, const char* key) {
  if (!j.contains(key)) invalid(std::string("missing field '") + key + "'");
  if (!j.at(key).is_number()) invalid(std::string("field '") + key + "' must be a number");
  return j.at(key).get<double>();
}

std::vector<double> numbers(const Json& j, const char* key) {
  if (!j.contains(key) || !j.at(key).is_array()) invalid(std::string("field '") + key + "' must be an array");
  std::vector<double> out;
  for (const auto& v : j.at(key)) {
    if (!v.is_number()) invalid(std::string("field '") + key + "' must hold numbers");
    out.push_back(v.get<double>());
  }
  return out;
}

Coefficient coefficient_from_json(const Json& j, const char* name) {
  if (!j.is_object() || !j.contains("kind") || !j.at("kind").is_string()) {
    invalid(std::string("coefficient '") + name + "' needs a string 'kind'");
  }
  const std::string kind = j.at("kind").get<std::string>();
  if (kind == "constant") return Coefficient::constant(number(j, "value"));
  if (kind == "step") {
    if (j.contains("breaks")) return Coefficient(StepCoef{numbers(j, "breaks"), numbers(j, "values")});
    return Coefficient::step(number(j, "value"), number(j, "start"), number(j, "end"));
  }
  if (kind == "bump") return Coefficient::bump(number(j, "amplitude"), number(j, "start"), number(j, "end"));
  if (kind == "samples") {
    Interp interp = Interp::linear;
    if (j.contains("interp")) {
      const std::string s = j.at("interp").is_string() ? j.at("interp").get<std::string>() : "";
      if (s == "constant") {
        interp = Interp::constant;
      } else if (s != "linear") {
        invalid("interp must be 'linear' or 'constant'");
      }
    }
    return Coefficient(SampledCoef{numbers(j, "t"), numbers(j, "values"), interp});
  }
  invalid(std::string("unknown coefficient kind '") + kind + "'");
}

Json coefficient_to_json(const Coefficient& c) {
  return std::visit(
      [](const auto& r) -> Json {
        using T = std::decay_t<decltype(r)>;
        Json j;
        if constexpr (std::is_same_v<T, ConstantCoef>) {
          j["kind"] = "constant";
          j["value"] = r.value;
        } else if constexpr (std::is_same_v<T, StepCoef>) {
          j["kind"] = "step";
          j["breaks"] = r.breaks;
          j["values"] = r.values;
        } else if constexpr (std::is_same_v<T, BumpCoef>) {
          j["kind"] = "bump";
          j["amplitude"] = r.amplitude;
          j["start"] = r.start;
          j["end"] = r.end;
        } else {
          j["kind"] = "samples";
          j["t"] = r.t;
          j["values"] = r.values;
          j["interp"] = r.interp == Interp::linear ? "linear" : "constant";
        }
        return j;
      },
      c.repr());
}

}  // namespace

ArovProfile profile_from_json(const Json& j) {
  if (!j.is_object()) invalid("profile must be a JSON object");
  for (const char* key : {"a", "b", "c"}) {
    if (!j.contains(key)) invalid(std::string("missing coefficient '") + key + "'");
  }
  return {coefficient_from_json(j.at("a"), "a"), coefficient_from_json(j.at("b"), "b"),
          coefficient_from_json(j.at("c"), "c"), number(j, "T0"), number(j, "a_tail")};
}

Json profile_to_json(const ArovProfile& p) {
  Json j;
  j["a"] = coefficient_to_json(p.a());
  j["b"] = coefficient_to_json(p.b());
  j["c"] = coefficient_to_json(p.c());
  j["T0"] = p.t0();
  j["a_tail"] = p.a_tail();
  return j;
}

ArovProfile load_profile(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::InvalidArgument, "cannot open profile '" + path + "'");
  Json j;
  try {
    j = Json::parse(in);
  } catch (const Json::exception& e) {
    invalid("profile '" + path + "' is not valid JSON: " + e.what());
  }
  return profile_from_json(j);
}

Json complex_json(cplx z) { return Json::array({z.real(), z.imag()}); }

Json matrix_json(const Matrix2& m) {
  return Json::array({Json::array({complex_json(m.e11), complex_json(m.e12)}),
                      Json::array({complex_json(m.e21), complex_json(m.e22)})});
}

cplx parse_complex(const std::string& raw) {
  std::string s;
  for (char ch : raw) {
    if (ch != ' ') s += ch;
  }
  static const std::regex real_only(R"(^([+-]?(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)$)");
  static const std::regex imag_only(R"(^([+-]?(?:(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)?)[ij]$)");
  static const std::regex both(
      R"(^([+-]?(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)([+-](?:(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)?)[ij]$)");
  auto number = [&](const std::string& t) {
    try {
      return std::stod(t);
    } catch (const std::exception&) {
      throw Error(ErrorCode::InvalidArgument, "complex number '" + raw + "' is out of range");
    }
  };
  auto coef = [&](const std::string& t) {
    if (t.empty() || t == "+") return 1.0;
    if (t == "-") return -1.0;
    return number(t);
  };
  std::smatch m;
  cplx z;
  if (std::regex_match(s, m, real_only)) {
    z = {number(m[1].str()), 0.0};
  } else if (std::regex_match(s, m, imag_only)) {
    z = {0.0, coef(m[1].str())};
  } else if (std::regex_match(s, m, both)) {
    z = {number(m[1].str()), coef(m[2].str())};
  } else {
    throw Error(ErrorCode::InvalidArgument, "malformed complex number '" + raw + "'");
  }
  if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) {
    throw Error(ErrorCode::InvalidArgument, "complex number '" + raw + "' is not finite");
  }
  return z;
}

Json transfer_json(const TransferResult& r) {
  Json j;
  j["z"] = complex_json(r.z);
  j["T"] = r.T;
  j["gauge"] = to_string(r.gauge);
  j["matrix"] = matrix_json(r.matrix);
  Json d;
  d["step_used"] = r.diagnostics.step_used;
  d["steps"] = r.diagnostics.steps;
  d["error_estimate"] = r.diagnostics.error_estimate;
  d["det_defect"] = r.diagnostics.det_defect;
  d["unitarity_defect"] = r.diagnostics.unitarity_defect;
  d["expansion_min_eig"] = r.diagnostics.expansion_min_eig;
  j["diagnostics"] = d;
  return j;
}

Json entropy_json(const EntropyReport& r) {
  Json j;
  j["value"] = r.value;
  j["infinite"] = r.infinite;
  j["converged"] = r.converged;
  Json h = Json::array();
  for (const auto& s : r.history) {
    Json e;
    e["nodes"] = s.nodes;
    e["estimate"] = s.estimate;
    e["clamps"] = s.clamps;
    h.push_back(e);
  }
  j["history"] = h;
  return j;
}

Json sumrule_json(const SumRuleReport& r) {
  Json j;
  j["lhs_entropy"] = r.lhs_entropy;
  j["rhs_coefficient_integral"] = r.rhs_coefficient_integral;
  j["abs_diff"] = r.abs_diff;
  j["rel_diff"] = r.rel_diff;
  j["agrees"] = r.agrees;
  j["w_at_i"] = complex_json(r.w_at_i);
  j["entropy"] = entropy_json(r.entropy);
  Json s = Json::array();
  for (const auto& p : r.sigma_series) {
    Json e;
    e["T"] = p.T;
    e["integral_a"] = p.integral_a;
    e["sigma"] = p.sigma;
    e["gap"] = p.gap;
    s.push_back(e);
  }
  j["sigma_series"] = s;
  return j;
}

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_schur_csv(std::ostream& os, const SchurGrid& g) {
  os << "theta,x,re_w,im_w\n";
  for (std::size_t k = 0; k < g.w.size(); ++k) {
    os << fmt(g.theta[k]) << ',' << fmt(g.x[k]) << ',' << fmt(g.w[k].real()) << ',' << fmt(g.w[k].imag()) << '\n';
  }
}

std::string svg_polyline(const std::vector<std::pair<double, double>>& pts, const std::string& title,
                         const std::string& xlabel, const std::string& ylabel) {
  constexpr double W = 640, H = 400, M = 50;
  double x0 = std::numeric_limits<double>::infinity(), x1 = -x0, y0 = x0, y1 = -x0;
  for (const auto& [x, y] : pts) {
    if (!std::isfinite(x) || !std::isfinite(y)) continue;
    x0 = std::min(x0, x);
    x1 = std::max(x1, x);
    y0 = std::min(y0, y);
    y1 = std::max(y1, y);
  }
  if (!(x1 > x0)) { x0 -= 1.0; x1 += 1.0; }
  if (!(y1 > y0)) { y0 -= 1.0; y1 += 1.0; }
  auto px = [&](double x) { return M + (x - x0) / (x1 - x0) * (W - 2 * M); };
  auto py = [&](double y) { return H - M - (y - y0) / (y1 - y0) * (H - 2 * M); };
  char buf[96];
  std::ostringstream os;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H << "\">\n";
  os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  os << "<text x=\"" << W / 2 << "\" y=\"20\" text-anchor=\"middle\">" << title << "</text>\n";
  os << "<text x=\"" << W / 2 << "\" y=\"" << H - 10 << "\" text-anchor=\"middle\">" << xlabel << "</text>\n";
  os << "<text x=\"12\" y=\"" << H / 2 << "\" transform=\"rotate(-90 12 " << H / 2 << ")\">" << ylabel
     << "</text>\n";
  os << "<rect x=\"" << M << "\" y=\"" << M << "\" width=\"" << W - 2 * M << "\" height=\"" << H - 2 * M
     << "\" fill=\"none\" stroke=\"gray\"/>\n";
  std::snprintf(buf, sizeof buf, "%.4g", y1);
  os << "<text x=\"" << M - 4 << "\" y=\"" << M + 4 << "\" text-anchor=\"end\" font-size=\"10\">" << buf << "</text>\n";
  std::snprintf(buf, sizeof buf, "%.4g", y0);
  os << "<text x=\"" << M - 4 << "\" y=\"" << H - M << "\" text-anchor=\"end\" font-size=\"10\">" << buf
     << "</text>\n";
  os << "<polyline fill=\"none\" stroke=\"steelblue\" stroke-width=\"1.5\" points=\"";
  for (const auto& [x, y] : pts) {
    if (!std::isfinite(x) || !std::isfinite(y)) continue;
    std::snprintf(buf, sizeof buf, "%.2f,%.2f ", px(x), py(y));
    os << buf;
  }
  os << "\"/>\n</svg>\n";
  return os.str();
}

}  // namespace cansys::io
