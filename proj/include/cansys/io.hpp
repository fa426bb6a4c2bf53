#pragma once

#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "cansys/gauge.hpp"
#include "cansys/matrix2.hpp"
#include "cansys/profile.hpp"
#include "cansys/spectral.hpp"
#include "cansys/transfer.hpp"

namespace cansys::io {

using Json = nlohmann::ordered_json;

/// {"a": spec, "b": spec, "c": spec, "T0": number, "a_tail": number}; spec is
/// {"kind": "constant", "value"}, {"kind": "step", "breaks", "values"} (or
/// "value", "start", "end"), {"kind": "bump", "amplitude", "start", "end"} or
/// {"kind": "samples", "t", "values", "interp": "linear" | "constant"}.
/// Throws InvalidProfile for malformed documents.
ArovProfile profile_from_json(const Json& j);
Json profile_to_json(const ArovProfile& p);
ArovProfile load_profile(const std::string& path);

Json complex_json(cplx z);
Json matrix_json(const Matrix2& m);

/// Parses "1.5", "2i", "-0.3+1e-2i", "i", "1-i" and similar.
cplx parse_complex(const std::string& s);

Json transfer_json(const TransferResult& r);
Json entropy_json(const EntropyReport& r);
Json sumrule_json(const SumRuleReport& r);

/// Columns theta,x,re_w,im_w.
void write_schur_csv(std::ostream& os, const SchurGrid& g);

/// %.17g formatting shared by every text writer.
std::string fmt(double v);

/// Minimal SVG line plot of one series.
std::string svg_polyline(const std::vector<std::pair<double, double>>& pts, const std::string& title,
                         const std::string& xlabel, const std::string& ylabel);

}  // namespace cansys::io
