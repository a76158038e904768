#pragma once

#include <string>

#include "json.hpp"

#include "feller/checkers.hpp"
#include "feller/spaces.hpp"
#include "feller/transport.hpp"

namespace feller {

using OrderedJson = nlohmann::ordered_json;

/// Fixed float formatting for CSV traces: %.17g round-trips every double.
std::string fmt_double(double v);

OrderedJson point_json(const Point& p);
OrderedJson span_json(const SpanPoint& u);  // coordinates as exact "p/q" strings

/// {"mode": "exact"|"real", "atoms": [{"point": [...], "mass": "p/q"}]}.
OrderedJson measure_json(const FiniteMeasure& mu);
FiniteMeasure measure_from_json(const OrderedJson& j);
FiniteMeasure load_measure(const std::string& path);

OrderedJson report_json(const PropertyReport& rep);

/// Trace table with fixed columns: property,gamma,n_or_m,value,exact_exponent.
std::string report_csv(const PropertyReport& rep);

OrderedJson refutation_json(const AsfRefutation& ref);
OrderedJson blowup_json(const BlowupCertificate& cert);
OrderedJson gap_json(const GapResult& gap);

void write_text(const std::string& path, const std::string& content);

}  // namespace feller
