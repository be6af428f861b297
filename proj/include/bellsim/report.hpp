#pragma once

#include <cstdint>
#include <string>

#include "json.hpp"

#include "bellsim/chsh.hpp"
#include "bellsim/correlation.hpp"
#include "bellsim/stats.hpp"

namespace bellsim::report {

nlohmann::ordered_json vector_json(const UnitVector& v);
nlohmann::ordered_json quad_json(const SettingQuad& q);
nlohmann::ordered_json estimate_json(const CorrelationEstimate& e);
nlohmann::ordered_json bound_json(const DeviationBound& b);

/// Summary fields of a CHSH evaluation (the caller adds provenance).
nlohmann::ordered_json chsh_json(const ChshResult& r, const SettingQuad& quad);

nlohmann::ordered_json curve_json(const CorrelationCurve& curve);

}  // namespace bellsim::report
