#include "bellsim/report.hpp"

namespace bellsim::report {

using nlohmann::ordered_json;

ordered_json vector_json(const UnitVector& v) { return ordered_json::array({v.x(), v.y(), v.z()}); }

ordered_json quad_json(const SettingQuad& q) {
    return {{"a1", vector_json(q.a1)},
            {"a2", vector_json(q.a2)},
            {"b1", vector_json(q.b1)},
            {"b2", vector_json(q.b2)}};
}

ordered_json estimate_json(const CorrelationEstimate& e) {
    return {{"value", e.value},         {"SE", e.standard_error}, {"ties", e.tie_count},
            {"count_pos", e.count_pos}, {"count_neg", e.count_neg}, {"n", e.n}};
}

ordered_json bound_json(const DeviationBound& b) {
    return {{"n", b.n}, {"t", b.t}, {"bound", b.bound}};
}

ordered_json chsh_json(const ChshResult& r, const SettingQuad& quad) {
    ordered_json j;
    j["mode"] = mode_name(r.mode);
    j["n"] = r.n;
    j["quad"] = quad_json(quad);
    j["e11"] = estimate_json(r.e11);
    j["e12"] = estimate_json(r.e12);
    j["e21"] = estimate_json(r.e21);
    j["e22"] = estimate_json(r.e22);
    j["statistic"] = r.statistic;
    j["numerator"] = r.numerator;
    j["combined_SE"] = r.combined_standard_error;
    if (r.per_trial_min) j["per_trial_min"] = *r.per_trial_min;
    if (r.per_trial_max) j["per_trial_max"] = *r.per_trial_max;
    return j;
}

ordered_json curve_json(const CorrelationCurve& curve) {
    ordered_json rows = ordered_json::array();
    for (const auto& p : curve) {
        ordered_json row = estimate_json(p.estimate);
        row["theta_rad"] = p.theta;
        row["theta_deg"] = rad_to_deg(p.theta);
        row["E_linear"] = p.linear_ref;
        row["E_singlet"] = p.singlet_ref;
        rows.push_back(std::move(row));
    }
    return rows;
}

}  // namespace bellsim::report
