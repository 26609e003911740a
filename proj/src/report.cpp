#include "bhs/report.hpp"

#include <charconv>
#include <sstream>

namespace bhs {

std::string format_double(double v) {
    char buf[32];
    auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

nlohmann::json to_json(const Interval& v) {
    if (v.empty()) return nlohmann::json{{"empty", true}};
    return nlohmann::json{{"lo", v.lo()}, {"hi", v.hi()}};
}

nlohmann::json to_json(const Vec3& v) { return nlohmann::json::array({v.x, v.y, v.z}); }

nlohmann::json to_json(const FixedPointData& fp) {
    return nlohmann::json{{"p_mu", fp.p_mu},
                          {"q_mu", fp.q_mu},
                          {"p_tilde", fp.p_tilde},
                          {"q_tilde", fp.q_tilde},
                          {"lambda_cu", fp.lambda_cu},
                          {"lambda_uu_P", fp.lambda_uu_P},
                          {"lambda_uu_Q", fp.lambda_uu_Q},
                          {"v_uu_P", to_json(fp.vuu_P)},
                          {"v_uu_Q", to_json(fp.vuu_Q)},
                          {"v_s", to_json(fp.vs_P)},
                          {"v_cu", to_json(fp.vcu_P)}};
}

nlohmann::json to_json(const Legs& l) {
    return nlohmann::json{{"a", l.a}, {"b", l.b}, {"c", l.c}, {"d", l.d}};
}

namespace {

nlohmann::json para_json(const Parallelogram& p) {
    nlohmann::json corners = nlohmann::json::array();
    for (auto [y, z] : p.corners()) corners.push_back(nlohmann::json::array({y, z}));
    return nlohmann::json{{"y_lo", p.y_lo}, {"y_hi", p.y_hi}, {"corners", corners}};
}

} // namespace

nlohmann::json to_json(const MarkovPartition& mp) {
    return nlohmann::json{
        {"R1", {{"slope", mp.R1.slope}, {"intercept", mp.R1.intercept}}},
        {"R2", {{"slope", mp.R2.slope}, {"intercept", mp.R2.intercept}}},
        {"A", para_json(mp.A_para)},
        {"B", para_json(mp.B_para)}};
}

std::optional<GeometrySummary> geometry_summary(const Params& p) {
    try {
        Params base{p.xi, p.mu, 0.0, 0.0};
        GeometrySummary g{fixed_points(base), legs(base), markov(base, fixed_points(base))};
        return g;
    } catch (const DomainError&) {
        return std::nullopt;
    }
}

nlohmann::json to_json(const Verdict& v) {
    nlohmann::json j{{"status", to_string(v.status)},
                     {"margin", v.margin},
                     {"boxes_examined", v.boxes_examined},
                     {"max_depth_reached", v.max_depth_reached}};
    if (v.witness) j["witness"] = *v.witness;
    return j;
}

nlohmann::json to_json(const SubCheck& sc) {
    return nlohmann::json{
        {"name", sc.name}, {"kind", to_string(sc.kind)}, {"verdict", to_json(sc.verdict)}};
}

nlohmann::json to_json(const ConditionReport& cr) {
    nlohmann::json subs = nlohmann::json::array();
    for (const auto& sc : cr.sub_checks) subs.push_back(to_json(sc));
    return nlohmann::json{{"condition", to_string(cr.condition)},
                          {"overall", to_json(cr.overall)},
                          {"sub_checks", subs},
                          {"margins", cr.margins}};
}

nlohmann::json to_json(const ParamsBox& box) {
    return nlohmann::json{{"xi", to_json(box.xi)},
                          {"mu", to_json(box.mu)},
                          {"kappa", to_json(box.kappa)},
                          {"eta", to_json(box.eta)}};
}

nlohmann::json to_json(const ConeConfig& cone) {
    return nlohmann::json{{"theta", cone.theta}, {"vartheta", cone.vartheta}};
}

nlohmann::json to_json(const ExpansionEstimate& e) {
    return nlohmann::json{{"c0", e.c0},
                          {"ell", e.ell},
                          {"norm_equivalence", e.norm_equivalence},
                          {"samples", e.samples}};
}

nlohmann::json to_json(const EpsilonCertificate& c) {
    return nlohmann::json{{"epsilon", c.epsilon},
                          {"binding_check", c.binding_check},
                          {"min_margin", c.min_margin},
                          {"corner_epsilon", c.corner_epsilon},
                          {"corners_pass", c.corners_pass},
                          {"perturbation_bound_formula", c.model.formula},
                          {"value_per_kappa", c.model.value_per_kappa},
                          {"value_per_eta", c.model.value_per_eta},
                          {"jac_per_kappa", c.model.jac_per_kappa},
                          {"jac_per_eta", c.model.jac_per_eta}};
}

nlohmann::json to_json(const ReportDocument& doc) {
    const FullReport& r = doc.report;
    nlohmann::json conds = nlohmann::json::array();
    for (const auto& c : r.conditions) conds.push_back(to_json(c));
    nlohmann::json j{{"schema_version", kSchemaVersion},
                     {"tool_version", std::string(kToolName) + " " + kToolVersion},
                     {"box", to_json(r.box)},
                     {"rigorous", r.rigorous},
                     {"cone", to_json(r.cone)},
                     {"conditions", conds},
                     {"overall", to_json(r.overall)},
                     {"expansion_estimate", to_json(r.expansion)},
                     {"perturbation_absorbed", r.perturbation_absorbed},
                     {"wall_time_s", r.wall_time_s}};
    if (doc.epsilon) j["epsilon_certificate"] = to_json(*doc.epsilon);
    if (doc.geometry)
        j["geometry"] = nlohmann::json{{"fixed_points", to_json(doc.geometry->fixed_points)},
                                       {"legs", to_json(doc.geometry->legs)},
                                       {"markov", to_json(doc.geometry->markov)}};
    return j;
}

std::string serialize(const ReportDocument& doc) { return to_json(doc).dump(2); }

namespace {

void csv_point(std::ostringstream& os, const char* object, const char* label, double y,
               double z) {
    os << object << ',' << label << ',' << format_double(y) << ',' << format_double(z) << '\n';
}

} // namespace

std::string geometry_csv(const Params& p) {
    FixedPointData fp = fixed_points(Params{p.xi, p.mu, 0.0, 0.0});
    Legs l = legs(p);
    MarkovPartition mp = markov(Params{p.xi, p.mu, 0.0, 0.0}, fp);

    std::ostringstream os;
    os << "object,label,y,z\n";
    csv_point(os, "fixed_point", "P", fp.p_mu, fp.p_tilde);
    csv_point(os, "fixed_point", "Q", fp.q_mu, fp.q_tilde);
    csv_point(os, "leg_endpoint", "a", l.a, 0.0);
    csv_point(os, "leg_endpoint", "b", l.b, 0.0);
    csv_point(os, "leg_endpoint", "c", l.c, 0.0);
    csv_point(os, "leg_endpoint", "d", l.d, 0.0);

    auto emit_para = [&](const Parallelogram& para, const char* name) {
        auto segs = para.segments();
        for (std::size_t i = 0; i < segs.size(); ++i) {
            std::string label = std::string(name) + "_seg" + std::to_string(i + 1);
            csv_point(os, "parallelogram", label.c_str(), segs[i].from.y, segs[i].from.z);
            csv_point(os, "parallelogram", label.c_str(), segs[i].to.y, segs[i].to.z);
        }
    };
    emit_para(mp.A_para, "A");
    emit_para(mp.B_para, "B");

    for (double y = -4.0; y <= 4.0; y += 8.0) {
        csv_point(os, "markov_line", "R1", y, mp.R1(y));
        csv_point(os, "markov_line", "R2", y, mp.R2(y));
        csv_point(os, "cone_line", "L1", y, fam::cone_line_P(y, fp.p_mu, fp.p_tilde));
        csv_point(os, "cone_line", "L2", y, fam::cone_line_Q(y, fp.q_mu, fp.q_tilde));
    }
    return os.str();
}

std::string disc_csv(const UUDisc& d) {
    std::ostringstream os;
    os << "y,x,z\n";
    for (const auto& n : d.nodes())
        os << format_double(n.y) << ',' << format_double(n.x) << ',' << format_double(n.z)
           << '\n';
    return os.str();
}

std::string orbit_csv(const WitnessDiagnostics& diag) {
    std::ostringstream os;
    os << "iterate,x,y,z,cube_margin\n";
    for (std::size_t i = 0; i < diag.orbit.size(); ++i) {
        const Point3& pt = diag.orbit[i];
        os << i << ',' << format_double(pt.x) << ',' << format_double(pt.y) << ','
           << format_double(pt.z) << ',' << format_double(diag.orbit_margins[i]) << '\n';
    }
    return os.str();
}

std::string widths_csv(const StripGrowth& g) {
    std::ostringstream os;
    os << "iteration,width\n";
    for (std::size_t i = 0; i < g.widths.size(); ++i)
        os << i << ',' << format_double(g.widths[i]) << '\n';
    return os.str();
}

} // namespace bhs
