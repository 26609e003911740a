#pragma once

// JSON report schema and CSV numeric formatting. Report documents
// round-trip losslessly: doubles are serialized with shortest round-trip
// precision and object keys are emitted in sorted order, so
// serialize -> parse -> serialize is byte-identical.

#include <string>

#include <json.hpp>

#include "bhs/certify.hpp"
#include "bhs/disc.hpp"

namespace bhs {

inline constexpr const char* kToolName = "blenderhs";
inline constexpr const char* kToolVersion = "1.0.0";
inline constexpr int kSchemaVersion = 1;

// Shortest decimal representation that parses back to the same binary64.
std::string format_double(double v);

nlohmann::json to_json(const Interval& v);
nlohmann::json to_json(const Vec3& v);
nlohmann::json to_json(const FixedPointData& fp);
nlohmann::json to_json(const Legs& l);
nlohmann::json to_json(const MarkovPartition& mp);
nlohmann::json to_json(const Verdict& v);
nlohmann::json to_json(const SubCheck& sc);
nlohmann::json to_json(const ConditionReport& cr);
nlohmann::json to_json(const ParamsBox& box);
nlohmann::json to_json(const ConeConfig& cone);
nlohmann::json to_json(const ExpansionEstimate& e);
nlohmann::json to_json(const EpsilonCertificate& c);

struct GeometrySummary {
    FixedPointData fixed_points;
    Legs legs;
    MarkovPartition markov;
};

// Saddle/leg/partition data for point runs; omitted for fat boxes.
std::optional<GeometrySummary> geometry_summary(const Params& p);

struct ReportDocument {
    FullReport report;
    std::optional<EpsilonCertificate> epsilon;
    std::optional<GeometrySummary> geometry;
};

nlohmann::json to_json(const ReportDocument& doc);
std::string serialize(const ReportDocument& doc);

// YZ-plane figure data (legs, Markov parallelograms, cone boundary lines
// through P and Q, fixed points) as CSV rows "object,label,y,z".
std::string geometry_csv(const Params& p);

std::string disc_csv(const UUDisc& d);
std::string orbit_csv(const WitnessDiagnostics& diag);
std::string widths_csv(const StripGrowth& g);

} // namespace bhs
