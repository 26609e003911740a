#include <doctest.h>

#include <random>

#include "bhs/report.hpp"

using namespace bhs;

TEST_CASE("format_double is shortest round-trip") {
    std::mt19937_64 rng(451);
    std::uniform_real_distribution<double> d(-1e6, 1e6);
    for (int i = 0; i < 2000; ++i) {
        double v = d(rng);
        CHECK(std::stod(format_double(v)) == v);
    }
    CHECK(format_double(0.1) == "0.1");
    CHECK(format_double(-4.0) == "-4");
    CHECK(std::stod(format_double(1.0 / 3.0)) == 1.0 / 3.0);
}

TEST_CASE("report documents round-trip byte-identically") {
    FullReport rep = certify_point(Params{1.185, -9.5, 0.0, 0.0});
    EpsilonCertificate cert = certify_epsilon(
        ParamsBox{Interval(1.18, 1.19), Interval(-10.0, -9.0), Interval(0.0), Interval(0.0)});
    ReportDocument doc{rep, cert, geometry_summary(Params{1.185, -9.5, 0.0, 0.0})};

    std::string first = serialize(doc);
    nlohmann::json parsed = nlohmann::json::parse(first);
    std::string second = parsed.dump(2);
    CHECK(first == second);

    CHECK(parsed["schema_version"] == kSchemaVersion);
    CHECK(parsed["overall"]["status"] == "PASS");
    CHECK(parsed["conditions"].size() == 6);
    CHECK(parsed["epsilon_certificate"]["epsilon"].get<double>() > 0.0);
    CHECK(parsed["conditions"][0]["margins"].size() > 0);
    CHECK(parsed["geometry"]["fixed_points"]["p_mu"].get<double>() ==
          doctest::Approx(-2.6224989991991991).epsilon(1e-15));
    CHECK(parsed["geometry"]["legs"]["a"].get<double>() ==
          doctest::Approx(-3.6742346141747671).epsilon(1e-15));
    CHECK(parsed["geometry"]["markov"]["A"]["corners"].size() == 4);

    // no geometry section for parameters without legs
    CHECK(!geometry_summary(Params{1.185, -3.0, 0.0, 0.0}).has_value());
}

TEST_CASE("geometry csv carries the figure objects") {
    std::string csv = geometry_csv(Params{1.185, -9.5, 0.0, 0.0});
    CHECK(csv.find("fixed_point,P") != std::string::npos);
    CHECK(csv.find("fixed_point,Q") != std::string::npos);
    CHECK(csv.find("parallelogram,A_seg1") != std::string::npos);
    CHECK(csv.find("parallelogram,B_seg4") != std::string::npos);
    CHECK(csv.find("markov_line,R1") != std::string::npos);
    CHECK(csv.find("cone_line,L2") != std::string::npos);
}

TEST_CASE("disc and orbit csv emit one row per node / iterate") {
    UUDisc d = UUDisc::flat(0.25, 0.0, 16);
    std::string csv = disc_csv(d);
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 17);  // header + 16 nodes

    FixedPointData fp = fixed_points(Params{1.185, -9.5, 0.0, 0.0});
    auto [w, diag] = witness_stable_point(Params{1.185, -9.5, 0.0, 0.0}, UUDisc::flat(0.0), fp, 5);
    std::string orbit = orbit_csv(diag);
    CHECK(std::count(orbit.begin(), orbit.end(), '\n') == 7);  // header + 6 iterates
}
