#include <doctest.h>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

#ifndef BHS_CLI_PATH
#error "BHS_CLI_PATH must point at the blenderhs binary"
#endif

namespace {

struct RunResult {
    int exit_code = -1;
    std::string out;
};

RunResult run(const std::string& args) {
    std::string cmd = std::string(BHS_CLI_PATH) + " " + args + " 2>&1";
    FILE* pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    RunResult r;
    char buf[4096];
    while (size_t n = fread(buf, 1, sizeof(buf), pipe)) r.out.append(buf, n);
    int status = pclose(pipe);
    r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return r;
}

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    REQUIRE(in.good());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::string tmp_path(const std::string& name) {
    return std::string("/tmp/bhs_cli_test_") + name;
}

} // namespace

TEST_CASE("verify exit codes cover the full contract") {
    CHECK(run("verify --xi 1.185 --mu -9.5").exit_code == 0);
    CHECK(run("verify --xi 1.185 --mu -9.5 --rigorous").exit_code == 0);
    CHECK(run("verify --xi 0.9 --mu -9.5").exit_code == 1);
    CHECK(run("verify --xi 1.185 --mu -3").exit_code == 1);
    // margin pinned to zero at the expansion_case2 root: certified UNKNOWN
    CHECK(run("verify --xi 1.1656112644589158 --mu -9 --rigorous").exit_code == 2);
    CHECK(run("verify --mu -9.5").exit_code == 64);  // missing --xi
    CHECK(run("frobnicate").exit_code == 64);
}

TEST_CASE("failure reports name the violated precondition") {
    RunResult xi = run("verify --xi 0.9 --mu -9.5");
    CHECK(xi.out.find("InvalidXi") != std::string::npos);
    RunResult mu = run("verify --xi 1.185 --mu -3");
    CHECK(mu.out.find("LegsUndefined") != std::string::npos);
}

TEST_CASE("verify writes a parseable JSON report") {
    std::string path = tmp_path("verify.json");
    CHECK(run("verify --xi 1.185 --mu -9.5 --rigorous --report " + path).exit_code == 0);
    nlohmann::json doc = nlohmann::json::parse(slurp(path));
    CHECK(doc["overall"]["status"] == "PASS");
    CHECK(doc["rigorous"] == true);
    CHECK(doc["conditions"].size() == 6);
    for (const auto& cond : doc["conditions"])
        for (const auto& [name, margin] : cond["margins"].items()) {
            (void)name;
            CHECK(margin.get<double>() > 1e-2);
        }
    std::remove(path.c_str());
}

TEST_CASE("certify-box and certify-epsilon") {
    CHECK(run("certify-box --xi 1.18:1.19 --mu -10:-9").exit_code == 0);
    RunResult eps = run("certify-epsilon --xi 1.18:1.19 --mu -10:-9");
    CHECK(eps.exit_code == 0);
    CHECK(eps.out.find("epsilon:") != std::string::npos);
    CHECK(eps.out.find("binding check: BH2.expansion_case2") != std::string::npos);
    CHECK(eps.out.find("PASS") != std::string::npos);

    // a degenerate box behaves like verify
    CHECK(run("certify-box --xi 1.185:1.185 --mu -9.5:-9.5").exit_code == 0);
    CHECK(run("certify-box --xi 1.3:1.4 --mu -10:-9").exit_code == 1);
    // empty range is a usage error
    CHECK(run("certify-box --xi 1.19:1.18 --mu -10:-9").exit_code == 64);
}

TEST_CASE("sweep emits deterministic CSV regardless of worker count") {
    std::string p1 = tmp_path("sweep1.csv"), p4 = tmp_path("sweep4.csv");
    CHECK(run("sweep --xi 1.18:1.19:0.005 --mu -10:-9:0.25 --out " + p1).exit_code == 0);
    CHECK(run("--workers 4 sweep --xi 1.18:1.19:0.005 --mu -10:-9:0.25 --out " + p4)
              .exit_code == 0);
    std::string c1 = slurp(p1), c4 = slurp(p4);
    CHECK(c1 == c4);
    CHECK(c1.find("xi,mu,kappa,eta,bh1,bh2,bh3,bh4,bh5,bh6,overall,worst_margin,error") == 0);
    // every cell of the reference box passes
    std::istringstream lines(c1);
    std::string line;
    std::getline(lines, line);
    int rows = 0;
    while (std::getline(lines, line)) {
        CHECK(line.find(",PASS,") != std::string::npos);
        ++rows;
    }
    CHECK(rows > 0);
    std::remove(p1.c_str());
    std::remove(p4.c_str());
}

TEST_CASE("sweep near and past the leg boundary") {
    std::string path = tmp_path("sweep_legs.csv");
    CHECK(run("sweep --xi 1.185:1.185 --mu -4.5:-3.9:0.1 --out " + path).exit_code == 0);
    std::string csv = slurp(path);
    // mu in [-4.5, -4.1): legs exist but the cone conditions fail
    CHECK(csv.find("-4.5,0,0,") != std::string::npos);
    CHECK(csv.find("FAIL") != std::string::npos);
    // mu >= -4: structured LegsUndefined rows, never a crash
    CHECK(csv.find("LegsUndefined") != std::string::npos);
    std::remove(path.c_str());

    CHECK(run("sweep --xi 1.2:1.1:0.01 --mu -10:-9:0.5 --out /tmp/never.csv").exit_code == 64);
}

TEST_CASE("sweep box mode certifies each cell as a sub-box") {
    std::string path = tmp_path("sweep_box.csv");
    CHECK(run("sweep --xi 1.18:1.19:0.005 --mu -10:-9:0.5 --mode box --out " + path)
              .exit_code == 0);
    std::string csv = slurp(path);
    std::istringstream lines(csv);
    std::string line;
    std::getline(lines, line);
    while (std::getline(lines, line)) CHECK(line.find(",PASS,") != std::string::npos);
    std::remove(path.c_str());
}

TEST_CASE("disc subcommand") {
    std::string prefix = tmp_path("disc");
    RunResult r = run("disc --z0 0 --iters 30 --out " + prefix);
    CHECK(r.exit_code == 0);
    CHECK(r.out.find("itinerary:") != std::string::npos);
    CHECK(slurp(prefix + "_orbit.csv").find("iterate,x,y,z,cube_margin") == 0);
    CHECK(slurp(prefix + "_geometry.csv").find("object,label,y,z") == 0);
    for (const char* suffix : {"_disc.csv", "_orbit.csv", "_diameters.csv", "_geometry.csv"})
        std::remove((prefix + suffix).c_str());

    CHECK(run("disc --z0 20").exit_code == 1);
    CHECK(run("disc --z0 20").out.find("NotInBetween") != std::string::npos);
}

TEST_CASE("strip subcommand") {
    RunResult r = run("strip --z -1:1 --iters 25");
    CHECK(r.exit_code == 0);
    CHECK(r.out.find("transverse crossing") != std::string::npos);

    // a single-disc strip degenerates to disc classification
    RunResult single = run("strip --z 1:1");
    CHECK(single.exit_code == 0);
    CHECK(single.out.find("in_between = true") != std::string::npos);
}

TEST_CASE("config file provides defaults that flags override") {
    std::string cfg = tmp_path("config.ini");
    {
        std::ofstream out(cfg);
        out << "vartheta=0.05\n";
    }
    std::string rpt = tmp_path("cfg_report.json");
    CHECK(run("--config " + cfg + " verify --xi 1.185 --mu -9.5 --report " + rpt).exit_code ==
          0);
    nlohmann::json doc = nlohmann::json::parse(slurp(rpt));
    CHECK(doc["cone"]["vartheta"].get<double>() == 0.05);

    CHECK(run("--config " + cfg + " --vartheta 0.02 verify --xi 1.185 --mu -9.5 --report " +
              rpt)
              .exit_code == 0);
    doc = nlohmann::json::parse(slurp(rpt));
    CHECK(doc["cone"]["vartheta"].get<double>() == 0.02);
    std::remove(cfg.c_str());
    std::remove(rpt.c_str());
}
