// blenderhs - certification CLI for the blender-horseshoe of the
// center-unstable Henon-like family.
//
// Subcommands:
//   verify           check BH1-BH6 at one parameter point
//   certify-box      certify BH1-BH6 over a parameter box
//   certify-epsilon  certified perturbation radius in (kappa, eta)
//   sweep            grid sweep, one CSV row per cell
//   disc             nested-disc witness experiment for a flat uu-disc
//   strip            u-strip growth experiment up to a W^s_loc(P) crossing
//
// Exit codes: 0 PASS, 1 FAIL (including structured domain errors),
// 2 UNKNOWN, 64 usage error.

#include <atomic>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "bhs/certify.hpp"
#include "bhs/disc.hpp"
#include "bhs/report.hpp"

namespace {

constexpr int kExitPass = 0;
constexpr int kExitFail = 1;
constexpr int kExitUnknown = 2;
constexpr int kExitUsage = 64;

struct Range {
    double lo = 0.0;
    double hi = 0.0;
    double step = 0.0;  // 0 means "no step given"

    bool is_point() const { return lo == hi; }
};

// Accepts "v", "lo:hi" and "lo:hi:step".
Range parse_range(const std::string& text) {
    Range r;
    std::vector<std::string> parts;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ':')) parts.push_back(item);
    try {
        if (parts.size() == 1) {
            r.lo = r.hi = std::stod(parts[0]);
        } else if (parts.size() == 2 || parts.size() == 3) {
            r.lo = std::stod(parts[0]);
            r.hi = std::stod(parts[1]);
            if (parts.size() == 3) r.step = std::stod(parts[2]);
        } else {
            throw bhs::UsageError("range must be value, lo:hi or lo:hi:step: " + text);
        }
    } catch (const std::invalid_argument&) {
        throw bhs::UsageError("cannot parse range: " + text);
    } catch (const std::out_of_range&) {
        throw bhs::UsageError("range value out of range: " + text);
    }
    if (r.lo > r.hi) throw bhs::UsageError("empty range (lo > hi): " + text);
    if (r.step < 0.0) throw bhs::UsageError("negative step: " + text);
    return r;
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw bhs::UsageError("cannot open for writing: " + path);
    out << content;
}

int status_exit(bhs::Status s) {
    switch (s) {
        case bhs::Status::PASS: return kExitPass;
        case bhs::Status::FAIL: return kExitFail;
        default: return kExitUnknown;
    }
}

void print_report(const bhs::FullReport& rep) {
    for (const auto& cond : rep.conditions) {
        std::cout << to_string(cond.condition) << ": " << to_string(cond.overall.status);
        auto worst = std::min_element(
            cond.margins.begin(), cond.margins.end(),
            [](const auto& a, const auto& b) { return a.second < b.second; });
        if (worst != cond.margins.end())
            std::cout << "  (min margin " << bhs::format_double(worst->second) << " at "
                      << worst->first << ")";
        std::cout << '\n';
    }
    auto [name, margin] = rep.min_margin();
    std::cout << "overall: " << to_string(rep.overall.status) << "  binding " << name << " = "
              << bhs::format_double(margin) << "  (" << bhs::format_double(rep.wall_time_s)
              << " s)\n";
}

struct CommonFlags {
    double theta = 0.5;
    double vartheta = 0.1;
    int max_depth = 24;
    int workers = 1;
    unsigned long long seed = 0;  // reserved for sampled diagnostics
    std::string report_path;
};

bhs::CertifyConfig make_config(const CommonFlags& f, bool rigorous) {
    bhs::CertifyConfig cfg;
    cfg.cone.theta = f.theta;
    cfg.cone.vartheta = f.vartheta;
    cfg.prover.max_depth = f.max_depth;
    cfg.rigorous = rigorous;
    return cfg;
}

void maybe_write_report(const CommonFlags& f, const bhs::ReportDocument& doc) {
    if (!f.report_path.empty()) write_file(f.report_path, bhs::serialize(doc) + "\n");
}

int cmd_verify(const CommonFlags& flags, double xi, double mu, double kappa, double eta,
               bool rigorous) {
    bhs::Params p{xi, mu, kappa, eta};
    bhs::FullReport rep = bhs::certify_point(p, make_config(flags, rigorous));
    print_report(rep);
    maybe_write_report(flags, {rep, std::nullopt, bhs::geometry_summary(p)});
    return status_exit(rep.overall.status);
}

bhs::ParamsBox box_from_ranges(const Range& xi, const Range& mu, const Range& kappa,
                               const Range& eta) {
    return {bhs::Interval(xi.lo, xi.hi), bhs::Interval(mu.lo, mu.hi),
            bhs::Interval(kappa.lo, kappa.hi), bhs::Interval(eta.lo, eta.hi)};
}

int cmd_certify_box(const CommonFlags& flags, const bhs::ParamsBox& box) {
    bhs::FullReport rep = bhs::certify_box(box, make_config(flags, true));
    print_report(rep);
    std::optional<bhs::GeometrySummary> geo;
    if (box.is_point()) geo = bhs::geometry_summary(box.midpoint());
    maybe_write_report(flags, {rep, std::nullopt, geo});
    return status_exit(rep.overall.status);
}

int cmd_certify_epsilon(const CommonFlags& flags, const bhs::ParamsBox& box) {
    bhs::CertifyConfig cfg = make_config(flags, true);
    bhs::FullReport rep = bhs::certify_box(box, cfg);
    print_report(rep);
    if (rep.overall.status != bhs::Status::PASS) {
        maybe_write_report(flags, {rep, std::nullopt, std::nullopt});
        return status_exit(rep.overall.status);
    }
    bhs::EpsilonCertificate cert = bhs::certify_epsilon(box, cfg);
    std::cout << "epsilon: " << bhs::format_double(cert.epsilon) << "\nbinding check: "
              << cert.binding_check << " (margin " << bhs::format_double(cert.min_margin)
              << ")\ncorner re-check at +-" << bhs::format_double(cert.corner_epsilon) << ": "
              << (cert.corners_pass ? "PASS" : "FAIL") << '\n';
    maybe_write_report(flags, {rep, cert, std::nullopt});
    return cert.corners_pass && cert.epsilon > 0.0 ? kExitPass : kExitFail;
}

struct SweepSpec {
    Range xi, mu, kappa, eta;
    bool box_mode = false;
    long cell_cap = 1'000'000;
};

std::vector<double> grid_points(const Range& r) {
    std::vector<double> pts;
    if (r.step == 0.0 || r.is_point()) {
        pts.push_back(r.lo);
        if (!r.is_point()) pts.push_back(r.hi);
        return pts;
    }
    long n = static_cast<long>(std::floor((r.hi - r.lo) / r.step + 1e-12));
    for (long i = 0; i <= n; ++i) pts.push_back(r.lo + r.step * static_cast<double>(i));
    return pts;
}

int cmd_sweep(const CommonFlags& flags, const SweepSpec& spec, const std::string& out_path) {
    auto gx = grid_points(spec.xi);
    auto gm = grid_points(spec.mu);
    auto gk = grid_points(spec.kappa);
    auto ge = grid_points(spec.eta);
    long total = static_cast<long>(gx.size()) * static_cast<long>(gm.size()) *
                 static_cast<long>(gk.size()) * static_cast<long>(ge.size());
    if (total > spec.cell_cap)
        throw bhs::UsageError("sweep grid has " + std::to_string(total) +
                              " cells, above the cap of " + std::to_string(spec.cell_cap));

    bhs::CertifyConfig cfg = make_config(flags, true);
    cfg.with_expansion_estimate = false;  // diagnostic, dominates per-cell cost
    std::vector<std::string> rows(static_cast<std::size_t>(total));

    auto cell_of = [&](long idx) {
        long ie = idx % static_cast<long>(ge.size());
        idx /= static_cast<long>(ge.size());
        long ik = idx % static_cast<long>(gk.size());
        idx /= static_cast<long>(gk.size());
        long im = idx % static_cast<long>(gm.size());
        long ix = idx / static_cast<long>(gm.size());
        return std::array<long, 4>{ix, im, ik, ie};
    };

    auto run_cell = [&](long idx) {
        auto [ix, im, ik, ie] = cell_of(idx);
        double xi = gx[static_cast<std::size_t>(ix)];
        double mu = gm[static_cast<std::size_t>(im)];
        double kappa = gk[static_cast<std::size_t>(ik)];
        double eta = ge[static_cast<std::size_t>(ie)];

        std::ostringstream row;
        row << bhs::format_double(xi) << ',' << bhs::format_double(mu) << ','
            << bhs::format_double(kappa) << ',' << bhs::format_double(eta) << ',';
        try {
            bhs::FullReport rep;
            if (spec.box_mode) {
                auto cell_interval = [](double lo, double step, double cap) {
                    return bhs::Interval(lo, std::min(lo + step, cap));
                };
                bhs::ParamsBox box{cell_interval(xi, spec.xi.step, spec.xi.hi),
                                   cell_interval(mu, spec.mu.step, spec.mu.hi),
                                   cell_interval(kappa, spec.kappa.step, spec.kappa.hi),
                                   cell_interval(eta, spec.eta.step, spec.eta.hi)};
                rep = bhs::certify_box(box, cfg);
            } else {
                rep = bhs::certify_point(bhs::Params{xi, mu, kappa, eta}, cfg);
            }
            for (const auto& cond : rep.conditions)
                row << to_string(cond.overall.status) << ',';
            auto [name, margin] = rep.min_margin();
            row << to_string(rep.overall.status) << ',' << bhs::format_double(margin) << ',';
        } catch (const bhs::DomainError& e) {
            row << "-,-,-,-,-,-,FAIL,," << e.name();
            rows[static_cast<std::size_t>(idx)] = row.str();
            return;
        }
        rows[static_cast<std::size_t>(idx)] = row.str();
    };

    int workers = std::max(1, flags.workers);
    if (workers == 1) {
        for (long i = 0; i < total; ++i) run_cell(i);
    } else {
        std::atomic<long> next{0};
        std::vector<std::thread> pool;
        pool.reserve(static_cast<std::size_t>(workers));
        for (int w = 0; w < workers; ++w)
            pool.emplace_back([&] {
                for (long i = next.fetch_add(1); i < total; i = next.fetch_add(1)) run_cell(i);
            });
        for (auto& t : pool) t.join();
    }

    std::ostringstream os;
    os << "xi,mu,kappa,eta,bh1,bh2,bh3,bh4,bh5,bh6,overall,worst_margin,error\n";
    for (const auto& r : rows) os << r << '\n';
    write_file(out_path, os.str());
    std::cout << total << " cells -> " << out_path << '\n';
    return kExitPass;
}

int cmd_disc(const CommonFlags& flags, double xi, double mu, double z0, double x0, int iters,
             std::size_t nodes, const std::string& out_prefix) {
    bhs::Params p{xi, mu, 0.0, 0.0};
    bhs::FixedPointData fp = bhs::fixed_points(p);
    bhs::UUDisc d = bhs::UUDisc::flat(z0, x0, nodes, flags.theta);

    auto [witness, diag] = bhs::witness_stable_point(p, d, fp, iters);
    std::cout << "itinerary: " << diag.itinerary << '\n';
    std::cout << "witness: (" << bhs::format_double(witness.x) << ", "
              << bhs::format_double(witness.y) << ", " << bhs::format_double(witness.z)
              << ")\n";
    std::cout << "final interval width: " << bhs::format_double(diag.final_interval_width)
              << '\n';
    double worst = diag.orbit_margins.front();
    for (double m : diag.orbit_margins) worst = std::min(worst, m);
    std::cout << "orbit stays in cube for " << iters
              << " iterations; worst margin to the boundary: " << bhs::format_double(worst)
              << '\n';

    if (!out_prefix.empty()) {
        write_file(out_prefix + "_disc.csv", bhs::disc_csv(d));
        write_file(out_prefix + "_orbit.csv", bhs::orbit_csv(diag));
        std::ostringstream diam;
        diam << "step,leg,diameter\n";
        for (std::size_t i = 0; i < diag.diameters.size(); ++i)
            diam << (i + 1) << ',' << diag.itinerary[i] << ','
                 << bhs::format_double(diag.diameters[i]) << '\n';
        write_file(out_prefix + "_diameters.csv", diam.str());
        write_file(out_prefix + "_geometry.csv", bhs::geometry_csv(p));
    }
    return kExitPass;
}

int cmd_strip(const CommonFlags& flags, double xi, double mu, const Range& z, int members,
              int iters, std::size_t nodes, const std::string& out_prefix) {
    bhs::Params p{xi, mu, 0.0, 0.0};
    bhs::FixedPointData fp = bhs::fixed_points(p);

    if (z.is_point() || members < 2) {
        // Degenerate strip: behaves as a single-disc classification.
        bhs::UUDisc d = bhs::UUDisc::flat(z.lo, 0.0, nodes, flags.theta);
        bhs::Betweenness b = bhs::classify(d, fp);
        std::cout << "single disc at z0 = " << bhs::format_double(z.lo)
                  << ": in_between = " << (b.in_between ? "true" : "false")
                  << " (z at p = " << bhs::format_double(b.z_at_p)
                  << ", z at q = " << bhs::format_double(b.z_at_q) << ")\n";
        return b.in_between ? kExitPass : kExitFail;
    }

    bhs::UStrip s = bhs::UStrip::flat(z.lo, z.hi, static_cast<std::size_t>(members), nodes,
                                      flags.theta);
    bhs::StripGrowth g = bhs::grow_strip(p, s, fp, iters);
    if (g.hit)
        std::cout << "transverse crossing of W^s_loc(P) at iteration " << g.hit_iteration
                  << " (leg " << (g.hit_leg == bhs::Leg::A ? 'A' : 'B') << ", member "
                  << g.crossing_member << ", transverse "
                  << (g.crossing_transverse ? "yes" : "no") << ")\n";
    else
        std::cout << "no crossing within " << iters << " iterations\n";
    std::cout << "widths:";
    for (double w : g.widths) std::cout << ' ' << bhs::format_double(w);
    std::cout << '\n';

    if (!out_prefix.empty()) {
        write_file(out_prefix + "_widths.csv", bhs::widths_csv(g));
        write_file(out_prefix + "_geometry.csv", bhs::geometry_csv(p));
    }
    return g.hit ? kExitPass : kExitFail;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"blender-horseshoe certification for the center-unstable Henon-like family"};
    app.set_config("--config", "", "key=value config file; flags override it");
    app.require_subcommand(1);

    CommonFlags flags;
    app.add_option("--theta", flags.theta, "uu/u cone aperture")->capture_default_str();
    app.add_option("--vartheta", flags.vartheta, "s-cone aperture")->capture_default_str();
    app.add_option("--max-depth", flags.max_depth, "branch-and-bound depth ceiling")
        ->capture_default_str();
    app.add_option("--workers", flags.workers, "worker threads for sweep cells")
        ->capture_default_str();
    app.add_option("--seed", flags.seed, "seed for sampled diagnostics (reserved)");

    std::string xi_text, mu_text, kappa_text = "0", eta_text = "0";
    bool rigorous = false;

    auto* verify = app.add_subcommand("verify", "check BH1-BH6 at a parameter point");
    double v_xi = 0.0, v_mu = 0.0, v_kappa = 0.0, v_eta = 0.0;
    verify->add_option("--xi", v_xi, "expansion rate xi > 1")->required();
    verify->add_option("--mu", v_mu, "quadratic offset mu")->required();
    verify->add_option("--kappa", v_kappa, "yz coupling")->capture_default_str();
    verify->add_option("--eta", v_eta, "z^2 coupling")->capture_default_str();
    verify->add_flag("--rigorous", rigorous, "interval-certified margins");
    verify->add_option("--report", flags.report_path, "write a JSON report");

    auto* cbox = app.add_subcommand("certify-box", "certify BH1-BH6 over a parameter box");
    cbox->add_option("--xi", xi_text, "xi range lo:hi")->required();
    cbox->add_option("--mu", mu_text, "mu range lo:hi")->required();
    cbox->add_option("--kappa", kappa_text, "kappa range")->capture_default_str();
    cbox->add_option("--eta", eta_text, "eta range")->capture_default_str();
    cbox->add_option("--report", flags.report_path, "write a JSON report");

    auto* ceps = app.add_subcommand("certify-epsilon",
                                    "certified perturbation radius in (kappa, eta)");
    ceps->add_option("--xi", xi_text, "xi range lo:hi")->required();
    ceps->add_option("--mu", mu_text, "mu range lo:hi")->required();
    ceps->add_option("--report", flags.report_path, "write a JSON report");

    auto* sweep = app.add_subcommand("sweep", "grid sweep, one CSV row per cell");
    std::string s_xi, s_mu, s_kappa = "0", s_eta = "0", s_mode = "point", s_out;
    long s_cap = 1'000'000;
    sweep->add_option("--xi", s_xi, "xi range lo:hi:step")->required();
    sweep->add_option("--mu", s_mu, "mu range lo:hi:step")->required();
    sweep->add_option("--kappa", s_kappa, "kappa range")->capture_default_str();
    sweep->add_option("--eta", s_eta, "eta range")->capture_default_str();
    sweep->add_option("--mode", s_mode, "point or box")->capture_default_str();
    sweep->add_option("--cap", s_cap, "maximum grid cells")->capture_default_str();
    sweep->add_option("--out", s_out, "output CSV path")->required();

    auto* disc = app.add_subcommand("disc", "nested-disc witness for a flat uu-disc");
    double d_xi = 1.185, d_mu = -9.5, d_z0 = 0.0, d_x0 = 0.0;
    int d_iters = 30;
    std::size_t d_nodes = 1024;
    std::string d_out;
    disc->add_option("--xi", d_xi)->capture_default_str();
    disc->add_option("--mu", d_mu)->capture_default_str();
    disc->add_option("--z0", d_z0, "height of the flat disc")->capture_default_str();
    disc->add_option("--x0", d_x0)->capture_default_str();
    disc->add_option("--iters", d_iters)->capture_default_str();
    disc->add_option("--nodes", d_nodes)->capture_default_str();
    disc->add_option("--out", d_out, "output CSV prefix");

    auto* strip = app.add_subcommand("strip", "u-strip growth up to a W^s_loc(P) crossing");
    double st_xi = 1.185, st_mu = -9.5;
    std::string st_z = "-1:1", st_out;
    int st_members = 33, st_iters = 25;
    std::size_t st_nodes = 1024;
    strip->add_option("--xi", st_xi)->capture_default_str();
    strip->add_option("--mu", st_mu)->capture_default_str();
    strip->add_option("--z", st_z, "z0 range lo:hi")->capture_default_str();
    strip->add_option("--members", st_members)->capture_default_str();
    strip->add_option("--iters", st_iters)->capture_default_str();
    strip->add_option("--nodes", st_nodes)->capture_default_str();
    strip->add_option("--out", st_out, "output CSV prefix");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);  // --help
        app.exit(e);
        return kExitUsage;
    }

    try {
        if (*verify) return cmd_verify(flags, v_xi, v_mu, v_kappa, v_eta, rigorous);
        if (*cbox)
            return cmd_certify_box(flags,
                                   box_from_ranges(parse_range(xi_text), parse_range(mu_text),
                                                   parse_range(kappa_text),
                                                   parse_range(eta_text)));
        if (*ceps)
            return cmd_certify_epsilon(
                flags, box_from_ranges(parse_range(xi_text), parse_range(mu_text),
                                       parse_range("0"), parse_range("0")));
        if (*sweep) {
            SweepSpec spec;
            spec.xi = parse_range(s_xi);
            spec.mu = parse_range(s_mu);
            spec.kappa = parse_range(s_kappa);
            spec.eta = parse_range(s_eta);
            spec.cell_cap = s_cap;
            if (s_mode == "box")
                spec.box_mode = true;
            else if (s_mode != "point")
                throw bhs::UsageError("--mode must be point or box, got " + s_mode);
            return cmd_sweep(flags, spec, s_out);
        }
        if (*disc) return cmd_disc(flags, d_xi, d_mu, d_z0, d_x0, d_iters, d_nodes, d_out);
        if (*strip)
            return cmd_strip(flags, st_xi, st_mu, parse_range(st_z), st_members, st_iters,
                             st_nodes, st_out);
    } catch (const bhs::UsageError& e) {
        std::cerr << "usage error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const bhs::DomainError& e) {
        std::cerr << "FAIL: " << e.name() << ": " << e.what() << '\n';
        return kExitFail;
    }
    return kExitUsage;
}
