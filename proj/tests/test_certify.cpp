#include <doctest.h>

#include <cmath>
#include <random>

#include "bhs/certify.hpp"

using namespace bhs;

namespace {

const Params kRef{1.185, -9.5, 0.0, 0.0};

const ParamsBox kRefBox{Interval(1.18, 1.19), Interval(-10.0, -9.0), Interval(0.0),
                        Interval(0.0)};

double margin_of(const ConditionReport& r, const std::string& name) {
    auto it = r.margins.find(name);
    REQUIRE(it != r.margins.end());
    return it->second;
}

const SubCheck& sub(const ConditionReport& r, const std::string& name) {
    for (const auto& sc : r.sub_checks)
        if (sc.name == name) return sc;
    REQUIRE(false);
    return r.sub_checks.front();
}

Params random_interior(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> dxi(1.1801, 1.1899), dmu(-9.999, -9.001);
    return {dxi(rng), dmu(rng), 0.0, 0.0};
}

} // namespace

TEST_CASE("BH1 at the reference point") {
    ConditionReport r = check_bh1(kRef);
    CHECK(r.overall.status == Status::PASS);
    CHECK(margin_of(r, "legs_separated") == doctest::Approx(2 * std::sqrt(5.5)).epsilon(1e-9));
    // escape margins at the interior samples
    CHECK(margin_of(r, "escape_mid_sample") == doctest::Approx(5.5).epsilon(1e-9));
    CHECK(margin_of(r, "escape_outer_sample") > 0.9);
    CHECK(margin_of(r, "image_x_inside") ==
          doctest::Approx(4.0 - std::sqrt(13.5)).epsilon(1e-9));
    // closure checks attain equality at the leg walls: margins near zero
    CHECK(sub(r, "escape_outer_closure").verdict.status == Status::PASS);
    CHECK(std::fabs(sub(r, "escape_outer_closure").verdict.margin) <= 1e-9);
    CHECK(sub(r, "image_A_upper_closure").verdict.status == Status::PASS);
    CHECK(sub(r, "image_B_lower_closure").verdict.status == Status::PASS);
    CHECK(sub(r, "escape_right_closure").verdict.status == Status::PASS);
    CHECK(margin_of(r, "escape_right_sample") > 0.9);
    CHECK(margin_of(r, "image_B_sample") ==
          doctest::Approx(margin_of(r, "image_A_sample")).epsilon(1e-12));
    CHECK(sub(r, "wall_image_a").verdict.status == Status::PASS);
    // closure/equality checks never enter the margins map
    CHECK(r.margins.count("escape_outer_closure") == 0);
    CHECK(r.margins.count("wall_image_a") == 0);
    CHECK(r.margins.count("image_A_upper_strict") == 0);
}

TEST_CASE("BH1 requires legs") {
    CHECK_THROWS_AS(check_bh1(Params{1.185, -3.0, 0, 0}), LegsUndefined);
}

TEST_CASE("BH2 at the reference point") {
    ConditionReport r = check_bh2(kRef, ConeConfig{});
    CHECK(r.overall.status == Status::PASS);
    CHECK(margin_of(r, "expansion_case1") == doctest::Approx(16.0 - 13.0 * 1.185).epsilon(1e-12));
    CHECK(margin_of(r, "expansion_case2") ==
          doctest::Approx(1.185 * 1.185 - 2.0 * 1.185 / 6.5 - 1.0).epsilon(1e-9));
    CHECK(margin_of(r, "uu_cone_bound") ==
          doctest::Approx(4.0 - (2.0 + 1.185 + 0.5925 * 0.5925)).epsilon(1e-9));
    CHECK(margin_of(r, "uu_cone_y") == doctest::Approx(2 * std::sqrt(5.5) - 4).epsilon(1e-9));
    CHECK(margin_of(r, "s_cone_escape") == doctest::Approx(2 * std::sqrt(5.5) - 1).epsilon(1e-9));
    CHECK(margin_of(r, "s_cone_contraction") > 0.2);
}

TEST_CASE("BH2 carries the sampled constant as a diagnostic only") {
    ConditionReport r = check_bh2(kRef, ConeConfig{});
    const SubCheck& diag = sub(r, "expansion_c0_sampled");
    CHECK(diag.kind == CheckKind::Diagnostic);
    CHECK(diag.verdict.margin > 0.0);  // c0 > 1
    CHECK(r.margins.count("expansion_c0_sampled") == 0);
}

TEST_CASE("BH2 sampled expansion constant") {
    ExpansionEstimate est = estimate_expansion(kRef, ConeConfig{});
    CHECK(est.samples == 64 * 64 * 64);
    CHECK(est.c0 > 1.0);
    CHECK(est.c0 < 1.3);  // the adversarial direction v ~ -w/21 sits below xi^2
    CHECK(est.ell >= 1);
    CHECK(std::pow(est.c0, est.ell) > est.norm_equivalence);
}

TEST_CASE("BH3 at the reference point") {
    ConditionReport r = check_bh3(kRef);
    CHECK(r.overall.status == Status::PASS);
    // (22 + sqrt(13.5))/1.185 = 21.666..., margin 0.334
    CHECK(margin_of(r, "z1_below_22_at_a") == doctest::Approx(0.33397922854450).epsilon(1e-9));
    CHECK(margin_of(r, "z2_above_m40_at_d") == doctest::Approx(3.14410581082298).epsilon(1e-9));
    CHECK(sub(r, "corner_image_residual").verdict.status == Status::PASS);
}

TEST_CASE("BH4 at the reference point") {
    FixedPointData fp = fixed_points(kRef);
    ConditionReport r = check_bh4(kRef, fp);
    CHECK(r.overall.status == Status::PASS);
    // z1(4) = 17.4869..., z2(-4) = -23.3923...
    CHECK(margin_of(r, "L1_exits_above") == doctest::Approx(22.0 - 17.48691976554122).epsilon(1e-9));
    CHECK(margin_of(r, "L2_exits_below") == doctest::Approx(40.0 - 23.39232517094662).epsilon(1e-9));
}

TEST_CASE("BH5 at the reference point") {
    FixedPointData fp = fixed_points(kRef);
    ConditionReport r = check_bh5(kRef, fp);
    CHECK(r.overall.status == Status::PASS);
    CHECK(margin_of(r, "xi_expansion") == doctest::Approx(0.185).epsilon(1e-12));
    // z~ - p~ = 2.137336684347347...
    CHECK(margin_of(r, "keep_P") == doctest::Approx(2.137336684347347).epsilon(1e-9));
    // mirrored worst case for Q: q~ - w~ = (2 - xi) q
    CHECK(margin_of(r, "keep_Q") ==
          doctest::Approx((2.0 - 1.185) * 3.622498999199199).epsilon(1e-9));
    CHECK(sub(r, "phi_p_fixed").verdict.status == Status::PASS);
    CHECK(sub(r, "phi_onto").verdict.status == Status::PASS);
}

TEST_CASE("BH6 at the reference point") {
    FixedPointData fp = fixed_points(kRef);
    Legs l = legs(kRef);
    ConditionReport r = check_bh6(kRef, fp, l);
    CHECK(r.overall.status == Status::PASS);
    // |q~-p~| = 33.7567..., (xi/2+1)|q-a| = 11.6200...
    CHECK(margin_of(r, "in_between_gap") == doctest::Approx(22.13669765799060).epsilon(1e-9));
    CHECK(margin_of(r, "legspan_below_12_16") ==
          doctest::Approx(12.16 - 11.62004827929804).epsilon(1e-8));
    CHECK(margin_of(r, "saddle_gap_above_31_4") ==
          doctest::Approx(33.75674593728864 - 31.4).epsilon(1e-8));
}

TEST_CASE("certify_point aggregates all six conditions") {
    FullReport rep = certify_point(kRef);
    CHECK(rep.overall.status == Status::PASS);
    CHECK(rep.conditions.size() == 6);
    auto [name, margin] = rep.min_margin();
    CHECK(name == "BH2.expansion_case2");
    CHECK(margin > 1e-2);
    for (const auto& cond : rep.conditions)
        for (const auto& [n, m] : cond.margins) CHECK(m > 1e-2);
}

TEST_CASE("certify_point rejects invalid parameters") {
    CHECK_THROWS_AS(certify_point(Params{0.9, -9.5, 0, 0}), InvalidXi);
    CHECK_THROWS_AS(certify_point(Params{1.0, -9.5, 0, 0}), DegenerateXi);
    CHECK_THROWS_AS(certify_point(Params{1.185, -3.0, 0, 0}), LegsUndefined);
}

TEST_CASE("certify_box over the reference box") {
    FullReport rep = certify_box(kRefBox);
    CHECK(rep.overall.status == Status::PASS);
    CHECK(rep.overall.max_depth_reached <= 16);
    for (const auto& cond : rep.conditions) CHECK(cond.overall.status == Status::PASS);
}

TEST_CASE("box PASS implies point PASS at 1e3 random interior points") {
    FullReport box = certify_box(kRefBox);
    REQUIRE(box.overall.status == Status::PASS);
    std::mt19937_64 rng(2025);
    CertifyConfig cheap;
    cheap.rigorous = false;
    for (int i = 0; i < 1000; ++i) {
        FullReport pt = certify_point(random_interior(rng), cheap);
        CHECK(pt.overall.status == Status::PASS);
    }
}

TEST_CASE("margin consistency: binary64 midpoint margins dominate interval margins") {
    FullReport rig = certify_point(kRef);
    CertifyConfig plain_cfg;
    plain_cfg.rigorous = false;
    FullReport plain = certify_point(kRef, plain_cfg);
    REQUIRE(rig.conditions.size() == plain.conditions.size());
    for (std::size_t i = 0; i < rig.conditions.size(); ++i) {
        for (const auto& [name, m] : rig.conditions[i].margins) {
            double pd = plain.conditions[i].margins.at(name);
            CHECK(pd >= m);
            CHECK(pd - m <= 1e-9 * std::max(1.0, std::fabs(pd)));
        }
    }
}

TEST_CASE("FAIL carries a numeric witness") {
    // expansion_case1 fails for xi in [1.3, 1.4]
    ParamsBox bad{Interval(1.3, 1.4), Interval(-10.0, -9.0), Interval(0.0), Interval(0.0)};
    FullReport rep = certify_box(bad);
    CHECK(rep.overall.status == Status::FAIL);
    const ConditionReport* bh2 = rep.find(Condition::BH2);
    REQUIRE(bh2 != nullptr);
    CHECK(bh2->overall.status == Status::FAIL);
    bool found = false;
    for (const auto& sc : bh2->sub_checks) {
        if (sc.verdict.status != Status::FAIL) continue;
        REQUIRE(sc.verdict.witness.has_value());
        if (sc.name == "expansion_case1") {
            double xi = (*sc.verdict.witness)[0];
            CHECK(16.0 - 13.0 * xi < 0.0);  // the named inequality fails numerically
            found = true;
        }
    }
    CHECK(found);
}

TEST_CASE("epsilon certificate over the reference box") {
    EpsilonCertificate cert = certify_epsilon(kRefBox);
    CHECK(cert.epsilon > 0.0);
    CHECK(cert.epsilon >= 1e-5);
    CHECK(cert.binding_check == "BH2.expansion_case2");
    CHECK(cert.corners_pass);
    CHECK(cert.corner_epsilon == doctest::Approx(0.9 * cert.epsilon));
    // runtime-enclosed sensitivity constants over [-4,4]^2 x [-40,22]
    CHECK(cert.model.value_per_kappa == doctest::Approx(160.0));
    CHECK(cert.model.value_per_eta == doctest::Approx(1600.0));
    CHECK(cert.model.jac_per_kappa == doctest::Approx(44.0));
    CHECK(cert.model.jac_per_eta == doctest::Approx(80.0));

    // a point inside the certified radius passes outright
    Params corner{1.185, -9.5, cert.epsilon / 2, -cert.epsilon / 2};
    CHECK(certify_point(corner).overall.status == Status::PASS);
}

TEST_CASE("epsilon grows on sub-boxes") {
    EpsilonCertificate parent = certify_epsilon(kRefBox);
    ParamsBox sub = kRefBox;
    sub.xi = Interval(1.184, 1.186);
    sub.mu = Interval(-9.6, -9.4);
    EpsilonCertificate child = certify_epsilon(sub);
    CHECK(child.epsilon >= parent.epsilon);
}

TEST_CASE("epsilon requires a passing base certification") {
    ParamsBox bad{Interval(1.3, 1.4), Interval(-10.0, -9.0), Interval(0.0), Interval(0.0)};
    CHECK_THROWS_AS(certify_epsilon(bad), NoPositiveEpsilon);
    ParamsBox perturbed = kRefBox;
    perturbed.kappa = Interval(1e-6);
    CHECK_THROWS_AS(certify_epsilon(perturbed), UsageError);
}

TEST_CASE("perturbed points absorb kappa/eta through the margin pool") {
    Params p = kRef;
    p.kappa = 1e-7;
    p.eta = -1e-7;
    FullReport rep = certify_point(p);
    CHECK(rep.overall.status == Status::PASS);
    CHECK(rep.perturbation_absorbed > 0.0);
    // absorption shrinks every strict margin by exactly the reduction
    FullReport base = certify_point(kRef);
    auto [bn, bm] = base.min_margin();
    auto [pn, pm] = rep.min_margin();
    CHECK(pm < bm);
    CHECK(bm - pm == doctest::Approx(rep.perturbation_absorbed).epsilon(1e-6));

    // a perturbation beyond the certified radius flips the binding check
    Params too_far = kRef;
    too_far.eta = 0.1;
    FullReport far_rep = certify_point(too_far);
    CHECK(far_rep.overall.status != Status::PASS);
}
