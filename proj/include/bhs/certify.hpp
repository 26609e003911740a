#pragma once

// Certification of the six blender-horseshoe conditions BH1-BH6 for the
// center-unstable Henon-like family, at a parameter point or over a
// parameter box, plus a certified perturbation radius epsilon in
// (kappa, eta).
//
// Every condition is reduced to named sub-checks of three kinds:
//   Strict    - a scalar or quantified inequality "expr > 0"; the reported
//               margin is a certified lower bound of expr (in rigorous
//               mode). These are the entries of ConditionReport::margins.
//   Closure   - a quantified inequality "expr >= 0" whose equality case is
//               attained on a leg boundary; certified as expr > -1e-9.
//   InteriorStrict - the strict version of a Closure check on an
//               interior-shrunk domain; its margin is shrink-sized by
//               construction, so the representative margin is reported by a
//               companion *_sample Strict check instead.
//   Equality  - a construction identity, checked as |residual| <= tol at
//               the (mid)point; identities hold for every parameter.

#include <map>
#include <string>
#include <vector>

#include "bhs/geometry.hpp"
#include "bhs/henon.hpp"
#include "bhs/interval.hpp"

namespace bhs {

enum class Condition { BH1, BH2, BH3, BH4, BH5, BH6 };

const char* to_string(Condition c);

enum class CheckKind { Strict, Closure, InteriorStrict, Equality, Diagnostic };

const char* to_string(CheckKind k);

struct SubCheck {
    std::string name;
    CheckKind kind = CheckKind::Strict;
    Verdict verdict;
};

struct ConditionReport {
    Condition condition = Condition::BH1;
    std::vector<SubCheck> sub_checks;
    Verdict overall;
    std::map<std::string, double> margins;  // strict sub-checks only
};

// Sampled estimate of the uniform expansion constant for the |.|_* norm
// max{|u|, sqrt(v^2+w^2)} on the u-cone, and the iterate count ell with
// c0^ell exceeding the norm-equivalence constant. Diagnostic only: the
// PASS/FAIL of BH2 rests on the certified inequalities, not on c0.
struct ExpansionEstimate {
    double c0 = 0.0;
    int ell = 0;
    double norm_equivalence = 0.0;  // Euclidean vs |.|_*, sqrt(2) in 3D
    long samples = 0;
};

struct CertifyConfig {
    ConeConfig cone;
    ProverConfig prover;
    bool rigorous = true;  // interval-certified margins vs binary64 estimates
    // The sampled c0/ell estimate costs ~64^3 evaluations; sweeps turn it off.
    bool with_expansion_estimate = true;
};

// Conservative first-order sensitivity of all checked quantities to the
// perturbation kappa*y*z + eta*z^2, enclosed over the reference cube at
// runtime.
struct PerturbationModel {
    double value_per_kappa = 0.0;  // sup |y z|
    double value_per_eta = 0.0;    // sup z^2
    double jac_per_kappa = 0.0;    // sup (|y| + |z|)
    double jac_per_eta = 0.0;      // sup 2|z|
    std::string formula;

    static PerturbationModel from_cube(const Cube& cube);
    double total_per_unit() const {
        return value_per_kappa + value_per_eta + jac_per_kappa + jac_per_eta;
    }
    double margin_reduction(double kappa_mag, double eta_mag) const;
};

ConditionReport check_bh1(const Params& p, const CertifyConfig& cfg = {});
ConditionReport check_bh2(const Params& p, const ConeConfig& cone, const CertifyConfig& cfg = {});
ConditionReport check_bh3(const Params& p, const CertifyConfig& cfg = {});
ConditionReport check_bh4(const Params& p, const FixedPointData& fp, const CertifyConfig& cfg = {});
ConditionReport check_bh5(const Params& p, const FixedPointData& fp, const CertifyConfig& cfg = {});
ConditionReport check_bh6(const Params& p, const FixedPointData& fp, const Legs& l,
                          const CertifyConfig& cfg = {});

ExpansionEstimate estimate_expansion(const Params& p, const ConeConfig& cone);

struct FullReport {
    ParamsBox box;
    bool rigorous = true;
    ConeConfig cone;
    std::vector<ConditionReport> conditions;
    Verdict overall;
    ExpansionEstimate expansion;
    double perturbation_absorbed = 0.0;
    double wall_time_s = 0.0;

    const ConditionReport* find(Condition c) const;
    // Smallest strict margin across all conditions; name is "BHk.check".
    std::pair<std::string, double> min_margin() const;
};

FullReport certify_point(const Params& p, const CertifyConfig& cfg = {});
FullReport certify_box(const ParamsBox& box, const CertifyConfig& cfg = {});

struct EpsilonCertificate {
    double epsilon = 0.0;
    std::string binding_check;
    double min_margin = 0.0;
    PerturbationModel model;
    double corner_epsilon = 0.0;  // 0.9 * epsilon, used for the corner re-check
    bool corners_pass = false;
};

// Requires certify_box to PASS at kappa = eta = 0; throws NoPositiveEpsilon
// when the minimum margin does not dominate the numerical slack.
EpsilonCertificate certify_epsilon(const ParamsBox& box, const CertifyConfig& cfg = {});

} // namespace bhs
