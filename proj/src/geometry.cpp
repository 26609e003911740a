#include "bhs/geometry.hpp"

#include <cmath>
#include <limits>

namespace bhs {

FixedPointData fixed_points(const Params& p) {
    if (!p.unperturbed())
        throw PlanarRequiresUnperturbed("fixed_points requires kappa = eta = 0");
    if (p.xi == 1.0) throw DegenerateXi();
    double disc = 1.0 - 4.0 * p.mu;
    if (disc < 0.0)
        throw ComplexFixedPoints("1 - 4*mu = " + std::to_string(disc));

    FixedPointData fp;
    fp.p_mu = fam::p_mu(p.mu);
    fp.q_mu = fam::q_mu(p.mu);
    fp.p_tilde = fam::r_tilde(fp.p_mu, p.xi);
    fp.q_tilde = fam::r_tilde(fp.q_mu, p.xi);
    fp.lambda_cu = p.xi;
    fp.lambda_uu_P = 2.0 * fp.p_mu;
    fp.lambda_uu_Q = 2.0 * fp.q_mu;

    // Eigenvectors of the Jacobian [[0,1,0],[0,2r,0],[0,1,xi]] for the
    // eigenvalues 0, xi, 2r. For lambda = 2r the rows force v2 = 2r v1 and
    // w = v2 / (2r - xi), giving (2r - xi, 2r(2r - xi), 2r).
    auto vuu = [&p](double r) { return Vec3{2.0 * r - p.xi, 2.0 * r * (2.0 * r - p.xi), 2.0 * r}; };
    fp.vs_P = fp.vs_Q = Vec3{1.0, 0.0, 0.0};
    fp.vcu_P = fp.vcu_Q = Vec3{0.0, 0.0, 1.0};
    fp.vuu_P = vuu(fp.p_mu);
    fp.vuu_Q = vuu(fp.q_mu);
    return fp;
}

Legs legs(const Params& p) {
    if (!(p.mu < -4.0))
        throw LegsUndefined("legs require mu < -4, got mu = " + std::to_string(p.mu));
    Legs l;
    l.a = fam::leg_a(p.mu);
    l.b = fam::leg_b(p.mu);
    l.c = -l.b;
    l.d = -l.a;
    l.I = Interval(l.a, l.b);
    l.J = Interval(l.c, l.d);
    Cube base = Cube::reference();
    l.A_block = {base.x_range, l.I, base.z_range};
    l.B_block = {base.x_range, l.J, base.z_range};
    return l;
}

std::array<Parallelogram::Segment, 4> Parallelogram::segments() const {
    Point3 tl{0.0, y_lo, top(y_lo)};
    Point3 tr{0.0, y_hi, top(y_hi)};
    Point3 bl{0.0, y_lo, bottom(y_lo)};
    Point3 br{0.0, y_hi, bottom(y_hi)};
    return {Segment{tl, tr}, Segment{bl, tl}, Segment{bl, br}, Segment{br, tr}};
}

std::array<std::pair<double, double>, 4> Parallelogram::corners() const {
    return {std::pair{y_lo, top(y_lo)}, std::pair{y_hi, top(y_hi)},
            std::pair{y_lo, bottom(y_lo)}, std::pair{y_hi, bottom(y_hi)}};
}

bool Parallelogram::contains(double y, double z) const {
    if (y < y_lo || y > y_hi) return false;
    return z >= bottom(y) && z <= top(y);
}

bool MarkovPartition::in_A_slab(const Point3& p) const {
    return std::fabs(p.x) <= 4.0 && A_para.contains(p.y, p.z);
}

bool MarkovPartition::in_B_slab(const Point3& p) const {
    return std::fabs(p.x) <= 4.0 && B_para.contains(p.y, p.z);
}

MarkovPartition markov(const Params& p, const FixedPointData&) {
    if (!p.unperturbed())
        throw PlanarRequiresUnperturbed("markov requires kappa = eta = 0");
    require_valid(p);
    Legs l = legs(p);

    MarkovPartition mp;
    mp.R1 = {-1.0 / p.xi, 22.0 / p.xi};
    mp.R2 = {-1.0 / p.xi, -40.0 / p.xi};
    mp.A_para = {l.a, l.b, mp.R1, mp.R2};
    mp.B_para = {l.c, l.d, mp.R1, mp.R2};
    return mp;
}

void require_valid(const ConeConfig& cfg) {
    if (!(cfg.theta > 0.0))
        throw InvalidConeConfig("theta must be positive");
    double bound = 2.0 * std::sqrt(5.0);
    if (!(cfg.vartheta > 0.0 && cfg.vartheta < bound))
        throw InvalidConeConfig("vartheta must lie in (0, 2*sqrt(5)) for backward invariance");
}

ConeLocation cone_membership(const ConeConfig& cfg, ConeKind kind, const Vec3& v) {
    require_valid(cfg);
    if (v.x == 0.0 && v.y == 0.0 && v.z == 0.0) throw ZeroVector();

    double lhs = 0.0, rhs = 0.0;
    switch (kind) {
        case ConeKind::Stable:
            lhs = std::sqrt(v.y * v.y + v.z * v.z);
            rhs = cfg.vartheta * std::fabs(v.x);
            break;
        case ConeKind::StrongUnstable:
            lhs = std::sqrt(v.x * v.x + v.z * v.z);
            rhs = cfg.theta * std::fabs(v.y);
            break;
        case ConeKind::Unstable:
            lhs = std::fabs(v.x);
            rhs = cfg.theta * std::sqrt(v.y * v.y + v.z * v.z);
            break;
    }
    double scale = std::max({lhs, rhs, 1.0});
    double tol = 4.0 * std::numeric_limits<double>::epsilon() * scale;
    if (std::fabs(lhs - rhs) <= tol) return ConeLocation::Boundary;
    return lhs < rhs ? ConeLocation::Inside : ConeLocation::Outside;
}

double phi(const FixedPointData& fp, Saddle which, double z) {
    double r = (which == Saddle::P) ? fp.p_mu : fp.q_mu;
    return fp.lambda_cu * z + r;
}

std::pair<double, double> phi_domain(const FixedPointData& fp, Saddle which) {
    double r = (which == Saddle::P) ? fp.p_mu : fp.q_mu;
    return {(-40.0 - r) / fp.lambda_cu, (22.0 - r) / fp.lambda_cu};
}

} // namespace bhs
