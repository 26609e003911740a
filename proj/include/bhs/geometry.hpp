#pragma once

// Named geometric objects of the construction: the two reference saddles P
// and Q with their eigen-data, the legs A and B, cone fields, the Markov
// parallelograms, and the one-dimensional return maps phi^p, phi^q on the
// center-unstable lines.

#include <array>
#include <cmath>
#include <utility>

#include "bhs/henon.hpp"
#include "bhs/interval.hpp"

namespace bhs {

// Scalar-generic kernels. S is double or Interval; sqrt is found by ADL
// (std::sqrt for double, bhs::sqrt for Interval).
namespace fam {

using std::sqrt;

template <class S> S square(const S& v) { return v * v; }
inline Interval square(const Interval& v) { return pow2(v); }

// First coordinates of P and Q: the roots of r = mu + r^2.
template <class S> S p_mu(const S& mu) { return (S(1.0) - sqrt(S(1.0) - S(4.0) * mu)) / S(2.0); }
template <class S> S q_mu(const S& mu) { return (S(1.0) + sqrt(S(1.0) - S(4.0) * mu)) / S(2.0); }

// z-coordinates: r = (1 - xi) * r_tilde.
template <class S> S r_tilde(const S& r, const S& xi) { return r / (S(1.0) - xi); }

// Leg endpoints a <= b < 0 < c <= d (requires mu < -4).
template <class S> S leg_a(const S& mu) { return -sqrt(S(4.0) - mu); }
template <class S> S leg_b(const S& mu) { return -sqrt(S(-4.0) - mu); }

// Auxiliary line values.
template <class S> S markov_z1(const S& xi, const S& y) { return (S(22.0) - y) / xi; }
template <class S> S markov_z2(const S& xi, const S& y) { return (S(-40.0) - y) / xi; }
template <class S> S cone_line_P(const S& y, const S& p, const S& pt) {
    return (y - p) / S(2.0) + pt;  // z^1 through (p, p~), slope 1/2
}
template <class S> S cone_line_Q(const S& y, const S& q, const S& qt) {
    return (y - q) / S(2.0) + qt;  // z^2 through (q, q~), slope 1/2
}

} // namespace fam

struct FixedPointData {
    double p_mu = 0.0, q_mu = 0.0;      // first/second coordinates of P, Q
    double p_tilde = 0.0, q_tilde = 0.0;  // z-coordinates
    double lambda_cu = 0.0;             // = xi; lambda_s is identically 0
    double lambda_uu_P = 0.0, lambda_uu_Q = 0.0;  // = 2 p_mu, 2 q_mu
    Vec3 vs_P, vcu_P, vuu_P;
    Vec3 vs_Q, vcu_Q, vuu_Q;

    Point3 P() const { return {p_mu, p_mu, p_tilde}; }
    Point3 Q() const { return {q_mu, q_mu, q_tilde}; }
};

// Closed-form fixed points and eigen-data. Requires kappa = eta = 0,
// 1 - 4 mu >= 0 and xi != 1.
FixedPointData fixed_points(const Params& p);

struct Legs {
    double a = 0.0, b = 0.0, c = 0.0, d = 0.0;
    Interval I;  // [a, b] subset of (-4, 0)
    Interval J;  // [c, d] subset of (0, 4)
    Cube A_block, B_block;  // [-4,4] x I x [-40,22] and [-4,4] x J x [-40,22]
};

// Requires mu < -4, else LegsUndefined.
Legs legs(const Params& p);

struct AffineLine {
    double slope = 0.0;
    double intercept = 0.0;
    double operator()(double y) const { return slope * y + intercept; }
};

// Region between two lines over a y-interval; boundary segments are
// seg(0) top (on R1), seg(1) left vertical, seg(2) bottom (on R2),
// seg(3) right vertical.
struct Parallelogram {
    double y_lo = 0.0, y_hi = 0.0;
    AffineLine top, bottom;

    struct Segment {
        Point3 from, to;  // YZ-plane points stored with x = 0
    };
    std::array<Segment, 4> segments() const;
    std::array<std::pair<double, double>, 4> corners() const;  // (y, z)
    bool contains(double y, double z) const;
};

struct MarkovPartition {
    AffineLine R1, R2;  // z1(y) = (22 - y)/xi, z2(y) = (-40 - y)/xi
    Parallelogram A_para, B_para;
    // The Markov sets are [-4,4] x A_para and [-4,4] x B_para.
    bool in_A_slab(const Point3& p) const;
    bool in_B_slab(const Point3& p) const;
};

MarkovPartition markov(const Params& p, const FixedPointData& fp);

struct ConeConfig {
    double theta = 0.5;     // uu- and u-cone aperture
    double vartheta = 0.1;  // s-cone aperture; must satisfy 0 < vartheta < 2*sqrt(5)
};

void require_valid(const ConeConfig& cfg);

enum class ConeKind { Stable, Unstable, StrongUnstable };
enum class ConeLocation { Inside, Boundary, Outside };

// Membership in the open cones
//   s:  sqrt(v^2 + w^2) < vartheta |u|
//   uu: sqrt(u^2 + w^2) < theta |v|
//   u:  |u| < theta sqrt(v^2 + w^2)
// Boundary is reported when the defining equality holds within 4 ulp of the
// comparison scale. Throws ZeroVector on v = 0.
ConeLocation cone_membership(const ConeConfig& cfg, ConeKind kind, const Vec3& v);

enum class Saddle { P, Q };

// One-dimensional return map on the center-unstable line of the saddle:
// phi^r(z) = xi z + r_mu.
double phi(const FixedPointData& fp, Saddle which, double z);

// The interval [alpha, beta] with phi([alpha, beta]) = [-40, 22].
std::pair<double, double> phi_domain(const FixedPointData& fp, Saddle which);

} // namespace bhs
