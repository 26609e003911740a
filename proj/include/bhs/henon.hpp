#pragma once

// The center-unstable Henon-like family
//
//   G_(xi,mu,kappa,eta)(x, y, z) = (y, mu + y^2 + kappa*y*z + eta*z^2, xi*z + y)
//
// with xi > 1, together with its derivative, the planar projection
// g(y, z) = (mu + y^2, xi*z + y) for the unperturbed case, and interval
// lifts of all of them.

#include <array>

#include "bhs/interval.hpp"

namespace bhs {

struct Params {
    double xi = 0.0;
    double mu = 0.0;
    double kappa = 0.0;
    double eta = 0.0;

    bool unperturbed() const { return kappa == 0.0 && eta == 0.0; }

    // Whether (xi, mu) lies in the open reference box (1.18,1.19) x (-10,-9).
    bool in_reference_box() const {
        return 1.18 < xi && xi < 1.19 && -10.0 < mu && mu < -9.0;
    }
};

// Throws InvalidXi unless xi > 1.
void require_valid(const Params& p);

struct Vec3 {
    double x = 0.0, y = 0.0, z = 0.0;

    Vec3 operator+(const Vec3& o) const { return {x + o.x, y + o.y, z + o.z}; }
    Vec3 operator-(const Vec3& o) const { return {x - o.x, y - o.y, z - o.z}; }
    Vec3 operator*(double s) const { return {x * s, y * s, z * s}; }
    double norm() const;
};

using Point3 = Vec3;

struct Mat3 {
    // row-major
    std::array<std::array<double, 3>, 3> m{};

    Vec3 operator*(const Vec3& v) const {
        return {m[0][0] * v.x + m[0][1] * v.y + m[0][2] * v.z,
                m[1][0] * v.x + m[1][1] * v.y + m[1][2] * v.z,
                m[2][0] * v.x + m[2][1] * v.y + m[2][2] * v.z};
    }
    double det_shifted(double lambda) const;  // det(M - lambda*I)
};

// The reference cube and its boundary decomposition. The boundary splits as
// dS (faces x = +-x_max), dUU (faces y = +-y_max) and dU (dUU plus the faces
// z = z_min, z = z_max); dS and dU cover the whole boundary and dUU is
// contained in dU.
struct Cube {
    Interval x_range{-4.0, 4.0};
    Interval y_range{-4.0, 4.0};
    Interval z_range{-40.0, 22.0};

    static Cube reference() { return Cube{}; }

    bool contains(const Point3& p, double tol = 0.0) const;
    // Signed distance-like margin: min over faces of the inward slack;
    // nonnegative iff the point is inside.
    double inner_margin(const Point3& p) const;

    bool on_boundary(const Point3& p, double tol = 1e-12) const;
    bool on_s_boundary(const Point3& p, double tol = 1e-12) const;
    bool on_u_boundary(const Point3& p, double tol = 1e-12) const;
    bool on_uu_boundary(const Point3& p, double tol = 1e-12) const;
};

Point3 eval(const Params& p, const Point3& pt);
Mat3 jacobian(const Params& p, const Point3& pt);

// Planar reduction g(y, z); defined only for kappa = eta = 0.
std::pair<double, double> eval_planar(const Params& p, double y, double z);

struct ParamsBox {
    Interval xi;
    Interval mu;
    Interval kappa{0.0};
    Interval eta{0.0};

    static ParamsBox degenerate(const Params& p) {
        return {Interval(p.xi), Interval(p.mu), Interval(p.kappa), Interval(p.eta)};
    }
    Params midpoint() const { return {xi.mid(), mu.mid(), kappa.mid(), eta.mid()}; }
    bool is_point() const {
        return xi.is_point() && mu.is_point() && kappa.is_point() && eta.is_point();
    }
};

// Interval lift of eval; `pt` must be 3-dimensional (x, y, z order).
IBox eval_box(const ParamsBox& p, const IBox& pt);

} // namespace bhs
