#include "bhs/henon.hpp"

#include <cmath>

namespace bhs {

void require_valid(const Params& p) {
    if (p.xi == 1.0) throw DegenerateXi();
    if (!(p.xi > 1.0))
        throw InvalidXi("xi must exceed 1, got " + std::to_string(p.xi));
}

double Vec3::norm() const { return std::sqrt(x * x + y * y + z * z); }

double Mat3::det_shifted(double lambda) const {
    double a = m[0][0] - lambda, b = m[0][1], c = m[0][2];
    double d = m[1][0], e = m[1][1] - lambda, f = m[1][2];
    double g = m[2][0], h = m[2][1], i = m[2][2] - lambda;
    return a * (e * i - f * h) - b * (d * i - f * g) + c * (d * h - e * g);
}

bool Cube::contains(const Point3& p, double tol) const {
    return p.x >= x_range.lo() - tol && p.x <= x_range.hi() + tol &&
           p.y >= y_range.lo() - tol && p.y <= y_range.hi() + tol &&
           p.z >= z_range.lo() - tol && p.z <= z_range.hi() + tol;
}

double Cube::inner_margin(const Point3& p) const {
    double m = p.x - x_range.lo();
    m = std::min(m, x_range.hi() - p.x);
    m = std::min(m, p.y - y_range.lo());
    m = std::min(m, y_range.hi() - p.y);
    m = std::min(m, p.z - z_range.lo());
    m = std::min(m, z_range.hi() - p.z);
    return m;
}

bool Cube::on_boundary(const Point3& p, double tol) const {
    return contains(p, tol) && inner_margin(p) <= tol;
}

bool Cube::on_s_boundary(const Point3& p, double tol) const {
    return contains(p, tol) && (std::fabs(p.x - x_range.lo()) <= tol ||
                                std::fabs(p.x - x_range.hi()) <= tol);
}

bool Cube::on_uu_boundary(const Point3& p, double tol) const {
    return contains(p, tol) && (std::fabs(p.y - y_range.lo()) <= tol ||
                                std::fabs(p.y - y_range.hi()) <= tol);
}

bool Cube::on_u_boundary(const Point3& p, double tol) const {
    if (on_uu_boundary(p, tol)) return true;
    return contains(p, tol) && (std::fabs(p.z - z_range.lo()) <= tol ||
                                std::fabs(p.z - z_range.hi()) <= tol);
}

Point3 eval(const Params& p, const Point3& pt) {
    return {pt.y,
            p.mu + pt.y * pt.y + p.kappa * pt.y * pt.z + p.eta * pt.z * pt.z,
            p.xi * pt.z + pt.y};
}

Mat3 jacobian(const Params& p, const Point3& pt) {
    Mat3 j;
    j.m[0] = {0.0, 1.0, 0.0};
    j.m[1] = {0.0, 2.0 * pt.y + p.kappa * pt.z, p.kappa * pt.y + 2.0 * p.eta * pt.z};
    j.m[2] = {0.0, 1.0, p.xi};
    return j;
}

std::pair<double, double> eval_planar(const Params& p, double y, double z) {
    if (!p.unperturbed())
        throw PlanarRequiresUnperturbed("eval_planar requires kappa = eta = 0");
    return {p.mu + y * y, p.xi * z + y};
}

IBox eval_box(const ParamsBox& p, const IBox& pt) {
    if (pt.size() != 3)
        throw InvalidInterval("eval_box expects a 3-dimensional phase box");
    const Interval& y = pt[1];
    const Interval& z = pt[2];
    Interval second = p.mu + pow2(y) + p.kappa * y * z + p.eta * pow2(z);
    Interval third = p.xi * z + y;
    return IBox({y, second, third});
}

} // namespace bhs
