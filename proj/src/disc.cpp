#include "bhs/disc.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>

namespace bhs {

namespace {

#if defined(__SIZEOF_FLOAT128__)
using quad = __float128;
#else
using quad = long double;
#endif

// Newton refinement from the double seed; two steps reach the 113-bit
// rounding floor for the magnitudes used here.
quad qsqrt(quad a) {
    if (a <= 0) return 0;
    quad x = std::sqrt(static_cast<double>(a));
    x = (x + a / x) / 2;
    x = (x + a / x) / 2;
    return x;
}

constexpr std::size_t kMaxNodes = 1 << 16;
constexpr double kOnTol = 1e-9;

double uniform_y(std::size_t i, std::size_t n) {
    return -4.0 + (8.0 * static_cast<double>(i)) / static_cast<double>(n - 1);
}

} // namespace

std::string UUDisc::validate(const std::vector<DiscNode>& nodes, double theta) {
    if (nodes.size() < 2) return "disc needs at least two nodes";
    if (nodes.front().y != -4.0 || nodes.back().y != 4.0)
        return "disc endpoints must sit exactly on y = -4 and y = 4";
    for (std::size_t i = 0; i + 1 < nodes.size(); ++i) {
        double dy = nodes[i + 1].y - nodes[i].y;
        if (!(dy > 0.0)) return "disc parameter y must be strictly increasing";
        double dx = nodes[i + 1].x - nodes[i].x;
        double dz = nodes[i + 1].z - nodes[i].z;
        if (!(std::sqrt(dx * dx + dz * dz) < theta * dy))
            return "segment " + std::to_string(i) + " leaves the uu-cone of aperture " +
                   std::to_string(theta);
    }
    for (const auto& n : nodes)
        if (!std::isfinite(n.x) || !std::isfinite(n.y) || !std::isfinite(n.z))
            return "disc nodes must be finite";
    return {};
}

UUDisc UUDisc::flat(double z0, double x0, std::size_t node_count, double theta) {
    UUDisc d;
    d.theta_ = theta;
    d.nodes_.reserve(node_count);
    for (std::size_t i = 0; i < node_count; ++i)
        d.nodes_.push_back({uniform_y(i, node_count), x0, z0});
    return d;
}

UUDisc UUDisc::from_nodes(std::vector<DiscNode> nodes, double theta) {
    std::string err = validate(nodes, theta);
    if (!err.empty()) throw InvalidDisc(err);
    UUDisc d;
    d.nodes_ = std::move(nodes);
    d.theta_ = theta;
    return d;
}

namespace {

std::size_t segment_index(const std::vector<DiscNode>& nodes, double y) {
    auto it = std::lower_bound(nodes.begin(), nodes.end(), y,
                               [](const DiscNode& n, double v) { return n.y < v; });
    std::size_t hi = static_cast<std::size_t>(it - nodes.begin());
    if (hi == 0) return 0;
    if (hi >= nodes.size()) return nodes.size() - 2;
    return hi - 1;
}

} // namespace

double UUDisc::z_at(double y) const {
    std::size_t i = segment_index(nodes_, y);
    const DiscNode& a = nodes_[i];
    const DiscNode& b = nodes_[i + 1];
    double t = (y - a.y) / (b.y - a.y);
    return a.z + t * (b.z - a.z);
}

double UUDisc::x_at(double y) const {
    std::size_t i = segment_index(nodes_, y);
    const DiscNode& a = nodes_[i];
    const DiscNode& b = nodes_[i + 1];
    double t = (y - a.y) / (b.y - a.y);
    return a.x + t * (b.x - a.x);
}

double UUDisc::segment_slope_at(double y) const {
    std::size_t i = segment_index(nodes_, y);
    const DiscNode& a = nodes_[i];
    const DiscNode& b = nodes_[i + 1];
    double dx = b.x - a.x, dz = b.z - a.z, dy = b.y - a.y;
    return std::sqrt(dx * dx + dz * dz) / dy;
}

Betweenness classify(const UUDisc& d, const FixedPointData& fp) {
    Betweenness r;
    r.z_at_p = d.z_at(fp.p_mu);
    r.z_at_q = d.z_at(fp.q_mu);
    auto side = [](double z, double ref) {
        if (std::fabs(z - ref) <= kOnTol) return Side::On;
        return z < ref ? Side::Left : Side::Right;
    };
    r.side_p = side(r.z_at_p, fp.p_tilde);
    r.side_q = side(r.z_at_q, fp.q_tilde);
    r.in_between = (r.side_p == Side::Left) && (r.side_q == Side::Right);
    return r;
}

UUDisc iterate_leg(const Params& p, const UUDisc& d, Leg leg) {
    if (!p.unperturbed())
        throw PlanarRequiresUnperturbed("iterate_leg requires kappa = eta = 0");
    if (!(p.mu < -4.0)) throw LegsUndefined();

    std::size_t n_out = d.nodes().size();
    std::string err;
    while (n_out <= kMaxNodes) {
        std::vector<DiscNode> out;
        out.reserve(n_out);
        for (std::size_t i = 0; i < n_out; ++i) {
            double yp = uniform_y(i, n_out);
            // invert yp = mu + y^2 on the chosen monotone branch
            double root = std::sqrt(yp - p.mu);
            double y_pre = (leg == Leg::A) ? -root : root;
            double z_pre = d.z_at(y_pre);
            out.push_back({yp, y_pre, p.xi * z_pre + y_pre});
        }
        err = UUDisc::validate(out, d.theta());
        if (err.empty()) return UUDisc::from_nodes(std::move(out), d.theta());
        n_out *= 2;  // refine and retry
    }
    throw ConeViolationAfterIteration("resampled image is not a uu-disc at " +
                                      std::to_string(kMaxNodes) + " nodes: " + err);
}

std::pair<Point3, WitnessDiagnostics> witness_stable_point(const Params& p, const UUDisc& d,
                                                           const FixedPointData& fp,
                                                           int max_iter) {
    Betweenness cls = classify(d, fp);
    if (!cls.in_between)
        throw NotInBetween("witness_stable_point requires a disc in the superposition region");

    WitnessDiagnostics diag;
    diag.tolerance_model =
        "surviving-interval pullback and forward orbit computed in 113-bit precision; "
        "a binary64 witness offset eps grows like prod |2 y_k| (between 2 sqrt 5 and "
        "2 sqrt 14 per step), so double precision alone cannot keep a 30-step orbit in "
        "the cube";

    UUDisc cur = d;
    std::vector<Leg> itinerary;
    itinerary.reserve(static_cast<std::size_t>(max_iter));

    for (int k = 0; k < max_iter; ++k) {
        UUDisc img_a = iterate_leg(p, cur, Leg::A);
        Betweenness cls_a = classify(img_a, fp);
        if (cls_a.in_between) {
            itinerary.push_back(Leg::A);
            cur = std::move(img_a);
        } else {
            UUDisc img_b = iterate_leg(p, cur, Leg::B);
            Betweenness cls_b = classify(img_b, fp);
            if (!cls_b.in_between)
                throw NoLegInBetween("no leg image stays in the superposition region at step " +
                                     std::to_string(k));
            itinerary.push_back(Leg::B);
            cur = std::move(img_b);
        }
        diag.itinerary.push_back(itinerary.back() == Leg::A ? 'A' : 'B');
    }

    // Backward fold of the surviving parameter interval through the chosen
    // monotone branches, in extended precision. After m steps the interval
    // on the original disc is the preimage of [-4, 4] under the m-fold
    // composition restricted to the chosen legs.
    const quad mu_q = p.mu;
    auto fold = [&](int steps) -> std::pair<quad, quad> {
        quad lo = -4, hi = 4;
        for (int k = steps - 1; k >= 0; --k) {
            quad r_lo = qsqrt(lo - mu_q);
            quad r_hi = qsqrt(hi - mu_q);
            if (itinerary[static_cast<std::size_t>(k)] == Leg::A) {
                quad nlo = -r_hi, nhi = -r_lo;
                lo = nlo;
                hi = nhi;
            } else {
                lo = r_lo;
                hi = r_hi;
            }
        }
        return {lo, hi};
    };

    diag.diameters.reserve(static_cast<std::size_t>(max_iter));
    for (int m = 1; m <= max_iter; ++m) {
        auto [lo, hi] = fold(m);
        diag.diameters.push_back(static_cast<double>(hi - lo));
    }
    auto [lo_f, hi_f] = fold(max_iter);
    diag.final_interval_width = static_cast<double>(hi_f - lo_f);

    quad y_star = (lo_f + hi_f) / 2;
    Point3 witness{d.x_at(static_cast<double>(y_star)), static_cast<double>(y_star),
                   d.z_at(static_cast<double>(y_star))};

    // Forward orbit in extended precision from the extended-precision
    // parameter; stored rounded to binary64.
    Cube delta = Cube::reference();
    quad wx = witness.x, wy = y_star, wz = witness.z;
    diag.orbit.reserve(static_cast<std::size_t>(max_iter) + 1);
    for (int k = 0; k <= max_iter; ++k) {
        Point3 pt{static_cast<double>(wx), static_cast<double>(wy), static_cast<double>(wz)};
        diag.orbit.push_back(pt);
        diag.orbit_margins.push_back(delta.inner_margin(pt));
        quad nx = wy;
        quad ny = mu_q + wy * wy;
        quad nz = quad(p.xi) * wz + wy;
        wx = nx;
        wy = ny;
        wz = nz;
    }
    return {witness, diag};
}

UStrip UStrip::flat(double z_lo, double z_hi, std::size_t member_count, std::size_t node_count,
                    double theta) {
    if (member_count < 2 || !(z_lo <= z_hi))
        throw InvalidDisc("strip needs at least two members and z_lo <= z_hi");
    UStrip s;
    s.members_.reserve(member_count);
    for (std::size_t i = 0; i < member_count; ++i) {
        double z0 = z_lo + (z_hi - z_lo) * static_cast<double>(i) /
                              static_cast<double>(member_count - 1);
        s.members_.push_back(UUDisc::flat(z0, 0.0, node_count, theta));
        s.z0_.push_back(z0);
    }
    return s;
}

UStrip UStrip::from_members(std::vector<UUDisc> members, std::vector<double> z0) {
    if (members.size() < 2 || members.size() != z0.size())
        throw InvalidDisc("strip needs at least two members with matching z0 indices");
    std::size_t n = members.front().nodes().size();
    for (const auto& m : members)
        if (m.nodes().size() != n)
            throw InvalidDisc("strip members must share one y-grid");
    UStrip s;
    s.members_ = std::move(members);
    s.z0_ = std::move(z0);
    return s;
}

double UStrip::width() const {
    std::size_t n = members_.front().nodes().size();
    double w = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < n; ++i) {
        double len = 0.0;
        for (std::size_t k = 0; k + 1 < members_.size(); ++k) {
            const DiscNode& a = members_[k].nodes()[i];
            const DiscNode& b = members_[k + 1].nodes()[i];
            double dx = b.x - a.x, dz = b.z - a.z;
            len += std::sqrt(dx * dx + dz * dz);
        }
        w = std::min(w, len);
    }
    return w;
}

namespace {

// Nodewise linear blend of neighbouring members; both live on one y-grid.
UUDisc blend_members(const UUDisc& a, const UUDisc& b, double t) {
    std::vector<DiscNode> nodes = a.nodes();
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        nodes[i].x += t * (b.nodes()[i].x - nodes[i].x);
        nodes[i].z += t * (b.nodes()[i].z - nodes[i].z);
    }
    return UUDisc::from_nodes(std::move(nodes), a.theta());
}

// Interpolation onto a finer uniform grid; segments of the refined polyline
// inherit the parent slopes, so the cone bound is preserved.
UUDisc resample(const UUDisc& d, std::size_t n) {
    std::vector<DiscNode> nodes;
    nodes.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        double y = uniform_y(i, n);
        nodes.push_back({y, d.x_at(y), d.z_at(y)});
    }
    return UUDisc::from_nodes(std::move(nodes), d.theta());
}

struct LegImage {
    std::vector<UUDisc> members;
    std::vector<double> zp;  // z at y = p_mu per member
    std::vector<double> zq;  // z at y = q_mu per member
};

LegImage iterate_all(const Params& p, const UStrip& s, const FixedPointData& fp, Leg leg) {
    LegImage img;
    img.members.reserve(s.members().size());
    std::size_t grid = 0;
    for (const auto& m : s.members()) {
        img.members.push_back(iterate_leg(p, m, leg));
        grid = std::max(grid, img.members.back().nodes().size());
    }
    // auto-refinement may leave members on different grids; realign
    for (auto& m : img.members)
        if (m.nodes().size() != grid) m = resample(m, grid);
    for (const auto& m : img.members) {
        img.zp.push_back(m.z_at(fp.p_mu));
        img.zq.push_back(m.z_at(fp.q_mu));
    }
    return img;
}

int find_p_crossing(const std::vector<double>& zp, double p_tilde) {
    for (std::size_t k = 0; k + 1 < zp.size(); ++k) {
        double a = zp[k] - p_tilde, b = zp[k + 1] - p_tilde;
        if (a == 0.0 || (a < 0.0) != (b < 0.0)) return static_cast<int>(k);
    }
    if (zp.back() == p_tilde) return static_cast<int>(zp.size()) - 2;
    return -1;
}

// Widest contiguous in-between run, with fractional boundaries resolved by
// blending; returns an empty strip when no member is in between.
std::vector<std::pair<UUDisc, double>> extract_in_between(const LegImage& img,
                                                          const std::vector<double>& z0,
                                                          const FixedPointData& fp) {
    auto inside = [&](std::size_t k) {
        return img.zp[k] < fp.p_tilde - kOnTol && img.zq[k] > fp.q_tilde + kOnTol;
    };
    std::size_t best_lo = 0, best_hi = 0;
    bool found = false;
    std::size_t k = 0;
    while (k < img.members.size()) {
        if (!inside(k)) {
            ++k;
            continue;
        }
        std::size_t run_lo = k;
        while (k < img.members.size() && inside(k)) ++k;
        std::size_t run_hi = k - 1;
        if (!found || run_hi - run_lo > best_hi - best_lo) {
            best_lo = run_lo;
            best_hi = run_hi;
            found = true;
        }
    }
    std::vector<std::pair<UUDisc, double>> out;
    if (!found) return out;

    auto boundary_fraction = [&](std::size_t in_idx, std::size_t out_idx) {
        // largest t in [0,1] toward out_idx keeping both constraints strict
        double t = 1.0;
        double dzp = img.zp[out_idx] - img.zp[in_idx];
        if (dzp > 0.0) t = std::min(t, (fp.p_tilde - kOnTol - img.zp[in_idx]) / dzp);
        double dzq = img.zq[out_idx] - img.zq[in_idx];
        if (dzq < 0.0) t = std::min(t, (fp.q_tilde + kOnTol - img.zq[in_idx]) / dzq);
        return std::max(0.0, t);
    };

    if (best_lo > 0) {
        double t = boundary_fraction(best_lo, best_lo - 1);
        if (t > 0.0)
            out.emplace_back(blend_members(img.members[best_lo], img.members[best_lo - 1], t),
                             z0[best_lo] + t * (z0[best_lo - 1] - z0[best_lo]));
    }
    for (std::size_t i = best_lo; i <= best_hi; ++i)
        out.emplace_back(img.members[i], z0[i]);
    if (best_hi + 1 < img.members.size()) {
        double t = boundary_fraction(best_hi, best_hi + 1);
        if (t > 0.0)
            out.emplace_back(blend_members(img.members[best_hi], img.members[best_hi + 1], t),
                             z0[best_hi] + t * (z0[best_hi + 1] - z0[best_hi]));
    }
    return out;
}

} // namespace

StripGrowth grow_strip(const Params& p, const UStrip& s, const FixedPointData& fp,
                       int max_iter) {
    StripGrowth g;

    // An input strip already straddling W^s_loc(P) registers the hit before
    // any iteration.
    {
        std::vector<double> zp;
        for (const auto& m : s.members()) zp.push_back(m.z_at(fp.p_mu));
        int cross = find_p_crossing(zp, fp.p_tilde);
        if (cross >= 0) {
            g.hit = true;
            g.hit_iteration = 0;
            g.crossing_member = cross;
            g.crossing_transverse =
                s.members()[static_cast<std::size_t>(cross)].segment_slope_at(fp.p_mu) <
                s.members()[static_cast<std::size_t>(cross)].theta();
            g.widths.push_back(s.width());
            return g;
        }
    }
    for (const auto& m : s.members())
        if (!classify(m, fp).in_between)
            throw NotInBetween("grow_strip requires a strip in the superposition region");

    UStrip cur = s;
    g.widths.push_back(cur.width());

    for (int iter = 1; iter <= max_iter; ++iter) {
        LegImage img_a = iterate_all(p, cur, fp, Leg::A);
        LegImage img_b = iterate_all(p, cur, fp, Leg::B);

        int cross_a = find_p_crossing(img_a.zp, fp.p_tilde);
        int cross_b = find_p_crossing(img_b.zp, fp.p_tilde);
        if (cross_a >= 0 || cross_b >= 0) {
            g.hit = true;
            g.hit_iteration = iter;
            g.hit_leg = cross_a >= 0 ? Leg::A : Leg::B;
            const LegImage& img = cross_a >= 0 ? img_a : img_b;
            g.crossing_member = cross_a >= 0 ? cross_a : cross_b;
            const UUDisc& disc = img.members[static_cast<std::size_t>(g.crossing_member)];
            g.crossing_transverse = disc.segment_slope_at(fp.p_mu) < disc.theta();
            return g;
        }

        auto sub_a = extract_in_between(img_a, cur.z0(), fp);
        auto sub_b = extract_in_between(img_b, cur.z0(), fp);
        if (sub_a.size() < 2 && sub_b.size() < 2)
            throw NoLegInBetween("no leg image contains an in-between sub-strip at iteration " +
                                 std::to_string(iter));

        auto to_strip = [](std::vector<std::pair<UUDisc, double>>& v) {
            std::vector<UUDisc> members;
            std::vector<double> z0;
            for (auto& [m, z] : v) {
                members.push_back(std::move(m));
                z0.push_back(z);
            }
            return UStrip::from_members(std::move(members), std::move(z0));
        };

        double width_a = -1.0, width_b = -1.0;
        std::optional<UStrip> strip_a, strip_b;
        if (sub_a.size() >= 2) {
            strip_a = to_strip(sub_a);
            width_a = strip_a->width();
        }
        if (sub_b.size() >= 2) {
            strip_b = to_strip(sub_b);
            width_b = strip_b->width();
        }
        if (width_a >= width_b) {
            cur = std::move(*strip_a);
            g.widths.push_back(width_a);
        } else {
            cur = std::move(*strip_b);
            g.widths.push_back(width_b);
        }
    }
    return g;
}

} // namespace bhs
