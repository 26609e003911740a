#pragma once

// uu-discs and u-strips as discretized curves/surfaces, their iteration
// under the family, betweenness classification relative to the local stable
// manifolds of P and Q, the nested-disc witness of the superposition
// property, and strip-width growth up to a transverse crossing of
// W^s_loc(P).

#include <string>
#include <utility>
#include <vector>

#include "bhs/geometry.hpp"
#include "bhs/henon.hpp"

namespace bhs {

struct DiscNode {
    double y = 0.0;
    double x = 0.0;
    double z = 0.0;
};

// A curve y -> (x(y), z(y)) crossing the reference cube in the
// strong-unstable direction: y strictly increasing from -4 to 4 (endpoints
// exact), every segment satisfying sqrt(dx^2 + dz^2) < theta * dy.
class UUDisc {
public:
    static UUDisc flat(double z0, double x0 = 0.0, std::size_t node_count = 1024,
                       double theta = 0.5);
    // Validates the invariant; throws InvalidDisc.
    static UUDisc from_nodes(std::vector<DiscNode> nodes, double theta = 0.5);

    const std::vector<DiscNode>& nodes() const { return nodes_; }
    double theta() const { return theta_; }

    double z_at(double y) const;
    double x_at(double y) const;
    // Slope bound sqrt(dx^2+dz^2)/dy of the segment containing y.
    double segment_slope_at(double y) const;

    // nullptr-message when valid; otherwise a description of the violation.
    static std::string validate(const std::vector<DiscNode>& nodes, double theta);

private:
    UUDisc() = default;
    std::vector<DiscNode> nodes_;
    double theta_ = 0.5;
};

enum class Side { Left, On, Right };

struct Betweenness {
    double z_at_p = 0.0;
    double z_at_q = 0.0;
    Side side_p = Side::On;  // Left iff z_at_p < p~
    Side side_q = Side::On;  // Right iff z_at_q > q~
    bool in_between = false;  // Left of W^s_loc(P) and right of W^s_loc(Q)
};

Betweenness classify(const UUDisc& d, const FixedPointData& fp);

enum class Leg { A, B };

// Pushes the leg-restricted disc through the map and re-parameterizes by the
// new y-coordinate mu + y^2 on a uniform grid over [-4, 4] (closed-form
// branch inversion; kappa = eta = 0 only). The output node count doubles on
// a cone violation, up to 2^16 nodes.
UUDisc iterate_leg(const Params& p, const UUDisc& d, Leg leg);

struct WitnessDiagnostics {
    std::string itinerary;               // chosen leg per step, 'A'/'B'
    std::vector<double> diameters;       // surviving y-interval per step
    std::vector<Point3> orbit;           // forward orbit of the witness
    std::vector<double> orbit_margins;   // inner margin to the cube boundary
    double final_interval_width = 0.0;
    std::string tolerance_model;
};

// Nested-disc algorithm: iterate both legs, keep a leg whose image stays in
// the superposition region (tie-break: leg A), pull the surviving parameter
// interval back through the monotone branches, and return the disc point at
// its midpoint. The pullback and the forward orbit are computed in extended
// (113-bit) precision; in binary64 the per-step expansion |2y| > 4 would
// swamp the witness after roughly 20 steps.
std::pair<Point3, WitnessDiagnostics> witness_stable_point(const Params& p, const UUDisc& d,
                                                           const FixedPointData& fp,
                                                           int max_iter);

// A one-parameter family of uu-discs indexed by z0 in [z_lo, z_hi], all
// sampled on the same y-grid.
class UStrip {
public:
    static UStrip flat(double z_lo, double z_hi, std::size_t member_count = 33,
                       std::size_t node_count = 1024, double theta = 0.5);
    static UStrip from_members(std::vector<UUDisc> members, std::vector<double> z0);

    const std::vector<UUDisc>& members() const { return members_; }
    const std::vector<double>& z0() const { return z0_; }

    // Infimum over the sampled y-grid of the transversal polyline length.
    double width() const;

private:
    UStrip() = default;
    std::vector<UUDisc> members_;
    std::vector<double> z0_;
};

struct StripGrowth {
    bool hit = false;
    int hit_iteration = -1;
    int crossing_member = -1;   // index whose image straddles z = p~ at y = p_mu
    Leg hit_leg = Leg::A;
    bool crossing_transverse = false;
    std::vector<double> widths;  // width before iteration 1, then per surviving step
};

// Iterates the strip leg-wise. Each step either detects a member crossing
// z = p~ at y = p_mu (a transverse intersection with W^s_loc(P)) or extracts
// the widest in-between sub-strip (boundary members interpolated) and
// records its width.
StripGrowth grow_strip(const Params& p, const UStrip& s, const FixedPointData& fp, int max_iter);

} // namespace bhs
