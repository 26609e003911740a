#pragma once

// Validated interval arithmetic over binary64, interval boxes, and a
// branch-and-bound prover for strict positivity over a box.
//
// Every arithmetic result is outward-rounded: the exact real result set is
// contained in the returned interval. Rounding is done in the default
// round-to-nearest mode; endpoints are nudged one representable value
// outward unless an error-free transformation (TwoSum / FMA residual)
// proves the computed endpoint exact. This keeps exact endpoint arithmetic
// exact ([1,2]+[3,4] == [4,6]) and costs at most 1 ulp per endpoint
// otherwise.

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "bhs/errors.hpp"

namespace bhs {

class Interval {
public:
    // Default is the degenerate zero interval, not empty.
    Interval() = default;
    explicit Interval(double v) : lo_(v), hi_(v) { check(); }
    Interval(double lo, double hi) : lo_(lo), hi_(hi) { check(); }

    static Interval make_empty() {
        Interval r;
        r.empty_ = true;
        return r;
    }

    bool empty() const { return empty_; }
    double lo() const { return lo_; }
    double hi() const { return hi_; }

    double mid() const;
    double width() const;

    bool is_point() const { return !empty_ && lo_ == hi_; }
    bool contains(double x) const { return !empty_ && lo_ <= x && x <= hi_; }
    bool contains(const Interval& other) const {
        if (other.empty_) return true;
        return !empty_ && lo_ <= other.lo_ && other.hi_ <= hi_;
    }
    bool contains_zero() const { return contains(0.0); }

    friend bool operator==(const Interval& a, const Interval& b) {
        if (a.empty_ || b.empty_) return a.empty_ == b.empty_;
        return a.lo_ == b.lo_ && a.hi_ == b.hi_;
    }

private:
    void check() const;

    double lo_ = 0.0;
    double hi_ = 0.0;
    bool empty_ = false;
};

Interval operator+(const Interval& a, const Interval& b);
Interval operator-(const Interval& a, const Interval& b);
Interval operator*(const Interval& a, const Interval& b);
Interval operator/(const Interval& a, const Interval& b);
Interval operator-(const Interval& a);

Interval sqrt(const Interval& a);  // requires a.lo() >= 0, else SqrtOfNegativeInterval
Interval abs(const Interval& a);
Interval min(const Interval& a, const Interval& b);
Interval max(const Interval& a, const Interval& b);
Interval pow2(const Interval& a);  // a*a without the dependency pessimism
Interval hull(const Interval& a, const Interval& b);
Interval intersect(const Interval& a, const Interval& b);  // may be empty

std::string to_string(const Interval& a);

// Axis-aligned box: an ordered list of nonempty intervals.
class IBox {
public:
    IBox() = default;
    explicit IBox(std::vector<Interval> dims);

    std::size_t size() const { return dims_.size(); }
    const Interval& operator[](std::size_t i) const { return dims_[i]; }
    const std::vector<Interval>& dims() const { return dims_; }

    std::vector<double> midpoint() const;
    IBox midpoint_box() const;

    // Splits along `axis` at the midpoint. The two halves share the split
    // endpoint, so their union is exactly the parent.
    std::pair<IBox, IBox> bisect(std::size_t axis) const;

    // Axis with the largest width relative to `ref_widths` (the widths of
    // the original domain). Degenerate reference axes are never selected.
    // Returns size() when no axis is splittable.
    std::size_t widest_relative_axis(const std::vector<double>& ref_widths) const;

    bool contains(const std::vector<double>& pt) const;

private:
    std::vector<Interval> dims_;
};

enum class Status { PASS, FAIL, UNKNOWN };

const char* to_string(Status s);

struct Verdict {
    Status status = Status::UNKNOWN;
    // For PASS: certified lower bound of the expression over the domain (> 0).
    // For FAIL: the negative point value at the witness.
    // For UNKNOWN: the worst interval lower bound encountered.
    double margin = 0.0;
    long boxes_examined = 0;
    int max_depth_reached = 0;
    std::optional<std::vector<double>> witness;  // present iff status == FAIL
};

// Merge order: FAIL dominates UNKNOWN dominates PASS.
Verdict merge(const Verdict& a, const Verdict& b);

struct ProverConfig {
    int max_depth = 24;
    double min_rel_width = 1e-9;  // relative to the original domain widths
    // Total box budget. Every certified inequality here resolves within a
    // few boxes; the budget only caps unresolvable cases (an expression
    // identically zero along an axis would otherwise burn 2^max_depth).
    long max_boxes = 65'536;
};

using BoxEvaluator = std::function<Interval(const IBox&)>;

// Proves f > 0 over `domain`.
//
// PASS  only if every leaf sub-box evaluates to an interval with lo > 0.
// FAIL  only if a point evaluation (zero-width box at a sub-box midpoint)
//       yields hi < 0; the witness point is recorded. Interval
//       overestimation alone never produces FAIL.
// UNKNOWN otherwise (depth/width/box budget exhausted, or evaluator errors
//       on an unsplittable box). Resource exhaustion is a verdict, not an
//       error.
Verdict prove_positive(const BoxEvaluator& f, const IBox& domain,
                       const ProverConfig& cfg = {});

} // namespace bhs
