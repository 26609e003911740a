#include "bhs/interval.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <deque>
#include <limits>

namespace bhs {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double next_down(double x) {
    if (std::isnan(x)) throw InvalidInterval("NaN endpoint");
    return std::nextafter(x, -kInf);
}

double next_up(double x) {
    if (std::isnan(x)) throw InvalidInterval("NaN endpoint");
    return std::nextafter(x, kInf);
}

// TwoSum residual: zero iff a+b is exactly representable. Requires
// round-to-nearest, which is never changed by this library.
bool add_exact(double a, double b, double s) {
    if (!std::isfinite(s)) return false;
    double bp = s - a;
    double err = (a - (s - bp)) + (b - bp);
    return err == 0.0;
}

bool mul_exact(double a, double b, double p) {
    if (!std::isfinite(p)) return false;
    return std::fma(a, b, -p) == 0.0;
}

bool div_exact(double a, double b, double q) {
    if (!std::isfinite(q)) return false;
    return std::fma(q, b, -a) == 0.0;
}

double add_down(double a, double b) {
    double s = a + b;
    return add_exact(a, b, s) ? s : next_down(s);
}
double add_up(double a, double b) {
    double s = a + b;
    return add_exact(a, b, s) ? s : next_up(s);
}
double mul_down(double a, double b) {
    double p = a * b;
    return mul_exact(a, b, p) ? p : next_down(p);
}
double mul_up(double a, double b) {
    double p = a * b;
    return mul_exact(a, b, p) ? p : next_up(p);
}
double div_down(double a, double b) {
    double q = a / b;
    return div_exact(a, b, q) ? q : next_down(q);
}
double div_up(double a, double b) {
    double q = a / b;
    return div_exact(a, b, q) ? q : next_up(q);
}

void require_nonempty(const Interval& a) {
    if (a.empty()) throw EmptyIntervalOperand();
}

} // namespace

void Interval::check() const {
    if (std::isnan(lo_) || std::isnan(hi_))
        throw InvalidInterval("NaN interval endpoint");
    if (lo_ > hi_)
        throw InvalidInterval("interval with lo > hi; use make_empty() for the empty set");
}

double Interval::mid() const {
    if (empty_) throw EmptyIntervalOperand("mid of empty interval");
    if (lo_ == -kInf && hi_ == kInf) return 0.0;
    if (lo_ == -kInf) return hi_;
    if (hi_ == kInf) return lo_;
    double m = 0.5 * (lo_ + hi_);
    if (!std::isfinite(m)) m = 0.5 * lo_ + 0.5 * hi_;
    return std::min(std::max(m, lo_), hi_);
}

double Interval::width() const {
    if (empty_) return 0.0;
    return hi_ - lo_;
}

Interval operator+(const Interval& a, const Interval& b) {
    require_nonempty(a);
    require_nonempty(b);
    return Interval(add_down(a.lo(), b.lo()), add_up(a.hi(), b.hi()));
}

Interval operator-(const Interval& a, const Interval& b) {
    require_nonempty(a);
    require_nonempty(b);
    return Interval(add_down(a.lo(), -b.hi()), add_up(a.hi(), -b.lo()));
}

Interval operator-(const Interval& a) {
    require_nonempty(a);
    return Interval(-a.hi(), -a.lo());
}

Interval operator*(const Interval& a, const Interval& b) {
    require_nonempty(a);
    require_nonempty(b);
    const double cand_lo[4] = {mul_down(a.lo(), b.lo()), mul_down(a.lo(), b.hi()),
                               mul_down(a.hi(), b.lo()), mul_down(a.hi(), b.hi())};
    const double cand_hi[4] = {mul_up(a.lo(), b.lo()), mul_up(a.lo(), b.hi()),
                               mul_up(a.hi(), b.lo()), mul_up(a.hi(), b.hi())};
    double lo = cand_lo[0], hi = cand_hi[0];
    for (int i = 1; i < 4; ++i) {
        lo = std::min(lo, cand_lo[i]);
        hi = std::max(hi, cand_hi[i]);
    }
    return Interval(lo, hi);
}

Interval operator/(const Interval& a, const Interval& b) {
    require_nonempty(a);
    require_nonempty(b);
    if (b.contains_zero()) throw DivisionByZeroInterval();
    const double cand_lo[4] = {div_down(a.lo(), b.lo()), div_down(a.lo(), b.hi()),
                               div_down(a.hi(), b.lo()), div_down(a.hi(), b.hi())};
    const double cand_hi[4] = {div_up(a.lo(), b.lo()), div_up(a.lo(), b.hi()),
                               div_up(a.hi(), b.lo()), div_up(a.hi(), b.hi())};
    double lo = cand_lo[0], hi = cand_hi[0];
    for (int i = 1; i < 4; ++i) {
        lo = std::min(lo, cand_lo[i]);
        hi = std::max(hi, cand_hi[i]);
    }
    return Interval(lo, hi);
}

Interval sqrt(const Interval& a) {
    require_nonempty(a);
    if (a.lo() < 0.0)
        throw SqrtOfNegativeInterval("sqrt requires a nonnegative interval, got lo = " +
                                     std::to_string(a.lo()));
    double rlo = std::sqrt(a.lo());
    double rhi = std::sqrt(a.hi());
    // std::sqrt is correctly rounded; nudge unless the root is exact.
    if (std::fma(rlo, rlo, -a.lo()) != 0.0) rlo = next_down(rlo);
    if (!std::isfinite(rhi) || std::fma(rhi, rhi, -a.hi()) != 0.0) rhi = next_up(rhi);
    return Interval(std::max(rlo, 0.0), rhi);
}

Interval abs(const Interval& a) {
    require_nonempty(a);
    if (a.lo() >= 0.0) return a;
    if (a.hi() <= 0.0) return Interval(-a.hi(), -a.lo());
    return Interval(0.0, std::max(-a.lo(), a.hi()));
}

Interval min(const Interval& a, const Interval& b) {
    require_nonempty(a);
    require_nonempty(b);
    return Interval(std::min(a.lo(), b.lo()), std::min(a.hi(), b.hi()));
}

Interval max(const Interval& a, const Interval& b) {
    require_nonempty(a);
    require_nonempty(b);
    return Interval(std::max(a.lo(), b.lo()), std::max(a.hi(), b.hi()));
}

Interval pow2(const Interval& a) {
    require_nonempty(a);
    double alo = a.lo(), ahi = a.hi();
    if (alo >= 0.0) return Interval(mul_down(alo, alo), mul_up(ahi, ahi));
    if (ahi <= 0.0) return Interval(mul_down(ahi, ahi), mul_up(alo, alo));
    return Interval(0.0, std::max(mul_up(alo, alo), mul_up(ahi, ahi)));
}

Interval hull(const Interval& a, const Interval& b) {
    if (a.empty()) return b;
    if (b.empty()) return a;
    return Interval(std::min(a.lo(), b.lo()), std::max(a.hi(), b.hi()));
}

Interval intersect(const Interval& a, const Interval& b) {
    if (a.empty() || b.empty()) return Interval::make_empty();
    double lo = std::max(a.lo(), b.lo());
    double hi = std::min(a.hi(), b.hi());
    if (lo > hi) return Interval::make_empty();
    return Interval(lo, hi);
}

std::string to_string(const Interval& a) {
    if (a.empty()) return "[empty]";
    char buf[64];
    std::snprintf(buf, sizeof(buf), "[%.17g, %.17g]", a.lo(), a.hi());
    return buf;
}

IBox::IBox(std::vector<Interval> dims) : dims_(std::move(dims)) {
    for (const auto& d : dims_)
        if (d.empty()) throw InvalidInterval("IBox dimension must be nonempty");
}

std::vector<double> IBox::midpoint() const {
    std::vector<double> m;
    m.reserve(dims_.size());
    for (const auto& d : dims_) m.push_back(d.mid());
    return m;
}

IBox IBox::midpoint_box() const {
    std::vector<Interval> dims;
    dims.reserve(dims_.size());
    for (const auto& d : dims_) dims.emplace_back(d.mid());
    return IBox(std::move(dims));
}

std::pair<IBox, IBox> IBox::bisect(std::size_t axis) const {
    const Interval& d = dims_[axis];
    double m = d.mid();
    std::vector<Interval> left = dims_, right = dims_;
    left[axis] = Interval(d.lo(), m);
    right[axis] = Interval(m, d.hi());
    return {IBox(std::move(left)), IBox(std::move(right))};
}

std::size_t IBox::widest_relative_axis(const std::vector<double>& ref_widths) const {
    std::size_t best = dims_.size();
    double best_rel = 0.0;
    for (std::size_t i = 0; i < dims_.size(); ++i) {
        double ref = (i < ref_widths.size() && ref_widths[i] > 0.0) ? ref_widths[i] : 0.0;
        if (ref == 0.0) continue;
        double w = dims_[i].width();
        if (w <= 0.0) continue;
        double rel = w / ref;
        if (rel > best_rel) {
            best_rel = rel;
            best = i;
        }
    }
    return best;
}

bool IBox::contains(const std::vector<double>& pt) const {
    if (pt.size() != dims_.size()) return false;
    for (std::size_t i = 0; i < dims_.size(); ++i)
        if (!dims_[i].contains(pt[i])) return false;
    return true;
}

const char* to_string(Status s) {
    switch (s) {
        case Status::PASS: return "PASS";
        case Status::FAIL: return "FAIL";
        default: return "UNKNOWN";
    }
}

Verdict merge(const Verdict& a, const Verdict& b) {
    Verdict r;
    if (a.status == Status::FAIL || b.status == Status::FAIL)
        r.status = Status::FAIL;
    else if (a.status == Status::UNKNOWN || b.status == Status::UNKNOWN)
        r.status = Status::UNKNOWN;
    else
        r.status = Status::PASS;
    r.margin = std::min(a.margin, b.margin);
    r.boxes_examined = a.boxes_examined + b.boxes_examined;
    r.max_depth_reached = std::max(a.max_depth_reached, b.max_depth_reached);
    if (a.witness)
        r.witness = a.witness;
    else if (b.witness)
        r.witness = b.witness;
    return r;
}

Verdict prove_positive(const BoxEvaluator& f, const IBox& domain, const ProverConfig& cfg) {
    Verdict out;
    out.margin = kInf;

    std::vector<double> ref_widths;
    ref_widths.reserve(domain.size());
    for (std::size_t i = 0; i < domain.size(); ++i) ref_widths.push_back(domain[i].width());

    struct Item {
        IBox box;
        int depth;
    };
    std::vector<Item> stack;
    stack.push_back({domain, 0});

    bool any_unknown = false;
    double worst_lo = kInf;
    long boxes = 0;

    while (!stack.empty()) {
        Item it = std::move(stack.back());
        stack.pop_back();
        ++boxes;
        out.max_depth_reached = std::max(out.max_depth_reached, it.depth);

        // FAIL requires a point evaluation, so overestimation on fat boxes
        // can never produce a spurious negative verdict.
        bool probe_ok = false;
        Interval probe;
        try {
            probe = f(it.box.midpoint_box());
            probe_ok = true;
        } catch (const DomainError&) {
        }
        if (probe_ok && probe.hi() < 0.0) {
            out.status = Status::FAIL;
            out.margin = probe.hi();
            out.boxes_examined = boxes;
            out.witness = it.box.midpoint();
            return out;
        }

        bool eval_ok = false;
        Interval val;
        try {
            val = f(it.box);
            eval_ok = true;
        } catch (const DomainError&) {
        }

        if (eval_ok && val.lo() > 0.0) {
            out.margin = std::min(out.margin, val.lo());
            continue;
        }
        if (eval_ok) worst_lo = std::min(worst_lo, val.lo());

        std::size_t axis = it.box.widest_relative_axis(ref_widths);
        bool splittable = axis < it.box.size() &&
                          it.box[axis].width() > cfg.min_rel_width * ref_widths[axis] &&
                          it.depth < cfg.max_depth && boxes < cfg.max_boxes;
        if (!splittable) {
            any_unknown = true;
            continue;
        }
        auto [left, right] = it.box.bisect(axis);
        stack.push_back({std::move(right), it.depth + 1});
        stack.push_back({std::move(left), it.depth + 1});
    }

    out.boxes_examined = boxes;
    if (any_unknown) {
        out.status = Status::UNKNOWN;
        out.margin = (worst_lo == kInf) ? 0.0 : worst_lo;
    } else {
        out.status = Status::PASS;
    }
    return out;
}

} // namespace bhs
