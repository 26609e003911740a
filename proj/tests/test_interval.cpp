#include <doctest.h>

#include <cmath>
#include <random>

#include "bhs/interval.hpp"

using namespace bhs;

namespace {

double rand_double(std::mt19937_64& rng, double lo, double hi) {
    std::uniform_real_distribution<double> d(lo, hi);
    return d(rng);
}

Interval rand_interval(std::mt19937_64& rng) {
    double a = rand_double(rng, -50.0, 50.0);
    double b = rand_double(rng, -50.0, 50.0);
    if (a > b) std::swap(a, b);
    return Interval(a, b);
}

double point_in(std::mt19937_64& rng, const Interval& iv) {
    double t = rand_double(rng, 0.0, 1.0);
    double p = iv.lo() + t * (iv.hi() - iv.lo());
    return std::min(std::max(p, iv.lo()), iv.hi());
}

} // namespace

TEST_CASE("exact endpoint arithmetic stays exact") {
    CHECK(Interval(1, 2) + Interval(3, 4) == Interval(4, 6));
    CHECK(Interval(-1, 2) * Interval(-1, 2) == Interval(-2, 4));
    CHECK(Interval(1, 2) - Interval(0.5, 1) == Interval(0, 1.5));
    CHECK(Interval(1, 4) / Interval(2) == Interval(0.5, 2));
}

TEST_CASE("sqrt encloses the irrational root within 2 ulp") {
    // sqrt(39) = 6.2449979983983982058...
    Interval r = sqrt(Interval(39.0));
    const double ref = 6.244997998398398205846893120939794461073;
    CHECK(r.lo() <= ref);
    CHECK(r.hi() >= ref);
    CHECK(r.width() <= 2.0 * (std::nextafter(ref, 7.0) - ref));
    // exact squares come back exact
    CHECK(sqrt(Interval(4.0)) == Interval(2.0));
    CHECK(sqrt(Interval(0.0)) == Interval(0.0));
}

TEST_CASE("domain errors") {
    CHECK_THROWS_AS(Interval(1, 2) / Interval(-1, 1), DivisionByZeroInterval);
    CHECK_THROWS_AS(sqrt(Interval(-1.0, 4.0)), SqrtOfNegativeInterval);
    CHECK_THROWS_AS(Interval(2, 1), InvalidInterval);
    CHECK(Interval::make_empty().empty());
    CHECK_THROWS_AS(Interval::make_empty() + Interval(1.0), EmptyIntervalOperand);
}

TEST_CASE("abs, min, max, pow2") {
    CHECK(abs(Interval(-3, 2)) == Interval(0, 3));
    CHECK(abs(Interval(-3, -1)) == Interval(1, 3));
    CHECK(min(Interval(1, 5), Interval(2, 3)) == Interval(1, 3));
    CHECK(max(Interval(1, 5), Interval(2, 3)) == Interval(2, 5));
    CHECK(pow2(Interval(-4, 4)) == Interval(0, 16));
    CHECK(pow2(Interval(-3, -2)) == Interval(4, 9));
}

TEST_CASE("containment fuzz: 1e5 random operand/point draws, zero violations") {
    std::mt19937_64 rng(20240901);
    int violations = 0;
    for (int it = 0; it < 100000; ++it) {
        Interval a = rand_interval(rng);
        Interval b = rand_interval(rng);
        double x = point_in(rng, a);
        double y = point_in(rng, b);

        if (!(a + b).contains(x + y)) ++violations;
        if (!(a - b).contains(x - y)) ++violations;
        if (!(a * b).contains(x * y)) ++violations;
        if (!b.contains_zero() && !(a / b).contains(x / y)) ++violations;
        if (a.lo() >= 0.0 && !sqrt(a).contains(std::sqrt(x))) ++violations;
        if (!abs(a).contains(std::fabs(x))) ++violations;
        if (!min(a, b).contains(std::min(x, y))) ++violations;
        if (!max(a, b).contains(std::max(x, y))) ++violations;
        if (!pow2(a).contains(x * x)) ++violations;
    }
    CHECK(violations == 0);
}

TEST_CASE("bisection is endpoint-exact and splits the widest relative axis") {
    IBox box({Interval(1.18, 1.19), Interval(-10, -9)});
    auto [l, r] = box.bisect(1);
    CHECK(l[1].lo() == box[1].lo());
    CHECK(l[1].hi() == r[1].lo());
    CHECK(r[1].hi() == box[1].hi());
    CHECK(l[0] == box[0]);

    // after halving mu, the xi axis has the larger relative width
    std::vector<double> ref{0.01, 1.0};
    CHECK(l.widest_relative_axis(ref) == 0);
    // degenerate axes are never chosen
    IBox degen({Interval(2.0), Interval(0, 1)});
    CHECK(degen.widest_relative_axis({0.0, 1.0}) == 1);
    IBox point({Interval(2.0)});
    CHECK(point.widest_relative_axis({0.0}) == 1);  // == size(): unsplittable
}

namespace {

Interval linear_20_13(const IBox& b) {
    return Interval(20.0) - Interval(13.0) * b[0] - Interval(4.0);
}

} // namespace

TEST_CASE("prove_positive: linear PASS with the expected margin") {
    IBox dom({Interval(1.18, 1.19)});
    Verdict v = prove_positive(linear_20_13, dom);
    CHECK(v.status == Status::PASS);
    CHECK(v.margin >= 0.53 - 1e-12);  // outward rounding may shave an ulp
    CHECK(v.margin <= 0.531);
}

TEST_CASE("prove_positive: sign change FAILs with a point witness") {
    IBox dom({Interval(-1, 1)});
    Verdict v = prove_positive([](const IBox& b) { return b[0]; }, dom);
    CHECK(v.status == Status::FAIL);
    REQUIRE(v.witness.has_value());
    CHECK((*v.witness)[0] < 0.0);
    CHECK(v.margin < 0.0);
}

TEST_CASE("prove_positive: cone bound example margin") {
    IBox dom({Interval(1.18, 1.19)});
    Verdict v = prove_positive(
        [](const IBox& b) {
            const Interval& xi = b[0];
            return Interval(4.0) - (Interval(2.0) + xi + pow2(xi / Interval(2.0)));
        },
        dom);
    CHECK(v.status == Status::PASS);
    CHECK(v.margin >= 0.455);
}

TEST_CASE("prove_positive: x^2 over [-1,1] exhausts to UNKNOWN, never FAIL") {
    IBox dom({Interval(-1, 1)});
    ProverConfig cfg;
    cfg.max_depth = 12;
    Verdict v = prove_positive([](const IBox& b) { return pow2(b[0]); }, dom, cfg);
    CHECK(v.status == Status::UNKNOWN);
    CHECK(v.max_depth_reached == 12);
    CHECK(!v.witness.has_value());
}

TEST_CASE("prove_positive: evaluator errors surface as UNKNOWN, not a throw") {
    IBox dom({Interval(-1, 1)});
    ProverConfig cfg;
    cfg.max_depth = 4;
    Verdict v = prove_positive([](const IBox& b) { return sqrt(b[0]); }, dom, cfg);
    CHECK(v.status == Status::UNKNOWN);
}

TEST_CASE("verdict monotonicity: PASS on the box implies PASS on sub-boxes") {
    std::mt19937_64 rng(7);
    IBox dom({Interval(1.18, 1.19), Interval(-10, -9)});
    auto f = [](const IBox& b) {
        return pow2(b[0]) - Interval(2.0) * b[0] / Interval(6.5) - Interval(1.0);
    };
    Verdict parent = prove_positive(f, dom);
    REQUIRE(parent.status == Status::PASS);
    for (int i = 0; i < 50; ++i) {
        double x0 = rand_double(rng, 1.18, 1.189);
        double m0 = rand_double(rng, -10.0, -9.1);
        IBox sub({Interval(x0, x0 + 0.001), Interval(m0, m0 + 0.1)});
        Verdict child = prove_positive(f, sub);
        CHECK(child.status == Status::PASS);
        CHECK(child.margin >= parent.margin);
    }
}

TEST_CASE("prove_positive PASS implies positivity at random samples") {
    std::mt19937_64 rng(99);
    IBox dom({Interval(1.18, 1.19)});
    Verdict v = prove_positive(linear_20_13, dom);
    REQUIRE(v.status == Status::PASS);
    for (int i = 0; i < 1000; ++i) {
        double xi = rand_double(rng, 1.18, 1.19);
        CHECK(20.0 - 13.0 * xi - 4.0 > 0.0);
    }
}

TEST_CASE("verdict merge: FAIL dominates UNKNOWN dominates PASS") {
    Verdict pass{Status::PASS, 1.0, 1, 0, std::nullopt};
    Verdict unknown{Status::UNKNOWN, 0.0, 1, 0, std::nullopt};
    Verdict fail{Status::FAIL, -1.0, 1, 0, std::vector<double>{0.0}};
    CHECK(merge(pass, unknown).status == Status::UNKNOWN);
    CHECK(merge(unknown, fail).status == Status::FAIL);
    CHECK(merge(pass, pass).status == Status::PASS);
    CHECK(merge(fail, pass).witness.has_value());
}
