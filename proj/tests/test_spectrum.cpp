#include <doctest.h>

#include <cmath>
#include <random>

#include "delaystab/criterion.hpp"
#include "delaystab/spectrum.hpp"
#include "test_support.hpp"

using namespace dstab;
using dstab::testing::kPi;

namespace {

const Coefficients kSwitching{0.9, 1.0, 2.0, -2.0};
const Coefficients kStabilizing{0.9, -1.0, 1.0, -1.0};

double r1(const Coefficients& k, long long n) {
    return switch_time_r1(derive(k), k.alpha > 0 ? Sign::Positive : Sign::Negative, n);
}
double r2(const Coefficients& k, long long n) {
    return switch_time_r2(derive(k), k.alpha > 0 ? Sign::Positive : Sign::Negative, n);
}

}  // namespace

TEST_CASE("char_G examples") {
    CHECK(std::abs(char_G({0.0, 0.0}, {1.0, 0.0, 0.0, 0.0, 1.0}) - cplx{1.0, 0.0}) < 1e-15);

    // lambda = -a - alpha: first factor vanishes as tau -> 0, leaving -bc.
    const SystemParams base{0.7, 0.4, 2.0, -3.0, 0.0};
    const cplx lam{-base.a - base.alpha, 0.0};
    CHECK(std::abs(char_G(lam, base) - cplx{6.0, 0.0}) < 1e-14);
    double prev = INFINITY;
    for (double tau : {1e-1, 1e-2, 1e-3, 1e-4}) {
        SystemParams p = base;
        p.tau = tau;
        const double err = std::abs(char_G(lam, p) - cplx{6.0, 0.0});
        CHECK(err < prev);
        prev = err;
    }
    CHECK(prev < 1e-3);

    const auto q = derive(kSwitching);
    CHECK(std::abs(char_G({0.0, *q.omega1}, SystemParams::from(kSwitching, r1(kSwitching, 0)))) < 1e-8);
}

TEST_CASE("char_F examples") {
    const SystemParams p0{0.9, -1.0, 1.0, -1.0, 0.0};
    CHECK(std::abs(char_F({-p0.alpha - p0.a, -1.0}, p0)) < 1e-15);

    const auto q = derive(kStabilizing);
    CHECK(std::abs(char_F({0.0, *q.omega2}, SystemParams::from(kStabilizing, r2(kStabilizing, 0)))) < 1e-9);

    CHECK_THROWS_AS((void)char_F({0.0, 0.0}, {1.0, 1.0, 1.0, 1.0, 1.0}), Error);
}

TEST_CASE("G factors as F times conj(F(conj(lambda)))") {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(-3.0, 3.0), ul(-4.0, 4.0), ut(0.0, 5.0), ubc(-9.0, -0.01);
    for (int i = 0; i < 2000; ++i) {
        const SystemParams p{u(rng), u(rng), ubc(rng), 1.0, ut(rng)};
        const cplx lam{ul(rng), ul(rng)};
        const cplx g = char_G(lam, p);
        const cplx fg = char_F(lam, p) * std::conj(char_F(std::conj(lam), p));
        CHECK(std::abs(g - fg) <= 1e-10 * std::max(1.0, std::abs(g)));
    }
}

TEST_CASE("count_rhp_roots examples") {
    CHECK(count_rhp_roots(SystemParams::from(kStabilizing, 0.1)) == 1);
    CHECK(count_rhp_roots(SystemParams::from(kStabilizing, 2.0)) == 0);
    const SystemParams scalar{0.0, 1.0, 0.0, 0.0, 2.0};
    CHECK(count_rhp_roots(scalar) == 4);
    for (const auto& f : spectral_factors(scalar)) CHECK(count_roots(f, default_contour(scalar)) == 2);
}

TEST_CASE("count_rhp_roots at tau = 0 counts the delay-free root") {
    // Only root of F at tau = 0 is -alpha - a - i d.
    CHECK(count_rhp_roots(SystemParams::from(kStabilizing, 0.0)) == 1);
    CHECK(count_rhp_roots(SystemParams::from(kSwitching, 0.0)) == 0);
}

TEST_CASE("contour validation and root-near-contour reporting") {
    const auto p = SystemParams::from(kSwitching, 1.0);
    CHECK_THROWS_AS((void)count_rhp_roots(p, ContourSpec{1.0, 0.0, 2000}), Error);  // radius below bound
    CHECK_THROWS_AS((void)count_rhp_roots(p, ContourSpec{10.0, 0.0, 999}), Error);
    CHECK_THROWS_AS((void)count_rhp_roots(p, ContourSpec{10.0, 0.0, 1001}), Error);
    CHECK_THROWS_AS((void)count_rhp_roots(p, ContourSpec{10.0, -1.0, 2000}), Error);

    // Exactly on a crossing: a root sits on the imaginary axis.
    const auto on_axis = SystemParams::from(kSwitching, r1(kSwitching, 0));
    try {
        (void)count_rhp_roots(on_axis, default_contour(on_axis));
        FAIL("expected RootNearContour");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::RootNearContour);
    }
    // The automatic retry moves the edge right; the axis root is not counted.
    CHECK(count_rhp_roots(on_axis) == 0);
}

TEST_CASE("count is stable under doubling samples and radius") {
    const std::vector<SystemParams> fixtures{
        SystemParams::from(kSwitching, 0.5), SystemParams::from(kSwitching, 1.7),
        SystemParams::from(kSwitching, 3.0), SystemParams::from(kSwitching, 4.0),
        SystemParams::from(kStabilizing, 0.4), SystemParams::from(kStabilizing, 2.0),
        SystemParams::from(kStabilizing, 5.0), SystemParams{1.0, -2.0, 2.0, -2.0, 7.0},
    };
    for (const auto& p : fixtures) {
        const auto base = default_contour(p);
        const int n = count_rhp_roots(p, base);
        CHECK(count_rhp_roots(p, ContourSpec{base.radius, base.left_edge, 2 * base.samples}) == n);
        CHECK(count_rhp_roots(p, ContourSpec{2 * base.radius, base.left_edge, base.samples}) == n);
    }
}

TEST_CASE("bc >= 0: count over G equals the sum over its factors") {
    std::mt19937_64 rng(17);
    std::uniform_real_distribution<double> u(-3.0, 3.0), ubc(0.01, 9.0), ut(0.05, 4.0);
    int done = 0;
    while (done < 12) {
        const SystemParams p{u(rng), u(rng), ubc(rng), 1.0, ut(rng)};
        int sum = 0;
        try {
            sum = count_rhp_roots(p, default_contour(p));
        } catch (const Error&) {
            continue;
        }
        const double R = default_contour(p).radius;
        const int direct = testing::dense_winding([&](cplx l) { return char_G(l, p); }, R);
        CHECK(direct == sum);
        ++done;
    }
}

TEST_CASE("bc < 0: G carries each root of F and its conjugate") {
    for (double tau : {0.5, 1.7, 3.0, 4.0}) {
        const auto p = SystemParams::from(kSwitching, tau);
        const double R = default_contour(p).radius;
        const int direct = testing::dense_winding([&](cplx l) { return char_G(l, p); }, R);
        CHECK(direct == 2 * count_rhp_roots(p));
    }
}

TEST_CASE("imaginary_crossings examples") {
    // Spacing is 2 pi / |omega1| = pi, so the second crossing sits at 5 pi / 4 > 3.
    auto cs = imaginary_crossings({0.0, 1.0, 1.0, -1.0}, 3.0);
    REQUIRE(cs.size() == 1);
    CHECK(cs[0].tau == doctest::Approx(kPi / 4).epsilon(1e-14));
    cs = imaginary_crossings({0.0, 1.0, 1.0, -1.0}, 4.0);
    REQUIRE(cs.size() == 2);
    CHECK(cs[0].omega == doctest::Approx(-2.0));
    CHECK(cs[0].tau == doctest::Approx(kPi / 4).epsilon(1e-14));
    CHECK(cs[1].tau == doctest::Approx(kPi / 4 + kPi).epsilon(1e-14));

    cs = imaginary_crossings(kSwitching, 4.0);
    REQUIRE(cs.size() == 3);
    CHECK(cs[0].tau == doctest::Approx(1.1045).epsilon(1e-3));
    CHECK(cs[1].tau == doctest::Approx(2.2969).epsilon(1e-3));
    CHECK(cs[2].tau == doctest::Approx(3.6840).epsilon(1e-3));
    CHECK(cs[0].direction == Direction::LeftToRight);
    CHECK(cs[1].direction == Direction::RightToLeft);
    CHECK(cs[2].direction == Direction::LeftToRight);

    try {
        (void)imaginary_crossings({2.0, 1.0, 1.0, -1.0}, 10.0);
        FAIL("expected NoImaginaryRoots");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::NoImaginaryRoots);
    }
    CHECK_THROWS_AS((void)imaginary_crossings({1.0, 2.0, 1.0, 1.0}, 10.0), Error);
    CHECK_THROWS_AS((void)imaginary_crossings({1.0, 0.0, 1.0, -1.0}, 10.0), Error);
}

TEST_CASE("crossings found from the phase equations match the closed-form switch times") {
    std::mt19937_64 rng(23);
    std::uniform_real_distribution<double> ua(-3.0, 3.0), ubc(-9.0, -0.01);
    int cases = 0;
    while (cases < 200) {
        const Coefficients k{ua(rng), ua(rng), ubc(rng), 1.0};
        const auto q = derive(k);
        if (!q.sqrtD || *q.sqrtD < 1e-3 || std::abs(*q.d - *q.sqrtD) < 1e-3) continue;
        ++cases;
        const auto cs = imaginary_crossings(k, 30.0);
        std::vector<double> want;
        for (long long n = 0;; ++n) {
            const double t = r1(k, n);
            if (t > 30.0) break;
            want.push_back(t);
        }
        for (long long n = 0;; ++n) {
            const double t = r2(k, n);
            if (t > 30.0) break;
            want.push_back(t);
        }
        std::sort(want.begin(), want.end());
        REQUIRE(cs.size() == want.size());
        for (std::size_t i = 0; i < cs.size(); ++i) CHECK(std::abs(cs[i].tau - want[i]) <= 1e-10 * want[i]);
    }
}

TEST_CASE("crossing_direction examples") {
    for (const Coefficients k : {kSwitching, kStabilizing, Coefficients{1.0, 3.0, 1.0, -1.0}}) {
        const auto q = derive(k);
        CHECK(crossing_direction(*q.omega1, r1(k, 0), SystemParams::from(k, 1.0)) == Direction::LeftToRight);
        const auto dir2 = crossing_direction(*q.omega2, r2(k, 0), SystemParams::from(k, 1.0));
        CHECK(dir2 == (*q.sqrtD < *q.d ? Direction::RightToLeft : Direction::LeftToRight));
    }
    // alpha^2 = a^2: omega1 = omega2 = -d; F(-i) = 1 + e^{i tau} vanishes at tau = pi.
    CHECK(crossing_direction(-1.0, kPi, {1.0, 1.0, 1.0, -1.0, 1.0}) == Direction::Degenerate);
    CHECK_THROWS_AS((void)crossing_direction(-1.0, 1.0, {1.0, 1.0, 1.0, -1.0, 1.0}), Error);
}

TEST_CASE("root count steps by one across each simple crossing") {
    for (const Coefficients k : {kSwitching, kStabilizing}) {
        for (const auto& c : imaginary_crossings(k, 9.0)) {
            const int before = count_rhp_roots(SystemParams::from(k, c.tau - 1e-3));
            const int after = count_rhp_roots(SystemParams::from(k, c.tau + 1e-3));
            CHECK(after - before == (c.direction == Direction::LeftToRight ? 1 : -1));
        }
    }
}

TEST_CASE("finite-difference crossing direction matches sign(omega (omega + d))") {
    std::mt19937_64 rng(41);
    std::uniform_real_distribution<double> ua(-3.0, 3.0), ubc(-9.0, -0.01);
    int cases = 0;
    while (cases < 60) {
        const Coefficients k{ua(rng), ua(rng), ubc(rng), 1.0};
        const auto q = derive(k);
        if (!q.sqrtD || *q.sqrtD < 1e-2 || std::abs(*q.d - *q.sqrtD) < 1e-2) continue;
        ++cases;
        for (const auto& c : imaginary_crossings(k, 12.0)) {
            const double delta = 1e-4;
            const auto lo = continue_root(SystemParams::from(k, 1.0), c.omega, c.tau - delta);
            const auto hi = continue_root(SystemParams::from(k, 1.0), c.omega, c.tau + delta);
            REQUIRE(lo);
            REQUIRE(hi);
            const double fd = hi->real() - lo->real();
            const double s = c.omega * (c.omega + *q.d);
            CHECK((fd > 0.0) == (s > 0.0));
        }
    }
}

TEST_CASE("newton_refine converges to a root of the factor") {
    const DelayFactor f{{0.9, 1.0}, -1.0, 0.0};
    const auto r = newton_refine(f, {0.0, 0.0});
    REQUIRE(r);
    CHECK(std::abs(*r - cplx{0.1, -1.0}) < 1e-12);
}

TEST_CASE("rightmost_root") {
    const auto p = SystemParams::from(kStabilizing, 0.4);
    const auto r = rightmost_root(p);
    REQUIRE(r);
    CHECK(r->real() > 0.0);
    CHECK(std::abs(char_F(*r, p)) < 1e-9);

    const auto stable = SystemParams::from(kStabilizing, 2.0);
    const auto s = rightmost_root(stable, -2.0);
    REQUIRE(s);
    CHECK(s->real() < 0.0);
    CHECK(s->real() > -2.0);
    CHECK_FALSE(rightmost_root(stable, -1e-6).has_value());
}

TEST_CASE("exactly one unstable root of F in the gaps between windows") {
    const Coefficients switching{0.9, 1.0, 2.0, -2.0};
    for (double tau : {1.2, 1.7, 2.2, 3.8, 5.0, 6.2}) CHECK(count_rhp_roots(SystemParams::from(switching, tau)) == 1);
    const Coefficients stabilizing{0.9, -1.0, 1.0, -1.0};
    for (double tau : {0.1, 0.4, 0.75}) CHECK(count_rhp_roots(SystemParams::from(stabilizing, tau)) == 1);
}
