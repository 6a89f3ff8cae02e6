#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "delaystab/criterion.hpp"
#include "delaystab/spectrum.hpp"
#include "test_support.hpp"

using namespace dstab;
using dstab::testing::kPi;

namespace {

Sign sign_of(double alpha) { return alpha > 0.0 ? Sign::Positive : Sign::Negative; }

double r1(const Coefficients& k, long long n) { return switch_time_r1(derive(k), sign_of(k.alpha), n); }
double r2(const Coefficients& k, long long n) { return switch_time_r2(derive(k), sign_of(k.alpha), n); }

}  // namespace

TEST_CASE("hayes_stable examples") {
    CHECK(hayes_stable(1.0, 0.5, 1000.0));
    CHECK(hayes_stable(0.0, 1.0, 1.0));
    CHECK_FALSE(hayes_stable(0.0, 1.0, 2.0));
    CHECK_FALSE(hayes_stable(0.0, -1.0, 0.5));
    // q = -p puts a root at zero.
    CHECK_FALSE(hayes_stable(1.0, -1.0, 0.1));
    // q = p is on the unconditional side.
    CHECK(hayes_stable(1.0, 1.0, 50.0));
}

TEST_CASE("hayes_threshold examples") {
    CHECK(hayes_threshold(2.0, 1.0).kind == HayesThreshold::Kind::AllTau);
    const auto t = hayes_threshold(0.0, 1.0);
    REQUIRE(t.kind == HayesThreshold::Kind::UpTo);
    CHECK(t.bound == doctest::Approx(kPi / 2).epsilon(1e-15));
    CHECK(hayes_threshold(1.0, -2.0).kind == HayesThreshold::Kind::None);
}

TEST_CASE("hayes_threshold agrees with hayes_stable") {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> u(-4.0, 4.0), ut(0.001, 10.0);
    for (int i = 0; i < 5000; ++i) {
        const double p = u(rng), q = u(rng), tau = ut(rng);
        const auto t = hayes_threshold(p, q);
        bool expected = false;
        switch (t.kind) {
            case HayesThreshold::Kind::AllTau: expected = true; break;
            case HayesThreshold::Kind::UpTo: expected = tau < t.bound; break;
            case HayesThreshold::Kind::None: expected = false; break;
        }
        CHECK(hayes_stable(p, q, tau) == expected);
    }
}

TEST_CASE("hayes threshold checked against the root count") {
    // One scalar factor lambda + e^{-lambda tau}: threshold pi/2.
    const ContourSpec spec{3.0, 0.0, 2000};
    CHECK(count_roots(DelayFactor{{0.0, 0.0}, 1.0, kPi / 2 - 0.01}, spec) == 0);
    CHECK(count_roots(DelayFactor{{0.0, 0.0}, 1.0, kPi / 2 + 0.01}, spec) == 2);
}

TEST_CASE("switch_time_r1 examples") {
    CHECK(r1({0.0, 1.0, 1.0, -1.0}, 0) == doctest::Approx(kPi / 4).epsilon(1e-15));
    CHECK(r1({0.9, 1.0, 2.0, -2.0}, 0) == doctest::Approx(1.1045515021141779).epsilon(1e-13));
    CHECK(r1({0.9, 1.0, 2.0, -2.0}, 1) == doctest::Approx(3.683972403585473).epsilon(1e-13));
    CHECK(r1({0.9, -1.0, 1.0, -1.0}, 0) == doctest::Approx(4.06170314194384).epsilon(1e-13));

    // Each is a purely imaginary root of F at frequency omega1.
    for (const Coefficients k : {Coefficients{0.9, 1.0, 2.0, -2.0}, Coefficients{0.9, -1.0, 1.0, -1.0}}) {
        const auto q = derive(k);
        for (long long n = 0; n < 5; ++n) {
            const auto p = SystemParams::from(k, r1(k, n));
            CHECK(std::abs(char_F({0.0, *q.omega1}, p)) < 1e-9);
        }
    }
}

TEST_CASE("switch_time_r2 examples") {
    CHECK(r2({0.9, 1.0, 2.0, -2.0}, 0) == doctest::Approx(2.296909566927455).epsilon(1e-13));
    CHECK(r2({0.9, -1.0, 1.0, -1.0}, 0) == doctest::Approx(0.7995368409147986).epsilon(1e-13));
    try {
        (void)r2({0.0, 1.0, 1.0, -1.0}, 3);
        FAIL("expected UndefinedAtResonance");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::UndefinedAtResonance);
    }
    for (const Coefficients k : {Coefficients{0.9, 1.0, 2.0, -2.0}, Coefficients{0.9, -1.0, 1.0, -1.0}}) {
        const auto q = derive(k);
        for (long long n = 0; n < 5; ++n) {
            CHECK(std::abs(char_F({0.0, *q.omega2}, SystemParams::from(k, r2(k, n)))) < 1e-9);
        }
    }
}

TEST_CASE("switch times reject unmet preconditions") {
    for (const Coefficients k : {Coefficients{1.0, 0.0, 1.0, -1.0},    // alpha = 0
                                 Coefficients{2.0, 1.0, 1.0, -1.0},    // D < 0
                                 Coefficients{0.5, 1.0, 1.0, 1.0}}) {  // bc > 0
        CHECK_THROWS_AS((void)r1(k, 0), Error);
        CHECK_THROWS_AS((void)r2(k, 0), Error);
    }
    CHECK_THROWS_AS((void)r1({0.9, 1.0, 2.0, -2.0}, -1), Error);
}

TEST_CASE("switch_time_r2 with omega2 > 0 is a positive crossing delay") {
    // sqrt(D) > d: alpha = 3, a = 1, bc = -1 -> sqrt(8) > 1.
    for (const Coefficients k : {Coefficients{1.0, 3.0, 1.0, -1.0}, Coefficients{1.0, -3.0, 1.0, -1.0}}) {
        const auto q = derive(k);
        REQUIRE(*q.omega2 > 0.0);
        double prev = 0.0;
        for (long long n = 0; n < 6; ++n) {
            const double t = r2(k, n);
            CHECK(t > prev);
            CHECK(std::abs(char_F({0.0, *q.omega2}, SystemParams::from(k, t))) < 1e-9);
            prev = t;
        }
    }
}

TEST_CASE("stability_windows: stability switching, case I-3-b") {
    const auto w = stability_windows({0.9, 1.0, 2.0, -2.0});
    REQUIRE(w.intervals.size() == 2);
    CHECK(w.intervals[0].lo == 0.0);
    CHECK(w.intervals[0].hi == doctest::Approx(1.1045).epsilon(1e-3));
    CHECK(w.intervals[1].lo == doctest::Approx(2.2969).epsilon(1e-3));
    CHECK(w.intervals[1].hi == doctest::Approx(3.6840).epsilon(1e-3));
    CHECK(w.well_formed());
    CHECK(governing_branch({0.9, 1.0, 2.0, -2.0}) == "ii-1/I-3-b");
}

TEST_CASE("stability_windows: delay-induced stabilization, case II-2") {
    const auto w = stability_windows({0.9, -1.0, 1.0, -1.0});
    REQUIRE(w.intervals.size() == 1);
    CHECK(std::abs(w.intervals[0].lo - 0.7995) < 1e-3);
    CHECK(std::abs(w.intervals[0].hi - 4.0617) < 1e-3);
    CHECK(governing_branch({0.9, -1.0, 1.0, -1.0}) == "ii-1/II-2");
}

TEST_CASE("stability_windows: alpha^2 < a^2 and a + alpha > 0") {
    const auto w = stability_windows({2.0, 1.0, 1.0, -1.0});
    REQUIRE(w.intervals.size() == 1);
    CHECK(w.intervals[0].lo == 0.0);
    CHECK(w.intervals[0].unbounded());
    CHECK(stability_windows({-2.0, 1.0, 1.0, -1.0}).empty());
}

TEST_CASE("stability_windows: no window when l < 0") {
    const Coefficients k{1.0, -2.0, 2.0, -2.0};
    CHECK(*derive(k).l == -1);
    CHECK(stability_windows(k).empty());
}

TEST_CASE("stability_windows: bc >= 0 uses both Hayes factors") {
    // beta = 1: p = 1 +/- 1 = {2, 0}, q = 1 -> AllTau and UpTo(pi/2).
    const auto w = stability_windows({1.0, 1.0, 1.0, 1.0});
    REQUIRE(w.intervals.size() == 1);
    CHECK(w.intervals[0].hi == doctest::Approx(kPi / 2).epsilon(1e-14));
    CHECK(governing_branch({1.0, 1.0, 1.0, 1.0}) == "i-tau-bound");

    CHECK(stability_windows({3.0, 1.0, 1.0, 1.0}).intervals.at(0).unbounded());
    CHECK(governing_branch({3.0, 1.0, 1.0, 1.0}) == "i-first");
    CHECK(stability_windows({0.0, -1.0, 1.0, 1.0}).empty());

    // bc = 0 collapses both factors to p = a.
    const auto z = stability_windows({0.0, 1.0, 0.0, 3.0});
    REQUIRE(z.intervals.size() == 1);
    CHECK(z.intervals[0].hi == doctest::Approx(kPi / 2).epsilon(1e-14));
}

TEST_CASE("stability_windows: excluded hypothesis") {
    try {
        (void)stability_windows({1.0, 1.0, 1.0, -1.0});
        FAIL("expected ExcludedByHypothesis");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::ExcludedByHypothesis);
    }
    CHECK_THROWS_AS((void)stability_windows({1.0, -1.0, 1.0, -1.0}), Error);
}

TEST_CASE("is_asymptotically_stable examples") {
    auto v = is_asymptotically_stable({1.0, 0.0, 0.0, 0.0, 7.0});
    CHECK(v.status == Status::Stable);
    CHECK(v.branch == "alpha-zero");

    v = is_asymptotically_stable({0.0, 1.0, 1.0, -1.0, 0.5});
    CHECK(v.status == Status::Stable);
    CHECK(v.branch == "ii-1/I-2");
    v = is_asymptotically_stable({0.0, 1.0, 1.0, -1.0, 1.0});
    CHECK(v.status == Status::Unstable);

    v = is_asymptotically_stable({1.0, 1.0, 1.0, -1.0, 1.0});
    CHECK(v.status == Status::ExcludedByHypothesis);

    v = is_asymptotically_stable({2.0, 1.0, 1.0, -1.0, 9.0});
    CHECK(v.status == Status::Stable);
    CHECK(v.branch == "ii-2");
    REQUIRE(v.witness);

    CHECK_THROWS_AS((void)is_asymptotically_stable({1.0, 1.0, 1.0, 1.0, 0.0}), Error);
}

TEST_CASE("alpha = 0 follows the delay-free roots") {
    CHECK(is_asymptotically_stable({1.0, 0.0, 1.0, -1.0, 2.0}).status == Status::Stable);
    CHECK(is_asymptotically_stable({0.0, 0.0, 1.0, -1.0, 2.0}).status == Status::Unstable);
    CHECK(is_asymptotically_stable({1.0, 0.0, 4.0, 1.0, 2.0}).status == Status::Unstable);   // -1 + 2 > 0
    CHECK(is_asymptotically_stable({3.0, 0.0, 4.0, 1.0, 2.0}).status == Status::Stable);
    CHECK(is_asymptotically_stable({3.0, 0.0, 4.0, 1.0, 2.0}).branch == "alpha-zero");
}

TEST_CASE("window endpoints are unstable with a boundary witness") {
    const Coefficients k{0.9, 1.0, 2.0, -2.0};
    for (double t : {r1(k, 0), r2(k, 0), r1(k, 1)}) {
        const auto v = is_asymptotically_stable(SystemParams::from(k, t));
        CHECK(v.status == Status::Unstable);
        REQUIRE(v.witness);
        CHECK(v.witness->rfind("boundary: non-asymptotic", 0) == 0);
    }
}

TEST_CASE("a = 0 specialisation (E = 0) is reproduced") {
    std::mt19937_64 rng(2024);
    std::uniform_real_distribution<double> ua(-3.0, 3.0), ubc(-9.0, -0.01);
    int checked = 0;
    while (checked < 200) {
        const double alpha = ua(rng), bc = ubc(rng);
        const double d = std::sqrt(-bc), s = std::abs(alpha);
        if (std::abs(alpha) < 1e-3 || std::abs(d - s) < 1e-3) continue;
        if (testing::dist_to_integer(d / (4 * s)) < 1e-6 || testing::dist_to_integer(d / (4 * s) - 0.5) < 1e-6) continue;
        const auto got = stability_windows({0.0, alpha, bc, 1.0});
        const auto want = testing::a_zero_windows(alpha, bc);
        REQUIRE(got.intervals.size() == want.intervals.size());
        for (std::size_t i = 0; i < got.intervals.size(); ++i) {
            CHECK(std::abs(got.intervals[i].lo - want.intervals[i].lo) <= 1e-10);
            CHECK(std::abs(got.intervals[i].hi - want.intervals[i].hi) <= 1e-10);
        }
        ++checked;
    }
}

TEST_CASE("verdict agrees with window membership") {
    testing::ParamGenerator gen(99, 1e-9);
    for (int i = 0; i < 3000; ++i) {
        const auto p = gen.next();
        const auto v = is_asymptotically_stable(p);
        const auto w = stability_windows(p.coefficients());
        CHECK(w.well_formed());
        CHECK((v.status == Status::Stable) == w.contains(p.tau));
    }
}

TEST_CASE("verdict depends on b and c only through bc") {
    testing::ParamGenerator gen(5, 1e-9);
    for (int i = 0; i < 1000; ++i) {
        const auto p = gen.next();
        const auto v = is_asymptotically_stable(p);
        const auto swapped = is_asymptotically_stable({p.a, p.alpha, p.c, p.b, p.tau});
        const auto collapsed = is_asymptotically_stable({p.a, p.alpha, p.b * p.c, 1.0, p.tau});
        CHECK(v.status == swapped.status);
        CHECK(v.branch == swapped.branch);
        CHECK(v.status == collapsed.status);
        CHECK(v.branch == collapsed.branch);
    }
}

TEST_CASE("switch-time spacing, ordering and interleaving laws") {
    std::mt19937_64 rng(31);
    std::uniform_real_distribution<double> ua(-3.0, 3.0), ubc(-9.0, -0.01);
    int cases = 0;
    while (cases < 300) {
        const Coefficients k{ua(rng), ua(rng), ubc(rng), 1.0};
        const auto q = derive(k);
        if (!q.sqrtD || *q.sqrtD < 1e-3 || std::abs(*q.d - *q.sqrtD) < 1e-3) continue;
        ++cases;
        const double p1 = 2 * kPi / std::abs(*q.omega1);
        const double p2 = 2 * kPi / std::abs(*q.omega2);
        for (long long n = 0; n <= 10; ++n) {
            const double s1 = r1(k, n + 1) - r1(k, n);
            const double s2 = r2(k, n + 1) - r2(k, n);
            CHECK(std::abs(s1 - p1) <= 1e-10 * p1);
            CHECK(std::abs(s2 - p2) <= 1e-10 * p2);
            CHECK(r1(k, n) > 0.0);
            CHECK(r2(k, n) > 0.0);
        }
        if (*q.sqrtD < *q.d) {
            CHECK(p1 < p2);
            if (k.alpha > 0.0) {
                for (long long n = 0; n <= 10; ++n) CHECK(r2(k, n) > r1(k, n));
            }
        }
    }
}

TEST_CASE("interleaving on the switching fixture") {
    const Coefficients k{0.9, 1.0, 2.0, -2.0};
    const long long kk = *derive(k).k;
    REQUIRE(kk == 1);
    // 0 < r1.0 < r2.0 < ... < r2.{k-1} < r1.k < r1.{k+1} < r2.k
    std::vector<double> seq{0.0};
    for (long long n = 0; n < kk; ++n) {
        seq.push_back(r1(k, n));
        seq.push_back(r2(k, n));
    }
    seq.push_back(r1(k, kk));
    seq.push_back(r1(k, kk + 1));
    seq.push_back(r2(k, kk));
    for (std::size_t i = 1; i < seq.size(); ++i) CHECK(seq[i - 1] < seq[i]);
}
