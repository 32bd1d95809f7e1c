#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "maxkin/analysis.hpp"
#include "maxkin/errors.hpp"
#include "support.hpp"

using namespace maxkin;
using namespace maxkin::analysis;
using doctest::Approx;

namespace {
CollisionParams vel(double p, double q) { return {p, q, ModelKind::VelocityLine}; }
CollisionParams wea(double p, double q) { return {p, q, ModelKind::WealthHalfLine}; }
}  // namespace

TEST_CASE("collision params") {
    CHECK(vel(0.6, 0.4).jacobian() == Approx(0.36 - 0.16).epsilon(1e-14));
    CHECK(vel(1.2, 0.4).lambda() == Approx(0.5).epsilon(1e-14));
    CHECK(wea(0.9, 0.1).lambda() == Approx(0.1).epsilon(1e-12));  // (p-1)^2/q
    CHECK(vel(0.6, 0.4).moment_growth_rate() == Approx(-0.48).epsilon(1e-14));
    CHECK(wea(0.9, 0.1).moment_growth_rate() == Approx(0.0).epsilon(1e-14));
    CHECK_THROWS_AS(vel(-0.1, 0.4), DomainError);
    CHECK_THROWS_AS(vel(1.0, 0.0).lambda(), DomainError);
}

TEST_CASE("mean and energy laws") {
    CHECK(mean_law(vel(0.6, 0.4), 1.0, 5.0) == Approx(1.0).epsilon(1e-14));
    CHECK(mean_law(vel(1.05, 0.1), 1.0, 1.0) ==
          Approx(1.1618342427282831).epsilon(1e-15));
    CHECK(mean_law(vel(0.6, 0.4), 0.0, 3.0) == 0.0);
    CHECK(energy_law(vel(0.6, 0.8), 7.0) == Approx(1.0).epsilon(1e-13));
    CHECK(energy_law(vel(1.2, 0.4), 1.0) == Approx(1.8221188003905090).epsilon(1e-14));
    CHECK(energy_law(vel(0.6, 0.4), 1.0) == Approx(0.61878339180614085).epsilon(1e-14));
}

TEST_CASE("tail function point values") {
    CHECK(std::abs(s_function(vel(0.6, 0.4), 0.0)) < 1e-15);
    CHECK(std::abs(s_function(vel(0.6, 0.4), 1.0)) < 1e-15);  // granular: S(1) = 0
    CHECK(s_function(vel(1.0, 0.4), 1.0) == Approx(-0.176).epsilon(1e-13));
    CHECK(std::abs(r_function(wea(0.9, 0.1), 0.0)) < 1e-15);
    CHECK(r_function(wea(0.9, 0.1), 1.0) == Approx(-0.18).epsilon(1e-13));
    CHECK(r_function(wea(1.0, 0.0), 2.0) == 0.0);  // identity interaction
}

TEST_CASE("slope at zero") {
    CHECK(tail_slope_at_zero(vel(1.0, 0.4)) ==
          Approx(-0.22660651709986481).epsilon(1e-14));
    CHECK(tail_slope_at_zero(vel(1.0, 0.0)) == 0.0);  // 0 log 0 = 0 convention
    CHECK(tail_slope_at_zero(vel(1.8, 0.4)) ==
          Approx(0.55782227718300078).epsilon(1e-14));
    CHECK(tail_slope_at_zero(vel(0.6, 0.4)) ==
          Approx(-0.090503741655621456).epsilon(1e-13));
    CHECK(tail_slope_at_zero(wea(0.9, 0.1)) ==
          Approx(-0.32508297339144824).epsilon(1e-14));
}

TEST_CASE("slope matches finite differences of the tail function") {
    Rng rng(91);
    const double h = 1e-6;
    for (int i = 0; i < 100; ++i) {
        const double p = rng.uniform(0.05, 2.0);
        const double q = rng.uniform(0.05, 2.0);
        for (const auto kind : {ModelKind::VelocityLine, ModelKind::WealthHalfLine}) {
            const CollisionParams cp(p, q, kind);
            const double fd = (tail_function(cp, h) - tail_function(cp, 0.0)) / h;
            CHECK(tail_slope_at_zero(cp) ==
                  Approx(fd).epsilon(1e-4).scale(std::abs(fd) + 1.0));
        }
    }
}

TEST_CASE("tail function vanishes at zero for random admissible pairs") {
    Rng rng(17);
    for (int i = 0; i < 200; ++i) {
        const double p = rng.uniform(1e-3, 2.0);
        const double q = rng.uniform(1e-3, 2.0);
        CHECK(std::abs(s_function(vel(p, q), 0.0)) < 1e-15);
        CHECK(std::abs(r_function(wea(p, q), 0.0)) < 1e-15);
    }
}

TEST_CASE("convexity: finite-difference second differences are nonnegative") {
    Rng rng(23);
    for (int i = 0; i < 200; ++i) {
        const double p = rng.uniform(0.05, 2.0);
        const double q = rng.uniform(0.05, 2.0);
        const double d1 = rng.uniform(0.0, 6.0);
        const double d2 = d1 + rng.uniform(1e-3, 1.0);
        const double d3 = d2 + rng.uniform(1e-3, 1.0);
        for (const auto kind : {ModelKind::VelocityLine, ModelKind::WealthHalfLine}) {
            const CollisionParams cp(p, q, kind);
            const double f1 = tail_function(cp, d1);
            const double f2 = tail_function(cp, d2);
            const double f3 = tail_function(cp, d3);
            // Chord inequality for the interior point.
            const double t = (d2 - d1) / (d3 - d1);
            const double chord = (1.0 - t) * f1 + t * f3;
            CHECK(f2 <= chord + 1e-9 * (1.0 + std::abs(chord)));
        }
    }
}

TEST_CASE("find_delta_star: granular identity delta* = 1") {
    const auto report = find_delta_star(vel(0.6, 0.4));
    REQUIRE(report.has_algebraic_tail);
    CHECK(*report.delta_star == Approx(1.0).epsilon(1e-8));
    CHECK(report.moment_growth_rate == Approx(-0.48).epsilon(1e-14));

    Rng rng(7);
    for (int i = 0; i < 20; ++i) {
        const double q = rng.uniform(0.01, 0.49);
        const auto r = find_delta_star(vel(1.0 - q, q));
        REQUIRE(r.has_algebraic_tail);
        CHECK(*r.delta_star == Approx(1.0).epsilon(1e-8));
    }
}

TEST_CASE("find_delta_star: root consistency") {
    Rng rng(37);
    for (int i = 0; i < 50; ++i) {
        const double q = rng.uniform(0.05, 0.45);
        const double lambda = rng.uniform(0.4, 1.5);
        const CollisionParams cp = vel(1.0 + lambda * q, q);
        const auto r = find_delta_star(cp);
        if (!r.has_algebraic_tail) continue;
        const double d = *r.delta_star;
        CHECK(std::abs(s_function(cp, d)) < 1e-10);
        CHECK(s_function(cp, d - 1e-4) < 0.0);
        CHECK(s_function(cp, d + 1e-4) > 0.0);
    }
}

TEST_CASE("find_delta_star: conservative case has no algebraic tail") {
    CHECK_FALSE(find_delta_star(vel(0.6, 0.8)).has_algebraic_tail);
    Rng rng(41);
    for (int i = 0; i < 20; ++i) {
        const double q = rng.uniform(0.05, 0.7);
        const double p = std::sqrt(1.0 - q * q);
        CHECK_FALSE(find_delta_star(vel(p, q)).has_algebraic_tail);
    }
    // Growing energy with p = 1: negative slope but S < 0 for all delta.
    const auto r = find_delta_star(vel(1.0, 0.4));
    CHECK(r.s_prime_at_zero < 0.0);
    CHECK_FALSE(r.has_algebraic_tail);
}

TEST_CASE("find_delta_star: grazing limit bound delta* < 1/lambda^2") {
    // lambda = 0.5, p = 1 + lambda q; frozen against an independent
    // high-precision bisection of S.
    const double expected[] = {3.0099484693001229, 3.4502320013585286,
                               3.6999455481763466, 3.8421698139763755,
                               3.9189420651295964};
    const double qs[] = {0.4, 0.2, 0.1, 0.05, 0.025};
    double prev = 0.0;
    for (int i = 0; i < 5; ++i) {
        const auto r = find_delta_star(vel(1.0 + 0.5 * qs[i], qs[i]));
        REQUIRE(r.has_algebraic_tail);
        // |S| < 1e-10 at the root translates to |delta - delta*| up to
        // ~1e-10 / S'(delta*), and S' scales like q^2 here.
        CHECK(*r.delta_star == Approx(expected[i]).epsilon(1e-6));
        CHECK(*r.delta_star < 4.0);
        CHECK(*r.delta_star > prev);
        prev = *r.delta_star;
    }
}

TEST_CASE("find_delta_star: unattainable tolerance raises NonConvergence") {
    // At (1.05, 0.1) the bracket collapses to adjacent doubles with S never
    // evaluating to exactly zero, so |S| < 1e-300 is unreachable.
    CHECK_THROWS_AS(find_delta_star(vel(1.05, 0.1), 64.0, 1e-300), NonConvergence);
    CHECK_THROWS_AS(find_delta_star(vel(0.6, 0.4), 64.0, 0.0), DomainError);
}

TEST_CASE("contraction rate") {
    CHECK(contraction_rate(vel(0.6, 0.4), 2.5) ==
          Approx(0.019952313947677846).epsilon(1e-12));
    CHECK(contraction_rate(vel(0.6, 0.8), 3.0) == Approx(0.272).epsilon(1e-12));
    CHECK(std::abs(contraction_rate(vel(0.6, 0.4), 3.0)) < 1e-14);  // marginal S(1)=0
    CHECK(contraction_rate(wea(0.9, 0.1), 2.0) == Approx(0.18).epsilon(1e-12));
    CHECK_THROWS_AS(contraction_rate(vel(0.6, 0.4), 2.0), DomainError);
    CHECK_THROWS_AS(contraction_rate(wea(0.9, 0.1), 1.0), DomainError);
}

TEST_CASE("region scan agrees with the brute-force delta-grid oracle") {
    const auto scan = negativity_region_scan(0.0, 2.0, 0.0, 2.0, 41);
    for (Eigen::Index ip = 0; ip < 41; ++ip)
        for (Eigen::Index iq = 0; iq < 41; ++iq) {
            const bool oracle = testsupport::brute_force_negative(
                scan.p_values[ip], scan.q_values[iq], ModelKind::VelocityLine);
            CHECK(scan.at(ip, iq) == oracle);
        }
    // Named points of the map.
    CHECK(scan.at(12, 8));         // (0.6, 0.4) inside
    CHECK_FALSE(scan.at(36, 8));   // (1.8, 0.4) outside
    CHECK_FALSE(scan.at(20, 0));   // (1.0, 0.0) boundary, min S = 0
}

TEST_CASE("region scan rejects degenerate grids") {
    CHECK_THROWS_AS(negativity_region_scan(0.0, 2.0, 0.0, 2.0, 1), DomainError);
}

TEST_CASE("region scan is thread-invariant") {
    const auto a = negativity_region_scan(0.0, 2.0, 0.0, 2.0, 101, ModelKind::VelocityLine, 1);
    const auto b = negativity_region_scan(0.0, 2.0, 0.0, 2.0, 101, ModelKind::VelocityLine, 4);
    REQUIRE(a.negative.size() == b.negative.size());
    for (Eigen::Index i = 0; i < a.negative.size(); ++i)
        CHECK(a.negative[i] == b.negative[i]);
}

TEST_CASE("wealth region scan against oracle") {
    const auto scan = negativity_region_scan(0.0, 2.0, 0.0, 2.0, 21,
                                             ModelKind::WealthHalfLine);
    for (Eigen::Index ip = 0; ip < 21; ++ip)
        for (Eigen::Index iq = 0; iq < 21; ++iq)
            CHECK(scan.at(ip, iq) ==
                  testsupport::brute_force_negative(scan.p_values[ip], scan.q_values[iq],
                                                    ModelKind::WealthHalfLine));
}
