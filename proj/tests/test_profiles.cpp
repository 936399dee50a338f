#include <doctest.h>

#include <cmath>

#include "hardylab/errors.hpp"
#include "hardylab/profiles.hpp"

using namespace hardylab;
using namespace hardylab::geometry;
using namespace hardylab::profiles;
using doctest::Approx;

namespace {

const Domain ball3 = make_domain(DomainSpec::ball(3, 1.0));
const Domain strip3 = make_domain(DomainSpec::strip(3, 1.0));
const Domain ann = make_domain(DomainSpec::annulus(3, 1.0, 3.0));
const Domain pspace = make_domain(DomainSpec::punctured_space(3));

}  // namespace

TEST_SUITE("profiles") {
    TEST_CASE("annulus indicator jumps") {
        const auto u = annulus_indicator(pspace, 0.1, 1.0);
        const auto& red = pspace.reduction();
        const auto jumps = u.jumps(red, 4.0);
        REQUIRE(jumps.size() == 2);
        CHECK(jumps[0].t == 0.1);
        CHECK(jumps[0].magnitude == 1.0);
        CHECK(jumps[1].t == 1.0);
        CHECK(jumps[1].magnitude == 1.0);
        CHECK(u.piecewise_constant());
        CHECK(TestProfile::piece_derivative(u.pieces()[0], red, 0.5, 4.0) == 0.0);
        CHECK_THROWS_AS(annulus_indicator(pspace, 0.5, 0.1), InvalidArgument);
        CHECK_THROWS_AS(annulus_indicator(ball3, 0.1, 0.5), InvalidArgument);
    }

    TEST_CASE("power profile") {
        const auto u = power_profile(ball3, 1.3);
        const auto& red = ball3.reduction();
        CHECK(u.value(red, 0.5, 2.0) == Approx(std::pow(0.5, 1.3)));
        CHECK(u.jumps(red, 2.0).empty());
        CHECK_THROWS_AS(power_profile(ball3, 0.0), InvalidArgument);
        const auto v = power_profile(ball3, 1.1);
        CHECK(v.value(red, 0.2, 3.0) == Approx(std::pow(0.8, 1.1)));
    }

    TEST_CASE("ball shell indicator") {
        const auto& red = ball3.reduction();
        const auto u = ball_shell_indicator(ball3, 0.2);
        const auto j = u.jumps(red, 2.5);
        REQUIRE(j.size() == 1);
        CHECK(j[0].t == Approx(0.8));
        CHECK(red.weight(j[0].t) == Approx(0.64));
        const auto v = ball_shell_indicator(ball3, 1e-5);
        CHECK(v.jumps(red, 2.5)[0].t == Approx(0.99999));
        // The stored distance survives where R - delta rounds to R.
        const auto w = ball_shell_indicator(ball3, 1e-40);
        CHECK(w.distance_at(red, w.pieces().back().hi) == 1e-40);
        CHECK_THROWS_AS(ball_shell_indicator(ball3, 1.0), InvalidArgument);
        CHECK_THROWS_AS(ball_shell_indicator(strip3, 0.1), InvalidArgument);
    }

    TEST_CASE("strip slab scaling law") {
        const auto cone = cone_masses(3);
        CHECK(cone.K1 / cone.M1 == Approx(3.0));
        const auto u = strip_slab_profile(strip3, 0.1, 0.5, 0.25);
        CHECK(u.kappa() == Approx(0.75));
        CHECK(u.K_eff() / u.M_eff() == Approx(3.0 * 0.25));
        CHECK(u.longitudinal().jumps(strip3.reduction(), 2.0).size() == 2);
        CHECK_THROWS_AS(strip_slab_profile(strip3, 0.1, 0.05, 1.0), InvalidArgument);
        CHECK_THROWS_AS(strip_slab_profile(strip3, 0.1, 1.5, 1.0), InvalidArgument);
    }

    TEST_CASE("cheeger concentric") {
        const auto& red = ball3.reduction();
        const auto full = cheeger_concentric(ball3, 1.0);
        for (const auto& j : full.jumps(red, 2.0)) CHECK(j.magnitude == Approx(0.0));
        const auto half = cheeger_concentric(ball3, 0.5);
        const auto j = half.jumps(red, 2.0);
        REQUIRE(j.size() == 1);
        CHECK(j[0].magnitude == Approx(0.5));
        CHECK_THROWS_AS(cheeger_concentric(ball3, 1.5), InvalidArgument);
    }

    TEST_CASE("radial bump") {
        const auto& red = ball3.reduction();
        const auto u = radial_bump(ball3, 0.5, 0.1);
        CHECK(u.jumps(red, 2.0).empty());
        CHECK(u.value(red, 0.5, 2.0) == 1.0);
        CHECK(u.value(red, 0.4, 2.0) == Approx(0.0));
        CHECK(u.value(red, 0.65, 2.0) == 0.0);
        CHECK(u.value(red, 0.45, 2.0) > 0.0);
        CHECK_NOTHROW(radial_bump(ann, 1.011, 0.01));
        CHECK_THROWS_AS(radial_bump(ann, 2.0, 0.1), InvalidArgument);
        CHECK_THROWS_AS(radial_bump(ball3, 0.95, 0.1), InvalidArgument);
    }

    TEST_CASE("jump magnitudes are one-sided differences") {
        const auto& red = ball3.reduction();
        const auto u = cheeger_concentric(ball3, 0.3);
        for (const auto& j : u.jumps(red, 3.0)) {
            CHECK(j.magnitude == Approx(std::abs(u.right_limit(red, j.t, 3.0) - u.left_limit(red, j.t, 3.0))));
            CHECK(j.left >= 0.0);
            CHECK(j.right >= 0.0);
        }
    }
}
