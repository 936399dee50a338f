#include <doctest.h>

#include <cmath>

#include "hardylab/constants.hpp"
#include "hardylab/errors.hpp"
#include "hardylab/profiles.hpp"

using namespace hardylab;
using namespace hardylab::constants;
using namespace hardylab::geometry;
using namespace hardylab::profiles;
using namespace hardylab::functionals;
using doctest::Approx;

namespace {

ConstantParams with_s(double s) {
    ConstantParams p;
    p.s = s;
    return p;
}

}  // namespace

TEST_SUITE("constants") {
    TEST_CASE("predicted constants") {
        const auto ps = make_domain(DomainSpec::punctured_space(3));
        const auto ann = make_domain(DomainSpec::annulus(3, 1.0, 3.0));
        const auto ball2 = make_domain(DomainSpec::ball(3, 2.0));
        CHECK(predicted_constant("2.4", ps, with_s(4.0)).value == 1.0);
        CHECK(predicted_constant("B1", ball2, {}).value == 1.0);
        CHECK(predicted_constant("2.17", ann, with_s(3.0)).value == Approx(1.0));
        CHECK(predicted_constant("2.13", ann, with_s(3.0)).text() == "1");
        const auto b = predicted_constant("B1", ann, {});
        CHECK(b.is_bound());
        CHECK(b.lower == Approx(-2.0));
        CHECK(b.upper == Approx(0.4));
        CHECK(b.text().find("..") != std::string::npos);
        CHECK_THROWS_AS(predicted_constant("2.9", ann, with_s(3.0)), HypothesisViolation);
        CHECK_THROWS_AS(predicted_constant("2.4", ps, with_s(2.0)), HypothesisViolation);
        CHECK_THROWS_AS(predicted_constant("nope", ps, with_s(4.0)), InvalidArgument);
        ConstantParams k2 = with_s(3.5);
        k2.k = 2;
        CHECK(predicted_constant("5.2", ball2, k2).value == Approx(0.5));
    }

    TEST_CASE("table consistency") {
        for (double s : {2.5, 4.0}) {
            const auto e = interpolation_endpoints_check(s, 3);
            CHECK(e.general == Approx(s - 3));
            CHECK(e.convex == Approx(s - 1));
        }
        CHECK(interpolation_constant(4.0, 3, 1.0, 1.0) == Approx(2.0));
        const auto ball = make_domain(DomainSpec::ball(3, 1.0));
        const auto bb = b1_bounds(ball);
        ConstantParams k1 = with_s(3.5);
        CHECK(bb.lower == bb.upper);
        CHECK(bb.lower == predicted_constant("5.2", ball, k1).value);
        CHECK(predicted_constant("2.13", ball, with_s(2.5)).value == predicted_constant("2.9", ball, with_s(2.5)).value);
    }

    TEST_CASE("b1 bounds") {
        const auto bb = b1_bounds(make_domain(DomainSpec::ball(3, 1.0)));
        CHECK(bb.lower == 2.0);
        CHECK(bb.upper == 2.0);
        const auto bs = b1_bounds(make_domain(DomainSpec::strip(3, 1.0)));
        CHECK(bs.lower == 0.0);
        CHECK(bs.upper == 0.0);
        const auto ba = b1_bounds(make_domain(DomainSpec::annulus(3, 1.0, 3.0)));
        CHECK(ba.lower == Approx(-2.0));
        CHECK(ba.upper == Approx(0.4));
        CHECK_THROWS_AS(b1_bounds(make_domain(DomainSpec::punctured_space(3))), HypothesisViolation);
    }

    TEST_CASE("cheeger estimates") {
        const auto c3 = cheeger_estimate(make_domain(DomainSpec::ball(3, 1.0)));
        CHECK(c3.h_value == 3.0);
        CHECK(c3.minimizer == 1.0);
        CHECK(c3.bound_ok);
        CHECK(c3.isoperimetric_ok);
        const auto c2 = cheeger_estimate(make_domain(DomainSpec::ball(2, 0.5)));
        CHECK(c2.h_value == 4.0);
        CHECK(c2.bound_ok);
        for (int n : {2, 3, 4, 7}) CHECK(cheeger_estimate(make_domain(DomainSpec::ball(n, 2.0))).h_value * 2.0 == n);
    }

    TEST_CASE("geometric ladder") {
        const auto l = geometric_ladder(1e-1, 1e-6, 6);
        REQUIRE(l.size() == 6);
        for (int i = 0; i < 6; ++i) CHECK(l[i] == std::pow(10.0, -(i + 1)));
        CHECK(geometric_ladder(2.0, 2.0, 1).size() == 1);
        CHECK_THROWS_AS(geometric_ladder(0.0, 1.0, 3), InvalidArgument);
    }

    TEST_CASE("richardson applies only to clean power laws") {
        std::vector<double> p{1e-1, 1e-2, 1e-3, 1e-4}, v;
        for (double x : p) v.push_back(3.0 + 2.0 * x);
        const auto ex = richardson_limit(p, v);
        CHECK(ex.applied);
        CHECK(ex.limit == Approx(3.0).epsilon(1e-12));
        CHECK(ex.order == Approx(1.0).epsilon(1e-9));
        std::vector<double> noisy{1.0, 0.5, 0.7, 0.2};
        const auto none = richardson_limit(p, noisy);
        CHECK_FALSE(none.applied);
        CHECK(none.limit == 0.2);
        CHECK_FALSE(richardson_limit({1e-1, 1e-2}, {1.0, 2.0}).applied);
        CHECK(fit_power_exponent(p, {0.1, 0.01, 0.001, 1e-4}) == Approx(1.0));
    }

    TEST_CASE("convergence studies") {
        const auto ps = make_domain(DomainSpec::punctured_space(3));
        StudySpec spec;
        spec.ladder = geometric_ladder(1e-1, 1e-6, 6);
        spec.prediction = 1.0;
        spec.tolerance = 1e-4;
        const auto r = convergence_study(
            spec, [&](double d) { return ratio_plain_report(ps, annulus_indicator(ps, d, 1.0), 4.0); });
        CHECK(r.pass);
        CHECK(r.strictly_decreasing);
        CHECK(r.ladder.size() == 6);
        CHECK(r.ladder.front().parameter == 1e-1);

        const auto ball = make_domain(DomainSpec::ball(3, 1.0));
        spec.ladder = geometric_ladder(1e-4, 1e-8, 5);
        spec.prediction = 2.0;
        spec.tolerance = 1e-3;
        CHECK(convergence_study(spec, [&](double d) {
                  return remainder_ratio_Im_report(ball, ball_shell_indicator(ball, d), 2.5, 0, ImDenominator::Power,
                                                   1.5);
              }).pass);

        const auto strip = make_domain(DomainSpec::strip(3, 1.0));
        StudySpec dz;
        dz.ladder = {1e-4, 1e-8, 1e-16, 1e-32};
        dz.mode = StudyMode::DecreasingToZero;
        dz.threshold = 0.6;
        CHECK(convergence_study(dz, [&](double e) {
                  return quotient_Qgamma_report(strip, strip_slab_profile(strip, e, 1.0, std::pow(e, 1.5)), 3.0, 1.0,
                                                1.0);
              }).pass);

        StudySpec bad;
        bad.ladder = {1e-2, 1e-1};
        CHECK_THROWS_AS(convergence_study(bad, [](double) { return EvaluationReport{}; }), InvalidArgument);
    }

    TEST_CASE("validity mode checks every ladder point") {
        const auto ps = make_domain(DomainSpec::punctured_space(3));
        StudySpec spec;
        spec.ladder = geometric_ladder(1e-1, 1e-4, 4);
        spec.mode = StudyMode::Validity;
        spec.prediction = 1.0;
        spec.tolerance = 1e-8;
        auto f = [&](double d) { return ratio_plain_report(ps, annulus_indicator(ps, d, 1.0), 4.0); };
        CHECK(convergence_study(spec, f).pass);
        spec.prediction = 1.1;
        CHECK_FALSE(convergence_study(spec, f).pass);
    }

    TEST_CASE("serial and parallel studies agree bit for bit") {
        const auto ball = make_domain(DomainSpec::ball(3, 1.0));
        StudySpec spec;
        spec.ladder = geometric_ladder(1e-2, 1e-9, 8);
        spec.prediction = 2.0;
        auto f = [&](double d) {
            return remainder_ratio_Im_report(ball, ball_shell_indicator(ball, d), 3.5, 1, ImDenominator::Power, 1.5,
                                             {1e-10, false});
        };
        spec.parallel = true;
        const auto a = convergence_study(spec, f);
        spec.parallel = false;
        const auto b = convergence_study(spec, f);
        REQUIRE(a.ladder.size() == b.ladder.size());
        for (std::size_t i = 0; i < a.ladder.size(); ++i) {
            CHECK(a.ladder[i].value == b.ladder[i].value);
            CHECK(a.ladder[i].error_estimate == b.ladder[i].error_estimate);
        }
        CHECK(a.extrapolated_limit == b.extrapolated_limit);
    }
}
