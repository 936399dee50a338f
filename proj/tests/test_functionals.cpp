#include <doctest.h>

#include <cmath>

#include "hardylab/errors.hpp"
#include "hardylab/functionals.hpp"
#include "hardylab/quadrature.hpp"

using namespace hardylab;
using namespace hardylab::geometry;
using namespace hardylab::profiles;
using namespace hardylab::functionals;
using doctest::Approx;

namespace {

const Domain ball3 = make_domain(DomainSpec::ball(3, 1.0));
const Domain strip3 = make_domain(DomainSpec::strip(3, 1.0));
const Domain ann = make_domain(DomainSpec::annulus(3, 1.0, 3.0));
const Domain pspace = make_domain(DomainSpec::punctured_space(3));

bool close(double a, double b, double rel) { return std::abs(a - b) <= rel * std::abs(b); }

EvalOptions quadrature_only() {
    EvalOptions o;
    o.fast_paths = false;
    return o;
}

}  // namespace

TEST_SUITE("functionals") {
    TEST_CASE("x_log") {
        CHECK(x_log(1.0, 1.0) == 1.0);
        CHECK(x_log(std::exp(-1.0), 1.0) == Approx(0.5));
        CHECK(x_log(std::exp(-1.0), 2.0) == Approx(0.25));
        CHECK(x_log(1e-300, 1.0) < 2e-3);
        double prev = 0.0;
        for (double t : {1e-12, 1e-6, 0.01, 0.3, 0.9, 1.0}) {
            CHECK(x_log(t, 1.5) > prev);
            CHECK(x_log(t, 1.2) >= x_log(t, 2.5));
            prev = x_log(t, 1.5);
        }
        CHECK_THROWS_AS(x_log(1.5, 1.0), InvalidArgument);
        CHECK(x_chain_rule_residual(0.5, 1.7) <= 1e-8);
    }

    TEST_CASE("ratio_plain closed forms") {
        // (delta^-1 + 1) / (delta^-1 - 1) for n = 3, s = 4, eta = 1.
        CHECK(close(ratio_plain(pspace, annulus_indicator(pspace, 0.1, 1.0), 4.0), 11.0 / 9.0, 1e-12));
        const double v = ratio_plain(pspace, annulus_indicator(pspace, 1e-6, 1.0), 4.0);
        CHECK(close(v, (1 + 1e-6) / (1 - 1e-6), 1e-12));
        CHECK(std::abs(v - 1.0) < 1e-5);
        CHECK(close(ratio_plain(ball3, power_profile(ball3, 1.3), 2.0), 1.3, 1e-10));
        CHECK(close(ratio_plain(ball3, power_profile(ball3, 1.3), 2.0, quadrature_only()), 1.3, 1e-8));
    }

    TEST_CASE("fast paths agree with quadrature") {
        const auto u = ball_shell_indicator(ball3, 1e-4);
        CHECK(close(quotient_Qbeta(ball3, u, 2.5, 1.5), quotient_Qbeta(ball3, u, 2.5, 1.5, quadrature_only()), 1e-8));
        CHECK(close(remainder_ratio_Im(ball3, u, 3.5, 1, ImDenominator::Power, 1.5),
                    remainder_ratio_Im(ball3, u, 3.5, 1, ImDenominator::Power, 1.5, quadrature_only()), 1e-8));
        const auto w = annulus_indicator(pspace, 1e-3, 1.0);
        CHECK(close(ratio_plain(pspace, w, 4.0), ratio_plain(pspace, w, 4.0, quadrature_only()), 1e-8));
    }

    TEST_CASE("Qbeta on the ball shell") {
        // [G - (s-1)H] reduces to 2 int x^(1-s)(1-x) and the denominator to
        // int x^(beta-s)(1-x)^2 over (delta, 1).
        const double delta = 1e-4, s = 2.5, beta = 0.5;
        auto I = [&](double a) {
            return a == -1.0 ? -std::log(delta) : (1.0 - std::pow(delta, a + 1)) / (a + 1);
        };
        const double num = 2.0 * (I(1 - s) - I(2 - s));
        const double den = I(beta - s) - 2.0 * I(beta - s + 1) + I(beta - s + 2);
        CHECK(close(quotient_Qbeta(ball3, ball_shell_indicator(ball3, delta), s, beta), num / den, 1e-10));
        CHECK_THROWS_AS(quotient_Qbeta(ball3, ball_shell_indicator(ball3, delta), 2.5, 1.8), InvalidArgument);
        CHECK_THROWS_AS(quotient_Qbeta(ball3, ball_shell_indicator(ball3, delta), 1.0, 0.5), InvalidArgument);
    }

    TEST_CASE("Qbeta of the concentric ball is the Cheeger ratio") {
        for (double rho : {0.2, 0.5, 1.0}) {
            CHECK(close(quotient_Qbeta(ball3, cheeger_concentric(ball3, rho), 2.5, 1.0), 3.0 / rho, 1e-10));
        }
    }

    TEST_CASE("Im ratios on the ball shell") {
        const auto u = ball_shell_indicator(ball3, 1e-4);
        // 2 * 196.02 / (196.02 + 2/3 - 4 * 0.99 + ...) by the closed forms.
        const double q = 1e-2;
        const double num = 2.0 * (2.0 * (1 / q - 1) - 2.0 * (1 - q));
        const double den = 2.0 * (1 / q - 1) - 4.0 * (1 - q) + (2.0 / 3.0) * (1 - 1e-6);
        const double v = remainder_ratio_Im(ball3, u, 2.5, 0, ImDenominator::Power, 1.5);
        CHECK(close(v, num / den, 1e-10));
        CHECK(v == Approx(2.014).epsilon(1e-3));
        const double w = remainder_ratio_Im(ball3, u, 2.5, 0, ImDenominator::Power, 1.8);
        CHECK(w == Approx(0.198).epsilon(1e-2));
        CHECK(remainder_ratio_Im(ball3, ball_shell_indicator(ball3, 1e-6), 2.5, 0, ImDenominator::Power, 1.8) < w);
        CHECK(close(remainder_ratio_Im(ball3, ball_shell_indicator(ball3, 1e-8), 3.5, 1, ImDenominator::Power, 1.5),
                    2.0, 1e-3));
        CHECK_THROWS_AS(remainder_ratio_Im(strip3, strip_slab_profile(strip3, 0.1, 0.5, 1.0).longitudinal(), 2.5, 0,
                                           ImDenominator::Power, 1.5),
                        HypothesisViolation);
        CHECK_THROWS_AS(remainder_ratio_Im(ball3, u, 2.5, 2, ImDenominator::Power, 1.5), InvalidArgument);
    }

    TEST_CASE("Im with the X weight") {
        // N = int x^-0.5 (1-x) and D = int x^-1 X(x) (1-x)^2 over (delta, 1);
        // D splits into a log term and two regular integrals in u = -log x.
        for (double delta : {1e-10, 1e-40}) {
            const double N = 2.0 * (1 - std::sqrt(delta)) - (2.0 / 3.0) * (1 - std::pow(delta, 1.5));
            const double L = -std::log(delta);
            auto reg = [&](double k) {
                return quadrature::integrate([k](double u) { return std::exp(-k * u) / (1 + u); }, 0, L, 1e-13).value;
            };
            const double D = std::log(1 + L) - 2 * reg(1) + reg(2);
            const double v = remainder_ratio_Im(ball3, ball_shell_indicator(ball3, delta), 2.5, 1,
                                                ImDenominator::XWeight);
            CHECK(close(v, 2 * N / D, 1e-8));
        }
    }

    TEST_CASE("Qgamma on the strip slab") {
        // [2 + 3 dt (1/eps - 1)] / log(1 - log eps) for s = 3, gamma = 1, eta = R = 1.
        for (double eps : {1e-4, 1e-12}) {
            const double dt = std::pow(eps, 1.5);
            const double closed = (2.0 + 3.0 * dt * (1 / eps - 1)) / std::log(1 - std::log(eps));
            const double v = quotient_Qgamma(strip3, strip_slab_profile(strip3, eps, 1.0, dt), 3.0, 1.0, 1.0);
            CHECK(close(v, closed, 1e-8));
        }
        CHECK(quotient_Qgamma(strip3, strip_slab_profile(strip3, 1e-12, 1.0, 1e-18), 3.0, 1.0, 1.0) ==
              Approx(0.6).epsilon(0.01));
        const TestProfile zero("zero", "", {});
        CHECK_THROWS_AS(quotient_Qgamma(ball3, zero, 2.0, 2.0), ZeroDenominator);
    }

    TEST_CASE("Qgamma of powers stays above gamma - 1") {
        for (double eps : {0.1, 0.01, 1e-3}) {
            CHECK(quotient_Qgamma(ball3, power_profile(ball3, 1.0 + eps), 2.0, 2.0) >= 1.0);
        }
    }

    TEST_CASE("gradient quotient") {
        // (5 - 3 eps) / (eps^-1/2 + 1 + 6 eps (1 - eps^1/2)) for s = 3, alpha = 1/2, dt = eps.
        const double eps = 1e-6;
        const double closed = (5 - 3 * eps) / (1 / std::sqrt(eps) + 1 + 6 * eps * (1 - std::sqrt(eps)));
        const double v = gradient_quotient(strip3, strip_slab_profile(strip3, eps, 1.0, eps), 3.0, 2.0, 0.5);
        CHECK(close(v, closed, 1e-8));
        CHECK(v == Approx(5.0 / 1001.0).epsilon(1e-3));
        for (double d : {1e-2, 1e-5}) {
            CHECK(gradient_quotient(pspace, annulus_indicator(pspace, d, 0.5), 4.0, 1.0, 2.0) == Approx(2.0));
        }
        CHECK_THROWS_AS(gradient_quotient(pspace, annulus_indicator(pspace, 0.1, 0.5), 4.0, 1.0, -1.0),
                        InvalidArgument);
    }

    TEST_CASE("inequality gaps") {
        GapParams gp;
        gp.s = 2.0;
        const auto eq = inequality_gap_report(ball3, power_profile(ball3, 1.3), "2.3-equality", gp);
        CHECK(std::abs(eq.gap) <= 1e-8 * eq.gradient_term);
        CHECK(eq.pass == "true");
        gp.s = 3.0;
        const auto a = inequality_gap_report(ann, radial_bump(ann, 1.5, 0.2), "2.13", gp);
        CHECK(a.gap >= 0.0);
        CHECK(a.prediction == "1");
        GapParams g5;
        g5.s = 3.5;
        g5.gamma = 1.5;
        CHECK(inequality_gap(ball3, radial_bump(ball3, 0.5, 0.2), "5.2", g5) >= 0.0);
        GapParams g9;
        g9.s = 2.0;
        CHECK_THROWS_AS(inequality_gap(ann, radial_bump(ann, 1.5, 0.2), "2.9", g9), HypothesisViolation);
        CHECK_THROWS_AS(inequality_gap(ball3, radial_bump(ball3, 0.5, 0.2), "9.9", g9), InvalidArgument);
    }

    TEST_CASE("validity sweep over a basket of profiles") {
        struct Case {
            const Domain* domain;
            std::string id;
            GapParams params;
        };
        auto gp = [](double s, double gamma) {
            GapParams g;
            g.s = s;
            g.gamma = gamma;
            return g;
        };
        const std::vector<Case> cases{{&ball3, "2.3", gp(2.5, kNaN)},    {&ball3, "2.9", gp(2.5, kNaN)},
                                      {&ball3, "2.10", gp(2.5, 2.0)},    {&ball3, "2.11", gp(2.5, kNaN)},
                                      {&ball3, "2.13", gp(2.5, kNaN)},   {&ball3, "5.3", gp(1.5, 2.0)},
                                      {&ball3, "1.4", gp(2.5, kNaN)},    {&strip3, "2.9", gp(2.0, kNaN)},
                                      {&ann, "2.13", gp(4.0, kNaN)},     {&ann, "2.3", gp(3.0, kNaN)}};
        for (const auto& c : cases) {
            const auto& red = c.domain->reduction();
            std::vector<TestProfile> basket;
            const double lo = red.t_min(), hi = red.t_max();
            for (int k = 1; k <= 8; ++k) {
                const double center = lo + (hi - lo) * (k - 0.5) / 8.0;
                const double width = 0.4 * (hi - lo) / 8.0;
                bool crosses = false;
                for (double r : red.ridge_points()) crosses = crosses || std::abs(center - r) <= width;
                if (!crosses && red.dist(center) > width) basket.push_back(radial_bump(*c.domain, center, width));
            }
            for (double e : {0.2, 0.5, 1.5}) basket.push_back(power_profile(*c.domain, c.params.s - 1 + e));
            if (c.domain == &ball3) {
                for (double d : {0.3, 0.05}) basket.push_back(ball_shell_indicator(ball3, d));
            }
            for (const auto& u : basket) {
                CAPTURE(c.id);
                CAPTURE(u.family_params());
                const auto r = inequality_gap_report(*c.domain, u, c.id, c.params);
                CHECK(r.gap >= -1e-8 * std::abs(r.gradient_term));
            }
        }
    }

    TEST_CASE("divergence identities") {
        CHECK(div_T_residual(ball3, "thm2.11", {2.5, 2.0, kNaN}, 0.5) <= 1e-6);
        CHECK(div_T_residual(pspace, "thm2.7", {4.0, kNaN, 1.0}, 0.3) <= 1e-6);
        const auto pair = div_T(ball3, "sec5", {2.5, 2.0, kNaN}, 0.4);
        CHECK(pair.residual <= 1e-6);
        CHECK_THROWS_AS(div_T_residual(ball3, "thm9", {2.5, 2.0, kNaN}, 0.5), InvalidArgument);
        CHECK_THROWS_AS(div_T_residual(strip3, "sec5", {2.5, 2.0, kNaN}, 0.5), InvalidArgument);
        const auto grid = divergence_grid(ann, {2.5, kNaN, kNaN}, 64);
        CHECK(grid.size() == 64);
        for (double t : grid) CHECK(std::abs(t - 2.0) > 1e-6);
    }

    TEST_CASE("meanlap limits") {
        CHECK(meanlap_ratio(ball3, radial_bump(ball3, 1 - 2e-3, 1e-3)) == Approx(2.0).epsilon(0.02));
        CHECK(meanlap_ratio(ann, radial_bump(ann, 1 + 2e-3, 1e-3)) == Approx(-2.0).epsilon(0.02));
        CHECK(meanlap_ratio(strip3, radial_bump(strip3, 0.5, 0.2)) == 0.0);
    }

    TEST_CASE("L^p ratio") {
        CHECK(close(lp_ratio(ball3, 3.0, 2.0, 0.1), 1.05, 1e-10));
        CHECK(close(lp_ratio(ball3, 3.0, 2.0, 0.1, quadrature_only()), 1.05, 1e-6));
        CHECK(lp_ratio_closed_form(3.0, 2.0, 0.1) == Approx(1.05));
        for (double s : {1.5, 3.0}) CHECK(close(lp_ratio(ball3, s, 1.0, 0.2), 1.0, 1e-10));
        CHECK(lp_ratio(ball3, 3.0, 2.0, 1e-6) == Approx(1.0).epsilon(1e-5));
    }

    TEST_CASE("reports carry the evaluated pieces") {
        const auto r = ratio_plain_report(pspace, annulus_indicator(pspace, 0.1, 1.0), 4.0);
        CHECK(r.functional == "ratio");
        CHECK(r.family == "annulus-indicator");
        CHECK(r.gradient_term == Approx(11.0));
        CHECK(r.hardy_term == Approx(9.0));
        CHECK(r.value == Approx(11.0 / 9.0));
        CHECK(r.gradient_jumps == Approx(11.0));
    }
}
