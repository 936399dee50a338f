#include "hardylab/acceptance.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <cstdio>
#include <random>
#include <sstream>

#include "hardylab/constants.hpp"
#include "hardylab/errors.hpp"
#include "hardylab/functionals.hpp"
#include "hardylab/parallel.hpp"
#include "hardylab/profiles.hpp"

namespace hardylab::acceptance {

using namespace geometry;
using namespace profiles;
using namespace functionals;
using constants::StudyMode;
using constants::StudyReport;
using constants::StudySpec;

namespace {

std::string num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

class Checks {
public:
    void add(bool ok, const std::string& text) {
        pass_ = pass_ && ok;
        if (out_.tellp() > 0) out_ << "; ";
        out_ << text;
        if (!ok) out_ << " [FAIL]";
    }
    bool pass() const { return pass_; }
    std::string detail() const { return out_.str(); }

private:
    bool pass_ = true;
    std::ostringstream out_;
};

std::string values_text(const StudyReport& r) {
    std::string s = "[";
    for (std::size_t i = 0; i < r.ladder.size(); ++i) {
        if (i) s += ", ";
        s += num(r.ladder[i].value);
    }
    return s + "]";
}

StudyReport run_study(std::vector<double> ladder, StudyMode mode, double prediction, double tolerance,
                      double threshold, bool parallel, const constants::Evaluator& f) {
    StudySpec spec;
    spec.ladder = std::move(ladder);
    spec.mode = mode;
    spec.prediction = prediction;
    spec.tolerance = tolerance;
    spec.threshold = threshold;
    spec.parallel = parallel;
    return constants::convergence_study(spec, f);
}

std::vector<double> decades(int from, int to) {
    return constants::geometric_ladder(std::pow(10.0, from), std::pow(10.0, to), from - to + 1);
}

double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

double X(double t) { return 1.0 / (1.0 - std::log(t)); }

// 1. Punctured space: the annulus indicator ratio is (1 + delta)/(1 - delta).
CriterionResult c1(bool) {
    Checks c;
    const auto ps = make_domain(DomainSpec::punctured_space(3));
    EvalOptions slow;
    slow.fast_paths = false;
    double worst_quad = 0.0, worst_fast = 0.0;
    for (double delta : {1e-1, 1e-3, 1e-6}) {
        const auto u = annulus_indicator(ps, delta, 1.0);
        const double closed = (1.0 + delta) / (1.0 - delta);
        worst_quad = std::max(worst_quad, rel(ratio_plain(ps, u, 4.0, slow), closed));
        worst_fast = std::max(worst_fast, rel(ratio_plain(ps, u, 4.0), closed));
    }
    const double v = ratio_plain(ps, annulus_indicator(ps, 1e-6, 1.0), 4.0);
    c.add(std::abs(v - 1.0) <= 1e-4, "ratio(1e-6)=" + num(v) + " vs s-n=1");
    c.add(worst_quad <= 1e-8, "quadrature vs closed form rel " + num(worst_quad));
    c.add(worst_fast <= 1e-8, "closed-form path rel " + num(worst_fast));
    return {1, "punctured-space sharpness", c.pass(), c.detail()};
}

// 2. gamma = 1 on the punctured ball: the log-weighted quotient decays.
CriterionResult c2(bool parallel) {
    Checks c;
    const auto pb = make_domain(DomainSpec::punctured_ball(3, 2.0));
    const double R = pb.inradius();
    auto f = [&](double delta) {
        return quotient_Qgamma_n_report(pb, annulus_indicator(pb, delta, 1.0), 3.0, 1.0);
    };
    const auto st = run_study({1e-3, 1e-9, 1e-27}, StudyMode::DecreasingToZero, kNaN, 0.0, 0.7, parallel, f);
    double worst = 0.0;
    for (const auto& p : st.ladder) {
        const double closed = 2.0 / std::log(X(1.0 / R) / X(p.parameter / R));
        worst = std::max(worst, rel(p.value, closed));
    }
    c.add(st.strictly_decreasing, "values " + values_text(st));
    c.add(st.ladder[1].value <= 0.7, "value(1e-9)=" + num(st.ladder[1].value) + " <= 0.7");
    c.add(worst <= 1e-8, "closed form rel " + num(worst));
    return {2, "gamma=1 failure on the punctured ball", c.pass(), c.detail()};
}

// 3. Gradient remainder on the punctured space.
CriterionResult c3(bool parallel) {
    Checks c;
    const auto ps = make_domain(DomainSpec::punctured_space(3));
    auto f = [&](double alpha) {
        return [&ps, alpha](double delta) {
            return gradient_quotient_report(ps, annulus_indicator(ps, delta, 0.5), 4.0, 1.0, alpha);
        };
    };
    const auto st = run_study(decades(-2, -8), StudyMode::Limit, 2.0, 1e-6, kNaN, parallel, f(2.0));
    double worst = 0.0;
    for (const auto& p : st.ladder) worst = std::max(worst, std::abs(p.value - 2.0));
    c.add(worst <= 1e-6 && st.pass, "alpha=2 max |Q-2| " + num(worst));
    const auto st2 = run_study(decades(-2, -8), StudyMode::DecreasingToZero, kNaN, 0.0, 1e-2, parallel, f(2.5));
    c.add(st2.pass, "alpha=2.5 values " + values_text(st2));
    return {3, "gradient remainder on the punctured space", c.pass(), c.detail()};
}

// 4. Equality in the basic identity for d^(s-1+eps).
CriterionResult c4(bool) {
    Checks c;
    const auto ball = make_domain(DomainSpec::ball(3, 1.0));
    const auto strip = make_domain(DomainSpec::strip(3, 1.0));
    double worst = 0.0;
    bool all = true;
    for (const Domain* d : {&ball, &strip}) {
        for (double s : {1.5, 2.0, 3.0}) {
            for (double eps : {0.1, 0.3}) {
                GapParams gp;
                gp.s = s;
                const auto r = inequality_gap_report(*d, power_profile(*d, s - 1.0 + eps), "2.3-equality", gp);
                worst = std::max(worst, std::abs(r.gap) / std::abs(r.gradient_term));
                all = all && r.pass == "true";
            }
        }
    }
    c.add(all && worst <= 1e-8, "max |gap|/LHS " + num(worst));
    return {4, "equality certificate on ball and strip", c.pass(), c.detail()};
}

// 5. Remainder series on the ball.
CriterionResult c5(bool parallel) {
    Checks c;
    const auto ball = make_domain(DomainSpec::ball(3, 1.0));
    auto im = [&](double s, int m, ImDenominator den, double beta) {
        return [&ball, s, m, den, beta](double delta) {
            return remainder_ratio_Im_report(ball, ball_shell_indicator(ball, delta), s, m, den, beta);
        };
    };
    // (a) closed form: 2 * int x^-1.5 (1-x) / int x^-1.5 (1-x)^2 over (delta, 1).
    const double delta = 1e-4, q = std::sqrt(delta);
    const double num_a = 2.0 * (2.0 * (1.0 / q - 1.0) - 2.0 * (1.0 - q));
    const double den_a = 2.0 * (1.0 / q - 1.0) - 4.0 * (1.0 - q) + (2.0 / 3.0) * (1.0 - delta * q);
    const double va = im(2.5, 0, ImDenominator::Power, 1.5)(delta).value;
    c.add(std::abs(va - 2.0 * 196.02 / 194.69) <= 1e-3 && rel(va, num_a / den_a) <= 1e-8,
          "(a) value(1e-4)=" + num(va) + " closed form " + num(num_a / den_a));
    const auto sa = run_study(decades(-4, -8), StudyMode::Limit, 2.0, 1e-3, kNaN, parallel,
                              im(2.5, 0, ImDenominator::Power, 1.5));
    c.add(sa.pass, "(a) limit " + num(sa.extrapolated_limit));
    const auto sb = run_study(decades(-4, -8), StudyMode::Limit, 2.0, 1e-3, kNaN, parallel,
                              im(3.5, 1, ImDenominator::Power, 1.5));
    c.add(sb.pass, "(b) limit " + num(sb.extrapolated_limit));
    const auto sc = run_study(decades(-2, -10), StudyMode::DecreasingToZero, kNaN, 0.0, 0.05, parallel,
                              im(2.5, 0, ImDenominator::Power, 1.8));
    c.add(sc.pass, "(c) value(1e-10)=" + num(sc.ladder.back().value));
    const std::vector<double> ld{1e-10, 1e-20, 1e-40};
    auto bound = [](double d) { return 2.0 * (4.0 / 3.0 + 0.1) / std::log(1.0 - std::log(d)); };
    const auto sd = run_study(ld, StudyMode::DecreasingToZero, kNaN, 0.0, bound(ld.back()), parallel,
                              im(2.5, 1, ImDenominator::XWeight, kNaN));
    bool under = true;
    std::string bounds = "[";
    for (std::size_t i = 0; i < ld.size(); ++i) {
        under = under && sd.ladder[i].value <= bound(ld[i]);
        bounds += (i ? ", " : "") + num(bound(ld[i]));
    }
    c.add(sd.strictly_decreasing, "(d) values " + values_text(sd));
    c.add(under, "(d) bounds " + bounds + "]");
    return {5, "remainder chain on the ball", c.pass(), c.detail()};
}

// 6. Strip extremality of the gradient remainder.
CriterionResult c6(bool parallel) {
    Checks c;
    const auto strip = make_domain(DomainSpec::strip(3, 1.0));
    struct Case {
        double s;
        std::vector<double> ladder;
        double threshold;
        bool scaled;  // delta_t = eps^(s-2), else 1
    };
    const std::vector<Case> cases{{1.5, decades(-2, -8), 1e-3, false},
                                  {2.0, decades(-2, -10), 1e-2, false},
                                  {3.0, decades(-1, -4), 1e-2, true}};
    for (const auto& k : cases) {
        auto f = [&strip, k](double eps) {
            const double dt = k.scaled ? std::pow(eps, k.s - 2.0) : 1.0;
            return gradient_quotient_report(strip, strip_slab_profile(strip, eps, 1.0, dt), k.s, k.s - 1.0, 0.5);
        };
        const auto st = run_study(k.ladder, StudyMode::DecreasingToZero, kNaN, 0.0, k.threshold, parallel, f);
        c.add(st.pass, "s=" + num(k.s) + " final " + num(st.ladder.back().value) + " <= " + num(k.threshold) +
                           (st.strictly_decreasing ? "" : " (not decreasing)"));
    }
    return {6, "strip extremality", c.pass(), c.detail()};
}

// 7. gamma = 1 on the strip.
CriterionResult c7(bool parallel) {
    Checks c;
    const auto strip = make_domain(DomainSpec::strip(3, 1.0));
    const std::vector<double> ladder{1e-4, 1e-8, 1e-16, 1e-32};
    const double threshold = 2.2 / std::log(1.0 - std::log(1e-32)) + 0.05;
    auto f = [&](double eps) {
        return quotient_Qgamma_report(strip, strip_slab_profile(strip, eps, 1.0, std::pow(eps, 1.5)), 3.0, 1.0, 1.0);
    };
    const auto st = run_study(ladder, StudyMode::DecreasingToZero, kNaN, 0.0, threshold, parallel, f);
    c.add(st.pass, "values " + values_text(st) + " threshold " + num(threshold));
    return {7, "gamma=1 failure on the strip", c.pass(), c.detail()};
}

// 8. Q_beta decays like delta^(1-beta) for beta < 1.
CriterionResult c8(bool parallel) {
    Checks c;
    const auto ball = make_domain(DomainSpec::ball(3, 1.0));
    for (double beta : {0.5, 0.9}) {
        auto f = [&ball, beta](double delta) {
            return quotient_Qbeta_report(ball, ball_shell_indicator(ball, delta), 2.5, beta);
        };
        const auto st = run_study(decades(-2, -6), StudyMode::DecreasingToZero, kNaN, 0.0, geometry::kInf, parallel, f);
        std::vector<double> p, v;
        for (const auto& pt : st.ladder) {
            p.push_back(pt.parameter);
            v.push_back(pt.value);
        }
        const double k = constants::fit_power_exponent(p, v);
        c.add(rel(k, 1.0 - beta) <= 0.05, "beta=" + num(beta) + " exponent " + num(k));
    }
    return {8, "Q_beta decay for beta < 1", c.pass(), c.detail()};
}

// 9. B1 bounds, attained on the ball.
CriterionResult c9(bool parallel) {
    Checks c;
    const auto ball = make_domain(DomainSpec::ball(3, 1.0));
    const auto strip = make_domain(DomainSpec::strip(3, 1.0));
    const auto bb = constants::b1_bounds(ball);
    const auto bs = constants::b1_bounds(strip);
    c.add(bb.lower == 2.0 && bb.upper == 2.0, "ball (" + num(bb.lower) + ", " + num(bb.upper) + ")");
    c.add(bs.lower == 0.0 && bs.upper == 0.0, "strip (" + num(bs.lower) + ", " + num(bs.upper) + ")");
    auto f = [&](double delta) {
        return remainder_ratio_Im_report(ball, ball_shell_indicator(ball, delta), 2.5, 0, ImDenominator::Power, 1.5);
    };
    const auto st = run_study(decades(-4, -8), StudyMode::Limit, bb.lower, 1e-3, kNaN, parallel, f);
    c.add(st.pass, "beta=s-1 limit " + num(st.extrapolated_limit));
    return {9, "B1 bounds", c.pass(), c.detail()};
}

// 10. Cheeger constant of the ball.
CriterionResult c10(bool) {
    Checks c;
    bool exact = true, flags = true;
    double worst = 0.0;
    for (int n : {2, 3, 4, 7}) {
        for (double R : {1.0, 2.0}) {
            const auto ball = make_domain(DomainSpec::ball(n, R));
            const auto ch = constants::cheeger_estimate(ball);
            exact = exact && ch.h_value == n / R;
            flags = flags && ch.bound_ok && ch.isoperimetric_ok;
            for (double frac : {0.25, 0.5, 0.9}) {
                const double rho = frac * R;
                const double q = quotient_Qbeta(ball, cheeger_concentric(ball, rho), 2.5, 1.0);
                worst = std::max(worst, rel(q, n / rho));
            }
        }
    }
    c.add(exact, "h = n/R exactly");
    c.add(flags, "bound and isoperimetric checks");
    c.add(worst <= 1e-10, "Q1 vs n/rho rel " + num(worst));
    return {10, "Cheeger estimate", c.pass(), c.detail()};
}

// 11. Reach interpolation on the annulus.
CriterionResult c11(bool) {
    Checks c;
    const auto ann = make_domain(DomainSpec::annulus(3, 1.0, 3.0));
    std::vector<TestProfile> basket;
    for (double center : {1.1, 1.3, 1.5, 1.7, 2.2, 2.4, 2.6, 2.8}) {
        for (double width : {0.05, 0.09}) basket.push_back(radial_bump(ann, center, width));
    }
    double worst = geometry::kInf;
    int count = 0;
    for (double s : {2.5, 3.0, 4.0}) {
        std::vector<TestProfile> profiles = basket;
        for (double eps : {0.1, 0.3, 0.7, 1.5}) profiles.push_back(power_profile(ann, s - 1.0 + eps));
        GapParams gp;
        gp.s = s;
        for (const auto& u : profiles) {
            const auto r = inequality_gap_report(ann, u, "2.13", gp);
            worst = std::min(worst, r.gap / std::abs(r.gradient_term));
            ++count;
        }
    }
    c.add(worst >= -1e-8, std::to_string(count) + " gaps, min gap/LHS " + num(worst));
    constants::ConstantParams cp;
    cp.s = 3.0;
    const double k3 = constants::predicted_constant("2.13", ann, cp).value;
    c.add(std::abs(k3 - 1.0) <= 1e-15, "constant at s=3 " + num(k3));
    double res = 0.0;
    for (int i = 0; i < 64; ++i) {
        const double t = 1.0 + (i + 0.5) / 64.0;
        res = std::max(res, std::abs(reach_residual(ann, ann.point_at(t))));
    }
    c.add(res <= 1e-12, "inner-branch reach residual " + num(res));
    return {11, "reach interpolation on the annulus", c.pass(), c.detail()};
}

// 12. L^p ratio.
CriterionResult c12(bool parallel) {
    Checks c;
    const auto ball = make_domain(DomainSpec::ball(3, 1.0));
    EvalOptions slow;
    slow.fast_paths = false;
    struct Case {
        double p, s, eps;
    };
    for (const auto& k : {Case{2, 3, 0.1}, Case{3, 2.5, 0.05}}) {
        const double v = lp_ratio(ball, k.s, k.p, k.eps, slow);
        const double cf = lp_ratio_closed_form(k.s, k.p, k.eps);
        c.add(rel(v, cf) <= 1e-6, "p=" + num(k.p) + " quadrature " + num(v) + " closed " + num(cf));
        const double limit = std::pow((k.s - 1.0) / k.p, k.p - 1.0);
        auto f = [&ball, k](double eps) { return lp_ratio_report(ball, k.s, k.p, eps); };
        const auto st = run_study(decades(-1, -6), StudyMode::Limit, limit, 1e-3, kNaN, parallel, f);
        c.add(st.pass, "p=" + num(k.p) + " limit " + num(st.extrapolated_limit) + " vs " + num(limit));
    }
    return {12, "L^p ratio", c.pass(), c.detail()};
}

// 13. Divergence identities and the X chain rule.
CriterionResult c13(bool parallel) {
    Checks c;
    const auto pb = make_domain(DomainSpec::punctured_ball(3, 2.0));
    const auto ball = make_domain(DomainSpec::ball(3, 1.0));
    struct Field {
        std::string id;
        const Domain* domain;
        std::vector<FieldParams> samples;
    };
    const std::vector<Field> fields{
        {"thm2.5", &pb, {{3.0, 1.5, kNaN}, {4.0, 2.0, kNaN}, {5.5, 3.0, kNaN}}},
        {"thm2.7", &pb, {{3.5, kNaN, kNaN}, {4.0, kNaN, kNaN}, {6.0, kNaN, kNaN}}},
        {"thm2.11", &ball, {{1.5, 2.0, kNaN}, {2.5, 2.0, kNaN}, {4.0, 1.5, kNaN}}},
        {"thm2.13", &ball, {{1.5, kNaN, kNaN}, {2.5, kNaN, kNaN}, {4.0, kNaN, kNaN}}},
        {"sec5", &ball, {{1.5, 2.0, kNaN}, {2.5, 2.0, kNaN}, {3.5, 1.5, kNaN}}},
    };
    for (const auto& f : fields) {
        double worst = 0.0;
        for (const auto& params : f.samples) {
            const auto grid = divergence_grid(*f.domain, params, 64);
            auto at = [&](std::size_t i) { return div_T_residual(*f.domain, f.id, params, grid[i]); };
            const auto res = parallel ? parallel::omp_map<double>(grid.size(), at)
                                      : parallel::serial_map<double>(grid.size(), at);
            for (double r : res) worst = std::max(worst, r);
        }
        c.add(worst <= 1e-6, f.id + " " + num(worst));
    }
    double chain = 0.0;
    for (double gamma : {1.5, 2.0, 3.7}) {
        for (double t : {1e-8, 1e-4, 0.01, 0.1, 0.5, 0.9}) chain = std::max(chain, x_chain_rule_residual(t, gamma));
    }
    c.add(chain <= 1e-8, "X chain rule " + num(chain));
    return {13, "proof internals", c.pass(), c.detail()};
}

// 14. Geometry property suite.

struct Sampler {
    const Domain& domain;
    std::mt19937_64& rng;

    double extent() const {
        const auto& sp = domain.spec();
        switch (sp.kind) {
            case DomainKind::Ball:
            case DomainKind::PuncturedBall: return sp.radius;
            case DomainKind::Strip: return 2.0 * sp.radius;
            case DomainKind::Annulus: return sp.outer;
            case DomainKind::PuncturedSpace: return 3.0;
        }
        return 1.0;
    }

    std::vector<double> box_point() {
        std::uniform_real_distribution<double> u(-extent(), extent());
        std::vector<double> x(domain.dim());
        for (auto& v : x) v = u(rng);
        if (domain.kind() == DomainKind::Strip) x.back() = 0.5 * (x.back() + extent());
        return x;
    }

    /// Interior point at least `margin` from the boundary, ridge points and
    /// the origin of radial reductions.
    std::vector<double> interior(double margin) {
        const auto& red = domain.reduction();
        for (;;) {
            auto x = box_point();
            if (domain.distance(x) <= margin) continue;
            const double t = domain.reduced_coordinate(x);
            if (red.mode() == ReductionMode::Radial && t <= margin) continue;
            bool near_ridge = false;
            for (double r : red.ridge_points()) near_ridge = near_ridge || std::abs(t - r) <= margin;
            if (!near_ridge) return x;
        }
    }
};

std::vector<double> axis_step(std::vector<double> x, std::size_t i, double h) {
    x[i] += h;
    return x;
}

double grad_component(const Domain& d, const std::vector<double>& x, std::size_t i, double h) {
    auto cd = [&](double step) {
        return (d.distance(axis_step(x, i, step)) - d.distance(axis_step(x, i, -step))) / (2.0 * step);
    };
    return (4.0 * cd(h / 2.0) - cd(h)) / 3.0;
}

Eigen::MatrixXd central_hessian(const Domain& d, const std::vector<double>& x, double h) {
    const std::size_t n = x.size();
    Eigen::MatrixXd H(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            const auto pp = axis_step(axis_step(x, i, h), j, h);
            const auto pm = axis_step(axis_step(x, i, h), j, -h);
            const auto mp = axis_step(axis_step(x, i, -h), j, h);
            const auto mm = axis_step(axis_step(x, i, -h), j, -h);
            H(i, j) = (d.distance(pp) - d.distance(pm) - d.distance(mp) + d.distance(mm)) / (4.0 * h * h);
        }
    }
    return 0.5 * (H + H.transpose());
}

Eigen::MatrixXd fd_hessian(const Domain& d, const std::vector<double>& x, double h) {
    return (4.0 * central_hessian(d, x, h / 2.0) - central_hessian(d, x, h)) / 3.0;
}

// Coefficients (c0, c1, c2) of the least-squares quadratic through (t, y).
Eigen::Vector3d quadratic_fit(const std::vector<double>& t, const std::vector<double>& y) {
    Eigen::MatrixXd A(t.size(), 3);
    Eigen::VectorXd b(t.size());
    for (std::size_t i = 0; i < t.size(); ++i) {
        A(i, 0) = 1.0;
        A(i, 1) = t[i];
        A(i, 2) = t[i] * t[i];
        b(i) = y[i];
    }
    return A.colPivHouseholderQr().solve(b);
}

CriterionResult c14(bool) {
    Checks c;
    std::mt19937_64 rng(20240917);
    std::vector<Domain> all{make_domain(DomainSpec::ball(3, 1.0)), make_domain(DomainSpec::strip(3, 1.0)),
                            make_domain(DomainSpec::punctured_space(3)),
                            make_domain(DomainSpec::punctured_ball(3, 2.0)),
                            make_domain(DomainSpec::annulus(3, 1.0, 3.0))};
    const auto& ball = all[0];
    const auto& ann = all[4];

    double eik = 0.0, defA = geometry::kInf, defAt = geometry::kInf, lap = geometry::kInf, reach = geometry::kInf;
    double proj = 0.0;
    for (const auto& d : all) {
        Sampler smp{d, rng};
        for (int k = 0; k < 200; ++k) {
            const auto x = smp.interior(1e-3);
            double g2 = 0.0;
            for (std::size_t i = 0; i < x.size(); ++i) g2 += std::pow(grad_component(d, x, i, 1e-5), 2);
            eik = std::max(eik, std::abs(std::sqrt(g2) - 1.0));
            const auto xi = d.project_to_boundary(x);
            std::vector<double> diff(x.size());
            for (std::size_t i = 0; i < x.size(); ++i) diff[i] = x[i] - xi[i];
            proj = std::max({proj, std::abs(norm(diff) - d.distance(x)) / d.distance(x), d.distance(xi)});
            const double hmin = d.properties().curvature.H_min;
            if (std::isfinite(hmin)) lap = std::min(lap, d.neg_laplacian(x) - (d.dim() - 1) * hmin);
            if (d.properties().reach_applicable) reach = std::min(reach, reach_residual(d, x));
        }
        for (int k = 0; k < 10000; ++k) {
            const auto x = smp.box_point();
            auto z = smp.box_point();
            defA = std::min(defA, semiconcavity_defect(d, x, z));
        }
        std::uniform_real_distribution<double> u01(0.0, 1.0), um(-1.0, 1.0);
        for (int k = 0; k < 2000; ++k) {
            const auto center = smp.interior(0.05);
            const double radius = (0.1 + 0.8 * u01(rng)) * d.distance(center);
            const double r = d.distance(center) - radius;
            std::vector<double> x(center), z(center.size());
            for (std::size_t i = 0; i < x.size(); ++i) {
                x[i] += um(rng) * radius / (2.0 * std::sqrt(double(x.size())));
                z[i] = um(rng) * radius / (2.0 * std::sqrt(double(x.size())));
            }
            defAt = std::min(defAt, local_convexity_defect(d, x, z, center, radius, 1.0 / r));
        }
    }
    c.add(eik <= 1e-6, "eikonal " + num(eik));
    c.add(defA >= -1e-12, "A defect min " + num(defA));
    c.add(defAt >= -1e-12, "A~ defect min " + num(defAt));
    c.add(lap >= -1e-12, "-Lap d - (n-1)H_min min " + num(lap));
    c.add(reach >= -1e-12, "reach residual min " + num(reach));
    c.add(proj <= 1e-12, "projection " + num(proj));

    double scalar = geometry::kInf;
    {
        std::normal_distribution<double> g(0.0, 1.0);
        std::uniform_real_distribution<double> scale(-6.0, 2.0);
        for (int k = 0; k < 100000; ++k) {
            double a[3], b[3], sa = std::pow(10.0, scale(rng)), sb = std::pow(10.0, scale(rng));
            for (int i = 0; i < 3; ++i) {
                a[i] = sa * g(rng);
                b[i] = sb * g(rng);
            }
            auto len = [](double x, double y, double z) { return std::sqrt(x * x + y * y + z * z); };
            const double na = len(a[0], a[1], a[2]), nb = len(b[0], b[1], b[2]);
            if (na == 0.0) continue;
            const double lhs = len(a[0] + b[0], a[1] + b[1], a[2] + b[2]) +
                               len(a[0] - b[0], a[1] - b[1], a[2] - b[2]) - 2.0 * na;
            scalar = std::min(scalar, (nb * nb / na - lhs) / std::max(1.0, na + nb));
        }
    }
    c.add(scalar >= -1e-12, "scalar inequality slack " + num(scalar));

    double hess = 0.0;
    for (const Domain* d : {&ball, &ann}) {
        Sampler smp{*d, rng};
        for (int k = 0; k < 50; ++k) {
            const auto x = smp.interior(0.05);
            const double r = norm(x), dist = d->distance(x);
            double kappa = 1.0 / d->spec().radius;
            if (d->kind() == DomainKind::Annulus) {
                kappa = r < 0.5 * (d->spec().inner + d->spec().outer) ? -1.0 / d->spec().inner : 1.0 / d->spec().outer;
            }
            std::vector<double> expect(x.size(), -kappa / (1.0 - kappa * dist));
            expect.back() = 0.0;
            std::sort(expect.begin(), expect.end());
            Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(fd_hessian(*d, x, 1e-3));
            for (std::size_t i = 0; i < x.size(); ++i) hess = std::max(hess, std::abs(es.eigenvalues()(i) - expect[i]));
        }
    }
    c.add(hess <= 1e-5, "Hessian eigenvalues " + num(hess));

    double coef = 0.0;
    for (int n : {2, 3, 4, 7}) {
        for (double R : {1.0, 2.0}) {
            const auto b = make_domain(DomainSpec::ball(n, R));
            const auto& red = b.reduction();
            const double a0 = b.properties().boundary_area;
            std::vector<double> t = constants::geometric_ladder(1e-4, 1e-2, 21), y;
            for (double v : t) y.push_back(red.level_set_area(v) / a0);
            const double H = b.properties().curvature.H_mean;
            coef = std::max(coef, rel(quadratic_fit(t, y)(1), -(n - 1) * H));
        }
    }
    c.add(coef <= 1e-2, "level-set linear coefficient rel " + num(coef));

    const double mb = meanlap_ratio(ball, radial_bump(ball, 1.0 - 2e-3, 1e-3));
    const double ma = meanlap_ratio(ann, radial_bump(ann, 1.0 + 2e-3, 1e-3));
    c.add(rel(mb, 2.0) <= 0.02, "meanlap ball " + num(mb));
    c.add(rel(ma, -2.0) <= 0.02, "meanlap annulus " + num(ma));
    return {14, "geometry properties", c.pass(), c.detail()};
}

}  // namespace

CriterionResult run_criterion(int id, bool parallel) {
    using Fn = CriterionResult (*)(bool);
    static constexpr Fn table[kCriterionCount] = {c1, c2, c3, c4, c5, c6, c7, c8, c9, c10, c11, c12, c13, c14};
    if (id < 1 || id > kCriterionCount) throw InvalidArgument("no acceptance criterion " + std::to_string(id));
    try {
        return table[id - 1](parallel);
    } catch (const Error& e) {
        return {id, "criterion " + std::to_string(id), false, std::string("error: ") + e.what()};
    }
}

std::vector<CriterionResult> run_all(bool parallel) {
    std::vector<CriterionResult> out;
    for (int i = 1; i <= kCriterionCount; ++i) out.push_back(run_criterion(i, parallel));
    return out;
}

std::string format_line(const CriterionResult& r) {
    return std::string(r.pass ? "[PASS] " : "[FAIL] ") + std::to_string(r.id) + " " + r.name + ": " + r.detail;
}

}  // namespace hardylab::acceptance
