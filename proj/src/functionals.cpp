#include "hardylab/functionals.hpp"

#include <algorithm>
#include <cmath>

#include "hardylab/errors.hpp"
#include "reduced.hpp"

namespace hardylab::functionals {

using geometry::Domain;
using geometry::DomainKind;
using geometry::ReductionMode;
using quadrature::QuadResult;
using reduced::Density;
using reduced::Term;

double ProfileRef::kappa() const { return product_ ? product_->kappa() : 0.0; }

std::string ProfileRef::family_params() const {
    return product_ ? product_->family_params() : shape_->family_params();
}

namespace {

void require(bool ok, const std::string& what) {
    if (!ok) throw InvalidArgument(what);
}

// (1 - log t)^(-gamma) without the range check, for finite-difference stencils
// that step slightly past t = 1.
double x_unchecked(double t, double gamma) { return std::pow(1.0 - std::log(t), -gamma); }

reduced::Context context(const Domain& domain, double s, double R, const EvalOptions& opts, double power = 1.0) {
    return {domain.reduction(), s, R, opts, power};
}

double inradius_or(const Domain& domain, double R) { return std::isnan(R) ? domain.inradius() : R; }

struct Gradient {
    QuadResult smooth;
    double jumps = 0.0;
    QuadResult transverse;

    double total() const { return smooth.value + transverse.value + jumps; }
    double error() const { return smooth.error_estimate + transverse.error_estimate; }
};

// Total variation of the gradient against a kernel: absolutely continuous
// part, jump part, and for product profiles the transverse part kappa * g.
Gradient gradient_parts(const reduced::Context& ctx, ProfileRef profile, const std::vector<Term>& kernel) {
    Gradient G;
    const auto& g = profile.shape();
    G.smooth = reduced::integrate(ctx, g, Density::AbsDerivative, kernel);
    G.jumps = reduced::jump_sum(ctx, g, kernel);
    if (profile.kappa() > 0.0) {
        G.transverse = reduced::integrate(ctx, g, Density::Value, kernel).scaled(profile.kappa());
    }
    return G;
}

EvaluationReport base_report(const Domain& domain, ProfileRef profile, const std::string& functional, double s) {
    EvaluationReport r;
    r.domain = domain.spec();
    r.family = profile.family_id();
    r.family_params = profile.family_params();
    r.functional = functional;
    r.s = s;
    return r;
}

void fill_direct(EvaluationReport& r, const Gradient& G, const QuadResult& H) {
    r.gradient_smooth = G.smooth.value + G.transverse.value;
    r.gradient_jumps = G.jumps;
    r.gradient_term = G.total();
    r.hardy_term = H.value;
}

void finish_quotient(EvaluationReport& r, const QuadResult& num, const QuadResult& den) {
    if (!(den.value > 0.0) || !std::isfinite(den.value)) {
        throw ZeroDenominator("quotient denominator is zero or not finite");
    }
    r.value = num.value / den.value;
    r.error_estimate = (num.error_estimate + std::abs(r.value) * den.error_estimate) / den.value;
    r.remainder_terms["numerator"] = num.value;
    r.remainder_terms["denominator"] = den.value;
}

// The by-parts numerator must agree with the direct difference of the large
// terms up to the rounding of that difference.
void check_identity(const QuadResult& stable, double direct, double scale, double direct_err) {
    if (!std::isfinite(direct) || !std::isfinite(scale)) return;
    const double slack = 1e-7 * scale + 10.0 * (stable.error_estimate + direct_err);
    if (std::abs(stable.value - direct) > slack) {
        throw NumericalError("integration-by-parts numerator disagrees with the direct evaluation");
    }
}

struct Numerator {
    QuadResult stable;
    Gradient G;
    QuadResult H;
};

// G - c0 H through the by-parts identity, with the direct evaluation kept for
// the report and the consistency check. `extra` holds additional subtracted
// terms (already folded into `curvature`) as (name, value) pairs.
Numerator numerator(const reduced::Context& ctx, ProfileRef profile, double c0,
                    const std::vector<Term>& curvature = {}, double extra = 0.0, double extra_err = 0.0) {
    Numerator N;
    const double s = ctx.s;
    N.stable = reduced::by_parts_numerator(ctx, profile, c0, curvature);
    try {
        N.G = gradient_parts(ctx, profile, {{1.0, 1.0 - s}});
        N.H = reduced::integrate(ctx, profile.shape(), Density::Value, {{1.0, -s}});
    } catch (const DivergentIntegral&) {
        // G and H may both diverge (u = d^(s-1) up to the boundary) while
        // their difference stays finite; only the by-parts form exists then.
        N.G = Gradient{};
        N.G.smooth.value = geometry::kInf;
        N.H.value = geometry::kInf;
        return N;
    }
    const double direct = N.G.total() - c0 * N.H.value - extra;
    const double scale = std::abs(N.G.total()) + std::abs(c0 * N.H.value) + std::abs(extra);
    check_identity(N.stable, direct, scale, N.G.error() + std::abs(c0) * N.H.error_estimate + extra_err);
    return N;
}

std::string num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

}  // namespace

double x_log(double t, double gamma) {
    if (!(t > 0.0 && t <= 1.0)) throw InvalidArgument("x_log needs t in (0, 1]");
    return x_unchecked(t, gamma);
}

double x_chain_rule_residual(double t, double gamma) {
    require(t > 0.0 && t < 1.0, "chain rule check needs t in (0, 1)");
    auto f = [gamma](double u) { return x_unchecked(u, gamma - 1.0); };
    auto D = [&](double h) { return (f(t + h) - f(t - h)) / (2.0 * h); };
    const double h = 1e-3 * std::min(t, 1.0 - t);
    const double a1 = (4.0 * D(h / 2) - D(h)) / 3.0;
    const double a2 = (4.0 * D(h / 4) - D(h / 2)) / 3.0;
    const double fd = (16.0 * a2 - a1) / 15.0;
    const double exact = (gamma - 1.0) * x_unchecked(t, gamma) / t;
    if (exact == 0.0) return std::abs(fd);
    return std::abs(fd - exact) / std::abs(exact);
}

// Quotients.

EvaluationReport ratio_plain_report(const Domain& domain, ProfileRef profile, double s, const EvalOptions& opts) {
    require(s >= 1.0, "ratio_plain needs s >= 1");
    auto ctx = context(domain, s, kNaN, opts);
    auto r = base_report(domain, profile, "ratio", s);
    const Gradient G = gradient_parts(ctx, profile, {{1.0, 1.0 - s}});
    const QuadResult H = reduced::integrate(ctx, profile.shape(), Density::Value, {{1.0, -s}});
    fill_direct(r, G, H);
    finish_quotient(r, {G.total(), G.error(), 0}, H);
    return r;
}

double ratio_plain(const Domain& domain, ProfileRef profile, double s, const EvalOptions& opts) {
    return ratio_plain_report(domain, profile, s, opts).value;
}

EvaluationReport quotient_Qbeta_report(const Domain& domain, ProfileRef profile, double s, double beta,
                                       const EvalOptions& opts) {
    require(s > 1.0, "Q_beta needs s > 1");
    require(beta > 0.0 && beta <= s - 1.0, "Q_beta needs 0 < beta <= s - 1");
    auto ctx = context(domain, s, kNaN, opts);
    auto r = base_report(domain, profile, "qbeta", s);
    r.beta = beta;
    const Numerator N = numerator(ctx, profile, s - 1.0);
    const QuadResult D = reduced::integrate(ctx, profile.shape(), Density::Value, {{1.0, beta - s}});
    fill_direct(r, N.G, N.H);
    finish_quotient(r, N.stable, D);
    return r;
}

double quotient_Qbeta(const Domain& domain, ProfileRef profile, double s, double beta, const EvalOptions& opts) {
    return quotient_Qbeta_report(domain, profile, s, beta, opts).value;
}

namespace {

EvaluationReport x_weighted_quotient(const Domain& domain, ProfileRef profile, double s, double gamma, double R,
                                     double c0, double dpow, const std::string& name, const EvalOptions& opts) {
    require(gamma >= 1.0, name + " needs gamma >= 1");
    R = inradius_or(domain, R);
    if (!std::isfinite(R)) throw HypothesisViolation(name + " needs a finite inradius");
    require(R > 0.0, name + " needs R > 0");
    auto ctx = context(domain, s, R, opts);
    auto r = base_report(domain, profile, name, s);
    r.gamma = gamma;
    r.remainder_terms["R"] = R;
    const Numerator N = numerator(ctx, profile, c0);
    const QuadResult D = reduced::integrate(ctx, profile.shape(), Density::Value, {{1.0, dpow, 0.0, gamma}});
    fill_direct(r, N.G, N.H);
    finish_quotient(r, N.stable, D);
    return r;
}

}  // namespace

EvaluationReport quotient_Qgamma_report(const Domain& domain, ProfileRef profile, double s, double gamma, double R,
                                        const EvalOptions& opts) {
    require(s >= 1.0, "Q_gamma needs s >= 1");
    return x_weighted_quotient(domain, profile, s, gamma, R, s - 1.0, -1.0, "qgamma", opts);
}

double quotient_Qgamma(const Domain& domain, ProfileRef profile, double s, double gamma, double R,
                       const EvalOptions& opts) {
    return quotient_Qgamma_report(domain, profile, s, gamma, R, opts).value;
}

EvaluationReport quotient_Qgamma_n_report(const Domain& domain, ProfileRef profile, double s, double gamma,
                                          double R, const EvalOptions& opts) {
    require(s >= domain.dim(), "the general-domain X quotient needs s >= n");
    return x_weighted_quotient(domain, profile, s, gamma, R, s - domain.dim(), -static_cast<double>(domain.dim()),
                               "qgamma-n", opts);
}

double quotient_Qgamma_n(const Domain& domain, ProfileRef profile, double s, double gamma, double R,
                         const EvalOptions& opts) {
    return quotient_Qgamma_n_report(domain, profile, s, gamma, R, opts).value;
}

EvaluationReport remainder_ratio_Im_report(const Domain& domain, ProfileRef profile, double s, int m,
                                           ImDenominator denom, double beta, const EvalOptions& opts) {
    if (domain.kind() != DomainKind::Ball) throw HypothesisViolation("I_m is defined on a ball");
    require(s >= 1.0, "I_m needs s >= 1");
    const int top = static_cast<int>(std::floor(s)) - 1;
    require(m >= 0 && m <= top, "I_m needs 0 <= m <= floor(s) - 1");
    if (denom == ImDenominator::XWeight) {
        require(m == top, "the X-weighted I_m ratio needs m = floor(s) - 1");
    } else {
        require(std::isfinite(beta), "the power I_m ratio needs beta");
    }
    const int n = domain.dim();
    const double R = domain.inradius();
    auto ctx = context(domain, s, R, opts);
    auto r = base_report(domain, profile, "im", s);
    r.beta = denom == ImDenominator::Power ? beta : kNaN;
    r.gamma = denom == ImDenominator::XWeight ? 1.0 : kNaN;
    r.remainder_terms["m"] = m;

    // (n-1)/(R-d) minus the first m terms of its expansion in d/R, times d^(1-s).
    const std::vector<Term> curvature{{(n - 1) * std::pow(R, -m), m + 1.0 - s, -1.0, 0.0, true}};
    double extra = 0.0;
    double extra_err = 0.0;
    for (int k = 1; k <= m; ++k) {
        const QuadResult q = reduced::integrate(ctx, profile.shape(), Density::Value, {{1.0, k - s}});
        const double term = (n - 1) * std::pow(R, -k) * q.value;
        r.remainder_terms["k=" + std::to_string(k)] = term;
        extra += term;
        extra_err += (n - 1) * std::pow(R, -k) * q.error_estimate;
    }
    const Numerator N = numerator(ctx, profile, s - 1.0, curvature, extra, extra_err);
    const QuadResult D =
        denom == ImDenominator::Power
            ? reduced::integrate(ctx, profile.shape(), Density::Value, {{1.0, -beta}})
            : reduced::integrate(ctx, profile.shape(), Density::Value, {{1.0, -1.0, 0.0, 1.0}});
    fill_direct(r, N.G, N.H);
    finish_quotient(r, N.stable, D);
    return r;
}

double remainder_ratio_Im(const Domain& domain, ProfileRef profile, double s, int m, ImDenominator denom,
                          double beta, const EvalOptions& opts) {
    return remainder_ratio_Im_report(domain, profile, s, m, denom, beta, opts).value;
}

EvaluationReport gradient_quotient_report(const Domain& domain, ProfileRef profile, double s, double c0,
                                          double alpha, const EvalOptions& opts) {
    require(s >= 1.0, "gradient quotient needs s >= 1");
    require(alpha >= 0.0, "gradient quotient needs alpha >= 0");
    auto ctx = context(domain, s, kNaN, opts);
    auto r = base_report(domain, profile, "gradq", s);
    r.remainder_terms["c0"] = c0;
    r.remainder_terms["alpha"] = alpha;
    const Numerator N = numerator(ctx, profile, c0);
    const Gradient D = gradient_parts(ctx, profile, {{1.0, -alpha}});
    fill_direct(r, N.G, N.H);
    finish_quotient(r, N.stable, {D.total(), D.error(), 0});
    return r;
}

double gradient_quotient(const Domain& domain, ProfileRef profile, double s, double c0, double alpha,
                         const EvalOptions& opts) {
    return gradient_quotient_report(domain, profile, s, c0, alpha, opts).value;
}

// Inequality gaps.

namespace {

bool has_reach_formula(DomainKind k) {
    return k == DomainKind::Ball || k == DomainKind::Strip || k == DomainKind::Annulus;
}

// Integral of g^p d^(1-s) (-Laplacian d), singular ridge part included.
QuadResult curvature_integral(const reduced::Context& ctx, const profiles::TestProfile& g) {
    const int n = ctx.red.dim();
    QuadResult q = reduced::integrate(ctx, g, Density::Value, {{n - 1.0, 1.0 - ctx.s, -1.0, 0.0, true}});
    q.value += reduced::ridge_sum(ctx, g, {{1.0, 1.0 - ctx.s}});
    return q;
}

EvaluationReport lp_gap(const Domain& domain, ProfileRef profile, const GapParams& params, double tol,
                        const EvalOptions& opts) {
    const double s = params.s;
    const double p = params.p;
    if (!(s > 1.0)) throw HypothesisViolation("inequality 6.1 needs s > 1");
    require(p >= 1.0, "inequality 6.1 needs p >= 1");
    const auto& g = profile.shape();
    if (p > 1.0) {
        require(!profile.is_product(), "inequality 6.1 with p > 1 needs a plain radial profile");
        require(g.jumps(domain.reduction(), s).empty(), "inequality 6.1 with p > 1 needs a profile without jumps");
    }
    auto ctx = context(domain, s, kNaN, opts, p);
    auto r = base_report(domain, profile, "gap:6.1", s);
    r.p = p;
    QuadResult lhs;
    if (p == 1.0) {
        const Gradient G = gradient_parts(ctx, profile, {{1.0, 1.0 - s}});
        lhs = {G.total(), G.error(), 0};
        r.gradient_smooth = G.smooth.value + G.transverse.value;
        r.gradient_jumps = G.jumps;
    } else {
        lhs = reduced::integrate(ctx, g, Density::AbsDerivative, {{1.0, p - s}});
        r.gradient_smooth = lhs.value;
        r.gradient_jumps = 0.0;
    }
    r.gradient_term = lhs.value;
    const QuadResult H = reduced::integrate(ctx, g, Density::Value, {{1.0, -s}});
    const QuadResult L = curvature_integral(ctx, g);
    r.hardy_term = H.value;
    const double c = (s - 1.0) / p;
    const double rhs = std::pow(c, p) * H.value + std::pow(c, p - 1.0) * L.value;
    r.remainder_terms["curvature"] = L.value;
    r.remainder_terms["lhs"] = lhs.value;
    r.remainder_terms["rhs"] = rhs;
    r.value = r.gap = lhs.value - rhs;
    r.error_estimate = lhs.error_estimate + std::pow(c, p) * H.error_estimate +
                       std::abs(std::pow(c, p - 1.0)) * L.error_estimate;
    r.prediction = num(std::pow(c, p));
    r.pass = r.gap >= -tol * std::abs(lhs.value) ? "true" : "false";
    return r;
}

}  // namespace

EvaluationReport inequality_gap_report(const Domain& domain, ProfileRef profile, const std::string& inequality_id,
                                       const GapParams& params, double tol, const EvalOptions& opts) {
    const std::string id = inequality_id == "2.17" ? "2.13" : inequality_id;
    const double s = params.s;
    require(std::isfinite(s), "inequality gap needs s");
    auto need = [&](bool ok, const std::string& why) {
        if (!ok) throw HypothesisViolation("inequality " + inequality_id + ": " + why);
    };
    if (id == "6.1") return lp_gap(domain, profile, params, tol, opts);

    const int n = domain.dim();
    const DomainKind kind = domain.kind();
    const double gamma = params.gamma;
    const double C = std::isnan(params.C) ? gamma - 1.0 : params.C;
    double R = inradius_or(domain, params.R);
    if (id == "5.2" || id == "5.3" || id == "1.4") R = domain.inradius();
    auto need_R = [&] { need(std::isfinite(R) && R > 0.0, "needs a finite inradius"); };
    auto need_C = [&] { need(domain.satisfies_C(), "the domain fails condition (C)"); };
    auto need_gamma = [&] { need(gamma > 1.0, "needs gamma > 1"); };

    auto ctx = context(domain, s, R, opts);
    const auto& g = profile.shape();
    auto r = base_report(domain, profile, "gap:" + inequality_id, s);
    const Gradient G = gradient_parts(ctx, profile, {{1.0, 1.0 - s}});
    const QuadResult H = reduced::integrate(ctx, g, Density::Value, {{1.0, -s}});
    fill_direct(r, G, H);
    const double lhs = G.total();
    double err = G.error();
    double rhs = 0.0;
    double constant = kNaN;

    auto x_term = [&](double dpow, double scale) {
        const QuadResult X = reduced::integrate(ctx, g, Density::Value, {{1.0, dpow, 0.0, gamma}});
        r.remainder_terms["x_weight"] = X.value;
        err += std::abs(scale) * X.error_estimate;
        return scale * X.value;
    };
    auto add_hardy = [&](double c) {
        constant = c;
        err += std::abs(c) * H.error_estimate;
        return c * H.value;
    };

    if (id == "2.3" || id == "2.3-equality") {
        need(s >= 1.0, "needs s >= 1");
        const QuadResult L = curvature_integral(ctx, g);
        r.remainder_terms["curvature"] = L.value;
        err += L.error_estimate;
        rhs = add_hardy(s - 1.0) + L.value;
    } else if (id == "2.4") {
        need(s > n, "needs s > n");
        rhs = add_hardy(s - n);
    } else if (id == "2.7") {
        need(s >= n, "needs s >= n");
        need_gamma();
        need_R();
        rhs = add_hardy(s - n) + x_term(-static_cast<double>(n), C * std::pow(R, n - s));
    } else if (id == "2.8") {
        need(s > n, "needs s > n");
        need_R();
        const Gradient Gn = gradient_parts(ctx, profile, {{1.0, 1.0 - n}});
        const double scale = std::pow(R, n - s);
        r.remainder_terms["gradient_n"] = Gn.total();
        err += scale * Gn.error();
        rhs = add_hardy(s - n) + scale * Gn.total();
    } else if (id == "2.9") {
        need_C();
        need(s > 1.0, "needs s > 1");
        rhs = add_hardy(s - 1.0);
    } else if (id == "2.10") {
        need_C();
        need(s >= 1.0, "needs s >= 1");
        need_gamma();
        need_R();
        rhs = add_hardy(s - 1.0) + x_term(-1.0, C * std::pow(R, 1.0 - s));
    } else if (id == "2.11") {
        need_C();
        need(s > 1.0, "needs s > 1");
        need_R();
        const Gradient G0 = gradient_parts(ctx, profile, {{1.0, 0.0}});
        const double scale = std::pow(R, 1.0 - s);
        r.remainder_terms["gradient_0"] = G0.total();
        err += scale * G0.error();
        rhs = add_hardy(s - 1.0) + scale * G0.total();
    } else if (id == "2.13") {
        need(has_reach_formula(kind), "reach is only available for ball, strip and annulus");
        need_R();
        const double h = domain.reach();
        double c;
        if (std::isinf(h)) {
            need(s > 1.0, "needs s > 1");
            c = s - 1.0;
        } else {
            need(s > (h + n * R) / (h + R), "needs s > (h + nR)/(h + R)");
            c = ((s - 1.0) * h + (s - n) * R) / (h + R);
        }
        r.remainder_terms["reach"] = h;
        rhs = add_hardy(c);
    } else if (id == "5.2" || id == "5.3") {
        need(kind == DomainKind::Ball, "needs a ball");
        need_gamma();
        if (id == "5.2") {
            need(s >= 2.0, "needs s >= 2");
        } else {
            need(s >= 1.0 && s < 2.0, "needs 1 <= s < 2");
        }
        rhs = add_hardy(s - 1.0);
        const int top = static_cast<int>(std::floor(s)) - 1;
        for (int k = 1; id == "5.2" && k <= top; ++k) {
            const QuadResult q = reduced::integrate(ctx, g, Density::Value, {{1.0, k - s}});
            const double c = (n - 1) * std::pow(R, -k);
            r.remainder_terms["k=" + std::to_string(k)] = c * q.value;
            err += c * q.error_estimate;
            rhs += c * q.value;
        }
        rhs += x_term(-1.0, C * std::pow(R, 1.0 - s));
    } else if (id == "1.4") {
        need(has_reach_formula(kind), "needs a ball, strip or annulus");
        need(s >= 1.0, "needs s >= 1");
        const double B1 = (n - 1) * domain.properties().curvature.H_min;
        const QuadResult q = reduced::integrate(ctx, g, Density::Value, {{1.0, 1.0 - s}});
        r.remainder_terms["B1"] = B1;
        err += std::abs(B1) * q.error_estimate;
        rhs = add_hardy(s - 1.0) + B1 * q.value;
    } else {
        throw InvalidArgument("unknown inequality id: " + inequality_id);
    }

    r.gamma = std::isfinite(gamma) ? gamma : kNaN;
    r.remainder_terms["lhs"] = lhs;
    r.remainder_terms["rhs"] = rhs;
    r.value = r.gap = lhs - rhs;
    r.error_estimate = err;
    if (std::isfinite(constant)) r.prediction = num(constant);
    const bool ok = id == "2.3-equality" ? std::abs(r.gap) <= tol * std::abs(lhs) : r.gap >= -tol * std::abs(lhs);
    r.pass = ok ? "true" : "false";
    return r;
}

double inequality_gap(const Domain& domain, ProfileRef profile, const std::string& inequality_id,
                      const GapParams& params, const EvalOptions& opts) {
    return inequality_gap_report(domain, profile, inequality_id, params, 1e-8, opts).value;
}

EvaluationReport meanlap_ratio_report(const Domain& domain, ProfileRef profile, const EvalOptions& opts) {
    auto ctx = context(domain, 1.0, kNaN, opts);
    const auto& g = profile.shape();
    auto r = base_report(domain, profile, "meanlap", kNaN);
    const int n = domain.dim();
    QuadResult N = reduced::integrate(ctx, g, Density::Value, {{n - 1.0, 0.0, -1.0, 0.0, true}});
    N.value += reduced::ridge_sum(ctx, g, {{1.0, 0.0}});
    const QuadResult D = reduced::integrate(ctx, g, Density::Value, {{1.0, 0.0}});
    finish_quotient(r, N, D);
    return r;
}

double meanlap_ratio(const Domain& domain, ProfileRef profile, const EvalOptions& opts) {
    return meanlap_ratio_report(domain, profile, opts).value;
}

double lp_ratio_closed_form(double s, double p, double eps) {
    const double c = (s - 1.0) / p;
    return (std::pow(c + eps, p) - std::pow(c, p)) / (eps * p);
}

EvaluationReport lp_ratio_report(const Domain& domain, double s, double p, double eps, const EvalOptions& opts) {
    if (domain.kind() != DomainKind::Ball) throw HypothesisViolation("lp_ratio is defined on a ball");
    require(s > 1.0, "lp_ratio needs s > 1");
    require(p >= 1.0, "lp_ratio needs p >= 1");
    require(eps > 0.0, "lp_ratio needs eps > 0");
    const double c = (s - 1.0) / p;
    const auto g = profiles::power_profile(domain, c + eps);
    auto ctx = context(domain, s, kNaN, opts, p);
    auto r = base_report(domain, g, "lp", s);
    r.p = p;
    const QuadResult grad = reduced::integrate(ctx, g, Density::AbsDerivative, {{1.0, p - s}});
    const QuadResult H = reduced::integrate(ctx, g, Density::Value, {{1.0, -s}});
    const QuadResult L = curvature_integral(ctx, g);
    const double cp = std::pow(c, p);
    r.gradient_smooth = r.gradient_term = grad.value;
    r.gradient_jumps = 0.0;
    r.hardy_term = H.value;
    finish_quotient(r, {grad.value - cp * H.value, grad.error_estimate + cp * H.error_estimate, 0}, L);
    r.remainder_terms["closed_form"] = lp_ratio_closed_form(s, p, eps);
    r.remainder_terms["eps"] = eps;
    return r;
}

double lp_ratio(const Domain& domain, double s, double p, double eps, const EvalOptions& opts) {
    return lp_ratio_report(domain, s, p, eps, opts).value;
}

// Divergence of T = -F(d) grad d.

namespace {

struct Field {
    std::string id;
    double s;
    double gamma;
    double R;
    int n;

    double F(double d) const {
        const double u = d / R;
        if (id == "thm2.5") return std::pow(d, 1.0 - s) * (1.0 - std::pow(u, s - n) * x_unchecked(u, gamma - 1.0));
        if (id == "thm2.7") return std::pow(d, 1.0 - s) * (1.0 - std::pow(u, s - n));
        if (id == "thm2.13") return std::pow(d, 1.0 - s) * (1.0 - std::pow(u, s - 1.0));
        return std::pow(d, 1.0 - s) * (1.0 - std::pow(u, s - 1.0) * x_unchecked(u, gamma - 1.0));
    }

    // Expanded divergence as written in the proofs.
    double analytic(double d, double neg_lap) const {
        const double u = d / R;
        const double F0 = F(d);
        if (id == "thm2.5") {
            const double X1 = x_unchecked(u, gamma - 1.0);
            const double X = x_unchecked(u, gamma);
            return (s - 1.0) * std::pow(d, -s) * (1.0 - std::pow(u, s - n) * X1) +
                   (s - n) * std::pow(R, n - s) * std::pow(d, -n) * X1 +
                   (gamma - 1.0) * std::pow(R, n - s) * std::pow(d, -n) * X + F0 * neg_lap;
        }
        if (id == "thm2.7") {
            return (s - 1.0) * std::pow(d, -s) * (1.0 - std::pow(u, s - n)) +
                   (s - n) * std::pow(R, n - s) * std::pow(d, -n) + F0 * neg_lap;
        }
        if (id == "thm2.13") return (s - 1.0) * std::pow(d, -s) + F0 * neg_lap;
        return (s - 1.0) * std::pow(d, -s) + (gamma - 1.0) * std::pow(R, 1.0 - s) * x_unchecked(u, gamma) / d +
               F0 * neg_lap;
    }
};

Field make_field(const Domain& domain, const std::string& field_id, const FieldParams& params) {
    const int n = domain.dim();
    const double s = params.s;
    const double gamma = params.gamma;
    require(std::isfinite(s), "field needs s");
    if (field_id == "thm2.5") {
        require(s >= n && gamma > 1.0, "thm2.5 field needs s >= n and gamma > 1");
    } else if (field_id == "thm2.7") {
        require(s > n, "thm2.7 field needs s > n");
    } else if (field_id == "thm2.11") {
        require(s >= 1.0 && gamma > 1.0, "thm2.11 field needs s >= 1 and gamma > 1");
    } else if (field_id == "thm2.13") {
        require(s > 1.0, "thm2.13 field needs s > 1");
    } else if (field_id == "sec5") {
        require(domain.kind() == DomainKind::Ball, "sec5 field is defined on a ball");
        require(s >= 1.0 && gamma > 1.0, "sec5 field needs s >= 1 and gamma > 1");
    } else {
        throw InvalidArgument("unknown field id: " + field_id);
    }
    const double R = inradius_or(domain, params.R);
    require(std::isfinite(R) && R > 0.0, "field needs a finite R (pass it explicitly for unbounded domains)");
    return {field_id, s, gamma, R, n};
}

}  // namespace

DivergencePair div_T(const Domain& domain, const std::string& field_id, const FieldParams& params, double t) {
    const Field field = make_field(domain, field_id, params);
    const auto& red = domain.reduction();
    const double neg_lap_reduced = red.neg_lap(t);  // throws on ridges and at the origin
    const auto& b = red.branches()[red.branch_index(t)];
    const double d = b.slope * (t - b.anchor);
    require(d > 0.0, "divergence point must be inside the domain");
    require(d <= field.R, "divergence point needs d <= R");
    const bool radial = red.mode() == ReductionMode::Radial;
    const double neg_lap =
        field_id == "sec5" ? (field.n - 1) / (field.R - d) : neg_lap_reduced;
    const double a = field.analytic(d, neg_lap);

    // Radial component f(t) = -slope F(d(t)), extended linearly in the branch.
    auto f = [&](double tt) { return -b.slope * field.F(b.slope * (tt - b.anchor)); };
    double room = d;
    if (radial) room = std::min(room, t);
    for (double rp : red.ridge_points()) room = std::min(room, std::abs(t - rp));
    const double h = 1e-3 * room;
    auto D = [&](double hh) { return (f(t + hh) - f(t - hh)) / (2.0 * hh); };
    const double d0 = D(h);
    const double d1 = D(h / 2);
    const double d2 = D(h / 4);
    const double r1 = (4.0 * d1 - d0) / 3.0;
    const double r2 = (4.0 * d2 - d1) / 3.0;
    double fd = (16.0 * r2 - r1) / 15.0;
    if (radial) fd += (field.n - 1) * f(t) / t;
    return {a, fd, std::abs(a - fd) / (1.0 + std::abs(a))};
}

double div_T_residual(const Domain& domain, const std::string& field_id, const FieldParams& params, double t) {
    return div_T(domain, field_id, params, t).residual;
}

std::vector<double> divergence_grid(const Domain& domain, const FieldParams& params, int count) {
    require(count > 0, "grid needs a positive count");
    const auto& red = domain.reduction();
    double lo = red.t_min();
    double hi = red.t_max();
    if (!std::isfinite(hi)) {
        const double R = inradius_or(domain, params.R);
        require(std::isfinite(R) && R > 0.0, "grid on an unbounded domain needs R");
        hi = lo + R;
    }
    const double step = (hi - lo) / count;
    std::vector<double> out;
    out.reserve(count);
    for (int k = 0; k < count; ++k) {
        double t = lo + (k + 0.5) * step;
        for (double rp : red.ridge_points()) {
            if (std::abs(t - rp) < 1e-3 * step) t += 0.25 * step;
        }
        out.push_back(t);
    }
    return out;
}

}  // namespace hardylab::functionals
