#include "reduced.hpp"

#include <cmath>
#include <limits>

#include "hardylab/errors.hpp"

namespace hardylab::reduced {

using geometry::Branch;
using geometry::ReductionMode;
using profiles::Bump;
using profiles::DistPower;
using profiles::Piece;
using profiles::TestProfile;
using quadrature::QuadResult;

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

struct Resolved {
    double coef;
    double dpow;
    double tpow;
    double xgamma;
};

// Applies the branch sign, folds the co-area weight into the t power, and on
// branches where t = d also folds the t power into the d power. Equal
// monomials are merged so that exact cancellations give exact zeros.
std::vector<Resolved> resolve(const Context& ctx, const Branch& b, const std::vector<Term>& terms) {
    const bool radial = ctx.red.mode() == ReductionMode::Radial;
    const double wpow = radial ? ctx.red.dim() - 1 : 0.0;
    const bool t_is_d = radial && b.anchor == 0.0 && b.slope == 1;
    std::vector<Resolved> out;
    for (const Term& term : terms) {
        if (term.neg_lap_sign && !radial) continue;
        double coef = term.coef * (term.neg_lap_sign ? -b.slope : 1.0);
        double dp = term.dpow;
        double tp = term.tpow + wpow;
        if (t_is_d) {
            dp += tp;
            tp = 0.0;
        }
        bool merged = false;
        for (Resolved& r : out) {
            if (r.dpow == dp && r.tpow == tp && r.xgamma == term.xgamma) {
                r.coef += coef;
                merged = true;
                break;
            }
        }
        if (!merged) out.push_back({coef, dp, tp, term.xgamma});
    }
    std::erase_if(out, [](const Resolved& r) { return r.coef == 0.0; });
    return out;
}

double x_of_t(const Branch& b, double t) { return b.slope * (t - b.anchor); }

double binomial(int k, int j) {
    double c = 1.0;
    for (int i = 1; i <= j; ++i) c = c * (k - j + i) / i;
    return c;
}

QuadResult closed(double v, double scale) { return {v, 4.0 * kEps * std::abs(scale), 0}; }

double bump_density(const Bump& bump, Density density, const Branch& b, double t) {
    const double xi = (t - bump.center) / bump.width;
    if (std::abs(xi) >= 1.0) return 0.0;
    const double a = std::abs(xi);
    if (density == Density::Value) return 1.0 - a * a * (3.0 - 2.0 * a);
    const double g1 = -6.0 * xi * (1.0 - a) / bump.width;
    if (density == Density::AbsDerivative) return std::abs(g1);
    return std::abs(g1) - b.slope * g1;
}

QuadResult integrate_segment(const Context& ctx, const Piece& piece, Density density, const Branch& b,
                             double xa, double xb, const Resolved& r) {
    const double x_lo = std::min(xa, xb);
    const double x_hi = std::max(xa, xb);
    if (!(x_lo < x_hi)) return {};

    const auto* dp = std::get_if<DistPower>(&piece.g);
    const double q = ctx.power;
    auto qpow = [q](double v) { return q == 1.0 ? v : std::pow(v, q); };
    if (q != 1.0 && density == Density::DerivativeResidual) {
        throw InvalidArgument("derivative residual density is only defined for power 1");
    }
    double C = 1.0;
    double e = 0.0;
    if (dp) {
        const double E = dp->resolved_exponent(ctx.s);
        switch (density) {
            case Density::Value:
                C = qpow(dp->coef);
                e = q * E;
                break;
            case Density::AbsDerivative:
                if (E == 0.0) return {};
                C = qpow(std::abs(dp->coef * E));
                e = q * (E - 1.0);
                break;
            case Density::DerivativeResidual:
                if (E == 0.0) return {};
                // slope * g' = coef * E * d^(E-1) because d' = slope.
                C = std::abs(dp->coef * E) - dp->coef * E;
                e = E - 1.0;
                break;
        }
        if (C == 0.0) return {};
    }
    const double alpha = e + r.dpow;
    const double beta = r.tpow;
    const double factor = r.coef * C;
    const double R = ctx.R;

    if (dp && ctx.opts.fast_paths) {
        if (r.xgamma == 0.0) {
            if (beta == 0.0) {
                const double v = quadrature::power_integral(alpha, x_lo, x_hi);
                return closed(factor * v, factor * v);
            }
            const int k = static_cast<int>(beta);
            if (k == beta && k >= 1 && k <= 32 && std::isfinite(x_hi)) {
                // t^k = (anchor + slope x)^k expanded in powers of x.
                double sum = 0.0;
                double mag = 0.0;
                for (int j = 0; j <= k; ++j) {
                    const double c = binomial(k, j) * std::pow(b.anchor, k - j) * std::pow(b.slope, j);
                    if (c == 0.0) continue;
                    const double term = c * quadrature::power_integral(alpha + j, x_lo, x_hi);
                    sum += term;
                    mag += std::abs(term);
                }
                if (mag <= 1e3 * std::abs(sum)) return closed(factor * sum, factor * mag);
            }
        } else if (beta == 0.0 && alpha == -1.0 && x_lo > 0.0) {
            const double v = quadrature::log_weight_integral(r.xgamma, x_lo / R, std::min(x_hi / R, 1.0));
            return closed(factor * v, factor * v);
        }
    }

    if (!std::isfinite(x_hi)) {
        throw DivergentIntegral("unbounded segment has no closed form for this integrand");
    }
    const auto* bump = std::get_if<Bump>(&piece.g);
    auto S = [&](double x) {
        const double t = b.anchor + b.slope * x;
        double v = beta == 0.0 ? 1.0 : std::pow(t, beta);
        if (bump) v *= qpow(bump_density(*bump, density, b, t));
        return v;
    };
    const double tol = ctx.opts.tol;
    QuadResult res;
    if (r.xgamma > 0.0) {
        if (x_lo > 0.0) {
            // x = R u: the integrand becomes (R u)^(alpha+1) S(R u) X^gamma(u) / u.
            const double p1 = alpha + 1.0;
            auto f = [&](double u) {
                const double x = R * u;
                return S(x) * std::exp(p1 * std::log(x));
            };
            res = quadrature::integrate_log_weighted(f, r.xgamma, x_lo / R, std::min(x_hi / R, 1.0), tol);
        } else {
            auto f = [&](double x) {
                if (x <= 0.0) return 0.0;
                return S(x) * functionals::x_log(std::min(x / R, 1.0), r.xgamma);
            };
            res = quadrature::integrate_power_distance(f, alpha, 0.0, x_hi, tol);
        }
    } else {
        res = quadrature::integrate_power_distance(S, alpha, x_lo, x_hi, tol);
    }
    return res.scaled(factor);
}

}  // namespace

QuadResult integrate(const Context& ctx, const TestProfile& g, Density density, const std::vector<Term>& terms) {
    QuadResult total;
    const auto& red = ctx.red;
    for (const Piece& p : g.pieces()) {
        std::vector<double> cuts{p.lo};
        for (double rp : red.ridge_points()) {
            if (rp > p.lo && rp < p.hi) cuts.push_back(rp);
        }
        cuts.push_back(p.hi);
        for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
            const double a = cuts[i];
            const double c = cuts[i + 1];
            const double mid = std::isfinite(c) ? 0.5 * (a + c) : a + 1.0;
            const Branch& b = red.branches()[red.branch_index(mid)];
            const double xa = (i == 0 && !std::isnan(p.lo_dist)) ? p.lo_dist : x_of_t(b, a);
            const double xc = (i + 2 == cuts.size() && !std::isnan(p.hi_dist)) ? p.hi_dist : x_of_t(b, c);
            for (const Resolved& r : resolve(ctx, b, terms)) {
                total += integrate_segment(ctx, p, density, b, xa, xc, r);
            }
        }
    }
    return total;
}

double kernel_at(const Context& ctx, const Branch& b, double t, const std::vector<Term>& terms, double d) {
    if (std::isnan(d)) d = x_of_t(b, t);
    double sum = 0.0;
    for (const Resolved& r : resolve(ctx, b, terms)) {
        double v = r.coef * std::pow(d, r.dpow);
        if (r.tpow != 0.0) v *= std::pow(t, r.tpow);
        if (r.xgamma != 0.0) v *= functionals::x_log(std::min(d / ctx.R, 1.0), r.xgamma);
        sum += v;
    }
    return sum;
}

double jump_sum(const Context& ctx, const TestProfile& g, const std::vector<Term>& terms) {
    double sum = 0.0;
    for (const auto& j : g.jumps(ctx.red, ctx.s)) {
        if (ctx.red.weight(j.t) == 0.0) continue;
        const Branch& b = ctx.red.branches()[ctx.red.branch_index(j.t)];
        const double d = g.distance_at(ctx.red, j.t);
        if (d <= 0.0) throw DivergentIntegral("profile jumps on the boundary");
        sum += j.magnitude * kernel_at(ctx, b, j.t, terms, d);
    }
    return sum;
}

double ridge_sum(const Context& ctx, const TestProfile& g, const std::vector<Term>& terms) {
    double sum = 0.0;
    const auto& ridges = ctx.red.ridge_points();
    for (std::size_t i = 0; i < ridges.size(); ++i) {
        const double t = ridges[i];
        const double gl = std::pow(g.left_limit(ctx.red, t, ctx.s), ctx.power);
        const double gr = std::pow(g.right_limit(ctx.red, t, ctx.s), ctx.power);
        const double gbar = 0.5 * (gl + gr);
        if (gbar == 0.0) continue;
        const Branch& b = ctx.red.branches()[i];
        sum += ctx.red.ridge_mass(i) * gbar * kernel_at(ctx, b, t, terms);
    }
    return sum;
}

double breakpoint_sum(const Context& ctx, const TestProfile& g) {
    const auto& red = ctx.red;
    double sum = 0.0;
    for (double t : g.breakpoints(red)) {
        if (!std::isfinite(t)) continue;
        const double gl = g.left_limit(red, t, ctx.s);
        const double gr = g.right_limit(red, t, ctx.s);
        if (gl == 0.0 && gr == 0.0) continue;
        const std::size_t idx = red.branch_index(t);
        const int sl = red.branches()[idx].slope;
        const int sr = (t == red.branches()[idx].hi && idx + 1 < red.branches().size())
                           ? red.branches()[idx + 1].slope
                           : sl;
        const double c = std::abs(gr - gl) + sl * gl - sr * gr;
        if (c == 0.0) continue;
        const double w = red.weight(t);
        if (w == 0.0) continue;
        const double d = g.distance_at(red, t);
        if (!(d > 0.0)) throw DivergentIntegral("profile does not vanish on the boundary");
        sum += c * w * std::pow(d, 1.0 - ctx.s);
    }
    return sum;
}

QuadResult by_parts_numerator(const Context& ctx, functionals::ProfileRef profile, double c0,
                              const std::vector<Term>& curvature) {
    const double s = ctx.s;
    std::vector<Term> value_terms;
    if (curvature.empty()) {
        value_terms.push_back({static_cast<double>(ctx.red.dim() - 1), 1.0 - s, -1.0, 0.0, true});
    } else {
        value_terms = curvature;
    }
    if (s - 1.0 - c0 != 0.0) value_terms.push_back({s - 1.0 - c0, -s});
    if (profile.kappa() > 0.0) value_terms.push_back({profile.kappa(), 1.0 - s});

    const TestProfile& g = profile.shape();
    QuadResult q = integrate(ctx, g, Density::Value, value_terms);
    q += integrate(ctx, g, Density::DerivativeResidual, {{1.0, 1.0 - s}});
    const double bp = breakpoint_sum(ctx, g);
    q.value += bp;
    q.error_estimate += 4.0 * kEps * std::abs(bp);
    return q;
}

}  // namespace hardylab::reduced
