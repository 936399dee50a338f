#include "hardylab/constants.hpp"

#include <algorithm>
#include <cmath>

#include "hardylab/errors.hpp"
#include "hardylab/format.hpp"
#include "hardylab/parallel.hpp"

namespace hardylab::constants {

using geometry::Domain;
using geometry::DomainKind;

namespace {

void require(bool ok, const std::string& what) {
    if (!ok) throw InvalidArgument(what);
}

struct Gate {
    const std::string& id;
    PredictedConstant& out;

    void operator()(bool ok, const std::string& hypothesis) {
        out.hypotheses.push_back(hypothesis);
        if (!ok) throw HypothesisViolation("constant " + id + " needs " + hypothesis);
    }
};

PredictedConstant point(const std::string& id, double v, std::string provenance) {
    PredictedConstant c;
    c.inequality_id = id;
    c.value = c.lower = c.upper = v;
    c.provenance = std::move(provenance);
    return c;
}

bool reach_formula_domain(DomainKind k) {
    return k == DomainKind::Ball || k == DomainKind::Strip || k == DomainKind::Annulus;
}

// Least-squares line through (x, y); returns slope and intercept.
std::pair<double, double> line_fit(const std::vector<double>& x, const std::vector<double>& y) {
    const double m = static_cast<double>(x.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sx += x[i];
        sy += y[i];
        sxx += x[i] * x[i];
        sxy += x[i] * y[i];
    }
    const double slope = (m * sxy - sx * sy) / (m * sxx - sx * sx);
    return {slope, (sy - slope * sx) / m};
}

}  // namespace

std::string PredictedConstant::text() const {
    if (is_bound()) return format_full(lower) + ".." + format_full(upper);
    return format_full(value);
}

double interpolation_constant(double s, int n, double h, double R) {
    if (std::isinf(h)) return s - 1.0;
    return ((s - 1.0) * h + (s - n) * R) / (h + R);
}

InterpolationEndpoints interpolation_endpoints_check(double s, int n) {
    return {interpolation_constant(s, n, 0.0, 1.0), interpolation_constant(s, n, geometry::kInf, 1.0)};
}

B1Bounds b1_bounds(const Domain& domain) {
    const int n = domain.dim();
    const auto& curv = domain.properties().curvature;
    switch (domain.kind()) {
        case DomainKind::Ball:
        case DomainKind::Annulus: return {(n - 1) * curv.H_min, (n - 1) * curv.H_mean};
        case DomainKind::Strip: return {0.0, 0.0};
        default: throw HypothesisViolation("B1 bounds need a bounded smooth domain or the strip");
    }
}

PredictedConstant predicted_constant(const std::string& inequality_id, const Domain& domain,
                                     const ConstantParams& params) {
    const std::string& id = inequality_id;
    const int n = domain.dim();
    const double s = params.s;
    const double R = domain.inradius();
    const bool finite_R = std::isfinite(R);
    PredictedConstant c;
    auto fill = [&](double v, const std::string& provenance) {
        PredictedConstant p = point(id, v, provenance);
        p.hypotheses = c.hypotheses;
        c = p;
    };
    Gate need{id, c};

    if (id == "B1" || id == "1.4") {
        need(domain.kind() != DomainKind::PuncturedSpace && domain.kind() != DomainKind::PuncturedBall,
             "a domain with C2 boundary");
        const B1Bounds b = b1_bounds(domain);
        if (b.lower == b.upper) {
            fill(b.lower, "best curvature remainder constant, exact for this domain");
        } else {
            c.inequality_id = id;
            c.lower = b.lower;
            c.upper = b.upper;
            c.provenance = "mean-curvature bounds on the best curvature remainder constant";
        }
        return c;
    }
    require(std::isfinite(s), "constant " + id + " needs s");
    if (id == "2.3") {
        need(s >= 1.0, "s >= 1");
        fill(s - 1.0, "Hardy constant of the basic identity with the Laplacian term");
    } else if (id == "2.4") {
        need(s > n, "s > n");
        fill(s - n, "Hardy constant valid on every open set");
    } else if (id == "2.7") {
        need(s >= n, "s >= n");
        need(params.gamma > 1.0, "gamma > 1");
        need(finite_R, "finite inradius");
        fill(params.gamma - 1.0, "logarithmic remainder constant, general open sets");
    } else if (id == "2.8") {
        need(s > n, "s > n");
        need(finite_R, "finite inradius");
        fill(std::pow(R, n - s), "gradient remainder constant, general open sets");
    } else if (id == "2.9") {
        need(domain.satisfies_C(), "condition (C)");
        need(s > 1.0, "s > 1");
        fill(s - 1.0, "sharp Hardy constant under condition (C)");
    } else if (id == "2.10") {
        need(domain.satisfies_C(), "condition (C)");
        need(params.gamma > 1.0, "gamma > 1");
        need(finite_R, "finite inradius");
        fill(params.gamma - 1.0, "logarithmic remainder constant under condition (C)");
    } else if (id == "2.11") {
        need(domain.satisfies_C(), "condition (C)");
        need(s > 1.0, "s > 1");
        need(finite_R, "finite inradius");
        fill(std::pow(R, 1.0 - s), "gradient remainder constant under condition (C)");
    } else if (id == "2.13" || id == "2.17") {
        need(reach_formula_domain(domain.kind()), "a ball, strip or annulus (known reach)");
        need(finite_R, "finite inradius");
        const double h = domain.reach();
        need(std::isinf(h) ? s > 1.0 : s > (h + n * R) / (h + R), "s > (h + nR)/(h + R)");
        fill(interpolation_constant(s, n, h, R), "reach interpolation between s - n and s - 1");
    } else if (id == "5.2") {
        need(domain.kind() == DomainKind::Ball, "a ball");
        need(s >= 2.0, "s >= 2");
        const int top = static_cast<int>(std::floor(s)) - 1;
        need(params.k >= 1 && params.k <= top, "1 <= k <= floor(s) - 1");
        fill((n - 1) / std::pow(R, params.k), "k-th series coefficient on the ball");
    } else if (id == "5.3") {
        need(domain.kind() == DomainKind::Ball, "a ball");
        need(s >= 1.0 && s < 2.0, "1 <= s < 2");
        need(params.gamma > 1.0, "gamma > 1");
        fill(params.gamma - 1.0, "logarithmic remainder constant on the ball");
    } else if (id == "6.1") {
        need(s > 1.0, "s > 1");
        need(params.p >= 1.0, "p >= 1");
        fill(std::pow((s - 1.0) / params.p, params.p), "L^p Hardy constant");
    } else if (id == "6.1-remainder") {
        need(s > 1.0, "s > 1");
        need(params.p >= 1.0, "p >= 1");
        fill(std::pow((s - 1.0) / params.p, params.p - 1.0), "L^p curvature term constant");
    } else {
        throw InvalidArgument("unknown inequality id: " + id);
    }
    return c;
}

CheegerEstimate cheeger_estimate(const Domain& domain, int samples) {
    if (domain.kind() != DomainKind::Ball) throw HypothesisViolation("Cheeger estimate is implemented for balls");
    require(samples >= 1, "Cheeger estimate needs samples >= 1");
    const int n = domain.dim();
    const double R = domain.spec().radius;
    CheegerEstimate out{geometry::kInf, 0.0, false, false};
    for (int k = 1; k <= samples; ++k) {
        const double rho = R * k / samples;
        // |boundary B_rho| / |B_rho| = rho^(n-1) / (rho^n / n).
        const double ratio = n / rho;
        if (ratio < out.h_value) {
            out.h_value = ratio;
            out.minimizer = rho;
        }
    }
    const auto& props = domain.properties();
    const double lower = (n - 1) * props.curvature.H_min;
    out.bound_ok = out.h_value >= lower;
    out.isoperimetric_ok = props.boundary_area / props.volume >= lower;
    return out;
}

std::string to_string(StudyMode mode) {
    switch (mode) {
        case StudyMode::Limit: return "limit";
        case StudyMode::DecreasingToZero: return "decreasing-to-zero";
        case StudyMode::Validity: return "validity";
    }
    return "?";
}

double fit_power_exponent(const std::vector<double>& params, const std::vector<double>& values) {
    require(params.size() == values.size() && params.size() >= 2, "power fit needs two or more points");
    std::vector<double> x, y;
    for (std::size_t i = 0; i < params.size(); ++i) {
        x.push_back(std::log(params[i]));
        y.push_back(std::log(std::abs(values[i])));
    }
    return line_fit(x, y).first;
}

Extrapolation richardson_limit(const std::vector<double>& params, const std::vector<double>& values) {
    const std::size_t m = values.size();
    Extrapolation none{m ? values.back() : kNaN, kNaN, false};
    if (m < 4) return none;
    std::vector<double> x, y;
    int sign = 0;
    for (std::size_t i = 1; i < m; ++i) {
        const double diff = values[i] - values[i - 1];
        if (diff == 0.0 || !std::isfinite(diff)) return none;
        const int sg = diff > 0 ? 1 : -1;
        if (sign != 0 && sg != sign) return none;
        sign = sg;
        x.push_back(std::log(params[i]));
        y.push_back(std::log(std::abs(diff)));
    }
    const auto [kappa, icpt] = line_fit(x, y);
    if (!(kappa > 0.0)) return none;
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (std::abs(std::expm1(y[i] - (icpt + kappa * x[i]))) >= 0.1) return none;
    }
    const double p_last = params[m - 1];
    const double p_prev = params[m - 2];
    const double C = (values[m - 1] - values[m - 2]) / (std::pow(p_last, kappa) - std::pow(p_prev, kappa));
    return {values[m - 1] - C * std::pow(p_last, kappa), kappa, true};
}

std::vector<double> geometric_ladder(double a, double b, int k) {
    require(k >= 1, "ladder needs at least one point");
    require(a > 0.0 && b > 0.0, "geometric ladder needs positive end points");
    if (k == 1) return {a};
    std::vector<double> out;
    const double la = std::log10(a);
    const double lb = std::log10(b);
    for (int i = 0; i < k; ++i) {
        const double e = la + (lb - la) * i / (k - 1);
        if (i == 0) {
            out.push_back(a);
        } else if (i == k - 1) {
            out.push_back(b);
        } else if (std::abs(e - std::round(e)) < 1e-12) {
            // Decades land on the exactly rounded power of ten.
            out.push_back(std::pow(10.0, std::round(e)));
        } else {
            out.push_back(std::pow(10.0, e));
        }
    }
    return out;
}

StudyReport convergence_study(const StudySpec& spec, const Evaluator& evaluate) {
    const auto& L = spec.ladder;
    require(!L.empty(), "study needs a non-empty ladder");
    for (std::size_t i = 1; i < L.size(); ++i) {
        require(L[i] < L[i - 1], "study ladder must be strictly decreasing");
    }
    auto point_at = [&](std::size_t i) {
        LadderPoint p;
        p.parameter = L[i];
        p.report = evaluate(L[i]);
        p.value = p.report.value;
        p.error_estimate = p.report.error_estimate;
        return p;
    };
    StudyReport out;
    out.spec = spec;
    out.ladder = spec.parallel ? parallel::omp_map<LadderPoint>(L.size(), point_at)
                               : parallel::serial_map<LadderPoint>(L.size(), point_at);

    std::vector<double> values;
    for (const auto& p : out.ladder) values.push_back(p.value);
    out.strictly_decreasing = true;
    for (std::size_t i = 1; i < values.size(); ++i) {
        if (!(values[i] < values[i - 1])) out.strictly_decreasing = false;
    }
    const Extrapolation ex = richardson_limit(L, values);
    out.extrapolated_limit = ex.limit;
    out.extrapolated = ex.applied;
    out.fitted_order = ex.order;

    switch (spec.mode) {
        case StudyMode::Limit:
            out.pass = std::abs(out.extrapolated_limit - spec.prediction) <= spec.tolerance;
            break;
        case StudyMode::DecreasingToZero:
            out.pass = out.strictly_decreasing && values.back() <= spec.threshold;
            break;
        case StudyMode::Validity:
            out.pass = std::all_of(values.begin(), values.end(),
                                   [&](double v) { return v >= spec.prediction - spec.tolerance; });
            break;
    }
    return out;
}

}  // namespace hardylab::constants
