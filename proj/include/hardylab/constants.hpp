#pragma once

// Predicted sharp constants, B1 bounds, Cheeger estimates, and the ladder
// driver that compares quotient values with the predictions.

#include <cmath>
#include <functional>
#include <string>
#include <vector>

#include "hardylab/functionals.hpp"
#include "hardylab/geometry.hpp"

namespace hardylab::constants {

using functionals::kNaN;

struct ConstantParams {
    double s = kNaN;
    double p = 1.0;
    double gamma = kNaN;
    int k = 1;  // series index for "5.2"
};

struct PredictedConstant {
    std::string inequality_id;
    double value = kNaN;  // NaN when only bounds are known
    double lower = kNaN;
    double upper = kNaN;
    std::string provenance;
    std::vector<std::string> hypotheses;

    bool is_bound() const { return std::isnan(value); }
    /// "v", or "lower..upper" for bounds.
    std::string text() const;
};

/// Ids: 2.3, 2.4, 2.7, 2.8, 2.9, 2.10, 2.11, 2.13 (alias 2.17), 5.2 (uses k),
/// 5.3, 6.1, 6.1-remainder, B1 (alias 1.4). Throws HypothesisViolation when
/// the domain or parameters fall outside the result's hypotheses.
PredictedConstant predicted_constant(const std::string& inequality_id, const geometry::Domain& domain,
                                     const ConstantParams& params);

/// [(s-1) h + (s-n) R] / (h + R); s - 1 for h = inf.
double interpolation_constant(double s, int n, double h, double R);

struct InterpolationEndpoints {
    double general;  // h = 0
    double convex;   // h = inf
};
InterpolationEndpoints interpolation_endpoints_check(double s, int n);

struct B1Bounds {
    double lower;
    double upper;
};

/// ((n-1) H_min, (n-1) H_mean) for Ball and Annulus; (0, 0) for Strip.
B1Bounds b1_bounds(const geometry::Domain& domain);

struct CheegerEstimate {
    double h_value;
    double minimizer;  // the minimizing concentric radius
    bool bound_ok;          // h >= (n-1) H_min
    bool isoperimetric_ok;  // |boundary| / |domain| >= (n-1) H_min
};

/// Minimum of |boundary B_rho| / |B_rho| over concentric balls of a ball.
CheegerEstimate cheeger_estimate(const geometry::Domain& domain, int samples = 64);

// Convergence studies.

enum class StudyMode {
    Limit,             // |extrapolated limit - prediction| <= tolerance
    DecreasingToZero,  // strictly decreasing, final value <= threshold
    Validity,          // no ladder value below prediction - tolerance
};

std::string to_string(StudyMode mode);

struct StudySpec {
    std::vector<double> ladder;  // strictly decreasing
    double prediction = kNaN;
    StudyMode mode = StudyMode::Limit;
    double tolerance = 1e-3;
    double threshold = kNaN;  // DecreasingToZero only
    bool parallel = true;
};

struct LadderPoint {
    double parameter = kNaN;
    double value = kNaN;
    double error_estimate = 0.0;
    functionals::EvaluationReport report;
};

struct StudyReport {
    StudySpec spec;
    std::vector<LadderPoint> ladder;
    double extrapolated_limit = kNaN;
    bool extrapolated = false;  // Richardson applied
    double fitted_order = kNaN;
    bool strictly_decreasing = false;
    bool pass = false;
};

using Evaluator = std::function<functionals::EvaluationReport(double)>;

/// Evaluates the ladder (concurrently when spec.parallel), assembles the
/// points in ladder order, extrapolates when the successive differences
/// follow a clean power law, and applies the pass rule of spec.mode.
StudyReport convergence_study(const StudySpec& spec, const Evaluator& evaluate);

struct Extrapolation {
    double limit;
    double order;
    bool applied;
};

/// Richardson step on (parameter, value) pairs with parameters decreasing:
/// applied only if log|diff| is linear in log parameter within 10%, the
/// differences share a sign and the order is positive. Otherwise the limit
/// is the last value.
Extrapolation richardson_limit(const std::vector<double>& params, const std::vector<double>& values);

/// Least-squares slope of log|value| against log parameter.
double fit_power_exponent(const std::vector<double>& params, const std::vector<double>& values);

/// k geometric points from a to b inclusive.
std::vector<double> geometric_ladder(double a, double b, int k);

}  // namespace hardylab::constants
