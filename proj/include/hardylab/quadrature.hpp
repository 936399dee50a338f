#pragma once

// Deterministic one-dimensional integration.
//
// The adaptive engine is a global Gauss-Kronrod (7/15) bisection scheme with
// QUADPACK-style error estimates. Singular endpoint behaviour is removed by a
// change of variables before the engine sees the integrand.

#include <cstddef>
#include <functional>

namespace hardylab::quadrature {

struct QuadResult {
    double value = 0.0;
    double error_estimate = 0.0;
    long subdivisions = 0;

    QuadResult& operator+=(const QuadResult& o) {
        value += o.value;
        error_estimate += o.error_estimate;
        subdivisions += o.subdivisions;
        return *this;
    }
    QuadResult scaled(double c) const;
};

inline QuadResult operator+(QuadResult a, const QuadResult& b) { return a += b; }

using Integrand = std::function<double(double)>;

inline constexpr double kSmoothTol = 1e-10;
inline constexpr double kSingularTol = 1e-8;
inline constexpr long kPanelBudget = 1000000;

/// Adaptive integral of f over [a, b] (a < b, both finite).
///
/// Stops once the summed error estimate is below max(tol*|value|, tol_abs),
/// or below the roundoff floor of the panel sums. Throws NonConvergence when
/// the panel budget runs out.
QuadResult integrate(const Integrand& f, double a, double b, double tol = kSmoothTol,
                     double tol_abs = 0.0);

enum class Endpoint { Left, Right };

/// Integral of f_smooth(t) * dist(t)^alpha over [a, b], where dist is the
/// distance to the chosen endpoint. Requires alpha > -1.
QuadResult integrate_power_endpoint(const Integrand& f_smooth, double alpha, Endpoint endpoint,
                                    double a, double b, double tol = kSingularTol);

/// Integral of f(x) * x^alpha over [x_near, x_far] with 0 <= x_near < x_far.
///
/// For x_near = 0 the substitution u = x^(alpha+1) is used (alpha > -1
/// required). For x_near > 0 the substitution x = exp(sigma) is used and any
/// alpha is allowed, so very short distances such as 1e-40 stay cheap.
QuadResult integrate_power_distance(const Integrand& f, double alpha, double x_near,
                                    double x_far, double tol = kSingularTol);

/// Integral of f_smooth(t) * X(t)^gamma / t over [delta, b] within (0, 1],
/// with X(t) = 1 / (1 - log t), evaluated as the integral of
/// f_smooth(exp(1 - tau)) * tau^(-gamma) over [1 - log b, 1 - log delta].
QuadResult integrate_log_weighted(const Integrand& f_smooth, double gamma, double delta, double b,
                                  double tol = kSingularTol);

// Closed forms used as fast paths and as test oracles.

/// Integral of x^alpha over [x1, x2] with 0 <= x1 < x2 <= inf, computed
/// without cancellation. Throws DivergentIntegral when it does not exist.
double power_integral(double alpha, double x1, double x2);

/// Integral of X(t)^gamma / t over [delta, b] within (0, 1].
double log_weight_integral(double gamma, double delta, double b);

}  // namespace hardylab::quadrature
