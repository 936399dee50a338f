#pragma once

// Integrals of profile densities against monomial kernels in (d, t) over the
// radial reduction. Internal to the functionals module.

#include <limits>
#include <vector>

#include "hardylab/functionals.hpp"

namespace hardylab::reduced {

/// coef * d^dpow * t^tpow * X^xgamma(d/R). With neg_lap_sign the coefficient
/// is multiplied by -slope on each branch (so (n-1) t^-1 becomes -Laplacian d).
struct Term {
    double coef = 1.0;
    double dpow = 0.0;
    double tpow = 0.0;
    double xgamma = 0.0;
    bool neg_lap_sign = false;
};

enum class Density {
    Value,               // g
    AbsDerivative,       // |g'|
    DerivativeResidual,  // |g'| - slope * g'
};

struct Context {
    const geometry::RadialReduction& red;
    double s;
    double R;  // scale inside X; may be NaN if no term uses X
    functionals::EvalOptions opts;
    double power = 1.0;  // densities are raised to this power (L^p evaluations)
};

/// Sum over profile pieces (split at breakpoints) of the integral of
/// density * w(t) * sum of terms.
quadrature::QuadResult integrate(const Context& ctx, const profiles::TestProfile& g, Density density,
                                 const std::vector<Term>& terms);

/// w(t) * sum of terms at a point on the given branch; `d` overrides the
/// distance computed from t when given.
double kernel_at(const Context& ctx, const geometry::Branch& branch, double t, const std::vector<Term>& terms,
                 double d = std::numeric_limits<double>::quiet_NaN());

/// Jump part: sum over jumps of |jump| * w * kernel.
double jump_sum(const Context& ctx, const profiles::TestProfile& g, const std::vector<Term>& terms);

/// Singular part of -Laplacian d: sum over ridge points of mass * gbar * w * kernel,
/// gbar the average of the one-sided limits.
double ridge_sum(const Context& ctx, const profiles::TestProfile& g, const std::vector<Term>& terms);

/// Boundary terms of the integration by parts of (s-1) H against d^(1-s):
/// sum over breakpoints of (|g+ - g-| + slope_L g- - slope_R g+) w d^(1-s).
double breakpoint_sum(const Context& ctx, const profiles::TestProfile& g);

/// The stable numerator G - c0 H (plus kappa times the transverse part),
/// from the integration-by-parts identity. `curvature` replaces the default
/// -Laplacian d kernel (already multiplied by d^(1-s)) when non-empty.
quadrature::QuadResult by_parts_numerator(const Context& ctx, functionals::ProfileRef profile, double c0,
                                          const std::vector<Term>& curvature = {});

}  // namespace hardylab::reduced
