#pragma once

// Hardy quotients, remainder functionals, inequality gaps and divergence
// residuals, all evaluated through the radial reduction.
//
// Normalised units throughout: the sphere area is 1, and strip quantities are
// per unit transverse mass.

#include <cmath>
#include <limits>
#include <map>
#include <string>

#include "hardylab/geometry.hpp"
#include "hardylab/profiles.hpp"
#include "hardylab/quadrature.hpp"

namespace hardylab::functionals {

inline constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

struct EvalOptions {
    double tol = 1e-10;       // relative quadrature tolerance
    bool fast_paths = true;   // closed forms for pure power / log integrands
};

/// Read-only view of either profile kind. A plain TestProfile has no
/// transverse part (kappa = 0).
class ProfileRef {
public:
    ProfileRef(const profiles::TestProfile& p) : shape_(&p) {}
    ProfileRef(const profiles::ProductProfile& p) : shape_(&p.longitudinal()), product_(&p) {}

    const profiles::TestProfile& shape() const { return *shape_; }
    bool is_product() const { return product_ != nullptr; }
    double kappa() const;
    std::string family_id() const { return shape_->family_id(); }
    std::string family_params() const;

private:
    const profiles::TestProfile* shape_;
    const profiles::ProductProfile* product_ = nullptr;
};

struct EvaluationReport {
    geometry::DomainSpec domain;
    std::string family;
    std::string family_params;
    std::string functional;
    double s = kNaN;
    double beta = kNaN;
    double gamma = kNaN;
    double p = kNaN;

    double gradient_smooth = kNaN;  // smooth part of the integral of |grad u| d^(1-s)
    double gradient_jumps = kNaN;   // jump part of the same
    double gradient_term = kNaN;    // their sum
    double hardy_term = kNaN;       // integral of |u| d^(-s)
    std::map<std::string, double> remainder_terms;

    double value = kNaN;
    double error_estimate = 0.0;

    std::string prediction;  // empty when no prediction applies
    double gap = kNaN;
    std::string pass;        // "", "true" or "false"
};

// Scalar helpers.

/// (1 - log t)^(-gamma) for t in (0, 1].
double x_log(double t, double gamma);

/// Relative difference between (X^(gamma-1))'(t) by Richardson central
/// differences and the chain rule (gamma-1) X^gamma(t) / t.
double x_chain_rule_residual(double t, double gamma);

// Quotients. Each has a report form and a value-only form.

/// Integral of |grad u| d^(1-s) over integral of |u| d^(-s).
EvaluationReport ratio_plain_report(const geometry::Domain& domain, ProfileRef profile, double s,
                                    const EvalOptions& opts = {});
double ratio_plain(const geometry::Domain& domain, ProfileRef profile, double s,
                   const EvalOptions& opts = {});

/// [G - (s-1) H] / integral of |u| d^(beta-s).
EvaluationReport quotient_Qbeta_report(const geometry::Domain& domain, ProfileRef profile, double s,
                                       double beta, const EvalOptions& opts = {});
double quotient_Qbeta(const geometry::Domain& domain, ProfileRef profile, double s, double beta,
                      const EvalOptions& opts = {});

/// [G - (s-1) H] / integral of |u| d^(-1) X^gamma(d/R), R the inradius
/// unless given.
EvaluationReport quotient_Qgamma_report(const geometry::Domain& domain, ProfileRef profile, double s,
                                        double gamma, double R = kNaN, const EvalOptions& opts = {});
double quotient_Qgamma(const geometry::Domain& domain, ProfileRef profile, double s, double gamma,
                       double R = kNaN, const EvalOptions& opts = {});

/// [G - (s-n) H] / integral of |u| d^(-n) X^gamma(d/R): the general-domain
/// counterpart of Qgamma, used for punctured domains.
EvaluationReport quotient_Qgamma_n_report(const geometry::Domain& domain, ProfileRef profile, double s,
                                          double gamma, double R = kNaN, const EvalOptions& opts = {});
double quotient_Qgamma_n(const geometry::Domain& domain, ProfileRef profile, double s, double gamma,
                         double R = kNaN, const EvalOptions& opts = {});

enum class ImDenominator { Power, XWeight };

/// I_m[u] / integral of |u| d^(-beta) (Power) or of |u| d^(-1) X(d/R)
/// (XWeight), on a ball.
EvaluationReport remainder_ratio_Im_report(const geometry::Domain& domain, ProfileRef profile, double s,
                                           int m, ImDenominator denom, double beta = kNaN,
                                           const EvalOptions& opts = {});
double remainder_ratio_Im(const geometry::Domain& domain, ProfileRef profile, double s, int m,
                          ImDenominator denom, double beta = kNaN, const EvalOptions& opts = {});

/// [G - c0 H] / integral of |grad u| d^(-alpha).
EvaluationReport gradient_quotient_report(const geometry::Domain& domain, ProfileRef profile, double s,
                                          double c0, double alpha, const EvalOptions& opts = {});
double gradient_quotient(const geometry::Domain& domain, ProfileRef profile, double s, double c0,
                         double alpha, const EvalOptions& opts = {});

struct GapParams {
    double s = kNaN;
    double gamma = kNaN;
    double p = 1.0;
    double C = kNaN;  // remainder constant; gamma - 1 when unset
    double R = kNaN;  // inradius when unset
};

/// LHS - RHS of the named inequality. Ids: 2.3, 2.3-equality, 2.4, 2.7, 2.8,
/// 2.9, 2.10, 2.11, 2.13 (alias 2.17), 5.2, 5.3, 6.1, 1.4. Throws
/// HypothesisViolation when the domain or parameters are outside the
/// inequality's hypotheses. The report's pass field applies the contract
/// gap >= -tol |LHS| (|gap| <= tol |LHS| for 2.3-equality).
EvaluationReport inequality_gap_report(const geometry::Domain& domain, ProfileRef profile,
                                       const std::string& inequality_id, const GapParams& params,
                                       double tol = 1e-8, const EvalOptions& opts = {});
double inequality_gap(const geometry::Domain& domain, ProfileRef profile, const std::string& inequality_id,
                      const GapParams& params, const EvalOptions& opts = {});

/// Integral of u (-Laplacian d) over integral of u.
EvaluationReport meanlap_ratio_report(const geometry::Domain& domain, ProfileRef profile,
                                      const EvalOptions& opts = {});
double meanlap_ratio(const geometry::Domain& domain, ProfileRef profile, const EvalOptions& opts = {});

/// L^p ratio for u = d^((s-1)/p + eps) on a ball. The report carries the
/// closed form under remainder_terms["closed_form"].
EvaluationReport lp_ratio_report(const geometry::Domain& domain, double s, double p, double eps,
                                 const EvalOptions& opts = {});
double lp_ratio(const geometry::Domain& domain, double s, double p, double eps, const EvalOptions& opts = {});

/// Closed form [((s-1)/p + eps)^p - ((s-1)/p)^p] / (eps p).
double lp_ratio_closed_form(double s, double p, double eps);

// Divergence of the vector fields used in the proofs.

struct FieldParams {
    double s = kNaN;
    double gamma = kNaN;
    double R = kNaN;  // inradius when unset; required for unbounded domains
};

struct DivergencePair {
    double analytic;
    double finite_difference;
    double residual;  // |a - b| / (1 + |a|)
};

/// Field ids: thm2.5, thm2.7, thm2.11, thm2.13, sec5.
DivergencePair div_T(const geometry::Domain& domain, const std::string& field_id, const FieldParams& params,
                     double t);
double div_T_residual(const geometry::Domain& domain, const std::string& field_id, const FieldParams& params,
                      double t);

/// Offset grid of `count` reduced coordinates for divcheck, avoiding ridge
/// points and the origin.
std::vector<double> divergence_grid(const geometry::Domain& domain, const FieldParams& params, int count);

}  // namespace hardylab::functionals
