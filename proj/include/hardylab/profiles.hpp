#pragma once

// Test-function families, kept as exact BV objects: smooth pieces in the
// reduced coordinate plus the jumps between them. Nothing is mollified.

#include <limits>
#include <string>
#include <variant>
#include <vector>

#include "hardylab/geometry.hpp"

namespace hardylab::profiles {

/// g = coef * d^exponent. With `exponent_is_s_minus_1` the exponent is the
/// Hardy parameter s - 1, bound when the profile is evaluated.
struct DistPower {
    double coef = 1.0;
    double exponent = 0.0;
    bool exponent_is_s_minus_1 = false;

    double resolved_exponent(double s) const { return exponent_is_s_minus_1 ? s - 1.0 : exponent; }
};

/// C^1 cubic cap 1 - 3 xi^2 + 2 |xi|^3 with xi = (t - center) / width.
struct Bump {
    double center = 0.0;
    double width = 1.0;
};

using Descriptor = std::variant<DistPower, Bump>;

/// One smooth piece on [lo, hi]. An endpoint within rounding of the boundary
/// (say t = R - 1e-40) cannot be told apart from it in t, so its exact
/// distance is stored in lo_dist / hi_dist.
struct Piece {
    double lo;
    double hi;
    Descriptor g;
    double lo_dist = std::numeric_limits<double>::quiet_NaN();
    double hi_dist = std::numeric_limits<double>::quiet_NaN();
};

struct Jump {
    double t;
    double magnitude;  // |g(t+) - g(t-)|
    double left;       // g(t-)
    double right;      // g(t+)
};

class TestProfile {
public:
    TestProfile(std::string family_id, std::string family_params, std::vector<Piece> pieces);

    const std::string& family_id() const { return family_id_; }
    const std::string& family_params() const { return family_params_; }
    const std::vector<Piece>& pieces() const { return pieces_; }

    bool piecewise_constant() const;

    /// g(t); zero off the pieces. On a piece boundary the left piece wins.
    double value(const geometry::RadialReduction& red, double t, double s) const;

    /// Descriptor value and t-derivative on a known piece.
    static double piece_value(const Piece& p, const geometry::RadialReduction& red, double t, double s);
    static double piece_derivative(const Piece& p, const geometry::RadialReduction& red, double t,
                                   double s);

    /// Distance at a reduced coordinate, exact at stored piece endpoints.
    double distance_at(const geometry::RadialReduction& red, double t) const;

    /// Piece endpoints and the ridge points they straddle, sorted.
    std::vector<double> breakpoints(const geometry::RadialReduction& red) const;

    /// One-sided limits at a breakpoint (zero outside the support).
    double left_limit(const geometry::RadialReduction& red, double t, double s) const;
    double right_limit(const geometry::RadialReduction& red, double t, double s) const;

    /// Nonzero jumps, from the one-sided limits at each breakpoint.
    std::vector<Jump> jumps(const geometry::RadialReduction& red, double s) const;

private:
    std::string family_id_;
    std::string family_params_;
    std::vector<Piece> pieces_;
};

/// Transverse cone phi(y') = max(0, 1 - |y'|) on R^(n-1), normalised sphere.
struct TransverseCone {
    double M1;  // integral of phi
    double K1;  // integral of |grad phi|
};
TransverseCone cone_masses(int dim);

/// Product test function phi(delta_t x') g(x_n) on the strip, with all
/// integrals reported per unit transverse mass M_eff.
class ProductProfile {
public:
    ProductProfile(TestProfile longitudinal, int dim, double transverse_scale);

    const TestProfile& longitudinal() const { return longitudinal_; }
    int dim() const { return dim_; }
    double transverse_scale() const { return scale_; }
    double M_eff() const;
    double K_eff() const;
    /// K_eff / M_eff = (K1 / M1) * delta_t.
    double kappa() const;
    const std::string& family_id() const { return longitudinal_.family_id(); }
    std::string family_params() const;

private:
    TestProfile longitudinal_;
    int dim_;
    double scale_;
    TransverseCone cone_;
};

// Family constructors. Each validates against the target domain and throws
// InvalidArgument on bad parameters.

/// Indicator of delta < |x| < eta on a punctured domain, where d = |x|.
TestProfile annulus_indicator(const geometry::Domain& domain, double delta, double eta);

/// d^exponent on the whole domain.
TestProfile power_profile(const geometry::Domain& domain, double exponent);

/// Indicator of |x| < R - delta on a ball.
TestProfile ball_shell_indicator(const geometry::Domain& domain, double delta);

/// Indicator of eps < x_n < eta times the scaled transverse cone.
ProductProfile strip_slab_profile(const geometry::Domain& domain, double eps, double eta,
                                  double transverse_scale);

/// d^(s-1) on the concentric ball |x| < rho of a ball.
TestProfile cheeger_concentric(const geometry::Domain& domain, double rho);

/// Cubic bump in the reduced coordinate, away from ridge points.
TestProfile radial_bump(const geometry::Domain& domain, double center, double width);

}  // namespace hardylab::profiles
