#pragma once

// Exact analytic geometry for the domain catalogue.
//
// Every catalogue domain is radially or slab symmetric, so the distance
// function d is a function of one reduced coordinate t (t = |x| or t = x_n).
// Between ridge points d is affine in t with slope +1 or -1; such a stretch is
// a Branch. All integrals over the domain are taken against the co-area
// weight w(t) = t^(n-1) (radial) or 1 (slab, per unit transverse area), i.e.
// the area constant of the unit sphere is normalised to 1.

#include <limits>
#include <span>
#include <string>
#include <vector>

namespace hardylab::geometry {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

enum class DomainKind { Ball, Strip, PuncturedSpace, PuncturedBall, Annulus };

/// Plain description of one catalogue geometry.
///
/// `radius` is R for Ball, the half-width R for Strip (slab 0 < x_n < 2R) and
/// R_U for PuncturedBall; `inner`/`outer` are r0/R0 for Annulus.
struct DomainSpec {
    DomainKind kind = DomainKind::Ball;
    int dim = 3;
    double radius = 1.0;
    double inner = 0.0;
    double outer = 0.0;

    static DomainSpec ball(int n, double R) { return {DomainKind::Ball, n, R, 0.0, 0.0}; }
    static DomainSpec strip(int n, double R) { return {DomainKind::Strip, n, R, 0.0, 0.0}; }
    static DomainSpec punctured_space(int n) { return {DomainKind::PuncturedSpace, n, 0.0, 0.0, 0.0}; }
    static DomainSpec punctured_ball(int n, double RU) { return {DomainKind::PuncturedBall, n, RU, 0.0, 0.0}; }
    static DomainSpec annulus(int n, double r0, double R0) { return {DomainKind::Annulus, n, 0.0, r0, R0}; }
};

std::string to_string(DomainKind kind);
DomainKind domain_kind_from_string(const std::string& name);

/// Compact "R=1" / "r0=1;R0=3" rendering of the geometric lengths.
std::string geometry_params_string(const DomainSpec& spec);

enum class ReductionMode { Radial, Slab };

/// Maximal interval of the reduced coordinate on which d(t) = slope*(t - anchor).
struct Branch {
    double lo;
    double hi;
    int slope;      // +1 or -1
    double anchor;  // reduced coordinate where this branch of d vanishes
};

/// One-dimensional co-area reduction of a catalogue domain.
class RadialReduction {
public:
    RadialReduction(ReductionMode mode, int dim, std::vector<Branch> branches);

    ReductionMode mode() const { return mode_; }
    int dim() const { return dim_; }
    double t_min() const { return branches_.front().lo; }
    double t_max() const { return branches_.back().hi; }
    const std::vector<Branch>& branches() const { return branches_; }

    /// Interior breakpoints between branches, where d is not differentiable.
    const std::vector<double>& ridge_points() const { return ridge_points_; }

    /// Index of the branch containing t; on a ridge point the left branch.
    std::size_t branch_index(double t) const;

    double weight(double t) const;
    double dist(double t) const;

    /// d'(t) off ridge points.
    int slope(double t) const;

    /// Absolutely continuous part of -Laplacian(d) at t; throws OnRidge on a
    /// ridge point and AtSingularity at t = 0 for radial reductions.
    double neg_lap(double t) const;

    /// Same value without the ridge/singularity checks, for a known branch.
    double neg_lap_on_branch(const Branch& b, double t) const;

    /// Singular part of -Laplacian(d) concentrated on ridge point i, per unit
    /// co-area weight: minus the jump of d' across it (always 2 here).
    double ridge_mass(std::size_t i) const;

    /// Normalised area of the level set {d = level}.
    double level_set_area(double level) const;

    /// Reduced-coordinate tolerance used by the ridge and singularity checks.
    double location_tolerance() const;

private:
    ReductionMode mode_;
    int dim_;
    std::vector<Branch> branches_;
    std::vector<double> ridge_points_;
};

/// Curvature data of the boundary. Principal curvatures are signed so that
/// -Laplacian(d) = (n-1) H on the boundary (positive for a ball).
///
/// Isolated boundary points (the punctures) are treated as spheres of
/// vanishing radius, so they push H_min to -inf; H_mean is NaN whenever the
/// boundary area is not finite and positive.
struct CurvatureSummary {
    double H_min = 0.0;
    double H_max = 0.0;
    double H_mean = 0.0;
    std::vector<std::vector<double>> kappas;  // one list per boundary component
    double reach = kInf;
};

struct DomainProperties {
    CurvatureSummary curvature;
    double inradius = 0.0;
    bool satisfies_C = false;   // -Laplacian(d) >= 0 as a distribution
    bool reach_applicable = true;  // false where closure(Omega) loses the puncture
    double boundary_area = 0.0;    // normalised; per unit transverse area for Strip
    double volume = 0.0;           // normalised; kInf when unbounded
};

class Domain {
public:
    const DomainSpec& spec() const { return spec_; }
    DomainKind kind() const { return spec_.kind; }
    int dim() const { return spec_.dim; }

    /// Reduced coordinate of a point: |x| (radial) or x_n (slab).
    double reduced_coordinate(std::span<const double> x) const;

    /// Distance to the complement; 0 outside the domain.
    double distance(std::span<const double> x) const;

    /// Gradient of d off the ridge set.
    std::vector<double> gradient(std::span<const double> x) const;

    double neg_laplacian(std::span<const double> x) const;

    /// Nearest boundary point x - d(x) grad d(x).
    std::vector<double> project_to_boundary(std::span<const double> x) const;

    const RadialReduction& reduction() const { return reduction_; }
    const DomainProperties& properties() const { return properties_; }

    double inradius() const { return properties_.inradius; }
    double reach() const { return properties_.curvature.reach; }
    bool satisfies_C() const { return properties_.satisfies_C; }
    bool bounded() const;

    /// A point with the given reduced coordinate (on the first axis, or the
    /// last axis for the slab).
    std::vector<double> point_at(double t) const;

private:
    friend Domain make_domain(const DomainSpec& spec);
    Domain(DomainSpec spec, RadialReduction reduction, DomainProperties props);

    const Branch& branch_checked(double t) const;

    DomainSpec spec_;
    RadialReduction reduction_;
    DomainProperties properties_;
};

/// Validates the spec (dim >= 2, positive lengths, r0 < R0) and builds the
/// domain; throws InvalidArgument otherwise.
Domain make_domain(const DomainSpec& spec);

RadialReduction radial_reduction(const Domain& domain);
DomainProperties domain_properties(const Domain& domain);

// Pointwise semiconcavity and reach residuals.

enum class DefectKind { A, Atilde, ReachResidual };

/// A(x+z) + A(x-z) - 2A(x) with A = |x|^2 - d^2, defined on all of R^n.
double semiconcavity_defect(const Domain& domain, std::span<const double> x,
                            std::span<const double> z);

/// Second difference of C|x|^2/2 - d minus (C - 1/r)|z|^2, where r is the
/// distance from the ball B(center, radius) to the boundary. Requires
/// x, x +- z in B, B compactly inside the domain and C >= 1/r.
double local_convexity_defect(const Domain& domain, std::span<const double> x,
                              std::span<const double> z, std::span<const double> ball_center,
                              double ball_radius, double C);

/// (h + d)(-Laplacian d) + (n - 1) with h = reach; for infinite reach the
/// limit statement -Laplacian d itself. Only Ball, Strip and Annulus.
double reach_residual(const Domain& domain, std::span<const double> x);

struct DefectParams {
    std::vector<double> ball_center;
    double ball_radius = 0.0;
    double C = 0.0;
};

double convexity_defect(const Domain& domain, DefectKind kind, std::span<const double> x,
                        std::span<const double> z, const DefectParams& params = {});

double norm(std::span<const double> x);

}  // namespace hardylab::geometry
