#include "hardylab/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "hardylab/errors.hpp"
#include "hardylab/format.hpp"

namespace hardylab::geometry {

namespace {

void require(bool ok, const std::string& what) {
    if (!ok) throw InvalidArgument("invalid domain spec: " + what);
}

std::vector<Branch> make_branches(const DomainSpec& s) {
    switch (s.kind) {
        case DomainKind::Ball: return {{0.0, s.radius, -1, s.radius}};
        case DomainKind::Strip:
            return {{0.0, s.radius, +1, 0.0}, {s.radius, 2.0 * s.radius, -1, 2.0 * s.radius}};
        case DomainKind::PuncturedSpace: return {{0.0, kInf, +1, 0.0}};
        case DomainKind::PuncturedBall: {
            const double mid = 0.5 * s.radius;
            return {{0.0, mid, +1, 0.0}, {mid, s.radius, -1, s.radius}};
        }
        case DomainKind::Annulus: {
            const double mid = 0.5 * (s.inner + s.outer);
            return {{s.inner, mid, +1, s.inner}, {mid, s.outer, -1, s.outer}};
        }
    }
    throw std::logic_error("unreachable domain kind");
}

CurvatureSummary make_curvature(const DomainSpec& s) {
    const int n = s.dim;
    const double nan = std::numeric_limits<double>::quiet_NaN();
    CurvatureSummary c;
    switch (s.kind) {
        case DomainKind::Ball: {
            const double k = 1.0 / s.radius;
            c.kappas = {std::vector<double>(n - 1, k)};
            c.H_min = c.H_max = c.H_mean = k;
            c.reach = kInf;
            break;
        }
        case DomainKind::Strip:
            c.kappas = {std::vector<double>(n - 1, 0.0), std::vector<double>(n - 1, 0.0)};
            c.H_min = c.H_max = c.H_mean = 0.0;
            c.reach = kInf;
            break;
        case DomainKind::PuncturedSpace:
            c.kappas = {{}};
            c.H_min = c.H_max = -kInf;
            c.H_mean = nan;
            c.reach = kInf;  // closure is all of R^n
            break;
        case DomainKind::PuncturedBall: {
            const double k = 1.0 / s.radius;
            c.kappas = {std::vector<double>(n - 1, k), {}};
            c.H_min = -kInf;
            c.H_max = k;
            c.H_mean = nan;
            c.reach = kInf;  // closure is the closed ball
            break;
        }
        case DomainKind::Annulus: {
            const double ki = -1.0 / s.inner;
            const double ko = 1.0 / s.outer;
            c.kappas = {std::vector<double>(n - 1, ki), std::vector<double>(n - 1, ko)};
            c.H_min = ki;
            c.H_max = ko;
            const double ai = std::pow(s.inner, n - 1);
            const double ao = std::pow(s.outer, n - 1);
            c.H_mean = (ai * ki + ao * ko) / (ai + ao);
            c.reach = s.inner;
            break;
        }
    }
    return c;
}

}  // namespace

std::string to_string(DomainKind kind) {
    switch (kind) {
        case DomainKind::Ball: return "ball";
        case DomainKind::Strip: return "strip";
        case DomainKind::PuncturedSpace: return "punctured-space";
        case DomainKind::PuncturedBall: return "punctured-ball";
        case DomainKind::Annulus: return "annulus";
    }
    return "?";
}

DomainKind domain_kind_from_string(const std::string& name) {
    for (auto k : {DomainKind::Ball, DomainKind::Strip, DomainKind::PuncturedSpace,
                   DomainKind::PuncturedBall, DomainKind::Annulus}) {
        if (to_string(k) == name) return k;
    }
    throw InvalidArgument("unknown domain kind '" + name + "'");
}

std::string geometry_params_string(const DomainSpec& s) {
    switch (s.kind) {
        case DomainKind::Ball:
        case DomainKind::Strip: return "R=" + format_number(s.radius);
        case DomainKind::PuncturedSpace: return "";
        case DomainKind::PuncturedBall: return "R_U=" + format_number(s.radius);
        case DomainKind::Annulus:
            return "r0=" + format_number(s.inner) + ";R0=" + format_number(s.outer);
    }
    return "";
}

double norm(std::span<const double> x) {
    double s = 0.0;
    for (double v : x) s += v * v;
    return std::sqrt(s);
}

// ---------------------------------------------------------------------------
// RadialReduction

RadialReduction::RadialReduction(ReductionMode mode, int dim, std::vector<Branch> branches)
    : mode_(mode), dim_(dim), branches_(std::move(branches)) {
    for (std::size_t i = 1; i < branches_.size(); ++i) ridge_points_.push_back(branches_[i].lo);
}

std::size_t RadialReduction::branch_index(double t) const {
    for (std::size_t i = 0; i < branches_.size(); ++i) {
        if (t <= branches_[i].hi) return i;
    }
    return branches_.size() - 1;
}

double RadialReduction::weight(double t) const {
    if (mode_ == ReductionMode::Slab) return 1.0;
    return std::pow(t, dim_ - 1);
}

double RadialReduction::dist(double t) const {
    if (t < t_min() || t > t_max()) return 0.0;
    const Branch& b = branches_[branch_index(t)];
    return b.slope * (t - b.anchor);
}

int RadialReduction::slope(double t) const { return branches_[branch_index(t)].slope; }

double RadialReduction::location_tolerance() const {
    double scale = 1.0;
    if (std::isfinite(t_max())) scale = t_max();
    return 1e-12 * scale;
}

double RadialReduction::neg_lap_on_branch(const Branch& b, double t) const {
    if (mode_ == ReductionMode::Slab) return 0.0;
    // d = slope*(t - anchor) so Laplacian(d) = slope*(n-1)/t.
    return -b.slope * (dim_ - 1) / t;
}

double RadialReduction::neg_lap(double t) const {
    const double tol = location_tolerance();
    for (double r : ridge_points_) {
        if (std::abs(t - r) <= tol) throw OnRidge("point lies on the ridge set");
    }
    if (mode_ == ReductionMode::Radial && std::abs(t) <= tol) {
        throw AtSingularity("-Laplacian(d) is singular at the origin");
    }
    return neg_lap_on_branch(branches_[branch_index(t)], t);
}

double RadialReduction::ridge_mass(std::size_t i) const {
    const Branch& left = branches_.at(i);
    const Branch& right = branches_.at(i + 1);
    return static_cast<double>(left.slope - right.slope);
}

double RadialReduction::level_set_area(double level) const {
    double area = 0.0;
    double last = -kInf;
    for (const Branch& b : branches_) {
        const double t = b.anchor + b.slope * level;
        if (t < b.lo || t > b.hi) continue;
        if (t == last) continue;  // the ridge point belongs to two branches
        area += weight(t);
        last = t;
    }
    return area;
}

// ---------------------------------------------------------------------------
// Domain

Domain::Domain(DomainSpec spec, RadialReduction reduction, DomainProperties props)
    : spec_(spec), reduction_(std::move(reduction)), properties_(std::move(props)) {}

Domain make_domain(const DomainSpec& s) {
    require(s.dim >= 2, "dimension must be at least 2");
    switch (s.kind) {
        case DomainKind::Ball:
        case DomainKind::Strip:
        case DomainKind::PuncturedBall:
            require(s.radius > 0.0 && std::isfinite(s.radius), "radius must be positive");
            break;
        case DomainKind::PuncturedSpace: break;
        case DomainKind::Annulus:
            require(s.inner > 0.0 && s.outer > 0.0 && std::isfinite(s.outer),
                    "annulus radii must be positive");
            require(s.inner < s.outer, "annulus needs r0 < R0");
            break;
    }

    const ReductionMode mode = s.kind == DomainKind::Strip ? ReductionMode::Slab : ReductionMode::Radial;
    RadialReduction red(mode, s.dim, make_branches(s));

    DomainProperties p;
    p.curvature = make_curvature(s);
    const int n = s.dim;
    switch (s.kind) {
        case DomainKind::Ball:
            p.inradius = s.radius;
            p.boundary_area = std::pow(s.radius, n - 1);
            p.volume = std::pow(s.radius, n) / n;
            break;
        case DomainKind::Strip:
            p.inradius = s.radius;
            p.boundary_area = 2.0;
            p.volume = 2.0 * s.radius;
            break;
        case DomainKind::PuncturedSpace:
            p.inradius = kInf;
            p.boundary_area = 0.0;
            p.volume = kInf;
            p.reach_applicable = false;
            break;
        case DomainKind::PuncturedBall:
            p.inradius = 0.5 * s.radius;
            p.boundary_area = std::pow(s.radius, n - 1);
            p.volume = std::pow(s.radius, n) / n;
            p.reach_applicable = false;
            break;
        case DomainKind::Annulus:
            p.inradius = 0.5 * (s.outer - s.inner);
            p.boundary_area = std::pow(s.inner, n - 1) + std::pow(s.outer, n - 1);
            p.volume = (std::pow(s.outer, n) - std::pow(s.inner, n)) / n;
            break;
    }
    const bool analytic_C = s.kind == DomainKind::Ball || s.kind == DomainKind::Strip;

    // Cross-check the flag against the sign of -Laplacian(d) on a sample grid
    // of every branch plus the ridge masses.
    bool sampled_C = true;
    for (const Branch& b : red.branches()) {
        const double hi = std::isfinite(b.hi) ? b.hi : b.lo + 10.0;
        for (int i = 1; i < 32; ++i) {
            const double t = b.lo + (hi - b.lo) * i / 32.0;
            if (red.neg_lap_on_branch(b, t) < 0.0) sampled_C = false;
        }
    }
    for (std::size_t i = 0; i < red.ridge_points().size(); ++i) {
        if (red.ridge_mass(i) < 0.0) sampled_C = false;
    }
    // The puncture carries a negative point mass of -Laplacian(d).
    if (s.kind == DomainKind::PuncturedSpace || s.kind == DomainKind::PuncturedBall) sampled_C = false;
    if (sampled_C != analytic_C) throw std::logic_error("condition (C) flag disagrees with samples");
    p.satisfies_C = analytic_C;

    return Domain(s, std::move(red), std::move(p));
}

RadialReduction radial_reduction(const Domain& domain) { return domain.reduction(); }
DomainProperties domain_properties(const Domain& domain) { return domain.properties(); }

bool Domain::bounded() const {
    return spec_.kind != DomainKind::Strip && spec_.kind != DomainKind::PuncturedSpace;
}

double Domain::reduced_coordinate(std::span<const double> x) const {
    if (x.size() != static_cast<std::size_t>(spec_.dim)) {
        throw InvalidArgument("point dimension does not match the domain");
    }
    if (reduction_.mode() == ReductionMode::Slab) return x.back();
    return norm(x);
}

std::vector<double> Domain::point_at(double t) const {
    std::vector<double> x(spec_.dim, 0.0);
    if (reduction_.mode() == ReductionMode::Slab) {
        x.back() = t;
    } else {
        x.front() = t;
    }
    return x;
}

double Domain::distance(std::span<const double> x) const {
    const double t = reduced_coordinate(x);
    if (reduction_.mode() == ReductionMode::Radial && t == 0.0 &&
        (spec_.kind == DomainKind::PuncturedSpace || spec_.kind == DomainKind::PuncturedBall)) {
        return 0.0;
    }
    if (t <= reduction_.t_min() && spec_.kind != DomainKind::Ball) return 0.0;
    return reduction_.dist(t);
}

const Branch& Domain::branch_checked(double t) const {
    const auto& red = reduction_;
    const double tol = red.location_tolerance();
    if (red.dist(t) <= 0.0) throw InvalidArgument("point is not inside the domain");
    for (double r : red.ridge_points()) {
        if (std::abs(t - r) <= tol) throw OnRidge("point lies on the ridge set");
    }
    if (red.mode() == ReductionMode::Radial && t <= tol) {
        throw AtSingularity("distance gradient is undefined at the origin");
    }
    return red.branches()[red.branch_index(t)];
}

std::vector<double> Domain::gradient(std::span<const double> x) const {
    const double t = reduced_coordinate(x);
    const Branch& b = branch_checked(t);
    std::vector<double> g(spec_.dim, 0.0);
    if (reduction_.mode() == ReductionMode::Slab) {
        g.back() = b.slope;
    } else {
        for (int i = 0; i < spec_.dim; ++i) g[i] = b.slope * x[i] / t;
    }
    return g;
}

double Domain::neg_laplacian(std::span<const double> x) const {
    const double t = reduced_coordinate(x);
    const Branch& b = branch_checked(t);
    return reduction_.neg_lap_on_branch(b, t);
}

std::vector<double> Domain::project_to_boundary(std::span<const double> x) const {
    const double t = reduced_coordinate(x);
    const Branch& b = branch_checked(t);
    std::vector<double> xi(x.begin(), x.end());
    if (reduction_.mode() == ReductionMode::Slab) {
        xi.back() = b.anchor;
    } else {
        // Rescale onto the sphere |y| = anchor; exact up to one rounding.
        for (double& v : xi) v *= b.anchor / t;
    }
    return xi;
}

// ---------------------------------------------------------------------------
// Defects

namespace {

std::vector<double> shifted(std::span<const double> x, std::span<const double> z, double sign) {
    std::vector<double> y(x.begin(), x.end());
    for (std::size_t i = 0; i < y.size(); ++i) y[i] += sign * z[i];
    return y;
}

double squared(std::span<const double> x) {
    double s = 0.0;
    for (double v : x) s += v * v;
    return s;
}

}  // namespace

double semiconcavity_defect(const Domain& domain, std::span<const double> x,
                            std::span<const double> z) {
    auto A = [&](std::span<const double> y) {
        const double d = domain.distance(y);
        return squared(y) - d * d;
    };
    const auto xp = shifted(x, z, 1.0);
    const auto xm = shifted(x, z, -1.0);
    return A(xp) + A(xm) - 2.0 * A(x);
}

double local_convexity_defect(const Domain& domain, std::span<const double> x,
                              std::span<const double> z, std::span<const double> ball_center,
                              double ball_radius, double C) {
    const double r = domain.distance(ball_center) - ball_radius;
    if (ball_radius <= 0.0 || !(r > 0.0)) {
        throw InvalidArgument("ball is not compactly inside the domain");
    }
    const auto xp = shifted(x, z, 1.0);
    const auto xm = shifted(x, z, -1.0);
    auto inside = [&](std::span<const double> y) {
        return norm(shifted(y, ball_center, -1.0)) < ball_radius;
    };
    if (!inside(x) || !inside(xp) || !inside(xm)) {
        throw InvalidArgument("x and x +- z must lie in the ball");
    }
    if (C < 1.0 / r) throw InvalidArgument("C must be at least 1/dist(B, boundary)");
    auto At = [&](std::span<const double> y) { return 0.5 * C * squared(y) - domain.distance(y); };
    return At(xp) + At(xm) - 2.0 * At(x) - (C - 1.0 / r) * squared(z);
}

double reach_residual(const Domain& domain, std::span<const double> x) {
    if (!domain.properties().reach_applicable) {
        throw HypothesisViolation("reach residual is only defined for ball, strip and annulus");
    }
    const double lap = domain.neg_laplacian(x);
    const double h = domain.reach();
    if (!std::isfinite(h)) return lap;
    return (h + domain.distance(x)) * lap + (domain.dim() - 1);
}

double convexity_defect(const Domain& domain, DefectKind kind, std::span<const double> x,
                        std::span<const double> z, const DefectParams& params) {
    switch (kind) {
        case DefectKind::A: return semiconcavity_defect(domain, x, z);
        case DefectKind::Atilde:
            return local_convexity_defect(domain, x, z, params.ball_center, params.ball_radius,
                                          params.C);
        case DefectKind::ReachResidual: return reach_residual(domain, x);
    }
    throw std::logic_error("unreachable defect kind");
}

}  // namespace hardylab::geometry
