#include "hardylab/profiles.hpp"

#include <algorithm>
#include <cmath>

#include "hardylab/errors.hpp"
#include "hardylab/format.hpp"

namespace hardylab::profiles {

using geometry::Domain;
using geometry::DomainKind;
using geometry::RadialReduction;

namespace {

void require(bool ok, const std::string& what) {
    if (!ok) throw InvalidArgument(what);
}

double bump_value(const Bump& b, double t) {
    const double xi = std::abs((t - b.center) / b.width);
    if (xi >= 1.0) return 0.0;
    return 1.0 - xi * xi * (3.0 - 2.0 * xi);
}

double bump_derivative(const Bump& b, double t) {
    const double xi = (t - b.center) / b.width;
    if (std::abs(xi) >= 1.0) return 0.0;
    return -6.0 * xi * (1.0 - std::abs(xi)) / b.width;
}

double endpoint_distance(const Piece& p, const RadialReduction& red, double t) {
    if (t == p.lo && !std::isnan(p.lo_dist)) return p.lo_dist;
    if (t == p.hi && !std::isnan(p.hi_dist)) return p.hi_dist;
    return red.dist(t);
}

std::string kv(const std::string& k, double v) { return k + "=" + format_number(v); }

// Splits [lo, hi] at the ridge points inside it.
std::vector<Piece> split_at_ridges(const RadialReduction& red, double lo, double hi, const Descriptor& g) {
    std::vector<Piece> out;
    double a = lo;
    for (double r : red.ridge_points()) {
        if (r > a && r < hi) {
            out.push_back({a, r, g});
            a = r;
        }
    }
    out.push_back({a, hi, g});
    return out;
}

}  // namespace

TestProfile::TestProfile(std::string family_id, std::string family_params, std::vector<Piece> pieces)
    : family_id_(std::move(family_id)), family_params_(std::move(family_params)), pieces_(std::move(pieces)) {
    std::sort(pieces_.begin(), pieces_.end(), [](const Piece& a, const Piece& b) { return a.lo < b.lo; });
    for (std::size_t i = 0; i < pieces_.size(); ++i) {
        require(pieces_[i].lo < pieces_[i].hi, "profile piece must have lo < hi");
        if (i > 0) require(pieces_[i - 1].hi <= pieces_[i].lo, "profile pieces overlap");
    }
}

bool TestProfile::piecewise_constant() const {
    return std::all_of(pieces_.begin(), pieces_.end(), [](const Piece& p) {
        const auto* dp = std::get_if<DistPower>(&p.g);
        return dp && !dp->exponent_is_s_minus_1 && dp->exponent == 0.0;
    });
}

double TestProfile::piece_value(const Piece& p, const RadialReduction& red, double t, double s) {
    if (const auto* dp = std::get_if<DistPower>(&p.g)) {
        const double e = dp->resolved_exponent(s);
        if (e == 0.0) return dp->coef;
        return dp->coef * std::pow(endpoint_distance(p, red, t), e);
    }
    return bump_value(std::get<Bump>(p.g), t);
}

double TestProfile::piece_derivative(const Piece& p, const RadialReduction& red, double t, double s) {
    if (const auto* dp = std::get_if<DistPower>(&p.g)) {
        const double e = dp->resolved_exponent(s);
        if (e == 0.0) return 0.0;
        const auto& b = red.branches()[red.branch_index(t)];
        return dp->coef * e * std::pow(endpoint_distance(p, red, t), e - 1.0) * b.slope;
    }
    return bump_derivative(std::get<Bump>(p.g), t);
}

double TestProfile::value(const RadialReduction& red, double t, double s) const {
    for (const Piece& p : pieces_) {
        if (t >= p.lo && t <= p.hi) return piece_value(p, red, t, s);
    }
    return 0.0;
}

double TestProfile::left_limit(const RadialReduction& red, double t, double s) const {
    for (const Piece& p : pieces_) {
        if (t > p.lo && t <= p.hi) return piece_value(p, red, t, s);
    }
    return 0.0;
}

double TestProfile::right_limit(const RadialReduction& red, double t, double s) const {
    for (const Piece& p : pieces_) {
        if (t >= p.lo && t < p.hi) return piece_value(p, red, t, s);
    }
    return 0.0;
}

double TestProfile::distance_at(const RadialReduction& red, double t) const {
    for (const Piece& p : pieces_) {
        if (t == p.lo || t == p.hi) return endpoint_distance(p, red, t);
    }
    return red.dist(t);
}

std::vector<double> TestProfile::breakpoints(const RadialReduction& red) const {
    std::vector<double> pts;
    for (const Piece& p : pieces_) {
        pts.push_back(p.lo);
        pts.push_back(p.hi);
        for (double r : red.ridge_points()) {
            if (r > p.lo && r < p.hi) pts.push_back(r);
        }
    }
    std::sort(pts.begin(), pts.end());
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
    return pts;
}

std::vector<Jump> TestProfile::jumps(const RadialReduction& red, double s) const {
    std::vector<Jump> out;
    for (double t : breakpoints(red)) {
        // The centre of a radial reduction carries no surface measure.
        if (red.weight(t) == 0.0) continue;
        const double l = left_limit(red, t, s);
        const double r = right_limit(red, t, s);
        const double m = std::abs(r - l);
        if (m > 0.0) out.push_back({t, m, l, r});
    }
    return out;
}

TransverseCone cone_masses(int dim) {
    require(dim >= 2, "cone profile needs dim >= 2");
    const double m = dim - 1;
    return {1.0 / (m * (m + 1.0)), 1.0 / m};
}

ProductProfile::ProductProfile(TestProfile longitudinal, int dim, double transverse_scale)
    : longitudinal_(std::move(longitudinal)), dim_(dim), scale_(transverse_scale), cone_(cone_masses(dim)) {
    require(transverse_scale > 0.0 && std::isfinite(transverse_scale), "transverse scale must be positive");
    require(longitudinal_.piecewise_constant(),
            "product profiles need a piecewise-constant longitudinal part");
}

double ProductProfile::M_eff() const { return std::pow(scale_, 1.0 - dim_) * cone_.M1; }
double ProductProfile::K_eff() const { return std::pow(scale_, 2.0 - dim_) * cone_.K1; }
double ProductProfile::kappa() const { return cone_.K1 / cone_.M1 * scale_; }

std::string ProductProfile::family_params() const {
    return longitudinal_.family_params() + ";" + kv("delta_t", scale_);
}

TestProfile annulus_indicator(const Domain& domain, double delta, double eta) {
    require(domain.kind() == DomainKind::PuncturedSpace || domain.kind() == DomainKind::PuncturedBall,
            "annulus_indicator needs a punctured domain (d = |x| near the puncture)");
    require(delta > 0.0 && delta < eta, "annulus_indicator needs 0 < delta < eta");
    const auto& inner = domain.reduction().branches().front();
    require(std::isfinite(eta) && eta <= inner.hi,
            "annulus_indicator support leaves the region where d = |x|");
    return TestProfile("annulus-indicator", kv("delta", delta) + ";" + kv("eta", eta),
                       {{delta, eta, DistPower{1.0, 0.0, false}}});
}

TestProfile power_profile(const Domain& domain, double exponent) {
    require(exponent > 0.0 && std::isfinite(exponent), "power_profile exponent must be positive");
    const auto& red = domain.reduction();
    return TestProfile("power", kv("exponent", exponent),
                       split_at_ridges(red, red.t_min(), red.t_max(), DistPower{1.0, exponent, false}));
}

TestProfile ball_shell_indicator(const Domain& domain, double delta) {
    require(domain.kind() == DomainKind::Ball, "ball_shell_indicator needs a ball");
    const double R = domain.spec().radius;
    require(delta > 0.0 && delta < R, "ball_shell_indicator needs 0 < delta < R");
    Piece piece{0.0, R - delta, DistPower{1.0, 0.0, false}};
    piece.hi_dist = delta;
    return TestProfile("ball-shell", kv("delta", delta), {piece});
}

ProductProfile strip_slab_profile(const Domain& domain, double eps, double eta, double transverse_scale) {
    require(domain.kind() == DomainKind::Strip, "strip_slab_profile needs a strip");
    require(eps > 0.0 && eps < eta, "strip_slab_profile needs 0 < eps < eta");
    require(eta <= domain.spec().radius, "strip_slab_profile needs eta <= R");
    TestProfile g("strip-slab", kv("eps", eps) + ";" + kv("eta", eta),
                  {{eps, eta, DistPower{1.0, 0.0, false}}});
    return ProductProfile(std::move(g), domain.dim(), transverse_scale);
}

TestProfile cheeger_concentric(const Domain& domain, double rho) {
    require(domain.kind() == DomainKind::Ball, "cheeger_concentric needs a ball");
    require(rho > 0.0 && rho <= domain.spec().radius, "cheeger_concentric needs 0 < rho <= R");
    return TestProfile("cheeger", kv("rho", rho), {{0.0, rho, DistPower{1.0, 0.0, true}}});
}

TestProfile radial_bump(const Domain& domain, double center, double width) {
    require(width > 0.0, "radial_bump width must be positive");
    const auto& red = domain.reduction();
    const double lo = center - width;
    const double hi = center + width;
    require(lo >= red.t_min() && hi <= red.t_max(), "radial_bump support leaves the domain");
    require(red.dist(lo) >= 0.0 && red.dist(hi) >= 0.0, "radial_bump support leaves the domain");
    for (double r : red.ridge_points()) {
        require(!(r > lo && r < hi), "radial_bump support crosses a ridge point");
    }
    return TestProfile("bump", kv("center", center) + ";" + kv("width", width),
                       {{lo, hi, Bump{center, width}}});
}

}  // namespace hardylab::profiles
