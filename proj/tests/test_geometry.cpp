#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "hardylab/errors.hpp"
#include "hardylab/geometry.hpp"

using namespace hardylab;
using namespace hardylab::geometry;
using doctest::Approx;

namespace {

const Domain ball3 = make_domain(DomainSpec::ball(3, 1.0));
const Domain strip3 = make_domain(DomainSpec::strip(3, 1.0));
const Domain ann = make_domain(DomainSpec::annulus(3, 1.0, 3.0));
const Domain pspace = make_domain(DomainSpec::punctured_space(3));
const Domain pball = make_domain(DomainSpec::punctured_ball(3, 2.0));

std::vector<double> on_axis(double r, int n = 3) {
    std::vector<double> x(n, 0.0);
    x[0] = r;
    return x;
}

// Reach of the closed annulus from the exterior: scan exterior points along
// an axis (inside the hole and beyond R0) and look for points whose nearest
// boundary point, sampled on a circle of the x1-x2 plane, is not unique. The
// reach is the smallest distance to the set among such points.
double reach_by_projection(double r0, double R0) {
    constexpr int kAngles = 3600;
    double reach = kInf;
    auto scan = [&](double rho, double dist_to_K) {
        double best = kInf;
        int minimizers = 0;
        for (double radius : {r0, R0}) {
            for (int k = 0; k < kAngles; ++k) {
                const double th = 2.0 * M_PI * k / kAngles;
                const double dx = radius * std::cos(th) - rho, dy = radius * std::sin(th);
                const double dd = std::hypot(dx, dy);
                if (dd < best - 1e-12) {
                    best = dd;
                    minimizers = 1;
                } else if (std::abs(dd - best) <= 1e-12) {
                    ++minimizers;
                }
            }
        }
        if (minimizers > 1) reach = std::min(reach, dist_to_K);
    };
    for (int i = 0; i <= 200; ++i) {
        const double rho = r0 * i / 200.0;
        scan(rho, r0 - rho);
    }
    for (int i = 1; i <= 200; ++i) {
        const double rho = R0 + 5.0 * i / 200.0;
        scan(rho, rho - R0);
    }
    return reach;
}

}  // namespace

TEST_SUITE("geometry") {
    TEST_CASE("make_domain derives inradius and reach") {
        CHECK(ball3.inradius() == 1.0);
        CHECK(std::isinf(ball3.reach()));
        CHECK(ann.inradius() == 1.0);
        CHECK(ann.reach() == 1.0);
        CHECK(strip3.inradius() == 1.0);
        CHECK(std::isinf(pspace.inradius()));
        CHECK(pball.inradius() == 1.0);
        CHECK_THROWS_AS(make_domain(DomainSpec::annulus(3, 3.0, 1.0)), InvalidArgument);
        CHECK_THROWS_AS(make_domain(DomainSpec::ball(1, 1.0)), InvalidArgument);
        CHECK_THROWS_AS(make_domain(DomainSpec::ball(3, -1.0)), InvalidArgument);
    }

    TEST_CASE("annulus reach matches the unique-projection oracle") {
        CHECK(reach_by_projection(1.0, 3.0) == Approx(ann.reach()).epsilon(1e-12));
    }

    TEST_CASE("distance") {
        CHECK(ball3.distance(std::vector<double>{0.25, 0, 0}) == Approx(0.75));
        CHECK(ann.distance(on_axis(1.4)) == Approx(0.4));
        CHECK(strip3.distance(std::vector<double>{0, 0, 1.7}) == Approx(0.3));
        CHECK(ball3.distance(on_axis(2.0)) == 0.0);
        CHECK(pspace.distance(std::vector<double>{3, 4, 0}) == Approx(5.0));
    }

    TEST_CASE("negative Laplacian of the distance") {
        CHECK(ball3.neg_laplacian(on_axis(0.5)) == Approx(4.0));
        CHECK(strip3.neg_laplacian(std::vector<double>{0, 0, 0.3}) == 0.0);
        CHECK(ann.neg_laplacian(on_axis(1.5)) == Approx(-4.0 / 3.0));
        CHECK_THROWS_AS(ann.neg_laplacian(on_axis(2.0)), OnRidge);
        CHECK_THROWS_AS(pspace.neg_laplacian(on_axis(0.0)), Error);
    }

    TEST_CASE("project_to_boundary") {
        const auto p1 = ball3.project_to_boundary(on_axis(0.5));
        CHECK(p1[0] == Approx(1.0));
        CHECK(p1[1] == 0.0);
        const auto p2 = ann.project_to_boundary(on_axis(1.4));
        CHECK(p2[0] == Approx(1.0));
        const auto p3 = strip3.project_to_boundary(std::vector<double>{7, 2, 0.3});
        CHECK(p3[0] == 7.0);
        CHECK(p3[1] == 2.0);
        CHECK(p3[2] == Approx(0.0));
    }

    TEST_CASE("radial reductions") {
        const auto& rb = ball3.reduction();
        CHECK(rb.mode() == ReductionMode::Radial);
        CHECK(rb.t_min() == 0.0);
        CHECK(rb.t_max() == 1.0);
        CHECK(rb.weight(0.5) == Approx(0.25));
        CHECK(rb.dist(0.3) == Approx(0.7));
        CHECK(rb.neg_lap(0.5) == Approx(4.0));
        CHECK(rb.ridge_points().empty());
        REQUIRE(ann.reduction().ridge_points().size() == 1);
        CHECK(ann.reduction().ridge_points()[0] == 2.0);
        const auto& rp = pball.reduction();
        REQUIRE(rp.ridge_points().size() == 1);
        CHECK(rp.ridge_points()[0] == 1.0);
        CHECK(rp.dist(0.4) == Approx(0.4));
        CHECK(rp.dist(1.5) == Approx(0.5));
        CHECK(rp.ridge_mass(0) == 2.0);
        CHECK(strip3.reduction().mode() == ReductionMode::Slab);
        CHECK(strip3.reduction().weight(0.7) == 1.0);
    }

    TEST_CASE("curvature summaries") {
        const auto& ca = ann.properties().curvature;
        CHECK(ca.H_min == Approx(-1.0));
        // Area-weighted mean (R0 - r0)/(r0^2 + R0^2).
        CHECK(ca.H_mean == Approx(0.2));
        const auto& cs = strip3.properties();
        CHECK(cs.curvature.H_min == 0.0);
        CHECK(cs.curvature.H_max == 0.0);
        CHECK(cs.satisfies_C);
        CHECK(ball3.satisfies_C());
        CHECK_FALSE(ann.satisfies_C());
    }

    TEST_CASE("convexity defects") {
        const auto b2 = make_domain(DomainSpec::ball(2, 1.0));
        // A = 2r - 1 on the unit disc.
        const double rp = std::sqrt(0.26);
        const double expect = 2.0 * (2.0 * rp - 1.0) - 2.0 * (2.0 * 0.5 - 1.0);
        CHECK(semiconcavity_defect(b2, std::vector<double>{0.5, 0}, std::vector<double>{0, 0.1}) ==
              Approx(expect).epsilon(1e-12));
        CHECK(expect == Approx(0.03961).epsilon(1e-4));
        CHECK(reach_residual(ann, on_axis(1.5)) == Approx(0.0).epsilon(1e-14));
        CHECK(reach_residual(ann, on_axis(2.5)) == Approx(3.2));
        CHECK(convexity_defect(ann, DefectKind::ReachResidual, on_axis(2.5), on_axis(0.0)) == Approx(3.2));
        CHECK(reach_residual(strip3, std::vector<double>{0, 0, 0.4}) == 0.0);
        CHECK_THROWS_AS(reach_residual(pspace, on_axis(1.0)), HypothesisViolation);
    }

    TEST_CASE("local convexity defect rejects balls touching the boundary") {
        const std::vector<double> c{0.0, 0.0, 0.0};
        CHECK_THROWS_AS(local_convexity_defect(ball3, c, c, c, 1.0, 10.0), InvalidArgument);
        CHECK(local_convexity_defect(ball3, on_axis(0.1), on_axis(0.05), on_axis(0.1), 0.3, 1.0 / 0.6) >=
              -1e-12);
    }

    TEST_CASE("eikonal and Laplacian bound on random samples") {
        std::mt19937_64 rng(7);
        std::uniform_real_distribution<double> u(-1.0, 1.0);
        for (const Domain* d : {&ball3, &ann}) {
            const double L = d->kind() == DomainKind::Annulus ? 3.0 : 1.0;
            int used = 0;
            while (used < 200) {
                std::vector<double> x{L * u(rng), L * u(rng), L * u(rng)};
                const double t = norm(x);
                if (d->distance(x) < 1e-2 || t < 1e-2 || (d == &ann && std::abs(t - 2.0) < 1e-2)) continue;
                ++used;
                const auto g = d->gradient(x);
                CHECK(norm(g) == Approx(1.0).epsilon(1e-12));
                CHECK(d->neg_laplacian(x) >= (d->dim() - 1) * d->properties().curvature.H_min - 1e-12);
            }
        }
    }

    TEST_CASE("level-set area of the ball") {
        const auto b = make_domain(DomainSpec::ball(4, 2.0));
        CHECK(b.reduction().level_set_area(0.5) == Approx(std::pow(1.5, 3)));
        CHECK(b.properties().boundary_area == Approx(8.0));
    }
}
