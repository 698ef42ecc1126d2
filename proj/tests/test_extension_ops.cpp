#include <catch_amalgamated.hpp>

#include "cvx/extension_ops.hpp"

using namespace cvx;

namespace {
const ConvexSet unit2(ball_set({0.0, 0.0}, 1.0));
}

TEST_CASE("radial_project: exterior points land on the boundary") {
    RadialProjection P{unit2, {0.0, 0.0}};
    const Vec p = radial_project(P, {2.0, 0.0});
    CHECK(std::abs(p[0] - 1.0) < 1e-9);
    CHECK(std::abs(p[1]) < 1e-12);
}

TEST_CASE("radial_project: interior points are fixed") {
    RadialProjection P{unit2, {0.0, 0.0}};
    const Vec x{0.3, -0.4};
    const Vec p = radial_project(P, x);
    CHECK(dist(p, x) < 1e-12);
}

TEST_CASE("radial_project is idempotent") {
    RadialProjection P{unit2, {0.0, 0.0}};
    Rng rng(7);
    for (int i = 0; i < 50; ++i) {
        Vec x{rng.uniform(-4.0, 4.0), rng.uniform(-4.0, 4.0)};
        const Vec p = radial_project(P, x);
        const Vec q = radial_project(P, p);
        CHECK(dist(p, q) < 1e-8);
        CHECK(unit2.contains(p, 1e-8));
    }
}

TEST_CASE("chebyshev_center of a ball is near its center") {
    const ConvexSet C(ball_set({2.0, -1.0}, 0.5));
    const Vec c = chebyshev_center(C, 256, 9);
    CHECK(dist(c, {2.0, -1.0}) < 0.2);
    CHECK(depth(C, c) > 0.3);
}

TEST_CASE("dc_extend_radial: |x|^2 on the unit ball extends past the boundary") {
    ControlCheckParams ck;
    ck.point_samples = 120;
    ck.functional_samples = 16;
    const DcFn F = DcFn::from_convex(sqnorm_fn(2), unit2, "sqnorm", ck);

    RadialExtendParams prm;
    prm.agreement_samples = 400;
    prm.stage_lip_samples = 128;
    prm.check = ck;
    const ConvexSet A(ball_set({0.0, 0.0}, 2.0));

    const ExtensionResult r = dc_extend_radial(F, A, prm);
    CHECK(r.agreement.pass);
    CHECK_FALSE(r.stages.empty());

    // outside the domain the extension is F composed with the radial projection,
    // so it holds the boundary value along each ray
    const Vec probe{1.5, 0.0};
    CHECK(std::abs(r.extended(probe)[0] - 1.0) < 1e-6);

    // agreement on the original domain
    Rng rng(11);
    for (int i = 0; i < 100; ++i) {
        const Vec x = unit2.sample(rng);
        CHECK(std::abs(r.extended(x)[0] - norm2(x)) < 1e-7);
    }
}

TEST_CASE("lipschitz_convex_extend: the norm extends by its own formula") {
    const LipschitzExtendResult r = lipschitz_convex_extend(norm_fn(2), unit2, 1.0, 256, 13);
    CHECK(r.agreement.pass);
    // at (2, 0): inf over the ball of |c| + |x - c| = 2, attained on the segment
    CHECK(std::abs(r.extended({2.0, 0.0}) - 2.0) < 1e-6);
    CHECK(std::abs(r.extended({0.5, 0.0}) - 0.5) < 1e-6);
}

TEST_CASE("lipschitz_convex_extend rejects an understated constant") {
    const ConvexFn f = scale_fn(3.0, norm_fn(2));
    CHECK_THROWS_AS(lipschitz_convex_extend(f, unit2, 0.05, 128, 17), PreconditionError);
}

TEST_CASE("finite_dim_extend: a map on a segment extends to the plane") {
    // C = [-1, 1] x {0}, F(x) = x0^2; X0 = the x-axis
    const ConvexSet seg(point_set({{-1.0, 0.0}, {1.0, 0.0}}));
    ControlCheckParams ck;
    ck.point_samples = 120;
    ck.functional_samples = 16;
    const DcFn F = DcFn::from_convex(
        opaque_fn("x0^2", [](const Vec& x) { return x[0] * x[0]; }), seg, "x0^2", ck);

    SubspaceBasis X0;
    X0.ambient_dim = 2;
    X0.rows = {{1.0, 0.0}};

    FiniteDimExtendParams prm;
    prm.radial.agreement_samples = 300;
    prm.radial.stage_lip_samples = 128;
    prm.radial.check = ck;

    const ExtensionResult r = finite_dim_extend(F, X0, prm);
    CHECK(r.agreement.pass);
    // the extension factors through the orthogonal projection onto the x-axis
    CHECK(std::abs(r.extended({0.5, 7.0})[0] - 0.25) < 1e-6);
    CHECK(std::abs(r.extended({-0.25, -3.0})[0] - 0.0625) < 1e-6);
}
