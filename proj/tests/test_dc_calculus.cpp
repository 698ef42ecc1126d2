#include <catch_amalgamated.hpp>

#include "cvx/dc_calculus.hpp"

using namespace cvx;

namespace {
const ConvexSet unit2(ball_set({0.0, 0.0}, 1.0));
}

TEST_CASE("convexity_check accepts convex, rejects concave") {
    CHECK(convexity_check(sqnorm_fn(2), unit2, 500, 1, 1e-9).pass);
    const ConvexFn bad = opaque_fn("neg_sqnorm", [](const Vec& x) { return -norm2(x); });
    CHECK_FALSE(convexity_check(bad, unit2, 500, 1, 1e-9).pass);
}

TEST_CASE("lipschitz estimate of the norm is about 1") {
    const double L = lipschitz_estimate(norm_fn(2), unit2, 2000, 2);
    CHECK(L > 0.9);
    CHECK(L < 1.01);
}

TEST_CASE("control_check: affine maps are controlled by zero") {
    std::vector<RealMap> comps;
    comps.push_back({"x0", [](const Vec& x) { return x[0]; }});
    comps.push_back({"x1", [](const Vec& x) { return x[1]; }});
    const Certificate c = control_check(comps, constant_fn(2, 0.0), unit2, {});
    CHECK(c.pass);
}

TEST_CASE("control_check rejects a non-convex control") {
    std::vector<RealMap> comps;
    comps.push_back({"x0", [](const Vec& x) { return x[0]; }});
    const ConvexFn bad = opaque_fn("concave", [](const Vec& x) { return -norm2(x); });
    CHECK_FALSE(control_check(comps, bad, unit2, {}).pass);
}

TEST_CASE("compose_dc: square of the norm through composition") {
    // G(t) = t^2 on [0, 1.5], F = |x| on the unit ball
    const ConvexSet interval(point_set({Vec{0.0}, Vec{1.5}}));
    const DcFn G = DcFn::from_convex(square_fn(norm_fn(1)), interval, "t^2");
    const DcFn F = DcFn::from_convex(norm_fn(2), unit2, "norm");
    const DcFn GF = compose_dc(G, F);
    Rng rng(5);
    for (int i = 0; i < 50; ++i) {
        const Vec x = unit2.sample(rng);
        CHECK_THAT(GF.scalar(x), Catch::Matchers::WithinAbs(norm2(x), 1e-12));
    }
}

TEST_CASE("bilinear_combine: inner product of identity with itself") {
    std::vector<RealMap> comps;
    comps.push_back({"x0", [](const Vec& x) { return x[0]; }});
    comps.push_back({"x1", [](const Vec& x) { return x[1]; }});
    const DcFn Id = DcFn::make(comps, constant_fn(2, 0.0), unit2);
    const DcFn sq = bilinear_combine(inner_product(2), Id, Id);
    Rng rng(6);
    for (int i = 0; i < 50; ++i) {
        const Vec x = unit2.sample(rng);
        CHECK_THAT(sq.scalar(x), Catch::Matchers::WithinAbs(norm2(x), 1e-12));
    }
}

TEST_CASE("glue_dc: nested agreeing pieces glue to the last one") {
    const ConvexSet inner(ball_set({0.0, 0.0}, 1.0, true));
    const ConvexSet outer(ball_set({0.0, 0.0}, 2.0, true));
    const DcFn f1 = DcFn::from_convex(sqnorm_fn(2), inner, "sq_inner");
    const DcFn f2 = DcFn::from_convex(sqnorm_fn(2), outer, "sq_outer");
    GlueParams gp;
    gp.margins = {0.9};
    const DcFn glued = glue_dc({{inner, f1}, {outer, f2}}, gp);
    Rng rng(7);
    for (int i = 0; i < 50; ++i) {
        const Vec x = outer.sample(rng);
        CHECK_THAT(glued.scalar(x), Catch::Matchers::WithinAbs(norm2(x), 1e-12));
    }
}

TEST_CASE("glue_dc rejects disagreeing pieces") {
    const ConvexSet inner(ball_set({0.0, 0.0}, 1.0, true));
    const ConvexSet outer(ball_set({0.0, 0.0}, 2.0, true));
    const DcFn f1 = DcFn::from_convex(sqnorm_fn(2), inner, "sq");
    const DcFn f2 = DcFn::from_convex(sum_fn({sqnorm_fn(2), constant_fn(2, 1.0)}), outer, "sq+1");
    GlueParams gp;
    gp.margins = {0.9};
    CHECK_THROWS_AS(glue_dc({{inner, f1}, {outer, f2}}, gp), NumericError);
}

TEST_CASE("c11_to_dc certifies with the curvature control") {
    // f(x) = x0^2 - x1^2 is C^{1,1} with second-difference bound 2
    std::vector<RealMap> comps;
    comps.push_back({"saddle", [](const Vec& x) { return x[0] * x[0] - x[1] * x[1]; }});
    const DcFn F = c11_to_dc(comps, 2.2, unit2, {});
    CHECK(F.control()(Vec{1.0, 0.0}) > 0.0);
    // too small a curvature bound must fail certification
    CHECK_THROWS_AS(c11_to_dc(comps, 0.05, unit2, {}), CertificationError);
}

TEST_CASE("estimate_deriv_lipschitz on a quadratic") {
    std::vector<RealMap> comps;
    comps.push_back({"q", [](const Vec& x) { return x[0] * x[0] - x[1] * x[1]; }});
    const double K = estimate_deriv_lipschitz(comps, unit2, 500, 3);
    CHECK(K > 1.8);
    CHECK(K < 2.2);
}

TEST_CASE("ndc_witness_check on a synthetic blow-up") {
    const ConvexSet A(ball_set({0.0, 0.0}, 2.0));
    auto F = [](const Vec& x) -> std::optional<double> {
        if (norm(x) > 1.5) return std::nullopt;
        return 1.0 / (1e-3 + std::abs(norm(x) - 1.0));  // spikes near the unit circle
    };
    std::vector<WitnessBall> balls;
    balls.push_back({Vec{1.0, 0.0}, 0.3, {Vec{1.0, 0.0}}});
    balls.push_back({Vec{0.0, 1.0}, 0.2, {Vec{0.0, 1.0}}});
    const Certificate ok = ndc_witness_check(F, A, 0.9, balls, 100.0);
    CHECK(ok.pass);
    const Certificate no = ndc_witness_check(F, A, 0.9, balls, 1e6);
    CHECK_FALSE(no.pass);
    CHECK_THROWS_AS(ndc_witness_check(F, A, 1.5, balls, 1.0), PreconditionError);
}
