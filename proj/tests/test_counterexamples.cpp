#include <catch_amalgamated.hpp>

#include "cvx/counterexamples.hpp"

using namespace cvx;

TEST_CASE("strip_eval: closed-form anchors") {
    CHECK(strip_eval(3.0, 0.0) == 9.0);
    CHECK(strip_eval(0.0, -0.7) == 0.0);
    CHECK(strip_eval(2.0, -1.0) == 2.0);
    CHECK_THROWS_AS(strip_eval(1.0, 0.5), PreconditionError);
    CHECK_THROWS_AS(strip_eval(1.0, -1.5), PreconditionError);
}

TEST_CASE("strip: grid supremum matches the closed form") {
    Rng rng(3);
    double worst = 0.0;
    for (int i = 0; i < 400; ++i) {
        const double x = rng.uniform(-10.0, 10.0);
        const double y = rng.uniform(-1.0, 0.0);
        worst = std::max(worst, std::abs(strip_grid_sup(x, y) - strip_closed_form(x, y)));
    }
    CHECK(worst <= 1e-9);
}

TEST_CASE("strip: each affine piece minorizes the supremum") {
    Rng rng(5);
    for (int i = 0; i < 200; ++i) {
        const double x = rng.uniform(-5.0, 5.0);
        const double y = rng.uniform(-1.0, 0.0);
        const double t = rng.uniform(-8.0, 8.0);
        CHECK(strip_affine_piece(t, x, y) <= strip_closed_form(x, y) + 1e-12);
    }
}

TEST_CASE("strip: one-sided directional derivatives") {
    // d/dy [x^2/(1-y)] = x^2/(1-y)^2, so the derivative toward (0,-1) at (tau,0)
    // is -tau^2
    CHECK(std::abs(strip_directional_derivative(2.0, Vec{0.0, -1.0}) - (-4.0)) < 1e-6);
    CHECK(std::abs(strip_directional_derivative(1.0, Vec{1.0, 0.0}) - 2.0) < 1e-6);
    CHECK(std::abs(strip_directional_derivative(0.0, Vec{0.0, -1.0})) < 1e-8);
    CHECK_THROWS_AS(strip_directional_derivative(1.0, Vec{0.0, 1.0}), PreconditionError);
}

TEST_CASE("no_convex_extension_certificate: exact lower bounds") {
    const StripCertificate single = no_convex_extension_certificate({3.0});
    REQUIRE(single.rows.size() == 1);
    CHECK(std::abs(single.rows[0].second - 12.0) <= 1e-12);

    const StripCertificate c = no_convex_extension_certificate({1.0, 10.0, 100.0});
    REQUIRE(c.rows.size() == 3);
    CHECK(std::abs(c.rows[0].second - 4.0 / 3.0) <= 1e-12);
    CHECK(std::abs(c.rows[1].second - 400.0 / 3.0) <= 1e-12);
    CHECK(std::abs(c.rows[2].second - 40000.0 / 3.0) <= 1e-12);
    CHECK(c.cert.pass);

    CHECK_THROWS_AS(no_convex_extension_certificate({2.0, 1.0}), PreconditionError);
    CHECK_THROWS_AS(no_convex_extension_certificate({-1.0}), PreconditionError);
}

TEST_CASE("build_elltwo: coordinate identities") {
    const EllTwoExample e2 = build_elltwo(2);
    CHECK(std::abs(norm(e2.z(1, 2)) - 0.5) <= 1e-12);

    const EllTwoExample e3 = build_elltwo(3);
    CHECK(std::abs(e3.h[2] - std::sqrt(5.0) / 3.0) <= 1e-12);
    CHECK(std::abs(norm2(e3.z(2, 3)) - 7.0 / 12.0) <= 1e-12);

    CHECK_THROWS_AS(build_elltwo(1), PreconditionError);
}

TEST_CASE("build_elltwo: pairwise distances inside a cluster") {
    // z_{n,j} and z_{n,k} share the n-th coordinate and are orthogonal elsewhere
    const EllTwoExample ex = build_elltwo(6);
    for (std::size_t n = 1; n < 6; ++n) {
        for (std::size_t j = n + 1; j <= 6; ++j) {
            for (std::size_t k = j + 1; k <= 6; ++k) {
                const double hn = ex.h[n - 1];
                const double aj = hn * (1.0 - 1.0 / static_cast<double>(j));
                const double ak = hn * (1.0 - 1.0 / static_cast<double>(k));
                const double expect = std::sqrt(aj * aj + ak * ak);
                CHECK(std::abs(dist(ex.z(n, j), ex.z(n, k)) - expect) <= 1e-12);
                CHECK(dist(ex.z(n, j), ex.z(n, k)) <= std::sqrt(2.0) * hn + 1e-12);
            }
        }
    }
}

TEST_CASE("elltwo_blowup_report at a small truncation") {
    const EllTwoExample ex = build_elltwo(8);
    const BlowupReport rep = elltwo_blowup_report(ex, /*growth_threshold=*/5.0);
    CHECK(rep.diam_cert.pass);
    CHECK(rep.growth_cert.pass);
    CHECK(rep.ndc.pass);
    REQUIRE_FALSE(rep.rows.empty());
    // first row is z_{1,2}, where g = 1/(1 - 1/2) = 2
    CHECK(rep.rows.front().n == 1);
    CHECK(rep.rows.front().k == 2);
    CHECK(std::abs(rep.rows.front().g_value - 2.0) <= 1e-12);
    // g values grow without bound along the diagonal as N grows
    double top = 0.0;
    for (const auto& r : rep.rows) top = std::max(top, r.g_value);
    CHECK(top > 5.0);
}

TEST_CASE("elltwo_positive_side: g is convex and Lipschitz on strict subsets") {
    const EllTwoExample ex = build_elltwo(4);
    const PositiveSideReport rep = elltwo_positive_side(ex, 0.1, 800, 33);
    CHECK(rep.convexity.pass);
    REQUIRE_FALSE(rep.lipschitz.empty());
    for (const auto& [r, est] : rep.lipschitz) {
        CHECK(est <= 1.0 / ((1.0 - r) * (1.0 - r)) + 1e-6);
        CHECK(est >= 0.0);
    }
    // on U(0, 1/2) the derivative bound is 4
    CHECK(rep.lipschitz.front().first == 0.5);
    CHECK(rep.lipschitz.front().second <= 4.0 + 1e-6);
}
