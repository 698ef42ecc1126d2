#include <catch_amalgamated.hpp>

#include "cvx/set_ops.hpp"

using namespace cvx;

TEST_CASE("conv_union merges atoms") {
    GeneratorSet a = point_set({{0.0, 0.0}});
    GeneratorSet b = ball_set({3.0, 0.0}, 1.0);
    GeneratorSet u = conv_union(a, b);
    CHECK(u.points.size() == 1);
    CHECK(u.balls.size() == 1);
    ConvexSet C(u);
    CHECK(C.contains({1.5, 0.0}));   // on the segment to the ball
    CHECK(C.contains({3.9, 0.0}));
    CHECK_FALSE(C.contains({0.0, 1.0}));
}

TEST_CASE("conv_union segment certificate passes") {
    GeneratorSet a = ball_set({0.0, 0.0}, 1.0);
    GeneratorSet b = ball_set({4.0, 0.0}, 0.5);
    const Certificate c = conv_union_segments_check(a, b, 64, 5);
    CHECK(c.pass);
}

TEST_CASE("subspace basis embed/coords roundtrip") {
    SubspaceBasis Y;
    Y.ambient_dim = 3;
    Y.rows = {Vec{1.0, 0.0, 0.0}, Vec{0.0, 0.0, 1.0}};
    Y.validate();
    const Vec y{2.0, -1.5};
    CHECK(Y.coords(Y.embed(y)) == y);
    CHECK(Y.project({1.0, 7.0, 2.0}) == Vec{1.0, 0.0, 2.0});
}

TEST_CASE("slice of a ball by the x-axis is the interval") {
    SubspaceBasis Y;
    Y.ambient_dim = 2;
    Y.rows = {Vec{1.0, 0.0}};
    ConvexSet C(ball_set({0.0, 0.0}, 2.0));
    ConvexSet S = slice_subspace(C, Y);
    REQUIRE_FALSE(S.is_empty());
    CHECK(S.contains({1.9}));
    CHECK(S.contains({-1.9}));
    CHECK_FALSE(S.contains({2.1}));
}

TEST_CASE("slice misses a distant set") {
    SubspaceBasis Y;
    Y.ambient_dim = 2;
    Y.rows = {Vec{1.0, 0.0}};
    ConvexSet C(ball_set({0.0, 5.0}, 1.0));
    CHECK(slice_subspace(C, Y).is_empty());
}

TEST_CASE("depth of the unit ball center") {
    ConvexSet C(ball_set({0.0, 0.0}, 1.0));
    CHECK_THAT(depth(C, {0.0, 0.0}), Catch::Matchers::WithinAbs(1.0, 1e-6));
    CHECK_THAT(depth(C, {0.5, 0.0}), Catch::Matchers::WithinAbs(0.5, 1e-6));
    CHECK(depth(C, {2.0, 0.0}) == 0.0);
}

TEST_CASE("refine_sequence erodes with positive margins") {
    std::vector<ConvexSet> C;
    for (int n = 1; n <= 4; ++n)
        C.push_back(ConvexSet(ball_set({0.0, 0.0}, static_cast<double>(n), true)));
    const RefinedSequence r = refine_sequence(C, {0.0, 0.0}, 99);
    REQUIRE(r.cert.pass);
    REQUIRE(r.sets.size() == C.size());
    Rng rng(17);
    for (std::size_t n = 0; n < r.sets.size(); ++n) {
        CHECK(r.eps[n] > 0.0);
        CHECK(r.delta[n] > 0.0);
        // eroded set sits inside C_n with its stated margin
        for (int i = 0; i < 50; ++i) {
            const Vec x = r.sets[n].sample(rng);
            CHECK(C[n].contains(x, 1e-9));
            CHECK(depth(C[n], x, 16, 5) >= 0.5 * r.eps[n]);
        }
    }
    // nesting with margin: D_n + delta_n B inside D_{n+1}
    for (std::size_t n = 0; n + 1 < r.sets.size(); ++n) {
        for (int i = 0; i < 30; ++i) {
            const Vec x = r.sets[n].sample(rng);
            Vec y = add(x, scaled(rng.unit_vector(2), 0.99 * r.delta[n]));
            CHECK(r.sets[n + 1].contains(y, 1e-9));
        }
    }
}
