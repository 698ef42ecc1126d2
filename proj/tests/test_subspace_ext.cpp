#include <catch_amalgamated.hpp>

#include "cvx/subspace_ext.hpp"

using namespace cvx;

namespace {

SubspaceBasis x_axis(std::size_t ambient) {
    SubspaceBasis Y;
    Y.ambient_dim = ambient;
    Y.rows = {unit(ambient, 0)};
    return Y;
}

}  // namespace

TEST_CASE("dyadic_sequence is deterministic and fresh") {
    const auto a = dyadic_sequence(1, 12);
    const auto b = dyadic_sequence(1, 12);
    REQUIRE(a.size() == 12);
    for (std::size_t i = 0; i < a.size(); ++i) CHECK(dist(a[i], b[i]) == 0.0);
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = i + 1; j < a.size(); ++j) CHECK(dist(a[i], a[j]) > 1e-12);
}

TEST_CASE("make_subspace_pair builds an orthogonal complement") {
    const SubspacePair pair = make_subspace_pair(x_axis(3), 16);
    CHECK(pair.complement.dim() == 2);
    pair.validate();
    for (const auto& z : pair.quotient_dense_seq) CHECK(std::abs(z[0]) < 1e-12);
}

TEST_CASE("sequence_nesting_check on growing balls") {
    SetSequence s;
    for (int n = 1; n <= 4; ++n) s.sets.emplace_back(ball_set({0.0, 0.0}, n));
    CHECK(sequence_nesting_check(s).pass);
    SetSequence bad;
    bad.sets.emplace_back(ball_set({0.0, 0.0}, 2.0));
    bad.sets.emplace_back(ball_set({5.0, 0.0}, 1.0));
    CHECK_FALSE(sequence_nesting_check(bad).pass);
}

TEST_CASE("hartman_majorant: stagewise majorant of |y|^2 on a line") {
    const SubspaceBasis Y = x_axis(2);
    SetSequence D;
    for (int n = 1; n <= 5; ++n) D.sets.emplace_back(ball_set({0.0, 0.0}, n));

    HartmanParams prm;
    prm.check_samples = 600;
    const HartmanResult r = hartman_majorant(sqnorm_fn(1), D, Y, prm);
    CHECK(r.domination.pass);
    CHECK(r.convexity.pass);
    CHECK(r.stabilization.pass);
    REQUIRE(r.rows.size() >= 3);
    // stage arithmetic: when M exceeds the base, b solves a + b d = M
    for (const auto& row : r.rows) {
        if (row.stage == 1) continue;
        if (row.M > row.a)
            CHECK(std::abs(row.a + row.b * row.d - row.M) < 1e-6 * (1.0 + row.M));
        CHECK(row.b >= 0.0);
        CHECK(row.d > 0.0);
    }
    // g dominates f on Y samples directly
    Rng rng(21);
    for (int i = 0; i < 200; ++i) {
        const double y = rng.uniform(-4.0, 4.0);
        CHECK(y * y <= r.g({y, 0.0}) + 1e-7);
    }
}

TEST_CASE("hartman_majorant requires positive stage gaps") {
    const SubspaceBasis Y = x_axis(2);
    SetSequence D;
    D.sets.emplace_back(ball_set({0.0, 0.0}, 1.0));
    D.sets.emplace_back(ball_set({0.0, 0.0}, 1.0));
    D.sets.emplace_back(ball_set({0.0, 0.0}, 1.0));
    CHECK_THROWS_AS(hartman_majorant(sqnorm_fn(1), D, Y), PreconditionError);
}

TEST_CASE("majorant_to_extension agrees with f on Y and stays under g") {
    const SubspaceBasis Y = x_axis(2);
    const ConvexFn f = sqnorm_fn(1);
    const ConvexFn g = sum_fn({sqnorm_fn(2), constant_fn(2, 10.0)});

    MajorantExtendParams prm;
    prm.lambda_grid = 16;
    prm.inner_iters = 120;
    prm.domination_samples = 64;
    const ConvexFn fext = majorant_to_extension(f, g, Y, prm);

    for (const double y : {-1.5, -0.25, 0.0, 0.5, 2.0})
        CHECK(std::abs(fext({y, 0.0}) - y * y) < 1e-6);

    // off Y the extension is controlled by the lam = 1 candidate
    CHECK(fext({0.0, 1.0}) <= 11.0 + 1e-9);
    CHECK(fext({1.0, 2.0}) <= g({1.0, 2.0}) + 1e-9);

    // sampled midpoint convexity (the minimization is approximate)
    Rng rng(31);
    for (int i = 0; i < 10; ++i) {
        const Vec p{rng.uniform(-2.0, 2.0), rng.uniform(-2.0, 2.0)};
        const Vec q{rng.uniform(-2.0, 2.0), rng.uniform(-2.0, 2.0)};
        const Vec m = scaled(add(p, q), 0.5);
        CHECK(fext(m) <= 0.5 * (fext(p) + fext(q)) + 1e-3);
    }
}

TEST_CASE("dc_to_majorant: u - affine minorant of v dominates u - v") {
    const ConvexFn g = dc_to_majorant(sqnorm_fn(2), norm_fn(2), {1.0, 0.0});
    Rng rng(41);
    for (int i = 0; i < 300; ++i) {
        const Vec x{rng.uniform(-8.0, 8.0), rng.uniform(-8.0, 8.0)};
        CHECK(g(x) >= norm2(x) - norm(x) - 1e-9);
    }
    CHECK(convexity_check(g, ConvexSet(ball_set({1.0, 0.0}, 8.0)), 400, 5, 1e-9).pass);
}

TEST_CASE("sets_from_extension: sublevel sets of the norm are balls") {
    const SetSequence seq = sets_from_extension(norm_fn(2), 2, 3);
    REQUIRE(seq.sets.size() == 3);
    for (std::size_t n = 1; n <= 3; ++n) {
        const double lvl = static_cast<double>(n);
        CHECK(seq.sets[n - 1].contains({lvl - 0.1, 0.0}));
        CHECK_FALSE(seq.sets[n - 1].contains({lvl + 0.1, 0.0}));
    }
    const SetSequence sq = sets_from_extension(sqnorm_fn(2), 2, 2);
    CHECK(sq.sets[0].contains({0.9, 0.0}));
    CHECK_FALSE(sq.sets[0].contains({1.05, 0.0}));
}

TEST_CASE("seq_separating_function: exact growth outside each stage") {
    SetSequence C;
    for (int n = 1; n <= 4; ++n) C.sets.emplace_back(ball_set({0.0, 0.0}, n));
    C.margins = {1.0, 1.0, 1.0, 1.0};
    const Vec a{0.0, 0.0};
    const ConvexFn f = seq_separating_function(C, a);

    CHECK(f(a) == 0.0);
    for (int n = 1; n <= 4; ++n) {
        const double rad = n + 0.2;
        CHECK(f({rad, 0.0}) >= static_cast<double>(n));
        CHECK(f({0.0, -rad}) >= static_cast<double>(n));
    }
    // inside C_1 only the anchor term is active, so f is a multiple of |y - a|
    const double ratio = f({0.5, 0.0}) / f({1.0, 0.0});
    CHECK(std::abs(ratio - 0.5) < 1e-9);
}

TEST_CASE("lift_sequence: the lifted sets slice back to C_n") {
    const SubspacePair pair = make_subspace_pair(x_axis(2), 8);
    SetSequence C, D;
    for (int n = 1; n <= 3; ++n) {
        C.sets.emplace_back(ball_set(Vec{0.0}, static_cast<double>(n)));
        D.sets.emplace_back(ball_set({0.0, 0.0}, static_cast<double>(n)));
    }
    const LiftResult r = lift_sequence(C, D, pair, 200);
    CHECK(r.slice_cert.pass);
    REQUIRE(r.lifted.sets.size() == 3);
    // lifted sets contain both D_n and the embedded C_n
    CHECK(r.lifted.sets[0].contains({0.0, 0.9}, 1e-6));
    CHECK(r.lifted.sets[1].contains({1.9, 0.0}, 1e-6));
}

TEST_CASE("kuzeliky_point: cone slice fits in the eightfold hull") {
    const SubspacePair pair = make_subspace_pair(x_axis(2), 8);

    SECTION("x = 0 is trivial") {
        const KuzelikyResult r = kuzeliky_point(pair, 1.0, {0.0, 0.0});
        CHECK(norm(r.y_x) == 0.0);
        CHECK(r.cert.pass);
    }
    SECTION("x far from Y") {
        const KuzelikyResult r = kuzeliky_point(pair, 1.0, {0.0, 10.0});
        CHECK(r.cert.pass);
        CHECK(r.s > 0.0);
        CHECK(std::abs(r.y_x[1]) < 1e-9);  // y_x lies in Y
        CHECK(std::abs(norm(r.y_x) - 8.0 * norm(r.u0)) < 1e-9);
    }
    SECTION("x inside Y") {
        const KuzelikyResult r = kuzeliky_point(pair, 1.0, {5.0, 0.0});
        CHECK(r.cert.pass);
        CHECK(r.s >= 5.9);
    }
    SECTION("r must be positive") {
        CHECK_THROWS_AS(kuzeliky_point(pair, 0.0, {1.0, 1.0}), PreconditionError);
    }
}

TEST_CASE("separable_quotient_extend_sets: slices stay inside C, grid covered") {
    SubspacePair pair;
    pair.ambient_dim = 2;
    pair.Y = x_axis(2);
    pair.complement.ambient_dim = 2;
    pair.complement.rows = {unit(2, 1)};
    pair.quotient_dense_seq = {{0.0, 1.0}, {0.0, -1.0}, {0.0, 0.5}};
    pair.validate();

    SetSequence C;
    for (int n = 1; n <= 6; ++n) C.sets.emplace_back(ball_set(Vec{0.0}, 4.0 * n));

    QuotientExtendParams prm;
    prm.z_count = 3;
    prm.coverage_radius = 1.0;
    prm.coverage_spacing = 1.0;
    prm.slice_samples = 120;

    const QuotientExtendResult r = separable_quotient_extend_sets(pair, C, prm);
    CHECK(r.r > 0.0);
    CHECK(r.slice_cert.pass);
    CHECK(r.coverage_cert.pass);
    REQUIRE(r.rows.size() == 3);
    // k_n strictly increases
    for (std::size_t i = 1; i < r.rows.size(); ++i) CHECK(r.rows[i].k_n > r.rows[i - 1].k_n);
}
