#include <catch_amalgamated.hpp>

#include <cstdio>
#include <fstream>

#include "cvx/serialize.hpp"

using namespace cvx;

TEST_CASE("set JSON roundtrip with points, balls, and cuts") {
    GeneratorSet g;
    g.dim = 2;
    g.points = {{1.0, 0.0}, {0.0, 1.0}};
    g.balls = {{{-1.0, -1.0}, 0.5}};
    ConvexSet s = ConvexSet(g).cut({{1.0, 0.0}, 2.0});

    const json j = set_to_json(s);
    const ConvexSet back = set_from_json(j);
    CHECK(back.dim() == 2);
    CHECK(back.generator().points.size() == 2);
    CHECK(back.generator().balls.size() == 1);
    CHECK(back.cuts().size() == 1);

    Rng rng(3);
    for (int i = 0; i < 200; ++i) {
        Vec x{rng.uniform(-2.0, 2.0), rng.uniform(-2.0, 2.0)};
        CHECK(s.contains(x, 1e-9) == back.contains(x, 1e-9));
    }
}

TEST_CASE("set JSON: empty set and open flag survive") {
    const json je = set_to_json(ConvexSet());
    CHECK(set_from_json(je).is_empty());

    GeneratorSet g = ball_set({0.0}, 1.0, /*open=*/true);
    const json jo = set_to_json(ConvexSet(g));
    CHECK(set_from_json(jo).generator().open);
}

TEST_CASE("implicit sets serialize by name but do not deserialize") {
    ImplicitSet s;
    s.dim = 1;
    s.interior_point = {0.0};
    s.bounding_radius = 2.0;
    s.name = "witness";
    s.membership = [](const Vec& x) { return std::abs(x[0]) < 1.0; };
    const json j = set_to_json(ConvexSet(s));
    CHECK(j["implicit"] == "witness");
    CHECK_THROWS_AS(set_from_json(j), PreconditionError);
}

TEST_CASE("fn_to_json tags each node kind") {
    CHECK(fn_to_json(affine_fn({1.0, 2.0}, 3.0))["node"] == "affine");
    CHECK(fn_to_json(max_fn({norm_fn(2), constant_fn(2, 1.0)}))["node"] == "max");
    CHECK(fn_to_json(sum_fn({norm_fn(2), sqnorm_fn(2)}))["node"] == "sum");
    CHECK(fn_to_json(scale_fn(2.0, norm_fn(2)))["node"] == "scale");
    CHECK(fn_to_json(dist_fn(ConvexSet(ball_set({0.0}, 1.0))))["node"] == "dist");
    CHECK(fn_to_json(norm_fn(2))["node"] == "norm_affine");
    CHECK(fn_to_json(sqnorm_fn(2))["node"] == "square");
    CHECK(fn_to_json(opaque_fn("probe", [](const Vec&) { return 0.0; }))["node"] == "opaque");

    const json j = fn_to_json(sum_fn({norm_fn(2), sqnorm_fn(2)}));
    REQUIRE(j.contains("children"));
    CHECK(j["children"].size() == 2);
}

TEST_CASE("certificate JSON carries the verdict and the worst witness") {
    Certificate c;
    c.kind = CertKind::convexity;
    c.label = "probe";
    c.samples = 10;
    c.pass = false;
    c.worst = {0.25, {1.0, 2.0}, {}, "midpoint"};
    const json j = certificate_to_json(c);
    CHECK(j["pass"] == false);
    CHECK(j["worst"]["amount"] == 0.25);
    CHECK(j["worst"]["at"].size() == 2);

    c.pass = true;
    CHECK_FALSE(certificate_to_json(c).contains("worst"));
}

TEST_CASE("atomic_write leaves the file and removes the temporary") {
    const std::string path = "atomic_write_probe.txt";
    atomic_write(path, "alpha\n");
    atomic_write(path, "beta\n");
    std::ifstream in(path);
    std::string line;
    std::getline(in, line);
    CHECK(line == "beta");
    std::ifstream tmp(path + ".tmp");
    CHECK_FALSE(tmp.good());
    std::remove(path.c_str());
}

TEST_CASE("CsvBuilder formats rows and checks arity") {
    CsvBuilder csv({"tau", "lb"});
    csv.row(1.0, 4.0 / 3.0);
    const std::string s = csv.str();
    CHECK(s.rfind("tau,lb\n", 0) == 0);
    CHECK(s.find("1.3333333333333333") != std::string::npos);
    CHECK_THROWS_AS(csv.row(1.0), PreconditionError);
    CHECK_THROWS_AS(csv.row(1.0, 2.0, 3.0), PreconditionError);
}
