#include <catch_amalgamated.hpp>

#include <cstdio>
#include <fstream>

#include "cvx/cli.hpp"

using namespace cvx;

TEST_CASE("run counterexample strip: increasing lower bounds, exit 0") {
    RunConfig cfg;
    cfg.verb = "counterexample";
    cfg.sub = "strip";
    const RunReport r = run(cfg);
    CHECK(r.exit_code == kPass);
    CHECK(r.csv.rfind("tau,lb\n", 0) == 0);
    CHECK(r.csv.find("1.3333333333333") != std::string::npos);
    CHECK(r.report.find("PASS") != std::string::npos);
}

TEST_CASE("run counterexample strip writes artifacts atomically") {
    RunConfig cfg;
    cfg.verb = "counterexample";
    cfg.sub = "strip";
    cfg.csv_out = "cli_probe.csv";
    cfg.report_out = "cli_probe.txt";
    const RunReport r = run(cfg);
    CHECK(r.exit_code == kPass);
    std::ifstream csv(cfg.csv_out);
    std::string line;
    std::getline(csv, line);
    CHECK(line == "tau,lb");
    std::ifstream rep(cfg.report_out);
    CHECK(rep.good());
    std::remove(cfg.csv_out.c_str());
    std::remove(cfg.report_out.c_str());
}

TEST_CASE("run counterexample elltwo at the default truncation") {
    RunConfig cfg;
    cfg.verb = "counterexample";
    cfg.sub = "elltwo";
    cfg.N = 64;
    const RunReport r = run(cfg);
    CHECK(r.exit_code == kPass);
    CHECK(r.csv.rfind("n,k,norm,g_value,cluster_diam\n", 0) == 0);
    CHECK(r.report.find("g(z_{1,2}) = 2") != std::string::npos);
}

TEST_CASE("run verify on the default configuration") {
    RunConfig cfg;
    cfg.verb = "verify";
    const RunReport r = run(cfg);
    CHECK(r.exit_code == kPass);
    CHECK(r.report.find("convexity") != std::string::npos);
}

TEST_CASE("run extend emits stage records") {
    RunConfig cfg;
    cfg.verb = "extend";
    cfg.samples = 300;
    const RunReport r = run(cfg);
    CHECK(r.exit_code == kPass);
    CHECK(r.csv.rfind("stage,lip_F,lip_control\n", 0) == 0);
}

TEST_CASE("run subspace kuzeliky with the default geometry") {
    RunConfig cfg;
    cfg.verb = "subspace";
    cfg.sub = "kuzeliky";
    cfg.samples = 300;
    const RunReport r = run(cfg);
    CHECK(r.exit_code == kPass);
    CHECK(r.report.find("s = ") != std::string::npos);
}

TEST_CASE("usage errors") {
    RunConfig cfg;
    cfg.verb = "frobnicate";
    CHECK_THROWS_AS(run(cfg), UsageError);

    cfg.verb = "counterexample";
    cfg.sub = "nope";
    CHECK_THROWS_AS(run(cfg), UsageError);

    cfg.sub = "strip";
    cfg.input = "no_such_config.json";
    CHECK_THROWS_AS(run(cfg), UsageError);

    cfg.input.clear();
    cfg.tau_list.clear();
    CHECK_THROWS_AS(run(cfg), UsageError);

    RunConfig v;
    v.verb = "verify";
    v.csv_out = "should_not_exist.csv";  // verify emits no CSV
    CHECK_THROWS_AS(run(v), UsageError);
}

TEST_CASE("runs are deterministic") {
    RunConfig cfg;
    cfg.verb = "counterexample";
    cfg.sub = "strip";
    const RunReport a = run(cfg);
    const RunReport b = run(cfg);
    CHECK(a.report == b.report);
    CHECK(a.csv == b.csv);

    RunConfig e;
    e.verb = "extend";
    e.samples = 200;
    CHECK(run(e).report == run(e).report);
}
