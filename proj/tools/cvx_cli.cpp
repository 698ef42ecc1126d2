// command-line front end: verbs extend, verify, counterexample, subspace
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "cvx/cli.hpp"

namespace {

void add_common(CLI::App* app, cvx::RunConfig& cfg) {
    app->add_option("--seed", cfg.seed, "master RNG seed");
    app->add_option("--tol", cfg.tol, "certificate tolerance");
    app->add_option("--samples", cfg.samples, "sample count for checks");
    app->add_option("--config", cfg.input, "JSON config file (flags win)");
    app->add_option("--csv-out", cfg.csv_out, "CSV output path");
    app->add_option("--report-out", cfg.report_out, "report output path");
    app->add_option("--jobs", cfg.jobs, "sampling parallelism (reserved)");
    app->add_flag("--verbose", cfg.verbose, "include construction logs");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"convex / d.c. extension toolkit"};
    app.require_subcommand(1);
    cvx::RunConfig cfg;

    auto* extend = app.add_subcommand("extend", "radial d.c. extension of a function on a set");
    add_common(extend, cfg);

    auto* verify = app.add_subcommand("verify", "convexity / Lipschitz certificates");
    add_common(verify, cfg);

    auto* cex = app.add_subcommand("counterexample", "the strip and ell_2 examples");
    cex->require_subcommand(1);
    auto* strip = cex->add_subcommand("strip", "no-convex-extension certificate");
    strip->add_option("--tau-list", cfg.tau_list, "tau values (positive increasing)")
        ->delimiter(',');
    add_common(strip, cfg);
    auto* elltwo = cex->add_subcommand("elltwo", "blow-up clusters at truncation N");
    elltwo->add_option("--N", cfg.N, "truncation dimension");
    add_common(elltwo, cfg);

    auto* sub = app.add_subcommand("subspace", "extension machinery from a subspace");
    sub->require_subcommand(1);
    for (const char* name : {"majorant", "lift", "kuzeliky", "construct-D"}) {
        auto* s = sub->add_subcommand(name, name);
        add_common(s, cfg);
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : cvx::kUsage;
    }

    cfg.verb = app.get_subcommands().front()->get_name();
    auto* chosen = app.get_subcommands().front();
    if (!chosen->get_subcommands().empty()) cfg.sub = chosen->get_subcommands().front()->get_name();

    try {
        const cvx::RunReport rep = cvx::run(cfg);
        std::cout << rep.report;
        if (!rep.csv.empty() && cfg.csv_out.empty()) std::cout << rep.csv;
        return rep.exit_code;
    } catch (const cvx::UsageError& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return cvx::kUsage;
    } catch (const cvx::CertificationError& e) {
        std::cerr << "certificate failed: " << e.cert.report_line() << "\n";
        return cvx::kCertFail;
    } catch (const cvx::PreconditionError& e) {
        std::cerr << "precondition: " << e.what() << "\n";
        return cvx::kUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return cvx::kInternal;
    }
}
