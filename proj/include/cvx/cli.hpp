#ifndef CVX_CLI_HPP
#define CVX_CLI_HPP

#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "cvx/counterexamples.hpp"
#include "cvx/extension_ops.hpp"
#include "cvx/serialize.hpp"
#include "cvx/subspace_ext.hpp"

namespace cvx {

struct UsageError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// Exit codes: 0 pass, 1 certificate fail, 2 usage, 3 internal/numerical.
enum ExitCode : int { kPass = 0, kCertFail = 1, kUsage = 2, kInternal = 3 };

struct RunConfig {
    std::string verb;      // extend | verify | counterexample | subspace
    std::string sub;       // strip | elltwo | majorant | lift | kuzeliky | construct-D
    std::string input;     // JSON config path (optional)
    std::uint64_t seed = 1;
    double tol = 1e-7;
    std::size_t samples = 1000;
    std::size_t N = 64;
    std::vector<double> tau_list{1.0, 10.0, 100.0};
    std::string csv_out;
    std::string report_out;
    std::size_t jobs = 1;
    bool verbose = false;
    json extra = json::object();  // parsed config file content, flags win over it
};

struct RunReport {
    int exit_code = kPass;
    std::string report;  // deterministic text (no timings)
    std::string csv;
};

// ---------------------------------------------------------------------------
// named builders for functions and sets referenced from config files
// ---------------------------------------------------------------------------

inline ConvexFn named_convex_fn(const std::string& name, std::size_t dim) {
    if (name == "sqnorm") return sqnorm_fn(dim);
    if (name == "norm") return norm_fn(dim);
    if (name == "zero") return constant_fn(dim, 0.0);
    if (name == "one") return constant_fn(dim, 1.0);
    if (name == "reciprocal_gap") return elltwo_g(dim);
    throw UsageError("unknown function name: " + name);
}

inline ConvexSet named_set(const json& j, std::size_t fallback_dim) {
    if (j.is_string()) {
        const std::string name = j.get<std::string>();
        if (name == "unit_ball") return ConvexSet(ball_set(zeros(fallback_dim), 1.0));
        if (name == "strip") return strip_domain();
        throw UsageError("unknown set name: " + name);
    }
    return set_from_json(j);
}

// ---------------------------------------------------------------------------
// verb implementations
// ---------------------------------------------------------------------------

namespace detail {

inline void note_cert(std::ostringstream& rep, const Certificate& c, int& code) {
    rep << c.report_line() << "\n";
    if (!c.pass && code == kPass) code = kCertFail;
}

inline RunReport run_counterexample_strip(const RunConfig& cfg) {
    RunReport out;
    std::ostringstream rep;
    rep.precision(17);
    rep << "counterexample strip\n";
    if (cfg.tau_list.empty()) throw UsageError("--tau-list must not be empty");

    // closed form vs. the grid oracle on the tau grid
    double worst = 0.0;
    for (const double tau : cfg.tau_list)
        for (double y : {0.0, -0.25, -0.5, -1.0})
            worst = std::max(worst, std::abs(strip_grid_sup(tau, y) - strip_closed_form(tau, y)));
    rep << "grid-vs-closed-form worst gap: " << worst << "\n";

    const StripCertificate sc = no_convex_extension_certificate(cfg.tau_list);
    int code = kPass;
    note_cert(rep, sc.cert, code);
    CsvBuilder csv({"tau", "lb"});
    for (const auto& [tau, lb] : sc.rows) csv.row(tau, lb);
    out.csv = csv.str();
    out.report = rep.str();
    out.exit_code = code;
    return out;
}

inline RunReport run_counterexample_elltwo(const RunConfig& cfg) {
    RunReport out;
    std::ostringstream rep;
    rep.precision(17);
    rep << "counterexample elltwo, N = " << cfg.N << "\n";
    const EllTwoExample ex = build_elltwo(cfg.N);
    rep << "|z_{1,2}| = " << norm(ex.z(1, 2)) << "\n";
    rep << "g(z_{1,2}) = " << ex.g(ex.z(1, 2)) << "\n";

    const BlowupReport br = elltwo_blowup_report(ex);
    int code = kPass;
    note_cert(rep, br.diam_cert, code);
    note_cert(rep, br.growth_cert, code);
    note_cert(rep, br.ndc, code);

    CsvBuilder csv({"n", "k", "norm", "g_value", "cluster_diam"});
    for (const auto& r : br.rows) csv.row(r.n, r.k, r.z_norm, r.g_value, r.cluster_diam);
    out.csv = csv.str();
    out.report = rep.str();
    out.exit_code = code;
    return out;
}

inline RunReport run_extend(const RunConfig& cfg) {
    RunReport out;
    std::ostringstream rep;
    rep.precision(17);

    // defaults: f = sqnorm on the unit ball, extended to U(0,3)
    json j = cfg.extra;
    const ConvexSet C = j.contains("set") ? named_set(j["set"], 2)
                                          : ConvexSet(ball_set(zeros(2), 1.0));
    const std::size_t dim = C.dim();
    const std::string fname = j.value("function", std::string("sqnorm"));
    const double target_radius = j.value("target_radius", 3.0);
    rep << "extend: " << fname << " from a " << dim << "-dim set to U(0," << target_radius
        << ")\n";

    ControlCheckParams cp;
    cp.seed = cfg.seed;
    cp.tol = cfg.tol;
    cp.point_samples = std::max<std::size_t>(64, cfg.samples / 4);
    const DcFn F = DcFn::from_convex(named_convex_fn(fname, dim), C, fname, cp);
    const ConvexSet A(ball_set(zeros(dim), target_radius));
    RadialExtendParams rp;
    rp.check = cp;
    rp.agreement_samples = cfg.samples;
    const ExtensionResult res = dc_extend_radial(F, A, rp);

    int code = kPass;
    note_cert(rep, res.agreement, code);
    for (const auto& s : res.stages)
        rep << "stage " << s.index << ": L_F = " << s.lip_F << ", L_f = " << s.lip_control
            << "\n";
    if (cfg.verbose) rep << res.log;
    CsvBuilder csv({"stage", "lip_F", "lip_control"});
    for (const auto& s : res.stages) csv.row(s.index, s.lip_F, s.lip_control);
    out.csv = csv.str();
    out.report = rep.str();
    out.exit_code = code;
    return out;
}

inline RunReport run_verify(const RunConfig& cfg) {
    RunReport out;
    std::ostringstream rep;
    rep.precision(17);
    json j = cfg.extra;
    const ConvexSet C = j.contains("set") ? named_set(j["set"], 2)
                                          : ConvexSet(ball_set(zeros(2), 1.0));
    const std::string fname = j.value("function", std::string("sqnorm"));
    const ConvexFn f = named_convex_fn(fname, C.dim());
    rep << "verify: " << fname << " on a " << C.dim() << "-dim set\n";

    int code = kPass;
    const Certificate cv = convexity_check(f, C, cfg.samples, cfg.seed, cfg.tol);
    note_cert(rep, cv, code);
    if (C.bounded())
        rep << "lipschitz estimate: " << lipschitz_estimate(f, C, cfg.samples, cfg.seed + 1)
            << "\n";
    out.report = rep.str();
    out.exit_code = code;
    return out;
}

// a canonical pair for subspace demos: Y = x-axis of R^2 (or from config)
inline SubspacePair pair_from_config(const json& j, std::size_t default_dim = 2) {
    SubspaceBasis Y;
    if (j.contains("Y_basis")) {
        for (const auto& row : j["Y_basis"]) Y.rows.push_back(row.get<Vec>());
        Y.ambient_dim = Y.rows.front().size();
    } else {
        Y.ambient_dim = default_dim;
        Y.rows.push_back(unit(default_dim, 0));
    }
    return make_subspace_pair(Y);
}

inline RunReport run_subspace(const RunConfig& cfg) {
    RunReport out;
    std::ostringstream rep;
    rep.precision(17);
    json j = cfg.extra;
    int code = kPass;

    if (cfg.sub == "majorant") {
        const SubspacePair pair = pair_from_config(j);
        const std::size_t K = j.value("stages", std::size_t{6});
        SetSequence D;
        for (std::size_t n = 1; n <= K; ++n)
            D.sets.push_back(ConvexSet(ball_set(zeros(pair.ambient_dim), static_cast<double>(n),
                                                /*open=*/true)));
        const ConvexFn f = named_convex_fn(j.value("function", std::string("sqnorm")),
                                           pair.Y.dim());
        HartmanParams hp;
        hp.seed = cfg.seed;
        hp.tol = cfg.tol;
        const HartmanResult hr = hartman_majorant(f, D, pair.Y, hp);
        rep << "subspace majorant: " << K << " stages\n";
        note_cert(rep, hr.domination, code);
        note_cert(rep, hr.convexity, code);
        note_cert(rep, hr.stabilization, code);
        CsvBuilder csv({"stage", "M", "a", "b", "d"});
        for (const auto& r : hr.rows) csv.row(r.stage, r.M, r.a, r.b, r.d);
        out.csv = csv.str();
    } else if (cfg.sub == "lift") {
        const SubspacePair pair = pair_from_config(j);
        const std::size_t K = j.value("stages", std::size_t{5});
        SetSequence C, D;
        for (std::size_t n = 1; n <= K; ++n) {
            C.sets.push_back(ConvexSet(ball_set(zeros(pair.Y.dim()), static_cast<double>(n), true)));
            D.sets.push_back(ConvexSet(ball_set(zeros(pair.ambient_dim), static_cast<double>(n), true)));
        }
        const LiftResult lr = lift_sequence(C, D, pair, cfg.samples / 2 + 16, 1e-9, cfg.seed);
        rep << "subspace lift: " << K << " stages\n";
        note_cert(rep, lr.slice_cert, code);
    } else if (cfg.sub == "kuzeliky") {
        const SubspacePair pair = pair_from_config(j, 3);
        const double r = j.value("r", 1.0);
        Vec x = j.contains("x") ? j["x"].get<Vec>() : Vec{0.0, 10.0, 0.0};
        if (x.size() != pair.ambient_dim) throw UsageError("kuzeliky: x has wrong dimension");
        const KuzelikyResult kr =
            kuzeliky_point(pair, r, x, 64, cfg.samples, std::max(cfg.tol, 1e-9), cfg.seed);
        rep << "subspace kuzeliky: s = " << kr.s << ", y_x = [";
        for (std::size_t i = 0; i < kr.y_x.size(); ++i) rep << (i ? "," : "") << kr.y_x[i];
        rep << "]\n";
        note_cert(rep, kr.cert, code);
    } else if (cfg.sub == "construct-D") {
        const SubspacePair pair = pair_from_config(j, 3);
        const std::size_t K = j.value("stages", std::size_t{24});
        SetSequence C;
        C.margins.assign(K, 1.0);
        for (std::size_t n = 1; n <= K; ++n)
            C.sets.push_back(
                ConvexSet(ball_set(zeros(pair.Y.dim()), static_cast<double>(2 * n), true)));
        QuotientExtendParams qp;
        qp.seed = cfg.seed;
        qp.z_count = j.value("z_count", std::size_t{4});
        const QuotientExtendResult qr = separable_quotient_extend_sets(pair, C, qp);
        rep << "subspace construct-D: r = " << qr.r << "\n";
        note_cert(rep, qr.slice_cert, code);
        note_cert(rep, qr.coverage_cert, code);
        CsvBuilder csv({"stage", "k_n", "cover_size"});
        for (const auto& r2 : qr.rows) csv.row(r2.n, r2.k_n, r2.cover_size);
        out.csv = csv.str();
    } else {
        throw UsageError("subspace: unknown subcommand '" + cfg.sub + "'");
    }
    out.report = rep.str();
    out.exit_code = code;
    return out;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// run(): dispatch, with atomic artifact writes
// ---------------------------------------------------------------------------

inline RunReport run(RunConfig cfg) {
    if (!cfg.input.empty()) {
        std::ifstream in(cfg.input);
        if (!in) throw UsageError("cannot open config file: " + cfg.input);
        in >> cfg.extra;
    }
    tolerances().dist = cfg.extra.value("tol_dist", tolerances().dist);
    tolerances().mink = cfg.extra.value("tol_mink", tolerances().mink);

    RunReport out;
    if (cfg.verb == "counterexample") {
        if (cfg.sub == "strip")
            out = detail::run_counterexample_strip(cfg);
        else if (cfg.sub == "elltwo")
            out = detail::run_counterexample_elltwo(cfg);
        else
            throw UsageError("counterexample: unknown subcommand '" + cfg.sub + "'");
    } else if (cfg.verb == "extend") {
        out = detail::run_extend(cfg);
    } else if (cfg.verb == "verify") {
        out = detail::run_verify(cfg);
    } else if (cfg.verb == "subspace") {
        out = detail::run_subspace(cfg);
    } else {
        throw UsageError("unknown verb '" + cfg.verb + "'");
    }

    if (!cfg.csv_out.empty()) {
        if (out.csv.empty()) throw UsageError("--csv-out given but this verb emits no CSV");
        atomic_write(cfg.csv_out, out.csv);
    }
    if (!cfg.report_out.empty()) atomic_write(cfg.report_out, out.report);
    return out;
}

}  // namespace cvx

#endif
