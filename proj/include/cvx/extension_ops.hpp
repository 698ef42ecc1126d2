#ifndef CVX_EXTENSION_OPS_HPP
#define CVX_EXTENSION_OPS_HPP

#include <cmath>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "cvx/dc_calculus.hpp"
#include "cvx/set_ops.hpp"

namespace cvx {

// ---------------------------------------------------------------------------
// Radial projection onto the closure of C through the gauge at `center`
// ---------------------------------------------------------------------------

struct RadialProjection {
    ConvexSet C;
    Vec center;
    double mink_tol = tolerances().mink;

    double mu(const Vec& x) const { return minkowski(C, center, x, mink_tol); }
};

// P(x) = x on the closure; center + (x-center)/mu outside. Along a recession
// ray the gauge is 0 and the ray lies in the closure, so x is returned.
inline Vec radial_project(const RadialProjection& P, const Vec& x) {
    const double m = P.mu(x);
    if (m <= 1.0) return x;
    Vec r = P.center;
    axpy(r, 1.0 / m, sub(x, P.center));
    return r;
}

// Chebyshev-like center: sampled maximization of the interior depth.
inline Vec chebyshev_center(const ConvexSet& C, std::size_t samples = 128,
                            std::uint64_t seed = 4242) {
    Rng rng(seed);
    Vec best = C.interior_point();
    double bestd = depth(C, best);
    for (std::size_t i = 0; i < samples; ++i) {
        const Vec p = C.sample(rng);
        const double d = depth(C, p);
        if (d > bestd) {
            bestd = d;
            best = p;
        }
    }
    if (bestd <= 0.0) throw PreconditionError("chebyshev_center: set has no interior");
    return best;
}

// ---------------------------------------------------------------------------
// ExtensionResult
// ---------------------------------------------------------------------------

struct StageRecord {
    std::size_t index = 0;
    double lip_F = 0.0;        // Lipschitz estimate of F on (int C) cap A_n
    double lip_control = 0.0;  // Lipschitz estimate of the control there
};

struct ExtensionResult {
    DcFn extended;
    Certificate agreement;
    std::vector<StageRecord> stages;
    std::string log;
};

// ---------------------------------------------------------------------------
// dc_extend_radial: F-hat = F* o (P|_A)
// ---------------------------------------------------------------------------

struct RadialExtendParams {
    std::optional<std::vector<ConvexSet>> exhaustion;  // D_n, constructed if absent
    double window_radius = 16.0;  // certification window when A is unbounded
    std::size_t agreement_samples = 10000;
    double agreement_tol = 1e-7;
    std::size_t stage_lip_samples = 512;
    ControlCheckParams check;
};

namespace detail {

// nearest-point evaluation of the continuous extension of F to the closure
inline Vec closure_eval(const DcFn& F, const ConvexSet& C, const Vec& center, const Vec& x) {
    if (C.contains(x, 1e-12)) return F(x);
    Vec p = distance(C, x).nearest;
    // nudge toward the center so we evaluate strictly inside
    axpy(p, 1e-9, sub(center, p));
    return F(p);
}

}  // namespace detail

inline ExtensionResult dc_extend_radial(const DcFn& F, const ConvexSet& A,
                                        const RadialExtendParams& prm = {}) {
    const ConvexSet& C = F.domain();
    const std::size_t n = C.dim();
    const Vec center = chebyshev_center(C);

    const bool a_bounded = A.bounded();
    const ConvexSet cert_domain =
        a_bounded ? A
                  : ConvexSet(ball_set(center, prm.window_radius));

    std::ostringstream log;
    log.precision(12);
    log << "dc_extend_radial: center=(";
    for (std::size_t i = 0; i < n; ++i) log << (i ? "," : "") << center[i];
    log << ")" << (a_bounded ? "" : " [unbounded A: certification window used]") << "\n";

    // --- stage sets A_n = D_n cap U(center, n), condition (iii) data -------
    const double cover_radius =
        a_bounded ? A.bounding_radius() + norm(A.interior_point()) + 1.0 : prm.window_radius;
    const std::size_t K = std::min<std::size_t>(64, static_cast<std::size_t>(cover_radius) + 2);

    std::vector<ConvexSet> D;
    if (prm.exhaustion) {
        D = *prm.exhaustion;
    } else {
        // sublevel sets of the tracked control, the route through bounded
        // sublevels of a continuous convex function
        const ConvexFn ctrl = F.control();
        const double c0 = ctrl(center);
        for (std::size_t k = 1; k <= K; ++k) {
            ImplicitSet d;
            d.dim = n;
            d.interior_point = center;
            d.bounding_radius = static_cast<double>(k) + 1.0;
            d.name = "control_sublevel";
            const double level = c0 + static_cast<double>(k);
            const double rad = static_cast<double>(k);
            const ConvexSet Acopy = A;
            d.membership = [ctrl, level, center, rad, Acopy](const Vec& x) {
                return dist(x, center) < rad && Acopy.contains(x) && ctrl(x) < level;
            };
            D.emplace_back(d);
        }
    }

    ExtensionResult out;
    double max_lip = 0.0;
    Rng rng(prm.check.seed + 53);
    for (std::size_t k = 0; k < D.size(); ++k) {
        // (int C) cap A_k, sampled through C and filtered by the stage set
        std::vector<Vec> pts;
        for (std::size_t i = 0; i < 4 * prm.stage_lip_samples && pts.size() < prm.stage_lip_samples;
             ++i) {
            const Vec x = C.sample(rng);
            if (D[k].contains(x) && dist(x, center) < static_cast<double>(k + 1)) pts.push_back(x);
        }
        if (pts.size() < 2) continue;
        auto pair_lip = [&](std::size_t count, auto&& eval) {
            double best = 0.0;
            Rng r2(prm.check.seed + 100 + k);
            for (std::size_t i = 0; i < count; ++i) {
                const Vec& x = pts[r2.integer(pts.size())];
                const Vec& y = pts[r2.integer(pts.size())];
                const double d = dist(x, y);
                if (d < 1e-14) continue;
                best = std::max(best, eval(x, y) / d);
            }
            return best;
        };
        const auto& ctrl = F.control();
        const double lf = pair_lip(prm.stage_lip_samples,
                                   [&](const Vec& x, const Vec& y) { return dist(F(x), F(y)); });
        const double lf2 = pair_lip(2 * prm.stage_lip_samples,
                                    [&](const Vec& x, const Vec& y) { return dist(F(x), F(y)); });
        if (lf2 > 2.0 * lf + 1e-9)
            throw NumericError("dc_extend_radial: stage " + std::to_string(k + 1) +
                               ": Lipschitz control certification failed (unstable estimate)");
        const double lc = pair_lip(prm.stage_lip_samples, [&](const Vec& x, const Vec& y) {
            return std::abs(ctrl(x) - ctrl(y));
        });
        out.stages.push_back({k + 1, lf2, lc});
        max_lip = std::max(max_lip, lf2 + lc);
        log << "  stage " << (k + 1) << ": L_F=" << lf2 << " L_f=" << lc << "\n";
    }
    if (out.stages.empty())
        throw NumericError("dc_extend_radial: stage 1: no usable stage data");

    // --- P as a d.c. mapping via the composition machinery -----------------
    const RadialProjection P{C, center};
    const ConvexSet Ccopy = C;
    const Vec ctr = center;
    const ConvexFn mu_fn = opaque_fn(
        "gauge", [Ccopy, ctr](const Vec& x) { return minkowski(Ccopy, ctr, x); });
    const ConvexFn one_or_mu = max_fn({constant_fn(n, 1.0), mu_fn});

    ControlCheckParams light = prm.check;
    light.point_samples = std::max<std::size_t>(64, prm.check.point_samples / 4);

    const DcFn mu_dc = DcFn::from_convex(one_or_mu, cert_domain, "max{1,mu}", light);

    // 1/t on [1, T] with T covering the gauge over the certification window
    double gauge_hi = 2.0;
    for (std::size_t i = 0; i < 64; ++i) {
        Rng r3(900 + i);
        gauge_hi = std::max(gauge_hi, one_or_mu(cert_domain.sample(r3)));
    }
    const ConvexSet interval(point_set({Vec{1.0}, Vec{gauge_hi * 2.0 + 1.0}}));
    const DcFn recip = DcFn::from_convex(
        opaque_fn("1/t", [](const Vec& t) { return 1.0 / t[0]; }), interval, "1/t", light);

    ComposeParams cp;
    cp.check = light;
    const DcFn inv_mu = compose_dc(recip, mu_dc, cp);  // x -> 1/max{1,mu(x)}

    std::vector<RealMap> id_comps;
    for (std::size_t i = 0; i < n; ++i) {
        const Vec ci = center;
        id_comps.push_back(
            {"x-c[" + std::to_string(i) + "]", [i, ci](const Vec& x) { return x[i] - ci[i]; }});
    }
    const DcFn id_shift = DcFn::make(std::move(id_comps), constant_fn(n, 0.0), cert_domain, light);

    BilinearParams bp;
    bp.check = light;
    const DcFn Pm = bilinear_combine(scalar_vector_product(n), inv_mu, id_shift, bp);

    // --- F-hat components and control --------------------------------------
    const DcFn Fc = F;
    auto p_eval = [P](const Vec& x) { return radial_project(P, x); };
    std::vector<RealMap> comps;
    for (std::size_t i = 0; i < F.range_dim(); ++i) {
        const Vec ci = center;
        comps.push_back({"Fhat[" + std::to_string(i) + "]", [Fc, P, p_eval, ci, i](const Vec& x) {
                             return detail::closure_eval(Fc, Fc.domain(), ci, p_eval(x))[i];
                         }});
    }

    const ConvexFn fstar_of_P = opaque_fn("control(F)∘P", [Fc, p_eval, ci = center](const Vec& x) {
        const Vec px = p_eval(x);
        if (Fc.domain().contains(px, 1e-12)) return Fc.control()(px);
        Vec p = distance(Fc.domain(), px).nearest;
        axpy(p, 1e-9, sub(ci, p));
        return Fc.control()(p);
    });
    const ConvexFn candidate =
        sum_fn({fstar_of_P, scale_fn(1.05 * max_lip, Pm.control())});

    out.extended =
        detail::certify_with_escalation(std::move(comps), candidate, cert_domain, prm.check);

    // --- agreement on the original domain -----------------------------------
    Certificate agree;
    agree.kind = CertKind::agreement;
    agree.label = "extension agrees on C";
    agree.samples = prm.agreement_samples;
    agree.tolerance = prm.agreement_tol;
    agree.seed = prm.check.seed + 77;
    agree.pass = true;
    {
        Rng r4(agree.seed);
        for (std::size_t i = 0; i < prm.agreement_samples; ++i) {
            const Vec x = C.sample(r4);
            if (!cert_domain.contains(x)) continue;
            const double d = dist(out.extended(x), F(x));
            if (d > prm.agreement_tol && d > agree.worst.amount) {
                agree.pass = false;
                agree.worst = {d, x, {}, "extension mismatch on C"};
            }
        }
    }
    out.agreement = agree;
    out.log = log.str();
    if (!agree.pass) throw CertificationError(agree);
    return out;
}

// ---------------------------------------------------------------------------
// lipschitz_convex_extend: the inf-convolution extension
// ---------------------------------------------------------------------------

struct LipschitzExtendResult {
    ConvexFn extended;
    Certificate agreement;
};

// f-hat(x) = inf over c in C of [f(c) + L |x - c|]; equals f on C and is
// L-Lipschitz convex on the whole space.
inline LipschitzExtendResult lipschitz_convex_extend(const ConvexFn& f, const ConvexSet& C,
                                                     double L,
                                                     std::size_t check_samples = 512,
                                                     std::uint64_t seed = 61) {
    if (C.is_empty()) throw PreconditionError("lipschitz_convex_extend: empty domain");
    // precondition: f is (certified) L-Lipschitz convex on C
    {
        const Certificate cv = convexity_check(f, C, check_samples, seed, 1e-8);
        if (!cv.pass) throw CertificationError(cv);
        if (C.bounded()) {
            const double est = lipschitz_estimate(f, C, check_samples, seed + 1);
            if (est > 1.05 * L + 1e-12)
                throw PreconditionError("lipschitz_convex_extend: sampled Lipschitz exceeds L");
        }
    }
    LipschitzExtendResult out;
    out.extended = inf_conv_fn(f, L, C);

    Certificate agree;
    agree.kind = CertKind::agreement;
    agree.label = "inf-convolution agrees on C";
    agree.samples = check_samples;
    agree.tolerance = 1e-6;
    agree.seed = seed + 2;
    agree.pass = true;
    Rng rng(agree.seed);
    for (std::size_t i = 0; i < check_samples; ++i) {
        const Vec x = C.sample(rng);
        const double d = std::abs(out.extended(x) - f(x));
        if (d > agree.tolerance && d > agree.worst.amount) {
            agree.pass = false;
            agree.worst = {d, x, {}, "inf-convolution mismatch on C"};
        }
    }
    out.agreement = agree;
    if (!agree.pass) throw CertificationError(agree);
    return out;
}

// ---------------------------------------------------------------------------
// finite_dim_extend: extend within span(C), then compose with the orthogonal
// projection onto it
// ---------------------------------------------------------------------------

struct FiniteDimExtendParams {
    double cover_radius = 0.25;  // r_x of the sampled local-Lipschitz cover
    std::size_t cover_samples = 32;
    RadialExtendParams radial;
};

inline ExtensionResult finite_dim_extend(const DcFn& F, const SubspaceBasis& X0,
                                         const FiniteDimExtendParams& prm = {}) {
    X0.validate();
    const ConvexSet& C = F.domain();
    if (!C.is_generator())
        throw PreconditionError("finite_dim_extend: generator-form C required");

    // sampled local Lipschitz-control cover (compactness route)
    {
        Rng rng(971);
        const ConvexFn ctrl = F.control();
        for (std::size_t i = 0; i < prm.cover_samples; ++i) {
            const Vec x = C.sample(rng);
            ConvexSet local = ConvexSet(ball_set(x, prm.cover_radius));
            // intersect by membership: sample C near x
            std::vector<Vec> near;
            for (std::size_t k = 0; k < 128 && near.size() < 16; ++k) {
                const Vec p = C.sample(rng);
                if (dist(p, x) <= prm.cover_radius) near.push_back(p);
            }
            for (std::size_t a = 1; a < near.size(); ++a) {
                const double d = dist(near[a], near[0]);
                if (d > 1e-12 && !std::isfinite(std::abs(ctrl(near[a]) - ctrl(near[0])) / d))
                    throw NumericError("finite_dim_extend: cover construction failed");
            }
        }
    }

    // C in X0 coordinates
    const GeneratorSet& g = C.generator();
    GeneratorSet g0;
    g0.dim = X0.dim();
    for (const auto& p : g.points) g0.points.push_back(X0.coords(p));
    for (const auto& b : g.balls) g0.balls.push_back({X0.coords(b.center), b.radius});
    const ConvexSet C0(g0);

    const DcFn Fc = F;
    const SubspaceBasis X0c = X0;
    std::vector<RealMap> comps0;
    for (std::size_t i = 0; i < F.range_dim(); ++i)
        comps0.push_back({"F0[" + std::to_string(i) + "]", [Fc, X0c, i](const Vec& y) {
                              return Fc(X0c.embed(y))[i];
                          }});
    const ConvexFn ctrl0 = opaque_fn(
        "control∘embed", [Fc, X0c](const Vec& y) { return Fc.control()(X0c.embed(y)); });
    const DcFn F0 = DcFn::make(std::move(comps0), ctrl0, C0, prm.radial.check);

    // radial extension inside X0
    RadialExtendParams rp = prm.radial;
    if (!rp.exhaustion) {
        // whole-subspace target: a comfortably larger ball around C0
        rp.window_radius = 2.0 * C0.bounding_radius() + 4.0;
    }
    const ConvexSet A0(ball_set(zeros(X0.dim()), 2.0 * C0.bounding_radius() + 4.0));
    ExtensionResult inner = dc_extend_radial(F0, A0, rp);

    // compose with the orthogonal projection pi (constant along normals)
    const DcFn inner_fn = inner.extended;
    std::vector<RealMap> comps;
    for (std::size_t i = 0; i < F.range_dim(); ++i)
        comps.push_back({"Fhat[" + std::to_string(i) + "]", [inner_fn, X0c, i](const Vec& x) {
                             return inner_fn(X0c.coords(x))[i];
                         }});
    const ConvexFn ctrl_ambient = opaque_fn("control∘pi", [inner_fn, X0c](const Vec& x) {
        return inner_fn.control()(X0c.coords(x));
    });

    const double R = 2.0 * C.bounding_radius() + 4.0 + norm(C.interior_point());
    const ConvexSet ambient(ball_set(zeros(X0.ambient_dim), R));
    ExtensionResult out;
    out.extended = detail::certify_with_escalation(std::move(comps), ctrl_ambient, ambient,
                                                   prm.radial.check);
    out.stages = inner.stages;
    out.log = inner.log + "finite_dim_extend: composed with orthogonal projection\n";

    Certificate agree;
    agree.kind = CertKind::agreement;
    agree.label = "finite-dim extension agrees on C";
    agree.samples = prm.radial.agreement_samples;
    agree.tolerance = prm.radial.agreement_tol;
    agree.seed = 1311;
    agree.pass = true;
    Rng rng(agree.seed);
    for (std::size_t i = 0; i < agree.samples; ++i) {
        const Vec x = C.sample(rng);
        const double d = dist(out.extended(x), F(x));
        if (d > agree.tolerance && d > agree.worst.amount) {
            agree.pass = false;
            agree.worst = {d, x, {}, "mismatch on C"};
        }
    }
    out.agreement = agree;
    if (!agree.pass) throw CertificationError(agree);
    return out;
}

}  // namespace cvx

#endif
