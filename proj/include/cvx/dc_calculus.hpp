#ifndef CVX_DC_CALCULUS_HPP
#define CVX_DC_CALCULUS_HPP

#include <cmath>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "cvx/dc_fn.hpp"

namespace cvx {

namespace detail {

inline double vector_lipschitz_estimate(const DcFn& F, const ConvexSet& domain,
                                        std::size_t samples, std::uint64_t seed) {
    if (!domain.bounded())
        throw PreconditionError("vector_lipschitz_estimate: unbounded domain");
    Rng rng(seed);
    double best = 0.0;
    for (std::size_t i = 0; i < samples; ++i) {
        const Vec x = domain.sample(rng);
        const Vec y = domain.sample(rng);
        const double d = dist(x, y);
        if (d < 1e-14) continue;
        best = std::max(best, dist(F(x), F(y)) / d);
    }
    return best;
}

// Try the candidate control, escalating by powers of two. The composition
// theorems guarantee a control exists; certification stands in for the
// omitted constant-tracking.
inline DcFn certify_with_escalation(std::vector<RealMap> comps, const ConvexFn& candidate,
                                    const ConvexSet& domain, const ControlCheckParams& p,
                                    int max_doublings = 6) {
    Certificate last;
    for (int k = 0; k <= max_doublings; ++k) {
        const ConvexFn ctrl = (k == 0) ? candidate : scale_fn(std::pow(2.0, k), candidate);
        try {
            return DcFn::make(comps, ctrl, domain, p);
        } catch (const CertificationError& e) {
            last = e.cert;
        }
    }
    throw CertificationError(last);
}

}  // namespace detail

// ---------------------------------------------------------------------------
// compose_dc: G o F with control  g o F + (L_G + L_g) * f
// (f controls F; g controls G, both Lipschitz on B)
// ---------------------------------------------------------------------------

struct ComposeParams {
    std::optional<double> L_G;  // Lipschitz of G on B, estimated if absent
    std::optional<double> L_g;  // Lipschitz of G's control on B
    std::size_t range_check_samples = 128;
    std::size_t lip_samples = 2000;
    ControlCheckParams check;
};

inline DcFn compose_dc(const DcFn& G, const DcFn& F, const ComposeParams& prm = {}) {
    const ConvexSet& B = G.domain();
    const ConvexSet& A = F.domain();

    // sampled range check: F(A) inside B
    {
        Rng rng(prm.check.seed + 17);
        for (std::size_t i = 0; i < prm.range_check_samples; ++i) {
            const Vec x = A.sample(rng);
            if (!B.contains(F(x), 1e-6))
                throw PreconditionError("compose_dc: range of F leaves domain of G");
        }
    }

    const double lg =
        prm.L_G ? *prm.L_G : detail::vector_lipschitz_estimate(G, B, prm.lip_samples, 7001);
    const double lgc = prm.L_g ? *prm.L_g
                               : lipschitz_estimate(G.control(), B, prm.lip_samples, 7002);
    const double factor = 1.05 * (lg + lgc);  // headroom over the sampled lower bounds

    std::vector<RealMap> comps;
    for (const auto& gc : G.components()) {
        auto geval = gc.f;
        const DcFn Fc = F;
        comps.push_back({gc.name + "∘F", [geval, Fc](const Vec& x) { return geval(Fc(x)); }});
    }

    const ConvexFn gctrl = G.control();
    const DcFn Fc = F;
    const ConvexFn g_of_F =
        opaque_fn("control(G)∘F", [gctrl, Fc](const Vec& x) { return gctrl(Fc(x)); });
    const ConvexFn candidate = sum_fn({g_of_F, scale_fn(factor, F.control())});

    return detail::certify_with_escalation(std::move(comps), candidate, A, prm.check);
}

// ---------------------------------------------------------------------------
// bilinear_combine: x -> B(F(x), G(x))
// ---------------------------------------------------------------------------

struct BilinearMap {
    std::string name;
    std::function<Vec(const Vec&, const Vec&)> apply;
    double norm_bound = 1.0;
    std::size_t range_dim = 1;
};

inline BilinearMap scalar_vector_product(std::size_t n) {
    return {"t*x", [](const Vec& t, const Vec& x) { return scaled(x, t[0]); }, 1.0, n};
}

inline BilinearMap inner_product(std::size_t) {
    return {"<x,y>", [](const Vec& a, const Vec& b) { return Vec{dot(a, b)}; }, 1.0, 1};
}

struct BilinearParams {
    std::size_t lip_samples = 2000;
    ControlCheckParams check;
};

inline DcFn bilinear_combine(const BilinearMap& B, const DcFn& F, const DcFn& G,
                             const BilinearParams& prm = {}) {
    const ConvexSet& dom = F.domain();
    if (!dom.bounded())
        throw PreconditionError("bilinear_combine: bounded domain required for estimates");

    // sup norms and Lipschitz estimates of the two factors, mildly inflated
    Rng rng(prm.check.seed + 31);
    double MF = 0.0, MG = 0.0;
    for (std::size_t i = 0; i < 256; ++i) {
        const Vec x = dom.sample(rng);
        MF = std::max(MF, norm(F(x)));
        MG = std::max(MG, norm(G(x)));
    }
    MF *= 1.05;
    MG *= 1.05;
    const double LF = detail::vector_lipschitz_estimate(F, dom, prm.lip_samples, 7101) * 1.05;
    const double LG = detail::vector_lipschitz_estimate(G, dom, prm.lip_samples, 7102) * 1.05;

    std::vector<RealMap> comps;
    const DcFn Fc = F, Gc = G;
    const auto apply = B.apply;
    for (std::size_t i = 0; i < B.range_dim; ++i) {
        comps.push_back({B.name + "[" + std::to_string(i) + "]",
                         [apply, Fc, Gc, i](const Vec& x) { return apply(Fc(x), Gc(x))[i]; }});
    }

    // curvature from the cross terms is at most 2 L_F L_G; kinks of the
    // factors are covered by their controls scaled by the partner's sup norm
    const Vec x0 = dom.interior_point();
    std::vector<Vec> rows;
    for (std::size_t i = 0; i < x0.size(); ++i) rows.push_back(unit(x0.size(), i));
    const ConvexFn quad = square_fn(norm_affine_fn(rows, scaled(x0, -1.0)));
    const ConvexFn candidate =
        sum_fn({scale_fn(B.norm_bound * std::max(MG, 1e-12), F.control()),
                scale_fn(B.norm_bound * std::max(MF, 1e-12), G.control()),
                scale_fn(B.norm_bound * std::max(LF * LG, 1e-12), quad)});

    return detail::certify_with_escalation(std::move(comps), candidate, dom, prm.check);
}

// ---------------------------------------------------------------------------
// glue_dc: one DcFn from pieces on an exhausting sequence D_n
// ---------------------------------------------------------------------------

struct GluePiece {
    ConvexSet D;
    DcFn piece;
};

struct GlueParams {
    std::vector<double> margins;  // dist(D_n, C \ D_{n+1}), all > 0
    std::size_t overlap_samples = 128;
    double overlap_tol = 1e-9;
    ControlCheckParams check;
};

inline DcFn glue_dc(const std::vector<GluePiece>& pieces, const GlueParams& prm) {
    if (pieces.empty()) throw PreconditionError("glue_dc: no pieces");
    if (prm.margins.size() + 1 != pieces.size())
        throw PreconditionError("glue_dc: need one margin per consecutive pair");
    for (double m : prm.margins)
        if (!(m > 0.0)) throw PreconditionError("glue_dc: nonpositive stage margin");

    const std::size_t K = pieces.size();
    const std::size_t mdim = pieces.front().piece.range_dim();

    // consecutive pieces must agree on the inner set
    Rng rng(prm.check.seed + 41);
    for (std::size_t k = 0; k + 1 < K; ++k) {
        for (std::size_t i = 0; i < prm.overlap_samples; ++i) {
            const Vec x = pieces[k].D.sample(rng);
            const double d = dist(pieces[k].piece(x), pieces[k + 1].piece(x));
            if (d > prm.overlap_tol)
                throw NumericError("glue_dc: pieces disagree on overlap (stage " +
                                   std::to_string(k) + ", err " + std::to_string(d) + ")");
        }
    }

    auto pieces_copy = pieces;
    std::vector<RealMap> comps;
    for (std::size_t i = 0; i < mdim; ++i) {
        comps.push_back({"glued[" + std::to_string(i) + "]",
                         [pieces_copy, i](const Vec& x) {
                             for (const auto& p : pieces_copy)
                                 if (p.D.contains(x)) return p.piece(x)[i];
                             return pieces_copy.back().piece(x)[i];
                         }});
    }

    // With finitely many nested agreeing pieces the last stage's control
    // already controls the glued mapping on all of C; certification (with
    // escalation) stands in for the stage-penalty bookkeeping of the
    // infinite construction.
    return detail::certify_with_escalation(std::move(comps), pieces.back().piece.control(),
                                           pieces.back().D, prm.check);
}

// ---------------------------------------------------------------------------
// c11_to_dc: quadratic control for mappings with K-Lipschitz derivative
// ---------------------------------------------------------------------------

// sampled second-difference estimate of the derivative's Lipschitz constant
inline double estimate_deriv_lipschitz(const std::vector<RealMap>& comps,
                                       const ConvexSet& domain, std::size_t samples,
                                       std::uint64_t seed) {
    Rng rng(seed);
    double best = 0.0;
    const std::size_t n = domain.dim();
    for (std::size_t i = 0; i < samples; ++i) {
        const Vec x = domain.sample(rng);
        const Vec u = rng.unit_vector(n);
        const double h = 1e-4 * (1.0 + norm(x));
        const Vec xp = add(x, scaled(u, h)), xm = sub(x, scaled(u, h));
        if (!domain.contains(xp) || !domain.contains(xm)) continue;
        double s = 0.0;
        for (const auto& c : comps) {
            const double d2 = c(xp) + c(xm) - 2.0 * c(x);
            s += d2 * d2;
        }
        best = std::max(best, std::sqrt(s) / (h * h));
    }
    return best;
}

inline DcFn c11_to_dc(std::vector<RealMap> components, double K, ConvexSet domain,
                      const ControlCheckParams& p = {}) {
    if (K < 0.0) throw PreconditionError("c11_to_dc: negative K");
    const Vec x0 = domain.interior_point();
    std::vector<Vec> rows;
    for (std::size_t i = 0; i < x0.size(); ++i) rows.push_back(unit(x0.size(), i));
    const ConvexFn control =
        scale_fn(0.5 * K, square_fn(norm_affine_fn(std::move(rows), scaled(x0, -1.0))));
    // no escalation: K is the caller's contract, failure means K too small
    return DcFn::make(std::move(components), control, std::move(domain), p);
}

// ---------------------------------------------------------------------------
// ndc_witness_check: finite-scale verification of the non-d.c. hypotheses
// (small balls with centers in lambda*A on which F exceeds the threshold)
// ---------------------------------------------------------------------------

struct WitnessBall {
    Vec center;
    double radius = 0.0;
    std::vector<Vec> witness_points;  // known members of the ball where F is defined
};

inline Certificate ndc_witness_check(
    const std::function<std::optional<double>(const Vec&)>& F, const ConvexSet& A,
    double lambda, const std::vector<WitnessBall>& balls, double growth_threshold,
    std::size_t samples_per_ball = 64, std::uint64_t seed = 99) {
    if (lambda <= 0.0 || lambda >= 1.0)
        throw PreconditionError("ndc_witness_check: lambda outside (0,1)");
    const std::size_t n = A.dim();
    if (!A.contains(zeros(n)))
        throw PreconditionError("ndc_witness_check: A must contain 0");
    if (balls.empty()) throw PreconditionError("ndc_witness_check: no balls");

    Rng rng(seed);
    double prev_delta = kInf;
    for (const auto& b : balls) {
        if (!(b.radius > 0.0) || !(b.radius < prev_delta))
            throw PreconditionError("ndc_witness_check: radii must decrease strictly");
        prev_delta = b.radius;
        if (!A.contains(b.center))
            throw PreconditionError("ndc_witness_check: ball center outside A");
        if (!A.contains(scaled(b.center, 1.0 / lambda)))
            throw PreconditionError("ndc_witness_check: center outside lambda*A");
        for (std::size_t k = 0; k < 16; ++k) {
            const Vec p = add(b.center, scaled(rng.unit_vector(n), b.radius));
            if (!A.contains(p, 1e-9))
                throw PreconditionError("ndc_witness_check: ball leaves A");
        }
    }

    Certificate cert;
    cert.kind = CertKind::ndc_witness;
    cert.tolerance = growth_threshold;
    cert.seed = seed;
    cert.pass = true;
    cert.label = "Lipschitz-violating growth witness";

    for (std::size_t bi = 0; bi < balls.size(); ++bi) {
        const auto& b = balls[bi];
        double best = -kInf;
        for (const Vec& w : b.witness_points) {
            if (dist(w, b.center) > b.radius + 1e-9)
                throw PreconditionError("ndc_witness_check: witness point outside its ball");
            if (auto v = F(w)) best = std::max(best, *v);
        }
        for (std::size_t k = 0; k < samples_per_ball; ++k) {
            const Vec p = add(b.center, scaled(rng.in_unit_ball(n), b.radius));
            if (auto v = F(p)) best = std::max(best, *v);
        }
        cert.samples += samples_per_ball + b.witness_points.size();
        if (!(best > growth_threshold)) {
            cert.pass = false;
            const double gapv = growth_threshold - best;
            if (gapv > cert.worst.amount)
                cert.worst = {gapv, b.center, {}, "ball " + std::to_string(bi) +
                                                      " stays below threshold"};
        }
    }
    return cert;
}

}  // namespace cvx

#endif
