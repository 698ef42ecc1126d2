#ifndef CVX_SUBSPACE_EXT_HPP
#define CVX_SUBSPACE_EXT_HPP

#include <algorithm>
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
// SubspacePair: Y, an orthonormal complement (the quotient coordinates), and
// a deterministic dense sequence of complement representatives
// ---------------------------------------------------------------------------

struct SubspacePair {
    std::size_t ambient_dim = 0;
    SubspaceBasis Y;
    SubspaceBasis complement;
    std::vector<Vec> quotient_dense_seq;  // z_n in ambient coordinates

    void validate() const {
        Y.validate();
        complement.validate();
        if (Y.ambient_dim != ambient_dim || complement.ambient_dim != ambient_dim)
            throw PreconditionError("SubspacePair: ambient dim mismatch");
        if (Y.dim() + complement.dim() != ambient_dim)
            throw PreconditionError("SubspacePair: bases do not span");
        for (const auto& a : Y.rows)
            for (const auto& b : complement.rows)
                if (std::abs(dot(a, b)) > 1e-9)
                    throw PreconditionError("SubspacePair: Y not orthogonal to complement");
    }
};

// deterministic dyadic enumeration of a complement grid: level L contributes
// the points with coordinates k/2^L, |coordinate| <= L+1, not seen earlier
inline std::vector<Vec> dyadic_sequence(std::size_t dim, std::size_t count) {
    std::vector<Vec> out;
    for (std::size_t L = 0; out.size() < count && L < 16; ++L) {
        const double step = std::pow(0.5, static_cast<double>(L));
        const long reach = static_cast<long>((static_cast<double>(L) + 1.0) / step);
        std::vector<long> idx(dim, -reach);
        while (true) {
            bool fresh = (L == 0);
            for (std::size_t i = 0; i < dim && !fresh; ++i) fresh = (idx[i] % 2 != 0);
            if (L == 0) fresh = true;
            if (fresh || L == 0) {
                bool in_prev = true;
                if (L > 0) {
                    // skip points already emitted at a previous level
                    in_prev = true;
                    for (std::size_t i = 0; i < dim; ++i)
                        if (idx[i] % 2 != 0 ||
                            std::abs(static_cast<double>(idx[i]) * step) >
                                static_cast<double>(L))
                            in_prev = false;
                }
                if (L == 0 || !in_prev) {
                    Vec p(dim);
                    for (std::size_t i = 0; i < dim; ++i)
                        p[i] = static_cast<double>(idx[i]) * step;
                    out.push_back(std::move(p));
                    if (out.size() >= count) return out;
                }
            }
            // advance the multi-index
            std::size_t i = 0;
            for (; i < dim; ++i) {
                if (++idx[i] <= reach) break;
                idx[i] = -reach;
            }
            if (i == dim) break;
        }
    }
    return out;
}

inline SubspacePair make_subspace_pair(SubspaceBasis Y, std::size_t dense_count = 64) {
    Y.validate();
    SubspacePair pair;
    pair.ambient_dim = Y.ambient_dim;
    pair.Y = std::move(Y);
    // complement by Gram-Schmidt of the standard basis against Y
    SubspaceBasis comp;
    comp.ambient_dim = pair.ambient_dim;
    for (std::size_t i = 0; i < pair.ambient_dim && comp.dim() + pair.Y.dim() < pair.ambient_dim;
         ++i) {
        Vec v = unit(pair.ambient_dim, i);
        for (const auto& r : pair.Y.rows) axpy(v, -dot(v, r), r);
        for (const auto& r : comp.rows) axpy(v, -dot(v, r), r);
        const double nv = norm(v);
        if (nv > 1e-8) comp.rows.push_back(scaled(v, 1.0 / nv));
    }
    pair.complement = std::move(comp);
    for (const auto& q : dyadic_sequence(pair.complement.dim(), dense_count))
        pair.quotient_dense_seq.push_back(pair.complement.embed(q));
    pair.validate();
    return pair;
}

// ---------------------------------------------------------------------------
// SetSequence
// ---------------------------------------------------------------------------

struct SetSequence {
    std::vector<ConvexSet> sets;
    bool monotone = true;
    std::vector<double> margins;  // eps_n with C_n + eps_n B subset C_{n+1}, when known
};

inline Certificate sequence_nesting_check(const SetSequence& s, std::size_t samples = 200,
                                          std::uint64_t seed = 5150) {
    Certificate c;
    c.kind = CertKind::nesting;
    c.label = "C_n nondecreasing";
    c.seed = seed;
    c.pass = true;
    Rng rng(seed);
    for (std::size_t n = 0; n + 1 < s.sets.size(); ++n) {
        if (s.sets[n].is_empty()) continue;
        for (std::size_t i = 0; i < samples; ++i) {
            const Vec x = s.sets[n].sample(rng);
            ++c.samples;
            if (!s.sets[n + 1].contains(x, 1e-9)) {
                c.pass = false;
                c.worst = {1.0, x, {}, "stage " + std::to_string(n + 1)};
                return c;
            }
        }
    }
    return c;
}

// ---------------------------------------------------------------------------
// hartman_majorant: the stagewise construction
//   g_1 = M_2,   g_k = max{g_{k-1}, a_k + b_k dist(., D_{k-1})}
// ---------------------------------------------------------------------------

struct HartmanStageRow {
    std::size_t stage = 0;
    double M = 0.0;  // sampled sup of f on D_stage cap Y (inflated)
    double a = 0.0;
    double b = 0.0;
    double d = 0.0;  // dist(D_{stage}, complement of D_{stage+1}) lower estimate
};

struct HartmanResult {
    ConvexFn g;
    std::vector<HartmanStageRow> rows;
    Certificate domination;  // f <= g on sampled D_{n+1} cap Y
    Certificate convexity;   // g convex on the last stage
    Certificate stabilization;
};

namespace detail {

// sampled sup of f over D cap Y: interior Y-samples plus boundary ray probes
inline std::optional<double> sup_on_slice(const ConvexFn& f, const ConvexSet& D,
                                          const SubspaceBasis& Y, std::size_t samples,
                                          std::uint64_t seed) {
    const std::size_t m = Y.dim();
    // find an interior point of D cap Y
    const ConvexSet P = slice_subspace(D, Y);
    if (P.is_empty()) return std::nullopt;
    const Vec y0 = P.interior_point();

    double best = f(y0);
    Rng rng(seed);
    auto probe = [&](const Vec& dir) {
        const double t = ray_exit(P, y0, dir, 1e6);
        for (double frac : {0.999999, 0.999, 0.99, 0.9}) {
            Vec y = y0;
            axpy(y, frac * t, dir);
            if (P.contains(y)) {
                best = std::max(best, f(y));
                break;
            }
        }
    };
    for (std::size_t i = 0; i < m; ++i) {
        probe(unit(m, i));
        probe(unit(m, i, -1.0));
    }
    for (std::size_t k = 0; k < samples; ++k) {
        probe(rng.unit_vector(m));
        best = std::max(best, f(P.sample(rng)));
    }
    if (!std::isfinite(best)) return std::nullopt;
    return best;
}

// lower estimate of dist(D_n, X \ D_{n+1}): min depth of sampled points of
// D_n (interior and near-boundary) inside D_{n+1}, shrunk for safety
inline double gap_estimate(const ConvexSet& Dn, const ConvexSet& Dnext, std::size_t samples,
                           std::uint64_t seed) {
    Rng rng(seed);
    const std::size_t n = Dn.dim();
    const Vec c = Dn.interior_point();
    double d = kInf;
    auto consider = [&](const Vec& x) {
        if (!Dn.contains(x)) return;
        d = std::min(d, depth(Dnext, x, 32, seed + 1));
    };
    for (std::size_t k = 0; k < samples; ++k) {
        const Vec dir = rng.unit_vector(n);
        const double t = ray_exit(Dn, c, dir, 1e6);
        Vec x = c;
        axpy(x, t, dir);  // boundary point: its depth in D_{n+1} is the local gap
        consider(x);
        consider(Dn.sample(rng));
    }
    if (!std::isfinite(d) || d <= 1e-9 * (1.0 + Dn.bounding_radius())) return 0.0;
    return 0.9 * d;
}

}  // namespace detail

struct HartmanParams {
    std::size_t sup_samples = 256;
    std::size_t check_samples = 2000;
    std::uint64_t seed = 404;
    double tol = 1e-7;
    int repair_rounds = 6;
};

inline HartmanResult hartman_majorant(const ConvexFn& f, const SetSequence& D,
                                      const SubspaceBasis& Y, const HartmanParams& prm = {}) {
    if (D.sets.size() < 3) throw PreconditionError("hartman_majorant: need at least 3 stages");
    const std::size_t K = D.sets.size();

    // stage gaps d_n (underestimates keep a + b*d >= M conservative)
    std::vector<double> d(K - 1, 0.0);
    for (std::size_t n = 0; n + 1 < K; ++n) {
        d[n] = detail::gap_estimate(D.sets[n], D.sets[n + 1], 64, prm.seed + n);
        if (!(d[n] > 0.0))
            throw PreconditionError("hartman_majorant: stage " + std::to_string(n + 1) +
                                    ": no positive gap to the next stage");
    }

    // sampled suprema M_n over D_n cap Y (inflated by 1.05 + repair loop)
    std::vector<double> M(K, 0.0);
    for (std::size_t n = 0; n < K; ++n) {
        const auto s = detail::sup_on_slice(f, D.sets[n], Y, prm.sup_samples, prm.seed + 31 + n);
        if (!s)
            throw PreconditionError("hartman_majorant: stage " + std::to_string(n + 1) +
                                    ": D_n cap Y empty or f unbounded there");
        M[n] = *s >= 0.0 ? 1.05 * *s : 0.95 * *s;
        M[n] += 1e-9;
    }

    HartmanResult out;
    for (int round = 0; round <= prm.repair_rounds; ++round) {
        // build stages: g_1 = M_2; for k = 2..K-1:
        //   a_k = lower bound of g_{k-1} on D_{k-1} (M_2 is a global one),
        //   b_k = (M_{k+1} - a_k)/d_{k-1}
        const double base = M[1];
        std::vector<HartmanStage> stages;
        std::vector<HartmanStageRow> rows;
        rows.push_back({1, M[1], base, 0.0, d[0]});
        for (std::size_t k = 2; k <= K - 1; ++k) {
            const double a = base;
            const double b = std::max(0.0, (M[k] - a) / d[k - 2]) + 1e-12;
            stages.push_back({D.sets[k - 2], a, b});
            rows.push_back({k, M[k], a, b, d[k - 2]});
        }
        ConvexFn g = hartman_fn(base, stages);

        // domination: f <= g on sampled D_{n+1} cap Y
        Certificate dom;
        dom.kind = CertKind::agreement;
        dom.label = "f <= g on D_{n+1} cap Y";
        dom.tolerance = prm.tol;
        dom.seed = prm.seed + 7;
        dom.pass = true;
        Rng rng(dom.seed);
        for (std::size_t n = 0; n + 1 < K && dom.pass; ++n) {
            const ConvexSet P = slice_subspace(D.sets[n + 1], Y);
            if (P.is_empty()) continue;
            for (std::size_t i = 0; i < prm.check_samples / K + 8; ++i) {
                const Vec y = P.sample(rng);
                const double fy = f(y);
                const double gy = g(Y.embed(y));
                ++dom.samples;
                if (fy > gy + prm.tol) {
                    dom.pass = false;
                    dom.worst = {fy - gy, y, {}, "stage " + std::to_string(n + 2)};
                    break;
                }
            }
        }
        if (!dom.pass) {
            for (auto& m : M) m = (m >= 0.0 ? 2.0 * m + 1.0 : 0.5 * m);  // inflate and retry
            if (round == prm.repair_rounds) {
                throw CertificationError(dom);
            }
            continue;
        }
        out.g = std::move(g);
        out.rows = std::move(rows);
        out.domination = dom;
        break;
    }

    // convexity of g on the last stage, and stabilization on a sampled grid
    out.convexity = convexity_check(out.g, D.sets.back(), prm.check_samples, prm.seed + 9, 1e-8);
    if (!out.convexity.pass) throw CertificationError(out.convexity);

    Certificate stab;
    stab.kind = CertKind::agreement;
    stab.label = "stagewise stabilization on D_n";
    stab.seed = prm.seed + 11;
    stab.pass = true;
    {
        // g equals the truncated max once x lies in a stage set
        Rng rng(stab.seed);
        for (std::size_t n = 0; n + 1 < K; ++n) {
            const ConvexSet& Dn = D.sets[n];
            for (std::size_t i = 0; i < 32; ++i) {
                const Vec x = Dn.sample(rng);
                // stages beyond n+1 contribute only their base constants
                double truncated = out.g.root()->base_const;
                for (const auto& st : out.g.root()->stages) {
                    truncated = std::max(truncated, st.a + st.b * distance(st.D, x).dist);
                    if (st.D.contains(x, 1e-10)) break;
                }
                ++stab.samples;
                if (std::abs(truncated - out.g(x)) > 1e-9) {
                    stab.pass = false;
                    stab.worst = {std::abs(truncated - out.g(x)), x, {}, "stabilization"};
                }
            }
        }
    }
    out.stabilization = stab;
    if (!stab.pass) throw CertificationError(stab);
    return out;
}

// ---------------------------------------------------------------------------
// majorant_to_extension: f~(x) = inf{ lam g(u) + (1-lam) f(y) :
//                                     x = lam u + (1-lam) y, y in Y }
// ---------------------------------------------------------------------------

struct MajorantExtendParams {
    std::size_t lambda_grid = 32;
    std::size_t inner_iters = 300;
    std::size_t domination_samples = 512;
    double domination_tol = 1e-7;
    double y_radius = 64.0;  // search radius for the Y-variable
    std::uint64_t seed = 515;
};

inline ConvexFn majorant_to_extension(const ConvexFn& f, const ConvexFn& g,
                                      const SubspaceBasis& Y,
                                      const MajorantExtendParams& prm = {}) {
    // precondition: f <= g on Y (sampled)
    {
        Rng rng(prm.seed);
        for (std::size_t i = 0; i < prm.domination_samples; ++i) {
            Vec y = scaled(rng.in_unit_ball(Y.dim()), prm.y_radius * 0.25);
            if (f(y) > g(Y.embed(y)) + prm.domination_tol)
                throw PreconditionError("majorant_to_extension: f > g on Y");
        }
    }

    const SubspaceBasis Yc = Y;
    const ConvexFn fc = f, gc = g;
    const std::size_t lam_grid = prm.lambda_grid;
    const std::size_t iters = prm.inner_iters;
    const double yr = prm.y_radius;

    auto evaluate = [fc, gc, Yc, lam_grid, iters, yr](const Vec& x) {
        const std::size_t m = Yc.dim();
        const Vec xy = Yc.coords(x);
        const Vec xp = Yc.embed(xy);
        const double off = dist(x, xp);  // distance of x to Y

        // phi(lam, y) with u determined by the constraint
        auto phi = [&](double lam, const Vec& y) {
            Vec u = sub(x, scaled(Yc.embed(y), 1.0 - lam));
            u = scaled(u, 1.0 / lam);
            return lam * gc(u) + (1.0 - lam) * fc(y);
        };
        auto inner_min = [&](double lam) {
            // convex in y: finite-difference subgradient descent, multi-start
            double best = kInf;
            std::vector<Vec> starts{xy, zeros(m)};
            Rng rng(0xAB1E);
            starts.push_back(add(xy, scaled(rng.unit_vector(m), 1.0)));
            for (Vec y : starts) {
                double fy = phi(lam, y);
                best = std::min(best, fy);
                double step = std::max(0.25, 0.1 * norm(xy));
                for (std::size_t it = 0; it < iters; ++it) {
                    Vec grad(m, 0.0);
                    const double h = 1e-6 * (1.0 + norm(y));
                    for (std::size_t i = 0; i < m; ++i) {
                        Vec yp = y, ym = y;
                        yp[i] += h;
                        ym[i] -= h;
                        grad[i] = (phi(lam, yp) - phi(lam, ym)) / (2.0 * h);
                    }
                    const double gn = norm(grad);
                    if (gn < 1e-13) break;
                    Vec y2 = y;
                    axpy(y2, -step / gn, grad);
                    if (norm(y2) > yr) y2 = scaled(y2, yr / norm(y2));
                    const double f2 = phi(lam, y2);
                    if (f2 < fy) {
                        y = y2;
                        fy = f2;
                        best = std::min(best, fy);
                        step *= 1.1;
                    } else {
                        step *= 0.5;
                        if (step < 1e-12) break;
                    }
                }
            }
            return best;
        };

        double best = gc(x);  // lam = 1 candidate
        if (off <= 1e-11) best = std::min(best, fc(xy));  // lam = 0 on Y
        double best_lam = 1.0;
        for (std::size_t k = 1; k <= lam_grid; ++k) {
            const double lam = static_cast<double>(k) / static_cast<double>(lam_grid);
            if (off > 1e-11 && lam < 0.5 * off / (off + yr)) continue;  // u would fly off
            const double v = inner_min(lam);
            if (v < best) {
                best = v;
                best_lam = lam;
            }
        }
        // golden refinement of lambda around the best grid value
        {
            const double w = 1.0 / static_cast<double>(lam_grid);
            double a = std::max(off > 1e-11 ? 1e-3 : 1e-6, best_lam - w);
            double b = std::min(1.0, best_lam + w);
            const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
            double c1 = b - gr * (b - a), c2 = a + gr * (b - a);
            double f1 = inner_min(c1), f2 = inner_min(c2);
            for (int it = 0; it < 24; ++it) {
                if (f1 > f2) {
                    a = c1;
                    c1 = c2;
                    f1 = f2;
                    c2 = a + gr * (b - a);
                    f2 = inner_min(c2);
                } else {
                    b = c2;
                    c2 = c1;
                    f2 = f1;
                    c1 = b - gr * (b - a);
                    f1 = inner_min(c1);
                }
            }
            best = std::min(best, std::min(f1, f2));
        }
        if (!std::isfinite(best)) throw NumericError("majorant_to_extension: minimization failed");
        return best;
    };

    return opaque_fn("majorant_extension", evaluate);
}

// ---------------------------------------------------------------------------
// dc_to_majorant: g = u - a with a an affine minorant of v
// ---------------------------------------------------------------------------

inline ConvexFn dc_to_majorant(const ConvexFn& u, const ConvexFn& v, const Vec& at,
                               double check_radius = 16.0, std::size_t samples = 2000,
                               std::uint64_t seed = 88) {
    const std::size_t n = at.size();
    // finite-difference subgradient of v at `at`
    Vec s(n, 0.0);
    const double h = 1e-6 * (1.0 + norm(at));
    for (std::size_t i = 0; i < n; ++i) {
        Vec p = at, m = at;
        p[i] += h;
        m[i] -= h;
        s[i] = (v(p) - v(m)) / (2.0 * h);
    }
    double slack = 1e-9;
    const ConvexSet window(ball_set(at, check_radius));
    for (int round = 0; round < 8; ++round) {
        const double b = v(at) - dot(s, at) - slack;   // a(x) = <s,x> + b
        // verify a <= v on the window
        Rng rng(seed);
        double worst = 0.0;
        for (std::size_t i = 0; i < samples; ++i) {
            const Vec x = window.sample(rng);
            worst = std::max(worst, (dot(s, x) + b) - v(x));
        }
        if (worst <= 0.0) {
            // g = u - a as an explicit convex node
            return sum_fn({u, affine_fn(scaled(s, -1.0), -b)});
        }
        slack = 2.0 * (slack + worst);
    }
    throw NumericError("dc_to_majorant: affine minorant certification failed");
}

// ---------------------------------------------------------------------------
// sets_from_extension: sublevel sets D_n = {x : fhat(x) < n}
// ---------------------------------------------------------------------------

inline SetSequence sets_from_extension(const ConvexFn& fhat, std::size_t dim, std::size_t count,
                                       Vec start = {}, std::uint64_t seed = 3030) {
    if (start.empty()) start = zeros(dim);
    // rough minimization to anchor the early sets
    Vec x = start;
    double fx = fhat(x);
    double step = 1.0;
    while (step > 1e-9) {
        bool improved = false;
        for (std::size_t i = 0; i < dim; ++i) {
            for (double sgn : {1.0, -1.0}) {
                Vec x2 = x;
                x2[i] += sgn * step;
                const double f2 = fhat(x2);
                if (f2 < fx - 1e-15) {
                    fx = f2;
                    x = x2;
                    improved = true;
                }
            }
        }
        if (!improved) step *= 0.5;
    }

    SetSequence seq;
    seq.monotone = true;
    const ConvexFn f = fhat;
    for (std::size_t nlev = 1; nlev <= count; ++nlev) {
        const double level = static_cast<double>(nlev);
        if (fx >= level) {
            seq.sets.push_back(ConvexSet::empty(dim));
            continue;
        }
        ImplicitSet s;
        s.dim = dim;
        s.interior_point = x;
        s.open = true;
        s.name = "sublevel";
        s.membership = [f, level](const Vec& p) { return f(p) < level; };
        // bounding radius from ray exits (coercive fhat at desk scale)
        ConvexSet probe(s);
        double r = 1.0;
        Rng rng(seed + nlev);
        for (std::size_t k = 0; k < 2 * dim + 8; ++k) {
            const Vec u = (k < 2 * dim) ? unit(dim, k / 2, k % 2 ? -1.0 : 1.0)
                                        : rng.unit_vector(dim);
            r = std::max(r, ray_exit(probe, x, u, 1e7));
        }
        s.bounding_radius = 1.2 * r + 1.0;
        seq.sets.push_back(ConvexSet(s));
    }
    return seq;
}

// ---------------------------------------------------------------------------
// seq_separating_function: f(y) = sum (1/eps_n) dist(y, C_n), C_0 = {a}
// ---------------------------------------------------------------------------

inline ConvexFn seq_separating_function(const SetSequence& C, const Vec& a,
                                        std::uint64_t seed = 7117) {
    if (C.sets.empty()) throw PreconditionError("seq_separating_function: empty sequence");
    if (C.margins.size() != C.sets.size())
        throw PreconditionError("seq_separating_function: margins required for every stage");
    if (!C.sets.front().contains(a))
        throw PreconditionError("seq_separating_function: a not in C_1");

    // eps_0 from the depth of a in C_1
    const double eps0 = 0.9 * depth(C.sets.front(), a, 48, seed);
    if (!(eps0 > 0.0)) throw PreconditionError("seq_separating_function: a not interior to C_1");

    std::vector<ConvexFn> terms;
    terms.push_back(scale_fn(1.0 / eps0, dist_fn(ConvexSet(point_set({a})))));
    for (std::size_t n = 0; n + 1 < C.sets.size(); ++n) {
        // the term for C_n needs eps_n with C_n + eps_n B subset C_{n+1}
        if (!(C.margins[n] > 0.0))
            throw PreconditionError("seq_separating_function: nonpositive margin");
        terms.push_back(scale_fn(1.0 / C.margins[n], dist_fn(C.sets[n])));
    }
    return sum_fn(std::move(terms));
}

// ---------------------------------------------------------------------------
// lift_sequence: C~_n = conv(D_n u C_n), with the proof's patching of early
// empty stages
// ---------------------------------------------------------------------------

namespace detail {

// inner generator approximation of an implicit convex set (ray-exit hull)
inline GeneratorSet to_generator(const ConvexSet& s, std::size_t dirs = 128,
                                 std::uint64_t seed = 2718) {
    if (s.is_generator() && s.cuts().empty()) return s.generator();
    const std::size_t n = s.dim();
    const Vec c = s.interior_point();
    GeneratorSet g;
    g.dim = n;
    g.points.push_back(c);
    Rng rng(seed);
    for (std::size_t k = 0; k < dirs + 2 * n; ++k) {
        const Vec u = (k < 2 * n) ? unit(n, k / 2, k % 2 ? -1.0 : 1.0) : rng.unit_vector(n);
        const double t = ray_exit(s, c, u, 1e7);
        Vec p = c;
        axpy(p, 0.999999 * t, u);
        if (!s.contains(p)) continue;
        // drop near-duplicates: low-dimensional sets hit the same exits often
        bool fresh = true;
        for (const auto& q : g.points)
            if (dist(p, q) < 1e-9 * (1.0 + norm(q))) {
                fresh = false;
                break;
            }
        if (fresh) g.points.push_back(std::move(p));
    }
    return g;
}

}  // namespace detail

struct LiftResult {
    SetSequence lifted;
    Certificate slice_cert;  // C~_n cap Y = C_n, both directions sampled
};

inline LiftResult lift_sequence(const SetSequence& C, const SetSequence& D,
                                const SubspacePair& pair, std::size_t samples = 400,
                                double tol = 1e-9, std::uint64_t seed = 606) {
    pair.validate();
    if (C.sets.size() != D.sets.size())
        throw PreconditionError("lift_sequence: length mismatch");
    const std::size_t K = C.sets.size();
    const SubspaceBasis& Y = pair.Y;
    Rng rng(seed);

    // precondition D_n cap Y subset C_n (sampled)
    for (std::size_t n = 0; n < K; ++n) {
        if (D.sets[n].is_empty() || C.sets[n].is_empty()) continue;
        const ConvexSet P = slice_subspace(D.sets[n], Y);
        if (P.is_empty()) continue;
        for (std::size_t i = 0; i < samples / 4; ++i) {
            const Vec y = P.sample(rng);
            if (!C.sets[n].contains(y, 1e-7))
                throw PreconditionError("lift_sequence: D_n cap Y not inside C_n at stage " +
                                        std::to_string(n + 1));
        }
    }

    auto lift_one = [&](const ConvexSet& Dn, const ConvexSet& Cn) -> ConvexSet {
        GeneratorSet gd = detail::to_generator(Dn);
        GeneratorSet gcY = detail::to_generator(Cn);
        GeneratorSet gc;
        gc.dim = pair.ambient_dim;
        for (const auto& p : gcY.points) gc.points.push_back(Y.embed(p));
        for (const auto& b : gcY.balls) gc.balls.push_back({Y.embed(b.center), b.radius});
        GeneratorSet merged = conv_union(gd, gc);
        merged.open = true;
        return ConvexSet(std::move(merged));
    };

    LiftResult out;
    out.lifted.monotone = true;
    out.lifted.sets.resize(K);

    std::size_t n0 = K;  // first D-stage usable
    for (std::size_t n = 0; n < K; ++n)
        if (!D.sets[n].is_empty() && !slice_subspace(D.sets[n], Y).is_empty() &&
            !C.sets[n].is_empty()) {
            n0 = n;
            break;
        }
    if (n0 == K) throw PreconditionError("lift_sequence: no usable stage");
    std::size_t n1 = K;  // first nonempty C-stage
    for (std::size_t n = 0; n < K; ++n)
        if (!C.sets[n].is_empty()) {
            n1 = n;
            break;
        }

    for (std::size_t n = n0; n < K; ++n) out.lifted.sets[n] = lift_one(D.sets[n], C.sets[n]);
    if (n1 < n0) {
        // patch: U(c, r) inside the first lifted stage with U(c,r) cap Y inside C_{n1}
        const Vec cY = C.sets[n1].sample(rng);
        const Vec c = Y.embed(cY);
        double r = 0.5 * std::min(depth(out.lifted.sets[n0], c, 48, seed + 3),
                                  depth(C.sets[n1], cY, 48, seed + 4));
        if (!(r > 0.0)) throw NumericError("lift_sequence: patching radius degenerate");
        for (std::size_t n = n1; n < n0; ++n) {
            GeneratorSet gcY = detail::to_generator(C.sets[n]);
            GeneratorSet gc;
            gc.dim = pair.ambient_dim;
            for (const auto& p : gcY.points) gc.points.push_back(Y.embed(p));
            for (const auto& b : gcY.balls) gc.balls.push_back({Y.embed(b.center), b.radius});
            GeneratorSet merged = conv_union(ball_set(c, r), gc);
            merged.open = true;
            out.lifted.sets[n] = ConvexSet(std::move(merged));
        }
    }
    for (std::size_t n = 0; n < std::min(n1, n0); ++n)
        out.lifted.sets[n] = ConvexSet::empty(pair.ambient_dim);

    // certificate: lifted_n cap Y = C_n, both directions
    Certificate& cert = out.slice_cert;
    cert.kind = CertKind::agreement;
    cert.label = "lifted slice equals C_n";
    cert.tolerance = tol;
    cert.seed = seed + 9;
    cert.pass = true;
    Rng rng2(cert.seed);
    for (std::size_t n = 0; n < K; ++n) {
        if (C.sets[n].is_empty()) {
            if (!out.lifted.sets[n].is_empty()) {
                cert.pass = false;
                cert.worst = {1.0, {}, {}, "stage " + std::to_string(n + 1) + ": spurious lift"};
            }
            continue;
        }
        for (std::size_t i = 0; i < samples; ++i) {
            // forward: y in C_n -> embed in lifted
            const Vec y = C.sets[n].sample(rng2);
            ++cert.samples;
            if (!out.lifted.sets[n].contains(Y.embed(y), 1e-6)) {
                cert.pass = false;
                cert.worst = {distance(out.lifted.sets[n], Y.embed(y)).dist, y, {},
                              "stage " + std::to_string(n + 1) + ": C_n escapes lift"};
            }
            // converse: Y-points of the lifted set (with interior margin) lie in C_n
            const Vec p = out.lifted.sets[n].sample(rng2);
            const Vec yc = Y.coords(p);
            if (dist(p, Y.embed(yc)) < 1e-9 && depth(out.lifted.sets[n], p, 16, seed) > 1e-6) {
                ++cert.samples;
                if (!C.sets[n].contains(yc, 1e-6)) {
                    cert.pass = false;
                    cert.worst = {1.0, yc, {}, "stage " + std::to_string(n + 1) +
                                                   ": lift slice escapes C_n"};
                }
            }
        }
    }
    if (!cert.pass) throw CertificationError(cert);
    return out;
}

// ---------------------------------------------------------------------------
// kuzeliky_point (Lemma-style cone geometry): y_x with
//   conv[(x+B) u B] cap Y subset conv[{y_x} u 8B]
// ---------------------------------------------------------------------------

struct KuzelikyResult {
    Vec y_x;         // ambient coordinates (a point of Y)
    Vec u0;          // the near-sup point of P, ambient coordinates
    double s = 0.0;  // sampled sup of |y| over P
    Certificate cert;
};

inline KuzelikyResult kuzeliky_point(const SubspacePair& pair, double r, const Vec& x,
                                     std::size_t dirs = 64, std::size_t cert_samples = 1000,
                                     double tol = 1e-9, std::uint64_t seed = 2025) {
    pair.validate();
    if (!(r > 0.0)) throw PreconditionError("kuzeliky_point: r must be positive");
    const std::size_t n = pair.ambient_dim;
    const SubspaceBasis& Y = pair.Y;

    KuzelikyResult out;
    out.cert.kind = CertKind::inclusion;
    out.cert.label = "cone slice inside conv[{y_x} u 8B]";
    out.cert.tolerance = tol;
    out.cert.seed = seed;

    if (norm(x) <= 1e-15) {
        out.y_x = zeros(n);
        out.u0 = zeros(n);
        out.s = r;
        out.cert.pass = true;
        out.cert.worst.note = "x = 0: trivial";
        return out;
    }

    // P = conv[(x+B) u B] cap Y, in Y coordinates (exact membership: the hull
    // of two balls has a closed-form projection through Frank-Wolfe)
    GeneratorSet hull;
    hull.dim = n;
    hull.balls.push_back({x, r});
    hull.balls.push_back({zeros(n), r});
    const ConvexSet H(hull);
    ImplicitSet Pimp;
    Pimp.dim = Y.dim();
    Pimp.interior_point = zeros(Y.dim());
    Pimp.bounding_radius = norm(x) + 2.0 * r + 1.0;
    Pimp.name = "cone_slice";
    const SubspaceBasis Yc = Y;
    Pimp.membership = [H, Yc](const Vec& y) { return H.contains(Yc.embed(y), 1e-11); };
    const ConvexSet P(Pimp);

    // sampled sup of |y| over P: ray exits from 0 along sampled directions,
    // seeded with the direction of the Y-projection of x
    auto sup_over = [&](std::size_t count, std::uint64_t sd) {
        Rng rng(sd);
        double s = 0.0;
        Vec arg = zeros(Y.dim());
        auto probe = [&](const Vec& dir) {
            const double t = ray_exit(P, zeros(Y.dim()), dir, 1e7);
            if (t > s) {
                s = t;
                arg = scaled(dir, t);
            }
        };
        const Vec xy = Y.coords(x);
        if (norm(xy) > 1e-12) probe(normalized(xy));
        for (std::size_t i = 0; i < Y.dim(); ++i) {
            probe(unit(Y.dim(), i));
            probe(unit(Y.dim(), i, -1.0));
        }
        for (std::size_t k = 0; k < count; ++k) probe(rng.unit_vector(Y.dim()));
        return std::make_pair(s, arg);
    };
    auto [s1, arg1] = sup_over(dirs, seed + 1);
    auto [s2, arg2] = sup_over(2 * dirs, seed + 2);
    if (std::abs(s2 - s1) > r / 10.0)
        throw NumericError("kuzeliky_point: sup estimate unstable under doubling");
    out.s = std::max(s1, s2);
    Vec u0 = (s2 >= s1) ? arg2 : arg1;  // |u0| = sampled sup > true sup - r
    // pull u0 inside P (0 is in P, so shrinking toward 0 stays inside; the
    // membership test needs a little interior margin near the boundary)
    u0 = scaled(u0, 1.0 - 1e-9);
    for (int k = 0; k < 40 && !P.contains(u0); ++k) u0 = scaled(u0, 1.0 - 1e-6);
    if (!P.contains(u0)) throw NumericError("kuzeliky_point: u0 left the slice");
    out.u0 = Y.embed(u0);
    const Vec yx = scaled(u0, 8.0);
    out.y_x = Y.embed(yx);

    // certificate: samples of P belong to conv[{y_x} u 8B] (tested inside Y:
    // the slice of that hull is conv[{y_x} u (8B cap Y)])
    GeneratorSet target;
    target.dim = Y.dim();
    target.points.push_back(yx);
    target.balls.push_back({zeros(Y.dim()), 8.0 * r});
    const ConvexSet T(target);
    out.cert.pass = true;
    Rng rng(seed + 3);
    for (std::size_t i = 0; i < cert_samples; ++i) {
        const Vec p = P.sample(rng);
        const double d = distance(T, p).dist;
        ++out.cert.samples;
        if (d > tol && d > out.cert.worst.amount) {
            out.cert.pass = false;
            out.cert.worst = {d, p, {}, "slice point outside the 8-fold hull"};
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// separable_quotient_extend_sets: the inductive construction of D_j
// ---------------------------------------------------------------------------

struct QuotientStageRow {
    std::size_t n = 0;
    std::size_t k_n = 0;
    std::size_t cover_size = 0;  // |F|
};

struct QuotientExtendResult {
    SetSequence D;
    std::vector<QuotientStageRow> rows;
    double r = 0.0;
    Certificate slice_cert;     // D_j cap Y subset C_j
    Certificate coverage_cert;  // grid up to radius R covered by some D_j
    std::string log;
};

struct QuotientExtendParams {
    std::size_t z_count = 8;       // how many z_n stages to process
    double coverage_radius = 10.0;
    double coverage_spacing = 2.0;
    std::size_t slice_samples = 300;
    std::uint64_t seed = 4004;
};

inline QuotientExtendResult separable_quotient_extend_sets(const SubspacePair& pair,
                                                           const SetSequence& C,
                                                           const QuotientExtendParams& prm = {}) {
    pair.validate();
    if (C.sets.empty()) throw PreconditionError("separable_quotient_extend_sets: empty C");
    const std::size_t K = C.sets.size();
    const SubspaceBasis& Y = pair.Y;
    const std::size_t m = Y.dim();

    // r with 8 r B_Y subset C_1 (0 must be interior to C_1)
    const double r = 0.9 * depth(C.sets.front(), zeros(m), 64, prm.seed) / 8.0;
    if (!(r > 0.0))
        throw PreconditionError("separable_quotient_extend_sets: 0 not interior to C_1");

    std::ostringstream log;
    log << "r = " << r << "\n";

    const std::size_t n_max = std::min(prm.z_count, pair.quotient_dense_seq.size());
    QuotientExtendResult out;
    out.r = r;

    // inductive Claim: conv(Z_n u B) cap Y subset C_{k_n}
    std::vector<std::size_t> k(n_max + 1, 0);
    k[0] = 1;
    Rng rng(prm.seed + 1);
    for (std::size_t n = 1; n <= n_max; ++n) {
        // finite cover F subset Z_n with Z_n subset F + B: greedy r-net over
        // the vertices and sampled hull points
        std::vector<Vec> candidates(pair.quotient_dense_seq.begin(),
                                    pair.quotient_dense_seq.begin() + n);
        if (n > 1) {
            const ConvexSet Zn(point_set(candidates));
            for (std::size_t i = 0; i < 64 * n; ++i) candidates.push_back(Zn.sample(rng));
        }
        std::vector<Vec> F;
        auto net_dist = [&](const Vec& c) {
            double dmin = kInf;
            for (const auto& f : F) dmin = std::min(dmin, dist(c, f));
            return dmin;
        };
        for (const auto& c : candidates)
            if (net_dist(c) > r) F.push_back(c);
        // densify: the greedy net covers the candidate samples only, so
        // patch holes found by fresh hull samples until a clean round
        const ConvexSet Zn(point_set(std::vector<Vec>(pair.quotient_dense_seq.begin(),
                                                      pair.quotient_dense_seq.begin() + n)));
        for (int round = 0; round < 16; ++round) {
            bool clean = true;
            for (std::size_t i = 0; i < 200; ++i) {
                const Vec z = Zn.sample(rng);
                if (net_dist(z) > 0.9 * r) {
                    F.push_back(z);
                    clean = false;
                }
            }
            if (clean) break;
        }
        // verify the cover on fresh samples of Z_n
        for (std::size_t i = 0; i < 200; ++i) {
            const Vec z = Zn.sample(rng);
            if (net_dist(z) > r + 1e-9)
                throw NumericError("separable_quotient_extend_sets: stage " +
                                   std::to_string(n) + ": cover construction failed");
        }

        // y_x for each x in F, then the smallest k_n > k_{n-1} with all
        // y_x in C_{k_n}
        std::vector<Vec> ys;
        for (const auto& xf : F) {
            const KuzelikyResult kr = kuzeliky_point(pair, r, xf, 64, 200, 1e-7, prm.seed + n);
            if (!kr.cert.pass) throw CertificationError(kr.cert);
            ys.push_back(Y.coords(kr.y_x));
        }
        std::size_t kn = 0;
        for (std::size_t cand = k[n - 1] + 1; cand <= K; ++cand) {
            bool all_in = true;
            for (const auto& y : ys)
                if (!C.sets[cand - 1].contains(y, 1e-9)) {
                    all_in = false;
                    break;
                }
            if (all_in) {
                kn = cand;
                break;
            }
        }
        if (kn == 0)
            throw NumericError("separable_quotient_extend_sets: stage " + std::to_string(n) +
                               ": k_n exceeds available C stages");
        k[n] = kn;
        out.rows.push_back({n, kn, F.size()});
        log << "stage " << n << ": |F| = " << F.size() << ", k_n = " << kn << "\n";
    }

    // D_j = int conv(Z_{n(j)} u B u C_j) with k_{n(j)} <= j < k_{n(j)+1}
    out.D.monotone = true;
    for (std::size_t j = 1; j <= K; ++j) {
        std::size_t nj = 0;
        for (std::size_t n = 0; n <= n_max; ++n)
            if (k[n] <= j && (n == n_max || k[n + 1] > j)) nj = n;
        GeneratorSet g = ball_set(zeros(pair.ambient_dim), r);
        for (std::size_t i = 0; i < nj; ++i) g.points.push_back(pair.quotient_dense_seq[i]);
        const GeneratorSet gcY = detail::to_generator(C.sets[j - 1]);
        for (const auto& p : gcY.points) g.points.push_back(Y.embed(p));
        for (const auto& b : gcY.balls) g.balls.push_back({Y.embed(b.center), b.radius});
        g.open = true;
        out.D.sets.push_back(ConvexSet(std::move(g)));
    }

    // certificate: D_j cap Y subset C_j
    Certificate& sc = out.slice_cert;
    sc.kind = CertKind::inclusion;
    sc.label = "D_j cap Y subset C_j";
    sc.seed = prm.seed + 2;
    sc.pass = true;
    {
        Rng rng2(sc.seed);
        for (std::size_t j = 0; j < K; ++j) {
            const ConvexSet P = slice_subspace(out.D.sets[j], Y);
            if (P.is_empty()) continue;
            for (std::size_t i = 0; i < prm.slice_samples; ++i) {
                const Vec y = P.sample(rng2);
                ++sc.samples;
                if (!C.sets[j].contains(y, 1e-7)) {
                    sc.pass = false;
                    const double d = distance(C.sets[j], y).dist;
                    if (d > sc.worst.amount)
                        sc.worst = {d, y, {}, "stage " + std::to_string(j + 1)};
                }
            }
        }
    }

    // coverage: ambient grid up to radius R hit by some D_j
    Certificate& cc = out.coverage_cert;
    cc.kind = CertKind::inclusion;
    cc.label = "union D_j covers the grid";
    cc.pass = true;
    {
        const std::size_t nd = pair.ambient_dim;
        const long reach = static_cast<long>(prm.coverage_radius / prm.coverage_spacing);
        std::vector<long> idx(nd, -reach);
        while (true) {
            Vec p(nd);
            for (std::size_t i = 0; i < nd; ++i)
                p[i] = static_cast<double>(idx[i]) * prm.coverage_spacing;
            if (norm(p) <= prm.coverage_radius) {
                ++cc.samples;
                bool hit = false;
                for (const auto& Dj : out.D.sets)
                    if (Dj.contains(p, 1e-9)) {
                        hit = true;
                        break;
                    }
                if (!hit) {
                    cc.pass = false;
                    if (norm(p) > cc.worst.amount) cc.worst = {norm(p), p, {}, "uncovered"};
                }
            }
            std::size_t i = 0;
            for (; i < nd; ++i) {
                if (++idx[i] <= reach) break;
                idx[i] = -reach;
            }
            if (i == nd) break;
        }
    }
    out.log = log.str();
    return out;
}

}  // namespace cvx

#endif
