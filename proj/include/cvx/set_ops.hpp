#ifndef CVX_SET_OPS_HPP
#define CVX_SET_OPS_HPP

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "cvx/convex_set.hpp"

namespace cvx {

// ---------------------------------------------------------------------------
// Hulls of generator sets
// ---------------------------------------------------------------------------

// conv(A u B) of two generator sets is the generator set on the union of
// their atoms.
inline GeneratorSet conv_union(const GeneratorSet& a, const GeneratorSet& b) {
    if (a.dim != b.dim) throw PreconditionError("conv_union: dim mismatch");
    GeneratorSet r = a;
    r.points.insert(r.points.end(), b.points.begin(), b.points.end());
    r.balls.insert(r.balls.end(), b.balls.begin(), b.balls.end());
    return r;
}

// (1-t)A + tB; Minkowski combination distributes over the atoms.
inline GeneratorSet mix(const GeneratorSet& a, const GeneratorSet& b, double t) {
    GeneratorSet r;
    r.dim = a.dim;
    for (std::size_t i = 0; i < a.atom_count(); ++i)
        for (std::size_t j = 0; j < b.atom_count(); ++j) {
            const Vec base = add(scaled(a.atom_base(i), 1.0 - t), scaled(b.atom_base(j), t));
            const double rad = (1.0 - t) * a.atom_radius(i) + t * b.atom_radius(j);
            if (rad > 0.0)
                r.balls.push_back({base, rad});
            else
                r.points.push_back(base);
        }
    return r;
}

// ---------------------------------------------------------------------------
// conv(A u B) = union over t of [(1-t)A + tB], certified by sampling
// ---------------------------------------------------------------------------

inline Certificate conv_union_segments_check(const GeneratorSet& A, const GeneratorSet& B,
                                             std::size_t samples, std::uint64_t seed,
                                             double tol = 1e-7) {
    if (A.dim != B.dim) throw PreconditionError("conv_union_segments_check: dim mismatch");
    Certificate cert;
    cert.kind = CertKind::inclusion;
    cert.label = "conv(AuB) segment identity";
    cert.samples = samples;
    cert.tolerance = tol;
    cert.seed = seed;
    cert.pass = true;

    Rng rng(seed);
    ConvexSet sa(A), sb(B);
    const GeneratorSet hull = conv_union(A, B);
    ConvexSet shull(hull);

    for (std::size_t i = 0; i < samples; ++i) {
        // forward: segment points between members land in the hull
        const Vec a = sa.sample(rng);
        const Vec b = sb.sample(rng);
        const double t = rng.uniform();
        const Vec p = lerp(a, b, t);
        const double d = distance(shull, p).dist;
        if (d > tol && d > cert.worst.amount) {
            cert.pass = false;
            cert.worst = {d, p, {}, "segment point outside hull"};
        }
        // converse: hull samples decompose as (1-t)A + tB for some t
        const Vec h = shull.sample(rng);
        double bestd = kInf;
        for (int k = 0; k <= 32; ++k) {
            const double tk = k / 32.0;
            bestd = std::min(bestd, distance(ConvexSet(mix(A, B, tk)), h).dist);
            if (bestd <= tol) break;
        }
        if (bestd > tol) {
            // golden-section refine around the best coarse t
            double lo = 0.0, hi = 1.0;
            for (int k = 0; k < 40 && bestd > tol; ++k) {
                const double t1 = lo + 0.381966 * (hi - lo);
                const double t2 = hi - 0.381966 * (hi - lo);
                const double d1 = distance(ConvexSet(mix(A, B, t1)), h).dist;
                const double d2 = distance(ConvexSet(mix(A, B, t2)), h).dist;
                bestd = std::min({bestd, d1, d2});
                (d1 < d2 ? hi : lo) = (d1 < d2 ? t2 : t1);
            }
        }
        if (bestd > tol && bestd > cert.worst.amount) {
            cert.pass = false;
            cert.worst = {bestd, h, {}, "hull point does not decompose"};
        }
    }
    return cert;
}

// ---------------------------------------------------------------------------
// Subspaces
// ---------------------------------------------------------------------------

// Orthonormal rows spanning a linear subspace of R^n.
struct SubspaceBasis {
    std::vector<Vec> rows;
    std::size_t ambient_dim = 0;

    std::size_t dim() const { return rows.size(); }

    Vec embed(const Vec& y) const {
        Vec x = zeros(ambient_dim);
        for (std::size_t i = 0; i < rows.size(); ++i) axpy(x, y[i], rows[i]);
        return x;
    }

    Vec coords(const Vec& x) const {
        Vec y(rows.size());
        for (std::size_t i = 0; i < rows.size(); ++i) y[i] = dot(rows[i], x);
        return y;
    }

    // orthogonal projection onto the subspace, in ambient coordinates
    Vec project(const Vec& x) const { return embed(coords(x)); }

    void validate() const {
        for (std::size_t i = 0; i < rows.size(); ++i) {
            if (rows[i].size() != ambient_dim)
                throw PreconditionError("SubspaceBasis: bad row dim");
            if (std::abs(norm(rows[i]) - 1.0) > 1e-9)
                throw PreconditionError("SubspaceBasis: rows not unit");
            for (std::size_t j = 0; j < i; ++j)
                if (std::abs(dot(rows[i], rows[j])) > 1e-9)
                    throw PreconditionError("SubspaceBasis: rows not orthogonal");
        }
    }
};

// A cap Y, represented in Y-coordinates as an implicit set. Returns the
// empty marker when no point of A lies on Y.
inline ConvexSet slice_subspace(const ConvexSet& A, const SubspaceBasis& Y,
                                double tol = 1e-7) {
    Y.validate();
    if (A.is_empty()) return ConvexSet::empty(Y.dim());

    auto dist_at = [&](const Vec& yc) { return distance(A, Y.embed(yc)).dist; };

    // find a point of A on Y: minimize dist(A, embed(yc)) by compass search
    Vec yc = Y.coords(A.interior_point());
    double best = dist_at(yc);
    double step = std::max(1.0, norm(yc));
    while (step > tol * 0.25 && best > 0.0) {
        bool improved = false;
        for (std::size_t i = 0; i < Y.dim(); ++i) {
            for (double sgn : {1.0, -1.0}) {
                Vec y2 = yc;
                y2[i] += sgn * step;
                const double d = dist_at(y2);
                if (d < best - 1e-15) {
                    best = d;
                    yc = y2;
                    improved = true;
                }
            }
        }
        if (!improved) step *= 0.5;
    }
    if (best > tol) return ConvexSet::empty(Y.dim());

    ImplicitSet s;
    s.dim = Y.dim();
    s.interior_point = yc;
    s.bounding_radius = A.bounded() ? 2.0 * A.bounding_radius() + 1.0 : kInf;
    s.name = "slice";
    s.membership = [A, Y, tol](const Vec& y) { return A.contains(Y.embed(y), tol); };
    return ConvexSet(s);
}

// ---------------------------------------------------------------------------
// Interior depth and the erosion exhaustion of Lemma-style D_n sequences
// ---------------------------------------------------------------------------

// Distance from an interior point to the complement, approximated as the
// minimum ray-exit length over sampled directions (plus the axes).
inline double depth(const ConvexSet& set, const Vec& p, std::size_t dirs = 48,
                    std::uint64_t seed = 12345) {
    if (!set.contains(p)) return 0.0;
    const std::size_t n = set.dim();
    double d = kInf;
    auto probe = [&](const Vec& u) { d = std::min(d, ray_exit(set, p, u)); };
    for (std::size_t i = 0; i < n; ++i) {
        probe(unit(n, i, 1.0));
        probe(unit(n, i, -1.0));
    }
    Rng rng(seed);
    for (std::size_t k = 0; k < dirs; ++k) probe(rng.unit_vector(n));
    return d;
}

struct RefinedSequence {
    std::vector<ConvexSet> sets;   // D_n
    std::vector<double> eps;       // D_n + eps_n * B subset C_n
    std::vector<double> delta;     // D_n + delta_n * B subset D_{n+1}
    Certificate cert;
};

// Lemma-style refinement: from a nondecreasing sequence of open convex C_n
// containing `anchor`, produce bounded D_n with D_n (+margin) inside C_n and
// D_n (+margin) inside D_{n+1}. Built by erosion
//   D_n = {x in C_n, |x - anchor| < n : dist(x, complement C_n) >= eps_n}
// with sampled post-verification and automatic eps shrinking.
inline RefinedSequence refine_sequence(const std::vector<ConvexSet>& C,
                                       const Vec& anchor,
                                       std::uint64_t seed = 20240601,
                                       std::size_t check_samples = 64,
                                       int max_rounds = 6) {
    if (C.empty()) throw PreconditionError("refine_sequence: empty input");
    if (!C.front().contains(anchor))
        throw PreconditionError("refine_sequence: anchor not in C_1");

    const std::size_t n = C.size();
    const std::size_t adim = anchor.size();
    RefinedSequence out;
    out.cert.kind = CertKind::nesting;
    out.cert.label = "refine_sequence";
    out.cert.seed = seed;
    out.cert.pass = true;

    double eps0 = std::max(depth(C.front(), anchor) * 0.5, 1e-9);

    for (int round = 0; round < max_rounds; ++round) {
        out.sets.clear();
        out.eps.clear();
        out.delta.clear();
        std::vector<double> eps(n);
        for (std::size_t k = 0; k < n; ++k) eps[k] = eps0 / std::pow(2.0, static_cast<double>(k));

        for (std::size_t k = 0; k < n; ++k) {
            const ConvexSet Ck = C[k];
            const double ek = eps[k];
            const double radius = static_cast<double>(k + 1);
            ImplicitSet d;
            d.dim = adim;
            d.interior_point = anchor;
            d.bounding_radius = radius + 1.0;
            d.name = "eroded";
            d.membership = [Ck, ek, anchor, radius](const Vec& x) {
                if (dist(x, anchor) > radius) return false;
                if (!Ck.contains(x)) return false;
                return depth(Ck, x) >= ek;
            };
            out.sets.emplace_back(d);
            out.eps.push_back(ek);
            out.delta.push_back(ek * 0.4);  // strict slack below eps_k - eps_{k+1}
        }

        // sampled verification of both nesting relations
        bool ok = true;
        Rng rng(seed + static_cast<std::uint64_t>(round));
        for (std::size_t k = 0; k < n && ok; ++k) {
            for (std::size_t s = 0; s < check_samples && ok; ++s) {
                Vec p;
                try {
                    p = out.sets[k].sample(rng);
                } catch (const NumericError&) {
                    ok = false;
                    out.cert.worst.note = "stage " + std::to_string(k) + ": no sample";
                    break;
                }
                const Vec u = rng.unit_vector(adim);
                if (!C[k].contains(add(p, scaled(u, out.eps[k] * 0.5)))) {
                    ok = false;
                    out.cert.worst = {out.eps[k], p, u, "eps margin stage " + std::to_string(k)};
                }
                if (k + 1 < n && !out.sets[k + 1].contains(add(p, scaled(u, out.delta[k])))) {
                    ok = false;
                    out.cert.worst = {out.delta[k], p, u, "delta margin stage " + std::to_string(k)};
                }
            }
        }
        out.cert.samples = check_samples * n;
        if (ok) {
            out.cert.pass = true;
            return out;
        }
        eps0 *= 0.5;
    }
    out.cert.pass = false;
    throw NumericError("refine_sequence: verification failed after max rounds (" +
                       out.cert.worst.note + ")");
}

}  // namespace cvx

#endif
