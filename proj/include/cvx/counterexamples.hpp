#ifndef CVX_COUNTEREXAMPLES_HPP
#define CVX_COUNTEREXAMPLES_HPP

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>
#include <vector>

#include "cvx/dc_calculus.hpp"
#include "cvx/set_ops.hpp"

namespace cvx {

// ---------------------------------------------------------------------------
// The strip function f(x,y) = sup_t a_t(x,y) on P = R x [-1,0]
//
// a_t(x,y) = t^2 + 2t(x-t) + t^2 y = 2tx - t^2(1-y), a concave quadratic in t
// with vertex t* = x/(1-y), so f(x,y) = x^2/(1-y) on the strip.
// ---------------------------------------------------------------------------

inline double strip_affine_piece(double t, double x, double y) {
    return t * t + 2.0 * t * (x - t) + t * t * y;
}

inline double strip_closed_form(double x, double y) { return x * x / (1.0 - y); }

// grid-supremum oracle: symmetric grid around t* (so the vertex is a grid
// node), then golden-section polish of the best bracket
inline double strip_grid_sup(double x, double y, std::size_t grid = 64) {
    const double tstar = x / (1.0 - y);
    // localization: on (tau-1, tau+1) x [-1,0] the sup is attained within
    // |t| <= 2(|tau|+1)
    const double span = std::max(1.0, 2.0 * (std::abs(tstar) + 1.0) - std::abs(tstar));
    double best = -kInf, bt = tstar;
    for (std::size_t k = 0; k <= grid; ++k) {
        const double t =
            tstar + span * (2.0 * static_cast<double>(k) / static_cast<double>(grid) - 1.0);
        const double v = strip_affine_piece(t, x, y);
        if (v > best) {
            best = v;
            bt = t;
        }
    }
    // golden-section refinement of the hosting bracket
    const double h = 2.0 * span / static_cast<double>(grid);
    double a = bt - h, b = bt + h;
    const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
    double c1 = b - gr * (b - a), c2 = a + gr * (b - a);
    double f1 = strip_affine_piece(c1, x, y), f2 = strip_affine_piece(c2, x, y);
    for (int it = 0; it < 120; ++it) {
        if (f1 < f2) {
            a = c1;
            c1 = c2;
            f1 = f2;
            c2 = a + gr * (b - a);
            f2 = strip_affine_piece(c2, x, y);
        } else {
            b = c2;
            c2 = c1;
            f2 = f1;
            c1 = b - gr * (b - a);
            f1 = strip_affine_piece(c1, x, y);
        }
    }
    return std::max(best, std::max(f1, f2));
}

struct StripFunction {
    ConvexFn fn;      // sup-family node (closed form + grid oracle)
    ConvexSet domain;  // the strip

    double operator()(double x, double y) const { return fn(Vec{x, y}); }
};

inline ConvexSet strip_domain() {
    ImplicitSet s;
    s.dim = 2;
    s.interior_point = Vec{0.0, -0.5};
    s.name = "strip";
    s.membership = [](const Vec& v) { return v[1] <= 0.0 && v[1] >= -1.0; };
    return ConvexSet(s);
}

inline StripFunction strip_function() {
    StripFunction f;
    f.domain = strip_domain();
    f.fn = sup_family_fn(
        "strip", Vec{},
        [](const Vec& v) { return strip_closed_form(v[0], v[1]); },
        [](const Vec& v) { return strip_grid_sup(v[0], v[1]); });
    return f;
}

inline double strip_eval(double x, double y) {
    if (y < -1.0 || y > 0.0) throw PreconditionError("strip_eval: y outside [-1,0]");
    return strip_closed_form(x, y);
}

// one-sided derivative at a point of the strip, Richardson-extrapolated
// difference quotients along a direction pointing into the strip
inline double strip_directional_derivative(const Vec& at, const Vec& dir,
                                           std::size_t h_steps = 10) {
    const double x = at[0], y = at[1];
    if (y < -1.0 || y > 0.0) throw PreconditionError("strip_directional_derivative: base point");
    double h0 = 0.5;
    // shrink until the segment stays inside the strip
    while (h0 > 1e-12) {
        const double ye = y + h0 * dir[1];
        if (ye >= -1.0 && ye <= 0.0) break;
        h0 *= 0.5;
    }
    if (h0 <= 1e-12) throw PreconditionError("strip_directional_derivative: direction exits strip");

    const double f0 = strip_eval(x, y);
    std::vector<double> col;
    double h = h0;
    for (std::size_t i = 0; i < h_steps; ++i) {
        col.push_back((strip_eval(x + h * dir[0], y + h * dir[1]) - f0) / h);
        h *= 0.5;
    }
    // Richardson (Neville table): level j removes the O(h^j) error term
    for (std::size_t lvl = 1; lvl < col.size(); ++lvl) {
        const double p = std::pow(2.0, static_cast<double>(lvl));
        for (std::size_t i = col.size(); i-- > lvl;)
            col[i] = (p * col[i] - col[i - 1]) / (p - 1.0);
    }
    return col.back();
}

inline double strip_directional_derivative(double tau, const Vec& dir,
                                           std::size_t h_steps = 10) {
    return strip_directional_derivative(Vec{tau, 0.0}, dir, h_steps);
}

// Finite certificate that no convex extension past the strip can assign a
// finite value at `target`: the triple (target, (tau,0), (4tau/3,-1)) is
// collinear with weight 1/4, so convexity forces
//   g(target) >= 4 f(tau,0) - 3 f(4tau/3,-1) = (4/3) tau^2,
// unbounded along tau_list.
struct StripCertificate {
    Certificate cert;
    std::vector<std::pair<double, double>> rows;  // (tau, LB)
};

inline StripCertificate no_convex_extension_certificate(const std::vector<double>& tau_list,
                                                        const Vec& target = Vec{0.0, 3.0},
                                                        double finite_cap = 1e6) {
    if (tau_list.empty()) throw PreconditionError("no_convex_extension_certificate: empty taus");
    for (std::size_t i = 0; i < tau_list.size(); ++i) {
        if (tau_list[i] <= 0.0 || (i > 0 && tau_list[i] <= tau_list[i - 1]))
            throw PreconditionError("no_convex_extension_certificate: taus must be positive increasing");
    }

    StripCertificate out;
    Certificate& c = out.cert;
    c.kind = CertKind::non_extendability;
    c.label = "no convex extension (three-point bound)";
    c.samples = tau_list.size();
    c.tolerance = 1e-12;
    c.pass = true;

    double prev = -kInf;
    for (const double tau : tau_list) {
        // interior point of the segment from target to the far boundary point
        const double lambda = 1.0 / 4.0;
        const Vec far{4.0 * tau / 3.0, -1.0};
        const Vec mid{tau, 0.0};
        // collinearity: mid = lambda*target + (1-lambda)*far
        const Vec combo = add(scaled(target, lambda), scaled(far, 1.0 - lambda));
        if (dist(combo, mid) > 1e-12) {
            c.pass = false;
            c.worst = {dist(combo, mid), mid, far, "collinearity failure"};
            break;
        }
        // extended precision: at tau = 100 the target tolerance (1e-12
        // absolute) sits below one double ulp of the result
        const long double t = tau;
        const long double xf = 4.0L * t / 3.0L;
        const long double lam = lambda;
        const double lb = static_cast<double>(
            (t * t - (1.0L - lam) * (xf * xf / 2.0L)) / lam);
        out.rows.emplace_back(tau, lb);
        if (lb <= prev) {
            c.pass = false;
            c.worst = {prev - lb, Vec{tau}, {}, "lower bound not increasing"};
            break;
        }
        prev = lb;
    }
    if (c.pass && prev <= finite_cap && tau_list.back() < std::sqrt(0.75 * finite_cap))
        c.worst.note = "cap not exceeded at largest tau (enlarge tau_list)";
    c.worst.amount = std::max(c.worst.amount, 0.0);
    if (c.pass) c.worst.note = "max LB " + std::to_string(prev);
    return out;
}

// ---------------------------------------------------------------------------
// The ell_2 example at truncation N
// ---------------------------------------------------------------------------

struct EllTwoExample {
    std::size_t N = 0;
    std::vector<double> h;                              // h[n-1] = h_n, n = 1..N
    std::vector<std::pair<std::size_t, std::size_t>> z_index;  // (n,k), n<k<=N
    std::vector<Vec> z_points;
    ConvexSet C;    // conv(1/2 B union z_points) in R^N
    ConvexFn g;     // 1/(1-|x|) on U(0,1)

    const Vec& z(std::size_t n, std::size_t k) const {
        for (std::size_t i = 0; i < z_index.size(); ++i)
            if (z_index[i].first == n && z_index[i].second == k) return z_points[i];
        throw PreconditionError("EllTwoExample::z: index out of range");
    }
};

inline double elltwo_h(std::size_t n) {
    const double nn = static_cast<double>(n);
    return std::sqrt(2.0 / nn - 1.0 / (nn * nn));
}

inline ConvexFn elltwo_g(std::size_t /*dim*/) {
    return opaque_fn("1/(1-|x|)", [](const Vec& x) {
        const double r = norm(x);
        if (r >= 1.0) throw PreconditionError("g: point outside U(0,1)");
        return 1.0 / (1.0 - r);
    });
}

inline EllTwoExample build_elltwo(std::size_t N) {
    if (N < 2) throw PreconditionError("build_elltwo: N >= 2 required");
    EllTwoExample ex;
    ex.N = N;
    for (std::size_t n = 1; n <= N; ++n) {
        const double h = elltwo_h(n);
        const double a = 1.0 - 1.0 / static_cast<double>(n);
        if (std::abs(a * a + h * h - 1.0) > 1e-12)
            throw NumericError("build_elltwo: h_n identity violated");
        ex.h.push_back(h);
    }
    GeneratorSet gen = ball_set(zeros(N), 0.5);
    for (std::size_t n = 1; n < N; ++n) {
        for (std::size_t k = n + 1; k <= N; ++k) {
            Vec z = zeros(N);
            z[n - 1] = 1.0 - 1.0 / static_cast<double>(n);
            z[k - 1] = ex.h[n - 1] * (1.0 - 1.0 / static_cast<double>(k));
            const double nz2 = norm2(z);
            const double expect = 1.0 - ex.h[n - 1] * ex.h[n - 1] * ex.h[k - 1] * ex.h[k - 1];
            if (std::abs(nz2 - expect) > 1e-12)
                throw NumericError("build_elltwo: |z|^2 identity violated");
            if (nz2 >= 1.0) throw NumericError("build_elltwo: z not strictly inside the ball");
            ex.z_index.emplace_back(n, k);
            ex.z_points.push_back(z);
            gen.points.push_back(std::move(z));
        }
    }
    ex.C = ConvexSet(std::move(gen));
    // C inside U(0,1): the hull's norm sup is the max over atoms of |c| + r
    double sup = 0.5;
    for (const auto& z : ex.z_points) sup = std::max(sup, norm(z));
    if (sup >= 1.0) throw NumericError("build_elltwo: C escapes U(0,1)");
    ex.g = elltwo_g(N);
    return ex;
}

struct BlowupRow {
    std::size_t n = 0, k = 0;
    double z_norm = 0.0;
    double g_value = 0.0;
    double cluster_diam = 0.0;  // diameter of {z_{n,j} : n<j<=N}, repeated per row
};

struct BlowupReport {
    std::vector<BlowupRow> rows;
    Certificate diam_cert;     // diam <= sqrt(2) h_n
    Certificate growth_cert;   // g increasing in k for fixed n
    Certificate ndc;           // the non-d.c. witness at truncation N
};

inline BlowupReport elltwo_blowup_report(const EllTwoExample& ex, double growth_threshold = 1e3,
                                         double lambda = 0.95) {
    BlowupReport rep;
    Certificate& dc = rep.diam_cert;
    dc.kind = CertKind::inclusion;
    dc.label = "cluster diameters <= sqrt(2) h_n";
    dc.tolerance = 1e-9;
    dc.pass = true;

    Certificate& gc = rep.growth_cert;
    gc.kind = CertKind::convexity;
    gc.label = "g(z_{n,k}) increasing in k";
    gc.pass = true;

    std::vector<WitnessBall> balls;
    double best_cluster_value = kInf;
    for (std::size_t n = 1; n < ex.N; ++n) {
        // cluster of the n-th row
        std::vector<const Vec*> cluster;
        for (std::size_t i = 0; i < ex.z_index.size(); ++i)
            if (ex.z_index[i].first == n) cluster.push_back(&ex.z_points[i]);
        double diam = 0.0;
        for (std::size_t a = 0; a < cluster.size(); ++a)
            for (std::size_t b = a + 1; b < cluster.size(); ++b)
                diam = std::max(diam, dist(*cluster[a], *cluster[b]));
        const double bound = std::sqrt(2.0) * ex.h[n - 1];
        if (diam > bound + dc.tolerance) {
            dc.pass = false;
            dc.worst = {diam - bound, Vec{static_cast<double>(n)}, {}, "diameter bound"};
        }
        double prev = -kInf, rowmax = -kInf;
        for (std::size_t i = 0; i < ex.z_index.size(); ++i) {
            if (ex.z_index[i].first != n) continue;
            BlowupRow row;
            row.n = n;
            row.k = ex.z_index[i].second;
            row.z_norm = norm(ex.z_points[i]);
            row.g_value = ex.g(ex.z_points[i]);
            row.cluster_diam = diam;
            if (row.g_value <= prev) {
                gc.pass = false;
                gc.worst = {prev - row.g_value, ex.z_points[i], {}, "g not increasing in k"};
            }
            prev = row.g_value;
            rowmax = std::max(rowmax, row.g_value);
            rep.rows.push_back(row);
            ++gc.samples;
            ++dc.samples;
        }
        // witness ball around the far cluster point; radius covers the cluster
        const Vec& far = ex.z(n, ex.N);
        balls.push_back({far, bound + 1e-6, {far}});
        if (rowmax > growth_threshold) best_cluster_value = std::min(best_cluster_value, rowmax);
    }

    // keep only balls whose cluster attains the threshold; Lemma-style
    // witness needs strictly decreasing radii, which h_n already gives
    std::vector<WitnessBall> active;
    for (auto& b : balls)
        if (ex.g(b.center) > growth_threshold) active.push_back(b);
    if (active.empty()) {
        Certificate fail;
        fail.kind = CertKind::ndc_witness;
        fail.label = "ndc witness";
        fail.pass = false;
        fail.worst.note = "no cluster exceeds threshold at this truncation; increase N";
        rep.ndc = fail;
        return rep;
    }

    // the function under test: g on C, evaluated only where defined
    const ConvexFn g = ex.g;
    const ConvexSet C = ex.C;
    auto partial = [g, C](const Vec& x) -> std::optional<double> {
        if (norm(x) >= 1.0 || !C.contains(x, 1e-9)) return std::nullopt;
        return g(x);
    };
    const ConvexSet A(ball_set(zeros(ex.N), 2.5, /*open=*/true));
    rep.ndc = ndc_witness_check(partial, A, lambda, active, growth_threshold);
    return rep;
}

struct PositiveSideReport {
    Certificate convexity;                    // g convex on U(0, 1-eps)
    std::vector<std::pair<double, double>> lipschitz;  // (radius of A_n, estimate)
};

inline PositiveSideReport elltwo_positive_side(const EllTwoExample& ex, double eps = 0.1,
                                               std::size_t samples = 2000,
                                               std::uint64_t seed = 33) {
    PositiveSideReport rep;
    const ConvexSet shrunk(ball_set(zeros(ex.N), 1.0 - eps));
    rep.convexity = convexity_check(ex.g, shrunk, samples, seed, 1e-9);
    if (!rep.convexity.pass) throw CertificationError(rep.convexity);

    // Lipschitz estimates of g on A_n cap C for A_n = U(0, 1 - 1/n)
    Rng rng(seed + 1);
    for (std::size_t n = 2; n <= 8; ++n) {
        const double r = 1.0 - 1.0 / static_cast<double>(n);
        std::vector<Vec> pts;
        for (std::size_t i = 0; i < 50 * samples && pts.size() < 400; ++i) {
            const Vec x = ex.C.sample(rng);
            if (norm(x) < r) pts.push_back(x);
        }
        double est = 0.0;
        for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
            const double d = dist(pts[i], pts[i + 1]);
            if (d > 1e-12) est = std::max(est, std::abs(ex.g(pts[i]) - ex.g(pts[i + 1])) / d);
        }
        rep.lipschitz.emplace_back(r, est);
        // bound from the closed-form derivative: 1/(1-r)^2
        if (est > 1.0 / ((1.0 - r) * (1.0 - r)) + 1e-6)
            throw NumericError("elltwo_positive_side: Lipschitz estimate exceeds derivative bound");
    }
    return rep;
}

}  // namespace cvx

#endif
