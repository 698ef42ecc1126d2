#ifndef CVX_CONVEX_SET_HPP
#define CVX_CONVEX_SET_HPP

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "cvx/certificate.hpp"
#include "cvx/rng.hpp"
#include "cvx/vec.hpp"

namespace cvx {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

// Global default tolerances; configurable from the CLI.
struct Tolerances {
    double dist = 1e-8;    // projection / distance accuracy
    double mink = 1e-10;   // gauge bisection accuracy
    double member = 1e-9;  // membership blur for oracle-backed sets
};

inline Tolerances& tolerances() {
    static Tolerances t;
    return t;
}

// ---------------------------------------------------------------------------
// Set representations
// ---------------------------------------------------------------------------

struct Ball {
    Vec center;
    double radius = 0.0;
};

struct Halfspace {
    Vec normal;   // <normal, x> <= offset
    double offset = 0.0;
};

// conv(points u balls): the closed convex hull of finitely many points and
// closed balls. Supports an exact linear maximization (support) oracle, so
// projections are handled by Frank-Wolfe with pairwise steps.
struct GeneratorSet {
    std::vector<Vec> points;
    std::vector<Ball> balls;
    std::size_t dim = 0;
    bool open = false;  // bookkeeping flag only; all numerics use the closure

    std::size_t atom_count() const { return points.size() + balls.size(); }

    const Vec& atom_base(std::size_t a) const {
        return a < points.size() ? points[a] : balls[a - points.size()].center;
    }

    double atom_radius(std::size_t a) const {
        return a < points.size() ? 0.0 : balls[a - points.size()].radius;
    }

    void validate() const {
        if (atom_count() == 0) throw PreconditionError("GeneratorSet: no generators");
        for (const auto& p : points)
            if (p.size() != dim || !all_finite(p))
                throw PreconditionError("GeneratorSet: bad point");
        for (const auto& b : balls) {
            if (b.center.size() != dim || !all_finite(b.center) || b.radius < 0.0)
                throw PreconditionError("GeneratorSet: bad ball");
        }
    }
};

inline GeneratorSet ball_set(Vec center, double radius, bool open = false) {
    GeneratorSet s;
    s.dim = center.size();
    s.balls.push_back({std::move(center), radius});
    s.open = open;
    return s;
}

inline GeneratorSet point_set(std::vector<Vec> pts) {
    GeneratorSet s;
    s.dim = pts.front().size();
    s.points = std::move(pts);
    return s;
}

// Convex region given only through a membership oracle. The supplier
// guarantees convexity of the accepted region (testable by segment sampling).
struct ImplicitSet {
    std::function<bool(const Vec&)> membership;
    Vec interior_point;
    double bounding_radius = kInf;  // radius of a ball around interior_point
    std::size_t dim = 0;
    bool open = false;
    std::string name;  // builder id for serialization
};

// ---------------------------------------------------------------------------
// ConvexSet: GeneratorSet | ImplicitSet | (either) intersected with halfspaces
// ---------------------------------------------------------------------------

class ConvexSet {
  public:
    ConvexSet() = default;  // empty set

    ConvexSet(GeneratorSet g) : gen_(std::make_shared<GeneratorSet>(std::move(g))) {
        gen_->validate();
    }

    ConvexSet(ImplicitSet s) : impl_(std::make_shared<ImplicitSet>(std::move(s))) {
        if (impl_->dim == 0 || impl_->interior_point.size() != impl_->dim)
            throw PreconditionError("ImplicitSet: bad interior point / dim");
    }

    static ConvexSet empty(std::size_t dim) {
        ConvexSet s;
        s.dim_override_ = dim;
        return s;
    }

    bool is_empty() const { return !gen_ && !impl_; }
    bool is_generator() const { return static_cast<bool>(gen_); }
    bool is_implicit() const { return static_cast<bool>(impl_); }

    const GeneratorSet& generator() const {
        if (!gen_) throw PreconditionError("not a generator set");
        return *gen_;
    }
    const ImplicitSet& implicit() const {
        if (!impl_) throw PreconditionError("not an implicit set");
        return *impl_;
    }

    std::size_t dim() const {
        if (gen_) return gen_->dim;
        if (impl_) return impl_->dim;
        return dim_override_;
    }

    bool open() const { return gen_ ? gen_->open : (impl_ ? impl_->open : false); }

    ConvexSet cut(Halfspace h) const {
        ConvexSet s = *this;
        s.cuts_.push_back(std::move(h));
        return s;
    }
    const std::vector<Halfspace>& cuts() const { return cuts_; }

    bool contains(const Vec& x, double tol) const;
    bool contains(const Vec& x) const { return contains(x, tolerances().member); }

    // Point with positive membership margin, where one is known.
    Vec interior_point() const;

    // Radius of a ball (around interior_point) containing the set; kInf if
    // unbounded or unknown.
    double bounding_radius() const;

    bool bounded() const { return bounding_radius() < kInf; }

    // Seeded sample from the set (closure). Non-uniform but supported
    // everywhere; certificates only need coverage, not uniformity.
    Vec sample(Rng& rng) const;

  private:
    std::shared_ptr<const GeneratorSet> gen_;
    std::shared_ptr<const ImplicitSet> impl_;
    std::vector<Halfspace> cuts_;
    std::size_t dim_override_ = 0;

    bool base_contains(const Vec& x, double tol) const;
};

// ---------------------------------------------------------------------------
// Support oracle
// ---------------------------------------------------------------------------

struct SupportResult {
    double value;
    Vec witness;
};

// h_C(u) = max over generators; for a ball (c,r) the candidate is
// <u,c> + r|u| with witness c + r*u/|u|.
inline SupportResult support(const GeneratorSet& set, const Vec& direction) {
    if (norm(direction) == 0.0) throw PreconditionError("support: zero direction");
    double best = -kInf;
    Vec witness;
    for (const auto& p : set.points) {
        const double v = dot(direction, p);
        if (v > best) {
            best = v;
            witness = p;
        }
    }
    const double dn = norm(direction);
    for (const auto& b : set.balls) {
        const double v = dot(direction, b.center) + b.radius * dn;
        if (v > best) {
            best = v;
            witness = add(b.center, scaled(direction, b.radius / dn));
        }
    }
    return {best, witness};
}

// ---------------------------------------------------------------------------
// Projection onto a generator set: pairwise Frank-Wolfe over atom weights.
//
// A point of conv(points u balls) is m(w) + R(w)*u with m the weighted atom
// bases, R the weighted ball radii and |u| <= 1, so
//   dist(x, C) = min over simplex w of max(0, |x - m(w)| - R(w)).
// The linear oracle over atoms is exact; pairwise steps avoid the sublinear
// zig-zag of plain Frank-Wolfe on polytope faces.
// ---------------------------------------------------------------------------

struct Projection {
    double dist = 0.0;
    Vec nearest;
    std::size_t iterations = 0;
    double gap = 0.0;
    bool converged = true;
};

namespace detail {

inline double hull_q(const Vec& x, const Vec& m, double R) { return dist(x, m) - R; }

}  // namespace detail

inline Projection project_generator(const GeneratorSet& set, const Vec& x,
                                    double tol, std::size_t max_iter = 10000) {
    const std::size_t A = set.atom_count();
    if (A == 1) {  // single point or ball: closed form
        const Vec& c = set.atom_base(0);
        const double r = set.atom_radius(0);
        const double d = dist(x, c);
        Projection pr;
        if (d <= r) {
            pr.nearest = x;
        } else {
            pr.dist = d - r;
            pr.nearest = (d > 0.0) ? add(c, scaled(sub(x, c), r / d)) : c;
        }
        return pr;
    }
    std::vector<double> w(A, 0.0);

    // start from the atom individually nearest to x
    std::size_t start = 0;
    double best = kInf;
    for (std::size_t a = 0; a < A; ++a) {
        const double d = dist(x, set.atom_base(a)) - set.atom_radius(a);
        if (d < best) {
            best = d;
            start = a;
        }
    }
    w[start] = 1.0;

    Vec m = set.atom_base(start);
    double R = set.atom_radius(start);

    auto finish_inside = [&](std::size_t it) {
        Projection pr;
        pr.dist = 0.0;
        pr.nearest = x;
        pr.iterations = it;
        pr.gap = 0.0;
        return pr;
    };

    const double gap_stop = std::max(tol * tol, 1e-30);
    Projection pr;
    std::size_t it = 0;
    for (; it < max_iter; ++it) {
        Vec wv = sub(x, m);
        const double wn = norm(wv);
        const double q = wn - R;
        if (q <= 0.0) return finish_inside(it);
        // within the requested tolerance: the descent direction is pure
        // noise from here and the duality gap can stall above gap_stop
        if (q <= tol) break;
        const Vec u = scaled(wv, 1.0 / wn);

        // partial derivative of q wrt weight of atom a (positive scale dropped)
        double gmin = kInf, gmax_active = -kInf;
        std::size_t s = 0, v = 0;
        double sum_g = 0.0;
        for (std::size_t a = 0; a < A; ++a) {
            const double g = -dot(u, set.atom_base(a)) - set.atom_radius(a);
            if (g < gmin) {
                gmin = g;
                s = a;
            }
            if (w[a] > 0.0) {
                sum_g += w[a] * g;
                if (g > gmax_active) {
                    gmax_active = g;
                    v = a;
                }
            }
        }
        const double gap = 2.0 * q * (sum_g - gmin);
        pr.gap = gap;
        // same threshold the convergence verdict uses below: iterating past
        // it cannot change the outcome
        if (gap <= std::max(gap_stop, 1e-12 * (1.0 + q)) || s == v) break;

        // exact line search along e_s - e_v for gamma in [0, w[v]]
        const Vec delta = sub(set.atom_base(s), set.atom_base(v));
        const double rho = set.atom_radius(s) - set.atom_radius(v);
        const double hi = w[v];
        auto q_at = [&](double g) {
            Vec mg = m;
            axpy(mg, g, delta);
            return detail::hull_q(x, mg, R + g * rho);
        };
        double gamma = hi;
        if (q_at(hi) <= 0.0) {
            // crossing into the set; locate q = 0 for a clean nearest point
            double lo = 0.0, hh = hi;
            for (int k = 0; k < 100; ++k) {
                const double mid = 0.5 * (lo + hh);
                (q_at(mid) <= 0.0 ? hh : lo) = mid;
            }
            gamma = hh;
        } else {
            // q is convex in gamma; bisect its derivative
            auto dq = [&](double g) {
                Vec mg = m;
                axpy(mg, g, delta);
                Vec wg = sub(x, mg);
                const double wgn = norm(wg);
                if (wgn < 1e-300) return -rho;
                return (g * norm2(delta) - dot(sub(x, m), delta)) / wgn - rho;
            };
            if (dq(hi) <= 0.0) {
                gamma = hi;
            } else if (dq(0.0) >= 0.0) {
                gamma = 0.0;
            } else {
                double lo = 0.0, hh = hi;
                for (int k = 0; k < 100; ++k) {
                    const double mid = 0.5 * (lo + hh);
                    (dq(mid) <= 0.0 ? lo : hh) = mid;
                }
                gamma = 0.5 * (lo + hh);
            }
        }
        if (gamma <= 0.0) break;  // no progress possible
        w[s] += gamma;
        w[v] -= gamma;
        if (w[v] < 1e-18) w[v] = 0.0;
        axpy(m, gamma, delta);
        R += gamma * rho;
    }

    Vec wv = sub(x, m);
    const double wn = norm(wv);
    const double q = wn - R;
    if (q <= 0.0) return finish_inside(it);
    pr.dist = q;
    pr.nearest = (wn > 0.0) ? add(m, scaled(wv, R / wn)) : m;
    pr.iterations = it;
    pr.converged = (q <= tol) || (pr.gap <= std::max(tol * tol, 1e-12 * (1.0 + q)));
    return pr;
}

// ---------------------------------------------------------------------------
// ConvexSet members that need the projection machinery
// ---------------------------------------------------------------------------

inline bool ConvexSet::base_contains(const Vec& x, double tol) const {
    if (gen_) return project_generator(*gen_, x, std::min(tol, 1e-10)).dist <= tol;
    return impl_->membership(x);
}

inline bool ConvexSet::contains(const Vec& x, double tol) const {
    if (is_empty()) return false;
    for (const auto& h : cuts_)
        if (dot(h.normal, x) > h.offset + tol) return false;
    return base_contains(x, tol);
}

inline Vec ConvexSet::interior_point() const {
    if (is_empty()) throw PreconditionError("interior_point: empty set");
    if (impl_) return impl_->interior_point;
    // centroid of the atoms
    const auto& g = *gen_;
    Vec c = zeros(g.dim);
    for (std::size_t a = 0; a < g.atom_count(); ++a) axpy(c, 1.0 / g.atom_count(), g.atom_base(a));
    return c;
}

inline double ConvexSet::bounding_radius() const {
    if (is_empty()) return 0.0;
    if (impl_) return impl_->bounding_radius;
    const Vec c = interior_point();
    double r = 0.0;
    const auto& g = *gen_;
    for (std::size_t a = 0; a < g.atom_count(); ++a)
        r = std::max(r, dist(c, g.atom_base(a)) + g.atom_radius(a));
    return r;
}

// Largest t with from + t*u in the set, capped. Assumes `from` is a member.
inline double ray_exit(const ConvexSet& set, const Vec& from, const Vec& u,
                       double cap = 1e9, double tol = 1e-12) {
    double hi = 1.0, lo = 0.0;
    auto member = [&](double t) { return set.contains(add(from, scaled(u, t))); };
    if (!member(0.0)) return 0.0;
    while (member(hi)) {
        lo = hi;
        hi *= 2.0;
        if (hi >= cap) return cap;
    }
    while (hi - lo > tol * std::max(1.0, hi)) {
        const double mid = 0.5 * (lo + hi);
        (member(mid) ? lo : hi) = mid;
    }
    return lo;
}

inline Vec ConvexSet::sample(Rng& rng) const {
    if (is_empty()) throw PreconditionError("sample: empty set");
    if (gen_ && cuts_.empty()) {
        const auto& g = *gen_;
        const std::size_t A = g.atom_count();
        std::vector<double> w(A);
        double s = 0.0;
        for (auto& wi : w) {
            wi = -std::log(std::max(rng.uniform(), 1e-300));
            s += wi;
        }
        Vec p = zeros(g.dim);
        for (std::size_t a = 0; a < A; ++a) {
            const double wa = w[a] / s;
            axpy(p, wa, g.atom_base(a));
            const double r = g.atom_radius(a);
            if (r > 0.0) axpy(p, wa * r, rng.in_unit_ball(g.dim));
        }
        return p;
    }
    // implicit or cut set: star-shaped sampling from an interior point
    const Vec c = interior_point();
    const double cap = std::min(bounding_radius() * 2.0 + 1.0, 1e6);
    for (int attempt = 0; attempt < 256; ++attempt) {
        const Vec u = rng.unit_vector(dim());
        const double exit = ray_exit(*this, c, u, cap);
        if (exit <= 0.0) continue;
        const double frac = std::pow(rng.uniform(), 1.0 / static_cast<double>(dim()));
        Vec p = add(c, scaled(u, 0.999999 * frac * exit));
        if (contains(p)) return p;
    }
    if (contains(c)) return c;  // degenerate set (e.g. a single point)
    throw NumericError("sample: could not draw a member point");
}

// ---------------------------------------------------------------------------
// distance(set, x)
// ---------------------------------------------------------------------------

struct DistanceResult {
    double dist = 0.0;
    Vec nearest;
    bool converged = true;
};

// Distance from x to the closure of `set`, with nearest point. Distance to
// the empty set is +inf. Generator sets use the exact support oracle through
// Frank-Wolfe; oracle-backed sets bisect the segment [interior_point, x] to
// the boundary and polish with a shrinking compass search over aim points.
inline DistanceResult distance(const ConvexSet& set, const Vec& x,
                               double tol = tolerances().dist,
                               std::size_t max_iter = 10000) {
    if (set.is_empty()) return {kInf, Vec{}, true};

    if (set.is_generator() && set.cuts().empty()) {
        Projection pr = project_generator(set.generator(), x, tol, max_iter);
        if (!pr.converged)
            throw NumericError("distance: Frank-Wolfe did not reach requested gap");
        return {pr.dist, pr.nearest, true};
    }

    if (set.contains(x, tol)) return {0.0, x, true};

    const Vec c = set.interior_point();
    // boundary point along [c, aim]
    auto boundary_towards = [&](const Vec& aim) {
        Vec u = sub(aim, c);
        const double n = norm(u);
        if (n == 0.0) return c;
        u = scaled(u, 1.0 / n);
        const double t = ray_exit(set, c, u, std::min(set.bounding_radius() * 2.0 + 1.0, 1e9));
        return add(c, scaled(u, t));
    };

    Vec bestp = boundary_towards(x);
    double bestd = dist(x, bestp);
    double step = std::max(bestd, 1e-3);
    const std::size_t n = set.dim();
    Vec aim = x;
    while (step > tol * 0.25) {
        bool improved = false;
        for (std::size_t i = 0; i < n; ++i) {
            for (double sgn : {1.0, -1.0}) {
                Vec a2 = aim;
                a2[i] += sgn * step;
                const Vec p = boundary_towards(a2);
                const double d = dist(x, p);
                if (d < bestd - 1e-15) {
                    bestd = d;
                    bestp = p;
                    aim = a2;
                    improved = true;
                }
            }
        }
        if (!improved) step *= 0.5;
    }
    return {bestd, bestp, true};
}

// ---------------------------------------------------------------------------
// Minkowski functional (gauge)
// ---------------------------------------------------------------------------

// mu(x) = inf{t > 0 : x - center in t*(set - center)}, computed by bisection
// on the membership oracle. Returns 0 along recession directions of an
// unbounded set (the inf is over an interval reaching to 0).
inline double minkowski(const ConvexSet& set, const Vec& center, const Vec& x,
                        double tol = tolerances().mink) {
    if (set.is_empty()) throw PreconditionError("minkowski: empty set");
    if (!set.contains(center))
        throw PreconditionError("minkowski: center not in set");
    // strict interiority probe
    {
        const double eps = 1e-9 * (1.0 + norm(center));
        for (std::size_t i = 0; i < set.dim(); ++i) {
            for (double sgn : {1.0, -1.0}) {
                Vec p = center;
                p[i] += sgn * eps;
                if (!set.contains(p))
                    throw PreconditionError("minkowski: center not strictly interior");
            }
        }
    }
    const Vec d = sub(x, center);
    const double scale = norm(d);
    if (scale == 0.0) return 0.0;

    // single closed ball: the gauge is the positive root of a quadratic
    if (set.is_generator() && set.cuts().empty() && set.generator().points.empty() &&
        set.generator().balls.size() == 1) {
        const Ball& b = set.generator().balls.front();
        const Vec e = sub(center, b.center);
        const double de = dot(d, e);
        const double disc = de * de + norm2(d) * (b.radius * b.radius - norm2(e));
        const double s = (-de + std::sqrt(std::max(0.0, disc))) / norm2(d);
        if (s <= 0.0) throw NumericError("minkowski: degenerate ball gauge");
        return 1.0 / s;
    }

    auto member = [&](double t) { return set.contains(add(center, scaled(d, 1.0 / t))); };

    double hi = 1.0;
    while (!member(hi)) {
        hi *= 2.0;
        if (hi > 1e15) throw NumericError("minkowski: no enclosing dilate found");
    }
    // walk down; all-t membership means a recession direction
    double lo = hi;
    const double floor_t = 1e-13 * std::max(1.0, scale);
    while (member(lo * 0.5)) {
        lo *= 0.5;
        if (lo < floor_t) return 0.0;
    }
    double nlo = lo * 0.5;  // non-member
    double nhi = lo;        // member
    while (nhi - nlo > tol * std::max(1.0, nhi)) {
        const double mid = 0.5 * (nlo + nhi);
        (member(mid) ? nhi : nlo) = mid;
    }
    return 0.5 * (nlo + nhi);
}

}  // namespace cvx

#endif
