#ifndef CVX_CONVEX_FN_HPP
#define CVX_CONVEX_FN_HPP

#include <algorithm>
#include <cmath>
#include <functional>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "cvx/convex_set.hpp"

namespace cvx {

// ---------------------------------------------------------------------------
// Evaluable continuous convex functions as closed expression trees.
// Convexity is a contract on construction, certificate-backed by
// convexity_check (dc_fn.hpp) rather than proved symbolically.
// ---------------------------------------------------------------------------

enum class FnKind {
    affine,          // <w,x> + b
    max_of,          // max(children)
    sum_of,          // sum(children)
    scale,           // c * child, c >= 0
    dist_to_set,     // dist(x, set)
    norm_of_affine,  // | M x + shift |
    square,          // child^2, child convex and nonnegative
    sup_family,      // named closed-form family with a grid oracle
    inf_conv,        // inf over c in C of child(c) + L |x - c|
    hartman_limit,   // stagewise majorant, stabilizing max
    opaque,          // named evaluator (certificate-backed convexity)
};

struct FnNode;
using FnPtr = std::shared_ptr<const FnNode>;

struct HartmanStage {
    ConvexSet D;  // D_{k-1} of the branch a + b * dist(x, D_{k-1})
    double a = 0.0;
    double b = 0.0;
};

struct FnNode {
    FnKind kind;

    Vec w;                      // affine
    double b = 0.0;             // affine offset
    double c = 1.0;             // scale factor
    std::vector<FnPtr> children;

    ConvexSet set;              // dist_to_set / inf_conv domain
    std::vector<Vec> mat;       // norm_of_affine rows
    Vec shift;

    std::string name;           // sup_family / opaque id
    Vec params;
    std::function<double(const Vec&)> eval_fn;    // sup_family closed form / opaque
    std::function<double(const Vec&)> oracle_fn;  // sup_family grid oracle

    double lip = 0.0;           // inf_conv Lipschitz constant
    double base_const = 0.0;    // hartman g_1 = M_2
    std::vector<HartmanStage> stages;
};

namespace detail {
double eval_node(const FnNode& n, const Vec& x);
}

class ConvexFn {
  public:
    ConvexFn() = default;
    explicit ConvexFn(FnPtr root) : root_(std::move(root)) {}

    bool empty() const { return !root_; }
    const FnPtr& root() const { return root_; }

    double operator()(const Vec& x) const {
        if (!root_) throw PreconditionError("ConvexFn: empty");
        return detail::eval_node(*root_, x);
    }

  private:
    FnPtr root_;
};

// ---- builders -------------------------------------------------------------

inline ConvexFn affine_fn(Vec w, double b) {
    auto n = std::make_shared<FnNode>();
    n->kind = FnKind::affine;
    n->w = std::move(w);
    n->b = b;
    return ConvexFn(n);
}

inline ConvexFn constant_fn(std::size_t dim, double b) { return affine_fn(zeros(dim), b); }

inline ConvexFn max_fn(std::vector<ConvexFn> parts) {
    auto n = std::make_shared<FnNode>();
    n->kind = FnKind::max_of;
    for (auto& p : parts) n->children.push_back(p.root());
    return ConvexFn(n);
}

inline ConvexFn sum_fn(std::vector<ConvexFn> parts) {
    auto n = std::make_shared<FnNode>();
    n->kind = FnKind::sum_of;
    for (auto& p : parts) n->children.push_back(p.root());
    return ConvexFn(n);
}

inline ConvexFn scale_fn(double c, const ConvexFn& f) {
    if (c < 0.0) throw PreconditionError("scale_fn: negative factor");
    auto n = std::make_shared<FnNode>();
    n->kind = FnKind::scale;
    n->c = c;
    n->children.push_back(f.root());
    return ConvexFn(n);
}

inline ConvexFn dist_fn(ConvexSet set) {
    auto n = std::make_shared<FnNode>();
    n->kind = FnKind::dist_to_set;
    n->set = std::move(set);
    return ConvexFn(n);
}

// |M x + shift|
inline ConvexFn norm_affine_fn(std::vector<Vec> rows, Vec shift) {
    auto n = std::make_shared<FnNode>();
    n->kind = FnKind::norm_of_affine;
    n->mat = std::move(rows);
    n->shift = std::move(shift);
    return ConvexFn(n);
}

inline ConvexFn norm_fn(std::size_t dim) {
    std::vector<Vec> rows;
    for (std::size_t i = 0; i < dim; ++i) rows.push_back(unit(dim, i));
    return norm_affine_fn(std::move(rows), zeros(dim));
}

// child must be convex and nonnegative for the square to stay convex
inline ConvexFn square_fn(const ConvexFn& f) {
    auto n = std::make_shared<FnNode>();
    n->kind = FnKind::square;
    n->children.push_back(f.root());
    return ConvexFn(n);
}

inline ConvexFn sqnorm_fn(std::size_t dim) { return square_fn(norm_fn(dim)); }

inline ConvexFn sup_family_fn(std::string name, Vec params,
                              std::function<double(const Vec&)> closed_form,
                              std::function<double(const Vec&)> grid_oracle) {
    auto n = std::make_shared<FnNode>();
    n->kind = FnKind::sup_family;
    n->name = std::move(name);
    n->params = std::move(params);
    n->eval_fn = std::move(closed_form);
    n->oracle_fn = std::move(grid_oracle);
    return ConvexFn(n);
}

inline ConvexFn opaque_fn(std::string name, std::function<double(const Vec&)> eval) {
    auto n = std::make_shared<FnNode>();
    n->kind = FnKind::opaque;
    n->name = std::move(name);
    n->eval_fn = std::move(eval);
    return ConvexFn(n);
}

// inf over c in C of f(c) + L |x - c|  (the canonical Lipschitz extension)
inline ConvexFn inf_conv_fn(const ConvexFn& f, double L, ConvexSet C) {
    if (L < 0.0) throw PreconditionError("inf_conv_fn: negative Lipschitz bound");
    auto n = std::make_shared<FnNode>();
    n->kind = FnKind::inf_conv;
    n->children.push_back(f.root());
    n->lip = L;
    n->set = std::move(C);
    return ConvexFn(n);
}

inline ConvexFn hartman_fn(double base_const, std::vector<HartmanStage> stages) {
    auto n = std::make_shared<FnNode>();
    n->kind = FnKind::hartman_limit;
    n->base_const = base_const;
    n->stages = std::move(stages);
    return ConvexFn(n);
}

// ---- evaluation -----------------------------------------------------------

namespace detail {

// inf-convolution: multi-start projected subgradient descent over c in C.
// The objective is convex in c and C exposes a projection oracle.
inline double eval_inf_conv(const FnNode& n, const Vec& x) {
    const ConvexFn f(n.children.front());
    const ConvexSet& C = n.set;
    const double L = n.lip;
    auto objective = [&](const Vec& c) { return f(c) + L * dist(x, c); };

    std::vector<Vec> starts;
    {
        const DistanceResult dr = distance(C, x);
        starts.push_back(dr.nearest);
        starts.push_back(C.interior_point());
        Rng rng(0xCAFE);
        for (int k = 0; k < 8; ++k) starts.push_back(C.sample(rng));
    }

    double best = kInf;
    const std::size_t d = x.size();
    for (const Vec& s0 : starts) {
        Vec c = s0;
        double fc = objective(c);
        best = std::min(best, fc);
        double step = std::max(0.1, 0.1 * dist(x, c));
        for (int it = 0; it < 500; ++it) {
            // finite-difference subgradient of the objective at c
            Vec g(d, 0.0);
            const double h = 1e-7 * (1.0 + norm(c));
            for (std::size_t i = 0; i < d; ++i) {
                Vec cp = c, cm = c;
                cp[i] += h;
                cm[i] -= h;
                g[i] = (objective(cp) - objective(cm)) / (2.0 * h);
            }
            const double gn = norm(g);
            if (gn < 1e-14) break;
            Vec cand = c;
            axpy(cand, -step / gn, g);
            cand = distance(C, cand).nearest;  // project back onto C
            const double fcand = objective(cand);
            if (fcand < fc) {
                c = cand;
                fc = fcand;
                best = std::min(best, fc);
            } else {
                step *= 0.5;
                if (step < 1e-12) break;
            }
        }
    }
    return best;
}

inline double eval_hartman(const FnNode& n, const Vec& x) {
    // g_k = max{g_{k-1}, a_k + b_k dist(., D_{k-1})}; once x lies in a stage
    // set every later branch contributes at most its a (<= current value), so
    // the sequence has stabilized.
    double val = n.base_const;
    for (const auto& st : n.stages) {
        const double d = distance(st.D, x).dist;
        val = std::max(val, st.a + st.b * d);
        if (d <= 1e-12) break;
    }
    return val;
}

inline double eval_node(const FnNode& n, const Vec& x) {
    switch (n.kind) {
        case FnKind::affine:
            return dot(n.w, x) + n.b;
        case FnKind::max_of: {
            double v = -kInf;
            for (const auto& ch : n.children) v = std::max(v, eval_node(*ch, x));
            return v;
        }
        case FnKind::sum_of: {
            double v = 0.0;
            for (const auto& ch : n.children) v += eval_node(*ch, x);
            return v;
        }
        case FnKind::scale:
            return n.c * eval_node(*n.children.front(), x);
        case FnKind::dist_to_set:
            return distance(n.set, x).dist;
        case FnKind::norm_of_affine: {
            double s = 0.0;
            for (std::size_t i = 0; i < n.mat.size(); ++i) {
                const double r = dot(n.mat[i], x) + n.shift[i];
                s += r * r;
            }
            return std::sqrt(s);
        }
        case FnKind::square: {
            const double v = eval_node(*n.children.front(), x);
            return v * v;
        }
        case FnKind::sup_family:
        case FnKind::opaque:
            return n.eval_fn(x);
        case FnKind::inf_conv:
            return eval_inf_conv(n, x);
        case FnKind::hartman_limit:
            return eval_hartman(n, x);
    }
    throw NumericError("eval_node: unknown kind");
}

}  // namespace detail

}  // namespace cvx

#endif
