#ifndef CVX_DC_FN_HPP
#define CVX_DC_FN_HPP

#include <cmath>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "cvx/convex_fn.hpp"
#include "cvx/convex_set.hpp"

namespace cvx {

// ---------------------------------------------------------------------------
// Midpoint-convexity certificate
// ---------------------------------------------------------------------------

inline Certificate convexity_check(const std::function<double(const Vec&)>& f,
                                   const ConvexSet& domain, std::size_t samples,
                                   std::uint64_t seed, double tol) {
    if (domain.is_empty()) throw PreconditionError("convexity_check: empty domain");
    Certificate cert;
    cert.kind = CertKind::convexity;
    cert.samples = samples;
    cert.tolerance = tol;
    cert.seed = seed;
    cert.pass = true;

    Rng rng(seed);
    for (std::size_t i = 0; i < samples; ++i) {
        const Vec x = domain.sample(rng);
        const Vec y = domain.sample(rng);
        const Vec m = lerp(x, y, 0.5);
        const double fm = f(m);
        const double avg = 0.5 * (f(x) + f(y));
        if (!std::isfinite(fm) || !std::isfinite(avg))
            throw NumericError("convexity_check: non-finite evaluation inside domain");
        const double viol = fm - avg;
        if (viol > tol && viol > cert.worst.amount) {
            cert.pass = false;
            cert.worst = {viol, x, y, "midpoint above chord"};
        }
    }
    return cert;
}

inline Certificate convexity_check(const ConvexFn& f, const ConvexSet& domain,
                                   std::size_t samples, std::uint64_t seed, double tol) {
    return convexity_check([&f](const Vec& x) { return f(x); }, domain, samples, seed, tol);
}

// ---------------------------------------------------------------------------
// Sampled Lipschitz estimate (lower bound on the true constant)
// ---------------------------------------------------------------------------

inline double lipschitz_estimate(const std::function<double(const Vec&)>& f,
                                 const ConvexSet& domain, std::size_t samples,
                                 std::uint64_t seed) {
    if (!domain.bounded()) throw PreconditionError("lipschitz_estimate: unbounded domain");
    Rng rng(seed);
    double best = 0.0;
    const std::size_t n = domain.dim();
    const std::size_t pairs = samples / 2;
    for (std::size_t i = 0; i < pairs; ++i) {
        const Vec x = domain.sample(rng);
        Vec y;
        if (i % 4 == 0) {
            // close pair: better difference quotients near the sup of |grad|
            y = add(x, scaled(rng.unit_vector(n), 1e-4 * (1.0 + norm(x))));
            if (!domain.contains(y)) y = domain.sample(rng);
        } else {
            y = domain.sample(rng);
        }
        const double d = dist(x, y);
        if (d < 1e-14) continue;
        best = std::max(best, std::abs(f(x) - f(y)) / d);
    }
    // axis difference quotients at interior samples
    const std::size_t probes = std::min<std::size_t>(128, samples);
    for (std::size_t i = 0; i < probes; ++i) {
        const Vec x = domain.sample(rng);
        Vec g(n, 0.0);
        bool ok = true;
        const double h = 1e-6 * (1.0 + norm(x));
        for (std::size_t k = 0; k < n && ok; ++k) {
            Vec xp = x, xm = x;
            xp[k] += h;
            xm[k] -= h;
            if (!domain.contains(xp) || !domain.contains(xm)) {
                ok = false;
                break;
            }
            g[k] = (f(xp) - f(xm)) / (2.0 * h);
        }
        if (ok) best = std::max(best, norm(g));
    }
    return best;
}

inline double lipschitz_estimate(const ConvexFn& f, const ConvexSet& domain,
                                 std::size_t samples, std::uint64_t seed) {
    return lipschitz_estimate([&f](const Vec& x) { return f(x); }, domain, samples, seed);
}

// ---------------------------------------------------------------------------
// DcFn: mapping R^n -> R^m with an explicit convex control function f such
// that y* o F + f is convex for every functional |y*| <= 1.
// ---------------------------------------------------------------------------

struct RealMap {
    std::string name;
    std::function<double(const Vec&)> f;
    double operator()(const Vec& x) const { return f(x); }
};

struct ControlCheckParams {
    std::size_t functional_samples = 32;
    std::size_t point_samples = 200;
    std::uint64_t seed = 1;
    double tol = 1e-7;
};

inline Certificate control_check(const std::vector<RealMap>& components,
                                 const ConvexFn& control, const ConvexSet& domain,
                                 const ControlCheckParams& p) {
    const std::size_t m = components.size();
    Certificate agg;
    agg.kind = CertKind::control;
    agg.tolerance = p.tol;
    agg.seed = p.seed;
    agg.pass = true;

    Rng rng(p.seed);
    std::vector<Vec> functionals;
    // y* = 0 checks convexity of the control itself; signed coordinate
    // functionals catch componentwise failures
    functionals.push_back(zeros(m));
    for (std::size_t i = 0; i < m; ++i) {
        functionals.push_back(unit(m, i, 1.0));
        functionals.push_back(unit(m, i, -1.0));
    }
    for (std::size_t k = 0; k < p.functional_samples; ++k)
        functionals.push_back(rng.unit_vector(m));

    for (const Vec& ystar : functionals) {
        auto composite = [&](const Vec& x) {
            double v = control(x);
            for (std::size_t i = 0; i < m; ++i) v += ystar[i] * components[i](x);
            return v;
        };
        const Certificate c =
            convexity_check(composite, domain, p.point_samples, rng.fork(), p.tol);
        agg.samples += c.samples;
        if (!c.pass) {
            agg.pass = false;
            if (c.worst.amount > agg.worst.amount) {
                agg.worst = c.worst;
                agg.worst.note += " (functional violation)";
            }
        }
    }
    return agg;
}

class DcFn {
  public:
    DcFn() = default;

    // Every constructed DcFn carries a passing control certificate.
    static DcFn make(std::vector<RealMap> components, ConvexFn control,
                     ConvexSet domain, const ControlCheckParams& p = {}) {
        Certificate cert = control_check(components, control, domain, p);
        if (!cert.pass) throw CertificationError(cert);
        DcFn f;
        f.components_ = std::move(components);
        f.control_ = std::move(control);
        f.domain_ = std::move(domain);
        f.cert_ = std::move(cert);
        return f;
    }

    // A continuous convex function controls itself: (1+y*)f is convex for
    // |y*| <= 1.
    static DcFn from_convex(const ConvexFn& f, ConvexSet domain, std::string name = "convex",
                            const ControlCheckParams& p = {}) {
        std::vector<RealMap> comps{{std::move(name), [f](const Vec& x) { return f(x); }}};
        return make(std::move(comps), f, std::move(domain), p);
    }

    std::size_t range_dim() const { return components_.size(); }
    const std::vector<RealMap>& components() const { return components_; }
    const ConvexFn& control() const { return control_; }
    const ConvexSet& domain() const { return domain_; }
    const Certificate& certificate() const { return cert_; }

    Vec operator()(const Vec& x) const {
        Vec y(components_.size());
        for (std::size_t i = 0; i < components_.size(); ++i) y[i] = components_[i](x);
        return y;
    }

    double scalar(const Vec& x) const {
        if (components_.size() != 1) throw PreconditionError("DcFn::scalar: not scalar valued");
        return components_.front()(x);
    }

  private:
    std::vector<RealMap> components_;
    ConvexFn control_;
    ConvexSet domain_;
    Certificate cert_;
};

}  // namespace cvx

#endif
