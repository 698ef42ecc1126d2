#ifndef CVX_RNG_HPP
#define CVX_RNG_HPP

#include <cstdint>
#include <random>

#include "cvx/vec.hpp"

namespace cvx {

// All sampling in the library goes through an explicitly seeded engine so
// that every certificate is reproducible from (inputs, seed).
class Rng {
  public:
    explicit Rng(std::uint64_t seed) : eng_(seed) {}

    double uniform(double lo = 0.0, double hi = 1.0) {
        return std::uniform_real_distribution<double>(lo, hi)(eng_);
    }

    double normal() { return std::normal_distribution<double>(0.0, 1.0)(eng_); }

    std::uint64_t integer(std::uint64_t n) {
        return std::uniform_int_distribution<std::uint64_t>(0, n - 1)(eng_);
    }

    // Uniform on the unit sphere of R^n.
    Vec unit_vector(std::size_t n) {
        Vec v(n);
        double s;
        do {
            for (auto& x : v) x = normal();
            s = norm(v);
        } while (s < 1e-12);
        return scaled(v, 1.0 / s);
    }

    // Uniform in the closed unit ball of R^n.
    Vec in_unit_ball(std::size_t n) {
        Vec u = unit_vector(n);
        const double r = std::pow(uniform(), 1.0 / static_cast<double>(n));
        return scaled(u, r);
    }

    // Deterministic child seed for sub-tasks (per-stage, per-job).
    std::uint64_t fork() {
        return std::uniform_int_distribution<std::uint64_t>()(eng_);
    }

  private:
    std::mt19937_64 eng_;
};

}  // namespace cvx

#endif
