#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <stdexcept>

namespace tsr {

/// splitmix64 step; used to derive independent per-stream seeds.
inline std::uint64_t splitmix64_next(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

/// Seed splitting rule: stream k of master seed m is the (k+1)-th output of
/// splitmix64 initialized at m. Documented so studies are reproducible.
inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream) {
    std::uint64_t s = master;
    std::uint64_t out = 0;
    for (std::uint64_t i = 0; i <= stream; ++i) out = splitmix64_next(s);
    return out;
}

/// mt19937_64 with explicitly coded variate transforms, so draw sequences are
/// identical across standard libraries (std::normal_distribution etc. are
/// implementation-defined).
class Rng {
  public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::mt19937_64& engine() { return engine_; }

    /// Uniform on (0,1): top 53 bits, zero mapped away from the boundary.
    double uniform01() {
        const double u =
            static_cast<double>(engine_() >> 11) * 0x1.0p-53;
        return u > 0.0 ? u : 0x1.0p-54;
    }

    double uniform(double a, double b) { return a + (b - a) * uniform01(); }

    /// Standard normal via Box-Muller (two uniforms per draw, no cache).
    double normal() {
        const double u1 = uniform01();
        const double u2 = uniform01();
        return std::sqrt(-2.0 * std::log(u1)) *
               std::cos(2.0 * M_PI * u2);
    }

    /// Gamma(shape, 1) by Marsaglia-Tsang squeeze; shape < 1 via boost.
    double gamma(double shape) {
        if (!(shape > 0.0))
            throw std::domain_error("gamma shape must be positive");
        if (shape < 1.0) {
            const double g = gamma(shape + 1.0);
            return g * std::pow(uniform01(), 1.0 / shape);
        }
        const double d = shape - 1.0 / 3.0;
        const double c = 1.0 / (3.0 * std::sqrt(d));
        for (;;) {
            double x, v;
            do {
                x = normal();
                v = 1.0 + c * x;
            } while (v <= 0.0);
            v = v * v * v;
            const double u = uniform01();
            if (u < 1.0 - 0.0331 * x * x * x * x) return d * v;
            if (std::log(u) < 0.5 * x * x + d * (1.0 - v + std::log(v)))
                return d * v;
        }
    }

    double chi2(double df) { return 2.0 * gamma(0.5 * df); }

    /// BetaPrime(a,b) = Gamma(a,1)/Gamma(b,1).
    double beta_prime(double a, double b) { return gamma(a) / gamma(b); }

    double student_t(double df) {
        return normal() / std::sqrt(chi2(df) / df);
    }

  private:
    std::mt19937_64 engine_;
};

}  // namespace tsr
