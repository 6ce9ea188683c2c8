#include "tsr/specfun.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace tsr {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();
constexpr int kMaxIter = 30000;

[[noreturn]] void domain_fail(const char* fn, double v) {
    throw std::domain_error(std::string(fn) + ": argument " + std::to_string(v) +
                            " outside domain");
}

// Bernoulli numbers B_2, B_4, ... feeding the trigamma asymptotic series.
constexpr double kBernoulli[] = {
    1.0 / 6.0, -1.0 / 30.0, 1.0 / 42.0, -1.0 / 30.0,
    5.0 / 66.0, -691.0 / 2730.0, 7.0 / 6.0,
};

// Gamma1(mu) = [1/Gamma(1-mu) - 1/Gamma(1+mu)]/(2 mu) and
// Gamma2(mu) = [1/Gamma(1-mu) + 1/Gamma(1+mu)]/2 on |mu| <= 1/2.
// Gamma1 has a removable singularity at mu = 0 with value -EulerGamma.
void temme_gamma_pair(double mu, double& g1, double& g2) {
    const double gp = 1.0 / std::tgamma(1.0 + mu);
    const double gm = 1.0 / std::tgamma(1.0 - mu);
    g2 = 0.5 * (gm + gp);
    if (std::fabs(mu) < 1e-3) {
        // odd Taylor part of 1/Gamma(1+x): x-coefficient EulerGamma, cubic d3
        constexpr double euler = 0.57721566490153286061;
        constexpr double d3 = -0.04200263503409523553;
        g1 = -(euler + d3 * mu * mu);
    } else {
        g1 = (gm - gp) / (2.0 * mu);
    }
}

struct BesselPair {
    double kmu;       // K_mu(x) * exp(-log_scale)
    double kmu1;      // K_{mu+1}(x) * exp(-log_scale)
    double log_scale; // additive log factor carried separately
};

// Temme's series for K_mu and K_{mu+1}, |mu| <= 1/2, 0 < x <= 2.
BesselPair besselk_temme(double mu, double x) {
    const double half_x = 0.5 * x;
    const double log_half_x = std::log(half_x);
    const double sigma = -mu * log_half_x;
    const double pimu = M_PI * mu;

    const double fact = std::fabs(pimu) < 1e-9 ? 1.0 + pimu * pimu / 6.0
                                               : pimu / std::sin(pimu);
    const double fact2 = std::fabs(sigma) < 1e-9 ? 1.0 + sigma * sigma / 6.0
                                                 : std::sinh(sigma) / sigma;
    double g1, g2;
    temme_gamma_pair(mu, g1, g2);

    double f = fact * (g1 * std::cosh(sigma) - g2 * fact2 * log_half_x);
    const double e = std::exp(sigma); // (x/2)^{-mu}
    double p = 0.5 * e * std::tgamma(1.0 + mu);
    double q = 0.5 / e * std::tgamma(1.0 - mu);
    const double d = half_x * half_x;
    double c = 1.0;
    double sum = f;
    double sum1 = p;
    int i = 1;
    for (; i <= kMaxIter; ++i) {
        f = (i * f + p + q) / (i * i - mu * mu);
        c *= d / i;
        p /= (i - mu);
        q /= (i + mu);
        const double del = c * f;
        sum += del;
        sum1 += c * (p - i * f);
        if (std::fabs(del) < std::fabs(sum) * kEps) break;
    }
    if (i > kMaxIter) throw std::runtime_error("bessel_k: series failed to converge");
    return {sum, sum1 * 2.0 / x, 0.0};
}

// Steed's continued fraction CF2 for exp(x)*K_mu and exp(x)*K_{mu+1},
// |mu| <= 1/2, x > 2 (Thompson-Barnett / Temme).
BesselPair besselk_cf2(double mu, double x) {
    const double a1 = 0.25 - mu * mu;
    double b = 2.0 * (1.0 + x);
    double d = 1.0 / b;
    double h = d, delh = d;
    double q1 = 0.0, q2 = 1.0;
    double q = a1, c = a1;
    double a = -a1;
    double s = 1.0 + q * delh;
    int i = 2;
    for (; i <= kMaxIter; ++i) {
        a -= 2.0 * (i - 1);
        c = -a * c / i;
        const double qnew = (q1 - b * q2) / a;
        q1 = q2;
        q2 = qnew;
        q += c * qnew;
        b += 2.0;
        d = 1.0 / (b + a * d);
        delh = (b * d - 1.0) * delh;
        h += delh;
        const double dels = q * delh;
        s += dels;
        if (std::fabs(dels / s) < kEps) break;
    }
    if (i > kMaxIter) throw std::runtime_error("bessel_k: CF2 failed to converge");
    h = a1 * h;
    const double kmu = std::sqrt(M_PI / (2.0 * x)) / s; // exp(x)*K_mu(x)
    const double kmu1 = kmu * (mu + x + 0.5 - h) / x;
    return {kmu, kmu1, -x};
}

// Closed form at half-integer order: K_{1/2}(x) = sqrt(pi/(2x)) e^{-x}.
BesselPair besselk_half_integer_base(double x) {
    const double k_half = std::sqrt(M_PI / (2.0 * x)); // exp(x)*K_{1/2}
    return {k_half, k_half * (1.0 + 1.0 / x), -x};
}

bool is_half_integer(double order) {
    const double two = 2.0 * order;
    const double r = std::round(two);
    return std::fabs(two - r) < 1e-12 && std::fmod(r, 2.0) != 0.0;
}

// Upward recurrence K_{m+1} = K_{m-1} + (2m/x) K_m, renormalizing into
// log_scale when the values grow large.
double recur_up(BesselPair pr, double mu, double x, int n, bool want_kmu1) {
    for (int j = 1; j <= n; ++j) {
        const double knext = pr.kmu + 2.0 * (mu + j) / x * pr.kmu1;
        pr.kmu = pr.kmu1;
        pr.kmu1 = knext;
        if (pr.kmu1 > 1e280) {
            pr.kmu *= 1e-280;
            pr.kmu1 *= 1e-280;
            pr.log_scale += 280.0 * M_LN10;
        }
    }
    const double v = want_kmu1 ? pr.kmu1 : pr.kmu;
    return std::log(v) + pr.log_scale;
}

// log K_order(x); the single entry point behind the public variants.
double log_besselk_impl(double order, double x) {
    if (!std::isfinite(x) || x <= 0.0) domain_fail("bessel_k", x);
    if (!std::isfinite(order) || order < 0.0) domain_fail("bessel_k", order);

    if (is_half_integer(order)) {
        const int n = static_cast<int>(std::lround(order - 0.5));
        return recur_up(besselk_half_integer_base(x), 0.5, x, n, false);
    }
    const int n = static_cast<int>(order + 0.5);
    const double mu = order - n;
    BesselPair pr = x <= 2.0 ? besselk_temme(mu, x) : besselk_cf2(mu, x);
    return recur_up(pr, mu, x, n, false);
}

}  // namespace

double ln_gamma(double x) {
    if (!std::isfinite(x) || x <= 0.0) domain_fail("ln_gamma", x);
    return std::lgamma(x);
}

double trigamma(double x) {
    if (!std::isfinite(x) || x <= 0.0) domain_fail("trigamma", x);
    double acc = 0.0;
    while (x < 10.0) {
        acc += 1.0 / (x * x);
        x += 1.0;
    }
    const double inv = 1.0 / x;
    const double inv2 = inv * inv;
    double sum = inv * (1.0 + 0.5 * inv);
    double pow_odd = inv; // becomes x^{-(2k+1)}
    for (double b : kBernoulli) {
        pow_odd *= inv2;
        sum += b * pow_odd;
    }
    return acc + sum;
}

double bessel_k(double order, double x) {
    return std::exp(log_besselk_impl(order, x));
}

double log_bessel_k(double order, double x) {
    return log_besselk_impl(order, x);
}

double bessel_k_scaled(double order, double x) {
    return std::exp(log_besselk_impl(order, x) + x);
}

}  // namespace tsr
