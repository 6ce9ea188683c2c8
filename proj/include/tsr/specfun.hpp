#pragma once

namespace tsr {

/// log Gamma(x) for x > 0. Throws std::domain_error on non-finite or
/// non-positive input.
double ln_gamma(double x);

/// Trigamma function Psi_1(x) = d^2/dx^2 log Gamma(x) for x > 0, computed by
/// upward recurrence into the asymptotic Bernoulli series.
double trigamma(double x);

/// Modified Bessel function of the second kind K_order(x), order >= 0, x > 0.
/// Underflows to 0 for roughly x > 705; use log_bessel_k there.
double bessel_k(double order, double x);

/// log K_order(x). Stable for large x where K itself underflows.
double log_bessel_k(double order, double x);

/// exp(x) * K_order(x), the natural scaled form for large x.
double bessel_k_scaled(double order, double x);

}  // namespace tsr
