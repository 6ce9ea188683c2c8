#include "tsr/priors.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "tsr/errors.hpp"
#include "tsr/glscore.hpp"
#include "tsr/specfun.hpp"

namespace tsr {

namespace {
constexpr double kNegInf = -std::numeric_limits<double>::infinity();
}

PriorSpec PriorSpec::reference(double nu_lower) {
    PriorSpec s;
    s.kind = PriorKind::reference;
    s.a = 1.0;
    s.nu_lower = nu_lower;
    return s;
}

PriorSpec PriorSpec::vague() {
    PriorSpec s;
    s.kind = PriorKind::vague;
    s.a = 2.1;
    s.nu_lower = 4.1;
    s.phi_bounds = {0.1, 4.72};
    s.lambda_bounds = {0.01, 0.25};
    return s;
}

void validate(const PriorSpec& spec) {
    if (spec.kind == PriorKind::reference && spec.a != 1.0)
        throw ConfigError("reference prior fixes a = 1, got " +
                          std::to_string(spec.a));
    if (!(spec.nu_lower > 4.0))
        throw ConfigError("nu support floor must exceed 4 (first two moments), "
                          "got " + std::to_string(spec.nu_lower));
    if (!(spec.a < spec.nu_lower / 2.0 + 1.0))
        throw ConfigError("need a < nu/2 + 1 on the nu support, got a=" +
                          std::to_string(spec.a));
    if (spec.kind == PriorKind::vague) {
        if (!(spec.phi_bounds.first > 0.0) ||
            !(spec.phi_bounds.second > spec.phi_bounds.first))
            throw ConfigError("vague prior needs 0 < phi_low < phi_high");
        if (!(spec.lambda_bounds.first > 0.0) ||
            !(spec.lambda_bounds.second > spec.lambda_bounds.first))
            throw ConfigError("vague prior needs 0 < lambda_low < lambda_high");
    }
}

FisherBlocks fisher_blocks(double nu, int n, int p, double tr_Phi,
                           double tr_Phi2) {
    if (!(nu > 4.0))
        throw SupportError("fisher_blocks requires nu > 4, got " +
                           std::to_string(nu));
    if (n <= p || p < 1) throw ConfigError("fisher_blocks requires n > p >= 1");
    const double m = static_cast<double>(n - p);
    const double tau = m + nu + 2.0;

    FisherBlocks fb;
    fb.tau_nu = tau;
    fb.delta1 = trigamma(0.5 * (nu + m)) - trigamma(0.5 * nu);
    fb.A_term =
        nu * nu / ((nu - 2.0) * (nu - 4.0)) * (2.0 * tr_Phi2 + tr_Phi * tr_Phi);
    fb.B = nu * m / tau;
    fb.B11 = -2.0 * nu * m * tr_Phi / ((nu - 2.0) * tau);
    fb.B12 = -m / ((tau - 2.0) * tau);
    fb.C11 = m * tr_Phi / ((nu - 2.0) * (tau - 2.0) * tau);
    fb.C = (2.0 * m / (tau * nu) + 1.0) * fb.A_term -
           (nu + 2.0) / (nu - 2.0) * tr_Phi * tr_Phi;
    fb.D = -(2.0 * m / nu * (tau + 2.0) / (tau * (tau - 2.0)) + fb.delta1);
    return fb;
}

double reference_bracket(const FisherBlocks& fb) {
    return fb.B * fb.C * fb.D +
           16.0 * (fb.B11 * fb.C11 * fb.B12 - fb.B * fb.C11 * fb.C11) -
           8.0 * fb.B12 * fb.B12 * fb.C - 0.5 * fb.B11 * fb.B11 * fb.D;
}

double reference_bracket_scale(const FisherBlocks& fb) {
    return std::fabs(fb.B * fb.C * fb.D) +
           16.0 * (std::fabs(fb.B11 * fb.C11 * fb.B12) +
                   std::fabs(fb.B * fb.C11 * fb.C11)) +
           8.0 * fb.B12 * fb.B12 * std::fabs(fb.C) +
           0.5 * fb.B11 * fb.B11 * std::fabs(fb.D);
}

double log_reference_prior_from_traces(double nu, int n, int p, double tr_Phi,
                                       double tr_Phi2, double nu_lower) {
    if (!(nu > nu_lower)) return kNegInf;
    const FisherBlocks fb = fisher_blocks(nu, n, p, tr_Phi, tr_Phi2);
    const double det = reference_bracket(fb);
    if (det <= 0.0) {
        // D is a trigamma difference that cancels to Theta(nu^-4); its
        // absolute round-off is of order eps * trigamma(nu/2), which
        // dominates D itself once nu is of order 1e7
        const double eps = std::numeric_limits<double>::epsilon();
        const double d_noise =
            8.0 * eps * (trigamma(0.5 * nu) + std::fabs(fb.delta1));
        const double tol =
            1e-12 * reference_bracket_scale(fb) +
            (std::fabs(fb.B * fb.C) + 0.5 * fb.B11 * fb.B11) * d_noise;
        if (det >= -tol) return kNegInf;
        throw std::runtime_error(
            "reference prior: information determinant negative beyond "
            "round-off (" + std::to_string(det) + " at nu=" +
            std::to_string(nu) + "); traces are inconsistent");
    }
    return 0.5 * std::log(det);
}

double log_reference_prior(double phi, double nu, const SpatialDataset& data,
                           const CorrelationModel& model, double nu_lower) {
    if (!(phi > 0.0)) return kNegInf;
    if (!(nu > nu_lower)) return kNegInf;
    const CorrelationModel m = model.with_phi(phi);
    const Eigen::MatrixXd D = distance_matrix(data.coords);
    const GlsSummary s =
        gls_summary(data, corr_matrix(m, D), corr_deriv_phi(m, D), phi);
    return log_reference_prior_from_traces(nu, static_cast<int>(data.n()),
                                           static_cast<int>(data.p()), s.tr_Phi,
                                           s.tr_Phi2, nu_lower);
}

namespace {

// (1+u)e^{-u} = 1 + sum_{k>=2} (-1)^{k-1} (k-1)/k! u^k; the series gives the
// difference quotient below without cancellation when u is small.
double lambda_integral_over_t2(double t, double lam_lo, double lam_hi) {
    const double u_hi = lam_hi * t;
    if (u_hi < 0.01) {
        // sum over k of (-1)^k (k-1)/k! (lam_hi^k - lam_lo^k) t^{k-2}
        double total = 0.0;
        double fact = 1.0;  // k!
        double pow_lo = lam_lo, pow_hi = lam_hi;
        double tpow = 1.0;  // t^{k-2}
        double sign = 1.0;
        for (int k = 2; k <= 9; ++k) {
            fact *= k;
            pow_lo *= lam_lo;
            pow_hi *= lam_hi;
            total += sign * (k - 1) / fact * (pow_hi - pow_lo) * tpow;
            tpow *= t;
            sign = -sign;
        }
        return total;
    }
    const double lo = (lam_lo * t + 1.0) * std::exp(-lam_lo * t);
    const double hi = (lam_hi * t + 1.0) * std::exp(-lam_hi * t);
    return (lo - hi) / (t * t);
}

}  // namespace

double log_vague_prior(double phi, double nu, const PriorSpec& spec) {
    if (spec.kind != PriorKind::vague)
        throw ConfigError("log_vague_prior called with a non-vague spec");
    validate(spec);
    const auto [phi_lo, phi_hi] = spec.phi_bounds;
    const auto [lam_lo, lam_hi] = spec.lambda_bounds;
    if (!(phi > phi_lo && phi < phi_hi)) return kNegInf;
    if (!(nu >= spec.nu_lower)) return kNegInf;
    const double t = nu - spec.nu_lower;
    const double dens =
        lambda_integral_over_t2(t, lam_lo, lam_hi) / (lam_hi - lam_lo);
    return -std::log(phi_hi - phi_lo) + std::log(dens);
}

Propriety check_propriety(const CorrelationModel& model, double a,
                          bool has_intercept, double nu_lower) {
    if (!(nu_lower > 4.0))
        throw SupportError("check_propriety requires nu_lower > 4");
    validate(model);
    if (!(a < nu_lower / 2.0 + 1.0)) return Propriety::not_guaranteed;
    if (!has_intercept) return a > 0.5 ? Propriety::proper
                                       : Propriety::not_guaranteed;
    switch (model.family) {
        case CorrFamily::spherical:
            return a > -1.0 ? Propriety::proper : Propriety::not_guaranteed;
        case CorrFamily::power_exponential:
        case CorrFamily::cauchy:
            return a > 0.0 ? Propriety::proper : Propriety::not_guaranteed;
        case CorrFamily::matern: {
            const double bound =
                model.kappa < 1.0 ? 2.0 - 1.0 / model.kappa : 1.0 / model.kappa;
            return a > bound ? Propriety::proper : Propriety::not_guaranteed;
        }
    }
    throw ConfigError("unknown correlation family");
}

}  // namespace tsr
