#pragma once

#include <utility>

#include "tsr/corr.hpp"
#include "tsr/dataset.hpp"

namespace tsr {

enum class PriorKind { reference, vague };

/// Prior on (beta, sigma^2, phi, nu): pi(phi,nu)/(sigma^2)^a.
/// reference: a = 1, pi(phi,nu) from the marginal Fisher information.
/// vague: proper product prior, uniform phi, lambda-marginalized truncated
/// exponential nu.
struct PriorSpec {
    PriorKind kind = PriorKind::reference;
    double a = 1.0;
    double nu_lower = 4.1;
    std::pair<double, double> phi_bounds = {0.1, 4.72};
    std::pair<double, double> lambda_bounds = {0.01, 0.25};

    static PriorSpec reference(double nu_lower = 4.1);
    static PriorSpec vague();
};

void validate(const PriorSpec& spec);

/// Blocks of the marginal Fisher information of (nu, sigma^2, phi) after
/// beta is integrated out; inputs are the projector traces.
struct FisherBlocks {
    double B = 0.0;
    double C = 0.0;
    double D = 0.0;
    double B11 = 0.0;
    double B12 = 0.0;
    double C11 = 0.0;
    double tau_nu = 0.0;
    double delta1 = 0.0;
    double A_term = 0.0;
};

FisherBlocks fisher_blocks(double nu, int n, int p, double tr_Phi,
                           double tr_Phi2);

/// The squared reference-prior kernel:
/// BCD + 16(B11*C11*B12 - B*C11^2) - 8*B12^2*C - (1/2)*B11^2*D.
double reference_bracket(const FisherBlocks& fb);

/// Sum of the absolute values of the four bracket terms; the scale against
/// which round-off negativity is judged.
double reference_bracket_scale(const FisherBlocks& fb);

/// log pi(phi,nu) for the reference prior given precomputed traces.
/// Returns -inf outside the support nu > nu_lower or when round-off drives
/// the bracket slightly negative; throws on genuinely negative brackets.
double log_reference_prior_from_traces(double nu, int n, int p, double tr_Phi,
                                       double tr_Phi2, double nu_lower = 4.1);

/// Convenience wrapper: builds R(phi), dR/dphi and the traces from data.
double log_reference_prior(double phi, double nu, const SpatialDataset& data,
                           const CorrelationModel& model,
                           double nu_lower = 4.1);

/// log pi(phi,nu) for the vague prior (normalized density).
double log_vague_prior(double phi, double nu, const PriorSpec& spec);

enum class Propriety { proper, not_guaranteed };

/// Sufficient posterior-propriety conditions per correlation family,
/// evaluated together with a < nu/2 + 1 at nu = nu_lower.
Propriety check_propriety(const CorrelationModel& model, double a,
                          bool has_intercept, double nu_lower);

}  // namespace tsr
