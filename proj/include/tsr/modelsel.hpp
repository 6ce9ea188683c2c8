#pragma once

#include <Eigen/Core>
#include <cstddef>
#include <limits>
#include <string>
#include <vector>

#include "tsr/corr.hpp"
#include "tsr/dataset.hpp"
#include "tsr/posterior.hpp"
#include "tsr/priors.hpp"

namespace tsr {

/// One entry in a model comparison. The range parameter of `model` is
/// ignored: it is integrated out together with nu.
struct ModelCandidate {
    std::string label;
    CorrelationModel model{CorrFamily::power_exponential, 1.0, 1.0};
    PriorSpec prior = PriorSpec::reference();
    DesignKind design = DesignKind::intercept_only;
};

struct MarginalOptions {
    double phi_max = 0.0;    // 0 = 10 x max pairwise distance
    double nu_max = 5000.0;  // upper integration cutoff for nu
    double rel_tol = 1e-5;   // outer quadrature target
};

void validate(const MarginalOptions& opts);

/// log m(y) = log of the double integral of the (phi, nu) marginal
/// posterior kernel over (0, phi_max) x (nu_lower, nu_max), with
/// integration diagnostics. Tail fractions estimate the relative mass
/// beyond each cutoff from the decay rate at the boundary.
struct MarginalDensity {
    double log_value = 0.0;
    double rel_error = 0.0;
    double tail_fraction_phi = 0.0;
    double tail_fraction_nu = 0.0;
    std::size_t evaluations = 0;
};

/// Nested adaptive quadrature in (log phi, log(nu - nu_lower)). Throws
/// IntegrationError when the estimated relative error exceeds 1e-3 or the
/// quadrature fails to converge.
MarginalDensity log_marginal_density(const SpatialDataset& data,
                                     const ModelCandidate& candidate,
                                     const MarginalOptions& opts = {});

/// Softmax of log marginal densities: p_k proportional to exp(log m_k),
/// normalized to sum to one. Invariant to a common shift.
std::vector<double> posterior_probs_from_log_marginals(
    const std::vector<double>& log_marginals);

/// Posterior model probabilities under equal prior model weights:
/// softmax of the log marginal densities. Candidates are evaluated in
/// parallel. Refuses comparisons that mix reference and vague priors.
std::vector<double> model_posterior_probs(
    const std::vector<ModelCandidate>& candidates, const SpatialDataset& data,
    const MarginalOptions& opts = {});

/// Mean squared prediction error over a holdout set.
double mspe(const Eigen::Ref<const Eigen::VectorXd>& holdout_y,
            const Eigen::Ref<const Eigen::VectorXd>& predicted);

struct ComparisonRow {
    std::string label;
    double log_marginal = 0.0;
    double rel_error = 0.0;
    double probability = 0.0;
    double mspe_value = std::numeric_limits<double>::quiet_NaN();
};

struct ComparisonReport {
    std::vector<ComparisonRow> rows;
    bool improper_prior = false;
    bool has_mspe = false;
};

/// Full comparison. When holdout coordinates and responses are given, each
/// candidate is fit on `data`, predicted at the holdout locations, and
/// scored by MSPE; holdout designs are rebuilt from the coordinates, so
/// file-based covariates are rejected there.
ComparisonReport compare_models(
    const std::vector<ModelCandidate>& candidates, const SpatialDataset& data,
    const MarginalOptions& opts = {},
    const Eigen::Ref<const Eigen::MatrixXd>& holdout_coords =
        Eigen::MatrixXd(0, 0),
    const Eigen::Ref<const Eigen::VectorXd>& holdout_y = Eigen::VectorXd(0),
    const SamplerConfig& sampler = {});

std::string comparison_text(const ComparisonReport& report);
std::string comparison_json(const ComparisonReport& report);

}  // namespace tsr
