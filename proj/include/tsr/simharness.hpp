#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "tsr/corr.hpp"
#include "tsr/dataset.hpp"
#include "tsr/posterior.hpp"
#include "tsr/priors.hpp"

namespace tsr {

enum class Scenario { s1, s2, custom };

std::string scenario_name(Scenario s);
Scenario scenario_from_name(std::string_view name);

/// Simulation scenario. Locations form a regular side x side lattice of
/// cell centers on [0, extent]^2: spacing extent/side, first point at half
/// a spacing from the origin. The s1/s2 factories give the 10 x 10 unit
/// lattice with a Matern(0.5) field, sigma2 = 0.8, phi = 2, nu = 5;
/// s1 fits a constant mean (beta = 10), s2 the full quadratic surface
/// with beta = (0, -2.2, 0.5, 1.7, 2.4, 3.5).
struct ScenarioConfig {
    Scenario scenario = Scenario::custom;
    int side = 10;
    double extent = 10.0;
    CorrelationModel model{CorrFamily::matern, 2.0, 0.5};
    double sigma2 = 0.8;
    double nu = 5.0;
    Eigen::VectorXd beta;
    DesignKind design = DesignKind::intercept_only;
    int replicates = 100;
    std::uint64_t seed = 20240101;

    int n() const { return side * side; }
    static ScenarioConfig s1();
    static ScenarioConfig s2();
};

void validate(const ScenarioConfig& config);

/// Cell-center lattice: (i + 1/2, j + 1/2) * extent / side, row-major in j
/// then i.
Eigen::MatrixXd lattice_coords(int side, double extent);

/// One simulated dataset: y = X beta + sqrt(sigma2 nu / g) L z with
/// L L^T = R(phi), z standard normal, g ~ chi^2(nu). The replicate stream
/// is seeded with derive_seed(config.seed, replicate); the n normals are
/// drawn first, then g.
SpatialDataset generate_tsr(const ScenarioConfig& config, int replicate);

struct ParamSummary {
    std::string name;
    double truth = 0.0;
    double bias = 0.0;             // mean of (median - truth)
    double bias_sd = 0.0;          // sd of (median - truth) across replicates
    double mean_log_length = 0.0;  // mean log(upper - lower)
    double coverage = 0.0;         // mean containment of the truth
};

struct ReplicateRecord {
    int replicate = 0;
    std::uint64_t data_seed = 0;
    std::uint64_t sampler_seed = 0;
    bool failed = false;
    std::string error;
    std::vector<double> median, lower, upper;
    std::vector<int> contains;
};

struct PriorStudy {
    std::string prior;
    int failures = 0;
    std::vector<ParamSummary> params;
    std::vector<ReplicateRecord> replicates;
};

struct StudyReport {
    ScenarioConfig config;
    SamplerConfig sampler;
    std::string config_digest;
    std::vector<PriorStudy> results;
};

/// Monte Carlo frequentist study: for every replicate and prior, fit the
/// model on data from generate_tsr and record the posterior median and the
/// equal-tailed 95% interval of each parameter (beta components, sigma2,
/// phi, nu). Replicates are distributed over a thread pool; each task is
/// seeded independently (data: derive_seed(seed, k); sampler:
/// derive_seed(data_seed, 1 + prior_index)), so the result does not depend
/// on the worker count. Failed replicates are recorded and excluded; more
/// than 5% failures for any prior aborts with StudyError.
StudyReport run_mc_study(const ScenarioConfig& config,
                         const std::vector<PriorSpec>& priors,
                         const SamplerConfig& sampler);

/// Canonical report serialization; deliberately carries no timing fields so
/// a rerun with the same seed is byte-identical.
std::string study_report_json(const StudyReport& report);
std::string study_report_text(const StudyReport& report);

}  // namespace tsr
