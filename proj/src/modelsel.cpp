#include "tsr/modelsel.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <future>
#include <limits>
#include <set>
#include <sstream>

#include "tsr/errors.hpp"
#include "tsr/glscore.hpp"
#include "tsr/quadrature.hpp"
#include "tsr/serialize.hpp"

namespace tsr {
namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

SpatialDataset with_design(const SpatialDataset& data, DesignKind kind) {
    if (kind == DesignKind::file_covariates) return data;
    SpatialDataset d = data;
    d.X = build_design(d.coords, kind);
    d.has_intercept = true;
    return d;
}

/// Mass beyond a boundary for an integrand decaying geometrically, from its
/// values at the boundary and a step h inside; +inf when not decaying.
double boundary_tail(double g_end, double g_inside, double h) {
    if (!(g_end > 0.0)) return 0.0;
    if (!(g_inside > g_end)) return std::numeric_limits<double>::infinity();
    return g_end * h / std::log(g_inside / g_end);
}

double tail_fraction(double tail, double total) {
    if (!(tail > 0.0)) return 0.0;
    if (!std::isfinite(tail)) return 1.0;
    return tail / (tail + total);
}

void check_common_prior(const std::vector<ModelCandidate>& candidates) {
    for (const ModelCandidate& c : candidates)
        if (c.prior.kind != candidates.front().prior.kind)
            throw ConfigError(
                "model comparison mixes an improper reference prior with a "
                "proper vague prior; their marginal densities live on "
                "different scales, so use one prior family for all "
                "candidates");
}

void check_candidates(const std::vector<ModelCandidate>& candidates) {
    if (candidates.size() < 2)
        throw ConfigError("model comparison needs at least two candidates");
    std::set<std::string> labels;
    for (const ModelCandidate& c : candidates)
        if (!labels.insert(c.label).second)
            throw ConfigError("duplicate candidate label: " + c.label);
    check_common_prior(candidates);
}

std::vector<MarginalDensity> marginals_parallel(
    const std::vector<ModelCandidate>& candidates, const SpatialDataset& data,
    const MarginalOptions& opts) {
    std::vector<std::future<MarginalDensity>> futures;
    futures.reserve(candidates.size());
    for (const ModelCandidate& c : candidates)
        futures.push_back(std::async(std::launch::async, [&data, &c, &opts] {
            return log_marginal_density(data, c, opts);
        }));
    std::vector<MarginalDensity> out;
    out.reserve(candidates.size());
    for (auto& f : futures) out.push_back(f.get());
    return out;
}

const char* kImproperCaveat =
    "marginal densities were computed under the improper reference prior, "
    "so each is defined only up to a model-specific constant; the "
    "probabilities below are not calibrated Bayes-factor statements and "
    "should be read as a heuristic ranking";

}  // namespace

void validate(const MarginalOptions& opts) {
    if (!(opts.phi_max >= 0.0) || !std::isfinite(opts.phi_max))
        throw ConfigError("phi_max must be finite and nonnegative");
    if (!(opts.nu_max > 0.0) || !std::isfinite(opts.nu_max))
        throw ConfigError("nu_max must be finite and positive");
    if (!(opts.rel_tol > 0.0) || opts.rel_tol > 1e-3)
        throw ConfigError("rel_tol must lie in (0, 1e-3]");
}

MarginalDensity log_marginal_density(const SpatialDataset& data,
                                     const ModelCandidate& candidate,
                                     const MarginalOptions& opts) {
    validate(opts);
    validate(candidate.model);
    validate(candidate.prior);
    const SpatialDataset d = with_design(data, candidate.design);
    validate(d);
    const PriorSpec& prior = candidate.prior;
    if (!(opts.nu_max > prior.nu_lower + 0.1))
        throw ConfigError("nu_max must exceed nu_lower");

    const Eigen::MatrixXd D = distance_matrix(d.coords);
    double phi_max = opts.phi_max > 0.0 ? opts.phi_max : 10.0 * D.maxCoeff();
    double phi_lo = phi_max * std::exp(-25.0);
    bool phi_support_bounded = false;
    if (prior.kind == PriorKind::vague) {
        phi_lo = std::max(phi_lo, prior.phi_bounds.first);
        phi_support_bounded = prior.phi_bounds.second <= phi_max;
        phi_max = std::min(phi_max, prior.phi_bounds.second);
        if (!(phi_lo < phi_max))
            throw ConfigError(
                "phi integration region is empty under the prior bounds");
    }
    const double nu0 = prior.nu_lower;
    const double u_lo = std::log(phi_lo), u_hi = std::log(phi_max);
    const double w_hi = std::log(opts.nu_max - nu0), w_lo = w_hi - 25.0;

    const bool need_traces = prior.kind == PriorKind::reference;
    std::size_t evals = 0;
    const auto summary_at = [&](double phi) {
        const CorrelationModel m = candidate.model.with_phi(phi);
        const Eigen::MatrixXd R = corr_matrix(m, D);
        if (need_traces) return gls_summary(d, R, corr_deriv_phi(m, D), phi);
        return gls_summary(d, R, Eigen::MatrixXd(0, 0), phi);
    };
    const auto log_integrand = [&](const GlsSummary& s, double u, double w) {
        ++evals;
        return log_marginal_post_from_summary(s, std::exp(u),
                                              nu0 + std::exp(w), d.n(), d.p(),
                                              prior) +
               u + w;
    };

    // coarse scan for the normalizing shift of the exponentials
    double s0 = kNegInf;
    const int scan = 24;
    for (int i = 0; i < scan; ++i) {
        const double u = u_lo + (i + 0.5) / scan * (u_hi - u_lo);
        GlsSummary s;
        try {
            s = summary_at(std::exp(u));
        } catch (const IllConditionedError&) {
            continue;
        }
        for (int j = 0; j < scan; ++j) {
            const double w = w_lo + (j + 0.5) / scan * (w_hi - w_lo);
            const double v = log_integrand(s, u, w);
            if (std::isfinite(v)) s0 = std::max(s0, v);
        }
    }
    if (!std::isfinite(s0))
        throw IntegrationError(
            "marginal density kernel is nowhere finite on the integration "
            "region",
            kNegInf, 0.0);

    const auto outer = [&](double u) {
        GlsSummary s;
        try {
            s = summary_at(std::exp(u));
        } catch (const IllConditionedError&) {
            return 0.0;
        }
        const auto inner = [&](double w) {
            const double v = log_integrand(s, u, w) - s0;
            return std::isfinite(v) ? std::exp(v) : 0.0;
        };
        return integrate(inner, w_lo, w_hi, 1e-8, 1e-13).value;
    };

    const QuadResult r = integrate(outer, u_lo, u_hi, opts.rel_tol, 0.0, 4000);
    const double rel = r.value > 0.0
                           ? r.error / r.value
                           : std::numeric_limits<double>::infinity();
    if (!r.converged || !(rel <= 1e-3)) {
        std::ostringstream msg;
        msg << "marginal density quadrature did not reach the required "
               "accuracy (estimated relative error "
            << rel << " after " << evals << " kernel evaluations)";
        throw IntegrationError(msg.str(), s0 + std::log(r.value), r.error);
    }

    MarginalDensity out;
    out.log_value = s0 + std::log(r.value);
    out.rel_error = rel;
    out.evaluations = evals;

    // decay-rate tail estimates at both cutoffs, relative to the total; no
    // phi tail exists when the prior support ends at the region boundary
    const double hu = 0.5, hw = 0.5;
    out.tail_fraction_phi =
        phi_support_bounded
            ? 0.0
            : tail_fraction(boundary_tail(outer(u_hi), outer(u_hi - hu), hu),
                            r.value);
    const auto nu_slice = [&](double w) {
        const auto f = [&](double u) {
            GlsSummary s;
            try {
                s = summary_at(std::exp(u));
            } catch (const IllConditionedError&) {
                return 0.0;
            }
            const double v = log_integrand(s, u, w) - s0;
            return std::isfinite(v) ? std::exp(v) : 0.0;
        };
        return integrate(f, u_lo, u_hi, 1e-6, 1e-13).value;
    };
    out.tail_fraction_nu = tail_fraction(
        boundary_tail(nu_slice(w_hi), nu_slice(w_hi - hw), hw), r.value);
    return out;
}

std::vector<double> posterior_probs_from_log_marginals(
    const std::vector<double>& log_marginals) {
    if (log_marginals.empty())
        throw ConfigError("no log marginal densities given");
    const double top =
        *std::max_element(log_marginals.begin(), log_marginals.end());
    std::vector<double> p(log_marginals.size());
    double total = 0.0;
    for (size_t i = 0; i < p.size(); ++i) {
        p[i] = std::exp(log_marginals[i] - top);
        total += p[i];
    }
    for (double& v : p) v /= total;
    return p;
}

std::vector<double> model_posterior_probs(
    const std::vector<ModelCandidate>& candidates, const SpatialDataset& data,
    const MarginalOptions& opts) {
    check_candidates(candidates);
    const std::vector<MarginalDensity> md =
        marginals_parallel(candidates, data, opts);
    std::vector<double> logv(md.size());
    for (size_t i = 0; i < md.size(); ++i) logv[i] = md[i].log_value;
    return posterior_probs_from_log_marginals(logv);
}

double mspe(const Eigen::Ref<const Eigen::VectorXd>& holdout_y,
            const Eigen::Ref<const Eigen::VectorXd>& predicted) {
    if (holdout_y.size() == 0)
        throw DataError("mspe needs at least one holdout observation");
    if (holdout_y.size() != predicted.size())
        throw DataError("mspe length mismatch: " +
                        std::to_string(holdout_y.size()) + " vs " +
                        std::to_string(predicted.size()));
    return (holdout_y - predicted).squaredNorm() /
           static_cast<double>(holdout_y.size());
}

ComparisonReport compare_models(
    const std::vector<ModelCandidate>& candidates, const SpatialDataset& data,
    const MarginalOptions& opts,
    const Eigen::Ref<const Eigen::MatrixXd>& holdout_coords,
    const Eigen::Ref<const Eigen::VectorXd>& holdout_y,
    const SamplerConfig& sampler) {
    check_candidates(candidates);
    const bool score_holdout = holdout_coords.rows() > 0;
    if (score_holdout && holdout_coords.rows() != holdout_y.size())
        throw DataError("holdout coordinates and responses differ in length");

    const std::vector<MarginalDensity> md =
        marginals_parallel(candidates, data, opts);
    std::vector<double> logv(md.size());
    for (size_t i = 0; i < md.size(); ++i) logv[i] = md[i].log_value;
    const std::vector<double> probs =
        posterior_probs_from_log_marginals(logv);

    ComparisonReport report;
    report.improper_prior =
        candidates.front().prior.kind == PriorKind::reference;
    report.has_mspe = score_holdout;
    for (size_t i = 0; i < candidates.size(); ++i) {
        ComparisonRow row;
        row.label = candidates[i].label;
        row.log_marginal = md[i].log_value;
        row.rel_error = md[i].rel_error;
        row.probability = probs[i];
        if (score_holdout) {
            const ModelCandidate& c = candidates[i];
            if (c.design == DesignKind::file_covariates)
                throw ConfigError(
                    "holdout MSPE needs a coordinate-based design; "
                    "file covariates cannot be rebuilt at new locations");
            const SpatialDataset d = with_design(data, c.design);
            const PosteriorDraws draws =
                sample_posterior(d, c.model, c.prior, sampler);
            const PredictionSummary ps =
                predict(draws, d, c.model, holdout_coords,
                        build_design(holdout_coords, c.design), 0.95,
                        sampler.seed);
            row.mspe_value = mspe(holdout_y, ps.mean);
        }
        report.rows.push_back(std::move(row));
    }
    return report;
}

std::string comparison_text(const ComparisonReport& report) {
    std::ostringstream out;
    out << "model                log m(y)        probability";
    if (report.has_mspe) out << "       MSPE";
    out << "\n";
    for (const ComparisonRow& r : report.rows) {
        char buf[160];
        if (report.has_mspe)
            std::snprintf(buf, sizeof(buf), "%-20s %-15.6f %-11.4f %10.5f",
                          r.label.c_str(), r.log_marginal, r.probability,
                          r.mspe_value);
        else
            std::snprintf(buf, sizeof(buf), "%-20s %-15.6f %-11.4f",
                          r.label.c_str(), r.log_marginal, r.probability);
        out << buf << "\n";
    }
    if (report.improper_prior) out << "caveat: " << kImproperCaveat << "\n";
    return out.str();
}

std::string comparison_json(const ComparisonReport& report) {
    json j;
    j["models"] = json::array();
    for (const ComparisonRow& r : report.rows) {
        json row;
        row["label"] = r.label;
        row["log_marginal"] = r.log_marginal;
        row["rel_error"] = r.rel_error;
        row["probability"] = r.probability;
        if (report.has_mspe) row["mspe"] = r.mspe_value;
        j["models"].push_back(row);
    }
    if (report.improper_prior) j["caveat"] = kImproperCaveat;
    return j.dump(2) + "\n";
}

}  // namespace tsr
