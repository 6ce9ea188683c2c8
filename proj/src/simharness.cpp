#include "tsr/simharness.hpp"

#include <Eigen/Cholesky>
#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <sstream>
#include <thread>

#include "tsr/errors.hpp"
#include "tsr/rng.hpp"
#include "tsr/serialize.hpp"
#include "tsr/stats.hpp"

namespace tsr {

namespace {

Eigen::Index design_columns(DesignKind kind) {
    switch (kind) {
        case DesignKind::intercept_only: return 1;
        case DesignKind::quadratic_surface: return 6;
        default: return -1;
    }
}

std::vector<double> to_vector(const Eigen::Ref<const Eigen::VectorXd>& v) {
    return std::vector<double>(v.data(), v.data() + v.size());
}

// Without the seed: the study overrides it per task and records the master
// seed separately.
json sampler_to_json(const SamplerConfig& s) {
    json j;
    j["mode"] = s.mode == SamplerMode::metropolis ? "metropolis" : "grid";
    j["draws"] = s.draws;
    j["burn_in"] = s.burn_in;
    j["proposal_sd"] = {s.proposal_sd[0], s.proposal_sd[1]};
    j["grid_phi"] = s.grid_phi;
    j["grid_nu"] = s.grid_nu;
    j["phi_max"] = s.phi_max;
    j["nu_max"] = s.nu_max;
    j["adapt"] = s.adapt;
    return j;
}

}  // namespace

std::string scenario_name(Scenario s) {
    switch (s) {
        case Scenario::s1: return "s1";
        case Scenario::s2: return "s2";
        case Scenario::custom: return "custom";
    }
    throw ConfigError("unknown scenario");
}

Scenario scenario_from_name(std::string_view name) {
    if (name == "s1") return Scenario::s1;
    if (name == "s2") return Scenario::s2;
    if (name == "custom") return Scenario::custom;
    throw ConfigError("unknown scenario name: " + std::string(name));
}

ScenarioConfig ScenarioConfig::s1() {
    ScenarioConfig c;
    c.scenario = Scenario::s1;
    c.beta = Eigen::VectorXd::Constant(1, 10.0);
    c.design = DesignKind::intercept_only;
    return c;
}

ScenarioConfig ScenarioConfig::s2() {
    ScenarioConfig c;
    c.scenario = Scenario::s2;
    c.beta = Eigen::VectorXd(6);
    c.beta << 0.0, -2.2, 0.5, 1.7, 2.4, 3.5;
    c.design = DesignKind::quadratic_surface;
    return c;
}

void validate(const ScenarioConfig& config) {
    if (config.side < 2) throw ConfigError("lattice side must be at least 2");
    if (!(config.extent > 0.0) || !std::isfinite(config.extent))
        throw ConfigError("lattice extent must be positive");
    if (!(config.sigma2 >= 0.0) || !std::isfinite(config.sigma2))
        throw ConfigError("sigma2 must be nonnegative");
    if (!(config.nu > 0.0) || !std::isfinite(config.nu))
        throw ConfigError("nu must be positive");
    if (!(config.model.phi > 0.0))
        throw ConfigError("true range phi must be positive");
    if (config.replicates < 1)
        throw ConfigError("replicate count must be at least 1");
    const Eigen::Index p = design_columns(config.design);
    if (p < 0)
        throw ConfigError(
            "scenario designs are built from the lattice coordinates; "
            "file_covariates is not available here");
    if (config.beta.size() != p)
        throw ConfigError("beta has " + std::to_string(config.beta.size()) +
                          " entries but the design has " + std::to_string(p) +
                          " columns");
    if (!config.beta.allFinite()) throw ConfigError("beta must be finite");
}

Eigen::MatrixXd lattice_coords(int side, double extent) {
    if (side < 1) throw ConfigError("lattice side must be positive");
    const double h = extent / static_cast<double>(side);
    Eigen::MatrixXd coords(static_cast<Eigen::Index>(side) * side, 2);
    Eigen::Index r = 0;
    for (int i = 0; i < side; ++i)
        for (int j = 0; j < side; ++j, ++r) {
            coords(r, 0) = (i + 0.5) * h;
            coords(r, 1) = (j + 0.5) * h;
        }
    return coords;
}

SpatialDataset generate_tsr(const ScenarioConfig& config, int replicate) {
    validate(config);
    if (replicate < 0) throw ConfigError("replicate index must be nonnegative");

    SpatialDataset d;
    d.coords = lattice_coords(config.side, config.extent);
    d.X = build_design(d.coords, config.design);
    d.has_intercept = true;

    const Eigen::MatrixXd R =
        corr_matrix(config.model, distance_matrix(d.coords));
    Eigen::LLT<Eigen::MatrixXd> llt(R);
    if (llt.info() != Eigen::Success)
        throw IllConditionedError(
            "correlation matrix not positive definite at the true range",
            config.model.phi);

    Rng rng(derive_seed(config.seed, static_cast<std::uint64_t>(replicate)));
    Eigen::VectorXd z(d.coords.rows());
    for (Eigen::Index i = 0; i < z.size(); ++i) z(i) = rng.normal();
    const double g = rng.chi2(config.nu);

    const Eigen::VectorXd field = llt.matrixL() * z;
    d.y = d.X * config.beta +
          std::sqrt(config.sigma2 * config.nu / g) * field;
    return d;
}

namespace {

struct TruthTable {
    std::vector<std::string> names;
    std::vector<double> values;
};

TruthTable truth_table(const ScenarioConfig& config) {
    TruthTable t;
    for (Eigen::Index j = 0; j < config.beta.size(); ++j) {
        t.names.push_back("beta_" + std::to_string(j + 1));
        t.values.push_back(config.beta(j));
    }
    t.names.insert(t.names.end(), {"sigma2", "phi", "nu"});
    t.values.insert(t.values.end(),
                    {config.sigma2, config.model.phi, config.nu});
    return t;
}

ReplicateRecord fit_replicate(const ScenarioConfig& config,
                              const PriorSpec& prior, size_t prior_index,
                              const SamplerConfig& sampler, int k,
                              const TruthTable& truth) {
    ReplicateRecord rec;
    rec.replicate = k;
    rec.data_seed = derive_seed(config.seed, static_cast<std::uint64_t>(k));
    rec.sampler_seed = derive_seed(rec.data_seed, 1 + prior_index);
    try {
        const SpatialDataset data = generate_tsr(config, k);
        tsr::validate(data);
        SamplerConfig sc = sampler;
        sc.seed = rec.sampler_seed;
        const PosteriorDraws draws =
            sample_posterior(data, config.model, prior, sc);

        const size_t np = truth.names.size();
        rec.median.resize(np);
        rec.lower.resize(np);
        rec.upper.resize(np);
        rec.contains.resize(np);
        for (size_t i = 0; i < np; ++i) {
            std::vector<double> col;
            if (i < static_cast<size_t>(draws.beta.cols()))
                col = to_vector(draws.beta.col(static_cast<Eigen::Index>(i)));
            else if (truth.names[i] == "sigma2")
                col = to_vector(draws.sigma2);
            else if (truth.names[i] == "phi")
                col = to_vector(draws.phi);
            else
                col = to_vector(draws.nu);
            rec.median[i] = quantile_type7(col, 0.5);
            rec.lower[i] = quantile_type7(col, 0.025);
            rec.upper[i] = quantile_type7(col, 0.975);
            rec.contains[i] = (rec.lower[i] <= truth.values[i] &&
                               truth.values[i] <= rec.upper[i])
                                  ? 1
                                  : 0;
        }
    } catch (const std::exception& e) {
        rec.failed = true;
        rec.error = e.what();
    }
    return rec;
}

std::vector<ParamSummary> summarize(const TruthTable& truth,
                                    const std::vector<ReplicateRecord>& recs) {
    std::vector<ParamSummary> out(truth.names.size());
    for (size_t i = 0; i < truth.names.size(); ++i) {
        ParamSummary& s = out[i];
        s.name = truth.names[i];
        s.truth = truth.values[i];
        std::vector<double> err, loglen, cover;
        for (const ReplicateRecord& r : recs) {
            if (r.failed) continue;
            err.push_back(r.median[i] - s.truth);
            loglen.push_back(std::log(r.upper[i] - r.lower[i]));
            cover.push_back(static_cast<double>(r.contains[i]));
        }
        s.bias = sample_mean(err);
        s.bias_sd = err.size() > 1 ? sample_sd(err) : 0.0;
        s.mean_log_length = sample_mean(loglen);
        s.coverage = sample_mean(cover);
    }
    return out;
}

}  // namespace

StudyReport run_mc_study(const ScenarioConfig& config,
                         const std::vector<PriorSpec>& priors,
                         const SamplerConfig& sampler) {
    validate(config);
    validate(sampler);
    if (priors.empty()) throw ConfigError("study needs at least one prior");
    for (const PriorSpec& p : priors) validate(p);

    const TruthTable truth = truth_table(config);
    const int K = config.replicates;
    const size_t tasks = priors.size() * static_cast<size_t>(K);

    std::vector<std::vector<ReplicateRecord>> recs(priors.size());
    for (auto& v : recs) v.resize(static_cast<size_t>(K));

    // Tasks write into their own slot, so the aggregation below is
    // independent of scheduling.
    std::atomic<size_t> next{0};
    auto worker = [&] {
        for (;;) {
            const size_t t = next.fetch_add(1);
            if (t >= tasks) return;
            const size_t pi = t / static_cast<size_t>(K);
            const int k = static_cast<int>(t % static_cast<size_t>(K));
            recs[pi][static_cast<size_t>(k)] = fit_replicate(
                config, priors[pi], pi, sampler, k, truth);
        }
    };
    unsigned hw = std::thread::hardware_concurrency();
    if (hw == 0) hw = 4;
    const size_t nthreads = std::min<size_t>(hw, tasks);
    std::vector<std::thread> pool;
    for (size_t i = 1; i < nthreads; ++i) pool.emplace_back(worker);
    worker();
    for (std::thread& th : pool) th.join();

    StudyReport report;
    report.config = config;
    report.sampler = sampler;
    {
        json meta;
        meta["scenario"] = to_json(config);
        meta["sampler"] = sampler_to_json(sampler);
        json jp = json::array();
        for (const PriorSpec& p : priors) jp.push_back(to_json(p));
        meta["priors"] = jp;
        report.config_digest = config_digest(meta);
    }

    for (size_t pi = 0; pi < priors.size(); ++pi) {
        PriorStudy ps;
        ps.prior =
            priors[pi].kind == PriorKind::reference ? "reference" : "vague";
        ps.replicates = std::move(recs[pi]);
        for (const ReplicateRecord& r : ps.replicates)
            if (r.failed) ++ps.failures;
        if (20 * ps.failures > K) {
            std::string first;
            for (const ReplicateRecord& r : ps.replicates)
                if (r.failed) { first = r.error; break; }
            throw StudyError("study aborted: " + std::to_string(ps.failures) +
                             " of " + std::to_string(K) +
                             " replicates failed under the " + ps.prior +
                             " prior (first error: " + first + ")");
        }
        ps.params = summarize(truth, ps.replicates);
        report.results.push_back(std::move(ps));
    }
    return report;
}

std::string study_report_json(const StudyReport& report) {
    json j;
    j["scenario"] = to_json(report.config);
    j["sampler"] = sampler_to_json(report.sampler);
    j["master_seed"] = report.config.seed;
    j["config_digest"] = report.config_digest;
    j["results"] = json::array();
    for (const PriorStudy& ps : report.results) {
        json jp;
        jp["prior"] = ps.prior;
        jp["failures"] = ps.failures;
        jp["summary"] = json::array();
        for (const ParamSummary& s : ps.params) {
            json row;
            row["name"] = s.name;
            row["truth"] = s.truth;
            row["bias"] = s.bias;
            row["bias_sd"] = s.bias_sd;
            row["mean_log_length"] = s.mean_log_length;
            row["coverage"] = s.coverage;
            jp["summary"].push_back(row);
        }
        jp["replicates"] = json::array();
        for (const ReplicateRecord& r : ps.replicates) {
            json row;
            row["replicate"] = r.replicate;
            row["data_seed"] = r.data_seed;
            row["sampler_seed"] = r.sampler_seed;
            if (r.failed) {
                row["failed"] = true;
                row["error"] = r.error;
            } else {
                row["median"] = r.median;
                row["lower"] = r.lower;
                row["upper"] = r.upper;
                row["contains"] = r.contains;
            }
            jp["replicates"].push_back(row);
        }
        j["results"].push_back(jp);
    }
    return j.dump(2) + "\n";
}

std::string study_report_text(const StudyReport& report) {
    std::ostringstream os;
    os << "scenario " << scenario_name(report.config.scenario) << ", n = "
       << report.config.n() << ", replicates = " << report.config.replicates
       << ", seed = " << report.config.seed << ", digest = "
       << report.config_digest << "\n";
    char buf[160];
    for (const PriorStudy& ps : report.results) {
        os << "\nprior: " << ps.prior << "   failures: " << ps.failures << "/"
           << report.config.replicates << "\n";
        os << "parameter       truth       bias    bias_sd    log.len"
              "   coverage\n";
        for (const ParamSummary& s : ps.params) {
            std::snprintf(buf, sizeof(buf),
                          "%-10s %10.4f %10.4f %10.4f %10.4f %10.3f\n",
                          s.name.c_str(), s.truth, s.bias, s.bias_sd,
                          s.mean_log_length, s.coverage);
            os << buf;
        }
    }
    return os.str();
}

}  // namespace tsr
