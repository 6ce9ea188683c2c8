#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>
#include <vector>

#include "tsr/corr.hpp"
#include "tsr/dataset.hpp"
#include "tsr/errors.hpp"
#include "tsr/modelsel.hpp"
#include "tsr/posterior.hpp"
#include "tsr/priors.hpp"
#include "tsr/quadrature.hpp"
#include "tsr/rng.hpp"

using namespace tsr;

namespace {
const std::string kDataDir = TSR_TEST_DATA_DIR;

SpatialDataset load(const std::string& name) {
    return read_dataset_csv(kDataDir + "/" + name);
}

/// Simulated field with power-exponential correlation, inline so the
/// selection tests do not lean on the study harness.
SpatialDataset simulate_field(int n, const CorrelationModel& model, double nu,
                              double sigma2, std::uint64_t seed) {
    Rng rng(seed);
    SpatialDataset d;
    d.coords = Eigen::MatrixXd(n, 2);
    for (int i = 0; i < n; ++i) {
        d.coords(i, 0) = rng.uniform(0.0, 10.0);
        d.coords(i, 1) = rng.uniform(0.0, 10.0);
    }
    d.X = Eigen::MatrixXd::Ones(n, 1);
    d.has_intercept = true;
    const Eigen::MatrixXd R = corr_matrix(model, distance_matrix(d.coords));
    const Eigen::LLT<Eigen::MatrixXd> llt(R);
    Eigen::VectorXd z(n);
    for (int i = 0; i < n; ++i) z[i] = rng.normal();
    const double g = rng.chi2(nu);
    const Eigen::VectorXd field = llt.matrixL() * z;
    d.y = Eigen::VectorXd::Constant(n, 10.0) +
          std::sqrt(sigma2 * nu / g) * field;
    return d;
}
}  // namespace

TEST_CASE("mspe basics and hand value") {
    Eigen::VectorXd y(5), p(5);
    y << 1.0, -2.0, 0.5, 3.0, 4.0;
    p = y;
    CHECK(mspe(y, p) == 0.0);
    p.array() += 0.3;
    CHECK(mspe(y, p) == doctest::Approx(0.09).epsilon(1e-14));
    p << 1.5, -1.0, 0.0, 2.0, 6.0;
    // (0.25 + 1 + 0.25 + 1 + 4)/5
    CHECK(mspe(y, p) == doctest::Approx(1.3).epsilon(1e-14));
    Eigen::VectorXd bad(4);
    CHECK_THROWS_AS(mspe(y, bad), DataError);
    CHECK_THROWS_AS(mspe(Eigen::VectorXd(0), Eigen::VectorXd(0)), DataError);
}

TEST_CASE("posterior probabilities from log marginals") {
    const std::vector<double> equal = {-100.0, -100.0};
    const std::vector<double> p1 = posterior_probs_from_log_marginals(equal);
    CHECK(p1[0] == doctest::Approx(0.5).epsilon(1e-14));
    CHECK(p1[1] == doctest::Approx(0.5).epsilon(1e-14));

    const std::vector<double> three = {-50.0, -50.0 - std::log(3.0)};
    const std::vector<double> p2 = posterior_probs_from_log_marginals(three);
    CHECK(p2[0] == doctest::Approx(0.75).epsilon(1e-13));
    CHECK(p2[1] == doctest::Approx(0.25).epsilon(1e-13));

    std::vector<double> shifted = {-3.0, -1.0, -7.5};
    const std::vector<double> a = posterior_probs_from_log_marginals(shifted);
    for (double& v : shifted) v += 123.456;
    const std::vector<double> b = posterior_probs_from_log_marginals(shifted);
    double sum = 0.0;
    for (size_t i = 0; i < a.size(); ++i) {
        CHECK(std::fabs(a[i] - b[i]) < 1e-12);
        sum += a[i];
    }
    CHECK(std::fabs(sum - 1.0) < 1e-12);
}

TEST_CASE("identical candidates get identical marginal densities") {
    const SpatialDataset data = load("dataset_n6.csv");
    ModelCandidate a{"first", {CorrFamily::power_exponential, 1.0, 1.0},
                     PriorSpec::reference(), DesignKind::intercept_only};
    ModelCandidate b = a;
    b.label = "second";
    const MarginalDensity ma = log_marginal_density(data, a);
    const MarginalDensity mb = log_marginal_density(data, b);
    CHECK(ma.log_value == doctest::Approx(mb.log_value).epsilon(1e-12));
    CHECK(ma.rel_error < 1e-3);
    CHECK(ma.evaluations > 0);

    const std::vector<double> probs =
        model_posterior_probs({a, b}, data);
    CHECK(probs[0] == doctest::Approx(0.5).epsilon(1e-9));
}

TEST_CASE("marginal density matches a dense tensor-grid Riemann sum") {
    const SpatialDataset data = load("dataset_n6.csv");
    const ModelCandidate cand{"m", {CorrFamily::matern, 1.0, 1.0},
                              PriorSpec::reference(),
                              DesignKind::intercept_only};
    const MarginalOptions opts;
    const MarginalDensity md = log_marginal_density(data, cand, opts);

    // replicate the integration region and transform
    const Eigen::MatrixXd D = distance_matrix(data.coords);
    const double phi_max = 10.0 * D.maxCoeff();
    const double u_hi = std::log(phi_max), u_lo = u_hi - 25.0;
    const double nu0 = cand.prior.nu_lower;
    const double w_hi = std::log(opts.nu_max - nu0), w_lo = w_hi - 25.0;

    const auto riemann = [&](int nodes) {
        Eigen::MatrixXd logk(nodes, nodes);
        for (int i = 0; i < nodes; ++i) {
            const double u = u_lo + (i + 0.5) / nodes * (u_hi - u_lo);
            const CorrelationModel m = cand.model.with_phi(std::exp(u));
            const GlsSummary s =
                gls_summary(data, corr_matrix(m, D), corr_deriv_phi(m, D));
            for (int j = 0; j < nodes; ++j) {
                const double w = w_lo + (j + 0.5) / nodes * (w_hi - w_lo);
                logk(i, j) = log_marginal_post_from_summary(
                                 s, std::exp(u), nu0 + std::exp(w), data.n(),
                                 data.p(), cand.prior) +
                             u + w;
            }
        }
        const double s0 = logk.maxCoeff();
        const double cell =
            (u_hi - u_lo) / nodes * (w_hi - w_lo) / nodes;
        double total = 0.0;
        for (int i = 0; i < nodes; ++i)
            for (int j = 0; j < nodes; ++j)
                if (std::isfinite(logk(i, j)))
                    total += std::exp(logk(i, j) - s0);
        return std::log(total * cell) + s0;
    };

    const double r400 = riemann(400);
    const double r200 = riemann(200);
    const double riemann_err = std::fabs(r400 - r200) / 3.0;
    CHECK(std::fabs(md.log_value - r400) <
          3.0 * (md.rel_error + riemann_err));
}

TEST_CASE("narrow vague phi bounds collapse to the 1-D nu integral") {
    const SpatialDataset data = load("dataset_n10.csv");
    const double phi0 = 1.8, eps = 1e-4;
    PriorSpec prior = PriorSpec::vague();
    prior.phi_bounds = {phi0 - eps, phi0 + eps};
    const ModelCandidate cand{"narrow",
                              {CorrFamily::power_exponential, 1.0, 1.0},
                              prior,
                              DesignKind::intercept_only};
    MarginalOptions opts;
    opts.rel_tol = 1e-7;
    const MarginalDensity md = log_marginal_density(data, cand, opts);

    // 1-D oracle at phi0; the uniform phi density integrates to one across
    // the bounds, leaving only the nu integral
    const double nu0 = prior.nu_lower;
    const double w_hi = std::log(opts.nu_max - nu0), w_lo = w_hi - 25.0;
    std::vector<double> probe;
    for (int j = 0; j < 64; ++j) {
        const double w = w_lo + (j + 0.5) / 64.0 * (w_hi - w_lo);
        probe.push_back(log_marginal_post_phinu(phi0, nu0 + std::exp(w), data,
                                                cand.model, prior) +
                        w);
    }
    const double s0 = *std::max_element(probe.begin(), probe.end());
    const auto f = [&](double w) {
        const double v = log_marginal_post_phinu(phi0, nu0 + std::exp(w),
                                                 data, cand.model, prior) +
                         w - s0;
        return std::isfinite(v) ? std::exp(v) : 0.0;
    };
    const QuadResult r = integrate(f, w_lo, w_hi, 1e-10);
    REQUIRE(r.converged);
    const double oracle =
        std::log(r.value) + s0 + std::log(2.0 * eps);
    CHECK(md.log_value == doctest::Approx(oracle).epsilon(1e-5));
}

TEST_CASE("quadrature value is stable under tightening the tolerance") {
    const SpatialDataset data = load("dataset_n10.csv");
    const ModelCandidate cand{"m",
                              {CorrFamily::power_exponential, 1.0, 1.0},
                              PriorSpec::reference(),
                              DesignKind::intercept_only};
    MarginalOptions loose;
    loose.rel_tol = 1e-4;
    MarginalOptions tight;
    tight.rel_tol = 1e-7;
    const MarginalDensity a = log_marginal_density(data, cand, loose);
    const MarginalDensity b = log_marginal_density(data, cand, tight);
    CHECK(std::fabs(a.log_value - b.log_value) <
          3.0 * (a.rel_error + b.rel_error) + 1e-9);
    CHECK(b.evaluations > a.evaluations);
}

TEST_CASE("cutoff tail mass diagnostics") {
    const SpatialDataset data = load("dataset_n10.csv");
    ModelCandidate cand{"m",
                        {CorrFamily::power_exponential, 1.0, 1.0},
                        PriorSpec::reference(),
                        DesignKind::intercept_only};
    MarginalOptions wide;
    const MarginalDensity a = log_marginal_density(data, cand, wide);
    CHECK(a.tail_fraction_nu < 0.01);
    // the reference kernel decays only like 1/phi in the range, so the value
    // depends on the cutoff and the diagnostic must flag heavy boundary mass
    CHECK(a.tail_fraction_phi > 0.05);
    MarginalOptions wider;
    wider.phi_max = 100.0 * distance_matrix(data.coords).maxCoeff();
    const MarginalDensity w = log_marginal_density(data, cand, wider);
    CHECK(w.log_value > a.log_value + 0.05);

    MarginalOptions clipped;
    clipped.nu_max = 30.0;
    const MarginalDensity b = log_marginal_density(data, cand, clipped);
    CHECK(b.tail_fraction_nu > a.tail_fraction_nu);
    CHECK(b.tail_fraction_nu > 1e-3);

    // a vague prior with bounded support has no phi tail beyond the region
    ModelCandidate vag = cand;
    vag.prior = PriorSpec::vague();
    const MarginalDensity v = log_marginal_density(data, vag, wide);
    CHECK(v.tail_fraction_phi == 0.0);
}

TEST_CASE("mixing prior families across candidates is refused") {
    const SpatialDataset data = load("dataset_n6.csv");
    const ModelCandidate ref{"r", {CorrFamily::power_exponential, 1.0, 1.0},
                             PriorSpec::reference(),
                             DesignKind::intercept_only};
    ModelCandidate vag = ref;
    vag.label = "v";
    vag.prior = PriorSpec::vague();
    CHECK_THROWS_AS(model_posterior_probs({ref, vag}, data), ConfigError);
    CHECK_THROWS_AS(model_posterior_probs({ref}, data), ConfigError);
    ModelCandidate dup = ref;
    CHECK_THROWS_AS(model_posterior_probs({ref, dup}, data), ConfigError);
}

TEST_CASE("generating family wins a majority of seeded replicates") {
    const CorrelationModel truth{CorrFamily::power_exponential, 2.0, 1.0};
    const std::vector<ModelCandidate> candidates = {
        {"exponential", {CorrFamily::power_exponential, 1.0, 1.0},
         PriorSpec::vague(), DesignKind::intercept_only},
        {"rough", {CorrFamily::power_exponential, 1.0, 0.3},
         PriorSpec::vague(), DesignKind::intercept_only},
        {"smooth", {CorrFamily::power_exponential, 1.0, 1.9},
         PriorSpec::vague(), DesignKind::intercept_only},
    };
    int wins = 0;
    for (int rep = 0; rep < 20; ++rep) {
        const SpatialDataset data =
            simulate_field(30, truth, 9.0, 1.0, 9000 + rep);
        const std::vector<double> probs =
            model_posterior_probs(candidates, data);
        const auto it = std::max_element(probs.begin(), probs.end());
        if (it == probs.begin()) ++wins;
    }
    CHECK(wins > 10);
}

TEST_CASE("comparison report with a holdout split") {
    const CorrelationModel truth{CorrFamily::power_exponential, 2.0, 1.0};
    const SpatialDataset all = simulate_field(40, truth, 9.0, 1.0, 777);
    SpatialDataset train;
    train.coords = all.coords.topRows(34);
    train.y = all.y.head(34);
    train.X = all.X.topRows(34);
    train.has_intercept = true;
    const Eigen::MatrixXd hold_coords = all.coords.bottomRows(6);
    const Eigen::VectorXd hold_y = all.y.tail(6);

    const std::vector<ModelCandidate> candidates = {
        {"exponential", {CorrFamily::power_exponential, 1.0, 1.0},
         PriorSpec::vague(), DesignKind::intercept_only},
        {"spherical", {CorrFamily::spherical, 1.0, 1.0},
         PriorSpec::vague(), DesignKind::intercept_only},
    };
    SamplerConfig sampler;
    sampler.draws = 300;
    sampler.burn_in = 200;
    sampler.seed = 5;
    const ComparisonReport report = compare_models(
        candidates, train, MarginalOptions{}, hold_coords, hold_y, sampler);

    REQUIRE(report.rows.size() == 2);
    CHECK(report.has_mspe);
    CHECK(!report.improper_prior);
    double psum = 0.0;
    for (const ComparisonRow& r : report.rows) {
        CHECK(std::isfinite(r.log_marginal));
        CHECK(r.mspe_value >= 0.0);
        CHECK(std::isfinite(r.mspe_value));
        psum += r.probability;
    }
    CHECK(psum == doctest::Approx(1.0).epsilon(1e-12));

    const std::string text = comparison_text(report);
    CHECK(text.find("exponential") != std::string::npos);
    CHECK(text.find("MSPE") != std::string::npos);
    CHECK(text.find("caveat") == std::string::npos);

    const std::string js = comparison_json(report);
    CHECK(js.find("\"probability\"") != std::string::npos);
    CHECK(js.find("\"mspe\"") != std::string::npos);
}

TEST_CASE("improper prior comparison carries the caveat") {
    const SpatialDataset data = load("dataset_n10.csv");
    const std::vector<ModelCandidate> candidates = {
        {"exponential", {CorrFamily::power_exponential, 1.0, 1.0},
         PriorSpec::reference(), DesignKind::intercept_only},
        {"gaussianish", {CorrFamily::power_exponential, 1.0, 1.8},
         PriorSpec::reference(), DesignKind::intercept_only},
    };
    const ComparisonReport report =
        compare_models(candidates, data, MarginalOptions{});
    CHECK(report.improper_prior);
    CHECK(!report.has_mspe);
    CHECK(comparison_text(report).find("caveat") != std::string::npos);
    CHECK(comparison_json(report).find("caveat") != std::string::npos);
}

TEST_CASE("marginal options validation") {
    MarginalOptions o;
    o.rel_tol = 0.0;
    CHECK_THROWS_AS(validate(o), ConfigError);
    o = MarginalOptions{};
    o.rel_tol = 1e-2;
    CHECK_THROWS_AS(validate(o), ConfigError);
    o = MarginalOptions{};
    o.nu_max = -1.0;
    CHECK_THROWS_AS(validate(o), ConfigError);

    const SpatialDataset data = load("dataset_n6.csv");
    ModelCandidate cand{"m", {CorrFamily::power_exponential, 1.0, 1.0},
                        PriorSpec::reference(), DesignKind::intercept_only};
    MarginalOptions low;
    low.nu_max = 4.0;
    CHECK_THROWS_AS(log_marginal_density(data, cand, low), ConfigError);
}
