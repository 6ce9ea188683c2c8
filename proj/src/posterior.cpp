#include "tsr/posterior.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <limits>
#include <unordered_map>
#include <vector>

#include "tsr/errors.hpp"
#include "tsr/serialize.hpp"
#include "tsr/specfun.hpp"
#include "tsr/stats.hpp"

namespace tsr {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

/// Evaluates the (phi, nu) marginal kernel; the data enter through the
/// phi-only GLS summary, nu only through A(nu) and the prior.
class MarginalKernel {
  public:
    MarginalKernel(const SpatialDataset& data, const CorrelationModel& model,
                   const PriorSpec& prior)
        : data_(data),
          model_(model),
          prior_(prior),
          D_(distance_matrix(data.coords)),
          n_(static_cast<int>(data.n())),
          p_(static_cast<int>(data.p())) {
        tsr::validate(model_);
        tsr::validate(prior_);
        tsr::validate(data_);
    }

    GlsSummary summary_at(double phi) const {
        const CorrelationModel m = model_.with_phi(phi);
        if (prior_.kind == PriorKind::reference)
            return gls_summary(data_, corr_matrix(m, D_), corr_deriv_phi(m, D_),
                               phi);
        return gls_summary(data_, corr_matrix(m, D_), Eigen::MatrixXd(0, 0),
                           phi);
    }

    double log_kernel(double phi, double nu, const GlsSummary& s) const {
        return log_marginal_post_from_summary(s, phi, nu, n_, p_, prior_);
    }

    const Eigen::MatrixXd& distances() const { return D_; }
    const PriorSpec& prior() const { return prior_; }
    int n() const { return n_; }
    int p() const { return p_; }

  private:
    const SpatialDataset& data_;
    CorrelationModel model_;
    PriorSpec prior_;
    Eigen::MatrixXd D_;
    int n_;
    int p_;
};

double median_positive_distance(const Eigen::MatrixXd& D) {
    std::vector<double> d;
    for (Eigen::Index i = 0; i < D.rows(); ++i)
        for (Eigen::Index j = i + 1; j < D.cols(); ++j)
            if (D(i, j) > 0.0) d.push_back(D(i, j));
    if (d.empty()) return 1.0;
    return quantile_type7(std::move(d), 0.5);
}

double min_positive_distance(const Eigen::MatrixXd& D) {
    double lo = std::numeric_limits<double>::infinity();
    for (Eigen::Index i = 0; i < D.rows(); ++i)
        for (Eigen::Index j = i + 1; j < D.cols(); ++j)
            if (D(i, j) > 0.0) lo = std::min(lo, D(i, j));
    return std::isfinite(lo) ? lo : 1.0;
}

struct KernelPoint {
    double phi = 0.0;
    double nu = 0.0;
    double log_kernel = kNegInf;
    GlsSummary s;
};

/// Starting point search: a handful of data-scaled phi values crossed with
/// nu offsets; the first finite kernel wins.
KernelPoint find_start(const MarginalKernel& kernel,
                       const Eigen::MatrixXd& D, const PriorSpec& prior,
                       double phi_cap) {
    std::vector<double> phis;
    const double med = median_positive_distance(D);
    for (double f : {1.0, 0.5, 2.0, 0.25, 4.0}) {
        double phi = std::min(f * med, phi_cap);
        if (prior.kind == PriorKind::vague) {
            phi = std::clamp(phi, prior.phi_bounds.first * 1.001,
                             prior.phi_bounds.second * 0.999);
        }
        phis.push_back(phi);
    }
    for (double dnu : {2.0, 0.5, 10.0, 50.0}) {
        for (double phi : phis) {
            KernelPoint pt;
            pt.phi = phi;
            pt.nu = prior.nu_lower + dnu;
            try {
                pt.s = kernel.summary_at(phi);
            } catch (const IllConditionedError&) {
                continue;
            }
            pt.log_kernel = kernel.log_kernel(pt.phi, pt.nu, pt.s);
            if (std::isfinite(pt.log_kernel)) return pt;
        }
    }
    throw ConfigError(
        "sampler found no starting point with positive posterior density");
}

void compose_draw(const MarginalKernel& kernel, const KernelPoint& pt,
                  Rng& rng, Eigen::Index i, PosteriorDraws& out) {
    const int m = kernel.n() - kernel.p();
    const double a = kernel.prior().a;
    const double sigma2 =
        sample_sigma2_conditional(pt.nu, a, m, pt.s.S2, rng);
    out.beta.row(i) =
        sample_beta_conditional(pt.s, sigma2, pt.nu, rng).transpose();
    out.sigma2[i] = sigma2;
    out.phi[i] = pt.phi;
    out.nu[i] = pt.nu;
    out.log_post[i] = pt.log_kernel;
}

PosteriorDraws run_metropolis(const MarginalKernel& kernel,
                              const SpatialDataset& data,
                              const PriorSpec& prior,
                              const SamplerConfig& config) {
    PosteriorDraws out;
    out.beta.resize(config.draws, data.p());
    out.sigma2.resize(config.draws);
    out.phi.resize(config.draws);
    out.nu.resize(config.draws);
    out.log_post.resize(config.draws);

    Rng rng(config.seed);
    // the reference kernel decays only like 1/phi for large ranges, so the
    // walk is confined to (0, phi_cap] to keep the target integrable
    const double phi_cap = config.phi_max > 0.0
                               ? config.phi_max
                               : 10.0 * kernel.distances().maxCoeff();
    KernelPoint cur = find_start(kernel, kernel.distances(), prior, phi_cap);
    std::array<double, 2> x{std::log(cur.phi),
                            std::log(cur.nu - prior.nu_lower)};
    double target = cur.log_kernel + x[0] + x[1];  // Jacobian of the map

    std::array<double, 2> sd = config.proposal_sd;
    const int total = config.burn_in + config.draws;
    int batch_acc = 0, batch_n = 0, batch_idx = 0, kept_acc = 0;

    for (int iter = 0; iter < total; ++iter) {
        std::array<double, 2> y{x[0] + sd[0] * rng.normal(),
                                x[1] + sd[1] * rng.normal()};
        const double u = rng.uniform01();

        KernelPoint prop;
        prop.phi = std::exp(y[0]);
        prop.nu = prior.nu_lower + std::exp(y[1]);
        double target_prop = kNegInf;
        bool usable = prop.phi <= phi_cap;
        if (usable) try {
                prop.s = kernel.summary_at(prop.phi);
            } catch (const IllConditionedError&) {
                usable = false;
            }
        if (usable) {
            prop.log_kernel = kernel.log_kernel(prop.phi, prop.nu, prop.s);
            target_prop = prop.log_kernel + y[0] + y[1];
        }

        const bool accept =
            std::isfinite(target_prop) && std::log(u) < target_prop - target;
        if (accept) {
            cur = std::move(prop);
            x = y;
            target = target_prop;
        }

        if (iter < config.burn_in) {
            if (config.adapt) {
                batch_acc += accept ? 1 : 0;
                if (++batch_n == 100) {
                    ++batch_idx;
                    const double delta =
                        std::min(0.05, 1.0 / std::sqrt(batch_idx));
                    const double f = std::exp(
                        batch_acc > 30 ? delta : -delta);
                    sd[0] *= f;
                    sd[1] *= f;
                    batch_acc = 0;
                    batch_n = 0;
                }
            }
        } else {
            kept_acc += accept ? 1 : 0;
            compose_draw(kernel, cur, rng, iter - config.burn_in, out);
        }
    }

    out.acceptance_rate =
        static_cast<double>(kept_acc) / static_cast<double>(config.draws);
    if (out.acceptance_rate < 0.05 || out.acceptance_rate > 0.7) {
        char buf[96];
        std::snprintf(buf, sizeof(buf),
                      "metropolis acceptance rate %.3f outside [0.05, 0.7]",
                      out.acceptance_rate);
        out.warnings.emplace_back(buf);
    }
    return out;
}

PosteriorDraws run_grid(const MarginalKernel& kernel,
                        const SpatialDataset& data, const PriorSpec& prior,
                        const SamplerConfig& config) {
    const Eigen::MatrixXd& D = kernel.distances();
    double phi_lo, phi_hi;
    if (prior.kind == PriorKind::vague) {
        phi_lo = prior.phi_bounds.first;
        phi_hi = prior.phi_bounds.second;
    } else {
        phi_lo = 0.05 * min_positive_distance(D);
        phi_hi = config.phi_max > 0.0 ? config.phi_max : 10.0 * D.maxCoeff();
    }
    const double nu_hi = config.nu_max > 0.0 ? config.nu_max : 5000.0;
    if (!(phi_hi > phi_lo) || !(nu_hi > prior.nu_lower))
        throw ConfigError("grid bounds are empty");

    const int gp = config.grid_phi, gn = config.grid_nu;
    const double ulo = std::log(phi_lo), uhi = std::log(phi_hi);
    const double vlo = std::log(0.01), vhi = std::log(nu_hi - prior.nu_lower);
    const double hu = (uhi - ulo) / gp, hv = (vhi - vlo) / gn;

    // midpoint nodes in (log phi, log(nu - nu_lower)); equal cell measure,
    // so resampling weights are kernel x Jacobian at the node
    std::vector<GlsSummary> columns(gp);
    std::vector<char> column_ok(gp, 1);
    int failed_columns = 0;
    std::vector<double> phis(gp), nus(gn);
    for (int i = 0; i < gp; ++i) phis[i] = std::exp(ulo + (i + 0.5) * hu);
    for (int j = 0; j < gn; ++j)
        nus[j] = prior.nu_lower + std::exp(vlo + (j + 0.5) * hv);

    std::vector<double> logw(static_cast<size_t>(gp) * gn, kNegInf);
    std::vector<double> logk(static_cast<size_t>(gp) * gn, kNegInf);
    double best = kNegInf;
    for (int i = 0; i < gp; ++i) {
        try {
            columns[i] = kernel.summary_at(phis[i]);
        } catch (const IllConditionedError&) {
            column_ok[i] = 0;
            ++failed_columns;
            continue;
        }
        for (int j = 0; j < gn; ++j) {
            const double lk = kernel.log_kernel(phis[i], nus[j], columns[i]);
            const size_t idx = static_cast<size_t>(i) * gn + j;
            logk[idx] = lk;
            logw[idx] = lk + std::log(phis[i]) + std::log(nus[j] - prior.nu_lower);
            best = std::max(best, logw[idx]);
        }
    }
    if (!std::isfinite(best))
        throw ConfigError("grid sampler: kernel vanished on the whole grid");

    std::vector<double> cdf(logw.size());
    double total = 0.0;
    for (size_t k = 0; k < logw.size(); ++k) {
        total += std::exp(logw[k] - best);
        cdf[k] = total;
    }

    PosteriorDraws out;
    out.beta.resize(config.draws, data.p());
    out.sigma2.resize(config.draws);
    out.phi.resize(config.draws);
    out.nu.resize(config.draws);
    out.log_post.resize(config.draws);

    Rng rng(config.seed);
    for (int d = 0; d < config.draws; ++d) {
        const double u = rng.uniform01() * total;
        const size_t k = static_cast<size_t>(
            std::lower_bound(cdf.begin(), cdf.end(), u) - cdf.begin());
        const int i = static_cast<int>(k / gn);
        const int j = static_cast<int>(k % gn);
        KernelPoint pt;
        pt.phi = phis[i];
        pt.nu = nus[j];
        pt.log_kernel = logk[k];
        pt.s = columns[i];
        compose_draw(kernel, pt, rng, d, out);
    }
    out.acceptance_rate = 1.0;
    if (failed_columns > 0) {
        out.warnings.emplace_back(
            std::to_string(failed_columns) +
            " grid columns dropped: correlation matrix not positive definite");
    }
    return out;
}

}  // namespace

void validate(const SamplerConfig& config) {
    if (config.draws < 1) throw ConfigError("draw count must be positive");
    if (config.burn_in < 0) throw ConfigError("burn-in must be nonnegative");
    if (!(config.proposal_sd[0] > 0.0) || !(config.proposal_sd[1] > 0.0))
        throw ConfigError("proposal scales must be positive");
    if (config.mode == SamplerMode::grid &&
        (config.grid_phi < 2 || config.grid_nu < 2))
        throw ConfigError("grid resolution must be at least 2 per axis");
    if (config.phi_max < 0.0 || config.nu_max < 0.0)
        throw ConfigError("grid upper bounds must be nonnegative");
}

double log_likelihood(const Eigen::Ref<const Eigen::VectorXd>& beta,
                      double sigma2, double phi, double nu,
                      const SpatialDataset& data,
                      const CorrelationModel& model) {
    if (beta.size() != data.p())
        throw ConfigError("coefficient vector length does not match design");
    if (!(sigma2 > 0.0)) throw SupportError("sigma2 must be positive");
    if (!(nu > 0.0)) throw SupportError("nu must be positive");
    if (!(phi > 0.0)) throw SupportError("phi must be positive");
    const auto n = static_cast<double>(data.n());

    const CorrelationModel m = model.with_phi(phi);
    validate(m);
    const Eigen::MatrixXd R = corr_matrix(m, distance_matrix(data.coords));
    const Eigen::LLT<Eigen::MatrixXd> llt(R);
    if (llt.info() != Eigen::Success)
        throw IllConditionedError(
            "correlation matrix is not positive definite at phi=" +
                std::to_string(phi),
            phi);
    const double logdet_R =
        2.0 * llt.matrixLLT().diagonal().array().log().sum();

    const Eigen::VectorXd resid = data.y - data.X * beta;
    const Eigen::VectorXd w = llt.matrixL().solve(resid);
    const double q = w.squaredNorm() / sigma2;

    return ln_gamma(0.5 * (nu + n)) + 0.5 * nu * std::log(nu) -
           ln_gamma(0.5 * nu) - 0.5 * n * std::log(M_PI) -
           0.5 * (n * std::log(sigma2) + logdet_R) -
           0.5 * (nu + n) * std::log(nu + q);
}

double log_A_factor(double nu, double a) {
    if (a == 1.0) return 0.0;
    if (!(a < 0.5 * nu + 1.0))
        throw SupportError("A(nu) requires a < nu/2 + 1");
    return (a - 1.0) * std::log(nu) + ln_gamma(0.5 * nu - a + 1.0) -
           ln_gamma(0.5 * nu);
}

double log_marginal_post_phinu(double phi, double nu,
                               const SpatialDataset& data,
                               const CorrelationModel& model,
                               const PriorSpec& prior) {
    const MarginalKernel kernel(data, model, prior);
    if (!(phi > 0.0) || !(nu > prior.nu_lower)) return kNegInf;
    if (!(prior.a < 0.5 * nu + 1.0)) return kNegInf;
    return kernel.log_kernel(phi, nu, kernel.summary_at(phi));
}

double log_marginal_post_from_summary(const GlsSummary& s, double phi,
                                      double nu, Eigen::Index n,
                                      Eigen::Index p, const PriorSpec& prior) {
    if (!(phi > 0.0) || !(nu > prior.nu_lower)) return kNegInf;
    if (!(prior.a < 0.5 * nu + 1.0)) return kNegInf;
    if (prior.kind == PriorKind::reference && !std::isfinite(s.tr_Phi))
        throw ConfigError(
            "reference prior needs a GLS summary with projector traces");
    const double lp =
        prior.kind == PriorKind::reference
            ? log_reference_prior_from_traces(nu, static_cast<int>(n),
                                              static_cast<int>(p), s.tr_Phi,
                                              s.tr_Phi2, prior.nu_lower)
            : log_vague_prior(phi, nu, prior);
    if (!std::isfinite(lp)) return kNegInf;
    const double m = static_cast<double>(n - p);
    double v = lp - 0.5 * s.logdet_R + 0.5 * s.logdet_V -
               (0.5 * m + prior.a - 1.0) * std::log(m * s.S2);
    if (prior.a != 1.0) v += log_A_factor(nu, prior.a);
    return v;
}

double sample_sigma2_conditional(double nu, double a, int m, double S2,
                                 Rng& rng) {
    if (!(nu / 2.0 - a + 1.0 > 0.0))
        throw SupportError("sigma2 conditional requires a < nu/2 + 1");
    if (!(m / 2.0 + a - 1.0 > 0.0))
        throw SupportError("sigma2 conditional requires a > 1 - (n-p)/2");
    const double u = rng.beta_prime(0.5 * nu - a + 1.0, 0.5 * m + a - 1.0);
    return u * m * S2 / nu;
}

Eigen::VectorXd sample_beta_conditional(const GlsSummary& s, double sigma2,
                                        double nu, Rng& rng) {
    const auto p = s.beta_hat.size();
    const auto n = s.z.size();
    const double m = static_cast<double>(n - p);
    const double df = nu + m;
    const double scale = (nu * sigma2 + m * s.S2) / df;

    const Eigen::LLT<Eigen::MatrixXd> llt(s.V_beta);
    if (llt.info() != Eigen::Success)
        throw IllConditionedError("V_beta is not positive definite");
    Eigen::VectorXd zdraw(p);
    for (Eigen::Index i = 0; i < p; ++i) zdraw[i] = rng.normal();
    const double g = rng.chi2(df);
    return s.beta_hat + std::sqrt(scale * df / g) *
                            (llt.matrixL() * zdraw).eval();
}

PosteriorDraws sample_posterior(const SpatialDataset& data,
                                const CorrelationModel& model,
                                const PriorSpec& prior,
                                const SamplerConfig& config) {
    validate(config);
    const MarginalKernel kernel(data, model, prior);

    PosteriorDraws out = config.mode == SamplerMode::metropolis
                             ? run_metropolis(kernel, data, prior, config)
                             : run_grid(kernel, data, prior, config);
    out.seed = config.seed;

    json meta;
    meta["model"] = tsr::to_json(model);
    meta["prior"] = tsr::to_json(prior);
    meta["sampler"] = tsr::to_json(config);
    out.config_digest = config_digest(meta);

    if (prior.kind == PriorKind::reference &&
        check_propriety(model, prior.a, data.has_intercept, prior.nu_lower) ==
            Propriety::not_guaranteed) {
        out.warnings.emplace_back(
            "posterior propriety not guaranteed for this family/design/a "
            "combination");
    }
    if (prior.kind == PriorKind::reference) {
        out.warnings.emplace_back(
            "range parameter restricted to phi <= phi_max (default 10 x max "
            "pairwise distance); the marginal kernel can decay as slowly as "
            "1/phi in the range (power-exponential and matern at a = 1), "
            "which is not integrable without the cap");
    }
    return out;
}

PredictionSummary predict(const PosteriorDraws& draws,
                          const SpatialDataset& data,
                          const CorrelationModel& model,
                          const Eigen::Ref<const Eigen::MatrixXd>& new_coords,
                          const Eigen::Ref<const Eigen::MatrixXd>& new_X,
                          double level, std::uint64_t seed) {
    const Eigen::Index M = draws.size();
    const Eigen::Index n = data.n();
    const Eigen::Index n0 = new_coords.rows();
    if (M < 1) throw ConfigError("prediction requires at least one draw");
    if (new_coords.cols() != 2)
        throw DataError("new locations must be n0 x 2 coordinates");
    if (new_X.rows() != n0 || new_X.cols() != data.p())
        throw DataError("new design matrix shape does not match");
    if (!(level > 0.0 && level < 1.0))
        throw ConfigError("interval level must lie in (0,1)");

    // distances from each new location to the observed ones
    Eigen::MatrixXd DN(n0, n);
    for (Eigen::Index j = 0; j < n0; ++j)
        for (Eigen::Index i = 0; i < n; ++i)
            DN(j, i) = (new_coords.row(j) - data.coords.row(i)).norm();

    // coincident new locations are exact interpolants of the no-nugget model
    std::vector<Eigen::Index> coincident(n0, -1);
    for (Eigen::Index j = 0; j < n0; ++j)
        for (Eigen::Index i = 0; i < n; ++i)
            if (DN(j, i) < 1e-12) {
                coincident[j] = i;
                break;
            }

    // group draws by phi so each distinct correlation matrix is factored once
    std::unordered_map<std::uint64_t, std::vector<Eigen::Index>> groups;
    for (Eigen::Index d = 0; d < M; ++d) {
        std::uint64_t key;
        const double phi = draws.phi[d];
        static_assert(sizeof(key) == sizeof(phi));
        std::memcpy(&key, &phi, sizeof(key));
        groups[key].push_back(d);
    }

    Eigen::VectorXd mean_acc = Eigen::VectorXd::Zero(n0);
    std::vector<std::vector<double>> samples(
        static_cast<size_t>(n0), std::vector<double>(static_cast<size_t>(M)));

    for (const auto& [key, members] : groups) {
        const double phi = draws.phi[members.front()];
        const CorrelationModel m = model.with_phi(phi);
        const Eigen::MatrixXd R = corr_matrix(m, distance_matrix(data.coords));
        const Eigen::LLT<Eigen::MatrixXd> llt(R);
        if (llt.info() != Eigen::Success)
            throw IllConditionedError(
                "correlation matrix is not positive definite at phi=" +
                    std::to_string(phi),
                phi);

        Eigen::MatrixXd r0(n, n0);  // cross-correlations, one column per site
        for (Eigen::Index j = 0; j < n0; ++j)
            for (Eigen::Index i = 0; i < n; ++i)
                r0(i, j) = corr_value(m, DN(j, i));
        const Eigen::MatrixXd Rinv_r0 = llt.solve(r0);
        Eigen::VectorXd cj(n0);
        for (Eigen::Index j = 0; j < n0; ++j)
            cj[j] = std::max(0.0, 1.0 - r0.col(j).dot(Rinv_r0.col(j)));

        for (const Eigen::Index d : members) {
            const Eigen::VectorXd resid =
                data.y - data.X * draws.beta.row(d).transpose();
            const Eigen::VectorXd v = llt.solve(resid);
            const double q = resid.dot(v) / draws.sigma2[d];
            const double df = draws.nu[d] + static_cast<double>(n);
            const double tail_factor =
                draws.sigma2[d] * (draws.nu[d] + q) / df;
            Rng rng(derive_seed(seed, static_cast<std::uint64_t>(d)));
            for (Eigen::Index j = 0; j < n0; ++j) {
                if (coincident[j] >= 0) {
                    const double yobs = data.y[coincident[j]];
                    mean_acc[j] += yobs;
                    samples[static_cast<size_t>(j)][static_cast<size_t>(d)] =
                        yobs;
                    continue;
                }
                const double mu = new_X.row(j).dot(draws.beta.row(d)) +
                                  Rinv_r0.col(j).dot(resid);
                const double sc = std::sqrt(tail_factor * cj[j]);
                mean_acc[j] += mu;
                samples[static_cast<size_t>(j)][static_cast<size_t>(d)] =
                    mu + sc * rng.student_t(df);
            }
        }
    }

    PredictionSummary out;
    out.coords = new_coords;
    out.level = level;
    out.mean = mean_acc / static_cast<double>(M);
    out.lower.resize(n0);
    out.upper.resize(n0);
    const double alpha = 0.5 * (1.0 - level);
    for (Eigen::Index j = 0; j < n0; ++j) {
        out.lower[j] = quantile_type7(samples[static_cast<size_t>(j)], alpha);
        out.upper[j] =
            quantile_type7(samples[static_cast<size_t>(j)], 1.0 - alpha);
    }
    return out;
}

void write_draws_csv(const PosteriorDraws& draws, const std::string& path) {
    std::ofstream f(path);
    if (!f) throw DataError("cannot open " + path + " for writing");
    const Eigen::Index p = draws.beta.cols();
    for (Eigen::Index k = 0; k < p; ++k) f << "beta_" << (k + 1) << ",";
    f << "sigma2,phi,nu,log_post\n";
    char buf[32];
    const auto put = [&](double x, char sep) {
        std::snprintf(buf, sizeof(buf), "%.17g", x);
        f << buf << sep;
    };
    for (Eigen::Index i = 0; i < draws.size(); ++i) {
        for (Eigen::Index k = 0; k < p; ++k) put(draws.beta(i, k), ',');
        put(draws.sigma2[i], ',');
        put(draws.phi[i], ',');
        put(draws.nu[i], ',');
        std::snprintf(buf, sizeof(buf), "%.17g", draws.log_post[i]);
        f << buf << "\n";
    }
    if (!f) throw DataError("failed while writing " + path);
}

std::string draws_summary_json(const PosteriorDraws& draws) {
    const auto column_summary = [&](const Eigen::VectorXd& v) {
        std::vector<double> s(v.data(), v.data() + v.size());
        json j;
        j["median"] = quantile_type7(s, 0.5);
        j["lower95"] = quantile_type7(s, 0.025);
        j["upper95"] = quantile_type7(s, 0.975);
        return j;
    };
    json j;
    j["draws"] = draws.size();
    j["acceptance_rate"] = draws.acceptance_rate;
    j["seed"] = draws.seed;
    j["config_digest"] = draws.config_digest;
    j["warnings"] = draws.warnings;
    json params;
    for (Eigen::Index k = 0; k < draws.beta.cols(); ++k)
        params["beta_" + std::to_string(k + 1)] =
            column_summary(draws.beta.col(k));
    params["sigma2"] = column_summary(draws.sigma2);
    params["phi"] = column_summary(draws.phi);
    params["nu"] = column_summary(draws.nu);
    j["parameters"] = params;
    return j.dump(2) + "\n";
}

}  // namespace tsr
