#include "tsr/corr.hpp"

#include <cmath>
#include <stdexcept>

#include "tsr/errors.hpp"
#include "tsr/specfun.hpp"

namespace tsr {

namespace {
constexpr double kLn2 = 0.69314718055994530942;
}

std::string family_name(CorrFamily f) {
    switch (f) {
        case CorrFamily::spherical: return "spherical";
        case CorrFamily::power_exponential: return "power_exponential";
        case CorrFamily::cauchy: return "cauchy";
        case CorrFamily::matern: return "matern";
    }
    throw ConfigError("unknown correlation family");
}

CorrFamily family_from_name(std::string_view name) {
    if (name == "spherical") return CorrFamily::spherical;
    if (name == "power_exponential") return CorrFamily::power_exponential;
    if (name == "cauchy") return CorrFamily::cauchy;
    if (name == "matern") return CorrFamily::matern;
    throw ConfigError("unknown correlation family: " + std::string(name));
}

void validate(const CorrelationModel& m) {
    if (!(m.phi > 0.0) || !std::isfinite(m.phi))
        throw ConfigError("correlation range phi must be positive, got " +
                          std::to_string(m.phi));
    if (m.family == CorrFamily::spherical) return;
    if (!(m.kappa > 0.0) || !std::isfinite(m.kappa))
        throw ConfigError("shape kappa must be positive, got " +
                          std::to_string(m.kappa));
    if (m.family == CorrFamily::power_exponential && m.kappa > 2.0)
        throw ConfigError("power exponential requires kappa <= 2, got " +
                          std::to_string(m.kappa));
}

Eigen::MatrixXd distance_matrix(const Eigen::Ref<const Eigen::MatrixXd>& coords) {
    const Eigen::Index n = coords.rows();
    Eigen::MatrixXd D(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        D(i, i) = 0.0;
        for (Eigen::Index j = 0; j < i; ++j) {
            const double d = (coords.row(i) - coords.row(j)).norm();
            D(i, j) = d;
            D(j, i) = d;
        }
    }
    return D;
}

double corr_value(const CorrelationModel& m, double d) {
    if (d < 0.0 || !std::isfinite(d))
        throw std::domain_error("corr_value: negative or non-finite distance");
    validate(m);
    if (d == 0.0) return 1.0;
    const double t = d / m.phi;
    switch (m.family) {
        case CorrFamily::spherical:
            return t <= 1.0 ? 1.0 - 1.5 * t + 0.5 * t * t * t : 0.0;
        case CorrFamily::power_exponential:
            return std::exp(-std::pow(t, m.kappa));
        case CorrFamily::cauchy:
            return std::pow(1.0 + t * t, -m.kappa);
        case CorrFamily::matern:
            return std::exp((1.0 - m.kappa) * kLn2 - ln_gamma(m.kappa) +
                            m.kappa * std::log(t) + log_bessel_k(m.kappa, t));
    }
    throw ConfigError("unknown correlation family");
}

double corr_deriv_phi_value(const CorrelationModel& m, double d) {
    if (d < 0.0 || !std::isfinite(d))
        throw std::domain_error("corr_deriv_phi: negative or non-finite distance");
    validate(m);
    if (d == 0.0) return 0.0;
    const double t = d / m.phi;
    switch (m.family) {
        case CorrFamily::spherical:
            return t <= 1.0 ? 1.5 * (d / (m.phi * m.phi)) * (1.0 - t * t) : 0.0;
        case CorrFamily::power_exponential: {
            const double tk = std::pow(t, m.kappa);
            return std::exp(-tk) * m.kappa * tk / m.phi;
        }
        case CorrFamily::cauchy:
            return 2.0 * m.kappa * t * t *
                   std::pow(1.0 + t * t, -m.kappa - 1.0) / m.phi;
        case CorrFamily::matern:
            // d rho/d phi = (2^{1-k}/Gamma(k)) t^{k+1} K_{k-1}(t) / phi,
            // from dK_k(u)/du = -(K_{k-1}(u)+K_{k+1}(u))/2 and the recurrence
            return std::exp((1.0 - m.kappa) * kLn2 - ln_gamma(m.kappa) +
                            (m.kappa + 1.0) * std::log(t) +
                            log_bessel_k(std::fabs(m.kappa - 1.0), t)) /
                   m.phi;
    }
    throw ConfigError("unknown correlation family");
}

namespace {

template <typename Fn>
Eigen::MatrixXd build_symmetric(const Eigen::Ref<const Eigen::MatrixXd>& D,
                                double diag, Fn&& entry) {
    if (D.rows() != D.cols())
        throw DataError("distance matrix must be square");
    const Eigen::Index n = D.rows();
    Eigen::MatrixXd M(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        M(i, i) = diag;
        for (Eigen::Index j = 0; j < i; ++j) {
            const double v = entry(D(i, j));
            M(i, j) = v;
            M(j, i) = v;
        }
    }
    return M;
}

}  // namespace

Eigen::MatrixXd corr_matrix(const CorrelationModel& m,
                            const Eigen::Ref<const Eigen::MatrixXd>& D) {
    validate(m);
    return build_symmetric(D, 1.0, [&](double d) { return corr_value(m, d); });
}

Eigen::MatrixXd corr_deriv_phi(const CorrelationModel& m,
                               const Eigen::Ref<const Eigen::MatrixXd>& D) {
    validate(m);
    return build_symmetric(D, 0.0,
                           [&](double d) { return corr_deriv_phi_value(m, d); });
}

}  // namespace tsr
