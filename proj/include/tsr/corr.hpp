#pragma once

#include <Eigen/Core>
#include <string>
#include <string_view>

namespace tsr {

enum class CorrFamily { spherical, power_exponential, cauchy, matern };

std::string family_name(CorrFamily f);
CorrFamily family_from_name(std::string_view name);

/// Isotropic correlation kernel: family, range phi, shape kappa.
/// kappa is ignored for the spherical family.
struct CorrelationModel {
    CorrFamily family = CorrFamily::matern;
    double phi = 1.0;
    double kappa = 0.5;

    CorrelationModel with_phi(double new_phi) const {
        CorrelationModel m = *this;
        m.phi = new_phi;
        return m;
    }
};

/// Throws ConfigError unless phi > 0, kappa > 0, and for the power
/// exponential family kappa <= 2.
void validate(const CorrelationModel& m);

/// Pairwise Euclidean distances between rows of coords (n x dim).
Eigen::MatrixXd distance_matrix(const Eigen::Ref<const Eigen::MatrixXd>& coords);

/// rho(d) in [0,1] with rho(0) = 1.
double corr_value(const CorrelationModel& m, double d);

/// d rho / d phi at a single distance.
double corr_deriv_phi_value(const CorrelationModel& m, double d);

/// Entrywise corr_value over a distance matrix; unit diagonal.
Eigen::MatrixXd corr_matrix(const CorrelationModel& m,
                            const Eigen::Ref<const Eigen::MatrixXd>& D);

/// Entrywise analytic d rho / d phi; zero diagonal.
Eigen::MatrixXd corr_deriv_phi(const CorrelationModel& m,
                               const Eigen::Ref<const Eigen::MatrixXd>& D);

}  // namespace tsr
