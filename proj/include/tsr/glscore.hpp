#pragma once

#include <Eigen/Core>
#include <limits>

#include "tsr/dataset.hpp"

namespace tsr {

/// Per-correlation-matrix sufficient statistics of the integrated model.
/// tr_Phi / tr_Phi2 are NaN unless a derivative matrix was supplied.
struct GlsSummary {
    Eigen::VectorXd beta_hat;  // GLS estimate (X'R^-1 X)^-1 X'R^-1 y
    Eigen::MatrixXd V_beta;    // (X'R^-1 X)^-1
    double S2 = 0.0;           // z'R^-1 z / (n-p)
    double logdet_R = 0.0;
    double logdet_V = 0.0;     // log det V_beta
    Eigen::VectorXd z;         // y - X beta_hat
    double tr_Phi = std::numeric_limits<double>::quiet_NaN();
    double tr_Phi2 = std::numeric_limits<double>::quiet_NaN();
};

/// Computes GlsSummary through one Cholesky of R and one of X'R^-1X.
/// When dR (= dR/dphi) is given, also fills the projector traces
/// tr[Phi] and tr[Phi^2] with Phi = dR R^-1 P, P = I - X(X'R^-1X)^-1 X'R^-1,
/// using triangular solves only. `phi` is carried into error messages.
GlsSummary gls_summary(const SpatialDataset& data,
                       const Eigen::Ref<const Eigen::MatrixXd>& R,
                       const Eigen::Ref<const Eigen::MatrixXd>& dR =
                           Eigen::MatrixXd(0, 0),
                       double phi = std::numeric_limits<double>::quiet_NaN());

}  // namespace tsr
