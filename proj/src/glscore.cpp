#include "tsr/glscore.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <string>

#include "tsr/errors.hpp"

namespace tsr {

GlsSummary gls_summary(const SpatialDataset& data,
                       const Eigen::Ref<const Eigen::MatrixXd>& R,
                       const Eigen::Ref<const Eigen::MatrixXd>& dR, double phi) {
    const Eigen::Index n = data.n();
    const Eigen::Index p = data.p();
    if (R.rows() != n || R.cols() != n)
        throw DataError("correlation matrix shape does not match dataset");

    const Eigen::LLT<Eigen::MatrixXd> lltR(R);
    if (lltR.info() != Eigen::Success)
        throw IllConditionedError(
            "correlation matrix is not positive definite" +
                (std::isnan(phi) ? std::string()
                                 : " at phi=" + std::to_string(phi)),
            phi);
    const auto& L = lltR.matrixL();

    const Eigen::MatrixXd Xw = L.solve(data.X);  // L^-1 X
    const Eigen::VectorXd yw = L.solve(data.y);  // L^-1 y
    const Eigen::MatrixXd A = Xw.transpose() * Xw;

    const Eigen::LLT<Eigen::MatrixXd> lltA(A);
    if (lltA.info() != Eigen::Success)
        throw DesignError("X'R^-1X is not positive definite (rank-deficient design)");

    GlsSummary s;
    s.beta_hat = lltA.solve(Xw.transpose() * yw);
    s.V_beta = lltA.solve(Eigen::MatrixXd::Identity(p, p));
    s.z = data.y - data.X * s.beta_hat;
    const Eigen::VectorXd zw = L.solve(s.z);
    s.S2 = zw.squaredNorm() / static_cast<double>(n - p);
    s.logdet_R = 2.0 * lltR.matrixLLT().diagonal().array().log().sum();
    s.logdet_V = -2.0 * lltA.matrixLLT().diagonal().array().log().sum();
    // rounding floor: an exact-fit z comes back as O(eps * ||y||), not 0
    const double eps = std::numeric_limits<double>::epsilon();
    const double s2_floor = 100.0 * static_cast<double>(n) * eps * eps *
                            yw.squaredNorm() / static_cast<double>(n - p);
    if (!(s.S2 > s2_floor))
        throw DataError("residual scale S2 is zero: y lies in the design column "
                        "space, model unidentified");

    if (dR.size() > 0) {
        if (dR.rows() != n || dR.cols() != n)
            throw DataError("derivative matrix shape does not match dataset");
        const Eigen::MatrixXd W = lltR.solve(dR);           // R^-1 dR
        const Eigen::MatrixXd W1 = lltR.solve(data.X);      // R^-1 X
        const Eigen::MatrixXd E = dR * W1;                  // dR R^-1 X
        const Eigen::MatrixXd F = lltR.solve(E);            // R^-1 dR R^-1 X
        const Eigen::MatrixXd G = W1.transpose() * E;       // X'R^-1 dR R^-1 X
        const Eigen::MatrixXd AinvG = lltA.solve(G);
        s.tr_Phi = W.trace() - AinvG.trace();
        s.tr_Phi2 = W.cwiseProduct(W.transpose()).sum() -
                    2.0 * lltA.solve(E.transpose() * F).trace() +
                    (AinvG * AinvG).trace();
    }
    return s;
}

}  // namespace tsr
