#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>
#include <random>
#include <stdexcept>
#include <vector>

#include "tsr/corr.hpp"
#include "tsr/errors.hpp"

using namespace tsr;

namespace {

CorrelationModel make(CorrFamily f, double phi, double kappa = 1.0) {
    return CorrelationModel{f, phi, kappa};
}

double fd_deriv(const CorrelationModel& m, double d, double h = 1e-6) {
    return (corr_value(m.with_phi(m.phi + h), d) -
            corr_value(m.with_phi(m.phi - h), d)) /
           (2.0 * h);
}

Eigen::MatrixXd random_coords(int n, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(0.0, 10.0);
    Eigen::MatrixXd c(n, 2);
    for (int i = 0; i < n; ++i) {
        c(i, 0) = u(rng);
        c(i, 1) = u(rng);
    }
    return c;
}

}  // namespace

TEST_CASE("scalar values at known points") {
    CHECK(corr_value(make(CorrFamily::matern, 2.0, 0.5), 2.0) ==
          doctest::Approx(std::exp(-1.0)).epsilon(1e-13));
    CHECK(corr_value(make(CorrFamily::spherical, 2.0), 3.0) == 0.0);
    CHECK(corr_value(make(CorrFamily::spherical, 2.0), 1.0) ==
          doctest::Approx(1.0 - 0.75 + 0.0625).epsilon(1e-14));
    CHECK(corr_value(make(CorrFamily::power_exponential, 2.0, 1.0), 2.0) ==
          doctest::Approx(std::exp(-1.0)).epsilon(1e-14));
    CHECK(corr_value(make(CorrFamily::cauchy, 1.0, 2.0), 1.0) ==
          doctest::Approx(0.25).epsilon(1e-14));
    for (CorrFamily f : {CorrFamily::spherical, CorrFamily::power_exponential,
                         CorrFamily::cauchy, CorrFamily::matern}) {
        CHECK(corr_value(make(f, 1.7, 0.8), 0.0) == 1.0);
    }
}

TEST_CASE("scalar derivative at known points") {
    CHECK(corr_deriv_phi_value(make(CorrFamily::power_exponential, 2.0, 1.0), 2.0) ==
          doctest::Approx(0.5 * std::exp(-1.0)).epsilon(1e-14));
    for (CorrFamily f : {CorrFamily::spherical, CorrFamily::power_exponential,
                         CorrFamily::cauchy, CorrFamily::matern}) {
        CHECK(corr_deriv_phi_value(make(f, 1.3, 1.1), 0.0) == 0.0);
    }
    const CorrelationModel m = make(CorrFamily::matern, 1.0, 1.5);
    const double analytic = corr_deriv_phi_value(m, 0.7);
    CHECK(std::fabs(analytic - fd_deriv(m, 0.7)) / std::fabs(analytic) < 1e-6);
}

TEST_CASE("derivative matches finite differences across families") {
    std::mt19937_64 rng(71);
    std::uniform_real_distribution<double> uphi(0.5, 5.0);
    std::uniform_real_distribution<double> ud(0.05, 6.0);
    std::uniform_real_distribution<double> ukap(0.3, 3.0);
    for (CorrFamily f : {CorrFamily::spherical, CorrFamily::power_exponential,
                         CorrFamily::cauchy, CorrFamily::matern}) {
        for (int rep = 0; rep < 40; ++rep) {
            double kappa = ukap(rng);
            if (f == CorrFamily::power_exponential && kappa > 2.0) kappa -= 1.5;
            const CorrelationModel m = make(f, uphi(rng), kappa);
            double d = ud(rng);
            if (f == CorrFamily::spherical && std::fabs(d - m.phi) < 1e-3 * m.phi)
                d += 0.1 * m.phi;
            CAPTURE(static_cast<int>(f));
            CAPTURE(m.phi);
            CAPTURE(m.kappa);
            CAPTURE(d);
            const double a = corr_deriv_phi_value(m, d);
            const double fd = fd_deriv(m, d);
            // 1e-9 absolute floor: the FD oracle itself carries ~eps/(2h)
            // rounding noise, which dominates when the derivative is tiny
            CHECK(std::fabs(a - fd) < 1e-6 * std::fabs(fd) + 1e-9);
        }
    }
}

TEST_CASE("matrix builders agree with scalar evaluation") {
    Eigen::MatrixXd coords(3, 2);
    coords << 0.0, 0.0, 1.0, 0.0, 0.0, 2.0;
    const Eigen::MatrixXd D = distance_matrix(coords);
    CHECK(D(0, 1) == doctest::Approx(1.0));
    CHECK(D(0, 2) == doctest::Approx(2.0));
    CHECK(D(1, 2) == doctest::Approx(std::sqrt(5.0)));
    CHECK(D.diagonal().isZero(0.0));
    CHECK(D.isApprox(D.transpose()));

    const CorrelationModel m = make(CorrFamily::matern, 1.7, 1.0);
    const Eigen::MatrixXd R = corr_matrix(m, D);
    const Eigen::MatrixXd dR = corr_deriv_phi(m, D);
    for (int i = 0; i < 3; ++i) {
        CHECK(R(i, i) == 1.0);
        CHECK(dR(i, i) == 0.0);
        for (int j = 0; j < i; ++j) {
            CHECK(R(i, j) == corr_value(m, D(i, j)));
            CHECK(dR(i, j) == corr_deriv_phi_value(m, D(i, j)));
            CHECK(R(i, j) == R(j, i));
        }
    }

    const Eigen::MatrixXd zero = Eigen::MatrixXd::Zero(4, 4);
    CHECK(corr_matrix(m, zero).isOnes(0.0));
}

TEST_CASE("correlation matrices are positive semidefinite") {
    std::mt19937_64 rng(1234);
    const std::vector<CorrelationModel> models = {
        make(CorrFamily::spherical, 3.0),
        make(CorrFamily::power_exponential, 2.0, 1.4),
        make(CorrFamily::cauchy, 1.5, 0.8),
        make(CorrFamily::matern, 2.0, 0.5),
        make(CorrFamily::matern, 1.0, 2.3),
    };
    for (const auto& m : models) {
        const Eigen::MatrixXd D = distance_matrix(random_coords(25, rng));
        Eigen::MatrixXd R = corr_matrix(m, D);
        R = 0.5 * (R + R.transpose()).eval();
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(R);
        CAPTURE(family_name(m.family));
        CHECK(es.eigenvalues().minCoeff() >= -1e-8);
    }
}

TEST_CASE("matern half-integer reduces to exponential") {
    std::mt19937_64 rng(99);
    const Eigen::MatrixXd D = distance_matrix(random_coords(20, rng));
    const Eigen::MatrixXd Rm = corr_matrix(make(CorrFamily::matern, 1.8, 0.5), D);
    const Eigen::MatrixXd Re =
        corr_matrix(make(CorrFamily::power_exponential, 1.8, 1.0), D);
    CHECK((Rm - Re).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("validation and domain errors") {
    CHECK_THROWS_AS(validate(make(CorrFamily::matern, -1.0, 0.5)), ConfigError);
    CHECK_THROWS_AS(validate(make(CorrFamily::matern, 1.0, 0.0)), ConfigError);
    CHECK_THROWS_AS(validate(make(CorrFamily::power_exponential, 1.0, 2.5)),
                    ConfigError);
    CHECK_NOTHROW(validate(make(CorrFamily::spherical, 1.0, -5.0)));
    CHECK_THROWS_AS(corr_value(make(CorrFamily::cauchy, 1.0, 1.0), -0.1),
                    std::domain_error);
    CHECK_THROWS_AS(family_from_name("gaussian"), ConfigError);
    CHECK(family_from_name(family_name(CorrFamily::power_exponential)) ==
          CorrFamily::power_exponential);
}
