#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>
#include <random>
#include <vector>

#include "../tests/data/reference_values.hpp"
#include "tsr/corr.hpp"
#include "tsr/dataset.hpp"
#include "tsr/errors.hpp"
#include "tsr/priors.hpp"
#include "tsr/quadrature.hpp"

using namespace tsr;
namespace ref = tsrtest::ref;

namespace {
const std::string kDataDir = TSR_TEST_DATA_DIR;

double det3(const FisherBlocks& fb) {
    Eigen::Matrix3d M;
    M << fb.B / 2.0, fb.B11 / 4.0, fb.B12,
         fb.B11 / 4.0, fb.C / 4.0, fb.C11,
         fb.B12, fb.C11, fb.D / 4.0;
    return M.determinant();
}
}  // namespace

TEST_CASE("fisher blocks, degenerate and exact-arithmetic cases") {
    const FisherBlocks z = fisher_blocks(5.0, 100, 1, 0.0, 0.0);
    CHECK(z.B11 == 0.0);
    CHECK(z.C11 == 0.0);
    CHECK(z.C == 0.0);
    CHECK(z.A_term == 0.0);
    CHECK(z.B == doctest::Approx(495.0 / 106.0).epsilon(1e-15));
    CHECK(z.tau_nu == 106.0);
    CHECK_THROWS_AS(fisher_blocks(4.0, 100, 1, 0.0, 0.0), SupportError);
    CHECK_THROWS_AS(fisher_blocks(5.0, 3, 3, 0.0, 0.0), ConfigError);
}

TEST_CASE("fisher blocks match the arbitrary-precision oracle") {
    const FisherBlocks fb =
        fisher_blocks(5.0, 100, 1, ref::kLatticeTrPhi, ref::kLatticeTrPhi2);
    CHECK(fb.B == doctest::Approx(ref::kLatticeBlock_B).epsilon(1e-13));
    CHECK(fb.C == doctest::Approx(ref::kLatticeBlock_C).epsilon(1e-13));
    CHECK(fb.D == doctest::Approx(ref::kLatticeBlock_D).epsilon(1e-12));
    CHECK(fb.B11 == doctest::Approx(ref::kLatticeBlock_B11).epsilon(1e-13));
    CHECK(fb.B12 == doctest::Approx(ref::kLatticeBlock_B12).epsilon(1e-13));
    CHECK(fb.C11 == doctest::Approx(ref::kLatticeBlock_C11).epsilon(1e-13));
    CHECK(fb.delta1 == doctest::Approx(ref::kLatticeBlock_delta1).epsilon(1e-12));
    CHECK(fb.A_term == doctest::Approx(ref::kLatticeBlock_A).epsilon(1e-13));
    CHECK(reference_bracket(fb) ==
          doctest::Approx(ref::kLatticeBlock_bracket).epsilon(1e-12));
    CHECK(log_reference_prior_from_traces(5.0, 100, 1, ref::kLatticeTrPhi,
                                          ref::kLatticeTrPhi2) ==
          doctest::Approx(ref::kLatticeBlock_logprior).epsilon(1e-13));
}

TEST_CASE("D block equals the nu-score information computed by quadrature") {
    // Oracle values integrate E[(d/dnu log f)^2] for the m-dim standard t
    // directly, with no use of the closed-form expectations.
    for (const auto& row : ref::kNuScoreInfoTimes4) {
        const int m = static_cast<int>(row[0]);
        const FisherBlocks fb = fisher_blocks(row[1], m + 1, 1, 0.0, 0.0);
        CHECK(fb.D == doctest::Approx(row[2]).epsilon(1e-12));
    }
}

TEST_CASE("full prior path matches the n10 oracles") {
    const SpatialDataset d = read_dataset_csv(kDataDir + "/dataset_n10.csv");
    CHECK(log_reference_prior(2.0, 5.0, d,
                              CorrelationModel{CorrFamily::matern, 2.0, 1.5}) ==
          doctest::Approx(ref::kN10Matern_logprior).epsilon(1e-9));
    CHECK(log_reference_prior(
              1.5, 6.0, d,
              CorrelationModel{CorrFamily::power_exponential, 1.5, 1.3}) ==
          doctest::Approx(ref::kN10Powexp_logprior).epsilon(1e-9));
}

TEST_CASE("bracket is proportional to the 3x3 information determinant") {
    std::mt19937_64 rng(2024);
    std::uniform_real_distribution<double> unu(4.6, 60.0);
    std::uniform_int_distribution<int> un(8, 300);
    std::uniform_int_distribution<int> up(1, 6);
    std::uniform_real_distribution<double> utr(-50.0, 50.0);
    std::uniform_real_distribution<double> utr2(0.1, 120.0);
    double ratio0 = 0.0;
    for (int rep = 0; rep < 20; ++rep) {
        const int n = un(rng);
        const int p = up(rng);
        const FisherBlocks fb =
            fisher_blocks(unu(rng), n, p, utr(rng), utr2(rng));
        const double ratio = reference_bracket(fb) / det3(fb);
        if (rep == 0) ratio0 = ratio;
        CAPTURE(rep);
        CHECK(std::fabs(ratio - ratio0) < 1e-8 * std::fabs(ratio0));
    }
    CHECK(ratio0 == doctest::Approx(32.0).epsilon(1e-10));
}

TEST_CASE("reference prior nu tail decays with exponent -2") {
    // The rational part of the D block cancels the trigamma difference
    // through order nu^-3, so D and the determinant bracket are Theta(nu^-4)
    // at fixed traces and the kernel tail is nu^-2 (integrable in nu).
    // Both expected values were computed in 50-digit arithmetic.
    const int n = 100, p = 1;
    const auto logpi = [&](double nu) {
        return log_reference_prior_from_traces(nu, n, p, ref::kLatticeTrPhi,
                                               ref::kLatticeTrPhi2);
    };
    const double ratio = logpi(2e4) - logpi(1e4);
    CHECK(std::fabs(ratio - ref::kLatticeTailRatio1e4) < 1e-6);
    CHECK(std::fabs(ratio + 2.0 * std::log(2.0)) < 0.01);

    // least-squares slope of log pi vs log nu on the oracle's 9-point grid
    std::vector<double> lx, ly;
    for (int i = 0; i < 9; ++i) {
        const double nu = 1e3 * std::pow(10.0, i / 4.0);
        lx.push_back(std::log(nu));
        ly.push_back(logpi(nu));
    }
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    const double m = static_cast<double>(lx.size());
    for (size_t i = 0; i < lx.size(); ++i) {
        sx += lx[i];
        sy += ly[i];
        sxx += lx[i] * lx[i];
        sxy += lx[i] * ly[i];
    }
    const double slope = (m * sxy - sx * sy) / (m * sxx - sx * sx);
    CHECK(std::fabs(slope - ref::kLatticeTailSlope) < 1e-6);

    // far tail: local slope approaches the limit while doubles can still
    // resolve the trigamma cancellation inside D
    const double local = (logpi(4e5) - logpi(2e5)) / std::log(2.0);
    CHECK(std::fabs(local + 2.0) < 0.01);

    // beyond that the determinant drowns in round-off; the kernel must not
    // fault and must keep the mass negligible (true value is about -32)
    CHECK(logpi(1e9) <= -20.0);
}

TEST_CASE("reference prior support and degenerate handling") {
    CHECK(log_reference_prior_from_traces(4.05, 100, 1, ref::kLatticeTrPhi,
                                          ref::kLatticeTrPhi2) ==
          -std::numeric_limits<double>::infinity());
    // zero traces: zero information in phi, prior mass collapses
    CHECK(log_reference_prior_from_traces(5.0, 100, 1, 0.0, 0.0) ==
          -std::numeric_limits<double>::infinity());
    // inconsistent traces drive the determinant genuinely negative
    CHECK_THROWS_AS(
        log_reference_prior_from_traces(5.0, 100, 1, 0.0, -40.0),
        std::runtime_error);
}

TEST_CASE("reference prior ignores the response vector") {
    const SpatialDataset d = read_dataset_csv(kDataDir + "/dataset_n10.csv");
    SpatialDataset d2 = d;
    d2.y = d.y.array() * 3.7 - 11.0;
    const CorrelationModel m{CorrFamily::cauchy, 1.2, 0.7};
    CHECK(log_reference_prior(1.2, 7.3, d, m) ==
          log_reference_prior(1.2, 7.3, d2, m));
}

TEST_CASE("vague prior density") {
    const PriorSpec spec = PriorSpec::vague();
    CHECK(log_vague_prior(0.05, 5.0, spec) ==
          -std::numeric_limits<double>::infinity());
    CHECK(log_vague_prior(4.73, 5.0, spec) ==
          -std::numeric_limits<double>::infinity());
    CHECK(log_vague_prior(1.0, 4.0, spec) ==
          -std::numeric_limits<double>::infinity());

    // t = 0 limit: density of nu is the mean of lambda over its range
    const double at_floor = log_vague_prior(1.0, 4.1, spec);
    CHECK(at_floor == doctest::Approx(std::log(0.13) - std::log(4.62))
                          .epsilon(1e-12));

    // interior values match direct quadrature of the lambda integral
    for (double nu : {4.100001, 4.11, 4.14, 4.5, 10.0, 55.0, 300.0}) {
        const double t = nu - 4.1;
        const QuadResult q = integrate(
            [t](double lam) { return lam * std::exp(-lam * t); }, 0.01, 0.25,
            1e-13);
        const double expected = std::log(q.value / 0.24) - std::log(4.62);
        CAPTURE(nu);
        CHECK(std::fabs(log_vague_prior(1.0, nu, spec) - expected) < 1e-10);
    }
}

TEST_CASE("vague nu density integrates to one") {
    const PriorSpec spec = PriorSpec::vague();
    const QuadResult q = integrate(
        [&](double nu) {
            return std::exp(log_vague_prior(1.0, nu, spec) + std::log(4.62));
        },
        4.1, 6000.0, 1e-10, 0.0, 4000);
    CHECK(q.converged);
    // tail beyond 6000: bounded by exp(-lambda_lo * t) ~ exp(-59.96)
    CHECK(q.value == doctest::Approx(1.0).epsilon(1e-8));
}

TEST_CASE("propriety table") {
    const double nl = 4.1;
    const auto sph = [&](double a, bool ic) {
        return check_propriety(CorrelationModel{CorrFamily::spherical, 1.0, 1.0},
                               a, ic, nl);
    };
    const auto pex = [&](double a, bool ic, double k = 1.0) {
        return check_propriety(
            CorrelationModel{CorrFamily::power_exponential, 1.0, k}, a, ic, nl);
    };
    const auto cau = [&](double a, bool ic) {
        return check_propriety(CorrelationModel{CorrFamily::cauchy, 1.0, 1.0}, a,
                               ic, nl);
    };
    const auto mat = [&](double a, bool ic, double k) {
        return check_propriety(CorrelationModel{CorrFamily::matern, 1.0, k}, a,
                               ic, nl);
    };

    // intercept column present
    CHECK(sph(-0.5, true) == Propriety::proper);
    CHECK(sph(-1.0, true) == Propriety::not_guaranteed);
    CHECK(pex(0.1, true) == Propriety::proper);
    CHECK(pex(0.0, true) == Propriety::not_guaranteed);
    CHECK(cau(0.1, true) == Propriety::proper);
    CHECK(cau(0.0, true) == Propriety::not_guaranteed);
    CHECK(mat(0.1, true, 0.5) == Propriety::proper);   // bound 2 - 1/k = 0
    CHECK(mat(0.0, true, 0.5) == Propriety::not_guaranteed);
    CHECK(mat(0.8, true, 0.8) == Propriety::proper);   // bound 0.75
    CHECK(mat(0.75, true, 0.8) == Propriety::not_guaranteed);
    CHECK(mat(1.1, true, 1.0) == Propriety::proper);   // bound 1/k = 1
    CHECK(mat(1.0, true, 1.0) == Propriety::not_guaranteed);
    CHECK(mat(0.5, true, 2.5) == Propriety::proper);   // bound 0.4
    CHECK(mat(0.4, true, 2.5) == Propriety::not_guaranteed);

    // no intercept: uniform 1/2 < a bound
    CHECK(sph(0.6, false) == Propriety::proper);
    CHECK(sph(0.5, false) == Propriety::not_guaranteed);
    CHECK(pex(0.5, false) == Propriety::not_guaranteed);
    CHECK(pex(0.6, false) == Propriety::proper);
    CHECK(cau(0.5, false) == Propriety::not_guaranteed);
    CHECK(mat(0.5, false, 2.0) == Propriety::not_guaranteed);
    CHECK(mat(0.51, false, 2.0) == Propriety::proper);

    // upper bound a < nu/2 + 1 at nu = nu_lower (3.05 here)
    CHECK(sph(3.0, true) == Propriety::proper);
    CHECK(sph(3.05, true) == Propriety::not_guaranteed);
    CHECK(sph(3.1, true) == Propriety::not_guaranteed);

    CHECK_THROWS_AS(check_propriety(
                        CorrelationModel{CorrFamily::matern, 1.0, 0.5}, 1.0,
                        true, 4.0),
                    SupportError);
}

TEST_CASE("prior spec validation") {
    PriorSpec r = PriorSpec::reference();
    CHECK_NOTHROW(validate(r));
    r.a = 1.5;
    CHECK_THROWS_AS(validate(r), ConfigError);
    PriorSpec v = PriorSpec::vague();
    CHECK_NOTHROW(validate(v));
    v.phi_bounds = {2.0, 1.0};
    CHECK_THROWS_AS(validate(v), ConfigError);
    v = PriorSpec::vague();
    v.nu_lower = 3.9;
    CHECK_THROWS_AS(validate(v), ConfigError);
    v = PriorSpec::vague();
    v.a = 3.2;  // >= nu_lower/2 + 1
    CHECK_THROWS_AS(validate(v), ConfigError);
}
