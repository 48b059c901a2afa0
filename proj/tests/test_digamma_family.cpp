#include <gtest/gtest.h>

#include <boost/math/special_functions/digamma.hpp>
#include <boost/math/special_functions/polygamma.hpp>
#include <boost/math/special_functions/zeta.hpp>

#include <cmath>
#include <limits>
#include <numbers>

#include "pqspecial/digamma_family.hpp"
#include "pqspecial/errors.hpp"
#include "pqspecial/oracle.hpp"

namespace {

using namespace pqspecial;

constexpr double kLn2 = std::numbers::ln2;
constexpr double kGamma = 0.57721566490153286061;

double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

TEST(DerivativeOrder, Range) {
    EXPECT_THROW(DerivativeOrder(-1), OrderError);
    EXPECT_THROW(DerivativeOrder(DerivativeOrder::kMax + 1), OrderError);
    EXPECT_TRUE(DerivativeOrder(3).is_odd());
    EXPECT_FALSE(DerivativeOrder(0).is_odd());
}

// Single-term examples of the printed (Lambert-type) series.
TEST(PsiPQTruncated, SingleTermValues) {
    const PQParams pq(1, 0.5);
    EXPECT_NEAR(psi_pq(1.0, pq, DigammaSeries::truncated).value, -kLn2, 1e-15);
    EXPECT_NEAR(psi_pq(2.0, pq, DigammaSeries::truncated).value, -kLn2 / 2.0, 1e-15);
    EXPECT_NEAR(psi_pq_m(1.0, pq, DerivativeOrder(1), DigammaSeries::truncated).value, kLn2 * kLn2, 1e-15);
    EXPECT_NEAR(psi_pq_m(1.0, pq, DerivativeOrder(2), DigammaSeries::truncated).value, -kLn2 * kLn2 * kLn2, 1e-15);
}

TEST(PsiPQExact, RationalCrossCheck) {
    // ln[2]_q + ln q (q^2/(1-q^2) + q^3/(1-q^3) + q^4/(1-q^4)) at q = 1/2.
    const double expected = std::log(1.5) + std::log(0.5) * (1.0 / 3.0 + 1.0 / 7.0 + 1.0 / 15.0);
    EXPECT_NEAR(psi_pq(2.0, PQParams(2, 0.5)).value, expected, 1e-16);
    EXPECT_NEAR(expected, 0.02918521008990835686580139, 1e-16);
}

TEST(PsiPQExact, DerivedValues) {
    // mpmath, 40 digits, d/dt of the defining product.
    EXPECT_NEAR(psi_pq(1.5, PQParams(50, 0.8)).value, 0.036312329152237414337, 1e-15);
    EXPECT_NEAR(psi_pq_m(2.0, PQParams(100, 0.9), DerivativeOrder(3)).value, 0.49393784075771575972,
                1e-14);
    EXPECT_NEAR(psi_pq(1.0, PQParams(1000, 0.9)).value, -0.5512609375533712900444297, 1e-15);
}

TEST(PsiPQExact, IsDerivativeOfLogGamma) {
    oracle::FDScheme scheme;
    scheme.order = oracle::FDOrder::fourth;
    const PQParams pq(100, 0.9);
    const auto fd = oracle::fd_derivative([&](double x) { return log_gamma_pq(x, pq); }, 1.5, scheme);
    EXPECT_LT(rel(fd.value, psi_pq(1.5, pq).value), 1e-6);
}

TEST(PsiPQExact, MatchesHighPrecisionOracle) {
    for (const double t : {0.01, 0.4, 3.0, 45.0}) {
        for (const std::int64_t p : {1, 7, 2500}) {
            for (const double q : {0.05, 0.6, 0.995}) {
                const PQParams pq(p, q);
                for (int m = 0; m <= 12; ++m) {
                    const double hp = oracle::to_double(oracle::hp_psi_pq(t, pq, oracle::Precision(30), m));
                    const double v = polygamma_pq(t, pq, m).value;
                    EXPECT_LT(rel(v, hp), 1e-12) << "t=" << t << " p=" << p << " q=" << q << " m=" << m;
                }
            }
        }
    }
}

TEST(PsiPQTruncated, MatchesHighPrecisionOracle) {
    for (const double t : {0.3, 2.0}) {
        for (const int m : {0, 1, 4}) {
            const PQParams pq(40, 0.7);
            const double hp =
                oracle::to_double(oracle::hp_psi_pq(t, pq, oracle::Precision(30), m, DigammaSeries::truncated));
            EXPECT_LT(rel(polygamma_pq(t, pq, m, DigammaSeries::truncated).value, hp), 1e-13);
        }
    }
}

TEST(PsiPQ, HighOrdersStayFinite) {
    const auto r = psi_pq_m(0.05, PQParams(1000, 0.999), DerivativeOrder(60));
    EXPECT_TRUE(std::isfinite(r.value));
    EXPECT_LT(r.value, 0.0);
    const auto tiny = psi_pq_m(50.0, PQParams(10, 0.01), DerivativeOrder(25));
    EXPECT_GT(tiny.value, 0.0);
}

TEST(PsiPQ, OrderRouting) {
    const PQParams pq(3, 0.5);
    EXPECT_DOUBLE_EQ(polygamma_pq(1.2, pq, 0).value, psi_pq(1.2, pq).value);
    EXPECT_DOUBLE_EQ(polygamma_pq(1.2, pq, 2).value, psi_pq_m(1.2, pq, DerivativeOrder(2)).value);
    try {
        (void)psi_pq_m(1.0, pq, DerivativeOrder(0));
        FAIL() << "m = 0 accepted";
    } catch (const OrderError& e) {
        EXPECT_NE(std::string(e.what()).find("psi_pq"), std::string::npos);
    }
    EXPECT_THROW((void)psi_pq(0.0, pq), DomainError);
    EXPECT_THROW((void)polygamma_pq(1.0, pq, 61), OrderError);
}

TEST(PsiPQ, ResultMetadata) {
    const auto r = psi_pq(1.0, PQParams(100, 0.9));
    EXPECT_EQ(r.terms_used, 101);
    EXPECT_GT(r.est_round_err, 0.0);
    EXPECT_LT(r.est_round_err, 1e-13);
}

TEST(PsiP, TrivialValues) {
    EXPECT_DOUBLE_EQ(psi_p(1.0, 1), -1.5);
    EXPECT_NEAR(psi_p(1.0, 2), kLn2 - (1.0 + 0.5 + 1.0 / 3.0), 1e-15);
    EXPECT_THROW((void)psi_p(1.0, 0), DomainError);
}

TEST(PsiP, DerivedValue) {
    // mpmath: ln 1e5 - sum_{k=0..1e5} 1/(3.7+k)
    EXPECT_NEAR(psi_p(3.7, 100000), 1.167111540239320429, 1e-13);
    oracle::FDScheme scheme;
    scheme.order = oracle::FDOrder::fourth;
    const auto fd = oracle::fd_derivative([](double x) { return log_gamma_p(x, 100000); }, 3.7, scheme);
    EXPECT_LT(rel(fd.value, psi_p(3.7, 100000)), 1e-8);
}

TEST(PsiQ, LargePLimitOfPsiPQ) {
    const QParam q(0.5);
    EXPECT_NEAR(psi_q(1.0, q).value, psi_pq(1.0, PQParams(10000, q)).value, 1e-10);
    // mpmath: d/dt log qgamma(t, 0.5)
    EXPECT_NEAR(psi_q(1.0, q).value, -0.42052903435604577978, 1e-15);
    EXPECT_NEAR(psi_q(2.0, q).value, 0.27261814620389952963, 1e-15);
}

TEST(PsiQ, RecurrenceAndFiniteDifference) {
    const QParam q(0.5);
    // psi_q(t+1) - psi_q(t) = -ln q * q^t / (1 - q^t)
    EXPECT_NEAR(psi_q(2.0, q).value - psi_q(1.0, q).value, -std::log(0.5) * 0.5 / 0.5, 1e-15);
    oracle::FDScheme scheme;
    scheme.order = oracle::FDOrder::fourth;
    const auto fd = oracle::fd_derivative([&](double x) { return log_gamma_q(x, q).value; }, 2.0, scheme);
    EXPECT_LT(rel(fd.value, psi_q(2.0, q).value), 1e-9);
}

TEST(PsiQ, ShiftedConvention) {
    const QParam q(0.7);
    const double t = 1.3;
    const double diff = psi_q(t, q, {}, GammaQConvention::shifted_index).value - psi_q(t, q).value;
    // d/dt ln(1 - q^t) = -ln q q^t / (1 - q^t)
    EXPECT_NEAR(diff, -std::log(0.7) * std::pow(0.7, t) / (1.0 - std::pow(0.7, t)), 1e-14);
}

TEST(PsiQ, ApproachesClassicalAsQTendsToOne) {
    double previous = std::numeric_limits<double>::infinity();
    for (int k = 1; k <= 4; ++k) {
        const double err = std::abs(psi_q(1.0, QParam(1.0 - std::pow(10.0, -k))).value + kGamma);
        EXPECT_LT(err, previous);
        previous = err;
    }
}

TEST(PsiClassical, Anchors) {
    EXPECT_NEAR(psi_classical(1.0), -kGamma, 1e-15);
    EXPECT_NEAR(psi_classical(2.0), 1.0 - kGamma, 1e-15);
    EXPECT_NEAR(psi_classical(0.5), -kGamma - 2.0 * kLn2, 1e-14);
    EXPECT_NEAR(euler_gamma(), kGamma, 1e-15);
    EXPECT_NEAR(oracle::to_double(oracle::hp_euler_gamma()), kGamma, 1e-17);
}

TEST(PsiClassical, AgreesWithBoost) {
    for (const double t : {0.01, 0.1, 0.77, 1.5, 3.0, 9.9, 49.0, 1234.5}) {
        const double ref = boost::math::digamma(t);
        EXPECT_NEAR(psi_classical(t), ref, 2e-14 * std::max(1.0, std::abs(ref))) << t;
    }
}

TEST(PsiClassical, Recurrence) {
    for (const double t : {0.5, 1.0, 2.0, 5.0}) {
        EXPECT_NEAR(psi_classical(t + 1.0) - psi_classical(t), 1.0 / t, 1e-14);
    }
}

TEST(PsiMClassical, ZetaValues) {
    EXPECT_NEAR(psi_m_classical(1.0, DerivativeOrder(1)), std::numbers::pi * std::numbers::pi / 6.0, 1e-14);
    EXPECT_NEAR(psi_m_classical(1.0, DerivativeOrder(2)), -2.0 * boost::math::zeta(3.0), 1e-14);
    EXPECT_NEAR(psi_m_classical(2.0, DerivativeOrder(1)), std::numbers::pi * std::numbers::pi / 6.0 - 1.0, 1e-14);
}

TEST(PsiMClassical, AgreesWithBoostAndOracle) {
    for (const double t : {0.1, 0.5, 2.0, 20.0}) {
        for (int m = 1; m <= 8; ++m) {
            const double ref = boost::math::polygamma(m, t);
            const double v = psi_m_classical(t, DerivativeOrder(m));
            EXPECT_LT(rel(v, ref), 1e-13) << "t=" << t << " m=" << m;
            const double hp = oracle::to_double(oracle::hp_psi_classical(t, m));
            EXPECT_LT(rel(v, hp), 1e-13) << "t=" << t << " m=" << m;
        }
    }
    EXPECT_THROW((void)psi_m_classical(1.0, DerivativeOrder(0)), OrderError);
}

TEST(PsiMClassical, SignPattern) {
    for (const double t : {0.1, 1.0, 30.0}) {
        for (int m = 1; m <= 10; ++m) {
            const double v = psi_m_classical(t, DerivativeOrder(m));
            EXPECT_GT(m % 2 == 1 ? v : -v, 0.0);
        }
    }
}

TEST(Polylog, LogTermMatchesDirectForm) {
    // k = 0: |ln q| q^x / (1 - q^x)
    const QParam q(0.6);
    const double x = 1.7;
    const double z = std::pow(0.6, x);
    EXPECT_NEAR(detail::log_polylog_term(x, 0, q), std::log(-std::log(0.6) * z / (1.0 - z)), 1e-14);
    // k = 1: |ln q|^2 z / (1 - z)^2
    EXPECT_NEAR(detail::log_polylog_term(x, 1, q), std::log(std::pow(std::log(0.6), 2) * z / ((1 - z) * (1 - z))), 1e-14);
}

}  // namespace
