#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "pqspecial/digamma_family.hpp"
#include "pqspecial/errors.hpp"
#include "pqspecial/inequality.hpp"

namespace {

using namespace pqspecial;

constexpr double kLn2 = std::numbers::ln2;
constexpr double kGamma = 0.57721566490153286061;
constexpr double kPi2 = std::numbers::pi * std::numbers::pi;

MarginOptions truncated() {
    MarginOptions o;
    o.series = DigammaSeries::truncated;
    return o;
}

TEST(Theorem, ParseAndTraits) {
    EXPECT_EQ(parse_theorem("t3"), TheoremId::T3);
    EXPECT_EQ(parse_theorem("C4"), TheoremId::C4);
    EXPECT_THROW((void)parse_theorem("T5"), ConfigError);
    EXPECT_EQ(to_string(TheoremId::C2), "C2");
    EXPECT_TRUE(is_classical(TheoremId::C1));
    EXPECT_FALSE(uses_order(TheoremId::T1));
    EXPECT_EQ(required_parity(TheoremId::T3), 0);
    EXPECT_EQ(required_parity(TheoremId::C4), 1);
    EXPECT_FALSE(required_parity(TheoremId::C1).has_value());
}

TEST(T1, SingleTermMargin) {
    // (ln q)(q^{s+t} - q^s - q^t) / (1 - q) at q = 1/2, s = t = 1
    const auto r = t1_margin(1.0, 1.0, PQParams(1, 0.5), truncated());
    EXPECT_NEAR(r.margin, 1.0397207708399179, 1e-15);
    EXPECT_TRUE(r.holds);
}

TEST(T1, HoldsAndIsSymmetric) {
    EXPECT_TRUE(t1_margin(0.5, 2.0, PQParams(3, 0.5)).holds);
    const PQParams pq(40, 0.85);
    for (const auto& [s, t] : {std::pair{0.3, 0.9}, std::pair{1.0, 0.25}, std::pair{0.01, 0.6}}) {
        EXPECT_DOUBLE_EQ(t1_margin(s, t, pq).margin, t1_margin(t, s, pq).margin);
    }
}

TEST(T1, HypothesisOnS) {
    EXPECT_THROW((void)t1_margin(1.5, 1.0, PQParams(3, 0.5)), HypothesisError);
    EXPECT_THROW((void)t1_margin(0.5, 0.0, PQParams(3, 0.5)), DomainError);
    MarginOptions relaxed;
    relaxed.enforce_hypotheses = false;
    EXPECT_NO_THROW((void)t1_margin(1.5, 1.0, PQParams(3, 0.5), relaxed));
}

TEST(T2, SingleTermMargin) {
    const auto r = t2_margin(1.0, 1.0, 1, PQParams(1, 0.5), truncated());
    EXPECT_NEAR(r.margin, 1.5 * kLn2 * kLn2, 1e-15);
}

TEST(T2, DerivedPoints) {
    EXPECT_TRUE(t2_margin(1.0, 3.0, 3, PQParams(10, 0.9)).holds);
    EXPECT_TRUE(t2_margin(5.0, 5.0, 1, PQParams(100, 0.99)).holds);
    EXPECT_THROW((void)t2_margin(1.0, 1.0, 2, PQParams(10, 0.9)), OrderError);
}

TEST(T3, SingleTermMargin) {
    const auto r = t3_margin(1.0, 1.0, 2, PQParams(1, 0.5), truncated());
    EXPECT_NEAR(r.margin, 1.5 * kLn2 * kLn2 * kLn2, 1e-15);
}

TEST(T3, DerivedPoints) {
    EXPECT_TRUE(t3_margin(0.2, 7.0, 2, PQParams(50, 0.8)).holds);
    EXPECT_TRUE(t3_margin(0.5, 0.5, 4, PQParams(10, 0.3)).holds);
    EXPECT_THROW((void)t3_margin(1.0, 1.0, 3, PQParams(10, 0.9)), OrderError);
}

TEST(T4, SingleTermMargin) {
    // lhs = (ln2)^4 * 4 q^3, rhs = (ln2)^4 * 4 q^6 at q = 1/2.
    const auto r = t4_margin(1.0, 2.0, 1, PQParams(1, 0.5), truncated());
    const double l4 = std::pow(kLn2, 4);
    EXPECT_NEAR(r.lhs, 0.5 * l4, 1e-15);
    EXPECT_NEAR(r.rhs, 0.0625 * l4, 1e-15);
    EXPECT_NEAR(r.margin, 0.4375 * l4, 1e-15);
    ASSERT_TRUE(r.chain.has_value());
    EXPECT_TRUE(r.chain->s_side);
    EXPECT_TRUE(r.chain->t_side);
}

TEST(T4, DiagonalReducesToMonotoneDecrease) {
    const PQParams pq(20, 0.7);
    for (const double s : {0.2, 1.0, 3.0}) {
        const auto r = t4_margin(s, s, 3, pq);
        const double a = psi_pq_m(s, pq, DerivativeOrder(3)).value;
        const double b = psi_pq_m(2 * s, pq, DerivativeOrder(3)).value;
        EXPECT_EQ(r.margin >= 0.0, a >= b);
        EXPECT_TRUE(r.holds);
    }
    EXPECT_TRUE(t4_margin(0.3, 4.2, 5, PQParams(20, 0.7)).holds);
}

TEST(Classical, Anchors) {
    const auto c1 = classical_margin(TheoremId::C1, 0.5, 0.5);
    EXPECT_NEAR(c1.margin, kGamma + 4.0 * kLn2, 1e-13);
    const auto c2 = classical_margin(TheoremId::C2, 1.0, 1.0, 1);
    EXPECT_NEAR(c2.margin, kPi2 / 3.0 - (kPi2 / 6.0 - 1.0), 1e-13);
    EXPECT_THROW((void)classical_margin(TheoremId::C1, 1.0, 0.5), HypothesisError);
    EXPECT_THROW((void)classical_margin(TheoremId::T1, 0.5, 0.5), ConfigError);
}

TEST(Classical, C4DiagonalReduction) {
    for (const double s : {0.3, 2.0}) {
        const auto r = classical_margin(TheoremId::C4, s, s, 1);
        const double a = psi_m_classical(s, DerivativeOrder(1));
        const double b = psi_m_classical(2 * s, DerivativeOrder(1));
        EXPECT_NEAR(r.margin, a * a - b * b, 1e-12 * a * a);
    }
}

TEST(Evaluate, DispatchesAndValidatesInputs) {
    SampleInputs in{0.5, 2.0, 3, 0.5, std::nullopt};
    EXPECT_DOUBLE_EQ(evaluate(TheoremId::T1, in).margin, t1_margin(0.5, 2.0, PQParams(3, 0.5)).margin);
    in.m = 3;
    EXPECT_DOUBLE_EQ(evaluate(TheoremId::T4, in).margin, t4_margin(0.5, 2.0, 3, PQParams(3, 0.5)).margin);
    SampleInputs missing{0.5, 2.0, std::nullopt, 0.5, 3};
    EXPECT_THROW((void)evaluate(TheoremId::T2, missing), ConfigError);
    SampleInputs no_m{0.5, 2.0, 3, 0.5, std::nullopt};
    EXPECT_THROW((void)evaluate(TheoremId::T3, no_m), ConfigError);
}

TEST(Tolerance, ScalesWithMagnitude) {
    const auto r = t2_margin(0.01, 0.02, 5, PQParams(100, 0.9));
    EXPECT_DOUBLE_EQ(r.tol, 1e-9 * std::max({1.0, std::abs(r.lhs), std::abs(r.rhs)}));
}

TEST(Witness, SingleTermValues) {
    const PQParams pq(1, 0.5);
    EXPECT_NEAR(witness_mu_prime(1.0, 1.0, pq, DigammaSeries::truncated), -0.5 * kLn2 * kLn2, 1e-15);
    EXPECT_NEAR(witness_eta_prime(1.0, 1.0, 1, pq, DigammaSeries::truncated), 0.5 * std::pow(kLn2, 3), 1e-15);
    EXPECT_NEAR(witness_t1_limit(1.0, pq, DigammaSeries::truncated), kLn2, 1e-15);
}

TEST(Witness, T1LimitIdentityAndValue) {
    const PQParams pq(100, 0.9);
    EXPECT_EQ(witness_t1_limit(0.1, pq), -psi_pq(0.1, pq).value);
    // mpmath: -psi_{100,0.9}(0.1)
    EXPECT_NEAR(witness_t1_limit(0.1, pq), 10.350431248219533908, 1e-13);
    EXPECT_THROW((void)witness_t1_limit(1.5, pq), HypothesisError);
}

TEST(Witness, SignsAcrossParameters) {
    for (const double s : {0.05, 0.7, 4.0}) {
        for (const double t : {0.1, 1.0, 9.0}) {
            for (const double q : {0.1, 0.9, 0.999}) {
                const PQParams pq(300, q);
                EXPECT_LE(witness_mu_prime(s, t, pq), 0.0);
                EXPECT_GE(witness_eta_prime(s, t, 3, pq), 0.0);
                EXPECT_LE(witness_lambda_prime(s, t, 2, pq), 0.0);
            }
        }
    }
    EXPECT_THROW((void)witness_eta_prime(1.0, 1.0, 2, PQParams(3, 0.5)), OrderError);
    EXPECT_THROW((void)witness_lambda_prime(1.0, 1.0, 3, PQParams(3, 0.5)), OrderError);
}

TEST(Witness, EtaPrimeIsDerivativeOfMargin) {
    // d/dt [psi'(s) + psi'(t) - psi'(s+t)] = psi''(t) - psi''(s+t), so eta' = -(that).
    const PQParams pq(30, 0.8);
    const double s = 0.7;
    const double t = 1.9;
    const double h = 1e-5;
    const double fd = (t2_margin(s, t + h, 1, pq).margin - t2_margin(s, t - h, 1, pq).margin) / (2 * h);
    EXPECT_NEAR(witness_eta_prime(s, t, 1, pq), -fd, 1e-7);
}

SweepSpec small_spec(std::vector<int> m_values, std::int64_t n = 400) {
    SweepSpec spec;
    spec.sample_count = n;
    spec.m_values = std::move(m_values);
    return spec;
}

TEST(Sweep, AllTheoremsHoldOnModestRun) {
    for (const auto id : {TheoremId::T1, TheoremId::T2, TheoremId::T4, TheoremId::C1, TheoremId::C2, TheoremId::C4}) {
        const auto r = sweep(id, small_spec({1, 3, 5}));
        EXPECT_EQ(r.summary.violations, 0) << to_string(id);
        EXPECT_EQ(r.reports.size(), 400u);
    }
    for (const auto id : {TheoremId::T3, TheoremId::C3}) {
        EXPECT_EQ(sweep(id, small_spec({2, 4, 6})).summary.violations, 0);
    }
}

TEST(Sweep, DeterministicAndThreadIndependent) {
    const auto spec = small_spec({1, 3}, 1000);
    SweepOptions one;
    one.threads = 1;
    SweepOptions many;
    many.threads = 7;
    const auto a = sweep(TheoremId::T4, spec, one);
    const auto b = sweep(TheoremId::T4, spec, many);
    ASSERT_EQ(a.reports.size(), b.reports.size());
    for (std::size_t i = 0; i < a.reports.size(); ++i) {
        EXPECT_EQ(a.reports[i].inputs, b.reports[i].inputs);
        EXPECT_EQ(a.reports[i].margin, b.reports[i].margin);
    }
    EXPECT_EQ(a.summary.min_margin, b.summary.min_margin);
    EXPECT_EQ(a.summary.argmin, b.summary.argmin);
}

TEST(Sweep, SamplingRespectsHypotheses) {
    const auto spec = small_spec({1, 3, 5}, 2000);
    for (const auto& in : draw_samples(TheoremId::T1, spec)) {
        EXPECT_GT(in.s, 0.0);
        EXPECT_LE(in.s, 1.0);
        EXPECT_FALSE(in.m.has_value());
    }
    for (const auto& in : draw_samples(TheoremId::C1, spec)) {
        EXPECT_LT(in.s, 1.0);
        EXPECT_FALSE(in.p.has_value());
    }
    for (const auto& in : draw_samples(TheoremId::T2, spec)) {
        EXPECT_GT(in.t, 0.0);
        EXPECT_LE(in.t, 10.0);
        EXPECT_EQ(*in.m % 2, 1);
    }
    SweepOptions explore;
    explore.explore = true;
    bool above_one = false;
    for (const auto& in : draw_samples(TheoremId::T1, spec, explore)) {
        above_one = above_one || in.s > 1.0;
    }
    EXPECT_TRUE(above_one);
}

TEST(Sweep, SeedChangesSamples) {
    auto spec = small_spec({1}, 10);
    const auto a = draw_samples(TheoremId::T2, spec);
    spec.seed = 43;
    const auto b = draw_samples(TheoremId::T2, spec);
    EXPECT_NE(a.front().s, b.front().s);
}

TEST(Sweep, ConfigErrors) {
    EXPECT_THROW((void)sweep(TheoremId::T2, small_spec({2})), OrderError);
    EXPECT_THROW((void)sweep(TheoremId::T1, small_spec({1}, 0)), ConfigError);
    SweepSpec bad;
    bad.q_values = {1.0};
    EXPECT_THROW(bad.validate(), ConfigError);
    SweepSpec empty;
    empty.p_values.clear();
    EXPECT_THROW(empty.validate(), ConfigError);
    SweepSpec interval;
    interval.t_range = {3.0, 2.0};
    EXPECT_THROW(interval.validate(), ConfigError);
}

TEST(Sweep, ExploreFindsT1ViolationsBeyondHypothesis) {
    auto spec = small_spec({1}, 3000);
    spec.s_range = {1.0, 5.0};
    SweepOptions explore;
    explore.explore = true;
    EXPECT_GT(sweep(TheoremId::T1, spec, explore).summary.violations, 0);
}

TEST(WitnessSweep, NoViolations) {
    auto spec = small_spec({1, 2, 3, 4}, 1500);
    const auto w = witness_sweep(spec);
    EXPECT_EQ(w.total_violations(), 0);
    EXPECT_EQ(w.mu_prime.checked, 1500);
    EXPECT_EQ(w.eta_prime.checked + w.lambda_prime.checked, 1500);
}

}  // namespace
