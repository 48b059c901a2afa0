#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "pqspecial/digamma_family.hpp"
#include "pqspecial/qnum.hpp"

namespace pqspecial {

/// The four (p,q) inequalities (T1..T4) and their classical ancestors (C1..C4).
///
///   T1/C1  psi(s+t) >= psi(s) + psi(t)                        0 < s <= 1 (C1: 0 < s < 1), t > 0
///   T2/C2  psi^{(m)}(s+t) <= psi^{(m)}(s) + psi^{(m)}(t)      m odd
///   T3/C3  psi^{(m)}(s+t) >= psi^{(m)}(s) + psi^{(m)}(t)      m even
///   T4/C4  psi^{(m)}(s) psi^{(m)}(t) >= [psi^{(m)}(s+t)]^2    m odd
enum class TheoremId { T1, T2, T3, T4, C1, C2, C3, C4 };

[[nodiscard]] std::string_view to_string(TheoremId id) noexcept;
/// Parses "T1".."C4" (case-insensitive). Throws ConfigError otherwise.
[[nodiscard]] TheoremId parse_theorem(std::string_view text);
[[nodiscard]] bool is_classical(TheoremId id) noexcept;
/// True when the theorem involves a derivative order m.
[[nodiscard]] bool uses_order(TheoremId id) noexcept;
/// Required parity of m: 1 for odd, 0 for even, nullopt when m is not used.
[[nodiscard]] std::optional<int> required_parity(TheoremId id) noexcept;

/// Point at which an inequality is evaluated. p and q are absent for the
/// classical theorems; m is absent for T1/C1.
struct SampleInputs {
    double s = 0.0;
    double t = 0.0;
    std::optional<std::int64_t> p;
    std::optional<double> q;
    std::optional<int> m;

    friend bool operator==(const SampleInputs&, const SampleInputs&) = default;
};

/// Intermediate facts of the product argument for T4/C4:
/// psi^{(m)}(s) >= psi^{(m)}(s+t) >= 0 and psi^{(m)}(t) >= psi^{(m)}(s+t) >= 0.
struct ProductChain {
    bool s_side = false;
    bool t_side = false;
};

/// One evaluated sample. `margin` is oriented so that the inequality holds
/// exactly when margin >= 0; `holds` is margin >= -tol.
struct InequalityReport {
    TheoremId theorem = TheoremId::T1;
    SampleInputs inputs;
    double lhs = 0.0;
    double rhs = 0.0;
    double margin = 0.0;
    bool holds = false;
    double tol = 0.0;
    std::optional<ProductChain> chain;
};

struct MarginOptions {
    DigammaSeries series = DigammaSeries::exact;
    /// Violation tolerance is tol_scale * max(1, |lhs|, |rhs|).
    double tol_scale = 1e-9;
    /// When false, hypotheses on s and the parity of m are not enforced.
    bool enforce_hypotheses = true;
};

[[nodiscard]] InequalityReport t1_margin(double s, double t, const PQParams& params, const MarginOptions& opts = {});
[[nodiscard]] InequalityReport t2_margin(double s, double t, int m, const PQParams& params,
                                         const MarginOptions& opts = {});
[[nodiscard]] InequalityReport t3_margin(double s, double t, int m, const PQParams& params,
                                         const MarginOptions& opts = {});
[[nodiscard]] InequalityReport t4_margin(double s, double t, int m, const PQParams& params,
                                         const MarginOptions& opts = {});
/// C1..C4 with psi_classical / psi_m_classical in place of the (p,q) functions.
/// `m` is ignored for C1.
[[nodiscard]] InequalityReport classical_margin(TheoremId theorem, double s, double t, int m = 0,
                                                const MarginOptions& opts = {});

/// Dispatches on `theorem`; p and q must be present for T1..T4, m for orders.
[[nodiscard]] InequalityReport evaluate(TheoremId theorem, const SampleInputs& inputs,
                                        const MarginOptions& opts = {});

// Derivatives in t of the margin functions, written as termwise sums so the
// sign of every term is visible:
//   mu'(t)     = psi'(s+t) - psi'(t)                  expected <= 0
//   eta'(t)    = psi^{(m+1)}(s+t) - psi^{(m+1)}(t)    expected >= 0 for odd m
//   lambda'(t) = same expression                      expected <= 0 for even m
[[nodiscard]] double witness_mu_prime(double s, double t, const PQParams& params,
                                      DigammaSeries series = DigammaSeries::exact);
[[nodiscard]] double witness_eta_prime(double s, double t, int m, const PQParams& params,
                                       DigammaSeries series = DigammaSeries::exact);
[[nodiscard]] double witness_lambda_prime(double s, double t, int m, const PQParams& params,
                                          DigammaSeries series = DigammaSeries::exact);
/// lim_{t->inf} of the T1 margin, which equals -psi_{p,q}(s); expected >= 0 on (0, 1].
[[nodiscard]] double witness_t1_limit(double s, const PQParams& params,
                                      DigammaSeries series = DigammaSeries::exact);

/// Half-open sampling interval (lo, hi] with 0 <= lo < hi.
struct Interval {
    double lo = 0.0;
    double hi = 1.0;
};

/// Randomized sampling plan. s and t are uniform on their intervals; p, q and
/// m are drawn uniformly from the finite sets. All randomness comes from `seed`.
struct SweepSpec {
    Interval s_range{0.0, 10.0};
    Interval t_range{0.0, 10.0};
    std::vector<std::int64_t> p_values{1, 2, 5, 10, 100, 1000};
    std::vector<double> q_values{0.1, 0.5, 0.9, 0.99};
    std::vector<int> m_values{1, 3, 5};
    std::int64_t sample_count = 10000;
    std::uint64_t seed = 42;
    double tol_scale = 1e-9;

    /// Throws ConfigError on empty sets, bad intervals, non-positive counts.
    void validate() const;
};

struct SweepOptions {
    DigammaSeries series = DigammaSeries::exact;
    /// Out-of-hypothesis exploration: no clipping of s, no parity checks.
    bool explore = false;
    unsigned threads = 0;
};

struct SweepSummary {
    std::int64_t samples = 0;
    std::int64_t violations = 0;
    double min_margin = 0.0;
    SampleInputs argmin;
};

struct SweepResult {
    TheoremId theorem = TheoremId::T1;
    std::vector<InequalityReport> reports;
    SweepSummary summary;
};

/// Draws the samples of `spec` for `theorem` in index order. T1 clips s to
/// (0, 1], C1 to (0, 1). Deterministic in the seed.
[[nodiscard]] std::vector<SampleInputs> draw_samples(TheoremId theorem, const SweepSpec& spec,
                                                     const SweepOptions& opts = {});

/// Evaluates every sample; reports come back in sample-index order whatever
/// the thread count.
[[nodiscard]] SweepResult sweep(TheoremId theorem, const SweepSpec& spec, const SweepOptions& opts = {});

/// Tally for one witness family.
struct WitnessTally {
    std::int64_t checked = 0;
    std::int64_t violations = 0;
    /// Most adverse value seen, oriented so that >= 0 means the expected sign.
    double worst = 0.0;
    SampleInputs worst_inputs;
};

struct WitnessSummary {
    WitnessTally mu_prime;
    WitnessTally eta_prime;
    WitnessTally lambda_prime;
    WitnessTally t1_limit;
    WitnessTally product_chain;
    [[nodiscard]] std::int64_t total_violations() const noexcept {
        return mu_prime.violations + eta_prime.violations + lambda_prime.violations + t1_limit.violations +
               product_chain.violations;
    }
};

/// Checks every witness sign over the samples of `spec` (s, t, p, q and m
/// drawn as for T2): mu' everywhere, eta' at odd m, lambda' at even m, the
/// T1 limit with s folded into (0, 1], and the T4 chain at odd m.
[[nodiscard]] WitnessSummary witness_sweep(const SweepSpec& spec, const SweepOptions& opts = {});

}  // namespace pqspecial
