#pragma once

#include <cstdint>

#include "pqspecial/eval.hpp"
#include "pqspecial/gamma_family.hpp"
#include "pqspecial/qnum.hpp"

namespace pqspecial {

/// Order m of a polygamma derivative; 0 denotes the digamma function itself.
class DerivativeOrder {
   public:
    static constexpr int kMax = 60;

    /// Throws OrderError unless 0 <= m <= kMax.
    explicit DerivativeOrder(int m);

    [[nodiscard]] int value() const noexcept { return m_; }
    [[nodiscard]] bool is_odd() const noexcept { return (m_ % 2) != 0; }

    friend bool operator==(const DerivativeOrder&, const DerivativeOrder&) = default;

   private:
    int m_;
};

/// Which series represents psi_{p,q} and its derivatives.
enum class DigammaSeries {
    /// d/dt ln Gamma_{p,q}(t) = ln[p]_q + ln q * sum_{n=0..p} q^{t+n} / (1 - q^{t+n}),
    /// the true logarithmic derivative of the finite product.
    exact,
    /// ln[p]_q + ln q * sum_{n=1..p} q^{nt} / (1 - q^n): the first p terms of the
    /// Lambert-type expansion of psi_q. Agrees with `exact` only as p -> infinity.
    truncated,
};

/// psi_{p,q}(t). Positive terms are summed with compensation in ascending n.
[[nodiscard]] EvalResult psi_pq(double t, const PQParams& params,
                                DigammaSeries series = DigammaSeries::exact);

/// psi^{(m)}_{p,q}(t) for 1 <= m <= 60. Terms are combined in log space so
/// n^m q^{nt} neither overflows nor underflows. m = 0 is rejected: route it to psi_pq.
[[nodiscard]] EvalResult psi_pq_m(double t, const PQParams& params, DerivativeOrder m,
                                  DigammaSeries series = DigammaSeries::exact);

/// psi_pq for m = 0, psi_pq_m otherwise.
[[nodiscard]] EvalResult polygamma_pq(double t, const PQParams& params, int m,
                                      DigammaSeries series = DigammaSeries::exact);

/// psi_p(t) = ln p - sum_{n=0..p} 1 / (t+n).
[[nodiscard]] double psi_p(double t, std::int64_t p);

/// psi_q(t) = -ln(1-q) + ln q * sum_{n>=0} q^{t+n} / (1 - q^{t+n}) under the standard
/// Gamma_q convention; the shifted convention subtracts the n = 0 term's contribution
/// of ln(1 - q^t).
[[nodiscard]] EvalResult psi_q(double t, const QParam& q, const TailTolerance& tol = {},
                               GammaQConvention convention = GammaQConvention::standard);

/// Euler-Mascheroni constant from the accelerated limit H_n - ln n.
[[nodiscard]] double euler_gamma();

/// psi(t) = -gamma + (t-1) sum_{n>=0} 1 / ((1+n)(n+t)) with an Euler-Maclaurin tail.
[[nodiscard]] double psi_classical(double t);

/// psi^{(m)}(t) = (-1)^{m+1} m! sum_{n>=0} (n+t)^{-(m+1)}, m >= 1.
/// The estimated truncation error is kept below tol.eps() relative to the sum.
[[nodiscard]] double psi_m_classical(double t, DerivativeOrder m, const TailTolerance& tol = {});

namespace detail {
// Same as polygamma_pq but admits m up to DerivativeOrder::kMax + 1, which the
// monotonicity witnesses need.
EvalResult polygamma_pq_unchecked(double t, const PQParams& params, int m, DigammaSeries series);
// Classical psi^{(m)} for m up to DerivativeOrder::kMax + 1.
double polygamma_classical_unchecked(double t, int m, const TailTolerance& tol);
// ln( |ln q|^{k+1} Li_{-k}(q^x) ) for 0 <= k <= DerivativeOrder::kMax + 1: the log
// magnitude of the n-th term of the exact psi^{(k)}_{p,q} series at x = t + n.
double log_polylog_term(double x, int k, const QParam& q);
}  // namespace detail

}  // namespace pqspecial
