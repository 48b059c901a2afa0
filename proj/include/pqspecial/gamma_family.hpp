#pragma once

#include <cstdint>
#include <variant>

#include "pqspecial/eval.hpp"
#include "pqspecial/qnum.hpp"

namespace pqspecial {

/// Index convention of the infinite product defining Gamma_q.
enum class GammaQConvention {
    /// (1-q)^{1-t} prod_{n>=0} (1-q^{n+1}) / (1-q^{t+n}); Gamma_q(1) = 1.
    standard,
    /// (1-q)^{1-t} prod_{n>=1} (1-q^n) / (1-q^{t+n}); equals (1-q^t) Gamma_q(t)
    /// under the standard convention, so Gamma_q(1) = 1-q.
    shifted_index,
};

/// ln Gamma_{p,q}(t) = t ln[p]_q + ln[p]_q! - sum_{n=0..p} ln[t+n]_q.
///
/// Evaluated as t ln[p]_q - ln[t]_q + sum_{k=1..p} ln([k]_q / [t+k]_q) with each
/// ratio formed directly, so the large factorial and denominator sums never
/// meet. Finite for every t > 0 and p up to at least 1e7.
[[nodiscard]] double log_gamma_pq(double t, const PQParams& params);

/// exp(log_gamma_pq). Throws OverflowError when the value leaves the normal double range.
[[nodiscard]] double gamma_pq(double t, const PQParams& params);

/// ln Gamma_p(t) = ln p! + t ln p - sum_{n=0..p} ln(t+n).
[[nodiscard]] double log_gamma_p(double t, std::int64_t p);
[[nodiscard]] double gamma_p(double t, std::int64_t p);

/// ln Gamma_q(t) by the truncated product. `terms_used` counts product factors.
[[nodiscard]] EvalResult log_gamma_q(double t, const QParam& q, const TailTolerance& tol = {},
                                     GammaQConvention convention = GammaQConvention::standard);
[[nodiscard]] double gamma_q(double t, const QParam& q, const TailTolerance& tol = {},
                             GammaQConvention convention = GammaQConvention::standard);

/// ln Gamma(t) from the Stirling series after an upward shift; |err| < 1e-13 on [0.1, 50].
[[nodiscard]] double log_gamma_classical(double t);

namespace gamma_variant {
struct Classical {};
struct PAnalogue {
    std::int64_t p;
};
struct QAnalogue {
    QParam q;
    TailTolerance tol{};
    GammaQConvention convention = GammaQConvention::standard;
};
struct PQAnalogue {
    PQParams params;
};
}  // namespace gamma_variant

/// Which member of the gamma family to evaluate, carrying exactly the parameters it needs.
using GammaVariant = std::variant<gamma_variant::Classical, gamma_variant::PAnalogue,
                                  gamma_variant::QAnalogue, gamma_variant::PQAnalogue>;

[[nodiscard]] double log_gamma(double t, const GammaVariant& variant);

}  // namespace pqspecial
