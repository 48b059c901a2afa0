#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>

#include "pqspecial/digamma_family.hpp"
#include "pqspecial/gamma_family.hpp"
#include "pqspecial/qnum.hpp"

namespace pqspecial::oracle {

/// Significant decimal digits of a high-precision evaluation, 30..200.
class Precision {
   public:
    explicit Precision(int digits = 30);
    [[nodiscard]] int digits() const noexcept { return digits_; }

   private:
    int digits_;
};

enum class FDOrder { second, fourth };

/// Central finite-difference stencil with optional Richardson extrapolation.
struct FDScheme {
    /// Step; when absent, 1e-5 * max(1, |t|).
    std::optional<double> step;
    FDOrder order = FDOrder::second;
    /// Number of step halvings folded into the Richardson table, 0..4.
    int richardson_levels = 2;
};

struct FDResult {
    double value = 0.0;
    double error_estimate = 0.0;
};

/// Derivative of f at t. f must be evaluable on [t - 4h, t + 4h]. Throws
/// DomainError if h < 1e3 ulp(t) or the scheme is malformed.
[[nodiscard]] FDResult fd_derivative(const std::function<double(double)>& f, double t, const FDScheme& scheme = {});

// High-precision evaluations in software floating point. Every function works
// at prec.digits() plus guard digits and returns the value rounded to
// prec.digits() significant decimal digits, in scientific notation.
// The double-valued inputs are taken as exact binary values.

/// psi^{(m)}_{p,q}(t) for m >= 0. The exact series uses the Stirling-number
/// expansion Li_{-m}(z) = sum_k k! S(m+1, k+1) (z/(1-z))^{k+1}, independent of
/// the Eulerian-polynomial route in the double implementation.
[[nodiscard]] std::string hp_psi_pq(double t, const PQParams& params, const Precision& prec = Precision{},
                                    int m = 0, DigammaSeries series = DigammaSeries::exact);

/// Fourth-order central difference carried out in high precision: the
/// derivative of ln Gamma_{p,q} (m = 0) or of psi^{(m-1)}_{p,q} (m >= 1) at t.
/// For derivative checks where a double-precision difference quotient cannot
/// resolve the answer (derivative far below ulp(f) / h).
[[nodiscard]] std::string hp_fd_derivative_pq(double t, const PQParams& params, int m,
                                              const Precision& prec = Precision{});

[[nodiscard]] std::string hp_log_q_number(double x, const QParam& q, const Precision& prec = Precision{});
[[nodiscard]] std::string hp_log_q_factorial(std::int64_t p, const QParam& q, const Precision& prec = Precision{});
/// ln Gamma_{p,q}(t) straight from the defining product.
[[nodiscard]] std::string hp_log_gamma_pq(double t, const PQParams& params, const Precision& prec = Precision{});
[[nodiscard]] std::string hp_log_gamma_p(double t, std::int64_t p, const Precision& prec = Precision{});
/// ln Gamma_q(t) from the product truncated where the factors are within
/// 10^{-digits} of 1, plus a geometric bound on the rest.
[[nodiscard]] std::string hp_log_gamma_q(double t, const QParam& q, const Precision& prec = Precision{},
                                         GammaQConvention convention = GammaQConvention::standard);
/// Euler-Mascheroni constant by H_n - ln n with Euler-Maclaurin acceleration.
[[nodiscard]] std::string hp_euler_gamma(const Precision& prec = Precision{});
/// Classical psi^{(m)}(t) via MPFR's digamma (m = 0) or a Hurwitz-zeta sum with
/// Euler-Maclaurin tail (m >= 1).
[[nodiscard]] std::string hp_psi_classical(double t, int m = 0, const Precision& prec = Precision{});
/// Riemann zeta(s) for integer s >= 2.
[[nodiscard]] std::string hp_zeta(int s, const Precision& prec = Precision{});

/// Parses an oracle string to the nearest double.
[[nodiscard]] double to_double(const std::string& decimal);

}  // namespace pqspecial::oracle
