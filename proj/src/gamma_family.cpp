#include "pqspecial/gamma_family.hpp"

#include <array>
#include <cmath>
#include <limits>
#include <string>

#include "pqspecial/errors.hpp"
#include "pqspecial/summation.hpp"

namespace pqspecial {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

void require_positive_t(double t, const char* fn) {
    if (!std::isfinite(t) || !(t > 0.0)) {
        throw DomainError(std::string(fn) + ": t must be > 0, got " + detail::format_double(t));
    }
}

void require_positive_p(std::int64_t p, const char* fn) {
    if (p < 1) {
        throw DomainError(std::string(fn) + ": p must be >= 1, got " + std::to_string(p));
    }
}

// ln(num / den) for num, den in (0, 1], given rel = (num - den) / den.
// The log1p form is used while the ratio is not close to zero.
double log_ratio(double num, double den, double rel) {
    if (rel > -0.5) {
        return std::log1p(rel);
    }
    return std::log(num / den);
}

double checked_exp(double log_value, const char* fn) {
    const double v = std::exp(log_value);
    if (!std::isfinite(v) || v < std::numeric_limits<double>::min()) {
        throw OverflowError(std::string(fn) + ": value exp(" + detail::format_double(log_value) +
                            ") is outside the double range; use the log-space variant");
    }
    return v;
}

}  // namespace

TailTolerance::TailTolerance(double eps, std::int64_t max_terms) : eps_(eps), max_terms_(max_terms) {
    if (!std::isfinite(eps) || !(eps > 0.0)) {
        throw ConfigError("tail tolerance eps must be > 0");
    }
    if (max_terms < 1) {
        throw ConfigError("tail tolerance max_terms must be >= 1");
    }
}

double log_gamma_pq(double t, const PQParams& params) {
    require_positive_t(t, "log_gamma_pq");
    const QParam& q = params.q();
    const double lq = q.log();
    const double one_minus_qt = one_minus_q_pow(t, q);
    const double ratio = q.value() / q.complement();

    const double head = t * log_q_number(static_cast<double>(params.p()), q) - log_q_number(t, q);
    detail::CompensatedSum sum;
    sum.add(head);
    // ln([k]_q / [t+k]_q) = ln((1-q^k) / (1-q^{t+k})); the terms shrink at least like q^k.
    for (std::int64_t k = 1; k <= params.p(); ++k) {
        const double kd = static_cast<double>(k);
        const double num = -std::expm1(kd * lq);
        const double den = -std::expm1((t + kd) * lq);
        const double rel = -std::exp(kd * lq) * one_minus_qt / den;
        const double term = log_ratio(num, den, rel);
        sum.add(term);
        if (std::abs(term) * ratio <= kEps * kEps * sum.abs_total()) {
            break;
        }
    }
    return sum.value();
}

double gamma_pq(double t, const PQParams& params) {
    return checked_exp(log_gamma_pq(t, params), "gamma_pq");
}

double log_gamma_p(double t, std::int64_t p) {
    require_positive_t(t, "log_gamma_p");
    require_positive_p(p, "log_gamma_p");
    // ln p! - sum_{k=1..p} ln(t+k) = -sum ln(1 + t/k), so the factorial is never formed.
    detail::CompensatedSum sum;
    sum.add(t * std::log(static_cast<double>(p)));
    sum.add(-std::log(t));
    for (std::int64_t k = 1; k <= p; ++k) {
        sum.add(-std::log1p(t / static_cast<double>(k)));
    }
    return sum.value();
}

double gamma_p(double t, std::int64_t p) {
    return checked_exp(log_gamma_p(t, p), "gamma_p");
}

EvalResult log_gamma_q(double t, const QParam& q, const TailTolerance& tol,
                       GammaQConvention convention) {
    require_positive_t(t, "log_gamma_q");
    const double lq = q.log();
    const double ratio = q.value() / q.complement();

    detail::CompensatedSum sum;
    sum.add((1.0 - t) * std::log1p(-q.value()));

    // Factor n is (1 - q^{a+n}) / (1 - q^{t+n}) with a = 1 (standard) or a = 0 and n >= 1.
    const bool standard = convention == GammaQConvention::standard;
    const double shift = standard ? 1.0 : 0.0;
    const std::int64_t first = standard ? 0 : 1;
    // q^{a+n} - q^{t+n} = q^n (q^a - q^t) = q^n q^a (1 - q^{t-a}) = -q^n q^a expm1((t-a) ln q).
    const double gap = -std::exp(shift * lq) * std::expm1((t - shift) * lq);

    std::int64_t used = 0;
    for (std::int64_t n = first;; ++n) {
        if (used >= tol.max_terms()) {
            throw ToleranceNotReached("log_gamma_q: tail above " + detail::format_double(tol.eps()) +
                                      " after " + std::to_string(used) + " factors (q=" +
                                      detail::format_double(q.value()) + ")");
        }
        const double nd = static_cast<double>(n);
        const double num = -std::expm1((shift + nd) * lq);
        const double den = -std::expm1((t + nd) * lq);
        // (num - den) / den = -(q^{a+n} - q^{t+n}) / den
        const double rel = -std::exp(nd * lq) * gap / den;
        sum.add(log_ratio(num, den, rel));
        ++used;
        const double x = std::abs(rel);
        // |ln(1+x_j)| <= |x_j| / (1 - |x_j|) and |x_{j+1}| <= q |x_j|.
        if (x < 0.5 && x * ratio / (1.0 - x) <= tol.eps()) {
            break;
        }
    }
    return {sum.value(), used, sum.error_bound()};
}

double gamma_q(double t, const QParam& q, const TailTolerance& tol, GammaQConvention convention) {
    return checked_exp(log_gamma_q(t, q, tol, convention).value, "gamma_q");
}

double log_gamma_classical(double t) {
    require_positive_t(t, "log_gamma_classical");
    // B_{2k} / (2k (2k-1)) for k = 1..8
    static constexpr std::array<double, 8> kStirling = {
        1.0 / 12.0,          -1.0 / 360.0,  1.0 / 1260.0, -1.0 / 1680.0,
        1.0 / 1188.0,        -691.0 / 360360.0, 1.0 / 156.0, -3617.0 / 122400.0,
    };
    constexpr double kShiftTarget = 15.0;

    double x = t;
    double shift_product = 1.0;
    while (x < kShiftTarget) {
        shift_product *= x;
        x += 1.0;
    }
    const double inv = 1.0 / x;
    const double inv2 = inv * inv;
    double series = 0.0;
    double power = inv;
    for (double c : kStirling) {
        series += c * power;
        power *= inv2;
    }
    constexpr double half_log_two_pi = 0.91893853320467274178;
    const double stirling = (x - 0.5) * std::log(x) - x + half_log_two_pi + series;
    return stirling - std::log(shift_product);
}

double log_gamma(double t, const GammaVariant& variant) {
    struct Visitor {
        double t;
        double operator()(const gamma_variant::Classical&) const { return log_gamma_classical(t); }
        double operator()(const gamma_variant::PAnalogue& v) const { return log_gamma_p(t, v.p); }
        double operator()(const gamma_variant::QAnalogue& v) const {
            return log_gamma_q(t, v.q, v.tol, v.convention).value;
        }
        double operator()(const gamma_variant::PQAnalogue& v) const { return log_gamma_pq(t, v.params); }
    };
    return std::visit(Visitor{t}, variant);
}

}  // namespace pqspecial
