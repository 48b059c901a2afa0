#include "pqspecial/digamma_family.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <string>

#include "pqspecial/errors.hpp"
#include "pqspecial/summation.hpp"

namespace pqspecial {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();
constexpr int kMaxInternalOrder = DerivativeOrder::kMax + 1;

void require_positive_t(double t, const char* fn) {
    if (!std::isfinite(t) || !(t > 0.0)) {
        throw DomainError(std::string(fn) + ": t must be > 0, got " + detail::format_double(t));
    }
}

// Eulerian numbers E(m, k), so that sum_{j>=1} j^m z^j = z A_m(z) / (1-z)^{m+1}
// with A_m(z) = sum_k E(m, k) z^k. All entries are positive.
using EulerianTable = std::array<std::array<double, kMaxInternalOrder + 1>, kMaxInternalOrder + 1>;

const EulerianTable& eulerian_table() {
    static const EulerianTable table = [] {
        EulerianTable e{};
        e[0][0] = 1.0;
        e[1][0] = 1.0;
        for (int m = 2; m <= kMaxInternalOrder; ++m) {
            for (int k = 0; k < m; ++k) {
                const double keep = (k + 1) * e[m - 1][k];
                const double lift = k > 0 ? (m - k) * e[m - 1][k - 1] : 0.0;
                e[m][k] = keep + lift;
            }
        }
        return e;
    }();
    return table;
}

double eulerian_poly(int m, double z) {
    const auto& row = eulerian_table()[m];
    const int degree = std::max(0, m - 1);
    double acc = row[degree];
    for (int k = degree - 1; k >= 0; --k) {
        acc = acc * z + row[k];
    }
    return acc;
}

// ln |(ln q)^{m+1} Li_{-m}(q^x)| given u = x ln q.
double log_polylog_magnitude(double u, int m, double log_abs_lq) {
    const double z = std::exp(u);
    const double w = -std::expm1(u);
    return (m + 1) * (log_abs_lq - std::log(w)) + u + std::log(eulerian_poly(m, z));
}

// Accumulates the magnitude sum for psi^{(m)} in log space and tracks the
// largest log-argument seen, which drives the rounding estimate.
struct LogSeries {
    detail::LogSumExp lse;
    double worst_arg = 0.0;
    std::int64_t terms = 0;

    void add(double log_mag, double arg_scale) {
        lse.add(log_mag);
        worst_arg = std::max(worst_arg, std::abs(arg_scale));
        ++terms;
    }
};

EvalResult finish_polygamma(const LogSeries& s, int m) {
    const double log_mag = s.lse.log_value();
    const double mag = std::exp(log_mag);
    if (!std::isfinite(mag)) {
        throw OverflowError("polygamma value of order " + std::to_string(m) + " exceeds the double range");
    }
    const double value = (m % 2 == 1) ? mag : -mag;
    const double rel = kEps * (4.0 + m + std::abs(log_mag) + s.worst_arg);
    return {value, std::max<std::int64_t>(s.terms, 1), rel * mag};
}

EvalResult polygamma_exact(double t, const PQParams& params, int m) {
    const QParam& q = params.q();
    const double lq = q.log();
    const double log_abs_lq = std::log(-lq);
    const double log_tail_factor = std::log(q.value() / q.complement());
    const double log_cutoff = 2.0 * std::log(kEps);

    LogSeries series;
    for (std::int64_t n = 0; n <= params.p(); ++n) {
        const double u = (t + static_cast<double>(n)) * lq;
        const double log_mag = log_polylog_magnitude(u, m, log_abs_lq);
        series.add(log_mag, std::abs(u) + std::abs(log_mag));
        // Li_{-m}(q z) <= q Li_{-m}(z): the remaining terms are bounded geometrically.
        if (log_mag + log_tail_factor < series.lse.log_value() + log_cutoff) {
            break;
        }
    }
    return finish_polygamma(series, m);
}

EvalResult polygamma_truncated(double t, const PQParams& params, int m) {
    const QParam& q = params.q();
    const double lq = q.log();
    const double log_abs_lq_pow = (m + 1) * std::log(-lq);

    LogSeries series;
    for (std::int64_t n = 1; n <= params.p(); ++n) {
        const double nd = static_cast<double>(n);
        const double u = nd * t * lq;
        const double w = -std::expm1(nd * lq);
        const double log_mag = log_abs_lq_pow + m * std::log(nd) + u - std::log(w);
        series.add(log_mag, log_mag);
    }
    return finish_polygamma(series, m);
}

void require_order(int m, int max_order, const char* fn) {
    if (m < 1 || m > max_order) {
        throw OrderError(std::string(fn) + ": derivative order m must lie in [1, " + std::to_string(max_order) +
                         "], got " + std::to_string(m) + (m == 0 ? " (use psi_pq for m = 0)" : ""));
    }
}

}  // namespace

DerivativeOrder::DerivativeOrder(int m) : m_(m) {
    if (m < 0 || m > kMax) {
        throw OrderError("derivative order m must lie in [0, " + std::to_string(kMax) + "], got " +
                         std::to_string(m));
    }
}

EvalResult psi_pq(double t, const PQParams& params, DigammaSeries series) {
    require_positive_t(t, "psi_pq");
    const QParam& q = params.q();
    const double lq = q.log();
    const double log_p_q = log_q_number(static_cast<double>(params.p()), q);

    detail::CompensatedSum sum;
    double worst_arg = 0.0;
    if (series == DigammaSeries::exact) {
        const double tail_factor = q.value() / q.complement();
        for (std::int64_t n = 0; n <= params.p(); ++n) {
            const double u = (t + static_cast<double>(n)) * lq;
            const double term = std::exp(u) / -std::expm1(u);
            sum.add(term);
            worst_arg = std::max(worst_arg, std::abs(u));
            if (term * tail_factor <= kEps * kEps * sum.value()) {
                break;
            }
        }
    } else {
        for (std::int64_t n = 1; n <= params.p(); ++n) {
            const double nd = static_cast<double>(n);
            const double u = nd * t * lq;
            sum.add(std::exp(u) / -std::expm1(nd * lq));
            worst_arg = std::max(worst_arg, std::abs(u));
        }
    }

    const double series_part = lq * sum.value();
    detail::CompensatedSum total;
    total.add(log_p_q);
    total.add(series_part);
    const double err = kEps * (2.0 * std::abs(log_p_q) + std::abs(series_part) * (4.0 + worst_arg)) +
                       std::abs(lq) * sum.error_bound();
    return {total.value(), std::max<std::int64_t>(sum.count(), 1), err};
}

EvalResult psi_pq_m(double t, const PQParams& params, DerivativeOrder m, DigammaSeries series) {
    require_order(m.value(), DerivativeOrder::kMax, "psi_pq_m");
    return detail::polygamma_pq_unchecked(t, params, m.value(), series);
}

EvalResult polygamma_pq(double t, const PQParams& params, int m, DigammaSeries series) {
    if (m == 0) {
        return psi_pq(t, params, series);
    }
    return psi_pq_m(t, params, DerivativeOrder(m), series);
}

EvalResult detail::polygamma_pq_unchecked(double t, const PQParams& params, int m, DigammaSeries series) {
    require_positive_t(t, "psi_pq_m");
    if (m == 0) {
        return psi_pq(t, params, series);
    }
    require_order(m, kMaxInternalOrder, "psi_pq_m");
    return series == DigammaSeries::exact ? polygamma_exact(t, params, m) : polygamma_truncated(t, params, m);
}

double detail::log_polylog_term(double x, int k, const QParam& q) {
    if (k < 0 || k > kMaxInternalOrder) {
        throw OrderError("log_polylog_term: order out of range");
    }
    return log_polylog_magnitude(x * q.log(), k, std::log(-q.log()));
}

double psi_p(double t, std::int64_t p) {
    require_positive_t(t, "psi_p");
    if (p < 1) {
        throw DomainError("psi_p: p must be >= 1, got " + std::to_string(p));
    }
    detail::CompensatedSum sum;
    sum.add(std::log(static_cast<double>(p)));
    for (std::int64_t n = 0; n <= p; ++n) {
        sum.add(-1.0 / (t + static_cast<double>(n)));
    }
    return sum.value();
}

EvalResult psi_q(double t, const QParam& q, const TailTolerance& tol, GammaQConvention convention) {
    require_positive_t(t, "psi_q");
    const double lq = q.log();
    // Every later term is at most q times the current one, so stopping here
    // leaves a tail of at most eps * q after multiplication by |ln q|.
    const double cutoff = tol.eps() * q.complement() / -lq;

    detail::CompensatedSum sum;
    double first = 0.0;
    std::int64_t used = 0;
    for (std::int64_t n = 0;; ++n) {
        if (used >= tol.max_terms()) {
            throw ToleranceNotReached("psi_q: tail above " + detail::format_double(tol.eps()) + " after " +
                                      std::to_string(used) + " terms (q=" + detail::format_double(q.value()) + ")");
        }
        const double u = (t + static_cast<double>(n)) * lq;
        const double term = std::exp(u) / -std::expm1(u);
        if (n == 0) {
            first = term;
        }
        sum.add(term);
        ++used;
        if (term < cutoff) {
            break;
        }
    }
    detail::CompensatedSum total;
    total.add(-std::log1p(-q.value()));
    total.add(lq * sum.value());
    if (convention == GammaQConvention::shifted_index) {
        // d/dt ln(1 - q^t) = -ln q * q^t / (1 - q^t)
        total.add(-lq * first);
    }
    const double err = kEps * (4.0 * std::abs(total.value()) + std::abs(lq * sum.value()) * 4.0);
    return {total.value(), used, err};
}

double euler_gamma() {
    static const double gamma = [] {
        constexpr int n = 64;
        detail::CompensatedSum h;
        for (int k = n; k >= 1; --k) {
            h.add(1.0 / k);
        }
        const double nd = n;
        const double inv2 = 1.0 / (nd * nd);
        // H_n - ln n - gamma ~ 1/(2n) - 1/(12n^2) + 1/(120n^4) - 1/(252n^6) + 1/(240n^8)
        const double correction =
            1.0 / (2.0 * nd) - inv2 * (1.0 / 12.0 - inv2 * (1.0 / 120.0 - inv2 * (1.0 / 252.0 - inv2 / 240.0)));
        detail::CompensatedSum g;
        g.add(h.value());
        g.add(-std::log(nd));
        g.add(-correction);
        return g.value();
    }();
    return gamma;
}

double psi_classical(double t) {
    require_positive_t(t, "psi_classical");
    constexpr int kDirect = 32;
    detail::CompensatedSum sum;
    sum.add(-euler_gamma());
    const double tm1 = t - 1.0;
    for (int n = 0; n < kDirect; ++n) {
        sum.add(tm1 / ((1.0 + n) * (n + t)));
    }
    // Euler-Maclaurin tail of g(x) = (t-1) / ((1+x)(x+t)) = 1/(x+1) - 1/(x+t) from x = N.
    const double a = kDirect + 1.0;
    const double b = kDirect + t;
    sum.add(std::log1p(tm1 / a));
    sum.add(0.5 * tm1 / (a * b));
    // -sum_k B_{2k}/(2k)! g^{(2k-1)}(N), g^{(j)}(x) = (-1)^j j! [(x+1)^{-j-1} - (x+t)^{-j-1}]
    static constexpr std::array<double, 4> kB = {1.0 / 6.0, -1.0 / 30.0, 1.0 / 42.0, -1.0 / 30.0};
    double factorial = 1.0;  // (2k-1)!
    double fact2k = 2.0;     // (2k)!
    for (int k = 1; k <= 4; ++k) {
        const int j = 2 * k - 1;
        if (k > 1) {
            factorial *= (j - 1) * j;
            fact2k *= (2 * k - 1) * (2 * k);
        }
        const double deriv = -factorial * (std::pow(a, -j - 1) - std::pow(b, -j - 1));
        sum.add(-kB[k - 1] / fact2k * deriv);
    }
    return sum.value();
}

double psi_m_classical(double t, DerivativeOrder m, const TailTolerance& tol) {
    if (m.value() < 1) {
        throw OrderError("psi_m_classical: derivative order m must be >= 1 (use psi_classical for m = 0)");
    }
    return detail::polygamma_classical_unchecked(t, m.value(), tol);
}

double detail::polygamma_classical_unchecked(double t, int m, const TailTolerance& tol) {
    require_positive_t(t, "psi_m_classical");
    if (m == 0) {
        return psi_classical(t);
    }
    require_order(m, kMaxInternalOrder, "psi_m_classical");
    const double s = m + 1.0;
    // B_{2k} / (2k)! for k = 1..6
    static constexpr std::array<double, 6> kB = {
        1.0 / 12.0, -1.0 / 720.0, 1.0 / 30240.0, -1.0 / 1209600.0, 1.0 / 47900160.0, -691.0 / 1307674368000.0,
    };

    // Direct terms up to N-1, then Euler-Maclaurin with B_2..B_10; the B_12 term estimates the remainder.
    std::int64_t direct = std::max<std::int64_t>(0, static_cast<std::int64_t>(std::ceil(std::max(2.0 * s, 20.0) - t)));
    while (true) {
        if (direct > tol.max_terms()) {
            throw ToleranceNotReached("psi_m_classical: tail estimate above tolerance within " +
                                      std::to_string(tol.max_terms()) + " terms");
        }
        detail::CompensatedSum sum;
        for (std::int64_t n = direct - 1; n >= 0; --n) {
            sum.add(std::pow(static_cast<double>(n) + t, -s));
        }
        const double a = static_cast<double>(direct) + t;
        sum.add(std::pow(a, 1.0 - s) / (s - 1.0));
        sum.add(0.5 * std::pow(a, -s));
        // f^{(j)}(a) = (-1)^j s (s+1) ... (s+j-1) a^{-s-j}
        double rising = s;  // s (s+1) ... (s+j-1) for j = 1
        double remainder = 0.0;
        for (int k = 1; k <= 6; ++k) {
            const int j = 2 * k - 1;
            if (k > 1) {
                rising *= (s + j - 2) * (s + j - 1);
            }
            const double term = kB[k - 1] * rising * std::pow(a, -s - j);  // -B/(2k)! f^{(j)}, f^{(j)} < 0
            if (k < 6) {
                sum.add(term);
            } else {
                remainder = std::abs(term);
            }
        }
        const double total = sum.value();
        // The sum is positive; the tail is controlled relative to it.
        if (remainder <= tol.eps() * total) {
            double factorial = 1.0;
            for (int k = 2; k <= m; ++k) {
                factorial *= k;
            }
            const double value = factorial * total;
            if (!std::isfinite(value)) {
                throw OverflowError("psi_m_classical: value exceeds the double range");
            }
            return (m % 2 == 1) ? value : -value;
        }
        direct = std::max<std::int64_t>(2 * direct, 16);
    }
}

}  // namespace pqspecial
