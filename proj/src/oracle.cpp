#include "pqspecial/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <string>
#include <vector>

#include "hp_real.hpp"
#include "pqspecial/errors.hpp"

namespace pqspecial::oracle {

namespace {

using detail::HpReal;
using detail::pi;
using detail::zeta_ui;

constexpr int kGuardDigits = 25;

mpfr_prec_t working_bits(const Precision& prec) {
    return static_cast<mpfr_prec_t>(std::ceil((prec.digits() + kGuardDigits) * 3.3219280948873623)) + 16;
}

void require_positive_t(double t, const char* fn) {
    if (!std::isfinite(t) || !(t > 0.0)) {
        throw DomainError(std::string(fn) + ": t must be > 0, got " + pqspecial::detail::format_double(t));
    }
}

// (1 - q^x) / (1 - q) at working precision.
HpReal q_number(const HpReal& x, const HpReal& q) {
    const HpReal one(1.0, q.bits());
    return (one - pow(q, x)) / (one - q);
}

// 10^{-k} at the given precision.
HpReal ten_pow_neg(int k, mpfr_prec_t bits) {
    return pow_int(HpReal(10.0, bits), -k);
}

// Stirling numbers of the second kind S(n, k) for 0 <= k <= n <= order + 1.
std::vector<std::vector<HpReal>> stirling2(int max_n, mpfr_prec_t bits) {
    // Entries stay below 10^{90} for max_n <= 62; 400 bits hold them exactly.
    const mpfr_prec_t exact_bits = std::max<mpfr_prec_t>(bits, 400);
    std::vector<std::vector<HpReal>> s;
    for (int n = 0; n <= max_n; ++n) {
        s.emplace_back();
        for (int k = 0; k <= max_n; ++k) {
            s.back().emplace_back(exact_bits);
        }
    }
    mpfr_set_ui(s[0][0].get(), 1, MPFR_RNDN);
    for (int n = 1; n <= max_n; ++n) {
        for (int k = 1; k <= n; ++k) {
            HpReal v = HpReal::from_int(k, exact_bits) * s[n - 1][k];
            v += s[n - 1][k - 1];
            s[n][k] = v;
        }
    }
    return s;
}

// Bernoulli number B_{2k} = (-1)^{k+1} 2 (2k)! zeta(2k) / (2 pi)^{2k}.
HpReal bernoulli_even(int k, mpfr_prec_t bits) {
    HpReal fact = HpReal::from_int(1, bits);
    for (int i = 2; i <= 2 * k; ++i) {
        fact *= HpReal::from_int(i, bits);
    }
    const HpReal two_pi = HpReal(2.0, bits) * pi(bits);
    HpReal b = HpReal(2.0, bits) * fact * zeta_ui(static_cast<unsigned long>(2 * k), bits) / pow_int(two_pi, 2 * k);
    return (k % 2 == 1) ? b : -b;
}

// sum_{n>=0} (n + t)^{-s} for integer s >= 2: direct terms, then Euler-Maclaurin.
HpReal hurwitz_zeta(int s, const HpReal& t, const Precision& prec) {
    const mpfr_prec_t bits = t.bits();
    const int direct = 60 + prec.digits();
    HpReal sum(bits);
    for (int n = direct - 1; n >= 0; --n) {
        sum += pow_int(HpReal::from_int(n, bits) + t, -s);
    }
    const HpReal a = HpReal::from_int(direct, bits) + t;
    sum += pow_int(a, 1 - s) / HpReal::from_int(s - 1, bits);
    sum += pow_int(a, -s) / HpReal(2.0, bits);
    // -B_{2k}/(2k)! f^{(2k-1)}(a) with f^{(j)}(a) = (-1)^j s (s+1)...(s+j-1) a^{-s-j}
    const HpReal cutoff = ten_pow_neg(prec.digits() + kGuardDigits, bits) * abs(sum);
    HpReal rising = HpReal::from_int(s, bits);
    HpReal fact = HpReal(2.0, bits);
    for (int k = 1; k < 200; ++k) {
        const int j = 2 * k - 1;
        if (k > 1) {
            rising *= HpReal::from_int(static_cast<long long>(s + j - 2) * (s + j - 1), bits);
            fact *= HpReal::from_int(static_cast<long long>(2 * k - 1) * (2 * k), bits);
        }
        const HpReal term = bernoulli_even(k, bits) / fact * rising * pow_int(a, -s - j);
        sum += term;
        if (abs(term) < cutoff) {
            break;
        }
    }
    return sum;
}

}  // namespace

Precision::Precision(int digits) : digits_(digits) {
    if (digits < 30 || digits > 200) {
        throw ConfigError("precision must be between 30 and 200 digits, got " + std::to_string(digits));
    }
}

FDResult fd_derivative(const std::function<double(double)>& f, double t, const FDScheme& scheme) {
    if (scheme.richardson_levels < 0 || scheme.richardson_levels > 4) {
        throw DomainError("fd_derivative: richardson_levels must lie in [0, 4]");
    }
    const double h = scheme.step.value_or(1e-5 * std::max(1.0, std::abs(t)));
    const double ulp = std::nextafter(std::abs(t), std::numeric_limits<double>::infinity()) - std::abs(t);
    if (!(h > 0.0) || h < 1e3 * ulp) {
        throw DomainError("fd_derivative: step " + pqspecial::detail::format_double(h) + " is below 1e3 ulp(t)");
    }

    double max_abs_f = 0.0;
    auto eval = [&](double x) {
        const double v = f(x);
        max_abs_f = std::max(max_abs_f, std::abs(v));
        return v;
    };
    auto stencil = [&](double step) {
        if (scheme.order == FDOrder::second) {
            return (eval(t + step) - eval(t - step)) / (2.0 * step);
        }
        return (-eval(t + 2.0 * step) + 8.0 * eval(t + step) - 8.0 * eval(t - step) + eval(t - 2.0 * step)) /
               (12.0 * step);
    };
    const int base_order = scheme.order == FDOrder::second ? 2 : 4;
    const int levels = scheme.richardson_levels;

    // Neville-style table over steps h, h/2, ..., h/2^levels; error terms go as h^{base}, h^{base+2}, ...
    std::vector<std::vector<double>> table(static_cast<std::size_t>(levels) + 1);
    double step = h;
    for (int i = 0; i <= levels; ++i, step *= 0.5) {
        table[i].push_back(stencil(step));
        for (int j = 1; j <= i; ++j) {
            const double factor = std::ldexp(1.0, base_order + 2 * (j - 1));
            table[i].push_back((factor * table[i][j - 1] - table[i - 1][j - 1]) / (factor - 1.0));
        }
    }
    const double value = table[levels][levels];
    double truncation = 0.0;
    if (levels == 0) {
        truncation = std::abs(value - stencil(2.0 * h));
    } else {
        truncation = std::abs(value - table[levels][levels - 1]);
    }
    const double smallest_step = std::ldexp(h, -levels);
    const double roundoff =
        4.0 * (1.0 + levels) * std::numeric_limits<double>::epsilon() * max_abs_f / smallest_step;
    return {value, truncation + roundoff};
}

namespace {

HpReal psi_pq_at(const HpReal& tt, const PQParams& params, int m, DigammaSeries series) {
    const mpfr_prec_t bits = tt.bits();
    const HpReal one(1.0, bits);
    const HpReal q(params.q().value(), bits);
    const HpReal lq = log(q);
    const std::int64_t p = params.p();

    HpReal sum(bits);
    if (series == DigammaSeries::truncated) {
        for (std::int64_t n = 1; n <= p; ++n) {
            const HpReal nn = HpReal::from_int(n, bits);
            HpReal term = exp(nn * tt * lq) / (one - exp(nn * lq));
            if (m > 0) {
                term *= pow_int(nn, m);
            }
            sum += term;
        }
    } else if (m == 0) {
        for (std::int64_t n = 0; n <= p; ++n) {
            const HpReal z = exp((tt + HpReal::from_int(n, bits)) * lq);
            sum += z / (one - z);
        }
    } else {
        const auto s2 = stirling2(m + 1, bits);
        std::vector<HpReal> coeff;  // k! S(m+1, k+1)
        HpReal fact = HpReal::from_int(1, bits);
        for (int k = 0; k <= m; ++k) {
            if (k > 0) {
                fact *= HpReal::from_int(k, bits);
            }
            HpReal c(bits);
            mpfr_set(c.get(), s2[m + 1][k + 1].get(), MPFR_RNDN);
            coeff.push_back(fact * c);
        }
        for (std::int64_t n = 0; n <= p; ++n) {
            const HpReal z = exp((tt + HpReal::from_int(n, bits)) * lq);
            const HpReal y = z / (one - z);
            HpReal li(bits);
            HpReal y_pow = y;
            for (int k = 0; k <= m; ++k) {
                li += coeff[k] * y_pow;
                y_pow *= y;
            }
            sum += li;
        }
    }

    HpReal value = pow_int(lq, m + 1) * sum;
    if (m == 0) {
        value += log(q_number(HpReal::from_int(p, bits), q));
    }
    return value;
}

HpReal log_gamma_pq_at(const HpReal& tt, const PQParams& params) {
    const mpfr_prec_t bits = tt.bits();
    const HpReal q(params.q().value(), bits);
    const std::int64_t p = params.p();
    HpReal value = tt * log(q_number(HpReal::from_int(p, bits), q));
    for (std::int64_t k = 1; k <= p; ++k) {
        value += log(q_number(HpReal::from_int(k, bits), q));
    }
    for (std::int64_t n = 0; n <= p; ++n) {
        value -= log(q_number(tt + HpReal::from_int(n, bits), q));
    }
    return value;
}

void require_order(int m, int lo, const char* fn) {
    if (m < lo || m > DerivativeOrder::kMax) {
        throw OrderError(std::string(fn) + ": m must lie in [" + std::to_string(lo) + ", " +
                         std::to_string(DerivativeOrder::kMax) + "]");
    }
}

}  // namespace

std::string hp_psi_pq(double t, const PQParams& params, const Precision& prec, int m, DigammaSeries series) {
    require_positive_t(t, "hp_psi_pq");
    require_order(m, 0, "hp_psi_pq");
    const HpReal value = psi_pq_at(HpReal(t, working_bits(prec)), params, m, series);
    return detail::to_scientific(value, prec.digits());
}

std::string hp_fd_derivative_pq(double t, const PQParams& params, int m, const Precision& prec) {
    require_positive_t(t, "hp_fd_derivative_pq");
    require_order(m, 0, "hp_fd_derivative_pq");
    const mpfr_prec_t bits = working_bits(prec);
    auto f = [&](const HpReal& x) {
        return m == 0 ? log_gamma_pq_at(x, params) : psi_pq_at(x, params, m - 1, DigammaSeries::exact);
    };
    // Step 10^{-digits/4} max(1, t): truncation O(h^4) and cancellation
    // O(10^{-digits}/h) both stay far below the requested digits.
    HpReal h = ten_pow_neg(prec.digits() / 4, bits) * HpReal(std::max(1.0, t), bits);
    const HpReal tt(t, bits);
    const HpReal two = HpReal::from_int(2, bits);
    const HpReal eight = HpReal::from_int(8, bits);
    const HpReal twelve = HpReal::from_int(12, bits);
    if (!(h * two < tt)) {
        h = tt / HpReal::from_int(4, bits);
    }
    const HpReal value =
        (eight * (f(tt + h) - f(tt - h)) - (f(tt + two * h) - f(tt - two * h))) / (twelve * h);
    return detail::to_scientific(value, prec.digits());
}

std::string hp_log_q_number(double x, const QParam& q, const Precision& prec) {
    if (!std::isfinite(x) || !(x > 0.0)) {
        throw DomainError("hp_log_q_number: x must be > 0");
    }
    const mpfr_prec_t bits = working_bits(prec);
    return detail::to_scientific(log(q_number(HpReal(x, bits), HpReal(q.value(), bits))), prec.digits());
}

std::string hp_log_q_factorial(std::int64_t p, const QParam& q, const Precision& prec) {
    if (p < 1) {
        throw DomainError("hp_log_q_factorial: p must be >= 1");
    }
    const mpfr_prec_t bits = working_bits(prec);
    const HpReal qq(q.value(), bits);
    HpReal sum(bits);
    for (std::int64_t k = 1; k <= p; ++k) {
        sum += log(q_number(HpReal::from_int(k, bits), qq));
    }
    return detail::to_scientific(sum, prec.digits());
}

std::string hp_log_gamma_pq(double t, const PQParams& params, const Precision& prec) {
    require_positive_t(t, "hp_log_gamma_pq");
    return detail::to_scientific(log_gamma_pq_at(HpReal(t, working_bits(prec)), params), prec.digits());
}

std::string hp_log_gamma_p(double t, std::int64_t p, const Precision& prec) {
    require_positive_t(t, "hp_log_gamma_p");
    if (p < 1) {
        throw DomainError("hp_log_gamma_p: p must be >= 1");
    }
    const mpfr_prec_t bits = working_bits(prec);
    const HpReal tt(t, bits);
    HpReal value = tt * log(HpReal::from_int(p, bits));
    for (std::int64_t k = 2; k <= p; ++k) {
        value += log(HpReal::from_int(k, bits));
    }
    for (std::int64_t n = 0; n <= p; ++n) {
        value -= log(tt + HpReal::from_int(n, bits));
    }
    return detail::to_scientific(value, prec.digits());
}

std::string hp_log_gamma_q(double t, const QParam& q, const Precision& prec, GammaQConvention convention) {
    require_positive_t(t, "hp_log_gamma_q");
    const mpfr_prec_t bits = working_bits(prec);
    const HpReal one(1.0, bits);
    const HpReal qq(q.value(), bits);
    const HpReal tt(t, bits);
    const HpReal lq = log(qq);
    const bool standard = convention == GammaQConvention::standard;
    const HpReal shift(standard ? 1.0 : 0.0, bits);
    // Factors differ from 1 by O(q^n); the tail after n is at most |term| q / (1-q).
    const HpReal tail_factor = qq / (one - qq);
    const HpReal cutoff = ten_pow_neg(prec.digits() + 5, bits);

    HpReal value = (one - tt) * log(one - qq);
    for (std::int64_t n = standard ? 0 : 1; n < 100'000'000; ++n) {
        const HpReal nn = HpReal::from_int(n, bits);
        const HpReal term = log(one - exp((shift + nn) * lq)) - log(one - exp((tt + nn) * lq));
        value += term;
        if (abs(term) * tail_factor < cutoff) {
            break;
        }
    }
    return detail::to_scientific(value, prec.digits());
}

std::string hp_euler_gamma(const Precision& prec) {
    const mpfr_prec_t bits = working_bits(prec);
    constexpr int n = 2000;
    HpReal harmonic(bits);
    for (int k = n; k >= 1; --k) {
        harmonic += HpReal::from_int(1, bits) / HpReal::from_int(k, bits);
    }
    const HpReal nn = HpReal::from_int(n, bits);
    // gamma = H_n - ln n - 1/(2n) + sum_k B_{2k} / (2k n^{2k})
    HpReal value = harmonic - log(nn) - HpReal(0.5, bits) / nn;
    const HpReal cutoff = ten_pow_neg(prec.digits() + kGuardDigits, bits);
    for (int k = 1; k < 200; ++k) {
        const HpReal term = bernoulli_even(k, bits) / (HpReal::from_int(2 * k, bits) * pow_int(nn, 2 * k));
        value += term;
        if (abs(term) < cutoff) {
            break;
        }
    }
    return detail::to_scientific(value, prec.digits());
}

std::string hp_psi_classical(double t, int m, const Precision& prec) {
    require_positive_t(t, "hp_psi_classical");
    if (m < 0 || m > DerivativeOrder::kMax) {
        throw OrderError("hp_psi_classical: m must lie in [0, " + std::to_string(DerivativeOrder::kMax) + "]");
    }
    const mpfr_prec_t bits = working_bits(prec);
    const HpReal tt(t, bits);
    if (m == 0) {
        return detail::to_scientific(digamma(tt), prec.digits());
    }
    HpReal fact = HpReal::from_int(1, bits);
    for (int k = 2; k <= m; ++k) {
        fact *= HpReal::from_int(k, bits);
    }
    HpReal value = fact * hurwitz_zeta(m + 1, tt, prec);
    if (m % 2 == 0) {
        value = -value;
    }
    return detail::to_scientific(value, prec.digits());
}

std::string hp_zeta(int s, const Precision& prec) {
    if (s < 2) {
        throw DomainError("hp_zeta: s must be >= 2");
    }
    return detail::to_scientific(detail::zeta_ui(static_cast<unsigned long>(s), working_bits(prec)), prec.digits());
}

double to_double(const std::string& decimal) {
    return std::strtod(decimal.c_str(), nullptr);
}

}  // namespace pqspecial::oracle
