#include "pqspecial/qnum.hpp"

#include <cmath>
#include <string>

#include "pqspecial/errors.hpp"
#include "pqspecial/summation.hpp"

namespace pqspecial {

QParam::QParam(double q) : q_(q), log_q_(0.0), one_minus_q_(0.0) {
    if (!std::isfinite(q) || !(q > 0.0) || !(q < 1.0)) {
        throw DomainError("q must lie in the open interval (0, 1), got " + detail::format_double(q));
    }
    log_q_ = std::log(q);
    one_minus_q_ = -std::expm1(log_q_);
}

PQParams::PQParams(std::int64_t p, QParam q) : p_(p), q_(q) {
    if (p < 1) {
        throw DomainError("p must be a positive integer, got " + std::to_string(p));
    }
}

double one_minus_q_pow(double x, const QParam& q) noexcept {
    return -std::expm1(x * q.log());
}

double q_number(double x, const QParam& q) {
    if (!std::isfinite(x) || x < 0.0) {
        throw DomainError("q_number requires finite x >= 0, got " + detail::format_double(x));
    }
    return one_minus_q_pow(x, q) / q.complement();
}

double log_q_number(double x, const QParam& q) {
    if (!std::isfinite(x) || !(x > 0.0)) {
        throw DomainError("log_q_number requires finite x > 0, got " + detail::format_double(x));
    }
    const double u = x * q.log();
    if (u > -1e-5) {
        // [x]_q = x |ln q| / (1 - q) * expm1(u) / u, with the last factor from
        // its series so nothing is formed on the subnormal grid.
        return std::log(x) + std::log(-q.log()) - std::log(q.complement()) + std::log1p(u / 2.0 + u * u / 6.0);
    }
    return std::log(q_number(x, q));
}

double log_q_factorial(std::int64_t p, const QParam& q) {
    if (p < 1) {
        throw DomainError("log_q_factorial requires p >= 1, got " + std::to_string(p));
    }
    detail::CompensatedSum sum;
    for (std::int64_t k = 2; k <= p; ++k) {
        sum.add(log_q_number(static_cast<double>(k), q));
    }
    return sum.value();
}

}  // namespace pqspecial
