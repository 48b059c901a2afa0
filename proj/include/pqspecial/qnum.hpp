#pragma once

#include <cstdint>

namespace pqspecial {

/// Deformation parameter q, validated to lie strictly inside (0, 1).
///
/// The logarithm ln q and the complement 1 - q are cached because every
/// q-number and series term is built from them.
class QParam {
   public:
    /// Throws DomainError unless 0 < q < 1 and q is finite.
    explicit QParam(double q);

    [[nodiscard]] double value() const noexcept { return q_; }
    /// ln q, always negative.
    [[nodiscard]] double log() const noexcept { return log_q_; }
    /// 1 - q evaluated as -expm1(ln q), consistent with the numerators of [x]_q.
    [[nodiscard]] double complement() const noexcept { return one_minus_q_; }

    friend bool operator==(const QParam&, const QParam&) = default;

   private:
    double q_;
    double log_q_;
    double one_minus_q_;
};

/// The (p, q) pair: p is the number of factors in the finite products, p >= 1.
class PQParams {
   public:
    PQParams(std::int64_t p, QParam q);
    PQParams(std::int64_t p, double q) : PQParams(p, QParam(q)) {}

    [[nodiscard]] std::int64_t p() const noexcept { return p_; }
    [[nodiscard]] const QParam& q() const noexcept { return q_; }

    friend bool operator==(const PQParams&, const PQParams&) = default;

   private:
    std::int64_t p_;
    QParam q_;
};

/// 1 - q^x for x >= 0, without cancellation as q -> 1 or x -> 0.
[[nodiscard]] double one_minus_q_pow(double x, const QParam& q) noexcept;

/// [x]_q = (1 - q^x) / (1 - q) for real x >= 0.
[[nodiscard]] double q_number(double x, const QParam& q);

/// ln [x]_q for x > 0. Stays finite where [x]_q itself would underflow.
[[nodiscard]] double log_q_number(double x, const QParam& q);

/// ln [p]_q! = sum_{k=1..p} ln [k]_q, accumulated with compensation.
[[nodiscard]] double log_q_factorial(std::int64_t p, const QParam& q);

}  // namespace pqspecial
