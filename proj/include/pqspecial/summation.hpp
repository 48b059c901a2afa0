#pragma once

#include <cmath>
#include <limits>

namespace pqspecial::detail {

// Neumaier's variant of Kahan summation. The running compensation also
// captures the case where the incoming term is larger than the partial sum.
class CompensatedSum {
   public:
    void add(double x) noexcept {
        const double t = sum_ + x;
        if (std::abs(sum_) >= std::abs(x)) {
            comp_ += (sum_ - t) + x;
        } else {
            comp_ += (x - t) + sum_;
        }
        sum_ = t;
        abs_sum_ += std::abs(x);
        ++count_;
    }

    [[nodiscard]] double value() const noexcept { return sum_ + comp_; }
    [[nodiscard]] double abs_total() const noexcept { return abs_sum_; }
    [[nodiscard]] long long count() const noexcept { return count_; }

    // A priori bound on the rounding error of the compensated result.
    [[nodiscard]] double error_bound() const noexcept {
        constexpr double eps = std::numeric_limits<double>::epsilon();
        return eps * std::abs(value()) + 2.0 * eps * eps * static_cast<double>(count_) * abs_sum_;
    }

   private:
    double sum_ = 0.0;
    double comp_ = 0.0;
    double abs_sum_ = 0.0;
    long long count_ = 0;
};

// Accumulates exp(x_i) without forming the exponentials. Terms are rescaled
// against the running maximum so the sum never overflows.
class LogSumExp {
   public:
    void add(double log_term) noexcept {
        ++count_;
        if (log_term == -std::numeric_limits<double>::infinity()) {
            return;
        }
        if (log_term <= max_) {
            acc_.add(std::exp(log_term - max_));
            return;
        }
        const double rescale = std::exp(max_ - log_term);
        CompensatedSum rescaled;
        rescaled.add(acc_.value() * rescale);
        rescaled.add(1.0);
        acc_ = rescaled;
        max_ = log_term;
    }

    // log(sum exp(x_i)); -inf when every term was -inf.
    [[nodiscard]] double log_value() const noexcept {
        if (max_ == -std::numeric_limits<double>::infinity()) {
            return max_;
        }
        return max_ + std::log(acc_.value());
    }

    [[nodiscard]] long long count() const noexcept { return count_; }

   private:
    double max_ = -std::numeric_limits<double>::infinity();
    CompensatedSum acc_;
    long long count_ = 0;
};

}  // namespace pqspecial::detail
