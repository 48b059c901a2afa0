#pragma once

#include <cstdint>

namespace pqspecial {

/// A function value together with the diagnostics of the series that produced it.
struct EvalResult {
    double value = 0.0;
    std::int64_t terms_used = 1;
    /// Estimated absolute rounding error of `value` (truncation error excluded).
    double est_round_err = 0.0;
};

/// Stopping rule for infinite series and products.
///
/// `eps` is an absolute bound on the neglected tail; `max_terms` caps the work
/// before ToleranceNotReached is raised.
class TailTolerance {
   public:
    TailTolerance() = default;
    TailTolerance(double eps, std::int64_t max_terms);

    [[nodiscard]] double eps() const noexcept { return eps_; }
    [[nodiscard]] std::int64_t max_terms() const noexcept { return max_terms_; }

   private:
    double eps_ = 1e-15;
    std::int64_t max_terms_ = 1'000'000;
};

}  // namespace pqspecial
