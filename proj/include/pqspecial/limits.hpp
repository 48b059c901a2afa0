#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "pqspecial/digamma_family.hpp"
#include "pqspecial/inequality.hpp"

namespace pqspecial {

/// Ordered (p_k, q_k) pairs along which p -> infinity and q -> 1^- together.
class LimitSchedule {
   public:
    /// Throws ConfigError unless there are >= 2 entries, p strictly increasing,
    /// and q strictly increasing inside (0, 1).
    LimitSchedule(std::vector<std::pair<std::int64_t, double>> entries, std::string description);

    /// p_k = 10^k, q_k = 1 - 10^{-k} for k = 1..levels (default 6).
    static LimitSchedule standard(int levels = 6);

    [[nodiscard]] const std::vector<std::pair<std::int64_t, double>>& entries() const noexcept { return entries_; }
    [[nodiscard]] const std::string& description() const noexcept { return description_; }
    [[nodiscard]] std::size_t size() const noexcept { return entries_.size(); }

   private:
    std::vector<std::pair<std::int64_t, double>> entries_;
    std::string description_;
};

struct ConvergenceRow {
    int k = 0;
    std::int64_t p = 0;
    double q = 0.0;
    double value = 0.0;
    double target = 0.0;
    double abs_err = 0.0;
    /// Set when this row failed to evaluate; value and abs_err are then meaningless.
    std::optional<std::string> error;
};

/// Quantity tracked along a schedule.
enum class RecoveryFunction { psi_pq, psi_pq_m, t1, t2, t3, t4 };

[[nodiscard]] std::string_view to_string(RecoveryFunction f) noexcept;
/// Accepts psi_pq, psi_pq_m, t1..t4 (case-insensitive).
[[nodiscard]] RecoveryFunction parse_recovery_function(std::string_view text);

struct RecoveryPoint {
    double t = 1.0;
    /// Used by the margin functions.
    double s = 0.5;
    /// Used by psi_pq_m and t2..t4.
    int m = 1;
};

struct RecoveryTable {
    std::vector<ConvergenceRow> rows;
    /// True when every row evaluated and abs_err strictly decreases.
    bool strictly_decreasing = false;
};

/// Evaluates `func` at `point` for each schedule entry against its classical
/// counterpart (psi, psi^{(m)} or the C1..C4 margin). Row failures are
/// recorded in the row instead of aborting the table.
[[nodiscard]] RecoveryTable recovery_table(RecoveryFunction func, const RecoveryPoint& point,
                                           const LimitSchedule& schedule,
                                           DigammaSeries series = DigammaSeries::exact, unsigned threads = 0);

/// |psi_pq(t, (p, q)) - psi_q(t, q)| for increasing p at fixed q.
[[nodiscard]] RecoveryTable fixed_q_slice(double t, double q, const std::vector<std::int64_t>& p_values,
                                          DigammaSeries series = DigammaSeries::exact);

/// |psi_pq(t, (p, q)) - psi_p(t, p)| for q -> 1^- at fixed p.
[[nodiscard]] RecoveryTable fixed_p_slice(double t, std::int64_t p, const std::vector<double>& q_values,
                                          DigammaSeries series = DigammaSeries::exact);

/// True when every row evaluated and abs_err is strictly decreasing down the rows.
[[nodiscard]] bool strictly_decreasing(const std::vector<ConvergenceRow>& rows);

}  // namespace pqspecial
