#include "pqspecial/limits.hpp"

#include <cctype>
#include <cmath>
#include <exception>
#include <functional>
#include <string>

#include "pqspecial/errors.hpp"
#include "pqspecial/parallel.hpp"

namespace pqspecial {

LimitSchedule::LimitSchedule(std::vector<std::pair<std::int64_t, double>> entries, std::string description)
    : entries_(std::move(entries)), description_(std::move(description)) {
    if (entries_.size() < 2) {
        throw ConfigError("a limit schedule needs at least two entries");
    }
    for (std::size_t i = 0; i < entries_.size(); ++i) {
        const auto [p, q] = entries_[i];
        if (p < 1 || !(q > 0.0 && q < 1.0)) {
            throw ConfigError("schedule entry " + std::to_string(i + 1) + " needs p >= 1 and q in (0, 1)");
        }
        if (i > 0 && !(p > entries_[i - 1].first)) {
            throw ConfigError("schedule p values must be strictly increasing (entry " + std::to_string(i + 1) + ")");
        }
        if (i > 0 && !(q > entries_[i - 1].second)) {
            throw ConfigError("schedule q values must be strictly increasing (entry " + std::to_string(i + 1) + ")");
        }
    }
}

LimitSchedule LimitSchedule::standard(int levels) {
    std::vector<std::pair<std::int64_t, double>> entries;
    std::int64_t p = 1;
    for (int k = 1; k <= levels; ++k) {
        p *= 10;
        entries.emplace_back(p, 1.0 - std::pow(10.0, -k));
    }
    return LimitSchedule(std::move(entries), "p = 10^k, q = 1 - 10^-k");
}

std::string_view to_string(RecoveryFunction f) noexcept {
    switch (f) {
        case RecoveryFunction::psi_pq:
            return "psi_pq";
        case RecoveryFunction::psi_pq_m:
            return "psi_pq_m";
        case RecoveryFunction::t1:
            return "t1";
        case RecoveryFunction::t2:
            return "t2";
        case RecoveryFunction::t3:
            return "t3";
        case RecoveryFunction::t4:
            return "t4";
    }
    return "?";
}

RecoveryFunction parse_recovery_function(std::string_view text) {
    std::string lower(text);
    for (char& c : lower) {
        c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    }
    for (auto f : {RecoveryFunction::psi_pq, RecoveryFunction::psi_pq_m, RecoveryFunction::t1, RecoveryFunction::t2,
                   RecoveryFunction::t3, RecoveryFunction::t4}) {
        if (lower == to_string(f)) {
            return f;
        }
    }
    throw ConfigError("unknown limit function '" + std::string(text) + "' (expected psi_pq, psi_pq_m, t1..t4)");
}

bool strictly_decreasing(const std::vector<ConvergenceRow>& rows) {
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (rows[i].error) {
            return false;
        }
        if (i > 0 && !(rows[i].abs_err < rows[i - 1].abs_err)) {
            return false;
        }
    }
    return !rows.empty();
}

namespace {

TheoremId pq_theorem(RecoveryFunction f) {
    switch (f) {
        case RecoveryFunction::t1:
            return TheoremId::T1;
        case RecoveryFunction::t2:
            return TheoremId::T2;
        case RecoveryFunction::t3:
            return TheoremId::T3;
        default:
            return TheoremId::T4;
    }
}

TheoremId classical_of(TheoremId id) {
    return static_cast<TheoremId>(static_cast<int>(id) + 4);
}

double classical_target(RecoveryFunction func, const RecoveryPoint& point) {
    switch (func) {
        case RecoveryFunction::psi_pq:
            return psi_classical(point.t);
        case RecoveryFunction::psi_pq_m:
            return psi_m_classical(point.t, DerivativeOrder(point.m));
        default: {
            const TheoremId c = classical_of(pq_theorem(func));
            return classical_margin(c, point.s, point.t, point.m).margin;
        }
    }
}

double pq_value(RecoveryFunction func, const RecoveryPoint& point, const PQParams& params, DigammaSeries series) {
    MarginOptions opts;
    opts.series = series;
    switch (func) {
        case RecoveryFunction::psi_pq:
            return psi_pq(point.t, params, series).value;
        case RecoveryFunction::psi_pq_m:
            return psi_pq_m(point.t, params, DerivativeOrder(point.m), series).value;
        case RecoveryFunction::t1:
            return t1_margin(point.s, point.t, params, opts).margin;
        case RecoveryFunction::t2:
            return t2_margin(point.s, point.t, point.m, params, opts).margin;
        case RecoveryFunction::t3:
            return t3_margin(point.s, point.t, point.m, params, opts).margin;
        case RecoveryFunction::t4:
            return t4_margin(point.s, point.t, point.m, params, opts).margin;
    }
    return 0.0;
}

void fill_row(ConvergenceRow& row, double target, const std::function<double()>& value) {
    row.target = target;
    try {
        row.value = value();
        row.abs_err = std::abs(row.value - target);
    } catch (const std::exception& e) {
        row.error = e.what();
    }
}

}  // namespace

RecoveryTable recovery_table(RecoveryFunction func, const RecoveryPoint& point, const LimitSchedule& schedule,
                             DigammaSeries series, unsigned threads) {
    // The classical target is a precondition check as well: a bad point throws here.
    const double target = classical_target(func, point);
    RecoveryTable table;
    table.rows.resize(schedule.size());
    parallel_for(
        schedule.size(),
        [&](std::size_t i) {
            auto& row = table.rows[i];
            row.k = static_cast<int>(i) + 1;
            row.p = schedule.entries()[i].first;
            row.q = schedule.entries()[i].second;
            fill_row(row, target, [&] { return pq_value(func, point, PQParams(row.p, row.q), series); });
        },
        threads);
    table.strictly_decreasing = strictly_decreasing(table.rows);
    return table;
}

RecoveryTable fixed_q_slice(double t, double q, const std::vector<std::int64_t>& p_values, DigammaSeries series) {
    const QParam qp(q);
    const double target = psi_q(t, qp).value;
    RecoveryTable table;
    for (std::size_t i = 0; i < p_values.size(); ++i) {
        ConvergenceRow row;
        row.k = static_cast<int>(i) + 1;
        row.p = p_values[i];
        row.q = q;
        fill_row(row, target, [&] { return psi_pq(t, PQParams(row.p, qp), series).value; });
        table.rows.push_back(row);
    }
    table.strictly_decreasing = strictly_decreasing(table.rows);
    return table;
}

RecoveryTable fixed_p_slice(double t, std::int64_t p, const std::vector<double>& q_values, DigammaSeries series) {
    const double target = psi_p(t, p);
    RecoveryTable table;
    for (std::size_t i = 0; i < q_values.size(); ++i) {
        ConvergenceRow row;
        row.k = static_cast<int>(i) + 1;
        row.p = p;
        row.q = q_values[i];
        fill_row(row, target, [&] { return psi_pq(t, PQParams(p, row.q), series).value; });
        table.rows.push_back(row);
    }
    table.strictly_decreasing = strictly_decreasing(table.rows);
    return table;
}

}  // namespace pqspecial
