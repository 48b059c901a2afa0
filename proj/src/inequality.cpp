#include "pqspecial/inequality.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <cmath>
#include <limits>
#include <random>
#include <string>

#include "pqspecial/errors.hpp"
#include "pqspecial/parallel.hpp"
#include "pqspecial/summation.hpp"

namespace pqspecial {

namespace {

constexpr std::array<std::string_view, 8> kNames = {"T1", "T2", "T3", "T4", "C1", "C2", "C3", "C4"};

void require_positive(double v, const char* what) {
    if (!std::isfinite(v) || !(v > 0.0)) {
        throw DomainError(std::string(what) + " must be > 0, got " + detail::format_double(v));
    }
}

void check_s_hypothesis(TheoremId id, double s) {
    if (id == TheoremId::T1 && !(s <= 1.0)) {
        throw HypothesisError("T1 requires 0 < s <= 1, got s = " + detail::format_double(s));
    }
    if (id == TheoremId::C1 && !(s < 1.0)) {
        throw HypothesisError("C1 requires 0 < s < 1, got s = " + detail::format_double(s));
    }
}

void check_parity(TheoremId id, int m) {
    const auto parity = required_parity(id);
    if (!parity) {
        return;
    }
    if (m < 1) {
        throw OrderError(std::string(to_string(id)) + " requires a positive derivative order, got m = " +
                         std::to_string(m));
    }
    if ((m % 2) != *parity) {
        throw OrderError(std::string(to_string(id)) + " requires " + (*parity == 1 ? "odd" : "even") +
                         " m, got m = " + std::to_string(m));
    }
}

double tolerance(double scale, double lhs, double rhs) {
    return scale * std::max({1.0, std::abs(lhs), std::abs(rhs)});
}

// Builds a report from the three function values f(s), f(t), f(s+t).
InequalityReport assemble(TheoremId id, const SampleInputs& in, double fs, double ft, double fst,
                          const MarginOptions& opts) {
    InequalityReport r;
    r.theorem = id;
    r.inputs = in;
    switch (id) {
        case TheoremId::T1:
        case TheoremId::C1:
        case TheoremId::T3:
        case TheoremId::C3:
            r.lhs = fst;
            r.rhs = fs + ft;
            r.margin = r.lhs - r.rhs;
            break;
        case TheoremId::T2:
        case TheoremId::C2:
            r.lhs = fst;
            r.rhs = fs + ft;
            r.margin = r.rhs - r.lhs;
            break;
        case TheoremId::T4:
        case TheoremId::C4: {
            r.lhs = fs * ft;
            r.rhs = fst * fst;
            r.margin = r.lhs - r.rhs;
            const double chain_tol = opts.tol_scale * std::max({1.0, std::abs(fs), std::abs(ft)});
            r.chain = ProductChain{fs - fst >= -chain_tol && fst >= -chain_tol,
                                   ft - fst >= -chain_tol && fst >= -chain_tol};
            break;
        }
    }
    if (!std::isfinite(r.lhs) || !std::isfinite(r.rhs)) {
        throw OverflowError(std::string(to_string(id)) + ": sides of the inequality are not finite");
    }
    r.tol = tolerance(opts.tol_scale, r.lhs, r.rhs);
    r.holds = r.margin >= -r.tol;
    return r;
}

InequalityReport pq_report(TheoremId id, double s, double t, int m, const PQParams& params,
                           const MarginOptions& opts) {
    require_positive(s, "s");
    require_positive(t, "t");
    if (opts.enforce_hypotheses) {
        check_s_hypothesis(id, s);
        check_parity(id, m);
    }
    const int order = id == TheoremId::T1 ? 0 : m;
    const double fs = polygamma_pq(s, params, order, opts.series).value;
    const double ft = polygamma_pq(t, params, order, opts.series).value;
    const double fst = polygamma_pq(s + t, params, order, opts.series).value;
    SampleInputs in{s, t, params.p(), params.q().value(), std::nullopt};
    if (id != TheoremId::T1) {
        in.m = m;
    }
    return assemble(id, in, fs, ft, fst, opts);
}

// psi^{(k)}(s+t) - psi^{(k)}(t) for k >= 1 as a termwise sum. Every term has
// the sign (-1)^k: the factor (ln q)^{k+1} times a negative bracket.
double witness_sum(double s, double t, int k, const PQParams& params, DigammaSeries series) {
    const QParam& q = params.q();
    const double lq = q.log();
    const double sign = (k % 2 == 0) ? 1.0 : -1.0;

    if (series == DigammaSeries::truncated) {
        // (ln q)^{k+1} sum_{n=1..p} n^k q^{nt} (q^{ns} - 1) / (1 - q^n)
        const double log_abs_lq = std::log(-lq);
        detail::LogSumExp lse;
        for (std::int64_t n = 1; n <= params.p(); ++n) {
            const double nd = static_cast<double>(n);
            lse.add((k + 1) * log_abs_lq + k * std::log(nd) + nd * t * lq + std::log(-std::expm1(nd * s * lq)) -
                    std::log(-std::expm1(nd * lq)));
        }
        return sign * std::exp(lse.log_value());
    }

    // (ln q)^{k+1} sum_{n=0..p} [Li_{-k}(q^{s+t+n}) - Li_{-k}(q^{t+n})]; each bracket is
    // -|near| * (1 - exp(ln|far| - ln|near|)), scaled against the n = 0 magnitude.
    constexpr double kEps = std::numeric_limits<double>::epsilon();
    const double log_tail_factor = std::log(q.value() / q.complement());
    const double reference = detail::log_polylog_term(t, k, q);
    detail::CompensatedSum acc;
    for (std::int64_t n = 0; n <= params.p(); ++n) {
        const double nd = static_cast<double>(n);
        const double log_near = detail::log_polylog_term(t + nd, k, q);
        const double log_far = detail::log_polylog_term(s + t + nd, k, q);
        const double bracket = std::exp(log_near - reference) * -std::expm1(log_far - log_near);
        acc.add(bracket);
        // Brackets are bounded by the near terms, which shrink at least by q per step.
        if (n > 0 && log_near + log_tail_factor - reference < std::log(kEps * kEps * std::abs(acc.value()))) {
            break;
        }
    }
    return sign * std::exp(reference) * acc.value();
}

void require_order_parity(int m, int parity, const char* fn) {
    if (m < 1 || m > DerivativeOrder::kMax) {
        throw OrderError(std::string(fn) + ": m must lie in [1, " + std::to_string(DerivativeOrder::kMax) +
                         "], got " + std::to_string(m));
    }
    if (m % 2 != parity) {
        throw OrderError(std::string(fn) + " requires " + (parity == 1 ? "odd" : "even") + " m, got m = " +
                         std::to_string(m));
    }
}

// Uniform double in [0, 1) from the top 53 bits, independent of the standard
// library's distribution implementations.
double unit(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

// Uniform on (lo, hi].
double draw_interval(std::mt19937_64& rng, const Interval& iv) {
    return iv.hi - unit(rng) * (iv.hi - iv.lo);
}

std::size_t draw_index(std::mt19937_64& rng, std::size_t size) {
    return std::min(size - 1, static_cast<std::size_t>(unit(rng) * static_cast<double>(size)));
}

}  // namespace

std::string_view to_string(TheoremId id) noexcept {
    return kNames[static_cast<std::size_t>(id)];
}

TheoremId parse_theorem(std::string_view text) {
    std::string upper(text);
    for (char& c : upper) {
        c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
    }
    for (std::size_t i = 0; i < kNames.size(); ++i) {
        if (upper == kNames[i]) {
            return static_cast<TheoremId>(i);
        }
    }
    throw ConfigError("unknown theorem '" + std::string(text) + "' (expected T1..T4 or C1..C4)");
}

bool is_classical(TheoremId id) noexcept {
    return static_cast<int>(id) >= static_cast<int>(TheoremId::C1);
}

bool uses_order(TheoremId id) noexcept {
    return id != TheoremId::T1 && id != TheoremId::C1;
}

std::optional<int> required_parity(TheoremId id) noexcept {
    switch (id) {
        case TheoremId::T2:
        case TheoremId::T4:
        case TheoremId::C2:
        case TheoremId::C4:
            return 1;
        case TheoremId::T3:
        case TheoremId::C3:
            return 0;
        default:
            return std::nullopt;
    }
}

InequalityReport t1_margin(double s, double t, const PQParams& params, const MarginOptions& opts) {
    return pq_report(TheoremId::T1, s, t, 0, params, opts);
}

InequalityReport t2_margin(double s, double t, int m, const PQParams& params, const MarginOptions& opts) {
    return pq_report(TheoremId::T2, s, t, m, params, opts);
}

InequalityReport t3_margin(double s, double t, int m, const PQParams& params, const MarginOptions& opts) {
    return pq_report(TheoremId::T3, s, t, m, params, opts);
}

InequalityReport t4_margin(double s, double t, int m, const PQParams& params, const MarginOptions& opts) {
    return pq_report(TheoremId::T4, s, t, m, params, opts);
}

InequalityReport classical_margin(TheoremId theorem, double s, double t, int m, const MarginOptions& opts) {
    if (!is_classical(theorem)) {
        throw ConfigError("classical_margin expects one of C1..C4, got " + std::string(to_string(theorem)));
    }
    require_positive(s, "s");
    require_positive(t, "t");
    if (opts.enforce_hypotheses) {
        check_s_hypothesis(theorem, s);
        check_parity(theorem, m);
    }
    const int order = theorem == TheoremId::C1 ? 0 : m;
    const TailTolerance tol;
    const double fs = detail::polygamma_classical_unchecked(s, order, tol);
    const double ft = detail::polygamma_classical_unchecked(t, order, tol);
    const double fst = detail::polygamma_classical_unchecked(s + t, order, tol);
    SampleInputs in{s, t, std::nullopt, std::nullopt, std::nullopt};
    if (theorem != TheoremId::C1) {
        in.m = m;
    }
    return assemble(theorem, in, fs, ft, fst, opts);
}

InequalityReport evaluate(TheoremId theorem, const SampleInputs& inputs, const MarginOptions& opts) {
    if (uses_order(theorem) && !inputs.m) {
        throw ConfigError(std::string(to_string(theorem)) + " needs a derivative order m");
    }
    const int m = inputs.m.value_or(0);
    if (is_classical(theorem)) {
        return classical_margin(theorem, inputs.s, inputs.t, m, opts);
    }
    if (!inputs.p || !inputs.q) {
        throw ConfigError(std::string(to_string(theorem)) + " needs p and q");
    }
    return pq_report(theorem, inputs.s, inputs.t, m, PQParams(*inputs.p, *inputs.q), opts);
}

double witness_mu_prime(double s, double t, const PQParams& params, DigammaSeries series) {
    require_positive(s, "s");
    require_positive(t, "t");
    return witness_sum(s, t, 1, params, series);
}

double witness_eta_prime(double s, double t, int m, const PQParams& params, DigammaSeries series) {
    require_positive(s, "s");
    require_positive(t, "t");
    require_order_parity(m, 1, "witness_eta_prime");
    return witness_sum(s, t, m + 1, params, series);
}

double witness_lambda_prime(double s, double t, int m, const PQParams& params, DigammaSeries series) {
    require_positive(s, "s");
    require_positive(t, "t");
    require_order_parity(m, 0, "witness_lambda_prime");
    return witness_sum(s, t, m + 1, params, series);
}

double witness_t1_limit(double s, const PQParams& params, DigammaSeries series) {
    require_positive(s, "s");
    check_s_hypothesis(TheoremId::T1, s);
    return -psi_pq(s, params, series).value;
}

void SweepSpec::validate() const {
    auto check_interval = [](const Interval& iv, const char* name) {
        if (!std::isfinite(iv.lo) || !std::isfinite(iv.hi) || iv.lo < 0.0 || !(iv.lo < iv.hi)) {
            throw ConfigError(std::string(name) + " must satisfy 0 <= lo < hi");
        }
    };
    check_interval(s_range, "s_range");
    check_interval(t_range, "t_range");
    if (p_values.empty() || q_values.empty() || m_values.empty()) {
        throw ConfigError("p, q and m value sets must be non-empty");
    }
    for (auto p : p_values) {
        if (p < 1) {
            throw ConfigError("p values must be >= 1");
        }
    }
    for (double q : q_values) {
        if (!(q > 0.0 && q < 1.0)) {
            throw ConfigError("q values must lie in (0, 1)");
        }
    }
    for (int m : m_values) {
        if (m < 1 || m > DerivativeOrder::kMax) {
            throw ConfigError("m values must lie in [1, " + std::to_string(DerivativeOrder::kMax) + "]");
        }
    }
    if (sample_count < 1) {
        throw ConfigError("sample_count must be >= 1");
    }
    if (!std::isfinite(tol_scale) || !(tol_scale > 0.0)) {
        throw ConfigError("tol must be > 0");
    }
}

std::vector<SampleInputs> draw_samples(TheoremId theorem, const SweepSpec& spec, const SweepOptions& opts) {
    spec.validate();
    Interval s_range = spec.s_range;
    if (!opts.explore) {
        if (theorem == TheoremId::T1) {
            s_range.hi = std::min(s_range.hi, 1.0);
        } else if (theorem == TheoremId::C1) {
            s_range.hi = std::min(s_range.hi, std::nextafter(1.0, 0.0));
        }
        if (!(s_range.lo < s_range.hi)) {
            throw ConfigError("s_range is empty after restricting to the hypotheses of " +
                              std::string(to_string(theorem)));
        }
        if (required_parity(theorem)) {
            for (int m : spec.m_values) {
                check_parity(theorem, m);
            }
        }
    }

    std::mt19937_64 rng(spec.seed);
    std::vector<SampleInputs> out;
    out.reserve(static_cast<std::size_t>(spec.sample_count));
    for (std::int64_t i = 0; i < spec.sample_count; ++i) {
        // Always consume five draws per sample so the stream layout is fixed.
        SampleInputs in;
        in.s = draw_interval(rng, s_range);
        in.t = draw_interval(rng, spec.t_range);
        const auto p = spec.p_values[draw_index(rng, spec.p_values.size())];
        const auto q = spec.q_values[draw_index(rng, spec.q_values.size())];
        const auto m = spec.m_values[draw_index(rng, spec.m_values.size())];
        if (!is_classical(theorem)) {
            in.p = p;
            in.q = q;
        }
        if (uses_order(theorem)) {
            in.m = m;
        }
        out.push_back(in);
    }
    return out;
}

SweepResult sweep(TheoremId theorem, const SweepSpec& spec, const SweepOptions& opts) {
    const auto samples = draw_samples(theorem, spec, opts);
    MarginOptions margin_opts;
    margin_opts.series = opts.series;
    margin_opts.tol_scale = spec.tol_scale;
    margin_opts.enforce_hypotheses = !opts.explore;

    SweepResult result;
    result.theorem = theorem;
    result.reports.resize(samples.size());
    parallel_for(
        samples.size(), [&](std::size_t i) { result.reports[i] = evaluate(theorem, samples[i], margin_opts); },
        opts.threads);

    auto& summary = result.summary;
    summary.samples = static_cast<std::int64_t>(samples.size());
    summary.min_margin = std::numeric_limits<double>::infinity();
    for (const auto& r : result.reports) {
        if (!r.holds) {
            ++summary.violations;
        }
        if (r.margin < summary.min_margin) {
            summary.min_margin = r.margin;
            summary.argmin = r.inputs;
        }
    }
    return result;
}

WitnessSummary witness_sweep(const SweepSpec& spec, const SweepOptions& opts) {
    SweepOptions draw_opts = opts;
    draw_opts.explore = true;  // mixed parities are expected here
    const auto samples = draw_samples(TheoremId::T2, spec, draw_opts);
    const double fold = spec.s_range.hi > 1.0 ? 1.0 / spec.s_range.hi : 1.0;
    const double scale = spec.tol_scale;

    struct Checks {
        // Values oriented so that >= -tol is the expected sign; NaN marks "not checked".
        std::array<double, 5> value{};
        std::array<double, 5> tol{};
        std::array<bool, 5> active{};
    };
    std::vector<Checks> checks(samples.size());
    parallel_for(
        samples.size(),
        [&](std::size_t i) {
            const auto& in = samples[i];
            const PQParams params(*in.p, *in.q);
            const int m = *in.m;
            Checks c;
            const double d1 = std::abs(polygamma_pq(in.t, params, 1, opts.series).value);
            c.value[0] = -witness_mu_prime(in.s, in.t, params, opts.series);
            c.tol[0] = scale * std::max(1.0, d1);
            c.active[0] = true;

            const double dm1 = std::abs(detail::polygamma_pq_unchecked(in.t, params, m + 1, opts.series).value);
            if (m % 2 == 1) {
                c.value[1] = witness_eta_prime(in.s, in.t, m, params, opts.series);
                c.tol[1] = scale * std::max(1.0, dm1);
                c.active[1] = true;

                const double fs = polygamma_pq(in.s, params, m, opts.series).value;
                const double ft = polygamma_pq(in.t, params, m, opts.series).value;
                const double fst = polygamma_pq(in.s + in.t, params, m, opts.series).value;
                c.value[4] = std::min({fs - fst, ft - fst, fst});
                c.tol[4] = scale * std::max({1.0, std::abs(fs), std::abs(ft)});
                c.active[4] = true;
            } else {
                c.value[2] = -witness_lambda_prime(in.s, in.t, m, params, opts.series);
                c.tol[2] = scale * std::max(1.0, dm1);
                c.active[2] = true;
            }

            const double s_unit = in.s * fold;
            const double psi_s = psi_pq(s_unit, params, opts.series).value;
            c.value[3] = witness_t1_limit(s_unit, params, opts.series);
            c.tol[3] = scale * std::max(1.0, std::abs(psi_s));
            c.active[3] = true;
            checks[i] = c;
        },
        opts.threads);

    WitnessSummary summary;
    std::array<WitnessTally*, 5> tallies = {&summary.mu_prime, &summary.eta_prime, &summary.lambda_prime,
                                            &summary.t1_limit, &summary.product_chain};
    for (auto* tally : tallies) {
        tally->worst = std::numeric_limits<double>::infinity();
    }
    for (std::size_t i = 0; i < samples.size(); ++i) {
        for (std::size_t w = 0; w < tallies.size(); ++w) {
            if (!checks[i].active[w]) {
                continue;
            }
            auto& tally = *tallies[w];
            ++tally.checked;
            if (checks[i].value[w] < -checks[i].tol[w]) {
                ++tally.violations;
            }
            if (checks[i].value[w] < tally.worst) {
                tally.worst = checks[i].value[w];
                tally.worst_inputs = samples[i];
                if (w == 3) {
                    tally.worst_inputs.s *= fold;
                }
            }
        }
    }
    return summary;
}

}  // namespace pqspecial
