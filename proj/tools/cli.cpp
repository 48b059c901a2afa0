#include "cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <limits>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "pqspecial/digamma_family.hpp"
#include "pqspecial/errors.hpp"
#include "pqspecial/gamma_family.hpp"
#include "pqspecial/inequality.hpp"
#include "pqspecial/limits.hpp"
#include "pqspecial/qnum.hpp"

namespace pqspecial::cli {

namespace {

using json = nlohmann::ordered_json;

enum class Format { plain, json, csv };

constexpr double kEps = std::numeric_limits<double>::epsilon();

std::string machine(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string human(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.10g", v);
    return buf;
}

Format parse_format(const std::string& text) {
    if (text == "plain") {
        return Format::plain;
    }
    if (text == "json") {
        return Format::json;
    }
    if (text == "csv") {
        return Format::csv;
    }
    throw ConfigError("unknown format '" + text + "' (expected plain, json or csv)");
}

DigammaSeries parse_series(const std::string& text) {
    if (text == "exact") {
        return DigammaSeries::exact;
    }
    if (text == "truncated") {
        return DigammaSeries::truncated;
    }
    throw ConfigError("unknown series '" + text + "' (expected exact or truncated)");
}

GammaQConvention parse_convention(const std::string& text) {
    if (text == "standard") {
        return GammaQConvention::standard;
    }
    if (text == "shifted") {
        return GammaQConvention::shifted_index;
    }
    throw ConfigError("unknown gamma_q convention '" + text + "' (expected standard or shifted)");
}

// Options every subcommand accepts.
struct Common {
    std::string format;
    std::string out;
    std::string series = "exact";
};

void add_common(CLI::App* cmd, Common& c) {
    cmd->add_option("--format", c.format, "Output format: plain, json or csv");
    cmd->add_option("--out", c.out, "Write the report to this file instead of stdout");
    cmd->add_option("--series", c.series, "psi_{p,q} series: exact (log-derivative) or truncated");
}

struct EvalArgs {
    std::string func;
    double t = 0.0;
    double x = 0.0;
    std::int64_t p = 0;
    double q = 0.0;
    int m = 0;
    double eps = 1e-15;
    std::int64_t max_terms = 1'000'000;
    std::string convention = "standard";
    CLI::Option* t_opt = nullptr;
    CLI::Option* x_opt = nullptr;
    CLI::Option* p_opt = nullptr;
    CLI::Option* q_opt = nullptr;
    CLI::Option* m_opt = nullptr;
};

struct SweepArgs {
    std::string theorem;
    std::int64_t samples = 0;
    std::uint64_t seed = 0;
    double s_min = 0.0;
    double s_max = 0.0;
    double t_min = 0.0;
    double t_max = 0.0;
    std::vector<std::int64_t> p;
    std::vector<double> q;
    std::vector<int> m;
    double tol = 0.0;
    std::string spec_file;
    std::string report_file;
    bool explore = false;
    bool witnesses = false;
    CLI::Option* samples_opt = nullptr;
    CLI::Option* seed_opt = nullptr;
    CLI::Option* s_min_opt = nullptr;
    CLI::Option* s_max_opt = nullptr;
    CLI::Option* t_min_opt = nullptr;
    CLI::Option* t_max_opt = nullptr;
    CLI::Option* p_opt = nullptr;
    CLI::Option* q_opt = nullptr;
    CLI::Option* m_opt = nullptr;
    CLI::Option* tol_opt = nullptr;
};

struct LimitArgs {
    std::string func;
    double t = 1.0;
    double s = 0.5;
    int m = 1;
    std::string schedule = "default";
    CLI::Option* m_opt = nullptr;
    CLI::Option* s_opt = nullptr;
};

void add_sweep_options(CLI::App* cmd, SweepArgs& a) {
    cmd->add_option("--theorem", a.theorem, "T1..T4 or C1..C4");
    a.samples_opt = cmd->add_option("--samples", a.samples, "Number of random samples");
    a.seed_opt = cmd->add_option("--seed", a.seed, "64-bit seed; the only source of randomness");
    a.s_min_opt = cmd->add_option("--s-min", a.s_min, "Lower (exclusive) end of the s range");
    a.s_max_opt = cmd->add_option("--s-max", a.s_max, "Upper (inclusive) end of the s range");
    a.t_min_opt = cmd->add_option("--t-min", a.t_min, "Lower (exclusive) end of the t range");
    a.t_max_opt = cmd->add_option("--t-max", a.t_max, "Upper (inclusive) end of the t range");
    a.p_opt = cmd->add_option("--p", a.p, "Comma-separated p values")->delimiter(',');
    a.q_opt = cmd->add_option("--q", a.q, "Comma-separated q values")->delimiter(',');
    a.m_opt = cmd->add_option("--m", a.m, "Comma-separated derivative orders")->delimiter(',');
    a.tol_opt = cmd->add_option("--tol", a.tol, "Relative violation tolerance scale");
    cmd->add_option("--spec", a.spec_file, "JSON sweep specification");
}

// ---------------------------------------------------------------------------
// Sweep specification file

SweepSpec load_spec(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw ConfigError("cannot open spec file '" + path + "'");
    }
    json doc;
    try {
        doc = json::parse(in);
    } catch (const json::exception& e) {
        throw ConfigError("spec file '" + path + "' is not valid JSON: " + e.what());
    }
    if (!doc.is_object()) {
        throw ConfigError("spec file must hold a JSON object");
    }
    SweepSpec spec;
    try {
        for (const auto& [key, value] : doc.items()) {
            if (key == "s_range" || key == "t_range") {
                const auto r = value.get<std::vector<double>>();
                if (r.size() != 2) {
                    throw ConfigError(key + " must be [lo, hi]");
                }
                (key == "s_range" ? spec.s_range : spec.t_range) = Interval{r[0], r[1]};
            } else if (key == "p_values") {
                spec.p_values = value.get<std::vector<std::int64_t>>();
            } else if (key == "q_values") {
                spec.q_values = value.get<std::vector<double>>();
            } else if (key == "m_values") {
                spec.m_values = value.get<std::vector<int>>();
            } else if (key == "sample_count") {
                spec.sample_count = value.get<std::int64_t>();
            } else if (key == "seed") {
                spec.seed = value.get<std::uint64_t>();
            } else if (key == "tol") {
                spec.tol_scale = value.get<double>();
            } else {
                throw ConfigError("unknown key '" + key + "' in spec file");
            }
        }
    } catch (const json::exception& e) {
        throw ConfigError(std::string("spec file has a value of the wrong type: ") + e.what());
    }
    return spec;
}

std::vector<int> default_orders(std::optional<TheoremId> theorem) {
    if (!theorem) {
        return {1, 2, 3, 4, 5, 6};
    }
    const auto parity = required_parity(*theorem);
    if (parity && *parity == 0) {
        return {2, 4, 6};
    }
    return {1, 3, 5};
}

SweepSpec build_spec(const SweepArgs& a, std::optional<TheoremId> theorem) {
    SweepSpec spec;
    const bool from_file = !a.spec_file.empty();
    if (from_file) {
        spec = load_spec(a.spec_file);
    }
    if (a.samples_opt->count() > 0) {
        spec.sample_count = a.samples;
    }
    if (a.seed_opt->count() > 0) {
        spec.seed = a.seed;
    }
    if (a.s_min_opt->count() > 0) {
        spec.s_range.lo = a.s_min;
    }
    if (a.s_max_opt->count() > 0) {
        spec.s_range.hi = a.s_max;
    }
    if (a.t_min_opt->count() > 0) {
        spec.t_range.lo = a.t_min;
    }
    if (a.t_max_opt->count() > 0) {
        spec.t_range.hi = a.t_max;
    }
    if (a.p_opt->count() > 0) {
        spec.p_values = a.p;
    }
    if (a.q_opt->count() > 0) {
        spec.q_values = a.q;
    }
    if (a.m_opt->count() > 0) {
        spec.m_values = a.m;
    } else if (!from_file) {
        spec.m_values = default_orders(theorem);
    }
    if (a.tol_opt->count() > 0) {
        spec.tol_scale = a.tol;
    }
    spec.validate();
    return spec;
}

json spec_json(const SweepSpec& spec) {
    json j;
    j["s_range"] = {spec.s_range.lo, spec.s_range.hi};
    j["t_range"] = {spec.t_range.lo, spec.t_range.hi};
    j["p_values"] = spec.p_values;
    j["q_values"] = spec.q_values;
    j["m_values"] = spec.m_values;
    j["sample_count"] = spec.sample_count;
    j["seed"] = spec.seed;
    j["tol"] = spec.tol_scale;
    return j;
}

// ---------------------------------------------------------------------------
// Report rendering

json inputs_json(const SampleInputs& in) {
    json j;
    j["s"] = in.s;
    j["t"] = in.t;
    if (in.p) {
        j["p"] = *in.p;
    }
    if (in.q) {
        j["q"] = *in.q;
    }
    if (in.m) {
        j["m"] = *in.m;
    }
    return j;
}

std::string inputs_plain(const SampleInputs& in) {
    std::string s = "s=" + human(in.s) + ",t=" + human(in.t);
    if (in.p) {
        s += ",p=" + std::to_string(*in.p);
    }
    if (in.q) {
        s += ",q=" + human(*in.q);
    }
    if (in.m) {
        s += ",m=" + std::to_string(*in.m);
    }
    return s;
}

json report_json(const InequalityReport& r) {
    json j;
    j["theorem"] = std::string(to_string(r.theorem));
    j["inputs"] = inputs_json(r.inputs);
    j["lhs"] = r.lhs;
    j["rhs"] = r.rhs;
    j["margin"] = r.margin;
    j["tol"] = r.tol;
    j["holds"] = r.holds;
    if (r.chain) {
        j["chain"] = {{"s_side", r.chain->s_side}, {"t_side", r.chain->t_side}};
    }
    return j;
}

constexpr const char* kReportHeader = "index,theorem,s,t,p,q,m,lhs,rhs,margin,tol,holds,chain_s,chain_t";

std::string report_csv_row(std::size_t index, const InequalityReport& r) {
    std::string row = std::to_string(index) + "," + std::string(to_string(r.theorem)) + "," + machine(r.inputs.s) +
                      "," + machine(r.inputs.t) + ",";
    row += (r.inputs.p ? std::to_string(*r.inputs.p) : "") + ",";
    row += (r.inputs.q ? machine(*r.inputs.q) : "") + ",";
    row += (r.inputs.m ? std::to_string(*r.inputs.m) : "") + ",";
    row += machine(r.lhs) + "," + machine(r.rhs) + "," + machine(r.margin) + "," + machine(r.tol) + ",";
    row += r.holds ? "1" : "0";
    row += ",";
    row += r.chain ? (r.chain->s_side ? "1" : "0") : "";
    row += ",";
    row += r.chain ? (r.chain->t_side ? "1" : "0") : "";
    return row;
}

json summary_json(const SweepResult& result) {
    json j;
    j["theorem"] = std::string(to_string(result.theorem));
    j["samples"] = result.summary.samples;
    j["violations"] = result.summary.violations;
    j["min_margin"] = result.summary.min_margin;
    j["argmin"] = inputs_json(result.summary.argmin);
    return j;
}

std::string summary_plain(const SweepResult& result) {
    return "theorem=" + std::string(to_string(result.theorem)) + " samples=" + std::to_string(result.summary.samples) +
           " violations=" + std::to_string(result.summary.violations) +
           " min_margin=" + human(result.summary.min_margin) + " argmin=" + inputs_plain(result.summary.argmin);
}

constexpr const char* kSummaryHeader = "theorem,samples,violations,min_margin,argmin_s,argmin_t,argmin_p,argmin_q,argmin_m";

std::string summary_csv_row(const SweepResult& result) {
    const auto& a = result.summary.argmin;
    return std::string(to_string(result.theorem)) + "," + std::to_string(result.summary.samples) + "," +
           std::to_string(result.summary.violations) + "," + machine(result.summary.min_margin) + "," +
           machine(a.s) + "," + machine(a.t) + "," + (a.p ? std::to_string(*a.p) : "") + "," +
           (a.q ? machine(*a.q) : "") + "," + (a.m ? std::to_string(*a.m) : "");
}

json envelope(const std::string& command, json config) {
    json j;
    j["command"] = command;
    j["config"] = std::move(config);
    j["results"] = json::array();
    j["summary"] = json::object();
    return j;
}

// ---------------------------------------------------------------------------
// Commands

struct Evaluated {
    EvalResult result;
    json config;
};

EvalResult approx(double value, std::int64_t terms) {
    return {value, terms, kEps * (std::abs(value) + 1.0) * std::sqrt(static_cast<double>(terms))};
}

Evaluated evaluate_function(const EvalArgs& a, DigammaSeries series) {
    json config;
    config["func"] = a.func;
    auto need = [&](CLI::Option* opt, const char* flag) {
        if (opt->count() == 0) {
            throw ConfigError(std::string(flag) + " is required for " + a.func);
        }
    };
    auto need_t = [&] {
        need(a.t_opt, "--t");
        config["t"] = a.t;
    };
    auto need_p = [&] {
        need(a.p_opt, "--p");
        config["p"] = a.p;
    };
    auto need_q = [&] {
        need(a.q_opt, "--q");
        config["q"] = a.q;
    };
    auto need_m = [&] {
        need(a.m_opt, "--m");
        config["m"] = a.m;
    };
    auto pq = [&] { return PQParams(a.p, a.q); };
    auto tail = [&] {
        config["eps"] = a.eps;
        config["max_terms"] = a.max_terms;
        return TailTolerance(a.eps, a.max_terms);
    };
    auto with_series = [&] { config["series"] = series == DigammaSeries::exact ? "exact" : "truncated"; };

    const std::string& f = a.func;
    EvalResult r;
    if (f == "gamma_pq" || f == "log_gamma_pq") {
        need_t();
        need_p();
        need_q();
        const double v = f == "gamma_pq" ? gamma_pq(a.t, pq()) : log_gamma_pq(a.t, pq());
        r = approx(v, a.p + 1);
    } else if (f == "psi_pq") {
        need_t();
        need_p();
        need_q();
        with_series();
        r = psi_pq(a.t, pq(), series);
    } else if (f == "psi_pq_m") {
        need_t();
        need_p();
        need_q();
        need_m();
        with_series();
        if (a.m == 0) {
            throw OrderError("psi_pq_m needs m >= 1; for m = 0 use --func psi_pq");
        }
        r = psi_pq_m(a.t, pq(), DerivativeOrder(a.m), series);
    } else if (f == "psi_p") {
        need_t();
        need_p();
        r = approx(psi_p(a.t, a.p), a.p + 1);
    } else if (f == "gamma_p" || f == "log_gamma_p") {
        need_t();
        need_p();
        r = approx(f == "gamma_p" ? gamma_p(a.t, a.p) : log_gamma_p(a.t, a.p), a.p + 1);
    } else if (f == "psi_q") {
        need_t();
        need_q();
        const auto tol = tail();
        config["convention"] = a.convention;
        r = psi_q(a.t, QParam(a.q), tol, parse_convention(a.convention));
    } else if (f == "gamma_q" || f == "log_gamma_q") {
        need_t();
        need_q();
        const auto tol = tail();
        config["convention"] = a.convention;
        r = log_gamma_q(a.t, QParam(a.q), tol, parse_convention(a.convention));
        if (f == "gamma_q") {
            r.value = gamma_q(a.t, QParam(a.q), tol, parse_convention(a.convention));
            r.est_round_err *= r.value;
        }
    } else if (f == "psi") {
        need_t();
        r = approx(psi_classical(a.t), 36);
    } else if (f == "psi_m") {
        need_t();
        need_m();
        const auto tol = tail();
        if (a.m == 0) {
            throw OrderError("psi_m needs m >= 1; for m = 0 use --func psi");
        }
        r = approx(psi_m_classical(a.t, DerivativeOrder(a.m), tol), 1);
    } else if (f == "log_gamma") {
        need_t();
        r = approx(log_gamma_classical(a.t), 16);
    } else if (f == "q_number" || f == "log_q_number") {
        need(a.x_opt, "--x");
        config["x"] = a.x;
        need_q();
        r = approx(f == "q_number" ? q_number(a.x, QParam(a.q)) : log_q_number(a.x, QParam(a.q)), 1);
    } else if (f == "log_q_factorial") {
        need_p();
        need_q();
        r = approx(log_q_factorial(a.p, QParam(a.q)), a.p);
    } else {
        throw ConfigError("unknown function '" + f +
                          "' (expected gamma_pq, log_gamma_pq, psi_pq, psi_pq_m, psi_p, psi_q, psi, psi_m, gamma_p, "
                          "log_gamma_p, gamma_q, log_gamma_q, log_gamma, q_number, log_q_number, log_q_factorial)");
    }
    return {r, config};
}

int cmd_eval(const EvalArgs& a, Format format, DigammaSeries series, std::ostream& out) {
    const auto [r, config] = evaluate_function(a, series);
    switch (format) {
        case Format::plain:
            out << "func=" << a.func << " value=" << human(r.value) << " terms_used=" << r.terms_used
                << " est_round_err=" << human(r.est_round_err) << "\n";
            break;
        case Format::csv:
            out << "func,value,terms_used,est_round_err\n"
                << a.func << "," << machine(r.value) << "," << r.terms_used << "," << machine(r.est_round_err) << "\n";
            break;
        case Format::json: {
            json j = envelope("eval", config);
            j["results"] = {{"value", r.value}, {"terms_used", r.terms_used}, {"est_round_err", r.est_round_err}};
            j["summary"] = {{"status", "ok"}};
            out << j.dump(2) << "\n";
            break;
        }
    }
    return kOk;
}

json sweep_config(const std::string& theorem, const SweepSpec& spec, DigammaSeries series, bool explore) {
    json config;
    config["theorem"] = theorem;
    config["series"] = series == DigammaSeries::exact ? "exact" : "truncated";
    config["explore"] = explore;
    config["spec"] = spec_json(spec);
    return config;
}

int cmd_witnesses(const SweepArgs& a, Format format, DigammaSeries series, std::ostream& out) {
    const SweepSpec spec = build_spec(a, std::nullopt);
    SweepOptions opts;
    opts.series = series;
    const WitnessSummary w = witness_sweep(spec, opts);
    const std::vector<std::pair<std::string, const WitnessTally*>> rows = {
        {"mu_prime", &w.mu_prime},         {"eta_prime", &w.eta_prime}, {"lambda_prime", &w.lambda_prime},
        {"t1_limit", &w.t1_limit},         {"product_chain", &w.product_chain},
    };
    switch (format) {
        case Format::plain:
            for (const auto& [name, t] : rows) {
                out << "witness=" << name << " checked=" << t->checked << " violations=" << t->violations
                    << " worst=" << human(t->worst) << " at=" << inputs_plain(t->worst_inputs) << "\n";
            }
            break;
        case Format::csv:
            out << "witness,checked,violations,worst\n";
            for (const auto& [name, t] : rows) {
                out << name << "," << t->checked << "," << t->violations << "," << machine(t->worst) << "\n";
            }
            break;
        case Format::json: {
            json j = envelope("verify", sweep_config("witnesses", spec, series, false));
            for (const auto& [name, t] : rows) {
                j["results"].push_back({{"witness", name},
                                        {"checked", t->checked},
                                        {"violations", t->violations},
                                        {"worst", t->worst},
                                        {"worst_inputs", inputs_json(t->worst_inputs)}});
            }
            j["summary"] = {{"violations", w.total_violations()}};
            out << j.dump(2) << "\n";
            break;
        }
    }
    return w.total_violations() == 0 ? kOk : kViolations;
}

// verify: summary only; sweep/explore: every sample.
int cmd_sweep(const std::string& command, const SweepArgs& a, Format format, DigammaSeries series,
              std::ostream& out) {
    if (a.theorem.empty()) {
        throw ConfigError("--theorem is required");
    }
    const TheoremId theorem = parse_theorem(a.theorem);
    const bool explore = command == "explore" || a.explore;
    const SweepSpec spec = build_spec(a, theorem);
    SweepOptions opts;
    opts.series = series;
    opts.explore = explore;
    const SweepResult result = sweep(theorem, spec, opts);
    const bool full = command != "verify";

    if (!a.report_file.empty()) {
        std::ofstream report(a.report_file);
        if (!report) {
            throw ConfigError("cannot write report file '" + a.report_file + "'");
        }
        report << kReportHeader << "\n";
        for (std::size_t i = 0; i < result.reports.size(); ++i) {
            report << report_csv_row(i, result.reports[i]) << "\n";
        }
    }

    switch (format) {
        case Format::plain:
            if (full) {
                for (std::size_t i = 0; i < result.reports.size(); ++i) {
                    const auto& r = result.reports[i];
                    out << "index=" << i << " " << inputs_plain(r.inputs) << " margin=" << human(r.margin)
                        << " holds=" << (r.holds ? 1 : 0) << "\n";
                }
            }
            out << summary_plain(result) << "\n";
            break;
        case Format::csv:
            if (full) {
                out << kReportHeader << "\n";
                for (std::size_t i = 0; i < result.reports.size(); ++i) {
                    out << report_csv_row(i, result.reports[i]) << "\n";
                }
            } else {
                out << kSummaryHeader << "\n" << summary_csv_row(result) << "\n";
            }
            break;
        case Format::json: {
            json j = envelope(command, sweep_config(a.theorem, spec, series, explore));
            if (full) {
                for (const auto& r : result.reports) {
                    j["results"].push_back(report_json(r));
                }
            }
            j["summary"] = summary_json(result);
            out << j.dump(2) << "\n";
            break;
        }
    }
    // explore only reports; verify and sweep assert, also outside the hypotheses.
    if (command == "explore") {
        return kOk;
    }
    return result.summary.violations == 0 ? kOk : kViolations;
}

LimitSchedule parse_schedule(const std::string& text) {
    if (text == "default") {
        return LimitSchedule::standard();
    }
    std::vector<std::pair<std::int64_t, double>> entries;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        const auto colon = item.find(':');
        if (colon == std::string::npos) {
            throw ConfigError("schedule entries must look like p:q, got '" + item + "'");
        }
        try {
            std::size_t used_p = 0;
            std::size_t used_q = 0;
            const std::string p_text = item.substr(0, colon);
            const std::string q_text = item.substr(colon + 1);
            const long long p = std::stoll(p_text, &used_p);
            const double q = std::stod(q_text, &used_q);
            if (used_p != p_text.size() || used_q != q_text.size()) {
                throw std::invalid_argument(item);
            }
            entries.emplace_back(p, q);
        } catch (const std::logic_error&) {
            throw ConfigError("cannot parse schedule entry '" + item + "'");
        }
    }
    return LimitSchedule(std::move(entries), "custom");
}

int cmd_limits(const LimitArgs& a, Format format, DigammaSeries series, std::ostream& out, std::ostream& err) {
    if (a.func.empty()) {
        throw ConfigError("--func is required");
    }
    const RecoveryFunction func = parse_recovery_function(a.func);
    const bool uses_s = func == RecoveryFunction::t1 || func == RecoveryFunction::t2 ||
                        func == RecoveryFunction::t3 || func == RecoveryFunction::t4;
    const bool uses_m = func != RecoveryFunction::psi_pq && func != RecoveryFunction::t1;
    if (uses_s && a.s_opt->count() == 0) {
        throw ConfigError("--s is required for " + a.func);
    }
    if (uses_m && a.m_opt->count() == 0) {
        throw ConfigError("--m is required for " + a.func);
    }
    const LimitSchedule schedule = parse_schedule(a.schedule);
    const bool asserted = a.schedule == "default";
    const RecoveryTable table = recovery_table(func, {a.t, a.s, a.m}, schedule, series);

    json config;
    config["func"] = a.func;
    config["t"] = a.t;
    if (uses_s) {
        config["s"] = a.s;
    }
    if (uses_m) {
        config["m"] = a.m;
    }
    config["schedule"] = a.schedule;
    config["series"] = series == DigammaSeries::exact ? "exact" : "truncated";

    switch (format) {
        case Format::csv:
            out << "k,p,q,value,target,abs_err\n";
            for (const auto& r : table.rows) {
                out << r.k << "," << r.p << "," << machine(r.q) << ",";
                if (r.error) {
                    out << "," << machine(r.target) << ",\n";
                } else {
                    out << machine(r.value) << "," << machine(r.target) << "," << machine(r.abs_err) << "\n";
                }
            }
            break;
        case Format::plain:
            for (const auto& r : table.rows) {
                out << "k=" << r.k << " p=" << r.p << " q=" << human(r.q);
                if (r.error) {
                    out << " error=\"" << *r.error << "\"\n";
                } else {
                    out << " value=" << human(r.value) << " target=" << human(r.target)
                        << " abs_err=" << human(r.abs_err) << "\n";
                }
            }
            out << "strictly_decreasing=" << (table.strictly_decreasing ? "true" : "false") << "\n";
            break;
        case Format::json: {
            json j = envelope("limits", config);
            for (const auto& r : table.rows) {
                json row;
                row["k"] = r.k;
                row["p"] = r.p;
                row["q"] = r.q;
                if (r.error) {
                    row["error"] = {{"kind", "evaluation_error"}, {"message", *r.error}};
                } else {
                    row["value"] = r.value;
                    row["target"] = r.target;
                    row["abs_err"] = r.abs_err;
                }
                j["results"].push_back(row);
            }
            j["summary"] = {{"strictly_decreasing", table.strictly_decreasing}, {"asserted", asserted}};
            out << j.dump(2) << "\n";
            break;
        }
    }
    for (const auto& r : table.rows) {
        if (r.error) {
            err << "row k=" << r.k << ": " << *r.error << "\n";
        }
    }
    err << "strictly_decreasing=" << (table.strictly_decreasing ? "yes" : "no")
        << (asserted ? "" : " (custom schedule: reported, not asserted)") << "\n";
    if (!asserted) {
        return kOk;
    }
    return table.strictly_decreasing ? kOk : kViolations;
}

std::string error_kind(const std::exception& e) {
    if (dynamic_cast<const OrderError*>(&e) != nullptr) {
        return "order_error";
    }
    if (dynamic_cast<const HypothesisError*>(&e) != nullptr) {
        return "hypothesis_error";
    }
    if (dynamic_cast<const DomainError*>(&e) != nullptr) {
        return "domain_error";
    }
    if (dynamic_cast<const OverflowError*>(&e) != nullptr) {
        return "overflow";
    }
    if (dynamic_cast<const ToleranceNotReached*>(&e) != nullptr) {
        return "tolerance_not_reached";
    }
    return "config_error";
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Evaluate (p,q)-gamma/digamma functions and verify their inequalities", "pqspecial"};
    app.require_subcommand(1);

    Common common;
    EvalArgs eval_args;
    SweepArgs verify_args;
    SweepArgs sweep_args;
    SweepArgs explore_args;
    LimitArgs limit_args;

    auto* eval = app.add_subcommand("eval", "Evaluate one function at a point");
    add_common(eval, common);
    eval->add_option("--func", eval_args.func, "Function name")->required();
    eval_args.t_opt = eval->add_option("--t", eval_args.t, "Argument t");
    eval_args.x_opt = eval->add_option("--x", eval_args.x, "Argument x of q_number / log_q_number");
    eval_args.p_opt = eval->add_option("--p", eval_args.p, "Positive integer p");
    eval_args.q_opt = eval->add_option("--q", eval_args.q, "q in (0, 1)");
    eval_args.m_opt = eval->add_option("--m", eval_args.m, "Derivative order");
    eval->add_option("--eps", eval_args.eps, "Absolute tail tolerance for infinite series");
    eval->add_option("--max-terms", eval_args.max_terms, "Term cap for infinite series");
    eval->add_option("--gamma-q-convention", eval_args.convention, "standard or shifted product index");

    auto* verify = app.add_subcommand("verify", "Check a theorem on random samples and print a summary");
    add_common(verify, common);
    add_sweep_options(verify, verify_args);
    verify->add_option("--report", verify_args.report_file, "Write every sample as CSV to this file");
    verify->add_flag("--explore", verify_args.explore, "Drop hypothesis checks (s clipping, parity of m)");
    verify->add_flag("--witnesses", verify_args.witnesses, "Check the monotonicity witnesses instead");

    auto* sweep_cmd = app.add_subcommand("sweep", "Evaluate a theorem on random samples and emit every report");
    add_common(sweep_cmd, common);
    add_sweep_options(sweep_cmd, sweep_args);
    sweep_cmd->add_flag("--explore", sweep_args.explore, "Drop hypothesis checks (s clipping, parity of m)");

    auto* explore = app.add_subcommand("explore", "Sweep outside the theorem hypotheses (report only)");
    add_common(explore, common);
    add_sweep_options(explore, explore_args);

    auto* limits = app.add_subcommand("limits", "Convergence table along a (p, q) schedule");
    add_common(limits, common);
    limits->add_option("--func", limit_args.func, "psi_pq, psi_pq_m, t1, t2, t3 or t4");
    limits->add_option("--t", limit_args.t, "Argument t");
    limit_args.s_opt = limits->add_option("--s", limit_args.s, "Argument s of the margin functions");
    limit_args.m_opt = limits->add_option("--m", limit_args.m, "Derivative order");
    limits->add_option("--schedule", limit_args.schedule, "'default' or p:q,p:q,...");

    std::vector<std::string> storage;
    storage.reserve(args.size() + 1);
    storage.emplace_back("pqspecial");
    storage.insert(storage.end(), args.begin(), args.end());
    std::vector<char*> argv;
    for (auto& s : storage) {
        argv.push_back(s.data());
    }

    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kOk : kConfigError;
    }

    std::string command;
    std::string default_format = "plain";
    if (eval->parsed()) {
        command = "eval";
    } else if (verify->parsed()) {
        command = "verify";
    } else if (sweep_cmd->parsed()) {
        command = "sweep";
        default_format = "csv";
    } else if (explore->parsed()) {
        command = "explore";
        default_format = "csv";
    } else {
        command = "limits";
        default_format = "csv";
    }

    Format format = Format::plain;
    std::ostringstream payload;
    int code = kOk;
    try {
        format = parse_format(common.format.empty() ? default_format : common.format);
        const DigammaSeries series = parse_series(common.series);
        if (command == "eval") {
            code = cmd_eval(eval_args, format, series, payload);
        } else if (command == "verify") {
            code = verify_args.witnesses ? cmd_witnesses(verify_args, format, series, payload)
                                         : cmd_sweep(command, verify_args, format, series, payload);
        } else if (command == "sweep") {
            code = cmd_sweep(command, sweep_args, format, series, payload);
        } else if (command == "explore") {
            code = cmd_sweep(command, explore_args, format, series, payload);
        } else {
            code = cmd_limits(limit_args, format, series, payload, err);
        }
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        if (format == Format::json) {
            json j = envelope(command, json::object());
            j["results"] = nullptr;
            j["summary"] = {{"error", {{"kind", error_kind(e)}, {"message", e.what()}}}};
            payload.str("");
            payload << j.dump(2) << "\n";
        } else {
            payload.str("");
        }
        code = kConfigError;
    }

    if (common.out.empty()) {
        out << payload.str();
    } else {
        std::ofstream file(common.out);
        if (!file) {
            err << "error: cannot write output file '" << common.out << "'\n";
            return kConfigError;
        }
        file << payload.str();
    }
    return code;
}

}  // namespace pqspecial::cli
