#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "pqspecial/digamma_family.hpp"
#include "pqspecial/errors.hpp"
#include "pqspecial/gamma_family.hpp"
#include "pqspecial/inequality.hpp"
#include "pqspecial/limits.hpp"
#include "pqspecial/oracle.hpp"
#include "pqspecial/qnum.hpp"

namespace py = pybind11;
using namespace pqspecial;

namespace {

DigammaSeries series_from(const std::string& name) {
    if (name == "exact") {
        return DigammaSeries::exact;
    }
    if (name == "truncated") {
        return DigammaSeries::truncated;
    }
    throw ConfigError("series must be 'exact' or 'truncated', got '" + name + "'");
}

GammaQConvention convention_from(const std::string& name) {
    if (name == "standard") {
        return GammaQConvention::standard;
    }
    if (name == "shifted") {
        return GammaQConvention::shifted_index;
    }
    throw ConfigError("convention must be 'standard' or 'shifted', got '" + name + "'");
}

py::dict inputs_dict(const SampleInputs& in) {
    py::dict d;
    d["s"] = in.s;
    d["t"] = in.t;
    d["p"] = in.p ? py::cast(*in.p) : py::none();
    d["q"] = in.q ? py::cast(*in.q) : py::none();
    d["m"] = in.m ? py::cast(*in.m) : py::none();
    return d;
}

py::dict tally_dict(const WitnessTally& t) {
    py::dict d;
    d["checked"] = t.checked;
    d["violations"] = t.violations;
    d["worst"] = t.worst;
    d["worst_inputs"] = inputs_dict(t.worst_inputs);
    return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "(p,q)-gamma and digamma functions, their inequalities, and limit studies";

    auto domain = py::register_exception<DomainError>(m, "DomainError", PyExc_ValueError);
    py::register_exception<OrderError>(m, "OrderError", domain.ptr());
    py::register_exception<HypothesisError>(m, "HypothesisError", domain.ptr());
    py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
    py::register_exception<OverflowError>(m, "OverflowError", PyExc_OverflowError);
    py::register_exception<ToleranceNotReached>(m, "ToleranceNotReached", PyExc_RuntimeError);

    py::class_<EvalResult>(m, "EvalResult")
        .def_readonly("value", &EvalResult::value)
        .def_readonly("terms_used", &EvalResult::terms_used)
        .def_readonly("est_round_err", &EvalResult::est_round_err)
        .def("__float__", [](const EvalResult& r) { return r.value; })
        .def("__repr__", [](const EvalResult& r) {
            return "EvalResult(value=" + py::repr(py::float_(r.value)).cast<std::string>() +
                   ", terms_used=" + std::to_string(r.terms_used) + ")";
        });

    // q-numbers
    m.def("q_number", [](double x, double q) { return q_number(x, QParam(q)); }, py::arg("x"), py::arg("q"));
    m.def("log_q_number", [](double x, double q) { return log_q_number(x, QParam(q)); }, py::arg("x"), py::arg("q"));
    m.def("log_q_factorial", [](std::int64_t p, double q) { return log_q_factorial(p, QParam(q)); }, py::arg("p"),
          py::arg("q"));

    // gamma family
    m.def("log_gamma_pq", [](double t, std::int64_t p, double q) { return log_gamma_pq(t, PQParams(p, q)); },
          py::arg("t"), py::arg("p"), py::arg("q"));
    m.def("gamma_pq", [](double t, std::int64_t p, double q) { return gamma_pq(t, PQParams(p, q)); }, py::arg("t"),
          py::arg("p"), py::arg("q"));
    m.def("log_gamma_p", &log_gamma_p, py::arg("t"), py::arg("p"));
    m.def("gamma_p", &gamma_p, py::arg("t"), py::arg("p"));
    m.def(
        "log_gamma_q",
        [](double t, double q, double eps, std::int64_t max_terms, const std::string& convention) {
            return log_gamma_q(t, QParam(q), TailTolerance(eps, max_terms), convention_from(convention));
        },
        py::arg("t"), py::arg("q"), py::arg("eps") = 1e-15, py::arg("max_terms") = 1'000'000,
        py::arg("convention") = "standard");
    m.def(
        "gamma_q",
        [](double t, double q, double eps, std::int64_t max_terms, const std::string& convention) {
            return gamma_q(t, QParam(q), TailTolerance(eps, max_terms), convention_from(convention));
        },
        py::arg("t"), py::arg("q"), py::arg("eps") = 1e-15, py::arg("max_terms") = 1'000'000,
        py::arg("convention") = "standard");
    m.def("log_gamma_classical", &log_gamma_classical, py::arg("t"));

    // digamma family
    m.def(
        "psi_pq",
        [](double t, std::int64_t p, double q, const std::string& series) {
            return psi_pq(t, PQParams(p, q), series_from(series));
        },
        py::arg("t"), py::arg("p"), py::arg("q"), py::arg("series") = "exact");
    m.def(
        "psi_pq_m",
        [](double t, std::int64_t p, double q, int order, const std::string& series) {
            if (order == 0) {
                throw OrderError("psi_pq_m needs m >= 1; for m = 0 use psi_pq");
            }
            return psi_pq_m(t, PQParams(p, q), DerivativeOrder(order), series_from(series));
        },
        py::arg("t"), py::arg("p"), py::arg("q"), py::arg("m"), py::arg("series") = "exact");
    m.def("psi_p", &psi_p, py::arg("t"), py::arg("p"));
    m.def(
        "psi_q",
        [](double t, double q, double eps, std::int64_t max_terms, const std::string& convention) {
            return psi_q(t, QParam(q), TailTolerance(eps, max_terms), convention_from(convention));
        },
        py::arg("t"), py::arg("q"), py::arg("eps") = 1e-15, py::arg("max_terms") = 1'000'000,
        py::arg("convention") = "standard");
    m.def("psi", &psi_classical, py::arg("t"));
    m.def(
        "psi_m",
        [](double t, int order, double eps, std::int64_t max_terms) {
            return psi_m_classical(t, DerivativeOrder(order), TailTolerance(eps, max_terms));
        },
        py::arg("t"), py::arg("m"), py::arg("eps") = 1e-15, py::arg("max_terms") = 1'000'000);
    m.def("euler_gamma", &euler_gamma);

    // inequalities
    py::class_<InequalityReport>(m, "InequalityReport")
        .def_property_readonly("theorem", [](const InequalityReport& r) { return std::string(to_string(r.theorem)); })
        .def_property_readonly("inputs", [](const InequalityReport& r) { return inputs_dict(r.inputs); })
        .def_readonly("lhs", &InequalityReport::lhs)
        .def_readonly("rhs", &InequalityReport::rhs)
        .def_readonly("margin", &InequalityReport::margin)
        .def_readonly("holds", &InequalityReport::holds)
        .def_readonly("tol", &InequalityReport::tol)
        .def_property_readonly("chain", [](const InequalityReport& r) -> py::object {
            if (!r.chain) {
                return py::none();
            }
            return py::make_tuple(r.chain->s_side, r.chain->t_side);
        });

    m.def(
        "evaluate",
        [](const std::string& theorem, double s, double t, std::optional<std::int64_t> p, std::optional<double> q,
           std::optional<int> order, const std::string& series, double tol_scale, bool enforce_hypotheses) {
            MarginOptions opts;
            opts.series = series_from(series);
            opts.tol_scale = tol_scale;
            opts.enforce_hypotheses = enforce_hypotheses;
            return evaluate(parse_theorem(theorem), SampleInputs{s, t, p, q, order}, opts);
        },
        py::arg("theorem"), py::arg("s"), py::arg("t"), py::arg("p") = py::none(), py::arg("q") = py::none(),
        py::arg("m") = py::none(), py::arg("series") = "exact", py::arg("tol_scale") = 1e-9,
        py::arg("enforce_hypotheses") = true);

    m.def(
        "sweep",
        [](const std::string& theorem, std::int64_t sample_count, std::uint64_t seed, std::pair<double, double> s_range,
           std::pair<double, double> t_range, std::vector<std::int64_t> p_values, std::vector<double> q_values,
           std::optional<std::vector<int>> m_values, double tol, const std::string& series, bool explore,
           unsigned threads) {
            const TheoremId id = parse_theorem(theorem);
            SweepSpec spec;
            spec.sample_count = sample_count;
            spec.seed = seed;
            spec.s_range = {s_range.first, s_range.second};
            spec.t_range = {t_range.first, t_range.second};
            spec.p_values = std::move(p_values);
            spec.q_values = std::move(q_values);
            const auto parity = required_parity(id);
            spec.m_values = m_values ? *m_values
                                     : (parity && *parity == 0 ? std::vector<int>{2, 4, 6} : std::vector<int>{1, 3, 5});
            spec.tol_scale = tol;
            SweepOptions opts;
            opts.series = series_from(series);
            opts.explore = explore;
            opts.threads = threads;
            SweepResult result;
            {
                py::gil_scoped_release release;
                result = sweep(id, spec, opts);
            }
            py::dict summary;
            summary["theorem"] = std::string(to_string(result.theorem));
            summary["samples"] = result.summary.samples;
            summary["violations"] = result.summary.violations;
            summary["min_margin"] = result.summary.min_margin;
            summary["argmin"] = inputs_dict(result.summary.argmin);
            return py::make_tuple(summary, result.reports);
        },
        py::arg("theorem"), py::arg("sample_count") = 10000, py::arg("seed") = 42,
        py::arg("s_range") = std::pair{0.0, 10.0}, py::arg("t_range") = std::pair{0.0, 10.0},
        py::arg("p_values") = std::vector<std::int64_t>{1, 2, 5, 10, 100, 1000},
        py::arg("q_values") = std::vector<double>{0.1, 0.5, 0.9, 0.99}, py::arg("m_values") = py::none(),
        py::arg("tol") = 1e-9, py::arg("series") = "exact", py::arg("explore") = false, py::arg("threads") = 0,
        "Returns (summary dict, list of InequalityReport) in sample order.");

    m.def(
        "witness_sweep",
        [](std::int64_t sample_count, std::uint64_t seed, std::vector<int> m_values, const std::string& series) {
            SweepSpec spec;
            spec.sample_count = sample_count;
            spec.seed = seed;
            spec.m_values = std::move(m_values);
            SweepOptions opts;
            opts.series = series_from(series);
            WitnessSummary w;
            {
                py::gil_scoped_release release;
                w = witness_sweep(spec, opts);
            }
            py::dict d;
            d["mu_prime"] = tally_dict(w.mu_prime);
            d["eta_prime"] = tally_dict(w.eta_prime);
            d["lambda_prime"] = tally_dict(w.lambda_prime);
            d["t1_limit"] = tally_dict(w.t1_limit);
            d["product_chain"] = tally_dict(w.product_chain);
            d["total_violations"] = w.total_violations();
            return d;
        },
        py::arg("sample_count") = 10000, py::arg("seed") = 42, py::arg("m_values") = std::vector<int>{1, 2, 3, 4, 5, 6},
        py::arg("series") = "exact");

    // limits
    m.def(
        "recovery_table",
        [](const std::string& func, double t, double s, int order,
           std::optional<std::vector<std::pair<std::int64_t, double>>> schedule, const std::string& series) {
            const LimitSchedule sched =
                schedule ? LimitSchedule(*schedule, "custom") : LimitSchedule::standard();
            const RecoveryTable table =
                recovery_table(parse_recovery_function(func), RecoveryPoint{t, s, order}, sched, series_from(series));
            py::list rows;
            for (const auto& r : table.rows) {
                py::dict d;
                d["k"] = r.k;
                d["p"] = r.p;
                d["q"] = r.q;
                d["value"] = r.value;
                d["target"] = r.target;
                d["abs_err"] = r.abs_err;
                d["error"] = r.error ? py::cast(*r.error) : py::none();
                rows.append(d);
            }
            return py::make_tuple(rows, table.strictly_decreasing);
        },
        py::arg("func"), py::arg("t"), py::arg("s") = 0.5, py::arg("m") = 1, py::arg("schedule") = py::none(),
        py::arg("series") = "exact", "Returns (rows, strictly_decreasing).");

    // oracle
    m.def(
        "hp_psi_pq",
        [](double t, std::int64_t p, double q, int order, int digits, const std::string& series) {
            return oracle::hp_psi_pq(t, PQParams(p, q), oracle::Precision(digits), order, series_from(series));
        },
        py::arg("t"), py::arg("p"), py::arg("q"), py::arg("m") = 0, py::arg("digits") = 30,
        py::arg("series") = "exact");
    m.def(
        "fd_derivative",
        [](const std::function<double(double)>& f, double t, std::optional<double> step, int order, int levels) {
            oracle::FDScheme scheme;
            scheme.step = step;
            scheme.order = order == 4 ? oracle::FDOrder::fourth : oracle::FDOrder::second;
            scheme.richardson_levels = levels;
            const auto r = oracle::fd_derivative(f, t, scheme);
            return py::make_tuple(r.value, r.error_estimate);
        },
        py::arg("f"), py::arg("t"), py::arg("step") = py::none(), py::arg("order") = 2, py::arg("levels") = 2,
        "Returns (derivative, error estimate).");
}
