// Python bindings. Vectors cross as lists or 1-D arrays; structured results
// are returned as dicts with the same fields as the JSON reports.

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <optional>
#include <string>
#include <vector>

#include "ssre/dmtest.hpp"
#include "ssre/error.hpp"
#include "ssre/eprocess.hpp"
#include "ssre/harness.hpp"
#include "ssre/io.hpp"
#include "ssre/report.hpp"
#include "ssre/sequential.hpp"

namespace py = pybind11;
using namespace ssre;

namespace {

py::object to_py(const nlohmann::json& j) {
    switch (j.type()) {
    case nlohmann::json::value_t::null: return py::none();
    case nlohmann::json::value_t::boolean: return py::bool_(j.get<bool>());
    case nlohmann::json::value_t::number_integer: return py::int_(j.get<long long>());
    case nlohmann::json::value_t::number_unsigned: return py::int_(j.get<unsigned long long>());
    case nlohmann::json::value_t::number_float: return py::float_(j.get<double>());
    case nlohmann::json::value_t::string: return py::str(j.get<std::string>());
    case nlohmann::json::value_t::array: {
        py::list out;
        for (const auto& v : j) out.append(to_py(v));
        return out;
    }
    case nlohmann::json::value_t::object: {
        py::dict out;
        for (auto it = j.begin(); it != j.end(); ++it) out[py::str(it.key())] = to_py(it.value());
        return out;
    }
    default: throw std::runtime_error("unsupported JSON value");
    }
}

std::vector<OmegaRate> rates_of(const std::vector<double>& values) {
    std::vector<OmegaRate> rates;
    for (double v : values) rates.emplace_back(v);
    return rates;
}

Boundaries resolve_boundaries(const std::string& scheme, double beta, double omega, std::optional<double> k_u) {
    if (scheme == "two-sided") return boundaries_from_beta(beta, OmegaRate(omega));
    if (scheme == "modified") return modified_boundary(beta, k_u);
    throw Error(ErrorKind::InvalidConfig, "scheme must be 'two-sided' or 'modified'");
}

}  // namespace

PYBIND11_MODULE(_ssre, m) {
    m.doc() = "Sequential scoring-rule evaluation of competing forecasters";

    // Leaked on purpose: the type must outlive interpreter teardown.
    static py::object* error_type =
        new py::object(py::reinterpret_borrow<py::object>(py::exception<Error>(m, "SsreError", PyExc_RuntimeError)));
    py::register_exception_translator([](std::exception_ptr p) {
        try {
            if (p) std::rethrow_exception(p);
        } catch (const Error& e) {
            py::object inst = (*error_type)(e.what());
            inst.attr("kind") = std::string(to_string(e.kind()));
            PyErr_SetObject(error_type->ptr(), inst.ptr());
        }
    });

    m.attr("SCHEMA_VERSION") = kSchemaVersion;
    m.attr("PUBLISHED_UPPER_BOUNDARY") = kPublishedUpperBoundary;

    m.def(
        "simulate",
        [](const std::string& config, std::size_t replication) {
            const ExperimentSpec spec = parse_config(config);
            spec.validate();
            const SimulatedSeries s = simulate(dgp_for(spec, replication));
            py::dict out;
            out["y"] = s.y;
            if (!s.x1.empty()) {
                out["x1"] = s.x1;
                out["x2"] = s.x2;
            }
            return out;
        },
        py::arg("config"), py::arg("replication") = 0);

    m.def(
        "score_diff",
        [](const std::vector<double>& q, const std::vector<double>& p) {
            const ScoreDiffSeries s = score_diff_series(q, p);
            return py::make_tuple(s.diffs, s.cumsum);
        },
        py::arg("score_q"), py::arg("score_p"));

    m.def(
        "boundaries",
        [](const std::string& scheme, double beta, double omega, std::optional<double> k_u) {
            return to_py(to_json(resolve_boundaries(scheme, beta, omega, k_u)));
        },
        py::arg("scheme") = "two-sided", py::arg("beta") = 0.1, py::arg("omega") = 1.0, py::arg("k_u") = py::none());

    m.def(
        "ssre_run",
        [](const std::vector<double>& log_path, const std::string& scheme, double beta, double omega,
           std::optional<double> k_u, std::optional<std::size_t> n_max) {
            return to_py(to_json(run_ssre(log_path, resolve_boundaries(scheme, beta, omega, k_u), n_max)));
        },
        py::arg("log_path"), py::arg("scheme") = "two-sided", py::arg("beta") = 0.1, py::arg("omega") = 1.0,
        py::arg("k_u") = py::none(), py::arg("n_max") = py::none());

    m.def(
        "evalue_test",
        [](const std::vector<double>& delta, const std::vector<double>& rates, double beta, std::optional<double> k_u) {
            return to_py(to_json(run_mean_evalue_test(delta, rates_of(rates), modified_boundary(beta, k_u))));
        },
        py::arg("cumulative_delta"), py::arg("rates") = std::vector<double>{0.25, 0.5, 1.0}, py::arg("beta") = 0.1,
        py::arg("k_u") = kPublishedUpperBoundary);

    m.def(
        "mean_evalue", [](double omega, const std::vector<double>& delta) { return mean_evalue(OmegaRate(omega), delta); },
        py::arg("omega"), py::arg("cumulative_delta"));

    m.def(
        "dm_test",
        [](const std::vector<double>& d, double level, std::optional<std::size_t> bandwidth) {
            return to_py(to_json(dm_test_diffs(d, level, bandwidth)));
        },
        py::arg("diffs"), py::arg("level") = 0.1, py::arg("bandwidth") = py::none());

    m.def(
        "omega_screen",
        [](const std::vector<double>& delta, const std::vector<double>& rates, double threshold) {
            return to_py(to_json(omega_screen(delta, rates_of(rates), threshold)));
        },
        py::arg("in_sample_delta"), py::arg("rates") = std::vector<double>{0.25, 0.5, 1.0},
        py::arg("threshold") = 0.9);

    m.def("mgf_root", [](const std::vector<double>& z) { return mgf_root(z); }, py::arg("z"));
    m.def(
        "wald_boundaries",
        [](double bq, double bp, double h) { return to_py(to_json(wald_boundaries(bq, bp, h))); },
        py::arg("beta_q"), py::arg("beta_p"), py::arg("h_eff"));
    m.def(
        "error_rates",
        [](double k_l, double k_u, double hq, double hp) {
            const ErrorRates e = error_rates(k_l, k_u, hq, hp);
            return py::make_tuple(e.beta_q, e.beta_p);
        },
        py::arg("k_l"), py::arg("k_u"), py::arg("h_eff_q"), py::arg("h_eff_p"));
    m.def("plan_n", &min_sample_size, py::arg("expected_stop"), py::arg("prob"));

    m.def(
        "run_experiment",
        [](const std::string& config, bool records) {
            const ExperimentSpec spec = parse_config(config);
            McReport r;
            {
                py::gil_scoped_release release;
                r = run_experiment(spec);
            }
            return to_py(versioned(to_json(r, records)));
        },
        py::arg("config"), py::arg("records") = false);

    m.def(
        "replicate_table1",
        [](const std::string& config) {
            const ExperimentSpec spec = parse_config(config);
            spec.validate();
            Table1 t;
            {
                py::gil_scoped_release release;
                t = replicate_table1(spec);
            }
            py::dict out = to_py(versioned(to_json(t)));
            out["text"] = format_table1(t);
            return out;
        },
        py::arg("config"));
}
