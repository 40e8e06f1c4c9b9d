#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <span>

#include "cryptoforecast/correlation.hpp"
#include "cryptoforecast/dataset.hpp"
#include "cryptoforecast/forecast.hpp"
#include "cryptoforecast/gbt.hpp"
#include "cryptoforecast/granger.hpp"
#include "cryptoforecast/rnn.hpp"
#include "cryptoforecast/stationarity.hpp"

namespace py = pybind11;
namespace cf = cryptoforecast;

namespace {

std::vector<double> to_vector(const py::array_t<double, py::array::c_style>& arr) {
    if (arr.ndim() != 1) throw py::value_error("expected a 1-D array");
    const double* data = arr.data();
    return std::vector<double>(data, data + arr.shape(0));
}

py::array_t<double> to_array(const std::vector<double>& values) {
    py::array_t<double> out(static_cast<py::ssize_t>(values.size()));
    std::copy(values.begin(), values.end(), out.mutable_data());
    return out;
}

cf::Dataset to_dataset(const py::array_t<double, py::array::c_style>& features,
                       const py::array_t<double, py::array::c_style>& targets) {
    if (features.ndim() != 2) throw py::value_error("features must be 2-D (rows x columns)");
    cf::Dataset data;
    const auto rows = features.shape(0);
    const auto cols = features.shape(1);
    data.feature_columns.assign(cols, std::vector<double>(rows));
    auto view = features.unchecked<2>();
    for (py::ssize_t c = 0; c < cols; ++c)
        for (py::ssize_t r = 0; r < rows; ++r) data.feature_columns[c][r] = view(r, c);
    data.targets = to_vector(targets);
    if (data.targets.size() != static_cast<std::size_t>(rows))
        throw py::value_error("feature/target row counts differ");
    return data;
}

py::dict stationarity_dict(const cf::stationarity::StationarityResult& r) {
    py::dict out;
    out["test"] = r.test == cf::stationarity::TestKind::ADF ? "ADF" : "KPSS";
    out["statistic"] = r.statistic;
    out["lags_used"] = r.lags_used;
    py::dict cv;
    for (const auto& [level, value] : r.critical_values)
        cv[py::float_(level)] = value;
    out["critical_values"] = cv;
    out["stationary_5pct"] = r.decision_5pct == cf::stationarity::Decision::stationary;
    return out;
}

py::dict metrics_dict(const cf::forecast::ForecastMetrics& m) {
    py::dict out;
    out["mse"] = m.mse;
    out["rmse"] = m.rmse;
    out["mae"] = m.mae;
    if (m.mape)
        out["mape"] = *m.mape;
    else
        out["mape"] = py::none();
    return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Cross-coin correlation, causality and forecasting primitives";

    m.def(
        "pearson",
        [](const py::array_t<double, py::array::c_style>& x,
           const py::array_t<double, py::array::c_style>& y) {
            return cf::correlation::pearson(to_vector(x), to_vector(y));
        },
        py::arg("x"), py::arg("y"));

    m.def(
        "intensity_class",
        [](double r) { return cf::correlation::to_string(cf::correlation::intensity_class(r)); },
        py::arg("r"));

    m.def(
        "window_mean",
        [](const py::array_t<double, py::array::c_style>& values, const std::string& kind,
           std::size_t width) {
            cf::PriceSeries s;
            s.values = to_vector(values);
            s.timestamps.resize(s.values.size());
            for (std::size_t i = 0; i < s.values.size(); ++i)
                s.timestamps[i] = static_cast<cf::Timestamp>(i);
            cf::correlation::WindowSpec spec;
            spec.kind = kind == "tumbling" ? cf::correlation::WindowKind::tumbling
                                           : cf::correlation::WindowKind::sliding;
            spec.width = width;
            return cf::correlation::window_aggregate(s, spec).values;
        },
        py::arg("values"), py::arg("kind"), py::arg("width"));

    m.def(
        "adf_test",
        [](const py::array_t<double, py::array::c_style>& x, std::optional<int> max_lag) {
            return stationarity_dict(cf::stationarity::adf_test(to_vector(x), max_lag));
        },
        py::arg("x"), py::arg("max_lag") = py::none());

    m.def(
        "kpss_test",
        [](const py::array_t<double, py::array::c_style>& x) {
            return stationarity_dict(cf::stationarity::kpss_test(to_vector(x)));
        },
        py::arg("x"));

    m.def(
        "integration_order",
        [](const py::array_t<double, py::array::c_style>& x, int d_max) {
            auto order = cf::stationarity::integration_order(to_vector(x), d_max);
            py::dict out;
            out["d"] = order.d;
            out["settled"] = order.settled;
            return out;
        },
        py::arg("x"), py::arg("d_max") = 2);

    m.def("chi2_survival", &cf::granger::chi2_survival, py::arg("x"), py::arg("dof"));

    m.def(
        "toda_yamamoto",
        [](const py::array_t<double, py::array::c_style>& cause,
           const py::array_t<double, py::array::c_style>& effect, int p_max, int d_max) {
            cf::PriceSeries a, b;
            a.coin = "cause";
            b.coin = "effect";
            a.values = to_vector(cause);
            b.values = to_vector(effect);
            if (a.values.size() != b.values.size())
                throw py::value_error("series must have equal length");
            a.timestamps.resize(a.values.size());
            b.timestamps.resize(b.values.size());
            for (std::size_t i = 0; i < a.values.size(); ++i)
                a.timestamps[i] = b.timestamps[i] = static_cast<cf::Timestamp>(i);
            cf::granger::TodaYamamotoOptions options;
            options.p_max = p_max;
            options.d_max = d_max;
            auto res = cf::granger::toda_yamamoto(a, b, options);
            py::dict out;
            out["p"] = res.p;
            out["d"] = res.d;
            out["chi2"] = res.wald_statistic;
            out["dof"] = res.dof;
            out["p_value"] = res.p_value;
            out["reject_5pct"] = res.reject_at_5pct;
            return out;
        },
        py::arg("cause"), py::arg("effect"), py::arg("p_max") = 10, py::arg("d_max") = 2);

    m.def(
        "compute_metrics",
        [](const py::array_t<double, py::array::c_style>& predictions,
           const py::array_t<double, py::array::c_style>& truth) {
            return metrics_dict(
                cf::forecast::compute_metrics(to_vector(predictions), to_vector(truth)));
        },
        py::arg("predictions"), py::arg("truth"));

    py::class_<cf::gbt::GbtModel>(m, "GbtModel")
        .def_static(
            "fit",
            [](const py::array_t<double, py::array::c_style>& X,
               const py::array_t<double, py::array::c_style>& y,
               const py::array_t<double, py::array::c_style>& X_val,
               const py::array_t<double, py::array::c_style>& y_val, double learning_rate,
               int max_iterations, int patience, int max_depth, int min_node_size) {
                cf::gbt::GbtFitOptions options;
                options.learning_rate = learning_rate;
                options.max_iterations = max_iterations;
                options.patience = patience;
                options.tree_params.max_depth = max_depth;
                options.tree_params.min_node_size = min_node_size;
                auto res = cf::gbt::fit_gbt(to_dataset(X, y), to_dataset(X_val, y_val), options);
                return res.model;
            },
            py::arg("X"), py::arg("y"), py::arg("X_val"), py::arg("y_val"),
            py::arg("learning_rate") = 0.01, py::arg("max_iterations") = 500,
            py::arg("patience") = 20, py::arg("max_depth") = 6, py::arg("min_node_size") = 20)
        .def(
            "predict",
            [](const cf::gbt::GbtModel& model,
               const py::array_t<double, py::array::c_style>& X) {
                py::array_t<double> dummy(static_cast<py::ssize_t>(X.shape(0)));
                std::fill(dummy.mutable_data(), dummy.mutable_data() + X.shape(0), 0.0);
                return to_array(cf::gbt::predict(model, to_dataset(X, dummy)));
            },
            py::arg("X"))
        .def_property_readonly("n_trees",
                               [](const cf::gbt::GbtModel& m_) { return m_.trees.size(); })
        .def_property_readonly("base_prediction",
                               [](const cf::gbt::GbtModel& m_) { return m_.base_prediction; })
        .def("to_json", [](const cf::gbt::GbtModel& m_) { return cf::gbt::to_json(m_); })
        .def_static("from_json",
                    [](const std::string& text) { return cf::gbt::model_from_json(text); });

    py::class_<cf::rnn::RnnModel>(m, "RnnModel")
        .def_static(
            "fit",
            [](const py::array_t<double, py::array::c_style>& X,
               const py::array_t<double, py::array::c_style>& y,
               const py::array_t<double, py::array::c_style>& X_val,
               const py::array_t<double, py::array::c_style>& y_val, const std::string& cell,
               int depth, int width, int bptt_window, int batch_size, double learning_rate,
               int max_epochs, int patience, std::uint64_t seed) {
                cf::rnn::RnnConfig config;
                config.cell =
                    cell == "gru" ? cf::rnn::CellKind::gru : cf::rnn::CellKind::lstm;
                config.depth = depth;
                config.width = width;
                config.input_dim = static_cast<int>(X.shape(1));
                config.bptt_window = bptt_window;
                config.batch_size = batch_size;
                config.seed = seed;
                cf::rnn::RnnFitOptions options;
                options.learning_rate = learning_rate;
                options.max_epochs = max_epochs;
                options.patience = patience;
                auto res =
                    cf::rnn::fit_rnn(config, to_dataset(X, y), to_dataset(X_val, y_val), options);
                return res.model;
            },
            py::arg("X"), py::arg("y"), py::arg("X_val"), py::arg("y_val"),
            py::arg("cell") = "lstm", py::arg("depth") = 2, py::arg("width") = 32,
            py::arg("bptt_window") = 64, py::arg("batch_size") = 16,
            py::arg("learning_rate") = 1e-3, py::arg("max_epochs") = 100,
            py::arg("patience") = 20, py::arg("seed") = 0)
        .def(
            "predict",
            [](const cf::rnn::RnnModel& model,
               const py::array_t<double, py::array::c_style>& X) {
                py::array_t<double> dummy(static_cast<py::ssize_t>(X.shape(0)));
                std::fill(dummy.mutable_data(), dummy.mutable_data() + X.shape(0), 0.0);
                return to_array(model.predict(to_dataset(X, dummy)));
            },
            py::arg("X"))
        .def("to_json", [](const cf::rnn::RnnModel& m_) { return cf::rnn::to_json(m_); })
        .def_static("from_json",
                    [](const std::string& text) { return cf::rnn::model_from_json(text); });
}
