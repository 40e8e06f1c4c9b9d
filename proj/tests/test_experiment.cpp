#include <cmath>
#include <filesystem>
#include <fstream>

#include "cryptoforecast/error.hpp"
#include "cryptoforecast/experiment.hpp"
#include "cryptoforecast/rng.hpp"
#include "doctest.h"

using namespace cryptoforecast;
using namespace cryptoforecast::experiment;

namespace {

// small planted-signal panel: target = 0.5*(p1+p2) + noise
AlignedPanel planted_panel(int rows, std::uint64_t seed, double noise) {
    Rng rng(seed);
    AlignedPanel panel;
    panel.coins = {"P1", "P2", "TGT"};
    panel.columns.assign(3, std::vector<double>(rows));
    panel.timestamps.resize(rows);
    double a = 0, b = 0;
    for (int t = 0; t < rows; ++t) {
        a = 0.95 * a + rng.gaussian();
        b = 0.95 * b + rng.gaussian();
        panel.columns[0][t] = 100 + 5 * a;
        panel.columns[1][t] = 50 + 2 * b;
        panel.columns[2][t] = 0.5 * (panel.columns[0][t] + panel.columns[1][t]) +
                              noise * rng.gaussian();
        panel.timestamps[t] = 60L * t;
    }
    return panel;
}

AlignedPanel null_panel(int rows, std::uint64_t seed) {
    Rng rng(seed);
    AlignedPanel panel;
    panel.coins = {"P1", "P2", "TGT"};
    panel.columns.assign(3, std::vector<double>(rows));
    panel.timestamps.resize(rows);
    double a = 0, b = 0, c = 0;
    for (int t = 0; t < rows; ++t) {
        a = 0.95 * a + rng.gaussian();
        b = 0.95 * b + rng.gaussian();
        c = 0.95 * c + rng.gaussian();
        panel.columns[0][t] = 100 + 5 * a;
        panel.columns[1][t] = 50 + 2 * b;
        panel.columns[2][t] = 75 + 3 * c;
        panel.timestamps[t] = 60L * t;
    }
    return panel;
}

ExperimentSettings small_settings() {
    ExperimentSettings s;
    s.target = "TGT";
    s.predictors = {"P1", "P2"};
    s.seed = 7;
    s.gbt.max_iterations = 150;
    s.rnn.depth = 1;
    s.rnn.width = 12;
    s.rnn.bptt_window = 32;
    s.rnn.batch_size = 4;
    s.rnn.max_epochs = 60;
    s.rnn.patience = 10;
    return s;
}

double rmse_of(const ForecastReport& report, const std::string& name) {
    for (const auto& run : report.models)
        if (run.name == name) return run.metrics.rmse;
    throw std::runtime_error("model missing from report: " + name);
}

}  // namespace

TEST_SUITE("experiment") {

TEST_CASE("planted signal beats the mean baseline by a wide margin") {
    AlignedPanel panel = planted_panel(2200, 42, 0.4);
    ExperimentSettings settings = small_settings();
    ForecastReport report = run_experiment(panel, settings);

    const double baseline = rmse_of(report, "mean");
    CHECK(rmse_of(report, "gbt") < 0.3 * baseline);
    CHECK(rmse_of(report, "lstm") < 0.3 * baseline);
    CHECK(rmse_of(report, "gru") < 0.3 * baseline);
}

TEST_CASE("null signal yields no fake skill") {
    AlignedPanel panel = null_panel(2200, 43);
    ExperimentSettings settings = small_settings();
    ForecastReport report = run_experiment(panel, settings);

    const double baseline = rmse_of(report, "mean");
    for (const char* name : {"gbt", "lstm", "gru"}) {
        INFO(name, " rmse = ", rmse_of(report, name), " baseline = ", baseline);
        CHECK(rmse_of(report, name) > 0.8 * baseline);
        CHECK(rmse_of(report, name) < 1.2 * baseline);
    }
}

TEST_CASE("every model consumes the identical test rows") {
    AlignedPanel panel = planted_panel(1200, 44, 0.4);
    ExperimentSettings settings = small_settings();
    settings.rnn.train_gru = false;
    ForecastReport report = run_experiment(panel, settings);
    for (const auto& run : report.models)
        CHECK(run.predictions.size() == report.test_truth.size());
    // the report's truth is exactly the original test slice of the panel
    const std::size_t T = panel.n_rows();
    const std::size_t n_test = static_cast<std::size_t>(0.1 * T);
    for (std::size_t i = 0; i < n_test; ++i)
        CHECK(report.test_truth[i] == panel.columns[2][T - n_test + i]);
}

TEST_CASE("experiment runs are bitwise deterministic") {
    AlignedPanel panel = planted_panel(1000, 45, 0.5);
    ExperimentSettings settings = small_settings();
    settings.rnn.max_epochs = 15;
    ForecastReport a = run_experiment(panel, settings);
    ForecastReport b = run_experiment(panel, settings);
    CHECK(report_to_json(a) == report_to_json(b));
    for (std::size_t m = 0; m < a.models.size(); ++m)
        CHECK(a.models[m].predictions == b.models[m].predictions);
}

TEST_CASE("report regenerates bitwise from serialized models") {
    AlignedPanel panel = planted_panel(1000, 46, 0.5);
    ExperimentSettings settings = small_settings();
    settings.rnn.max_epochs = 10;

    SupervisedSlices slices = prepare(panel, settings);
    TrainedModels models = train_models(slices, settings);
    ForecastReport direct = evaluate_models(slices, models, settings);

    auto dir = std::filesystem::temp_directory_path() / "cf_models_rt";
    std::filesystem::remove_all(dir);
    save_models(models, dir.string());
    TrainedModels loaded = load_models(dir.string(), settings);
    ForecastReport regenerated = evaluate_models(slices, loaded, settings);
    CHECK(report_to_json(direct) == report_to_json(regenerated));
    for (std::size_t m = 0; m < direct.models.size(); ++m)
        CHECK(direct.models[m].predictions == regenerated.models[m].predictions);
}

TEST_CASE("metrics are inverse-transform consistent") {
    AlignedPanel panel = planted_panel(1000, 47, 0.5);
    ExperimentSettings settings = small_settings();
    settings.rnn.train_lstm = false;
    settings.rnn.train_gru = false;

    SupervisedSlices slices = prepare(panel, settings);
    TrainedModels models = train_models(slices, settings);
    ForecastReport report = evaluate_models(slices, models, settings);

    // score the standardized predictions in standardized units and map the
    // MSE/MAE back through the target scale
    auto std_pred = gbt::predict(*models.gbt_model, slices.test);
    auto std_truth = slices.standardizer.apply_column(slices.test_truth, "TGT");
    forecast::ForecastMetrics in_std = forecast::compute_metrics(std_pred, std_truth);
    const double sd = slices.standardizer.stddev("TGT");
    CHECK(rmse_of(report, "gbt") == doctest::Approx(in_std.rmse * sd).epsilon(1e-6));
}

TEST_CASE("lag shifts features behind the target") {
    AlignedPanel panel = planted_panel(400, 48, 0.1);
    ExperimentSettings settings = small_settings();
    settings.lag = 3;
    SupervisedSlices slices = prepare(panel, settings);
    // row i of the supervised view pairs predictors at t-3 with target at t
    const double p1_first = panel.columns[0][0];
    const double expected = (p1_first - slices.standardizer.mean("P1")) /
                            slices.standardizer.stddev("P1");
    CHECK(slices.train.feature_columns[0][0] == doctest::Approx(expected).epsilon(1e-12));
    const std::size_t rows = panel.n_rows() - 3;
    CHECK(slices.train.rows() + slices.validation.rows() + slices.test.rows() == rows);
}

TEST_CASE("empty predictor set is a config error") {
    AlignedPanel panel = planted_panel(400, 49, 0.1);
    ExperimentSettings settings = small_settings();
    settings.predictors.clear();
    CHECK_THROWS_AS(run_experiment(panel, settings), ConfigError);
}

}  // TEST_SUITE
