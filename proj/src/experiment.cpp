#include "cryptoforecast/experiment.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>

#include "cryptoforecast/csv.hpp"
#include "cryptoforecast/error.hpp"

namespace cryptoforecast::experiment {

namespace {

Dataset dataset_from(const AlignedPanel& panel, const std::vector<std::string>& predictors,
                     const std::string& target) {
    Dataset data;
    for (const auto& coin : predictors)
        data.feature_columns.push_back(panel.columns[panel.coin_index(coin)]);
    data.targets = panel.columns[panel.coin_index(target)];
    return data;
}

}  // namespace

nlohmann::ordered_json settings_snapshot(const ExperimentSettings& s) {
    nlohmann::ordered_json j;
    j["target"] = s.target;
    j["predictors"] = s.predictors;
    j["lag"] = s.lag;
    j["split"] = {{"train", s.split.train_fraction},
                  {"validation", s.split.validation_fraction},
                  {"test", s.split.test_fraction}};
    j["gbt"] = {{"enabled", s.gbt.enabled},
                {"learning_rate", s.gbt.learning_rate},
                {"grid_search", s.gbt.grid_search},
                {"folds", s.gbt.folds},
                {"max_iterations", s.gbt.max_iterations},
                {"patience", s.gbt.patience},
                {"max_depth", s.gbt.max_depth},
                {"min_node_size", s.gbt.min_node_size}};
    j["rnn"] = {{"train_lstm", s.rnn.train_lstm},
                {"train_gru", s.rnn.train_gru},
                {"depth", s.rnn.depth},
                {"width", s.rnn.width},
                {"bptt_window", s.rnn.bptt_window},
                {"batch_size", s.rnn.batch_size},
                {"learning_rate", s.rnn.learning_rate},
                {"lr_range_test", s.rnn.lr_range_test},
                {"max_epochs", s.rnn.max_epochs},
                {"patience", s.rnn.patience},
                {"clip_norm", s.rnn.clip_norm}};
    j["seed"] = s.seed;
    return j;
}

SupervisedSlices prepare(const AlignedPanel& panel, const ExperimentSettings& settings) {
    if (settings.predictors.empty())
        throw ConfigError("experiment: predictor set is empty");
    if (settings.lag < 0) throw ConfigError("experiment: negative lag");

    // Shift features back by `lag`: row t pairs predictors at t-lag with the
    // target at t. lag = 0 is the contemporaneous regression.
    std::vector<std::string> wanted = settings.predictors;
    wanted.push_back(settings.target);
    AlignedPanel shifted = panel.select(wanted);
    if (settings.lag > 0) {
        const std::size_t lag = static_cast<std::size_t>(settings.lag);
        if (shifted.n_rows() <= lag + 10)
            throw DataError("experiment: panel too short for lag " + std::to_string(lag));
        const std::size_t T = shifted.n_rows();
        for (std::size_t j = 0; j + 1 < shifted.columns.size(); ++j) {
            auto& col = shifted.columns[j];
            col.erase(col.end() - static_cast<std::ptrdiff_t>(lag), col.end());
        }
        auto& target_col = shifted.columns.back();
        target_col.erase(target_col.begin(), target_col.begin() + static_cast<std::ptrdiff_t>(lag));
        shifted.timestamps.erase(shifted.timestamps.begin(),
                                 shifted.timestamps.begin() + static_cast<std::ptrdiff_t>(lag));
        (void)T;
    }

    forecast::PanelSplit split = forecast::chronological_split(shifted, settings.split);
    SupervisedSlices slices;
    slices.target = settings.target;
    slices.standardizer = forecast::Standardizer::fit(split.train);

    AlignedPanel train_std = slices.standardizer.apply(split.train);
    AlignedPanel val_std = slices.standardizer.apply(split.validation);
    AlignedPanel test_std = slices.standardizer.apply(split.test);

    slices.train = dataset_from(train_std, settings.predictors, settings.target);
    slices.validation = dataset_from(val_std, settings.predictors, settings.target);
    slices.test = dataset_from(test_std, settings.predictors, settings.target);
    slices.train_truth = split.train.columns[split.train.coin_index(settings.target)];
    slices.test_truth = split.test.columns[split.test.coin_index(settings.target)];
    slices.test_timestamps = split.test.timestamps;
    return slices;
}

TrainedModels train_models(const SupervisedSlices& slices, const ExperimentSettings& settings) {
    TrainedModels out;

    if (settings.gbt.enabled) {
        gbt::GbtFitOptions options;
        options.max_iterations = settings.gbt.max_iterations;
        options.patience = settings.gbt.patience;
        options.tree_params.max_depth = settings.gbt.max_depth;
        options.tree_params.min_node_size = settings.gbt.min_node_size;
        options.learning_rate = settings.gbt.learning_rate;
        if (settings.gbt.grid_search) {
            auto grid = gbt::default_rate_grid();
            options.learning_rate =
                gbt::grid_search_lr(slices.train, grid, settings.gbt.folds, options);
        }
        out.gbt_rate = options.learning_rate;
        gbt::GbtFitResult res = gbt::fit_gbt(slices.train, slices.validation, options);
        out.gbt_model = std::move(res.model);
        out.gbt_history = std::move(res.history);
    }

    auto fit_cell = [&](rnn::CellKind cell, std::uint64_t seed_offset) {
        rnn::RnnConfig config;
        config.cell = cell;
        config.depth = settings.rnn.depth;
        config.width = settings.rnn.width;
        config.input_dim = static_cast<int>(slices.train.n_features());
        config.bptt_window = settings.rnn.bptt_window;
        config.batch_size = settings.rnn.batch_size;
        config.seed = settings.seed + seed_offset;

        rnn::RnnFitOptions options;
        options.learning_rate = settings.rnn.learning_rate;
        options.max_epochs = settings.rnn.max_epochs;
        options.patience = settings.rnn.patience;
        options.clip_norm = settings.rnn.clip_norm;
        if (settings.rnn.lr_range_test) {
            auto sweep = rnn::lr_range_test([&] { return rnn::RnnModel::init(config); },
                                            slices.train);
            if (!sweep.degenerate) options.learning_rate = sweep.suggested;
        }
        out.rnn_rate = options.learning_rate;
        return rnn::fit_rnn(config, slices.train, slices.validation, options);
    };

    if (settings.rnn.train_lstm) {
        rnn::RnnFitResult res = fit_cell(rnn::CellKind::lstm, 0);
        out.lstm_model = std::move(res.model);
        out.lstm_history = std::move(res.history);
    }
    if (settings.rnn.train_gru) {
        rnn::RnnFitResult res = fit_cell(rnn::CellKind::gru, 1);
        out.gru_model = std::move(res.model);
        out.gru_history = std::move(res.history);
    }
    return out;
}

void save_models(const TrainedModels& models, const std::string& dir) {
    std::filesystem::create_directories(dir);
    nlohmann::ordered_json meta;
    meta["gbt_rate"] = models.gbt_rate;
    meta["rnn_rate"] = models.rnn_rate;
    if (models.gbt_model) {
        gbt::save_model(*models.gbt_model, dir + "/gbt.json");
        write_history_csv(models.gbt_history, dir + "/history_gbt.csv");
        meta["gbt_checkpoint"] = models.gbt_history.checkpoint_iteration;
    }
    if (models.lstm_model) {
        rnn::save_model(*models.lstm_model, dir + "/lstm.json");
        write_history_csv(models.lstm_history, dir + "/history_lstm.csv");
        meta["lstm_checkpoint"] = models.lstm_history.checkpoint_iteration;
    }
    if (models.gru_model) {
        rnn::save_model(*models.gru_model, dir + "/gru.json");
        write_history_csv(models.gru_history, dir + "/history_gru.csv");
        meta["gru_checkpoint"] = models.gru_history.checkpoint_iteration;
    }
    std::ofstream out(dir + "/meta.json");
    if (!out) throw DataError("cannot write " + dir + "/meta.json");
    out << meta.dump(2) << '\n';
}

TrainedModels load_models(const std::string& dir, const ExperimentSettings& settings) {
    TrainedModels models;
    if (settings.gbt.enabled) models.gbt_model = gbt::load_model(dir + "/gbt.json");
    if (settings.rnn.train_lstm) models.lstm_model = rnn::load_model(dir + "/lstm.json");
    if (settings.rnn.train_gru) models.gru_model = rnn::load_model(dir + "/gru.json");

    std::ifstream in(dir + "/meta.json");
    if (in) {
        try {
            nlohmann::json meta = nlohmann::json::parse(in);
            models.gbt_rate = meta.value("gbt_rate", 0.0);
            models.rnn_rate = meta.value("rnn_rate", 0.0);
            models.gbt_history.checkpoint_iteration = meta.value("gbt_checkpoint", std::size_t{0});
            models.lstm_history.checkpoint_iteration =
                meta.value("lstm_checkpoint", std::size_t{0});
            models.gru_history.checkpoint_iteration = meta.value("gru_checkpoint", std::size_t{0});
        } catch (const nlohmann::json::exception& e) {
            throw ModelFileError(dir + "/meta.json: " + e.what());
        }
    }
    return models;
}

ForecastReport evaluate_models(const SupervisedSlices& slices, const TrainedModels& models,
                               const ExperimentSettings& settings) {
    ForecastReport report;
    report.target = slices.target;
    report.test_timestamps = slices.test_timestamps;
    report.test_truth = slices.test_truth;
    report.config_snapshot = settings_snapshot(settings);

    const std::size_t horizon = slices.test_truth.size();
    auto add_model = [&](const std::string& name, std::vector<double> standardized_pred,
                         std::size_t checkpoint, double rate) {
        ModelRun run;
        run.name = name;
        run.predictions = slices.standardizer.invert_column(standardized_pred, slices.target);
        if (run.predictions.size() != horizon)
            throw DataError("evaluate_models: " + name + " prediction length mismatch");
        run.metrics = forecast::compute_metrics(run.predictions, slices.test_truth);
        run.checkpoint_iteration = checkpoint;
        run.learning_rate = rate;
        report.models.push_back(std::move(run));
    };

    if (models.gbt_model)
        add_model("gbt", gbt::predict(*models.gbt_model, slices.test),
                  models.gbt_model->trees.size(), models.gbt_model->learning_rate);
    if (models.lstm_model)
        add_model("lstm", models.lstm_model->predict(slices.test),
                  models.lstm_history.checkpoint_iteration, models.rnn_rate);
    if (models.gru_model)
        add_model("gru", models.gru_model->predict(slices.test),
                  models.gru_history.checkpoint_iteration, models.rnn_rate);

    for (auto kind : {forecast::BaselineKind::mean, forecast::BaselineKind::median}) {
        ModelRun run;
        run.name = kind == forecast::BaselineKind::mean ? "mean" : "median";
        run.predictions = forecast::baseline_predict(kind, slices.train_truth, horizon);
        run.metrics = forecast::compute_metrics(run.predictions, slices.test_truth);
        report.models.push_back(std::move(run));
    }
    return report;
}

ForecastReport run_experiment(const AlignedPanel& panel, const ExperimentSettings& settings) {
    SupervisedSlices slices = prepare(panel, settings);
    TrainedModels models = train_models(slices, settings);
    return evaluate_models(slices, models, settings);
}

std::string report_to_json(const ForecastReport& report) {
    nlohmann::ordered_json j;
    j["target"] = report.target;
    j["config"] = report.config_snapshot;
    j["n_test_rows"] = report.test_truth.size();
    auto& models = j["models"] = nlohmann::ordered_json::array();
    for (const auto& run : report.models) {
        nlohmann::ordered_json m;
        m["name"] = run.name;
        m["mse"] = run.metrics.mse;
        m["rmse"] = run.metrics.rmse;
        m["mae"] = run.metrics.mae;
        if (run.metrics.mape)
            m["mape"] = *run.metrics.mape;
        else
            m["mape"] = nullptr;
        m["checkpoint_iteration"] = run.checkpoint_iteration;
        m["learning_rate"] = run.learning_rate;
        models.push_back(std::move(m));
    }
    return j.dump(2);
}

std::string report_to_text(const ForecastReport& report) {
    char line[160];
    std::string out = "Forecast comparison for " + report.target + " (" +
                      std::to_string(report.test_truth.size()) + " test rows)\n";
    std::snprintf(line, sizeof(line), "%-10s %14s %12s %12s %10s\n", "Model", "MSE", "RMSE",
                  "MAE", "MAPE");
    out += line;
    out += std::string(62, '-') + "\n";
    for (const auto& run : report.models) {
        if (run.metrics.mape)
            std::snprintf(line, sizeof(line), "%-10s %14.4f %12.4f %12.4f %10.4f\n",
                          run.name.c_str(), run.metrics.mse, run.metrics.rmse, run.metrics.mae,
                          *run.metrics.mape);
        else
            std::snprintf(line, sizeof(line), "%-10s %14.4f %12.4f %12.4f %10s\n",
                          run.name.c_str(), run.metrics.mse, run.metrics.rmse, run.metrics.mae,
                          "n/a");
        out += line;
    }
    return out;
}

void write_report(const ForecastReport& report, const std::string& out_dir) {
    std::filesystem::create_directories(out_dir);
    {
        std::ofstream out(out_dir + "/report.json");
        if (!out) throw DataError("cannot write " + out_dir + "/report.json");
        out << report_to_json(report) << '\n';
    }
    {
        std::ofstream out(out_dir + "/report.txt");
        if (!out) throw DataError("cannot write " + out_dir + "/report.txt");
        out << report_to_text(report);
    }
    write_predictions_csv(report, out_dir + "/predictions.csv");
}

void write_predictions_csv(const ForecastReport& report, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw DataError("cannot write " + path);
    out << "timestamp,truth";
    for (const auto& run : report.models) out << ',' << run.name;
    out << '\n';
    for (std::size_t i = 0; i < report.test_truth.size(); ++i) {
        out << format_iso8601(report.test_timestamps[i]) << ','
            << csv::format_number(report.test_truth[i]);
        for (const auto& run : report.models) out << ',' << csv::format_number(run.predictions[i]);
        out << '\n';
    }
}

}  // namespace cryptoforecast::experiment
