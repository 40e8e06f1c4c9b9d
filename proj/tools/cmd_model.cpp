#include <filesystem>
#include <fstream>
#include <iostream>

#include "commands.hpp"
#include "cryptoforecast/error.hpp"
#include "cryptoforecast/experiment.hpp"
#include "cryptoforecast/ingest.hpp"

namespace cfcli {

namespace cf = cryptoforecast;
namespace fs = std::filesystem;

namespace {

// The modeling panel keeps the minute resolution when a minute file is
// configured; daily files model daily closes.
cf::AlignedPanel load_model_panel(const RunConfig& config) {
    return load_close_panel(config, /*daily_average=*/false);
}

cf::experiment::ExperimentSettings resolve_settings(const RunConfig& config,
                                                    const cf::AlignedPanel& panel) {
    cf::experiment::ExperimentSettings settings = config.experiment_settings();
    if (settings.predictors.empty()) {
        // fall back to threshold + causality screening on daily averages
        cf::AlignedPanel daily = load_close_panel(config, /*daily_average=*/true);
        settings.predictors = auto_select_predictors(config, daily, config.target);
        if (settings.predictors.empty())
            throw cf::DataError("no predictors passed the correlation/causality screen for " +
                                config.target);
        std::cout << "auto-selected predictors:";
        for (const auto& p : settings.predictors) std::cout << ' ' << p;
        std::cout << '\n';
    }
    for (const auto& coin : settings.predictors) panel.coin_index(coin);  // validate
    panel.coin_index(settings.target);
    return settings;
}

}  // namespace

int cmd_train(const RunConfig& config) {
    cf::AlignedPanel panel = load_model_panel(config);
    cf::experiment::ExperimentSettings settings = resolve_settings(config, panel);

    cf::experiment::SupervisedSlices slices = cf::experiment::prepare(panel, settings);
    cf::experiment::TrainedModels models = cf::experiment::train_models(slices, settings);
    cf::experiment::save_models(models, config.model_dir);

    std::ofstream sout(config.model_dir + "/settings.json");
    if (!sout) throw cf::DataError("cannot write " + config.model_dir + "/settings.json");
    sout << cf::experiment::settings_snapshot(settings).dump(2) << '\n';

    std::cout << "wrote models to " << config.model_dir << '\n';
    if (models.gbt_model)
        std::cout << "  gbt: " << models.gbt_model->trees.size() << " trees kept (lr "
                  << models.gbt_rate << ")\n";
    if (models.lstm_model)
        std::cout << "  lstm: checkpoint epoch " << models.lstm_history.checkpoint_iteration
                  << '\n';
    if (models.gru_model)
        std::cout << "  gru: checkpoint epoch " << models.gru_history.checkpoint_iteration
                  << '\n';
    return 0;
}

namespace {

cf::experiment::ForecastReport rebuild_report(const RunConfig& config) {
    cf::AlignedPanel panel = load_model_panel(config);

    // Rebuild the exact settings used at training time so the slices match.
    const std::string settings_path = config.model_dir + "/settings.json";
    std::ifstream in(settings_path);
    if (!in) throw cf::ModelFileError("missing " + settings_path + "; run `train` first");
    nlohmann::json saved;
    try {
        saved = nlohmann::json::parse(in);
    } catch (const nlohmann::json::exception& e) {
        throw cf::ModelFileError(settings_path + ": " + e.what());
    }

    cf::experiment::ExperimentSettings settings = config.experiment_settings();
    settings.target = saved.at("target").get<std::string>();
    settings.predictors = saved.at("predictors").get<std::vector<std::string>>();
    settings.lag = saved.at("lag").get<int>();
    settings.split.train_fraction = saved.at("split").at("train").get<double>();
    settings.split.validation_fraction = saved.at("split").at("validation").get<double>();
    settings.split.test_fraction = saved.at("split").at("test").get<double>();
    settings.seed = saved.at("seed").get<std::uint64_t>();

    if (settings.target != config.target)
        throw cf::ConfigError("config target " + config.target +
                              " does not match trained model target " + settings.target);

    cf::experiment::SupervisedSlices slices = cf::experiment::prepare(panel, settings);
    cf::experiment::TrainedModels models =
        cf::experiment::load_models(config.model_dir, settings);
    return cf::experiment::evaluate_models(slices, models, settings);
}

}  // namespace

int cmd_predict(const RunConfig& config) {
    cf::experiment::ForecastReport report = rebuild_report(config);
    fs::create_directories(config.out_dir);
    const std::string path = config.out_dir + "/predictions.csv";
    cf::experiment::write_predictions_csv(report, path);
    std::cout << "wrote " << path << " (" << report.test_truth.size() << " rows)\n";
    return 0;
}

int cmd_evaluate(const RunConfig& config) {
    cf::experiment::ForecastReport report = rebuild_report(config);
    cf::experiment::write_report(report, config.out_dir);
    std::cout << cf::experiment::report_to_text(report);
    std::cout << "wrote report to " << config.out_dir << '\n';
    return 0;
}

int cmd_report(const RunConfig& config) {
    cf::AlignedPanel panel = load_model_panel(config);
    cf::experiment::ExperimentSettings settings = resolve_settings(config, panel);
    cf::experiment::ForecastReport report = cf::experiment::run_experiment(panel, settings);
    cf::experiment::write_report(report, config.out_dir);
    std::cout << cf::experiment::report_to_text(report);
    std::cout << "wrote report to " << config.out_dir << '\n';
    return 0;
}

}  // namespace cfcli
