#pragma once

#include <optional>
#include <string>
#include <vector>

#include "cryptoforecast/dataset.hpp"
#include "cryptoforecast/forecast.hpp"
#include "cryptoforecast/gbt.hpp"
#include "cryptoforecast/rnn.hpp"
#include "cryptoforecast/types.hpp"
#include "nlohmann/json.hpp"

namespace cryptoforecast::experiment {

struct GbtSettings {
    bool enabled = true;
    double learning_rate = 0.01;
    bool grid_search = false;  // pick the rate by 10-fold CV over the default grid
    int folds = 10;
    int max_iterations = 500;
    int patience = 20;
    int max_depth = 6;
    int min_node_size = 20;
};

struct RnnSettings {
    bool train_lstm = true;
    bool train_gru = true;
    int depth = 2;
    int width = 32;
    int bptt_window = 64;
    int batch_size = 16;
    double learning_rate = 0.001;
    bool lr_range_test = false;  // sweep for a rate instead of using the fixed one
    int max_epochs = 500;
    int patience = 20;
    double clip_norm = 5.0;
};

struct ExperimentSettings {
    std::string target;
    std::vector<std::string> predictors;
    int lag = 0;  // features at t-lag predict the target at t
    forecast::SplitSpec split;
    GbtSettings gbt;
    RnnSettings rnn;
    std::uint64_t seed = 42;
};

nlohmann::ordered_json settings_snapshot(const ExperimentSettings& settings);

// Split + standardized supervised views of one panel. Every model consumes
// the same three Dataset objects.
struct SupervisedSlices {
    Dataset train, validation, test;       // standardized units
    std::vector<double> train_truth;       // original units
    std::vector<double> test_truth;        // original units
    std::vector<Timestamp> test_timestamps;
    forecast::Standardizer standardizer;
    std::string target;
};

SupervisedSlices prepare(const AlignedPanel& panel, const ExperimentSettings& settings);

struct TrainedModels {
    std::optional<gbt::GbtModel> gbt_model;
    TrainHistory gbt_history;
    double gbt_rate = 0;
    std::optional<rnn::RnnModel> lstm_model;
    TrainHistory lstm_history;
    std::optional<rnn::RnnModel> gru_model;
    TrainHistory gru_history;
    double rnn_rate = 0;
};

TrainedModels train_models(const SupervisedSlices& slices, const ExperimentSettings& settings);

void save_models(const TrainedModels& models, const std::string& dir);
TrainedModels load_models(const std::string& dir, const ExperimentSettings& settings);

struct ModelRun {
    std::string name;                   // gbt / lstm / gru / mean / median
    std::vector<double> predictions;    // test slice, original price units
    forecast::ForecastMetrics metrics;
    std::size_t checkpoint_iteration = 0;
    double learning_rate = 0;
};

struct ForecastReport {
    std::string target;
    std::vector<Timestamp> test_timestamps;
    std::vector<double> test_truth;
    std::vector<ModelRun> models;
    nlohmann::ordered_json config_snapshot;
};

// Predicts the test slice with every trained model plus both baselines and
// scores everything on the identical rows.
ForecastReport evaluate_models(const SupervisedSlices& slices, const TrainedModels& models,
                               const ExperimentSettings& settings);

// ingest -> split -> standardize -> train -> predict -> metrics, one shot.
ForecastReport run_experiment(const AlignedPanel& panel, const ExperimentSettings& settings);

std::string report_to_json(const ForecastReport& report);
std::string report_to_text(const ForecastReport& report);
void write_report(const ForecastReport& report, const std::string& out_dir);

// CSV `timestamp,truth,<model>...` over the test slice.
void write_predictions_csv(const ForecastReport& report, const std::string& path);

}  // namespace cryptoforecast::experiment
