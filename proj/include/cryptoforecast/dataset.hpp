#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace cryptoforecast {

// Supervised view of a panel slice: column-major features, one target row
// per feature row.
struct Dataset {
    std::vector<std::vector<double>> feature_columns;  // [feature][row]
    std::vector<double> targets;

    std::size_t rows() const { return targets.size(); }
    std::size_t n_features() const { return feature_columns.size(); }
};

// Per-iteration (or per-epoch) losses under MSE; index 0 is the untrained
// base model, so checkpoint_iteration counts kept boosting trees / epochs.
struct TrainHistory {
    std::vector<double> train_loss;
    std::vector<double> validation_loss;
    std::size_t checkpoint_iteration = 0;
};

// CSV export, header `iteration,train_loss,val_loss`.
void write_history_csv(const TrainHistory& history, const std::string& path);

}  // namespace cryptoforecast
