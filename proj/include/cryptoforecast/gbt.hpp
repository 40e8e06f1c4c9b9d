#pragma once

#include <span>
#include <string>
#include <vector>

#include "cryptoforecast/dataset.hpp"

namespace cryptoforecast::gbt {

struct TreeNode {
    int feature = -1;  // -1 marks a leaf
    double threshold = 0;
    int left = -1;
    int right = -1;
    double value = 0;  // leaf prediction: mean of the targets routed here
};

struct TreeParams {
    int max_depth = 6;
    int min_node_size = 20;
};

// A CART regression tree grown with exact greedy splits: candidates are the
// midpoints between consecutive distinct sorted feature values, a split must
// leave min_node_size samples on each side, and ties break toward the lowest
// feature index then the lowest threshold.
class RegressionTree {
public:
    static RegressionTree fit(const Dataset& data, std::span<const double> targets,
                              const TreeParams& params);

    double predict_row(const Dataset& data, std::size_t row) const;

    const std::vector<TreeNode>& nodes() const { return nodes_; }
    std::vector<TreeNode>& nodes() { return nodes_; }

private:
    std::vector<TreeNode> nodes_;  // index 0 is the root
};

struct GbtModel {
    double base_prediction = 0;  // training-target mean
    double learning_rate = 0.1;
    TreeParams tree_params;
    std::vector<RegressionTree> trees;
};

struct GbtFitOptions {
    double learning_rate = 0.1;
    int max_iterations = 500;
    int patience = 20;
    TreeParams tree_params;
};

struct GbtFitResult {
    GbtModel model;
    TrainHistory history;
};

// Least-squares boosting: each iteration fits a tree to the current
// residuals and adds it scaled by the learning rate. Training stops at
// max_iterations or after `patience` non-improving validation rounds, and
// the returned model is truncated at the minimum-validation-loss iteration.
GbtFitResult fit_gbt(const Dataset& train, const Dataset& validation,
                     const GbtFitOptions& options);

std::vector<double> predict(const GbtModel& model, const Dataset& data);

// Mean validation MSE over contiguous, time-ordered folds; each fold in turn
// is the held-out block. Ties break toward the smaller rate.
double grid_search_lr(const Dataset& data, std::span<const double> candidate_rates, int folds,
                      const GbtFitOptions& base_options);

// The six-point grid used for rate selection.
std::vector<double> default_rate_grid();

// Versioned JSON round-trip.
std::string to_json(const GbtModel& model);
GbtModel model_from_json(const std::string& text);
void save_model(const GbtModel& model, const std::string& path);
GbtModel load_model(const std::string& path);

}  // namespace cryptoforecast::gbt
