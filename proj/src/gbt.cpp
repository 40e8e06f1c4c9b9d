#include "cryptoforecast/gbt.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <numeric>

#include "cryptoforecast/error.hpp"
#include "nlohmann/json.hpp"

namespace cryptoforecast {

void write_history_csv(const TrainHistory& history, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw DataError("cannot write " + path);
    out << "iteration,train_loss,val_loss\n";
    for (std::size_t i = 0; i < history.train_loss.size(); ++i)
        out << i << ',' << history.train_loss[i] << ',' << history.validation_loss[i] << '\n';
}

}  // namespace cryptoforecast

namespace cryptoforecast::gbt {

namespace {

struct BestSplit {
    int feature = -1;
    double threshold = 0;
    double gain = 0;
};

double mean_of(std::span<const double> y, const std::vector<int>& rows) {
    double s = 0;
    for (int r : rows) s += y[r];
    return s / static_cast<double>(rows.size());
}

// Exhaustive scan of one node. Targets are centered on the node mean so the
// sums stay small; gain = node SSE - (left SSE + right SSE).
BestSplit find_split(const Dataset& data, std::span<const double> y,
                     const std::vector<int>& rows, double node_mean, int min_node_size) {
    const std::size_t n = rows.size();
    BestSplit best;
    if (n < 2 * static_cast<std::size_t>(min_node_size)) return best;

    double node_sse = 0;
    for (int r : rows) {
        double w = y[r] - node_mean;
        node_sse += w * w;
    }
    if (node_sse <= 0) return best;
    const double min_gain = node_sse * 1e-12;

    std::vector<int> order(rows);
    for (std::size_t f = 0; f < data.n_features(); ++f) {
        const std::vector<double>& col = data.feature_columns[f];
        std::sort(order.begin(), order.end(),
                  [&](int a, int b) { return col[a] < col[b]; });

        double left_sum = 0, left_sq = 0;
        double total_sum = 0, total_sq = 0;
        for (int r : order) {
            double w = y[r] - node_mean;
            total_sum += w;
            total_sq += w * w;
        }
        for (std::size_t i = 0; i + 1 < n; ++i) {
            double w = y[order[i]] - node_mean;
            left_sum += w;
            left_sq += w * w;
            if (col[order[i]] == col[order[i + 1]]) continue;  // not a distinct-value boundary
            const std::size_t n_left = i + 1, n_right = n - n_left;
            if (n_left < static_cast<std::size_t>(min_node_size) ||
                n_right < static_cast<std::size_t>(min_node_size))
                continue;
            double right_sum = total_sum - left_sum;
            double right_sq = total_sq - left_sq;
            double sse = (left_sq - left_sum * left_sum / n_left) +
                         (right_sq - right_sum * right_sum / n_right);
            double gain = node_sse - sse;
            if (gain > best.gain && gain > min_gain) {
                best.feature = static_cast<int>(f);
                best.threshold = 0.5 * (col[order[i]] + col[order[i + 1]]);
                best.gain = gain;
            }
        }
    }
    return best;
}

int build(std::vector<TreeNode>& nodes, const Dataset& data, std::span<const double> y,
          std::vector<int>& rows, int depth, const TreeParams& params) {
    const int index = static_cast<int>(nodes.size());
    nodes.emplace_back();
    const double node_mean = mean_of(y, rows);

    BestSplit split;
    if (depth < params.max_depth)
        split = find_split(data, y, rows, node_mean, params.min_node_size);
    if (split.feature < 0) {
        nodes[index].value = node_mean;
        return index;
    }

    const std::vector<double>& col = data.feature_columns[split.feature];
    std::vector<int> left_rows, right_rows;
    left_rows.reserve(rows.size());
    right_rows.reserve(rows.size());
    for (int r : rows)
        (col[r] <= split.threshold ? left_rows : right_rows).push_back(r);
    rows.clear();
    rows.shrink_to_fit();

    nodes[index].feature = split.feature;
    nodes[index].threshold = split.threshold;
    int left = build(nodes, data, y, left_rows, depth + 1, params);
    nodes[index].left = left;
    int right = build(nodes, data, y, right_rows, depth + 1, params);
    nodes[index].right = right;
    return index;
}

}  // namespace

RegressionTree RegressionTree::fit(const Dataset& data, std::span<const double> targets,
                                   const TreeParams& params) {
    if (data.rows() == 0 || data.n_features() == 0) throw DataError("fit_tree: empty data");
    if (targets.size() != data.rows()) throw DataError("fit_tree: target length mismatch");
    if (params.min_node_size < 1) throw DataError("fit_tree: min_node_size must be >= 1");
    for (const auto& col : data.feature_columns)
        if (col.size() != data.rows()) throw DataError("fit_tree: ragged feature columns");

    RegressionTree tree;
    std::vector<int> rows(data.rows());
    std::iota(rows.begin(), rows.end(), 0);
    build(tree.nodes_, data, targets, rows, 0, params);
    return tree;
}

double RegressionTree::predict_row(const Dataset& data, std::size_t row) const {
    int i = 0;
    while (nodes_[i].feature >= 0) {
        const double v = data.feature_columns[nodes_[i].feature][row];
        i = v <= nodes_[i].threshold ? nodes_[i].left : nodes_[i].right;
    }
    return nodes_[i].value;
}

std::vector<double> predict(const GbtModel& model, const Dataset& data) {
    for (const auto& tree : model.trees)
        for (const auto& node : tree.nodes())
            if (node.feature >= static_cast<int>(data.n_features()))
                throw DataError("gbt predict: model expects more features than provided");
    std::vector<double> out(data.rows(), model.base_prediction);
    for (const auto& tree : model.trees)
        for (std::size_t r = 0; r < data.rows(); ++r)
            out[r] += model.learning_rate * tree.predict_row(data, r);
    return out;
}

namespace {

double mse(std::span<const double> a, std::span<const double> b) {
    double s = 0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        double d = a[i] - b[i];
        s += d * d;
    }
    return s / static_cast<double>(a.size());
}

}  // namespace

GbtFitResult fit_gbt(const Dataset& train, const Dataset& validation,
                     const GbtFitOptions& options) {
    if (train.rows() == 0) throw DataError("fit_gbt: empty training set");
    if (validation.rows() == 0) throw DataError("fit_gbt: empty validation set");
    if (options.learning_rate <= 0) throw DataError("fit_gbt: learning_rate must be positive");
    if (options.max_iterations < 1) throw DataError("fit_gbt: max_iterations must be >= 1");
    if (options.patience < 0) throw DataError("fit_gbt: negative patience");

    GbtModel model;
    model.learning_rate = options.learning_rate;
    model.tree_params = options.tree_params;
    model.base_prediction =
        std::accumulate(train.targets.begin(), train.targets.end(), 0.0) /
        static_cast<double>(train.rows());

    std::vector<double> train_pred(train.rows(), model.base_prediction);
    std::vector<double> val_pred(validation.rows(), model.base_prediction);

    TrainHistory history;
    history.train_loss.push_back(mse(train_pred, train.targets));
    history.validation_loss.push_back(mse(val_pred, validation.targets));
    double best_val = history.validation_loss[0];
    std::size_t best_iter = 0;
    int bad_rounds = 0;

    std::vector<double> residuals(train.rows());
    for (int m = 1; m <= options.max_iterations; ++m) {
        for (std::size_t i = 0; i < train.rows(); ++i)
            residuals[i] = train.targets[i] - train_pred[i];
        RegressionTree tree = RegressionTree::fit(train, residuals, options.tree_params);
        for (std::size_t i = 0; i < train.rows(); ++i)
            train_pred[i] += options.learning_rate * tree.predict_row(train, i);
        for (std::size_t i = 0; i < validation.rows(); ++i)
            val_pred[i] += options.learning_rate * tree.predict_row(validation, i);
        model.trees.push_back(std::move(tree));

        history.train_loss.push_back(mse(train_pred, train.targets));
        history.validation_loss.push_back(mse(val_pred, validation.targets));

        if (history.validation_loss.back() < best_val) {
            best_val = history.validation_loss.back();
            best_iter = static_cast<std::size_t>(m);
            bad_rounds = 0;
        } else {
            ++bad_rounds;
        }
        if (bad_rounds >= options.patience) break;
    }

    history.checkpoint_iteration = best_iter;
    model.trees.resize(best_iter);  // keep the prefix with the lowest validation loss
    return GbtFitResult{std::move(model), std::move(history)};
}

double grid_search_lr(const Dataset& data, std::span<const double> candidate_rates, int folds,
                      const GbtFitOptions& base_options) {
    if (candidate_rates.empty()) throw DataError("grid_search_lr: no candidate rates");
    if (folds < 2) throw DataError("grid_search_lr: need at least 2 folds");
    if (data.rows() < static_cast<std::size_t>(folds))
        throw DataError("grid_search_lr: dataset smaller than fold count");

    const std::size_t n = data.rows();
    auto fold_bounds = [&](int fold) {
        std::size_t begin = n * fold / folds;
        std::size_t end = n * (fold + 1) / folds;
        return std::pair{begin, end};
    };
    auto take_rows = [&](std::size_t begin, std::size_t end, bool invert) {
        Dataset out;
        out.feature_columns.resize(data.n_features());
        for (std::size_t r = 0; r < n; ++r) {
            bool inside = r >= begin && r < end;
            if (inside == invert) continue;
            for (std::size_t f = 0; f < data.n_features(); ++f)
                out.feature_columns[f].push_back(data.feature_columns[f][r]);
            out.targets.push_back(data.targets[r]);
        }
        return out;
    };

    double best_rate = candidate_rates[0];
    double best_score = std::numeric_limits<double>::infinity();
    for (double rate : candidate_rates) {
        GbtFitOptions options = base_options;
        options.learning_rate = rate;
        double total = 0;
        for (int fold = 0; fold < folds; ++fold) {
            auto [begin, end] = fold_bounds(fold);
            Dataset fit_part = take_rows(begin, end, true);
            Dataset held_out = take_rows(begin, end, false);
            GbtFitResult res = fit_gbt(fit_part, held_out, options);
            std::vector<double> pred = predict(res.model, held_out);
            total += mse(pred, held_out.targets);
        }
        double score = total / folds;
        if (score < best_score || (score == best_score && rate < best_rate)) {
            best_score = score;
            best_rate = rate;
        }
    }
    return best_rate;
}

std::vector<double> default_rate_grid() {
    return {1e-6, 1e-5, 1e-4, 1e-3, 1e-2, 1e-1};
}

std::string to_json(const GbtModel& model) {
    nlohmann::ordered_json j;
    j["format"] = "gbt-model";
    j["version"] = 1;
    j["base_prediction"] = model.base_prediction;
    j["learning_rate"] = model.learning_rate;
    j["max_depth"] = model.tree_params.max_depth;
    j["min_node_size"] = model.tree_params.min_node_size;
    nlohmann::ordered_json trees = nlohmann::ordered_json::array();
    for (const auto& tree : model.trees) {
        nlohmann::ordered_json feature = nlohmann::ordered_json::array();
        nlohmann::ordered_json threshold = nlohmann::ordered_json::array();
        nlohmann::ordered_json left = nlohmann::ordered_json::array();
        nlohmann::ordered_json right = nlohmann::ordered_json::array();
        nlohmann::ordered_json value = nlohmann::ordered_json::array();
        for (const auto& node : tree.nodes()) {
            feature.push_back(node.feature);
            threshold.push_back(node.threshold);
            left.push_back(node.left);
            right.push_back(node.right);
            value.push_back(node.value);
        }
        nlohmann::ordered_json t;
        t["feature"] = std::move(feature);
        t["threshold"] = std::move(threshold);
        t["left"] = std::move(left);
        t["right"] = std::move(right);
        t["value"] = std::move(value);
        trees.push_back(std::move(t));
    }
    j["trees"] = std::move(trees);
    return j.dump(2);
}

GbtModel model_from_json(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw ModelFileError(std::string("gbt model: bad JSON: ") + e.what());
    }
    if (j.value("format", "") != "gbt-model" || j.value("version", 0) != 1)
        throw ModelFileError("gbt model: unknown format/version");
    GbtModel model;
    model.base_prediction = j.at("base_prediction").get<double>();
    model.learning_rate = j.at("learning_rate").get<double>();
    model.tree_params.max_depth = j.at("max_depth").get<int>();
    model.tree_params.min_node_size = j.at("min_node_size").get<int>();
    for (const auto& t : j.at("trees")) {
        RegressionTree tree;
        const auto& feature = t.at("feature");
        const std::size_t n = feature.size();
        for (std::size_t i = 0; i < n; ++i) {
            TreeNode node;
            node.feature = t.at("feature")[i].get<int>();
            node.threshold = t.at("threshold")[i].get<double>();
            node.left = t.at("left")[i].get<int>();
            node.right = t.at("right")[i].get<int>();
            node.value = t.at("value")[i].get<double>();
            tree.nodes().push_back(node);
        }
        model.trees.push_back(std::move(tree));
    }
    return model;
}

void save_model(const GbtModel& model, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw DataError("cannot write " + path);
    out << to_json(model) << '\n';
}

GbtModel load_model(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ModelFileError("model file not found: " + path);
    std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return model_from_json(text);
}

}  // namespace cryptoforecast::gbt
