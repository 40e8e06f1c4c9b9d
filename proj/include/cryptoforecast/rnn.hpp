#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "cryptoforecast/dataset.hpp"

namespace cryptoforecast::rnn {

enum class CellKind { lstm, gru };

std::string to_string(CellKind kind);

struct RnnConfig {
    CellKind cell = CellKind::lstm;
    int depth = 2;        // hidden-layer count
    int width = 32;       // units per layer
    int input_dim = 1;
    int bptt_window = 64; // steps per truncated-backprop segment
    int batch_size = 16;  // parallel sub-sequences per optimizer step
    std::uint64_t seed = 0;
};

// One layer's stacked gate parameters. Gate order along the rows:
// LSTM input|forget|output|candidate, GRU update|reset|candidate.
struct LayerParams {
    Eigen::MatrixXd w_in;   // (gates*width) x input
    Eigen::MatrixXd w_rec;  // (gates*width) x width
    Eigen::VectorXd bias;   // gates*width
};

struct RnnParams {
    std::vector<LayerParams> layers;
    Eigen::RowVectorXd w_out;  // 1 x width
    double b_out = 0;

    std::size_t size() const;
    Eigen::VectorXd to_vector() const;
    void from_vector(const Eigen::VectorXd& flat);
    void set_zero();
};

// Hidden (and, for LSTM, cell) state per layer; each is width x batch.
struct RnnState {
    std::vector<Eigen::MatrixXd> h;
    std::vector<Eigen::MatrixXd> c;
};

// Per-step activations retained for backpropagation through time.
struct StepLayerCache {
    Eigen::MatrixXd x;       // layer input
    Eigen::MatrixXd h_prev;
    Eigen::MatrixXd c_prev;  // LSTM only
    Eigen::MatrixXd gates;   // post-activation, stacked along rows
    Eigen::MatrixXd c;       // LSTM only
    Eigen::MatrixXd tanh_c;  // LSTM only
    Eigen::MatrixXd h;
};

struct ForwardCache {
    std::vector<std::vector<StepLayerCache>> steps;  // [t][layer]
    int batch = 0;
};

struct ForwardResult {
    Eigen::MatrixXd outputs;  // steps x batch
    RnnState final_state;
    std::shared_ptr<ForwardCache> cache;
};

class RnnModel {
public:
    RnnModel() = default;

    // Uniform init in ±1/sqrt(fan_in), reproducible from config.seed.
    static RnnModel init(const RnnConfig& config);

    const RnnConfig& config() const { return config_; }
    RnnParams& params() { return params_; }
    const RnnParams& params() const { return params_; }

    RnnState zero_state(int batch) const;

    // inputs[t] is input_dim x batch. Set want_cache when a backward pass
    // will follow. Throws NumericError naming the step on non-finite values.
    ForwardResult forward(const std::vector<Eigen::MatrixXd>& inputs, const RnnState& initial,
                          bool want_cache = true) const;

    // Exact gradients of whatever loss produced output_gradients (steps x
    // batch) over the cached segment. Truncated at the segment boundary.
    RnnParams backward(const ForwardResult& result,
                       const Eigen::MatrixXd& output_gradients) const;

    // Streaming MSE of next-output predictions over a whole dataset, zero
    // initial state, no cache.
    double evaluate(const Dataset& data) const;

    std::vector<double> predict(const Dataset& data) const;

private:
    RnnConfig config_;
    RnnParams params_;
};

struct AdamState {
    Eigen::VectorXd m;  // first-moment accumulator
    Eigen::VectorXd v;  // second-moment accumulator
    std::int64_t t = 0;
    double learning_rate = 1e-3;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double epsilon = 1e-8;

    static AdamState init(std::size_t n_params, double learning_rate);
};

// One bias-corrected Adam update, in place.
void adam_step(AdamState& state, Eigen::VectorXd& params, const Eigen::VectorXd& grads);

struct RnnFitOptions {
    double learning_rate = 1e-3;
    int max_epochs = 500;
    int patience = 20;
    double clip_norm = 5.0;  // global gradient-norm clip; <= 0 disables
};

struct RnnFitResult {
    RnnModel model;
    TrainHistory history;
};

// Truncated-BPTT training with Adam: the training range is cut into
// batch_size parallel streams, state is carried across segments within an
// epoch, and the checkpoint (minimum validation MSE epoch) is returned.
RnnFitResult fit_rnn(const RnnConfig& config, const Dataset& train, const Dataset& validation,
                     const RnnFitOptions& options);

struct LrRangeResult {
    double suggested = 0;
    std::vector<double> rates;   // per processed batch
    std::vector<double> losses;
    bool degenerate = false;     // too few batches to sweep
};

// Learning-rate sweep: multiply the rate by `growth` after each batch, stop
// once the loss exceeds 4x its running minimum, suggest one decade below the
// minimum-loss rate.
LrRangeResult lr_range_test(const std::function<RnnModel()>& factory, const Dataset& train,
                            double start_rate = 1e-6, double growth = 1.3);

// Versioned JSON tensor dump.
std::string to_json(const RnnModel& model);
RnnModel model_from_json(const std::string& text);
void save_model(const RnnModel& model, const std::string& path);
RnnModel load_model(const std::string& path);

}  // namespace cryptoforecast::rnn
