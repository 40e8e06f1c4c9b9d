#include "cryptoforecast/rnn.hpp"

#include <cmath>
#include <fstream>
#include <limits>

#include "cryptoforecast/error.hpp"
#include "cryptoforecast/rng.hpp"
#include "nlohmann/json.hpp"

namespace cryptoforecast::rnn {

namespace {

int gate_count(CellKind cell) { return cell == CellKind::lstm ? 4 : 3; }

Eigen::MatrixXd sigmoid(const Eigen::MatrixXd& x) {
    return ((-x.array()).exp() + 1.0).inverse().matrix();
}

}  // namespace

std::string to_string(CellKind kind) { return kind == CellKind::lstm ? "lstm" : "gru"; }

std::size_t RnnParams::size() const {
    std::size_t n = 0;
    for (const auto& layer : layers)
        n += layer.w_in.size() + layer.w_rec.size() + layer.bias.size();
    return n + w_out.size() + 1;
}

Eigen::VectorXd RnnParams::to_vector() const {
    Eigen::VectorXd flat(size());
    std::size_t at = 0;
    auto put = [&](const double* data, std::size_t n) {
        std::copy(data, data + n, flat.data() + at);
        at += n;
    };
    for (const auto& layer : layers) {
        put(layer.w_in.data(), layer.w_in.size());
        put(layer.w_rec.data(), layer.w_rec.size());
        put(layer.bias.data(), layer.bias.size());
    }
    put(w_out.data(), w_out.size());
    flat(at++) = b_out;
    return flat;
}

void RnnParams::from_vector(const Eigen::VectorXd& flat) {
    if (static_cast<std::size_t>(flat.size()) != size())
        throw DataError("rnn params: flat vector size mismatch");
    std::size_t at = 0;
    auto take = [&](double* data, std::size_t n) {
        std::copy(flat.data() + at, flat.data() + at + n, data);
        at += n;
    };
    for (auto& layer : layers) {
        take(layer.w_in.data(), layer.w_in.size());
        take(layer.w_rec.data(), layer.w_rec.size());
        take(layer.bias.data(), layer.bias.size());
    }
    take(w_out.data(), w_out.size());
    b_out = flat(at++);
}

void RnnParams::set_zero() {
    for (auto& layer : layers) {
        layer.w_in.setZero();
        layer.w_rec.setZero();
        layer.bias.setZero();
    }
    w_out.setZero();
    b_out = 0;
}

RnnModel RnnModel::init(const RnnConfig& config) {
    if (config.depth < 1 || config.width < 1 || config.input_dim < 1)
        throw DataError("rnn: depth, width and input_dim must all be >= 1");
    if (config.bptt_window < 2) throw DataError("rnn: bptt_window must be >= 2");
    if (config.batch_size < 1) throw DataError("rnn: batch_size must be >= 1");

    RnnModel model;
    model.config_ = config;
    const int g = gate_count(config.cell);
    const int m = config.width;
    Rng rng(config.seed);

    auto fill = [&](Eigen::MatrixXd& mat, int fan_in) {
        const double bound = 1.0 / std::sqrt(static_cast<double>(fan_in));
        for (Eigen::Index i = 0; i < mat.size(); ++i)
            mat.data()[i] = rng.uniform(-bound, bound);
    };

    for (int layer = 0; layer < config.depth; ++layer) {
        const int d_in = layer == 0 ? config.input_dim : m;
        LayerParams p;
        p.w_in.resize(g * m, d_in);
        p.w_rec.resize(g * m, m);
        p.bias = Eigen::VectorXd::Zero(g * m);
        fill(p.w_in, d_in);
        fill(p.w_rec, m);
        model.params_.layers.push_back(std::move(p));
    }
    model.params_.w_out.resize(m);
    {
        const double bound = 1.0 / std::sqrt(static_cast<double>(m));
        for (int i = 0; i < m; ++i) model.params_.w_out(i) = rng.uniform(-bound, bound);
    }
    model.params_.b_out = 0;
    return model;
}

RnnState RnnModel::zero_state(int batch) const {
    RnnState state;
    for (int layer = 0; layer < config_.depth; ++layer) {
        state.h.push_back(Eigen::MatrixXd::Zero(config_.width, batch));
        if (config_.cell == CellKind::lstm)
            state.c.push_back(Eigen::MatrixXd::Zero(config_.width, batch));
    }
    return state;
}

ForwardResult RnnModel::forward(const std::vector<Eigen::MatrixXd>& inputs,
                                const RnnState& initial, bool want_cache) const {
    if (inputs.empty()) throw DataError("rnn forward: empty sequence");
    const int batch = static_cast<int>(inputs[0].cols());
    const int m = config_.width;
    const bool lstm = config_.cell == CellKind::lstm;
    if (static_cast<int>(initial.h.size()) != config_.depth ||
        (lstm && static_cast<int>(initial.c.size()) != config_.depth))
        throw DataError("rnn forward: state layer count mismatch");
    for (const auto& h : initial.h)
        if (h.rows() != m || h.cols() != batch)
            throw DataError("rnn forward: state shape mismatch");

    ForwardResult result;
    result.outputs.resize(inputs.size(), batch);
    result.final_state = initial;
    if (want_cache) {
        result.cache = std::make_shared<ForwardCache>();
        result.cache->batch = batch;
        result.cache->steps.resize(inputs.size());
    }

    RnnState& state = result.final_state;
    for (std::size_t t = 0; t < inputs.size(); ++t) {
        if (inputs[t].rows() != config_.input_dim || inputs[t].cols() != batch)
            throw DataError("rnn forward: input shape mismatch at step " + std::to_string(t));
        Eigen::MatrixXd x = inputs[t];
        if (want_cache) result.cache->steps[t].resize(config_.depth);

        for (int layer = 0; layer < config_.depth; ++layer) {
            const LayerParams& p = params_.layers[layer];
            const Eigen::MatrixXd h_prev = state.h[layer];
            Eigen::MatrixXd h_new;
            StepLayerCache cache;

            if (lstm) {
                const Eigen::MatrixXd c_prev = state.c[layer];
                Eigen::MatrixXd pre = p.w_in * x + p.w_rec * h_prev;
                pre.colwise() += p.bias;
                Eigen::MatrixXd gates(4 * m, batch);
                gates.topRows(3 * m) = sigmoid(pre.topRows(3 * m));
                gates.bottomRows(m) = pre.bottomRows(m).array().tanh();
                const auto i_g = gates.middleRows(0, m);
                const auto f_g = gates.middleRows(m, m);
                const auto o_g = gates.middleRows(2 * m, m);
                const auto g_g = gates.middleRows(3 * m, m);
                Eigen::MatrixXd c = f_g.cwiseProduct(c_prev) + i_g.cwiseProduct(g_g);
                Eigen::MatrixXd tanh_c = c.array().tanh();
                h_new = o_g.cwiseProduct(tanh_c);
                if (want_cache) {
                    cache.c_prev = c_prev;
                    cache.gates = std::move(gates);
                    cache.c = c;
                    cache.tanh_c = std::move(tanh_c);
                }
                state.c[layer] = std::move(c);
            } else {
                Eigen::MatrixXd pre_zr = p.w_in.topRows(2 * m) * x +
                                         p.w_rec.topRows(2 * m) * h_prev;
                pre_zr.colwise() += p.bias.head(2 * m);
                Eigen::MatrixXd zr = sigmoid(pre_zr);
                const auto z_g = zr.topRows(m);
                const auto r_g = zr.bottomRows(m);
                Eigen::MatrixXd rh = r_g.cwiseProduct(h_prev);
                Eigen::MatrixXd pre_h = p.w_in.bottomRows(m) * x + p.w_rec.bottomRows(m) * rh;
                pre_h.colwise() += p.bias.tail(m);
                Eigen::MatrixXd cand = pre_h.array().tanh();
                h_new = h_prev + z_g.cwiseProduct(cand - h_prev);
                if (want_cache) {
                    Eigen::MatrixXd gates(3 * m, batch);
                    gates.topRows(2 * m) = std::move(zr);
                    gates.bottomRows(m) = std::move(cand);
                    cache.gates = std::move(gates);
                }
            }

            if (!h_new.allFinite())
                throw NumericError("rnn forward: non-finite activation at step " +
                                   std::to_string(t) + ", layer " + std::to_string(layer));
            if (want_cache) {
                cache.x = std::move(x);
                cache.h_prev = h_prev;
                cache.h = h_new;
                result.cache->steps[t][layer] = std::move(cache);
            }
            x = h_new;
            state.h[layer] = std::move(h_new);
        }
        result.outputs.row(t) =
            (params_.w_out * state.h[config_.depth - 1]).array() + params_.b_out;
    }
    return result;
}

RnnParams RnnModel::backward(const ForwardResult& result,
                             const Eigen::MatrixXd& output_gradients) const {
    if (!result.cache) throw DataError("rnn backward: forward pass was run without cache");
    const ForwardCache& cache = *result.cache;
    const int steps = static_cast<int>(cache.steps.size());
    const int batch = cache.batch;
    const int m = config_.width;
    const bool lstm = config_.cell == CellKind::lstm;
    if (output_gradients.rows() != steps || output_gradients.cols() != batch)
        throw DataError("rnn backward: output gradient shape mismatch");

    RnnParams grads;
    for (const auto& layer : params_.layers) {
        LayerParams g;
        g.w_in = Eigen::MatrixXd::Zero(layer.w_in.rows(), layer.w_in.cols());
        g.w_rec = Eigen::MatrixXd::Zero(layer.w_rec.rows(), layer.w_rec.cols());
        g.bias = Eigen::VectorXd::Zero(layer.bias.size());
        grads.layers.push_back(std::move(g));
    }
    grads.w_out = Eigen::RowVectorXd::Zero(m);
    grads.b_out = 0;

    // recurrent gradients flowing in from step t+1
    std::vector<Eigen::MatrixXd> dh_next(config_.depth, Eigen::MatrixXd::Zero(m, batch));
    std::vector<Eigen::MatrixXd> dc_next;
    if (lstm) dc_next.assign(config_.depth, Eigen::MatrixXd::Zero(m, batch));

    for (int t = steps - 1; t >= 0; --t) {
        const Eigen::RowVectorXd dout = output_gradients.row(t);
        const StepLayerCache& top = cache.steps[t][config_.depth - 1];
        grads.w_out += dout * top.h.transpose();
        grads.b_out += dout.sum();

        Eigen::MatrixXd dh_above = params_.w_out.transpose() * dout;  // m x batch
        for (int layer = config_.depth - 1; layer >= 0; --layer) {
            const StepLayerCache& sc = cache.steps[t][layer];
            const LayerParams& p = params_.layers[layer];
            LayerParams& pg = grads.layers[layer];
            Eigen::MatrixXd dh = dh_above + dh_next[layer];

            Eigen::MatrixXd dx;
            if (lstm) {
                const auto i_g = sc.gates.middleRows(0, m);
                const auto f_g = sc.gates.middleRows(m, m);
                const auto o_g = sc.gates.middleRows(2 * m, m);
                const auto g_g = sc.gates.middleRows(3 * m, m);

                Eigen::MatrixXd dc =
                    dh.cwiseProduct(o_g).cwiseProduct(
                        (1.0 - sc.tanh_c.array().square()).matrix()) +
                    dc_next[layer];
                Eigen::MatrixXd da(4 * m, batch);
                da.middleRows(0, m) =
                    dc.cwiseProduct(g_g).cwiseProduct(
                        i_g.cwiseProduct((1.0 - i_g.array()).matrix()));
                da.middleRows(m, m) =
                    dc.cwiseProduct(sc.c_prev).cwiseProduct(
                        f_g.cwiseProduct((1.0 - f_g.array()).matrix()));
                da.middleRows(2 * m, m) =
                    dh.cwiseProduct(sc.tanh_c).cwiseProduct(
                        o_g.cwiseProduct((1.0 - o_g.array()).matrix()));
                da.middleRows(3 * m, m) =
                    dc.cwiseProduct(i_g).cwiseProduct((1.0 - g_g.array().square()).matrix());

                pg.w_in += da * sc.x.transpose();
                pg.w_rec += da * sc.h_prev.transpose();
                pg.bias += da.rowwise().sum();
                dx = p.w_in.transpose() * da;
                dh_next[layer] = p.w_rec.transpose() * da;
                dc_next[layer] = dc.cwiseProduct(f_g);
            } else {
                const auto z_g = sc.gates.middleRows(0, m);
                const auto r_g = sc.gates.middleRows(m, m);
                const auto cand = sc.gates.middleRows(2 * m, m);

                Eigen::MatrixXd da_h =
                    dh.cwiseProduct(z_g).cwiseProduct((1.0 - cand.array().square()).matrix());
                Eigen::MatrixXd drh = p.w_rec.bottomRows(m).transpose() * da_h;
                Eigen::MatrixXd da_z =
                    dh.cwiseProduct(cand - sc.h_prev)
                        .cwiseProduct(z_g.cwiseProduct((1.0 - z_g.array()).matrix()));
                Eigen::MatrixXd da_r =
                    drh.cwiseProduct(sc.h_prev)
                        .cwiseProduct(r_g.cwiseProduct((1.0 - r_g.array()).matrix()));

                pg.w_in.topRows(m) += da_z * sc.x.transpose();
                pg.w_in.middleRows(m, m) += da_r * sc.x.transpose();
                pg.w_in.bottomRows(m) += da_h * sc.x.transpose();
                pg.w_rec.topRows(m) += da_z * sc.h_prev.transpose();
                pg.w_rec.middleRows(m, m) += da_r * sc.h_prev.transpose();
                pg.w_rec.bottomRows(m) += da_h * r_g.cwiseProduct(sc.h_prev).transpose();
                pg.bias.head(m) += da_z.rowwise().sum();
                pg.bias.segment(m, m) += da_r.rowwise().sum();
                pg.bias.tail(m) += da_h.rowwise().sum();

                dx = p.w_in.topRows(m).transpose() * da_z +
                     p.w_in.middleRows(m, m).transpose() * da_r +
                     p.w_in.bottomRows(m).transpose() * da_h;
                dh_next[layer] = dh.cwiseProduct((1.0 - z_g.array()).matrix()) +
                                 drh.cwiseProduct(r_g) +
                                 p.w_rec.topRows(m).transpose() * da_z +
                                 p.w_rec.middleRows(m, m).transpose() * da_r;
            }
            dh_above = std::move(dx);  // feeds the layer below as its output gradient
        }
    }
    return grads;
}

double RnnModel::evaluate(const Dataset& data) const {
    std::vector<double> out = predict(data);
    double s = 0;
    for (std::size_t i = 0; i < out.size(); ++i) {
        double d = out[i] - data.targets[i];
        s += d * d;
    }
    return s / static_cast<double>(out.size());
}

std::vector<double> RnnModel::predict(const Dataset& data) const {
    if (data.rows() == 0) throw DataError("rnn predict: empty dataset");
    if (static_cast<int>(data.n_features()) != config_.input_dim)
        throw DataError("rnn predict: feature count mismatch");
    RnnState state = zero_state(1);
    std::vector<double> out(data.rows());
    std::vector<Eigen::MatrixXd> step(1, Eigen::MatrixXd(config_.input_dim, 1));
    for (std::size_t r = 0; r < data.rows(); ++r) {
        for (std::size_t f = 0; f < data.n_features(); ++f)
            step[0](static_cast<Eigen::Index>(f), 0) = data.feature_columns[f][r];
        ForwardResult fr = forward(step, state, /*want_cache=*/false);
        out[r] = fr.outputs(0, 0);
        state = std::move(fr.final_state);
    }
    return out;
}

AdamState AdamState::init(std::size_t n_params, double learning_rate) {
    AdamState s;
    s.m = Eigen::VectorXd::Zero(n_params);
    s.v = Eigen::VectorXd::Zero(n_params);
    s.learning_rate = learning_rate;
    return s;
}

void adam_step(AdamState& state, Eigen::VectorXd& params, const Eigen::VectorXd& grads) {
    if (params.size() != state.m.size() || grads.size() != state.m.size())
        throw DataError("adam_step: shape mismatch");
    ++state.t;
    state.m = state.beta1 * state.m + (1.0 - state.beta1) * grads;
    state.v = state.beta2 * state.v + (1.0 - state.beta2) * grads.cwiseProduct(grads);
    const double mc = 1.0 - std::pow(state.beta1, static_cast<double>(state.t));
    const double vc = 1.0 - std::pow(state.beta2, static_cast<double>(state.t));
    params -= state.learning_rate *
              ((state.m / mc).array() / ((state.v / vc).array().sqrt() + state.epsilon)).matrix();
}

namespace {

struct StreamLayout {
    int batch = 1;
    int length = 0;  // rows per stream
};

StreamLayout plan_streams(std::size_t rows, const RnnConfig& config) {
    StreamLayout layout;
    layout.batch = std::max(1, std::min<int>(config.batch_size,
                                             static_cast<int>(rows) / config.bptt_window));
    layout.length = static_cast<int>(rows) / layout.batch;
    if (layout.length < 2) {
        layout.batch = 1;
        layout.length = static_cast<int>(rows);
    }
    return layout;
}

Eigen::MatrixXd segment_inputs(const Dataset& data, const StreamLayout& layout, int seg_start,
                               int t) {
    Eigen::MatrixXd x(data.n_features(), layout.batch);
    for (int b = 0; b < layout.batch; ++b) {
        const std::size_t row = static_cast<std::size_t>(b) * layout.length + seg_start + t;
        for (std::size_t f = 0; f < data.n_features(); ++f)
            x(static_cast<Eigen::Index>(f), b) = data.feature_columns[f][row];
    }
    return x;
}

double clip_gradients(Eigen::VectorXd& flat, double clip_norm) {
    if (clip_norm <= 0) return 1.0;
    const double norm = flat.norm();
    if (norm > clip_norm) {
        flat *= clip_norm / norm;
        return clip_norm / norm;
    }
    return 1.0;
}

}  // namespace

RnnFitResult fit_rnn(const RnnConfig& config, const Dataset& train, const Dataset& validation,
                     const RnnFitOptions& options) {
    if (train.rows() < 2) throw DataError("fit_rnn: training set too small");
    if (validation.rows() == 0) throw DataError("fit_rnn: empty validation set");
    if (static_cast<int>(train.n_features()) != config.input_dim)
        throw DataError("fit_rnn: input_dim " + std::to_string(config.input_dim) +
                        " does not match feature count " + std::to_string(train.n_features()));
    if (options.learning_rate <= 0) throw DataError("fit_rnn: learning_rate must be positive");
    if (options.patience < 0) throw DataError("fit_rnn: negative patience");

    RnnModel model = RnnModel::init(config);
    const StreamLayout layout = plan_streams(train.rows(), config);

    Eigen::VectorXd flat = model.params().to_vector();
    AdamState adam = AdamState::init(flat.size(), options.learning_rate);

    TrainHistory history;
    history.train_loss.push_back(model.evaluate(train));
    history.validation_loss.push_back(model.evaluate(validation));
    double best_val = history.validation_loss[0];
    RnnParams best_params = model.params();
    std::size_t best_epoch = 0;
    int bad_rounds = 0;

    for (int epoch = 1; epoch <= options.max_epochs; ++epoch) {
        RnnState state = model.zero_state(layout.batch);
        double sq_sum = 0;
        std::size_t count = 0;

        for (int seg = 0; seg < layout.length; seg += config.bptt_window) {
            const int S = std::min(config.bptt_window, layout.length - seg);
            std::vector<Eigen::MatrixXd> inputs(S);
            Eigen::MatrixXd targets(S, layout.batch);
            for (int t = 0; t < S; ++t) {
                inputs[t] = segment_inputs(train, layout, seg, t);
                for (int b = 0; b < layout.batch; ++b)
                    targets(t, b) =
                        train.targets[static_cast<std::size_t>(b) * layout.length + seg + t];
            }

            ForwardResult fr = model.forward(inputs, state, /*want_cache=*/true);
            Eigen::MatrixXd diff = fr.outputs - targets;
            if (!diff.allFinite())
                throw NumericError("fit_rnn: diverged at epoch " + std::to_string(epoch) +
                                   ", segment " + std::to_string(seg / config.bptt_window));
            sq_sum += diff.squaredNorm();
            count += static_cast<std::size_t>(S) * layout.batch;

            const double scale = 2.0 / (static_cast<double>(S) * layout.batch);
            RnnParams grads = model.backward(fr, scale * diff);
            Eigen::VectorXd flat_grads = grads.to_vector();
            clip_gradients(flat_grads, options.clip_norm);
            adam_step(adam, flat, flat_grads);
            model.params().from_vector(flat);
            state = std::move(fr.final_state);
        }

        history.train_loss.push_back(sq_sum / static_cast<double>(count));
        history.validation_loss.push_back(model.evaluate(validation));

        if (history.validation_loss.back() < best_val) {
            best_val = history.validation_loss.back();
            best_params = model.params();
            best_epoch = static_cast<std::size_t>(epoch);
            bad_rounds = 0;
        } else {
            ++bad_rounds;
        }
        if (bad_rounds >= options.patience) break;
    }

    history.checkpoint_iteration = best_epoch;
    model.params() = std::move(best_params);
    return RnnFitResult{std::move(model), std::move(history)};
}

LrRangeResult lr_range_test(const std::function<RnnModel()>& factory, const Dataset& train,
                            double start_rate, double growth) {
    if (start_rate <= 0) throw DataError("lr_range_test: start_rate must be positive");
    if (growth <= 1.0) throw DataError("lr_range_test: growth must exceed 1");

    RnnModel model = factory();
    const RnnConfig& config = model.config();
    if (static_cast<int>(train.n_features()) != config.input_dim)
        throw DataError("lr_range_test: feature count mismatch");
    const StreamLayout layout = plan_streams(train.rows(), config);
    const int n_batches = (layout.length + config.bptt_window - 1) / config.bptt_window;

    LrRangeResult result;
    if (n_batches <= 1) {
        result.suggested = start_rate;
        result.degenerate = true;
        return result;
    }

    Eigen::VectorXd flat = model.params().to_vector();
    AdamState adam = AdamState::init(flat.size(), start_rate);
    RnnState state = model.zero_state(layout.batch);

    double rate = start_rate;
    double min_loss = std::numeric_limits<double>::infinity();
    double rate_at_min = start_rate;

    for (int seg = 0; seg < layout.length; seg += config.bptt_window) {
        const int S = std::min(config.bptt_window, layout.length - seg);
        std::vector<Eigen::MatrixXd> inputs(S);
        Eigen::MatrixXd targets(S, layout.batch);
        for (int t = 0; t < S; ++t) {
            inputs[t] = segment_inputs(train, layout, seg, t);
            for (int b = 0; b < layout.batch; ++b)
                targets(t, b) =
                    train.targets[static_cast<std::size_t>(b) * layout.length + seg + t];
        }

        ForwardResult fr = model.forward(inputs, state, /*want_cache=*/true);
        Eigen::MatrixXd diff = fr.outputs - targets;
        const double loss = diff.squaredNorm() / (static_cast<double>(S) * layout.batch);
        if (!std::isfinite(loss)) {
            if (result.losses.empty())
                throw NumericError("lr_range_test: diverged on the first batch; "
                                   "try a smaller start_rate");
            break;
        }
        result.rates.push_back(rate);
        result.losses.push_back(loss);
        if (loss < min_loss) {
            min_loss = loss;
            rate_at_min = rate;
        }
        if (loss > 4.0 * min_loss) break;

        const double scale = 2.0 / (static_cast<double>(S) * layout.batch);
        RnnParams grads = model.backward(fr, scale * diff);
        Eigen::VectorXd flat_grads = grads.to_vector();
        clip_gradients(flat_grads, 5.0);
        adam.learning_rate = rate;
        adam_step(adam, flat, flat_grads);
        model.params().from_vector(flat);
        state = std::move(fr.final_state);
        rate *= growth;
    }

    result.suggested = rate_at_min / 10.0;
    return result;
}

namespace {

nlohmann::ordered_json matrix_to_json(const Eigen::MatrixXd& m) {
    nlohmann::ordered_json rows = nlohmann::ordered_json::array();
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
        nlohmann::ordered_json row = nlohmann::ordered_json::array();
        for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
        rows.push_back(std::move(row));
    }
    return rows;
}

Eigen::MatrixXd matrix_from_json(const nlohmann::json& j) {
    const Eigen::Index rows = static_cast<Eigen::Index>(j.size());
    const Eigen::Index cols = rows ? static_cast<Eigen::Index>(j[0].size()) : 0;
    Eigen::MatrixXd m(rows, cols);
    for (Eigen::Index r = 0; r < rows; ++r)
        for (Eigen::Index c = 0; c < cols; ++c) m(r, c) = j[r][c].get<double>();
    return m;
}

}  // namespace

std::string to_json(const RnnModel& model) {
    const RnnConfig& config = model.config();
    nlohmann::ordered_json j;
    j["format"] = "rnn-model";
    j["version"] = 1;
    j["cell"] = to_string(config.cell);
    j["depth"] = config.depth;
    j["width"] = config.width;
    j["input_dim"] = config.input_dim;
    j["bptt_window"] = config.bptt_window;
    j["batch_size"] = config.batch_size;
    j["seed"] = config.seed;
    nlohmann::ordered_json layers = nlohmann::ordered_json::array();
    for (const auto& layer : model.params().layers) {
        nlohmann::ordered_json lj;
        lj["w_in"] = matrix_to_json(layer.w_in);
        lj["w_rec"] = matrix_to_json(layer.w_rec);
        nlohmann::ordered_json bias = nlohmann::ordered_json::array();
        for (Eigen::Index i = 0; i < layer.bias.size(); ++i) bias.push_back(layer.bias(i));
        lj["bias"] = std::move(bias);
        layers.push_back(std::move(lj));
    }
    j["layers"] = std::move(layers);
    nlohmann::ordered_json w_out = nlohmann::ordered_json::array();
    for (Eigen::Index i = 0; i < model.params().w_out.size(); ++i)
        w_out.push_back(model.params().w_out(i));
    j["w_out"] = std::move(w_out);
    j["b_out"] = model.params().b_out;
    return j.dump(2);
}

RnnModel model_from_json(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw ModelFileError(std::string("rnn model: bad JSON: ") + e.what());
    }
    if (j.value("format", "") != "rnn-model" || j.value("version", 0) != 1)
        throw ModelFileError("rnn model: unknown format/version");
    RnnConfig config;
    config.cell = j.at("cell").get<std::string>() == "lstm" ? CellKind::lstm : CellKind::gru;
    config.depth = j.at("depth").get<int>();
    config.width = j.at("width").get<int>();
    config.input_dim = j.at("input_dim").get<int>();
    config.bptt_window = j.at("bptt_window").get<int>();
    config.batch_size = j.at("batch_size").get<int>();
    config.seed = j.at("seed").get<std::uint64_t>();

    RnnModel model = RnnModel::init(config);
    const auto& layers = j.at("layers");
    if (layers.size() != static_cast<std::size_t>(config.depth))
        throw ModelFileError("rnn model: layer count mismatch");
    for (int l = 0; l < config.depth; ++l) {
        LayerParams& p = model.params().layers[l];
        Eigen::MatrixXd w_in = matrix_from_json(layers[l].at("w_in"));
        Eigen::MatrixXd w_rec = matrix_from_json(layers[l].at("w_rec"));
        if (w_in.rows() != p.w_in.rows() || w_in.cols() != p.w_in.cols() ||
            w_rec.rows() != p.w_rec.rows() || w_rec.cols() != p.w_rec.cols())
            throw ModelFileError("rnn model: tensor shape mismatch in layer " + std::to_string(l));
        p.w_in = std::move(w_in);
        p.w_rec = std::move(w_rec);
        const auto& bias = layers[l].at("bias");
        if (bias.size() != static_cast<std::size_t>(p.bias.size()))
            throw ModelFileError("rnn model: bias shape mismatch in layer " + std::to_string(l));
        for (Eigen::Index i = 0; i < p.bias.size(); ++i) p.bias(i) = bias[i].get<double>();
    }
    const auto& w_out = j.at("w_out");
    if (w_out.size() != static_cast<std::size_t>(config.width))
        throw ModelFileError("rnn model: output projection shape mismatch");
    for (int i = 0; i < config.width; ++i) model.params().w_out(i) = w_out[i].get<double>();
    model.params().b_out = j.at("b_out").get<double>();
    return model;
}

void save_model(const RnnModel& model, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw DataError("cannot write " + path);
    out << to_json(model) << '\n';
}

RnnModel load_model(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ModelFileError("model file not found: " + path);
    std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return model_from_json(text);
}

}  // namespace cryptoforecast::rnn
