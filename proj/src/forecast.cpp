#include "cryptoforecast/forecast.hpp"

#include <algorithm>
#include <cmath>

#include "cryptoforecast/error.hpp"

namespace cryptoforecast::forecast {

PanelSplit chronological_split(const AlignedPanel& panel, const SplitSpec& spec) {
    if (spec.train_fraction <= 0 || spec.validation_fraction <= 0 || spec.test_fraction <= 0)
        throw DataError("chronological_split: all fractions must be positive");
    const double sum = spec.train_fraction + spec.validation_fraction + spec.test_fraction;
    if (std::fabs(sum - 1.0) > 1e-9)
        throw DataError("chronological_split: fractions must sum to 1");
    const std::size_t T = panel.n_rows();
    if (T < 10) throw DataError("chronological_split: need at least 10 rows");

    const std::size_t n_val = static_cast<std::size_t>(spec.validation_fraction * T);
    const std::size_t n_test = static_cast<std::size_t>(spec.test_fraction * T);
    if (n_val == 0 || n_test == 0 || n_val + n_test >= T)
        throw DataError("chronological_split: a slice would be empty");
    const std::size_t n_train = T - n_val - n_test;

    PanelSplit split;
    split.train = panel.slice_rows(0, n_train);
    split.validation = panel.slice_rows(n_train, n_train + n_val);
    split.test = panel.slice_rows(n_train + n_val, T);
    return split;
}

Standardizer Standardizer::fit(const AlignedPanel& train) {
    Standardizer s;
    s.coins_ = train.coins;
    for (std::size_t j = 0; j < train.n_coins(); ++j) {
        const auto& col = train.columns[j];
        double mean = 0;
        for (double v : col) mean += v;
        mean /= static_cast<double>(col.size());
        double ss = 0;
        for (double v : col) ss += (v - mean) * (v - mean);
        double sd = std::sqrt(ss / static_cast<double>(col.size()));
        if (sd <= 0)
            throw NumericError("standardize: zero-variance column for coin " + train.coins[j]);
        s.means_.push_back(mean);
        s.sds_.push_back(sd);
    }
    return s;
}

std::size_t Standardizer::index(const std::string& coin) const {
    for (std::size_t j = 0; j < coins_.size(); ++j)
        if (coins_[j] == coin) return j;
    throw DataError("standardize: unknown coin " + coin);
}

AlignedPanel Standardizer::apply(const AlignedPanel& panel) const {
    AlignedPanel out = panel;
    for (std::size_t j = 0; j < panel.n_coins(); ++j) {
        const std::size_t k = index(panel.coins[j]);
        for (double& v : out.columns[j]) v = (v - means_[k]) / sds_[k];
    }
    return out;
}

std::vector<double> Standardizer::apply_column(std::span<const double> values,
                                               const std::string& coin) const {
    const std::size_t k = index(coin);
    std::vector<double> out(values.begin(), values.end());
    for (double& v : out) v = (v - means_[k]) / sds_[k];
    return out;
}

std::vector<double> Standardizer::invert_column(std::span<const double> values,
                                                const std::string& coin) const {
    const std::size_t k = index(coin);
    std::vector<double> out(values.begin(), values.end());
    for (double& v : out) v = v * sds_[k] + means_[k];
    return out;
}

double Standardizer::mean(const std::string& coin) const { return means_[index(coin)]; }
double Standardizer::stddev(const std::string& coin) const { return sds_[index(coin)]; }

std::vector<double> baseline_predict(BaselineKind kind, std::span<const double> train_targets,
                                     std::size_t horizon) {
    if (train_targets.empty()) throw DataError("baseline_predict: empty training targets");
    double constant;
    if (kind == BaselineKind::mean) {
        constant = 0;
        for (double v : train_targets) constant += v;
        constant /= static_cast<double>(train_targets.size());
    } else {
        std::vector<double> sorted(train_targets.begin(), train_targets.end());
        std::sort(sorted.begin(), sorted.end());
        const std::size_t n = sorted.size();
        constant = n % 2 ? sorted[n / 2] : 0.5 * (sorted[n / 2 - 1] + sorted[n / 2]);
    }
    return std::vector<double>(horizon, constant);
}

ForecastMetrics compute_metrics(std::span<const double> predictions,
                                std::span<const double> truth) {
    if (predictions.size() != truth.size())
        throw DataError("compute_metrics: length mismatch");
    if (predictions.empty()) throw DataError("compute_metrics: empty inputs");

    ForecastMetrics m;
    double ape_sum = 0;
    bool mape_defined = true;
    for (std::size_t i = 0; i < truth.size(); ++i) {
        const double err = predictions[i] - truth[i];
        m.mse += err * err;
        m.mae += std::fabs(err);
        if (truth[i] == 0)
            mape_defined = false;
        else
            ape_sum += std::fabs(err / truth[i]);
    }
    const double n = static_cast<double>(truth.size());
    m.mse /= n;
    m.mae /= n;
    m.rmse = std::sqrt(m.mse);
    if (mape_defined) m.mape = ape_sum / n;
    return m;
}

}  // namespace cryptoforecast::forecast
