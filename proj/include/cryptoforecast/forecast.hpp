#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "cryptoforecast/types.hpp"

namespace cryptoforecast::forecast {

struct SplitSpec {
    double train_fraction = 0.8;
    double validation_fraction = 0.1;
    double test_fraction = 0.1;
};

struct PanelSplit {
    AlignedPanel train, validation, test;
};

// Chronological split: validation and test get floor(fraction * T) rows,
// train keeps the earliest remainder. Any empty slice is an error.
PanelSplit chronological_split(const AlignedPanel& panel, const SplitSpec& spec);

// Per-column affine transform fitted on the training slice only.
class Standardizer {
public:
    static Standardizer fit(const AlignedPanel& train);

    AlignedPanel apply(const AlignedPanel& panel) const;
    std::vector<double> apply_column(std::span<const double> values,
                                     const std::string& coin) const;
    std::vector<double> invert_column(std::span<const double> values,
                                      const std::string& coin) const;

    double mean(const std::string& coin) const;
    double stddev(const std::string& coin) const;

private:
    std::vector<std::string> coins_;
    std::vector<double> means_, sds_;
    std::size_t index(const std::string& coin) const;
};

enum class BaselineKind { mean, median };

std::vector<double> baseline_predict(BaselineKind kind, std::span<const double> train_targets,
                                     std::size_t horizon);

struct ForecastMetrics {
    double mse = 0;
    double rmse = 0;
    double mae = 0;
    std::optional<double> mape;  // unset when any truth value is zero
};

// MAPE is reported as a fraction; it is left unset (not an exception) when
// the truth contains zeros so the other metrics survive.
ForecastMetrics compute_metrics(std::span<const double> predictions,
                                std::span<const double> truth);

}  // namespace cryptoforecast::forecast
