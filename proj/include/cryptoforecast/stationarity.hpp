#pragma once

#include <map>
#include <optional>
#include <span>
#include <vector>

namespace cryptoforecast::stationarity {

enum class TestKind { ADF, KPSS };
enum class Decision { stationary, non_stationary };

struct StationarityResult {
    TestKind test = TestKind::ADF;
    double statistic = 0;
    int lags_used = 0;
    std::map<double, double> critical_values;  // significance -> critical value
    Decision decision_5pct = Decision::non_stationary;
};

// Augmented Dickey-Fuller test, constant-only regression, lag count chosen
// in [0, max_lag] by minimum AIC on a common sample. Default max_lag is the
// Schwert bound floor(12 * (T/100)^(1/4)). The null is a unit root, so
// `stationary` means the left-tailed statistic fell below the 5% critical
// value. Requires length >= 20, finite values, nonzero variance.
StationarityResult adf_test(std::span<const double> series,
                            std::optional<int> max_lag = {});

// KPSS level-stationarity test with a Bartlett-kernel long-run variance at
// truncation floor(4 * (T/100)^(1/4)). The null is stationarity, so the
// statistic is right-tailed.
StationarityResult kpss_test(std::span<const double> series);

struct IntegrationOrder {
    int d = 0;
    // one (ADF, KPSS) pair per difference level 0..d
    std::vector<std::pair<StationarityResult, StationarityResult>> trace;
    bool settled = true;  // false when even the d_max-th difference failed both tests
};

// Smallest d <= d_max whose d-times-differenced series both tests judge
// stationary (ADF rejects its unit-root null AND KPSS fails to reject its
// stationarity null).
IntegrationOrder integration_order(std::span<const double> series, int d_max = 2);

std::vector<double> difference(std::span<const double> series, int times = 1);

}  // namespace cryptoforecast::stationarity
