#pragma once

#include <string>
#include <vector>

#include "cryptoforecast/config.hpp"
#include "cryptoforecast/types.hpp"

namespace cfcli {

using cryptoforecast::config::RunConfig;

// Closing-price panel for the analysis commands. Prefers the minute dataset
// (optionally averaged into daily bins); falls back to the daily OHLCV file.
cryptoforecast::AlignedPanel load_close_panel(const RunConfig& config, bool daily_average);

// Correlation-analysis panel built from the daily OHLCV averages, or from
// resampled minute closes when only the minute file is configured.
cryptoforecast::AlignedPanel load_correlation_panel(const RunConfig& config);

// Altcoins passing the correlation threshold and then the causality test.
std::vector<std::string> auto_select_predictors(const RunConfig& config,
                                                const cryptoforecast::AlignedPanel& daily_panel,
                                                const std::string& target);

int cmd_ingest(const RunConfig& config, const std::string& resolution);
int cmd_correlate(const RunConfig& config);
int cmd_stationarity(const RunConfig& config);
int cmd_causality(const RunConfig& config);
int cmd_select_predictors(const RunConfig& config);
int cmd_train(const RunConfig& config);
int cmd_predict(const RunConfig& config);
int cmd_evaluate(const RunConfig& config);
int cmd_report(const RunConfig& config);

}  // namespace cfcli
