#pragma once

#include <map>
#include <set>
#include <string>
#include <vector>

#include "cryptoforecast/types.hpp"

namespace cryptoforecast::ingest {

// Daily CSV schema: coin,date,open,high,low,close,volume with YYYY-MM-DD dates.
// Coins in `exclude` (e.g. stablecoins) are dropped. Per-coin records come
// back sorted by timestamp; OHLC invariants are enforced per row.
std::map<std::string, std::vector<OhlcvRecord>> load_daily_ohlcv(
    const std::string& path, const std::set<std::string>& exclude = {});

// Minute CSV schema: coin,timestamp,close with ISO-8601 UTC timestamps.
// Duplicate or non-increasing timestamps within a coin are errors.
std::vector<PriceSeries> load_minute_closes(const std::string& path);

// Collapses sub-daily observations to one value per UTC calendar day (the
// arithmetic mean of the day's observations, stamped midnight UTC). Days
// without observations are omitted.
PriceSeries resample_daily(const PriceSeries& series);

// Intersects the timestamp sets of all series into a rectangular panel.
// Column order follows input order. Empty intersection is an error that
// reports each input's span.
AlignedPanel align_panel(const std::vector<PriceSeries>& series,
                         Resolution resolution = Resolution::daily);

// One PriceSeries per coin built from the ohlc_average of each record.
std::vector<PriceSeries> average_price_series(
    const std::map<std::string, std::vector<OhlcvRecord>>& records);

// One PriceSeries per coin from a single OHLCV field ("open", "high", "low",
// "close" or "volume").
std::vector<PriceSeries> field_series(
    const std::map<std::string, std::vector<OhlcvRecord>>& records,
    const std::string& field);

// Panel export: header `timestamp,<coin>,...`; ISO-8601 instants.
void write_panel_csv(const AlignedPanel& panel, const std::string& path);
AlignedPanel read_panel_csv(const std::string& path, Resolution resolution);

}  // namespace cryptoforecast::ingest
