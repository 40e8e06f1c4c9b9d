#pragma once

#include <string>
#include <vector>

#include "cryptoforecast/timeutil.hpp"

namespace cryptoforecast {

// One OHLCV candle for one coin.
struct OhlcvRecord {
    std::string coin;
    Timestamp timestamp = 0;
    double open = 0, high = 0, low = 0, close = 0;
    double volume = 0;
};

// low <= min(open, close), high >= max(open, close), everything >= 0.
// Throws ValidationError naming the coin and date otherwise.
void validate(const OhlcvRecord& rec);

// (open + high + low + close) / 4
double ohlc_average(const OhlcvRecord& rec);

// A single coin's series: strictly increasing timestamps, length >= 2.
struct PriceSeries {
    std::string coin;
    std::vector<Timestamp> timestamps;
    std::vector<double> values;

    std::size_t size() const { return values.size(); }
};

void validate(const PriceSeries& series);

enum class Resolution { minute, daily };

// Rectangular time-by-coin matrix over shared timestamps; no missing cells.
struct AlignedPanel {
    std::vector<std::string> coins;
    std::vector<Timestamp> timestamps;
    std::vector<std::vector<double>> columns;  // columns[j][t], order matches coins
    Resolution resolution = Resolution::daily;

    std::size_t n_rows() const { return timestamps.size(); }
    std::size_t n_coins() const { return coins.size(); }

    // index of `coin` in coins; throws DataError if absent
    std::size_t coin_index(const std::string& coin) const;

    PriceSeries series(std::size_t column) const;

    // panel restricted to the given coins, in the given order
    AlignedPanel select(const std::vector<std::string>& subset) const;

    // rows [begin, end)
    AlignedPanel slice_rows(std::size_t begin, std::size_t end) const;
};

void validate(const AlignedPanel& panel);

}  // namespace cryptoforecast
