#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "cryptoforecast/types.hpp"

namespace cryptoforecast::correlation {

enum class WindowKind { sliding, tumbling };

struct WindowSpec {
    WindowKind kind = WindowKind::sliding;
    std::size_t width = 7;  // in base-resolution steps
};

enum class Regime { daily, sliding7, sliding30, tumbling7, tumbling30 };

std::string to_string(Regime regime);

struct CorrelogramEntry {
    std::string altcoin;
    std::string maincoin;
    double r = 0;
    Regime regime = Regime::daily;
    bool defined = true;  // false when a zero-variance column made r undefined
};

struct CorrelationTrend {
    std::string coin_a, coin_b;
    std::vector<Timestamp> timestamps;
    std::vector<double> r_values;  // r_values[0] == 1 by convention
};

// Pearson correlation coefficient. Requires equal lengths >= 2 and nonzero
// variance on both sides; result is clamped to [-1, 1].
double pearson(std::span<const double> x, std::span<const double> y);

// Trailing-window means. Sliding: one output per position >= width-1.
// Tumbling: one output per complete block. Output timestamps are the
// window-end instants.
PriceSeries window_aggregate(const PriceSeries& series, const WindowSpec& spec);

// Pearson r of every non-target column against the target column, optionally
// after window-aggregating both sides. Zero-variance columns come back with
// defined == false.
std::vector<CorrelogramEntry> panel_correlations(const AlignedPanel& panel,
                                                 const std::string& target,
                                                 std::optional<WindowSpec> spec = {},
                                                 Regime regime = Regime::daily);

// r over the prefix t_0..t_{n-1} at each step t_n, with r = 1 at t_0 and
// zero-variance prefixes carrying the last defined value forward.
CorrelationTrend cumulative_trend(const PriceSeries& a, const PriceSeries& b);

enum class Intensity { weak, average, above_average, high };

std::string to_string(Intensity intensity);

// |r| banded into [0,0.25) / [0.25,0.5) / [0.5,0.75) / [0.75,1].
Intensity intensity_class(double r);

// CSV export, header `altcoin,maincoin,regime,r`.
void write_correlogram_csv(const std::vector<CorrelogramEntry>& entries,
                           const std::string& path);

// CSV export, header `timestamp,r`.
void write_trend_csv(const CorrelationTrend& trend, const std::string& path);

}  // namespace cryptoforecast::correlation
