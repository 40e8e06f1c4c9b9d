#include "cryptoforecast/correlation.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

#include "cryptoforecast/csv.hpp"
#include "cryptoforecast/error.hpp"

namespace cryptoforecast::correlation {

namespace {

struct Moments {
    double mean_x, mean_y, var_x, var_y, cov;
};

Moments moments(std::span<const double> x, std::span<const double> y) {
    const std::size_t n = x.size();
    double mx = 0, my = 0;
    for (std::size_t i = 0; i < n; ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= static_cast<double>(n);
    my /= static_cast<double>(n);
    double sxx = 0, syy = 0, sxy = 0;
    for (std::size_t i = 0; i < n; ++i) {
        double dx = x[i] - mx, dy = y[i] - my;
        sxx += dx * dx;
        syy += dy * dy;
        sxy += dx * dy;
    }
    return {mx, my, sxx, syy, sxy};
}

}  // namespace

double pearson(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size())
        throw DataError("pearson: length mismatch (" + std::to_string(x.size()) + " vs " +
                        std::to_string(y.size()) + ")");
    if (x.size() < 2) throw DataError("pearson: need at least 2 observations");
    Moments m = moments(x, y);
    if (m.var_x <= 0 || m.var_y <= 0)
        throw NumericError("pearson: zero-variance input, correlation undefined");
    double r = m.cov / std::sqrt(m.var_x * m.var_y);
    return std::clamp(r, -1.0, 1.0);
}

PriceSeries window_aggregate(const PriceSeries& series, const WindowSpec& spec) {
    if (spec.width < 1) throw DataError("window width must be positive");
    const std::size_t n = series.size();
    if (spec.width > n)
        throw DataError("window width " + std::to_string(spec.width) + " exceeds series length " +
                        std::to_string(n));

    PriceSeries out;
    out.coin = series.coin;
    const double w = static_cast<double>(spec.width);
    if (spec.kind == WindowKind::sliding) {
        double sum = 0;
        for (std::size_t i = 0; i < n; ++i) {
            sum += series.values[i];
            if (i + 1 > spec.width) sum -= series.values[i - spec.width];
            if (i + 1 >= spec.width) {
                out.timestamps.push_back(series.timestamps[i]);
                out.values.push_back(sum / w);
            }
        }
    } else {
        for (std::size_t start = 0; start + spec.width <= n; start += spec.width) {
            double sum = 0;
            for (std::size_t i = start; i < start + spec.width; ++i) sum += series.values[i];
            out.timestamps.push_back(series.timestamps[start + spec.width - 1]);
            out.values.push_back(sum / w);
        }
    }
    return out;
}

std::vector<CorrelogramEntry> panel_correlations(const AlignedPanel& panel,
                                                 const std::string& target,
                                                 std::optional<WindowSpec> spec, Regime regime) {
    const std::size_t target_col = panel.coin_index(target);
    if (spec && spec->width > panel.n_rows())
        throw DataError("panel_correlations: window wider than panel");

    auto aggregate = [&](std::size_t col) {
        PriceSeries s = panel.series(col);
        return spec ? window_aggregate(s, *spec).values : s.values;
    };
    const std::vector<double> target_values = aggregate(target_col);

    std::vector<CorrelogramEntry> entries;
    for (std::size_t j = 0; j < panel.n_coins(); ++j) {
        if (j == target_col) continue;
        CorrelogramEntry e;
        e.altcoin = panel.coins[j];
        e.maincoin = target;
        e.regime = regime;
        try {
            e.r = pearson(target_values, aggregate(j));
        } catch (const NumericError&) {
            e.r = 0;
            e.defined = false;
        }
        entries.push_back(std::move(e));
    }
    return entries;
}

CorrelationTrend cumulative_trend(const PriceSeries& a, const PriceSeries& b) {
    if (a.size() != b.size() || a.timestamps != b.timestamps)
        throw DataError("cumulative_trend: series not aligned");
    if (a.size() < 3) throw DataError("cumulative_trend: need at least 3 observations");

    CorrelationTrend trend;
    trend.coin_a = a.coin;
    trend.coin_b = b.coin;
    trend.timestamps = a.timestamps;
    trend.r_values.resize(a.size());
    trend.r_values[0] = 1.0;  // convention at t_0

    double last_defined = 1.0;
    for (std::size_t n = 1; n < a.size(); ++n) {
        // prefix covers observations t_0 .. t_{n-1}
        std::span<const double> px(a.values.data(), n);
        std::span<const double> py(b.values.data(), n);
        double r = last_defined;
        if (n >= 2) {
            try {
                r = pearson(px, py);
                last_defined = r;
            } catch (const NumericError&) {
                // zero-variance prefix: carry the previous defined value
            }
        }
        trend.r_values[n] = r;
    }
    return trend;
}

Intensity intensity_class(double r) {
    double a = std::fabs(r);
    if (a >= 0.75) return Intensity::high;
    if (a >= 0.5) return Intensity::above_average;
    if (a >= 0.25) return Intensity::average;
    return Intensity::weak;
}

std::string to_string(Regime regime) {
    switch (regime) {
        case Regime::daily: return "daily";
        case Regime::sliding7: return "sliding7";
        case Regime::sliding30: return "sliding30";
        case Regime::tumbling7: return "tumbling7";
        case Regime::tumbling30: return "tumbling30";
    }
    return "daily";
}

std::string to_string(Intensity intensity) {
    switch (intensity) {
        case Intensity::weak: return "weak";
        case Intensity::average: return "average";
        case Intensity::above_average: return "above_average";
        case Intensity::high: return "high";
    }
    return "weak";
}

void write_correlogram_csv(const std::vector<CorrelogramEntry>& entries,
                           const std::string& path) {
    std::ofstream out(path);
    if (!out) throw DataError("cannot write " + path);
    out << "altcoin,maincoin,regime,r\n";
    for (const auto& e : entries) {
        out << e.altcoin << ',' << e.maincoin << ',' << to_string(e.regime) << ','
            << (e.defined ? csv::format_number(e.r) : "nan") << '\n';
    }
}

void write_trend_csv(const CorrelationTrend& trend, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw DataError("cannot write " + path);
    out << "timestamp,r\n";
    for (std::size_t i = 0; i < trend.timestamps.size(); ++i)
        out << format_iso8601(trend.timestamps[i]) << ',' << csv::format_number(trend.r_values[i])
            << '\n';
}

}  // namespace cryptoforecast::correlation
