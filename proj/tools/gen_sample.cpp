// Generates the bundled desk-scale sample datasets:
//   minute_closes.csv       6 coins, planted factor structure: four altcoins
//                           drive BTC with a mostly-contemporaneous signal,
//                           BNB evolves independently
//   minute_closes_null.csv  same coins, all independent (no signal to learn)
//   daily_ohlcv.csv         daily candles with the same causal structure in
//                           the closes, plus a pegged stablecoin row (USDT)
// Committed outputs are reproduced exactly by the default seed.

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "cryptoforecast/csv.hpp"
#include "cryptoforecast/rng.hpp"
#include "cryptoforecast/timeutil.hpp"

using cryptoforecast::Rng;
namespace csv = cryptoforecast::csv;

namespace {

constexpr double kPhi = 0.98;  // AR coefficient for every latent process

struct CoinSpec {
    const char* name;
    double base;
    double scale;
};

const CoinSpec kCoins[] = {
    {"BTC", 20000.0, 300.0}, {"ADA", 1.2, 0.02}, {"LTC", 90.0, 3.0},
    {"XRP", 0.55, 0.01},     {"NEO", 12.0, 0.4}, {"BNB", 310.0, 8.0},
};
constexpr int kNumAlt = 4;  // ADA, LTC, XRP, NEO feed BTC; BNB does not

// Latent paths: factor-correlated altcoins, a BTC blend with a lagged
// component, and an independent BNB. Burn-in removes the x_0 transient.
std::vector<std::vector<double>> latent_paths(int steps, Rng& rng, bool planted) {
    const int burn = 500;
    const int total = steps + burn;
    std::vector<double> factor(total, 0.0);
    std::vector<std::vector<double>> alt(kNumAlt, std::vector<double>(total, 0.0));
    std::vector<double> bnb(total, 0.0);

    for (int t = 1; t < total; ++t) {
        factor[t] = kPhi * factor[t - 1] + rng.gaussian();
        for (int i = 0; i < kNumAlt; ++i)
            alt[i][t] = kPhi * alt[i][t - 1] + rng.gaussian();
        bnb[t] = kPhi * bnb[t - 1] + rng.gaussian();
    }

    std::vector<std::vector<double>> x(6, std::vector<double>(steps));
    for (int t = 0; t < steps; ++t) {
        const int s = t + burn;
        double mixed[kNumAlt];
        for (int i = 0; i < kNumAlt; ++i)
            mixed[i] = planted ? 0.8 * factor[s] + 0.6 * alt[i][s] : alt[i][s];
        double btc;
        if (planted) {
            double mixed_prev[kNumAlt];
            for (int i = 0; i < kNumAlt; ++i)
                mixed_prev[i] = 0.8 * factor[s - 1] + 0.6 * alt[i][s - 1];
            btc = 0;
            for (int i = 0; i < kNumAlt; ++i)
                btc += 0.25 * (0.75 * mixed[i] + 0.25 * mixed_prev[i]);
            btc += 0.2 * rng.gaussian();
        } else {
            btc = factor[s];  // just another independent AR path
        }
        x[0][t] = btc;
        for (int i = 0; i < kNumAlt; ++i) x[1 + i][t] = mixed[i];
        x[5][t] = bnb[s];
    }
    return x;
}

void write_minute_file(const std::string& path, int steps, Rng& rng, bool planted) {
    auto x = latent_paths(steps, rng, planted);
    std::ofstream out(path);
    out << "coin,timestamp,close\n";
    const cryptoforecast::Timestamp start = cryptoforecast::parse_iso8601("2020-02-20T08:06:00Z");
    for (int c = 0; c < 6; ++c) {
        for (int t = 0; t < steps; ++t) {
            const double price = kCoins[c].base + kCoins[c].scale * x[c][t];
            if (price <= 0) throw std::runtime_error("negative sample price; adjust scales");
            out << kCoins[c].name << ',' << cryptoforecast::format_iso8601(start + 60L * t)
                << ',' << csv::format_number(price) << '\n';
        }
    }
    std::printf("wrote %s (%d steps x 6 coins)\n", path.c_str(), steps);
}

void write_daily_file(const std::string& path, int days, Rng& rng) {
    auto x = latent_paths(days, rng, /*planted=*/true);
    std::ofstream out(path);
    out << "coin,date,open,high,low,close,volume\n";
    const cryptoforecast::Timestamp start = cryptoforecast::parse_date("2020-02-20");
    for (int c = 0; c < 6; ++c) {
        double prev_close = kCoins[c].base + kCoins[c].scale * x[c][0];
        for (int t = 0; t < days; ++t) {
            const double close = kCoins[c].base + kCoins[c].scale * x[c][t];
            const double open = t == 0 ? close * (1.0 + 0.002 * rng.gaussian()) : prev_close;
            const double hi = std::max(open, close) * (1.0 + 0.01 * std::fabs(rng.gaussian()));
            const double lo = std::min(open, close) * (1.0 - 0.01 * std::fabs(rng.gaussian()));
            const double volume = 1e6 * std::exp(0.3 * rng.gaussian());
            out << kCoins[c].name << ','
                << cryptoforecast::format_date(start + cryptoforecast::kSecondsPerDay * t) << ','
                << csv::format_number(open) << ',' << csv::format_number(hi) << ','
                << csv::format_number(lo) << ',' << csv::format_number(close) << ','
                << csv::format_number(volume) << '\n';
            prev_close = close;
        }
    }
    // pegged stablecoin, excluded by the sample configs
    double prev_close = 1.0;
    for (int t = 0; t < days; ++t) {
        const double close = 1.0 + 0.001 * rng.gaussian();
        const double open = prev_close;
        const double hi = std::max(open, close) * (1.0 + 0.0005 * std::fabs(rng.gaussian()));
        const double lo = std::min(open, close) * (1.0 - 0.0005 * std::fabs(rng.gaussian()));
        out << "USDT," << cryptoforecast::format_date(start + cryptoforecast::kSecondsPerDay * t)
            << ',' << csv::format_number(open) << ',' << csv::format_number(hi) << ','
            << csv::format_number(lo) << ',' << csv::format_number(close) << ','
            << csv::format_number(5e7) << '\n';
        prev_close = close;
    }
    std::printf("wrote %s (%d days x 7 coins)\n", path.c_str(), days);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Generate the bundled sample datasets"};
    std::string out_dir = "data/sample";
    int steps = 5000;
    int days = 990;
    std::uint64_t seed = 20200220;
    app.add_option("--out-dir", out_dir);
    app.add_option("--steps", steps, "minute rows per coin");
    app.add_option("--days", days, "daily rows per coin");
    app.add_option("--seed", seed);
    CLI11_PARSE(app, argc, argv);

    std::filesystem::create_directories(out_dir);
    {
        Rng rng(seed);
        write_minute_file(out_dir + "/minute_closes.csv", steps, rng, /*planted=*/true);
    }
    {
        Rng rng(seed + 1);
        write_minute_file(out_dir + "/minute_closes_null.csv", steps, rng, /*planted=*/false);
    }
    {
        Rng rng(seed + 2);
        write_daily_file(out_dir + "/daily_ohlcv.csv", days, rng);
    }
    return 0;
}
