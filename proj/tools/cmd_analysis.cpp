#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>

#include "commands.hpp"
#include "cryptoforecast/correlation.hpp"
#include "cryptoforecast/csv.hpp"
#include "cryptoforecast/error.hpp"
#include "cryptoforecast/granger.hpp"
#include "cryptoforecast/ingest.hpp"
#include "cryptoforecast/parallel.hpp"
#include "cryptoforecast/stationarity.hpp"

namespace cfcli {

namespace cf = cryptoforecast;
namespace fs = std::filesystem;

cf::AlignedPanel load_close_panel(const RunConfig& config, bool daily_average) {
    if (!config.minute_csv.empty()) {
        cf::config::require_dataset(config, /*minute_needed=*/true);
        auto series = cf::ingest::load_minute_closes(config.minute_csv);
        if (daily_average) {
            std::vector<cf::PriceSeries> daily;
            daily.reserve(series.size());
            for (const auto& s : series) daily.push_back(cf::ingest::resample_daily(s));
            return cf::ingest::align_panel(daily, cf::Resolution::daily);
        }
        return cf::ingest::align_panel(series, cf::Resolution::minute);
    }
    cf::config::require_dataset(config, /*minute_needed=*/false);
    auto records = cf::ingest::load_daily_ohlcv(config.daily_csv, config.exclude);
    auto series = cf::ingest::field_series(records, "close");
    return cf::ingest::align_panel(series, cf::Resolution::daily);
}

cf::AlignedPanel load_correlation_panel(const RunConfig& config) {
    if (!config.daily_csv.empty()) {
        cf::config::require_dataset(config, /*minute_needed=*/false);
        auto records = cf::ingest::load_daily_ohlcv(config.daily_csv, config.exclude);
        auto series = cf::ingest::average_price_series(records);
        return cf::ingest::align_panel(series, cf::Resolution::daily);
    }
    return load_close_panel(config, /*daily_average=*/true);
}

int cmd_ingest(const RunConfig& config, const std::string& resolution) {
    if (resolution != "daily" && resolution != "minute")
        throw cf::ConfigError("resolution must be 'daily' or 'minute'");
    const bool daily = resolution == "daily";
    cf::AlignedPanel panel = daily && !config.daily_csv.empty()
                                 ? load_correlation_panel(config)
                                 : load_close_panel(config, daily);
    fs::create_directories(config.out_dir);
    const std::string path = config.out_dir + "/panel_" + resolution + ".csv";
    cf::ingest::write_panel_csv(panel, path);
    std::cout << "wrote " << path << " (" << panel.n_rows() << " rows x " << panel.n_coins()
              << " coins)\n";
    return 0;
}

int cmd_correlate(const RunConfig& config) {
    using namespace cf::correlation;
    cf::AlignedPanel panel = load_correlation_panel(config);
    if (panel.n_coins() < 2) throw cf::DataError("correlate: panel has no coin pairs");

    // Per-variable mode averages the correlations of the five OHLCV fields
    // instead of correlating the composite OHLC-average price.
    std::map<std::string, cf::AlignedPanel> variable_panels;
    if (config.correlation_mode == "per-variable") {
        if (config.daily_csv.empty())
            throw cf::ConfigError("per-variable correlation needs data.daily_csv");
        auto records = cf::ingest::load_daily_ohlcv(config.daily_csv, config.exclude);
        for (const char* field : {"open", "high", "low", "close", "volume"})
            variable_panels.emplace(
                field, cf::ingest::align_panel(cf::ingest::field_series(records, field),
                                               cf::Resolution::daily));
    }

    struct RegimeSpec {
        Regime regime;
        std::optional<WindowSpec> window;
    };
    std::vector<RegimeSpec> regimes{{Regime::daily, {}}};
    for (int w : config.sliding_widths) {
        if (w != 7 && w != 30)
            throw cf::ConfigError("windows.sliding supports widths 7 and 30, got " +
                                  std::to_string(w));
        regimes.push_back({w == 7 ? Regime::sliding7 : Regime::sliding30,
                           WindowSpec{WindowKind::sliding, static_cast<std::size_t>(w)}});
    }
    for (int w : config.tumbling_widths) {
        if (w != 7 && w != 30)
            throw cf::ConfigError("windows.tumbling supports widths 7 and 30, got " +
                                  std::to_string(w));
        regimes.push_back({w == 7 ? Regime::tumbling7 : Regime::tumbling30,
                           WindowSpec{WindowKind::tumbling, static_cast<std::size_t>(w)}});
    }

    fs::create_directories(config.out_dir);
    for (const auto& spec : regimes) {
        std::vector<CorrelogramEntry> entries;
        for (const auto& main : config.main_coins()) {
            std::vector<CorrelogramEntry> part;
            if (config.correlation_mode == "per-variable") {
                std::map<std::string, std::pair<double, int>> sums;
                for (const auto& [field, vp] : variable_panels) {
                    for (const auto& e :
                         panel_correlations(vp, main, spec.window, spec.regime)) {
                        if (!e.defined) continue;
                        auto& [sum, count] = sums[e.altcoin];
                        sum += e.r;
                        ++count;
                    }
                }
                for (const auto& [alt, sc] : sums)
                    part.push_back({alt, main, sc.first / sc.second, spec.regime, true});
            } else {
                part = panel_correlations(panel, main, spec.window, spec.regime);
            }
            entries.insert(entries.end(), part.begin(), part.end());
        }
        const std::string path =
            config.out_dir + "/correlogram_" + to_string(spec.regime) + ".csv";
        write_correlogram_csv(entries, path);
        std::cout << "wrote " << path << '\n';
    }

    for (const auto& main : config.main_coins()) {
        const std::size_t main_col = panel.coin_index(main);
        for (std::size_t j = 0; j < panel.n_coins(); ++j) {
            if (j == main_col) continue;
            CorrelationTrend trend =
                cumulative_trend(panel.series(main_col), panel.series(j));
            const std::string path =
                config.out_dir + "/trend_" + panel.coins[j] + "_" + main + ".csv";
            write_trend_csv(trend, path);
        }
    }
    std::cout << "wrote cumulative trend files for " << config.main_coins().size()
              << " main coin(s)\n";
    return 0;
}

int cmd_stationarity(const RunConfig& config) {
    namespace st = cf::stationarity;
    cf::AlignedPanel panel = load_close_panel(config, /*daily_average=*/true);
    fs::create_directories(config.out_dir);
    const std::string path = config.out_dir + "/stationarity.csv";
    std::ofstream out(path);
    if (!out) throw cf::DataError("cannot write " + path);
    out << "coin,test,statistic,lags,decision_5pct,d\n";

    std::vector<st::IntegrationOrder> orders(panel.n_coins());
    cf::parallel_for(config.jobs, panel.n_coins(), [&](std::size_t j) {
        orders[j] = st::integration_order(panel.columns[j], config.granger.d_max);
    });
    for (std::size_t j = 0; j < panel.n_coins(); ++j) {
        const auto& [adf, kpss] = orders[j].trace.front();
        auto decision = [](st::Decision d) {
            return d == st::Decision::stationary ? "stationary" : "non_stationary";
        };
        out << panel.coins[j] << ",ADF," << cf::csv::format_number(adf.statistic) << ','
            << adf.lags_used << ',' << decision(adf.decision_5pct) << ',' << orders[j].d << '\n';
        out << panel.coins[j] << ",KPSS," << cf::csv::format_number(kpss.statistic) << ','
            << kpss.lags_used << ',' << decision(kpss.decision_5pct) << ',' << orders[j].d
            << '\n';
    }
    std::cout << "wrote " << path << '\n';
    return 0;
}

int cmd_causality(const RunConfig& config) {
    cf::AlignedPanel panel = load_close_panel(config, /*daily_average=*/true);
    if (panel.n_coins() < 2) throw cf::DataError("causality: need at least 2 coins");

    struct Pair {
        std::string cause, effect;
    };
    std::vector<Pair> pairs;
    for (const auto& main : config.main_coins()) {
        panel.coin_index(main);  // validate early
        for (const auto& coin : panel.coins) {
            bool is_main = false;
            for (const auto& m : config.main_coins()) is_main |= coin == m;
            if (is_main) continue;
            if (config.granger.reverse)
                pairs.push_back({main, coin});
            else
                pairs.push_back({coin, main});
        }
    }

    cf::granger::TodaYamamotoOptions options;
    options.p_max = config.granger.p_max;
    options.d_max = config.granger.d_max;

    std::vector<cf::granger::GrangerResult> results(pairs.size());
    std::vector<std::string> failures(pairs.size());
    cf::parallel_for(config.jobs, pairs.size(), [&](std::size_t i) {
        try {
            results[i] = cf::granger::toda_yamamoto(
                panel.series(panel.coin_index(pairs[i].cause)),
                panel.series(panel.coin_index(pairs[i].effect)), options);
        } catch (const std::exception& e) {
            results[i].cause = pairs[i].cause;
            results[i].effect = pairs[i].effect;
            results[i].p = -1;
            results[i].d = -1;
            results[i].dof = -1;
            results[i].wald_statistic = std::nan("");
            results[i].p_value = std::nan("");
            failures[i] = e.what();
        }
    });
    for (std::size_t i = 0; i < pairs.size(); ++i)
        if (!failures[i].empty())
            std::cerr << "warning: " << pairs[i].cause << "->" << pairs[i].effect
                      << " flagged: " << failures[i] << '\n';

    fs::create_directories(config.out_dir);
    const std::string path = config.out_dir + "/granger.csv";
    cf::granger::write_granger_csv(results, path);
    std::cout << "wrote " << path << " (" << results.size() << " pairs)\n";
    return 0;
}

std::vector<std::string> auto_select_predictors(const RunConfig& config,
                                                const cf::AlignedPanel& daily_panel,
                                                const std::string& target) {
    using namespace cf::correlation;
    auto entries = panel_correlations(daily_panel, target);
    cf::granger::TodaYamamotoOptions options;
    options.p_max = config.granger.p_max;
    options.d_max = config.granger.d_max;

    std::vector<const CorrelogramEntry*> candidates;
    for (const auto& e : entries)
        if (e.defined && std::fabs(e.r) >= config.correlation_threshold)
            candidates.push_back(&e);

    std::vector<std::string> selected(candidates.size());
    std::vector<char> keep(candidates.size(), 0);
    cf::parallel_for(config.jobs, candidates.size(), [&](std::size_t i) {
        const auto& e = *candidates[i];
        auto res = cf::granger::toda_yamamoto(
            daily_panel.series(daily_panel.coin_index(e.altcoin)),
            daily_panel.series(daily_panel.coin_index(target)), options);
        if (res.reject_at_5pct) {
            selected[i] = e.altcoin;
            keep[i] = 1;
        }
    });
    std::vector<std::string> out;
    for (std::size_t i = 0; i < candidates.size(); ++i)
        if (keep[i]) out.push_back(selected[i]);
    return out;
}

int cmd_select_predictors(const RunConfig& config) {
    using namespace cf::correlation;
    cf::AlignedPanel panel = load_close_panel(config, /*daily_average=*/true);
    const std::string& target = config.target;
    auto entries = panel_correlations(panel, target);

    cf::granger::TodaYamamotoOptions options;
    options.p_max = config.granger.p_max;
    options.d_max = config.granger.d_max;

    fs::create_directories(config.out_dir);
    const std::string csv_path = config.out_dir + "/selection.csv";
    std::ofstream out(csv_path);
    if (!out) throw cf::DataError("cannot write " + csv_path);
    out << "altcoin,r,chi2,p_value,selected\n";

    struct RowResult {
        bool tested = false;
        cf::granger::GrangerResult granger;
    };
    std::vector<RowResult> rows(entries.size());
    cf::parallel_for(config.jobs, entries.size(), [&](std::size_t i) {
        const auto& e = entries[i];
        if (!e.defined || std::fabs(e.r) < config.correlation_threshold) return;
        rows[i].granger = cf::granger::toda_yamamoto(
            panel.series(panel.coin_index(e.altcoin)),
            panel.series(panel.coin_index(target)), options);
        rows[i].tested = true;
    });

    std::vector<std::string> selected;
    for (std::size_t i = 0; i < entries.size(); ++i) {
        const auto& e = entries[i];
        out << e.altcoin << ',' << (e.defined ? cf::csv::format_number(e.r) : "nan") << ',';
        if (rows[i].tested) {
            bool chosen = rows[i].granger.reject_at_5pct;
            out << cf::csv::format_number(rows[i].granger.wald_statistic) << ','
                << cf::csv::format_number(rows[i].granger.p_value) << ','
                << (chosen ? "true" : "false") << '\n';
            if (chosen) selected.push_back(e.altcoin);
        } else {
            out << "nan,nan,false\n";
        }
    }

    nlohmann::ordered_json j;
    j["target"] = target;
    j["correlation_threshold"] = config.correlation_threshold;
    j["predictors"] = selected;
    const std::string json_path = config.out_dir + "/predictors.json";
    std::ofstream jout(json_path);
    if (!jout) throw cf::DataError("cannot write " + json_path);
    jout << j.dump(2) << '\n';
    std::cout << "wrote " << csv_path << " and " << json_path << " (" << selected.size()
              << " predictors)\n";
    return 0;
}

}  // namespace cfcli
