// Acceptance suite: each criterion prints one PASS/FAIL/SKIP line; the
// process exits nonzero if anything fails. Criterion 8 needs the real
// aggregated price panel and is skipped unless CRYPTOFORECAST_PAPER_DATA
// points at a minute-schema CSV covering the coins of the published study.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <string>
#include <vector>

#include "cryptoforecast/error.hpp"
#include "cryptoforecast/experiment.hpp"
#include "cryptoforecast/gbt.hpp"
#include "cryptoforecast/granger.hpp"
#include "cryptoforecast/ingest.hpp"
#include "cryptoforecast/rng.hpp"
#include "cryptoforecast/rnn.hpp"
#include "cryptoforecast/stationarity.hpp"
#include "../support/oracles.hpp"

using namespace cryptoforecast;

namespace {

enum class Outcome { pass, fail, skip };

struct Check {
    int id;
    std::string label;
    std::function<Outcome(std::string&)> run;
};

double now_seconds() {
    using clock = std::chrono::steady_clock;
    static const auto start = clock::now();
    return std::chrono::duration<double>(clock::now() - start).count();
}

std::vector<double> random_walk(Rng& rng, int n) {
    std::vector<double> x(n);
    double acc = 0;
    for (int i = 0; i < n; ++i) {
        acc += rng.gaussian();
        x[i] = acc;
    }
    return x;
}

PriceSeries series_of(const std::string& coin, std::vector<double> values) {
    PriceSeries s;
    s.coin = coin;
    s.values = std::move(values);
    s.timestamps.resize(s.values.size());
    for (std::size_t i = 0; i < s.values.size(); ++i)
        s.timestamps[i] = static_cast<Timestamp>(i);
    return s;
}

// ---------------------------------------------------------------- criterion 1
Outcome toda_yamamoto_calibration(std::string& detail) {
    const double t0 = now_seconds();
    const int runs = 500;
    const int T = 1000;

    int null_rejections = 0;
    for (int seed = 0; seed < runs; ++seed) {
        Rng rng(810000 + seed);
        auto x = random_walk(rng, T);
        auto y = random_walk(rng, T);
        granger::TodaYamamotoOptions options;
        options.p_max = 5;
        auto res = granger::toda_yamamoto(series_of("X", x), series_of("Y", y), options);
        null_rejections += res.reject_at_5pct;
    }
    const double null_rate = static_cast<double>(null_rejections) / runs;

    int planted_rejections = 0;
    for (int seed = 0; seed < runs; ++seed) {
        Rng rng(820000 + seed);
        auto x = random_walk(rng, T);
        std::vector<double> y(T);
        y[0] = rng.gaussian();
        for (int t = 1; t < T; ++t) y[t] = 0.8 * x[t - 1] + rng.gaussian();
        granger::TodaYamamotoOptions options;
        options.p_max = 5;
        auto res = granger::toda_yamamoto(series_of("X", x), series_of("Y", y), options);
        planted_rejections += res.reject_at_5pct;
    }
    const double planted_rate = static_cast<double>(planted_rejections) / runs;
    const double elapsed = now_seconds() - t0;

    char buf[200];
    std::snprintf(buf, sizeof(buf),
                  "null rejection %.1f%% (need 2-8%%), planted %.1f%% (need >=95%%), %.0fs "
                  "(limit 600s)",
                  100 * null_rate, 100 * planted_rate, elapsed);
    detail = buf;
    return null_rate >= 0.02 && null_rate <= 0.08 && planted_rate >= 0.95 && elapsed < 600
               ? Outcome::pass
               : Outcome::fail;
}

// ---------------------------------------------------------------- criterion 2
Outcome unit_root_monte_carlo(std::string& detail) {
    using namespace stationarity;
    const int seeds = 200;
    int adf_power = 0, adf_size_hits = 0, kpss_size = 0, kpss_power = 0;
    for (int s = 0; s < seeds; ++s) {
        Rng rng(830000 + s);
        std::vector<double> noise(500);
        for (double& v : noise) v = rng.gaussian();
        auto walk = random_walk(rng, 500);
        if (adf_test(noise).decision_5pct == Decision::stationary) ++adf_power;
        if (adf_test(walk).decision_5pct == Decision::stationary) ++adf_size_hits;
        if (kpss_test(noise).decision_5pct == Decision::stationary) ++kpss_size;
        if (kpss_test(walk).decision_5pct == Decision::non_stationary) ++kpss_power;
    }

    int d_correct[3] = {0, 0, 0};
    for (int d = 0; d <= 2; ++d) {
        for (int s = 0; s < 100; ++s) {
            Rng rng(840000 + 1000 * d + s);
            std::vector<double> x(500);
            for (double& v : x) v = rng.gaussian();
            for (int k = 0; k < d; ++k) {
                double acc = 0;
                for (double& v : x) {
                    acc += v;
                    v = acc;
                }
            }
            if (integration_order(x, 2).d == d) ++d_correct[d];
        }
    }

    char buf[240];
    std::snprintf(buf, sizeof(buf),
                  "ADF power %d/200 (>=198), ADF size hits %d/200 (<=20), KPSS size %d/200 "
                  "(>=180), KPSS power %d/200 (>=190), d recovery %d/%d/%d (>=90 each)",
                  adf_power, adf_size_hits, kpss_size, kpss_power, d_correct[0], d_correct[1],
                  d_correct[2]);
    detail = buf;
    const bool ok = adf_power >= 198 && adf_size_hits <= 20 && kpss_size >= 180 &&
                    kpss_power >= 190 && d_correct[0] >= 90 && d_correct[1] >= 90 &&
                    d_correct[2] >= 90;
    return ok ? Outcome::pass : Outcome::fail;
}

// ---------------------------------------------------------------- criterion 3
Outcome rnn_gradient_correctness(std::string& detail) {
    using namespace rnn;
    double worst = 0;
    for (auto cell : {CellKind::lstm, CellKind::gru}) {
        for (int depth : {1, 2}) {
            RnnConfig config;
            config.cell = cell;
            config.depth = depth;
            config.width = 4;
            config.input_dim = 3;
            config.seed = 850000 + depth;
            RnnModel model = RnnModel::init(config);

            Rng rng(860000 + depth + (cell == CellKind::gru ? 10 : 0));
            const int steps = 8, batch = 2;
            std::vector<Eigen::MatrixXd> xs(steps);
            for (auto& x : xs) {
                x.resize(3, batch);
                for (Eigen::Index i = 0; i < x.size(); ++i) x.data()[i] = rng.gaussian();
            }
            Eigen::MatrixXd targets(steps, batch);
            for (Eigen::Index i = 0; i < targets.size(); ++i) targets.data()[i] = rng.gaussian();

            RnnState initial = model.zero_state(batch);
            auto fr = model.forward(xs, initial, true);
            Eigen::MatrixXd grad_out =
                2.0 * (fr.outputs - targets) / static_cast<double>(targets.size());
            Eigen::VectorXd analytic = model.backward(fr, grad_out).to_vector();

            Eigen::VectorXd flat = model.params().to_vector();
            const double h = 1e-5;
            // relative error floors at the gradient's own RMS scale: far
            // below it, a central difference at this step size carries no
            // measurable relative information in double precision
            const double scale = std::max(
                1e-6,
                std::sqrt(analytic.squaredNorm() / static_cast<double>(analytic.size())));
            for (Eigen::Index k = 0; k < flat.size(); ++k) {
                auto loss_at = [&](double value) {
                    Eigen::VectorXd bumped = flat;
                    bumped(k) = value;
                    model.params().from_vector(bumped);
                    auto out = model.forward(xs, initial, false).outputs;
                    Eigen::MatrixXd diff = out - targets;
                    return diff.squaredNorm() / static_cast<double>(diff.size());
                };
                const double fd = (loss_at(flat(k) + h) - loss_at(flat(k) - h)) / (2 * h);
                const double denom = std::max({std::fabs(fd), std::fabs(analytic(k)), scale});
                worst = std::max(worst, std::fabs(fd - analytic(k)) / denom);
            }
            model.params().from_vector(flat);
        }
    }
    char buf[120];
    std::snprintf(buf, sizeof(buf), "max relative gradient error %.3g (limit 1e-5)", worst);
    detail = buf;
    return worst < 1e-5 ? Outcome::pass : Outcome::fail;
}

// ---------------------------------------------------------------- criterion 4
Outcome gbt_oracle_equivalence(std::string& detail) {
    using namespace gbt;
    Rng rng(870000);
    int matched = 0;
    for (int trial = 0; trial < 100; ++trial) {
        const int n = 5 + static_cast<int>(rng.below(46));
        const int n_features = 1 + static_cast<int>(rng.below(4));
        Dataset d;
        d.feature_columns.assign(n_features, {});
        for (int f = 0; f < n_features; ++f)
            for (int i = 0; i < n; ++i) d.feature_columns[f].push_back(rng.gaussian());
        for (int i = 0; i < n; ++i) d.targets.push_back(rng.gaussian());
        const int min_node = 1 + static_cast<int>(rng.below(3));

        auto tree = RegressionTree::fit(d, d.targets, {1, min_node});

        // brute force over every feature and midpoint
        int best_f = -1;
        double best_thr = 0, best_sse = std::numeric_limits<double>::infinity();
        for (int f = 0; f < n_features; ++f) {
            std::vector<double> sorted = d.feature_columns[f];
            std::sort(sorted.begin(), sorted.end());
            sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
            for (std::size_t i = 0; i + 1 < sorted.size(); ++i) {
                const double thr = 0.5 * (sorted[i] + sorted[i + 1]);
                double sum_l = 0, sum_r = 0;
                int n_l = 0, n_r = 0;
                for (int r = 0; r < n; ++r)
                    if (d.feature_columns[f][r] <= thr) {
                        sum_l += d.targets[r];
                        ++n_l;
                    } else {
                        sum_r += d.targets[r];
                        ++n_r;
                    }
                if (n_l < min_node || n_r < min_node) continue;
                const double mean_l = sum_l / n_l, mean_r = sum_r / n_r;
                double sse = 0;
                for (int r = 0; r < n; ++r) {
                    const double mu = d.feature_columns[f][r] <= thr ? mean_l : mean_r;
                    sse += (d.targets[r] - mu) * (d.targets[r] - mu);
                }
                if (sse < best_sse) {
                    best_sse = sse;
                    best_f = f;
                    best_thr = thr;
                }
            }
        }
        const auto& root = tree.nodes()[0];
        if (best_f < 0) {
            matched += root.feature == -1;
        } else {
            matched += root.feature == best_f && std::fabs(root.threshold - best_thr) < 1e-12;
        }
    }

    // monotone training loss across a bundle of boosted fits
    bool monotone = true;
    for (int run = 0; run < 10; ++run) {
        Rng rr(880000 + run);
        Dataset train, val;
        train.feature_columns.assign(2, {});
        val.feature_columns.assign(2, {});
        for (int i = 0; i < 250; ++i) {
            double a = rr.gaussian(), b = rr.gaussian();
            train.feature_columns[0].push_back(a);
            train.feature_columns[1].push_back(b);
            train.targets.push_back(std::sin(a) + 0.5 * b + 0.2 * rr.gaussian());
        }
        for (int i = 0; i < 60; ++i) {
            double a = rr.gaussian(), b = rr.gaussian();
            val.feature_columns[0].push_back(a);
            val.feature_columns[1].push_back(b);
            val.targets.push_back(std::sin(a) + 0.5 * b);
        }
        GbtFitOptions options;
        options.learning_rate = run % 2 ? 0.1 : 0.01;
        options.max_iterations = 80;
        options.patience = 80;
        options.tree_params = {4, 5};
        auto res = fit_gbt(train, val, options);
        for (std::size_t i = 1; i < res.history.train_loss.size(); ++i)
            monotone &= res.history.train_loss[i] <= res.history.train_loss[i - 1] + 1e-12;
    }

    char buf[120];
    std::snprintf(buf, sizeof(buf), "depth-1 oracle matches %d/100, train-loss monotone: %s",
                  matched, monotone ? "yes" : "no");
    detail = buf;
    return matched == 100 && monotone ? Outcome::pass : Outcome::fail;
}

// ---------------------------------------------------------------- criterion 5
experiment::ExperimentSettings sample_settings() {
    experiment::ExperimentSettings s;
    s.target = "BTC";
    s.predictors = {"ADA", "LTC", "XRP", "NEO"};
    s.seed = 42;
    s.rnn.depth = 2;
    s.rnn.width = 32;
    s.rnn.bptt_window = 64;
    s.rnn.batch_size = 16;
    s.rnn.max_epochs = 200;
    return s;
}

double report_rmse(const experiment::ForecastReport& report, const std::string& name) {
    for (const auto& run : report.models)
        if (run.name == name) return run.metrics.rmse;
    throw std::runtime_error("missing model " + name);
}

Outcome forecast_skill(std::string& detail) {
    const double t0 = now_seconds();
    const std::string dir = std::string(CF_SOURCE_DIR) + "/data/sample";

    auto planted = ingest::align_panel(ingest::load_minute_closes(dir + "/minute_closes.csv"),
                                       Resolution::minute);
    auto planted_report = experiment::run_experiment(planted, sample_settings());
    const double base_p = report_rmse(planted_report, "mean");
    const double gbt_ratio = report_rmse(planted_report, "gbt") / base_p;
    const double gru_ratio = report_rmse(planted_report, "gru") / base_p;

    auto null_panel = ingest::align_panel(
        ingest::load_minute_closes(dir + "/minute_closes_null.csv"), Resolution::minute);
    auto null_report = experiment::run_experiment(null_panel, sample_settings());
    const double base_n = report_rmse(null_report, "mean");
    double best_null_ratio = 1e9;
    for (const char* name : {"gbt", "lstm", "gru"})
        best_null_ratio = std::min(best_null_ratio, report_rmse(null_report, name) / base_n);

    const double elapsed = now_seconds() - t0;
    char buf[240];
    std::snprintf(buf, sizeof(buf),
                  "planted gbt %.2f gru %.2f of baseline (need <0.50); null best ratio %.2f "
                  "(need >0.80); %.0fs (limit 900s)",
                  gbt_ratio, gru_ratio, best_null_ratio, elapsed);
    detail = buf;
    return gbt_ratio < 0.5 && gru_ratio < 0.5 && best_null_ratio > 0.8 && elapsed < 900
               ? Outcome::pass
               : Outcome::fail;
}

// ---------------------------------------------------------------- criterion 6
Outcome split_arithmetic(std::string& detail) {
    AlignedPanel panel;
    panel.coins = {"X"};
    const std::size_t T = 1576175;
    panel.timestamps.resize(T);
    for (std::size_t t = 0; t < T; ++t) panel.timestamps[t] = static_cast<Timestamp>(t);
    panel.columns = {std::vector<double>(T, 0.0)};
    for (std::size_t t = 0; t < T; ++t) panel.columns[0][t] = static_cast<double>(t % 97);

    auto split = forecast::chronological_split(panel, {0.8, 0.1, 0.1});
    char buf[120];
    std::snprintf(buf, sizeof(buf), "train/val/test = %zu/%zu/%zu (want 1260941/157617/157617)",
                  split.train.n_rows(), split.validation.n_rows(), split.test.n_rows());
    detail = buf;
    return split.train.n_rows() == 1260941 && split.validation.n_rows() == 157617 &&
                   split.test.n_rows() == 157617
               ? Outcome::pass
               : Outcome::fail;
}

// ---------------------------------------------------------------- criterion 7
Outcome chi2_accuracy(std::string& detail) {
    double worst = 0;
    for (int dof = 1; dof <= 30; ++dof) {
        for (double x = 0.0; x <= 100.0; x += 0.5) {
            const double mine = granger::chi2_survival(x, dof);
            const double ref = oracle::chi2_survival(x, dof);
            worst = std::max(worst, std::fabs(mine - ref));
        }
    }
    char buf[120];
    std::snprintf(buf, sizeof(buf), "max |error| %.3g over 6030 grid points (limit 1e-6)",
                  worst);
    detail = buf;
    return worst <= 1e-6 ? Outcome::pass : Outcome::fail;
}

// ---------------------------------------------------------------- criterion 8
Outcome table1_decisions(std::string& detail) {
    const char* env = std::getenv("CRYPTOFORECAST_PAPER_DATA");
    if (!env || !*env) {
        detail = "set CRYPTOFORECAST_PAPER_DATA to the released per-minute CSV to enable";
        return Outcome::skip;
    }
    auto series = ingest::load_minute_closes(env);
    std::vector<PriceSeries> daily;
    for (const auto& s : series) daily.push_back(ingest::resample_daily(s));
    auto panel = ingest::align_panel(daily, Resolution::daily);

    // published reject/accept decisions; only BNB->BTC failed to reject
    const std::vector<std::string> alts = {"ADA", "BAT", "BNB", "DASH", "DOGE", "LINK", "LTC",
                                           "NEO", "QTUM", "TRX", "XLM", "XMR", "XRP", "ZEC"};
    int matches = 0, total = 0;
    for (const std::string& main : {std::string("BTC"), std::string("ETH")}) {
        for (const auto& alt : alts) {
            const bool expected_reject = !(main == "BTC" && alt == "BNB");
            granger::TodaYamamotoOptions options;
            auto res = granger::toda_yamamoto(panel.series(panel.coin_index(alt)),
                                              panel.series(panel.coin_index(main)), options);
            matches += res.reject_at_5pct == expected_reject;
            ++total;
        }
    }
    char buf[120];
    std::snprintf(buf, sizeof(buf), "decision matches %d/%d (need >= 24/28)", matches, total);
    detail = buf;
    return matches >= 24 ? Outcome::pass : Outcome::fail;
}

// ---------------------------------------------------------------- criterion 9
Outcome determinism(std::string& detail) {
    const std::string dir = std::string(CF_SOURCE_DIR) + "/data/sample";
    auto panel = ingest::align_panel(ingest::load_minute_closes(dir + "/minute_closes.csv"),
                                     Resolution::minute);
    experiment::ExperimentSettings settings = sample_settings();
    settings.rnn.max_epochs = 12;  // identical work twice; shorter run keeps this quick
    auto a = experiment::run_experiment(panel, settings);
    auto b = experiment::run_experiment(panel, settings);
    const bool same_json = experiment::report_to_json(a) == experiment::report_to_json(b);
    bool same_preds = a.models.size() == b.models.size();
    for (std::size_t m = 0; same_preds && m < a.models.size(); ++m)
        same_preds = a.models[m].predictions == b.models[m].predictions;
    detail = same_json && same_preds ? "two runs produced bitwise-identical reports"
                                     : "reports differ between runs";
    return same_json && same_preds ? Outcome::pass : Outcome::fail;
}

}  // namespace

int main() {
    std::vector<Check> checks = {
        {1, "Toda-Yamamoto calibration (size and power)", toda_yamamoto_calibration},
        {2, "ADF/KPSS Monte Carlo and integration-order recovery", unit_root_monte_carlo},
        {3, "RNN gradient correctness vs central differences", rnn_gradient_correctness},
        {4, "GBT depth-1 oracle equivalence and monotone training loss", gbt_oracle_equivalence},
        {5, "forecast skill on bundled planted/null samples", forecast_skill},
        {6, "chronological split arithmetic", split_arithmetic},
        {7, "chi-square survival accuracy vs quadrature", chi2_accuracy},
        {8, "published causality decisions (dataset-dependent)", table1_decisions},
        {9, "end-to-end experiment determinism", determinism},
    };

    int failures = 0;
    for (auto& check : checks) {
        std::string detail;
        Outcome outcome;
        const double t0 = now_seconds();
        try {
            outcome = check.run(detail);
        } catch (const std::exception& e) {
            outcome = Outcome::fail;
            detail = std::string("exception: ") + e.what();
        }
        const double dt = now_seconds() - t0;
        const char* tag = outcome == Outcome::pass ? "PASS"
                          : outcome == Outcome::fail ? "FAIL"
                                                     : "SKIP";
        std::printf("[%s] criterion %d: %s — %s (%.1fs)\n", tag, check.id, check.label.c_str(),
                    detail.c_str(), dt);
        std::fflush(stdout);
        failures += outcome == Outcome::fail;
    }
    if (failures) std::printf("%d criterion(s) failed\n", failures);
    return failures == 0 ? 0 : 1;
}
