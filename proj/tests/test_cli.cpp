// End-to-end runs of the command-line tool against the bundled sample data.

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>

#include "doctest.h"
#include "nlohmann/json.hpp"

namespace fs = std::filesystem;

namespace {

const std::string kCli = CF_CLI_PATH;
const std::string kSampleDir = std::string(CF_SOURCE_DIR) + "/data/sample";

int run_cli(const std::string& args) {
    const std::string cmd = kCli + " " + args + " >/dev/null 2>&1";
    int status = std::system(cmd.c_str());
    return WEXITSTATUS(status);
}

std::string slurp(const fs::path& path) {
    std::ifstream in(path);
    REQUIRE(in.good());
    return std::string((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
}

fs::path fresh_dir(const std::string& name) {
    fs::path dir = fs::temp_directory_path() / name;
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

fs::path write_json(const fs::path& dir, const std::string& name, const nlohmann::json& j) {
    fs::path path = dir / name;
    std::ofstream out(path);
    out << j.dump(2);
    return path;
}

nlohmann::json analysis_config(const fs::path& out_dir) {
    return {
        {"data", {{"daily_csv", kSampleDir + "/daily_ohlcv.csv"}, {"exclude", {"USDT"}}}},
        {"target", "BTC"},
        {"out_dir", out_dir.string()},
        {"seed", 1},
    };
}

nlohmann::json forecast_config(const fs::path& out_dir) {
    return {
        {"data", {{"minute_csv", kSampleDir + "/minute_closes.csv"}}},
        {"target", "BTC"},
        {"predictors", {"ADA", "LTC", "XRP", "NEO"}},
        {"out_dir", out_dir.string()},
        {"seed", 7},
        {"gbt", {{"max_iterations", 60}}},
        {"rnn",
         {{"depth", 1}, {"width", 8}, {"batch_size", 8}, {"max_epochs", 4}, {"patience", 4}}},
    };
}

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("analysis pipeline produces its files and reruns identically") {
    auto dir = fresh_dir("cf_cli_analysis");
    auto cfg = write_json(dir, "config.json", analysis_config(dir / "out"));

    CHECK(run_cli("--config " + cfg.string() + " ingest") == 0);
    CHECK(fs::exists(dir / "out/panel_daily.csv"));

    CHECK(run_cli("--config " + cfg.string() + " correlate") == 0);
    for (const char* regime : {"daily", "sliding7", "sliding30", "tumbling7", "tumbling30"}) {
        CAPTURE(regime);
        CHECK(fs::exists(dir / ("out/correlogram_" + std::string(regime) + ".csv")));
    }
    CHECK(fs::exists(dir / "out/trend_ADA_BTC.csv"));
    CHECK(fs::exists(dir / "out/trend_BNB_BTC.csv"));

    // idempotent rerun: identical bytes
    const std::string first = slurp(dir / "out/correlogram_daily.csv");
    CHECK(run_cli("--config " + cfg.string() + " correlate") == 0);
    CHECK(slurp(dir / "out/correlogram_daily.csv") == first);

    CHECK(run_cli("--config " + cfg.string() + " stationarity") == 0);
    const std::string stationarity = slurp(dir / "out/stationarity.csv");
    CHECK(stationarity.rfind("coin,test,statistic,lags,decision_5pct,d", 0) == 0);

    CHECK(run_cli("--config " + cfg.string() + " causality") == 0);
    const std::string granger = slurp(dir / "out/granger.csv");
    CHECK(granger.rfind("cause,effect,p,d,chi2,dof,p_value,reject_5pct", 0) == 0);
    // five altcoins against one main coin
    CHECK(std::count(granger.begin(), granger.end(), '\n') == 6);

    CHECK(run_cli("--config " + cfg.string() + " select-predictors") == 0);
    auto predictors = nlohmann::json::parse(slurp(dir / "out/predictors.json"));
    auto list = predictors.at("predictors").get<std::vector<std::string>>();
    // the planted feeders pass, the independent coin does not
    CHECK(list.size() == 4);
    for (const auto& coin : list) CHECK(coin != "BNB");
}

TEST_CASE("reverse causality direction swaps the pair order") {
    auto dir = fresh_dir("cf_cli_reverse");
    auto cfg = write_json(dir, "config.json", analysis_config(dir / "out"));
    CHECK(run_cli("--config " + cfg.string() + " causality --direction reverse") == 0);
    const std::string granger = slurp(dir / "out/granger.csv");
    CHECK(granger.find("BTC,ADA") != std::string::npos);
}

TEST_CASE("train, predict, evaluate and report") {
    auto dir = fresh_dir("cf_cli_model");
    auto cfg = write_json(dir, "config.json", forecast_config(dir / "out"));

    // predict before train -> missing model file, exit 4
    CHECK(run_cli("--config " + cfg.string() + " predict") == 4);

    CHECK(run_cli("--config " + cfg.string() + " train") == 0);
    CHECK(fs::exists(dir / "out/models/gbt.json"));
    CHECK(fs::exists(dir / "out/models/lstm.json"));
    CHECK(fs::exists(dir / "out/models/gru.json"));
    CHECK(fs::exists(dir / "out/models/history_gbt.csv"));

    CHECK(run_cli("--config " + cfg.string() + " predict") == 0);
    const std::string predictions = slurp(dir / "out/predictions.csv");
    CHECK(predictions.rfind("timestamp,truth,gbt,lstm,gru,mean,median", 0) == 0);

    CHECK(run_cli("--config " + cfg.string() + " evaluate") == 0);
    CHECK(fs::exists(dir / "out/report.json"));
    CHECK(fs::exists(dir / "out/report.txt"));
    auto report = nlohmann::json::parse(slurp(dir / "out/report.json"));
    CHECK(report.at("target") == "BTC");
    CHECK(report.at("models").size() == 5);

    // an end-to-end report reproduces the staged evaluate byte for byte
    const std::string staged = slurp(dir / "out/report.json");
    CHECK(run_cli("--config " + cfg.string() + " report") == 0);
    CHECK(slurp(dir / "out/report.json") == staged);

    // evaluate with a mismatched target is a config error
    CHECK(run_cli("--config " + cfg.string() + " evaluate --target ETH") == 2);
}

TEST_CASE("exit codes distinguish config and data errors") {
    auto dir = fresh_dir("cf_cli_errors");

    // missing dataset path -> config error
    nlohmann::json no_data = {{"target", "BTC"}, {"out_dir", (dir / "out").string()}};
    auto cfg1 = write_json(dir, "no_data.json", no_data);
    CHECK(run_cli("--config " + cfg1.string() + " correlate") == 2);

    // malformed CSV -> data error
    fs::path bad_csv = dir / "bad.csv";
    std::ofstream(bad_csv) << "coin,date,open,high,low,close,volume\nBTC,2021-01-01,1,2\n";
    nlohmann::json bad = {{"data", {{"daily_csv", bad_csv.string()}}},
                          {"target", "BTC"},
                          {"out_dir", (dir / "out").string()}};
    auto cfg2 = write_json(dir, "bad.json", bad);
    CHECK(run_cli("--config " + cfg2.string() + " correlate") == 3);

    // unreadable config -> config error
    CHECK(run_cli("--config " + (dir / "missing.json").string() + " correlate") == 2);

    // single-coin panel -> data error (no pairs)
    fs::path single = dir / "single.csv";
    std::ofstream(single) << "coin,date,open,high,low,close,volume\n"
                          << "BTC,2021-01-01,1,2,0.5,1.5,10\n"
                          << "BTC,2021-01-02,1.5,2,1,1.8,10\n"
                          << "BTC,2021-01-03,1.8,2,1,1.9,10\n";
    nlohmann::json one = {{"data", {{"daily_csv", single.string()}}},
                          {"target", "BTC"},
                          {"out_dir", (dir / "out").string()}};
    auto cfg3 = write_json(dir, "one.json", one);
    CHECK(run_cli("--config " + cfg3.string() + " correlate") == 3);
}

}  // TEST_SUITE
