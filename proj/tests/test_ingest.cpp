#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>

#include "cryptoforecast/error.hpp"
#include "cryptoforecast/ingest.hpp"
#include "doctest.h"

using namespace cryptoforecast;

namespace {

std::string write_temp(const std::string& name, const std::string& content) {
    auto path = std::filesystem::temp_directory_path() / name;
    std::ofstream out(path);
    out << content;
    return path.string();
}

PriceSeries make_series(const std::string& coin, std::vector<Timestamp> ts,
                        std::vector<double> values) {
    return PriceSeries{coin, std::move(ts), std::move(values)};
}

}  // namespace

TEST_SUITE("ingest") {

TEST_CASE("ohlc_average") {
    OhlcvRecord rec{"BTC", 0, 100, 100, 100, 100, 1};
    CHECK(ohlc_average(rec) == doctest::Approx(100.0));
    rec = {"BTC", 0, 1, 3, 1, 3, 1};
    CHECK(ohlc_average(rec) == doctest::Approx(2.0));
    rec = {"BTC", 0, 10, 14, 8, 12, 1};
    CHECK(ohlc_average(rec) == doctest::Approx(11.0));
}

TEST_CASE("daily loader excludes coins and validates rows") {
    auto path = write_temp("cf_daily.csv",
                           "coin,date,open,high,low,close,volume\n"
                           "BTC,2021-01-01,10,12,9,11,100\n"
                           "BTC,2021-01-02,11,13,10,12,110\n"
                           "USDT,2021-01-01,1,1,1,1,500\n");
    auto all = ingest::load_daily_ohlcv(path, {});
    CHECK(all.size() == 2);
    auto filtered = ingest::load_daily_ohlcv(path, {"USDT"});
    CHECK(filtered.size() == 1);
    CHECK(filtered.count("BTC") == 1);
    CHECK(filtered["BTC"].size() == 2);
    CHECK(filtered["BTC"][0].timestamp < filtered["BTC"][1].timestamp);
}

TEST_CASE("daily loader rejects OHLC violations with coin and date") {
    auto path = write_temp("cf_daily_bad.csv",
                           "coin,date,open,high,low,close,volume\n"
                           "BTC,2021-01-01,10,10.5,9,11,100\n");  // high < close
    try {
        ingest::load_daily_ohlcv(path, {});
        FAIL("expected ValidationError");
    } catch (const ValidationError& e) {
        std::string msg = e.what();
        CHECK(msg.find("BTC") != std::string::npos);
        CHECK(msg.find("2021-01-01") != std::string::npos);
    }
}

TEST_CASE("daily loader reports parse errors with line numbers") {
    auto path = write_temp("cf_daily_parse.csv",
                           "coin,date,open,high,low,close,volume\n"
                           "BTC,2021-01-01,10,12,9,11,100\n"
                           "BTC,2021-01-02,xx,12,9,11,100\n");
    try {
        ingest::load_daily_ohlcv(path, {});
        FAIL("expected ParseError");
    } catch (const ParseError& e) {
        CHECK(std::string(e.what()).find(":3") != std::string::npos);
    }
}

TEST_CASE("minute loader splits coins and enforces monotone timestamps") {
    auto path = write_temp("cf_minute.csv",
                           "coin,timestamp,close\n"
                           "BTC,2021-01-01T00:00:00Z,10\n"
                           "BTC,2021-01-01T00:01:00Z,11\n"
                           "ETH,2021-01-01T00:00:00Z,5\n"
                           "ETH,2021-01-01T00:01:00Z,6\n");
    auto series = ingest::load_minute_closes(path);
    REQUIRE(series.size() == 2);
    CHECK(series[0].coin == "BTC");
    CHECK(series[0].size() == 2);

    auto dup = write_temp("cf_minute_dup.csv",
                          "coin,timestamp,close\n"
                          "BTC,2021-01-01T00:00:00Z,10\n"
                          "BTC,2021-01-01T00:00:00Z,11\n");
    CHECK_THROWS_AS(ingest::load_minute_closes(dup), ValidationError);

    auto back = write_temp("cf_minute_back.csv",
                           "coin,timestamp,close\n"
                           "BTC,2021-01-01T00:01:00Z,10\n"
                           "BTC,2021-01-01T00:00:00Z,11\n");
    CHECK_THROWS_AS(ingest::load_minute_closes(back), ValidationError);
}

TEST_CASE("resample_daily averages per UTC day") {
    // one day with [1,2,3] -> 2.0
    PriceSeries day1 = make_series("X", {0, 3600, 7200}, {1, 2, 3});
    auto out = ingest::resample_daily(day1);
    REQUIRE(out.size() == 1);
    CHECK(out.values[0] == doctest::Approx(2.0));
    CHECK(out.timestamps[0] == 0);

    // two days with [10,20] and [30] -> [15, 30]
    PriceSeries two =
        make_series("X", {0, 60, kSecondsPerDay + 5}, {10, 20, 30});
    out = ingest::resample_daily(two);
    REQUIRE(out.size() == 2);
    CHECK(out.values[0] == doctest::Approx(15.0));
    CHECK(out.values[1] == doctest::Approx(30.0));
    CHECK(out.timestamps[1] == kSecondsPerDay);

    // 1440 identical values on one day -> that value
    std::vector<Timestamp> ts(1440);
    std::vector<double> vals(1440, 7.5);
    for (int i = 0; i < 1440; ++i) ts[i] = 60 * i;
    out = ingest::resample_daily(make_series("X", ts, vals));
    REQUIRE(out.size() == 1);
    CHECK(out.values[0] == doctest::Approx(7.5));

    CHECK_THROWS_AS(ingest::resample_daily(PriceSeries{"X", {}, {}}), DataError);
}

TEST_CASE("resample_daily commutes with scalar scaling") {
    std::vector<Timestamp> ts;
    std::vector<double> vals;
    for (int i = 0; i < 300; ++i) {
        ts.push_back(i * 4000);
        vals.push_back(std::sin(i * 0.7) * 3 + 10);
    }
    PriceSeries base = make_series("X", ts, vals);
    auto scaled_vals = vals;
    for (double& v : scaled_vals) v *= 2.5;
    PriceSeries scaled = make_series("X", ts, scaled_vals);

    auto a = ingest::resample_daily(base);
    auto b = ingest::resample_daily(scaled);
    REQUIRE(a.size() == b.size());
    for (std::size_t i = 0; i < a.size(); ++i)
        CHECK(b.values[i] == doctest::Approx(2.5 * a.values[i]).epsilon(1e-12));
}

TEST_CASE("align_panel intersects timestamps") {
    PriceSeries a = make_series("A", {1, 2, 3}, {1.0, 2.0, 3.0});
    PriceSeries b = make_series("B", {1, 2, 3}, {4.0, 5.0, 6.0});
    auto panel = ingest::align_panel({a, b});
    CHECK(panel.n_rows() == 3);
    CHECK(panel.coins == std::vector<std::string>{"A", "B"});

    // A over days 1-10, B over days 5-15 -> days 5-10
    std::vector<Timestamp> ta, tb;
    std::vector<double> va, vb;
    for (int d = 1; d <= 10; ++d) {
        ta.push_back(d);
        va.push_back(d);
    }
    for (int d = 5; d <= 15; ++d) {
        tb.push_back(d);
        vb.push_back(d * 10);
    }
    panel = ingest::align_panel({make_series("A", ta, va), make_series("B", tb, vb)});
    CHECK(panel.n_rows() == 6);
    CHECK(panel.timestamps.front() == 5);
    CHECK(panel.timestamps.back() == 10);
    CHECK(panel.columns[0][0] == doctest::Approx(5.0));
    CHECK(panel.columns[1][0] == doctest::Approx(50.0));

    // disjoint spans
    PriceSeries c = make_series("C", {100, 101}, {1.0, 2.0});
    CHECK_THROWS_AS(ingest::align_panel({a, c}), DataError);
}

TEST_CASE("load then align is deterministic and row-order insensitive") {
    const std::string rows_a =
        "coin,timestamp,close\n"
        "BTC,2021-01-01T00:00:00Z,10\n"
        "BTC,2021-01-01T00:01:00Z,11\n"
        "ETH,2021-01-01T00:00:00Z,5\n"
        "ETH,2021-01-01T00:01:00Z,6\n";
    const std::string rows_b =
        "coin,timestamp,close\n"
        "ETH,2021-01-01T00:00:00Z,5\n"
        "BTC,2021-01-01T00:00:00Z,10\n"
        "ETH,2021-01-01T00:01:00Z,6\n"
        "BTC,2021-01-01T00:01:00Z,11\n";
    auto pa = write_temp("cf_order_a.csv", rows_a);
    auto pb = write_temp("cf_order_b.csv", rows_b);

    auto sa = ingest::load_minute_closes(pa);
    auto sb = ingest::load_minute_closes(pb);
    // same coins, possibly different order; align in a fixed order
    auto panel_a = ingest::align_panel(sa, Resolution::minute);
    std::sort(sb.begin(), sb.end(),
              [](const auto& x, const auto& y) { return x.coin < y.coin; });
    auto panel_b = ingest::align_panel(sb, Resolution::minute);
    CHECK(panel_a.timestamps == panel_b.timestamps);
    CHECK(panel_a.columns == panel_b.columns);

    auto out_a = std::filesystem::temp_directory_path() / "cf_panel_a.csv";
    auto out_b = std::filesystem::temp_directory_path() / "cf_panel_b.csv";
    ingest::write_panel_csv(panel_a, out_a.string());
    ingest::write_panel_csv(panel_b, out_b.string());
    std::ifstream fa(out_a), fb(out_b);
    std::string ca((std::istreambuf_iterator<char>(fa)), std::istreambuf_iterator<char>());
    std::string cb((std::istreambuf_iterator<char>(fb)), std::istreambuf_iterator<char>());
    CHECK(ca == cb);
}

TEST_CASE("panel csv round trip") {
    PriceSeries a = make_series("A", {60, 120, 180}, {1.5, 2.25, 3.125});
    PriceSeries b = make_series("B", {60, 120, 180}, {4.0, 5.0, 6.0});
    auto panel = ingest::align_panel({a, b}, Resolution::minute);
    auto path = std::filesystem::temp_directory_path() / "cf_panel_rt.csv";
    ingest::write_panel_csv(panel, path.string());
    auto loaded = ingest::read_panel_csv(path.string(), Resolution::minute);
    CHECK(loaded.coins == panel.coins);
    CHECK(loaded.timestamps == panel.timestamps);
    CHECK(loaded.columns == panel.columns);
}

}  // TEST_SUITE
