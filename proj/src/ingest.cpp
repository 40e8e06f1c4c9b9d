#include "cryptoforecast/ingest.hpp"

#include <algorithm>
#include <fstream>
#include <unordered_map>

#include "cryptoforecast/csv.hpp"
#include "cryptoforecast/error.hpp"

namespace cryptoforecast {

void validate(const OhlcvRecord& rec) {
    auto fail = [&](const std::string& what) {
        throw ValidationError("invalid OHLCV for " + rec.coin + " at " +
                              format_date(rec.timestamp) + ": " + what);
    };
    if (rec.open < 0 || rec.high < 0 || rec.low < 0 || rec.close < 0) fail("negative price");
    if (rec.volume < 0) fail("negative volume");
    if (rec.low > std::min(rec.open, rec.close)) fail("low above open/close");
    if (rec.high < std::max(rec.open, rec.close)) fail("high below open/close");
}

double ohlc_average(const OhlcvRecord& rec) {
    return (rec.open + rec.high + rec.low + rec.close) / 4.0;
}

void validate(const PriceSeries& series) {
    if (series.values.size() != series.timestamps.size())
        throw ValidationError(series.coin + ": timestamp/value length mismatch");
    if (series.size() < 2)
        throw ValidationError(series.coin + ": series needs at least 2 observations");
    for (std::size_t i = 1; i < series.timestamps.size(); ++i)
        if (series.timestamps[i] <= series.timestamps[i - 1])
            throw ValidationError(series.coin + ": timestamps not strictly increasing at index " +
                                  std::to_string(i));
}

void validate(const AlignedPanel& panel) {
    if (panel.coins.empty()) throw ValidationError("panel has no coins");
    if (panel.n_rows() < 2) throw ValidationError("panel needs at least 2 rows");
    if (panel.columns.size() != panel.coins.size())
        throw ValidationError("panel column/coin count mismatch");
    for (const auto& col : panel.columns)
        if (col.size() != panel.n_rows())
            throw ValidationError("panel column length mismatch");
    for (std::size_t i = 1; i < panel.timestamps.size(); ++i)
        if (panel.timestamps[i] <= panel.timestamps[i - 1])
            throw ValidationError("panel timestamps not strictly increasing");
}

std::size_t AlignedPanel::coin_index(const std::string& coin) const {
    for (std::size_t j = 0; j < coins.size(); ++j)
        if (coins[j] == coin) return j;
    throw DataError("coin not in panel: " + coin);
}

PriceSeries AlignedPanel::series(std::size_t column) const {
    return PriceSeries{coins.at(column), timestamps, columns.at(column)};
}

AlignedPanel AlignedPanel::select(const std::vector<std::string>& subset) const {
    AlignedPanel out;
    out.timestamps = timestamps;
    out.resolution = resolution;
    for (const auto& coin : subset) {
        out.coins.push_back(coin);
        out.columns.push_back(columns[coin_index(coin)]);
    }
    return out;
}

AlignedPanel AlignedPanel::slice_rows(std::size_t begin, std::size_t end) const {
    if (begin > end || end > n_rows())
        throw DataError("bad panel row slice [" + std::to_string(begin) + ", " +
                        std::to_string(end) + ")");
    AlignedPanel out;
    out.coins = coins;
    out.resolution = resolution;
    out.timestamps.assign(timestamps.begin() + begin, timestamps.begin() + end);
    for (const auto& col : columns)
        out.columns.emplace_back(col.begin() + begin, col.begin() + end);
    return out;
}

namespace ingest {

std::map<std::string, std::vector<OhlcvRecord>> load_daily_ohlcv(
    const std::string& path, const std::set<std::string>& exclude) {
    auto rows = csv::read_file(path, "coin,date,open,high,low,close,volume");
    std::map<std::string, std::vector<OhlcvRecord>> by_coin;
    for (const auto& row : rows) {
        const std::string& coin = row.fields[0];
        if (coin.empty())
            throw ParseError(path + ":" + std::to_string(row.line_number) + ": empty coin field");
        if (exclude.count(coin)) continue;
        OhlcvRecord rec;
        rec.coin = coin;
        try {
            rec.timestamp = parse_date(row.fields[1]);
        } catch (const ParseError& e) {
            throw ParseError(path + ":" + std::to_string(row.line_number) + ": " + e.what());
        }
        rec.open = csv::parse_number(row, 2, path);
        rec.high = csv::parse_number(row, 3, path);
        rec.low = csv::parse_number(row, 4, path);
        rec.close = csv::parse_number(row, 5, path);
        rec.volume = csv::parse_number(row, 6, path);
        validate(rec);
        by_coin[coin].push_back(std::move(rec));
    }
    for (auto& [coin, records] : by_coin) {
        std::stable_sort(records.begin(), records.end(),
                         [](const auto& a, const auto& b) { return a.timestamp < b.timestamp; });
        for (std::size_t i = 1; i < records.size(); ++i)
            if (records[i].timestamp == records[i - 1].timestamp)
                throw ValidationError(path + ": duplicate date " +
                                      format_date(records[i].timestamp) + " for " + coin);
    }
    return by_coin;
}

std::vector<PriceSeries> load_minute_closes(const std::string& path) {
    auto rows = csv::read_file(path, "coin,timestamp,close");
    std::vector<PriceSeries> series;
    std::unordered_map<std::string, std::size_t> index;
    for (const auto& row : rows) {
        const std::string& coin = row.fields[0];
        if (coin.empty())
            throw ParseError(path + ":" + std::to_string(row.line_number) + ": empty coin field");
        Timestamp ts;
        try {
            ts = parse_iso8601(row.fields[1]);
        } catch (const ParseError& e) {
            throw ParseError(path + ":" + std::to_string(row.line_number) + ": " + e.what());
        }
        double close = csv::parse_number(row, 2, path);

        auto [it, inserted] = index.emplace(coin, series.size());
        if (inserted) series.push_back(PriceSeries{coin, {}, {}});
        PriceSeries& s = series[it->second];
        if (!s.timestamps.empty()) {
            if (ts == s.timestamps.back())
                throw ValidationError(path + ":" + std::to_string(row.line_number) +
                                      ": duplicate timestamp for " + coin);
            if (ts < s.timestamps.back())
                throw ValidationError(path + ":" + std::to_string(row.line_number) +
                                      ": timestamps not increasing for " + coin);
        }
        s.timestamps.push_back(ts);
        s.values.push_back(close);
    }
    for (const auto& s : series) validate(s);
    return series;
}

PriceSeries resample_daily(const PriceSeries& series) {
    if (series.size() == 0) throw DataError("resample_daily: empty series");
    PriceSeries out;
    out.coin = series.coin;
    std::size_t i = 0;
    while (i < series.size()) {
        Timestamp day = day_start(series.timestamps[i]);
        double sum = 0;
        std::size_t count = 0;
        while (i < series.size() && day_start(series.timestamps[i]) == day) {
            sum += series.values[i];
            ++count;
            ++i;
        }
        out.timestamps.push_back(day);
        out.values.push_back(sum / static_cast<double>(count));
    }
    return out;
}

AlignedPanel align_panel(const std::vector<PriceSeries>& series, Resolution resolution) {
    if (series.empty()) throw DataError("align_panel: no series given");
    for (const auto& s : series) validate(s);

    // intersect timestamp sets, seeded by the first series
    std::vector<Timestamp> shared = series[0].timestamps;
    for (std::size_t k = 1; k < series.size() && !shared.empty(); ++k) {
        std::vector<Timestamp> next;
        std::set_intersection(shared.begin(), shared.end(), series[k].timestamps.begin(),
                              series[k].timestamps.end(), std::back_inserter(next));
        shared = std::move(next);
    }
    if (shared.size() < 2) {
        std::string spans;
        for (const auto& s : series)
            spans += "\n  " + s.coin + ": " + format_iso8601(s.timestamps.front()) + " .. " +
                     format_iso8601(s.timestamps.back()) + " (" + std::to_string(s.size()) +
                     " obs)";
        throw DataError("align_panel: timestamp intersection has " +
                        std::to_string(shared.size()) + " instants; input spans:" + spans);
    }

    AlignedPanel panel;
    panel.timestamps = shared;
    panel.resolution = resolution;
    for (const auto& s : series) {
        std::vector<double> col;
        col.reserve(shared.size());
        std::size_t pos = 0;
        for (Timestamp t : shared) {
            while (s.timestamps[pos] < t) ++pos;
            col.push_back(s.values[pos]);
        }
        panel.coins.push_back(s.coin);
        panel.columns.push_back(std::move(col));
    }
    validate(panel);
    return panel;
}

std::vector<PriceSeries> average_price_series(
    const std::map<std::string, std::vector<OhlcvRecord>>& records) {
    std::vector<PriceSeries> out;
    for (const auto& [coin, recs] : records) {
        PriceSeries s;
        s.coin = coin;
        for (const auto& r : recs) {
            s.timestamps.push_back(r.timestamp);
            s.values.push_back(ohlc_average(r));
        }
        out.push_back(std::move(s));
    }
    return out;
}

std::vector<PriceSeries> field_series(
    const std::map<std::string, std::vector<OhlcvRecord>>& records, const std::string& field) {
    double OhlcvRecord::* member = nullptr;
    if (field == "open") member = &OhlcvRecord::open;
    else if (field == "high") member = &OhlcvRecord::high;
    else if (field == "low") member = &OhlcvRecord::low;
    else if (field == "close") member = &OhlcvRecord::close;
    else if (field == "volume") member = &OhlcvRecord::volume;
    else throw DataError("unknown OHLCV field: " + field);

    std::vector<PriceSeries> out;
    for (const auto& [coin, recs] : records) {
        PriceSeries s;
        s.coin = coin;
        for (const auto& r : recs) {
            s.timestamps.push_back(r.timestamp);
            s.values.push_back(r.*member);
        }
        out.push_back(std::move(s));
    }
    return out;
}

void write_panel_csv(const AlignedPanel& panel, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw DataError("cannot write " + path);
    out << "timestamp";
    for (const auto& coin : panel.coins) out << ',' << coin;
    out << '\n';
    for (std::size_t t = 0; t < panel.n_rows(); ++t) {
        out << format_iso8601(panel.timestamps[t]);
        for (std::size_t j = 0; j < panel.n_coins(); ++j)
            out << ',' << csv::format_number(panel.columns[j][t]);
        out << '\n';
    }
}

AlignedPanel read_panel_csv(const std::string& path, Resolution resolution) {
    std::ifstream probe(path);
    if (!probe) throw ParseError("cannot open file: " + path);
    std::string header;
    std::getline(probe, header);
    if (!header.empty() && header.back() == '\r') header.pop_back();
    probe.close();
    if (header.rfind("timestamp,", 0) != 0)
        throw ParseError(path + ": expected panel header starting with 'timestamp,'");

    auto rows = csv::read_file(path, header);
    AlignedPanel panel;
    panel.resolution = resolution;
    std::string rest = header.substr(10);
    std::string coin;
    for (char c : rest) {
        if (c == ',') {
            panel.coins.push_back(coin);
            coin.clear();
        } else {
            coin.push_back(c);
        }
    }
    panel.coins.push_back(coin);
    panel.columns.resize(panel.coins.size());
    for (const auto& row : rows) {
        panel.timestamps.push_back(parse_iso8601(row.fields[0]));
        for (std::size_t j = 0; j < panel.coins.size(); ++j)
            panel.columns[j].push_back(csv::parse_number(row, j + 1, path));
    }
    validate(panel);
    return panel;
}

}  // namespace ingest
}  // namespace cryptoforecast
