#include "marketstates/ingest.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <istream>
#include <map>
#include <ostream>
#include <set>
#include <unordered_map>

namespace marketstates::ingest {

namespace {

std::vector<std::string> split(const std::string& line, char delimiter) {
    std::vector<std::string> fields;
    std::string token;
    for (char ch : line) {
        if (ch == delimiter) {
            fields.push_back(token);
            token.clear();
        } else {
            token.push_back(ch);
        }
    }
    fields.push_back(token);
    return fields;
}

std::string trim(const std::string& value) {
    const auto first = value.find_first_not_of(" \t\r\n");
    if (first == std::string::npos) return {};
    const auto last = value.find_last_not_of(" \t\r\n");
    return value.substr(first, last - first + 1);
}

bool parse_double(const std::string& text, double& out) {
    const char* first = text.data();
    const char* last = text.data() + text.size();
    auto [ptr, ec] = std::from_chars(first, last, out);
    return ec == std::errc() && ptr == last;
}

}  // namespace

void PriceSeries::validate() const {
    if (timestamps.size() != prices.size()) {
        throw_validation("price series '" + symbol + "': timestamp/price length mismatch");
    }
    for (std::size_t i = 0; i < prices.size(); ++i) {
        if (!(prices[i] > 0.0) || !std::isfinite(prices[i])) {
            throw_validation("price series '" + symbol + "': non-positive price at " +
                             timestamps[i].to_string());
        }
        if (i > 0 && !(timestamps[i - 1] < timestamps[i])) {
            throw_validation("price series '" + symbol +
                             "': timestamps not strictly increasing at " +
                             timestamps[i].to_string());
        }
    }
}

void ReturnPanel::validate() const {
    if (series_count() < 2) throw_validation("return panel needs at least 2 series");
    if (sample_count() < 2) throw_validation("return panel needs at least 2 timestamps");
    if (values.rows() != series_count() || values.cols() != sample_count()) {
        throw_validation("return panel dimensions do not match symbol/timestamp lists");
    }
    for (std::size_t t = 1; t < timestamps.size(); ++t) {
        if (!(timestamps[t - 1] < timestamps[t])) {
            throw_validation("return panel timestamps not strictly increasing");
        }
    }
}

std::vector<PriceSeries> parse_price_table(std::istream& in, const TableFormat& format) {
    std::string line;
    if (!std::getline(in, line)) {
        throw_validation("price table is empty (missing header)");
    }
    const auto header = split(line, format.delimiter);
    auto column_of = [&](const std::string& name) {
        for (std::size_t i = 0; i < header.size(); ++i) {
            if (trim(header[i]) == name) return i;
        }
        throw_validation("price table header lacks required column '" + name + "'");
    };
    const std::size_t date_col = column_of(format.date_column);
    const std::size_t symbol_col = column_of(format.symbol_column);
    const std::size_t price_col = column_of(format.price_column);

    struct Row {
        Timestamp ts;
        double price;
    };
    std::map<std::string, std::vector<Row>> by_symbol;
    std::size_t line_number = 1;
    while (std::getline(in, line)) {
        ++line_number;
        if (trim(line).empty()) continue;
        const auto fields = split(line, format.delimiter);
        if (fields.size() != header.size()) {
            throw_validation("price table line " + std::to_string(line_number) +
                             ": expected " + std::to_string(header.size()) +
                             " fields, got " + std::to_string(fields.size()));
        }
        Timestamp ts;
        try {
            ts = Timestamp::parse(trim(fields[date_col]));
        } catch (const Error&) {
            throw_validation("price table line " + std::to_string(line_number) +
                             ": unparseable date '" + trim(fields[date_col]) + "'");
        }
        const std::string symbol = trim(fields[symbol_col]);
        if (symbol.empty()) {
            throw_validation("price table line " + std::to_string(line_number) +
                             ": empty symbol");
        }
        double price = 0.0;
        if (!parse_double(trim(fields[price_col]), price)) {
            throw_validation("price table line " + std::to_string(line_number) +
                             ": unparseable price '" + trim(fields[price_col]) + "'");
        }
        if (!(price > 0.0) || !std::isfinite(price)) {
            throw_validation("price table line " + std::to_string(line_number) +
                             ": non-positive price for '" + symbol + "'");
        }
        by_symbol[symbol].push_back({ts, price});
    }

    std::vector<PriceSeries> result;
    result.reserve(by_symbol.size());
    for (auto& [symbol, rows] : by_symbol) {
        std::stable_sort(rows.begin(), rows.end(),
                         [](const Row& a, const Row& b) { return a.ts < b.ts; });
        PriceSeries series;
        series.symbol = symbol;
        series.timestamps.reserve(rows.size());
        series.prices.reserve(rows.size());
        for (const Row& row : rows) {
            if (!series.timestamps.empty() && series.timestamps.back() == row.ts) {
                throw_validation("duplicate timestamp " + row.ts.to_string() +
                                 " for symbol '" + symbol + "'");
            }
            series.timestamps.push_back(row.ts);
            series.prices.push_back(row.price);
        }
        series.validate();
        result.push_back(std::move(series));
    }
    return result;
}

void write_price_table(std::ostream& out, const std::vector<PriceSeries>& series,
                       const TableFormat& format) {
    out << format.date_column << format.delimiter << format.symbol_column
        << format.delimiter << format.price_column << '\n';
    char buf[64];
    for (const PriceSeries& s : series) {
        for (std::size_t i = 0; i < s.timestamps.size(); ++i) {
            std::snprintf(buf, sizeof(buf), "%.17g", s.prices[i]);
            out << s.timestamps[i].to_string() << format.delimiter << s.symbol
                << format.delimiter << buf << '\n';
        }
    }
}

Duration Duration::parse(std::string_view text) {
    if (text.size() < 2) throw_validation("invalid duration '" + std::string(text) + "'");
    const char unit = text.back();
    std::int64_t n = 0;
    const char* first = text.data();
    const char* last = text.data() + text.size() - 1;
    auto [ptr, ec] = std::from_chars(first, last, n);
    if (ec != std::errc() || ptr != last || n <= 0) {
        throw_validation("invalid duration '" + std::string(text) + "'");
    }
    switch (unit) {
        case 'd': return trading_days(n);
        case 'h': return seconds(n * 3600);
        case 'm': return seconds(n * 60);
        case 's': return seconds(n);
        default:
            throw_validation("invalid duration unit in '" + std::string(text) +
                             "' (want d, h, m or s)");
    }
}

std::string Duration::to_string() const {
    if (unit == Unit::TradingDays) return std::to_string(count) + "d";
    if (count % 3600 == 0) return std::to_string(count / 3600) + "h";
    if (count % 60 == 0) return std::to_string(count / 60) + "m";
    return std::to_string(count) + "s";
}

SessionWindow SessionWindow::parse(std::string_view text) {
    auto fail = [&]() -> SessionWindow {
        throw_validation("invalid session window '" + std::string(text) +
                         "' (want HH:MM-HH:MM)");
    };
    if (text.size() != 11 || text[5] != '-') return fail();
    auto minutes = [&](std::string_view part) {
        if (part[2] != ':') fail();
        int h = 0, m = 0;
        auto ok = [](std::string_view s, int& out) {
            auto [p, e] = std::from_chars(s.data(), s.data() + s.size(), out);
            return e == std::errc() && p == s.data() + s.size();
        };
        if (!ok(part.substr(0, 2), h) || !ok(part.substr(3, 2), m) || h > 23 || m > 59) {
            fail();
        }
        return h * 60 + m;
    };
    SessionWindow w;
    w.start_minute = minutes(text.substr(0, 5));
    w.end_minute = minutes(text.substr(6, 5));
    if (w.end_minute < w.start_minute) fail();
    return w;
}

ReturnSeries compute_returns(const PriceSeries& series, const ReturnConfig& cfg) {
    series.validate();
    if (cfg.horizon.count <= 0 || cfg.stride.count <= 0) {
        throw_validation("return horizon and stride must be positive");
    }
    if (series.prices.size() < 2) {
        throw_validation("price series '" + series.symbol +
                         "' has fewer than 2 points; no returns computable");
    }

    ReturnSeries out;
    out.symbol = series.symbol;

    if (cfg.horizon.unit == Duration::Unit::TradingDays &&
        cfg.stride.unit == Duration::Unit::TradingDays) {
        // Grid steps: stride rows apart; horizon looks ahead by rows.
        const std::size_t h = static_cast<std::size_t>(cfg.horizon.count);
        const std::size_t s = static_cast<std::size_t>(cfg.stride.count);
        for (std::size_t i = 0; i + h < series.prices.size(); i += s) {
            const Timestamp t = series.timestamps[i];
            if (cfg.session &&
                (t.minute_of_day() < cfg.session->start_minute ||
                 t.minute_of_day() > cfg.session->end_minute)) {
                continue;
            }
            out.timestamps.push_back(t);
            out.values.push_back((series.prices[i + h] - series.prices[i]) /
                                 series.prices[i]);
        }
    } else if (cfg.horizon.unit == Duration::Unit::Seconds &&
               cfg.stride.unit == Duration::Unit::Seconds) {
        // Wall-clock grid anchored at the session start of each observed day.
        const SessionWindow session = cfg.session.value_or(SessionWindow{0, 24 * 60 - 1});
        std::unordered_map<std::int64_t, std::size_t> index;
        index.reserve(series.timestamps.size());
        for (std::size_t i = 0; i < series.timestamps.size(); ++i) {
            index.emplace(series.timestamps[i].seconds(), i);
        }
        std::set<std::int64_t> days;
        for (const Timestamp& ts : series.timestamps) days.insert(ts.days_since_epoch());
        for (std::int64_t day : days) {
            const std::int64_t base = day * 86400;
            for (std::int64_t sec = base + session.start_minute * 60;
                 sec < base + (session.end_minute + 1) * 60; sec += cfg.stride.count) {
                auto it = index.find(sec);
                if (it == index.end()) continue;
                auto jt = index.find(sec + cfg.horizon.count);
                if (jt == index.end()) continue;
                const double s0 = series.prices[it->second];
                const double s1 = series.prices[jt->second];
                out.timestamps.push_back(Timestamp(sec));
                out.values.push_back((s1 - s0) / s0);
            }
        }
    } else {
        throw_validation("return horizon and stride must use the same unit kind");
    }

    if (out.values.empty()) {
        throw_validation("no computable return for '" + series.symbol +
                         "' with the given horizon/stride");
    }
    return out;
}

ReturnPanel align_universe(const std::vector<ReturnSeries>& series, const DateRange& range) {
    if (!(range.start <= range.end)) throw_validation("alignment range is empty");

    // Grid: every instant observed by any series inside the range.
    std::set<Timestamp> grid_set;
    for (const ReturnSeries& s : series) {
        for (const Timestamp& t : s.timestamps) {
            if (range.contains(t)) grid_set.insert(t);
        }
    }
    if (grid_set.empty()) {
        throw_validation("alignment range " + range.start.to_string() + " .. " +
                         range.end.to_string() + " contains no observations");
    }
    std::vector<Timestamp> grid(grid_set.begin(), grid_set.end());

    struct Survivor {
        const ReturnSeries* series;
        std::vector<std::size_t> at;  // index of each grid instant in the series
    };
    std::vector<Survivor> survivors;
    for (const ReturnSeries& s : series) {
        std::unordered_map<std::int64_t, std::size_t> index;
        index.reserve(s.timestamps.size());
        for (std::size_t i = 0; i < s.timestamps.size(); ++i) {
            index.emplace(s.timestamps[i].seconds(), i);
        }
        Survivor sv{&s, {}};
        sv.at.reserve(grid.size());
        bool complete = true;
        for (const Timestamp& t : grid) {
            auto it = index.find(t.seconds());
            if (it == index.end()) {
                complete = false;
                break;
            }
            sv.at.push_back(it->second);
        }
        if (complete) survivors.push_back(std::move(sv));
    }
    if (survivors.size() < 2) {
        throw_validation("fewer than 2 symbols cover the full grid (" +
                         std::to_string(survivors.size()) + " survive)");
    }
    std::sort(survivors.begin(), survivors.end(), [](const Survivor& a, const Survivor& b) {
        return a.series->symbol < b.series->symbol;
    });

    ReturnPanel panel;
    panel.timestamps = std::move(grid);
    panel.values = Matrix(survivors.size(), panel.timestamps.size());
    panel.normalized = true;
    for (std::size_t k = 0; k < survivors.size(); ++k) {
        panel.symbols.push_back(survivors[k].series->symbol);
        panel.normalized = panel.normalized && survivors[k].series->normalized;
        for (std::size_t t = 0; t < panel.timestamps.size(); ++t) {
            panel.values(k, t) = survivors[k].series->values[survivors[k].at[t]];
        }
    }
    panel.validate();
    return panel;
}

ReturnPanel align_universe(const std::vector<ReturnSeries>& series) {
    Timestamp lo, hi;
    bool any = false;
    for (const ReturnSeries& s : series) {
        for (const Timestamp& t : s.timestamps) {
            if (!any || t < lo) lo = t;
            if (!any || hi < t) hi = t;
            any = true;
        }
    }
    if (!any) throw_validation("no return observations to align");
    return align_universe(series, DateRange{lo, hi});
}

}  // namespace marketstates::ingest
