#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "marketstates/core.hpp"

namespace marketstates::ingest {

// Price history of a single instrument. Timestamps strictly increasing,
// prices strictly positive, both the same length.
struct PriceSeries {
    std::string symbol;
    std::vector<Timestamp> timestamps;
    std::vector<double> prices;

    void validate() const;
};

struct ReturnSeries {
    std::string symbol;
    std::vector<Timestamp> timestamps;  // instant t of each return
    std::vector<double> values;
    bool normalized = false;
};

// Rectangular K x T panel of aligned returns. Row i holds series symbols[i].
struct ReturnPanel {
    std::vector<std::string> symbols;
    std::vector<Timestamp> timestamps;
    Matrix values;  // K x T, no missing cells
    bool normalized = false;

    std::size_t series_count() const noexcept { return symbols.size(); }
    std::size_t sample_count() const noexcept { return timestamps.size(); }
    void validate() const;
};

// Long-format price table layout. Columns are located by header name.
struct TableFormat {
    char delimiter = ',';
    std::string date_column = "date";
    std::string symbol_column = "symbol";
    std::string price_column = "price";
};

// Parses `date,symbol,price` rows into one PriceSeries per symbol, each
// sorted by timestamp. Rejects malformed rows (with line number),
// non-positive prices and duplicate (date,symbol) pairs.
std::vector<PriceSeries> parse_price_table(std::istream& in, const TableFormat& format = {});

// Inverse of parse_price_table: emits rows grouped by symbol, sorted by time.
void write_price_table(std::ostream& out, const std::vector<PriceSeries>& series,
                       const TableFormat& format = {});

// Return horizon / sampling step. Trading-day units step along the series'
// own timestamp grid; wall-clock units require exact instants to exist.
struct Duration {
    enum class Unit { TradingDays, Seconds };

    Unit unit = Unit::TradingDays;
    std::int64_t count = 1;

    static Duration trading_days(std::int64_t n) { return {Unit::TradingDays, n}; }
    static Duration seconds(std::int64_t n) { return {Unit::Seconds, n}; }

    // Accepts "<n>d" (trading days), "<n>h", "<n>m", "<n>s" (wall clock).
    static Duration parse(std::string_view text);
    std::string to_string() const;

    bool operator==(const Duration&) const = default;
};

// Intraday session, minutes from midnight, inclusive on both ends.
struct SessionWindow {
    int start_minute = 10 * 60 + 45;
    int end_minute = 14 * 60 + 45;

    // Accepts "HH:MM-HH:MM".
    static SessionWindow parse(std::string_view text);
};

struct ReturnConfig {
    Duration horizon = Duration::trading_days(1);
    Duration stride = Duration::trading_days(1);
    std::optional<SessionWindow> session;  // restricts emission instants t
};

// r(t) = (S(t+dt) - S(t)) / S(t) at every stride instant t where both
// endpoints exist. Throws when no return is computable.
ReturnSeries compute_returns(const PriceSeries& series, const ReturnConfig& cfg);

// Builds the aligned panel over the range: the grid is the sorted set of
// all observed instants in [range.start, range.end]; only symbols with a
// return at every grid instant survive.
ReturnPanel align_universe(const std::vector<ReturnSeries>& series, const DateRange& range);

// Convenience: range spanning all observed instants.
ReturnPanel align_universe(const std::vector<ReturnSeries>& series);

}  // namespace marketstates::ingest
