#include "marketstates/core.hpp"

#include <array>
#include <charconv>
#include <cstdio>

namespace marketstates {

namespace {

constexpr std::int64_t kSecondsPerDay = 86400;

// Civil-date conversions on the proleptic Gregorian calendar.
std::int64_t days_from_civil(std::int64_t y, unsigned m, unsigned d) {
    y -= m <= 2;
    const std::int64_t era = (y >= 0 ? y : y - 399) / 400;
    const unsigned yoe = static_cast<unsigned>(y - era * 400);
    const unsigned doy = (153 * (m + (m > 2 ? -3 : 9)) + 2) / 5 + d - 1;
    const unsigned doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
    return era * 146097 + static_cast<std::int64_t>(doe) - 719468;
}

void civil_from_days(std::int64_t z, std::int64_t& y, unsigned& m, unsigned& d) {
    z += 719468;
    const std::int64_t era = (z >= 0 ? z : z - 146096) / 146097;
    const unsigned doe = static_cast<unsigned>(z - era * 146097);
    const unsigned yoe = (doe - doe / 1460 + doe / 36524 - doe / 146096) / 365;
    y = static_cast<std::int64_t>(yoe) + era * 400;
    const unsigned doy = doe - (365 * yoe + yoe / 4 - yoe / 100);
    const unsigned mp = (5 * doy + 2) / 153;
    d = doy - (153 * mp + 2) / 5 + 1;
    m = mp + (mp < 10 ? 3 : -9);
    y += m <= 2;
}

bool parse_int(std::string_view s, int& out) {
    if (s.empty()) return false;
    const auto* first = s.data();
    const auto* last = s.data() + s.size();
    auto [ptr, ec] = std::from_chars(first, last, out);
    return ec == std::errc() && ptr == last;
}

unsigned days_in_month(std::int64_t y, int m) {
    static constexpr std::array<unsigned, 12> lengths = {31, 28, 31, 30, 31, 30,
                                                         31, 31, 30, 31, 30, 31};
    if (m == 2) {
        const bool leap = (y % 4 == 0 && y % 100 != 0) || y % 400 == 0;
        return leap ? 29 : 28;
    }
    return lengths[static_cast<std::size_t>(m - 1)];
}

}  // namespace

Timestamp Timestamp::parse(std::string_view iso) {
    // "YYYY-MM-DD" optionally followed by "THH:MM:SS" (or "THH:MM").
    auto fail = [&]() -> Timestamp {
        throw_validation("invalid ISO-8601 timestamp: '" + std::string(iso) + "'");
    };
    if (iso.size() < 10 || iso[4] != '-' || iso[7] != '-') return fail();
    int year = 0, month = 0, day = 0;
    if (!parse_int(iso.substr(0, 4), year) || !parse_int(iso.substr(5, 2), month) ||
        !parse_int(iso.substr(8, 2), day)) {
        return fail();
    }
    if (month < 1 || month > 12 || day < 1 ||
        day > static_cast<int>(days_in_month(year, month))) {
        return fail();
    }
    int hour = 0, minute = 0, second = 0;
    if (iso.size() > 10) {
        if (iso[10] != 'T' && iso[10] != ' ') return fail();
        std::string_view t = iso.substr(11);
        if (t.size() != 5 && t.size() != 8) return fail();
        if (t[2] != ':' || !parse_int(t.substr(0, 2), hour) ||
            !parse_int(t.substr(3, 2), minute)) {
            return fail();
        }
        if (t.size() == 8) {
            if (t[5] != ':' || !parse_int(t.substr(6, 2), second)) return fail();
        }
        if (hour > 23 || minute > 59 || second > 59) return fail();
    }
    const std::int64_t days = days_from_civil(year, static_cast<unsigned>(month),
                                              static_cast<unsigned>(day));
    return Timestamp(days * kSecondsPerDay + hour * 3600 + minute * 60 + second);
}

std::string Timestamp::to_string() const {
    std::int64_t days = days_since_epoch();
    std::int64_t sod = seconds_ - days * kSecondsPerDay;
    std::int64_t y;
    unsigned m, d;
    civil_from_days(days, y, m, d);
    char buf[32];
    if (sod == 0) {
        std::snprintf(buf, sizeof(buf), "%04lld-%02u-%02u", static_cast<long long>(y), m, d);
    } else {
        std::snprintf(buf, sizeof(buf), "%04lld-%02u-%02uT%02d:%02d:%02d",
                      static_cast<long long>(y), m, d, static_cast<int>(sod / 3600),
                      static_cast<int>((sod / 60) % 60), static_cast<int>(sod % 60));
    }
    return buf;
}

std::string Timestamp::to_file_label() const {
    std::string s = to_string();
    std::string out;
    out.reserve(s.size());
    for (char c : s) {
        if (c != ':') out.push_back(c);
    }
    return out;
}

std::int64_t Timestamp::days_since_epoch() const noexcept {
    std::int64_t d = seconds_ / kSecondsPerDay;
    if (seconds_ < 0 && seconds_ % kSecondsPerDay != 0) --d;
    return d;
}

int Timestamp::minute_of_day() const noexcept {
    const std::int64_t sod = seconds_ - days_since_epoch() * kSecondsPerDay;
    return static_cast<int>(sod / 60);
}

Timestamp Timestamp::start_of_day() const noexcept {
    return Timestamp(days_since_epoch() * kSecondsPerDay);
}

Timestamp Timestamp::end_of_day() const noexcept {
    return Timestamp(days_since_epoch() * kSecondsPerDay + kSecondsPerDay - 1);
}

bool Timestamp::has_time_of_day() const noexcept {
    return seconds_ != days_since_epoch() * kSecondsPerDay;
}

}  // namespace marketstates
