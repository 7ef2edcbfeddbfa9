#include "smellhunter/time.hpp"

#include <charconv>
#include <cstdio>
#include <ctime>

namespace smellhunter {

Timestamp now_utc() {
    return std::chrono::time_point_cast<std::chrono::microseconds>(std::chrono::system_clock::now());
}

std::int64_t to_micros(Timestamp t) { return t.time_since_epoch().count(); }

Timestamp from_micros(std::int64_t us) { return Timestamp{std::chrono::microseconds{us}}; }

std::string format_timestamp(Timestamp t) {
    using namespace std::chrono;
    auto us = to_micros(t);
    auto secs = us / 1'000'000;
    auto frac = us % 1'000'000;
    if (frac < 0) {
        frac += 1'000'000;
        --secs;
    }
    std::time_t tt = static_cast<std::time_t>(secs);
    std::tm tm{};
    gmtime_r(&tt, &tm);
    char buf[96];
    std::snprintf(buf, sizeof buf, "%04d-%02d-%02dT%02d:%02d:%02d.%06lldZ", tm.tm_year + 1900, tm.tm_mon + 1,
                  tm.tm_mday, tm.tm_hour, tm.tm_min, tm.tm_sec, static_cast<long long>(frac));
    return buf;
}

namespace {

bool read_int(std::string_view s, std::size_t pos, std::size_t len, int& out) {
    if (pos + len > s.size()) return false;
    for (std::size_t i = pos; i < pos + len; ++i)
        if (s[i] < '0' || s[i] > '9') return false;
    auto r = std::from_chars(s.data() + pos, s.data() + pos + len, out);
    return r.ec == std::errc{};
}

}  // namespace

std::optional<Timestamp> parse_timestamp(std::string_view s) {
    int year, mon, day, hour, min, sec;
    if (s.size() < 20) return std::nullopt;
    if (!read_int(s, 0, 4, year) || s[4] != '-' || !read_int(s, 5, 2, mon) || s[7] != '-' ||
        !read_int(s, 8, 2, day) || s[10] != 'T' || !read_int(s, 11, 2, hour) || s[13] != ':' ||
        !read_int(s, 14, 2, min) || s[16] != ':' || !read_int(s, 17, 2, sec))
        return std::nullopt;
    std::size_t pos = 19;
    long long frac = 0;
    if (s[pos] == '.') {
        ++pos;
        std::size_t digits = 0;
        while (pos < s.size() && s[pos] >= '0' && s[pos] <= '9') {
            if (digits == 6) return std::nullopt;
            frac = frac * 10 + (s[pos] - '0');
            ++digits;
            ++pos;
        }
        if (digits == 0) return std::nullopt;
        for (; digits < 6; ++digits) frac *= 10;
    }
    if (pos + 1 != s.size() || s[pos] != 'Z') return std::nullopt;
    if (mon < 1 || mon > 12 || day < 1 || day > 31 || hour > 23 || min > 59 || sec > 60) return std::nullopt;

    std::tm tm{};
    tm.tm_year = year - 1900;
    tm.tm_mon = mon - 1;
    tm.tm_mday = day;
    tm.tm_hour = hour;
    tm.tm_min = min;
    tm.tm_sec = sec;
    std::time_t secs = timegm(&tm);
    return from_micros(static_cast<std::int64_t>(secs) * 1'000'000 + frac);
}

}  // namespace smellhunter
