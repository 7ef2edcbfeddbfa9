#pragma once

#include <chrono>
#include <optional>
#include <string>
#include <string_view>

namespace smellhunter {

// All timestamps are UTC with microsecond resolution.
using Timestamp = std::chrono::time_point<std::chrono::system_clock, std::chrono::microseconds>;

Timestamp now_utc();

// 2026-10-19T08:30:00.123456Z
std::string format_timestamp(Timestamp t);

// Accepts YYYY-MM-DDTHH:MM:SS[.f{1,6}]Z.
std::optional<Timestamp> parse_timestamp(std::string_view text);

std::int64_t to_micros(Timestamp t);
Timestamp from_micros(std::int64_t us);

}  // namespace smellhunter
