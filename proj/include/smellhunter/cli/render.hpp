#pragma once

#include <string>

#include <json.hpp>

namespace smellhunter::cli {

enum class OutputFormat { table, document };

// Pure renderings of gateway response bodies.
std::string render_detections(const nlohmann::json& page, OutputFormat format);
std::string render_histogram(const nlohmann::json& histogram, OutputFormat format);
std::string render_history(const nlohmann::json& page, OutputFormat format);
std::string render_status(const nlohmann::json& status, OutputFormat format);
std::string render_trace(const nlohmann::json& trace, OutputFormat format);

// Left-aligned columns separated by two spaces; no trailing whitespace.
std::string render_table(const std::vector<std::string>& header, const std::vector<std::vector<std::string>>& rows);

}  // namespace smellhunter::cli
