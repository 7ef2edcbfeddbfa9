#include "smellhunter/inputs/model.hpp"

namespace smellhunter::inputs {

std::optional<std::size_t> MetricTable::column_index(std::string_view name) const {
    for (std::size_t i = 0; i < columns.size(); ++i)
        if (columns[i] == name) return i;
    return std::nullopt;
}

std::unordered_map<std::string, double> MetricTable::row_values(std::size_t row) const {
    std::unordered_map<std::string, double> out;
    const auto& r = rows.at(row);
    for (std::size_t i = 0; i < columns.size() && i < r.values.size(); ++i) out.emplace(columns[i], r.values[i]);
    return out;
}

}  // namespace smellhunter::inputs
