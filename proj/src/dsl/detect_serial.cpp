#include "smellhunter/dsl/interpreter.hpp"

namespace smellhunter::dsl {

Expected<std::vector<Detection>, DetectError> detect_serial(const SmellScript& script,
                                                            const inputs::MetricTable& table,
                                                            const inputs::ThresholdConfig& thresholds) {
    auto resolved = resolve_thresholds(script, thresholds);
    if (!resolved) return unexpected(DetectError{std::move(resolved.error()), std::nullopt});

    std::vector<Detection> out;
    for (std::size_t r = 0; r < table.rows.size(); ++r) {
        const MetricValues values = table.row_values(r);
        for (const auto& def : resolved->definitions) {
            auto hit = evaluate(def.condition, values);
            if (!hit) return unexpected(DetectError{{}, std::move(hit.error())});
            if (*hit) out.push_back({table.rows[r].entity_id, def.name, def.severity});
        }
    }
    return out;
}

}  // namespace smellhunter::dsl
