#include <cstdint>
#include <omp.h>

#include "program.hpp"

namespace smellhunter::dsl {

Expected<std::vector<Detection>, DetectError> detect(const SmellScript& script, const inputs::MetricTable& table,
                                                     const inputs::ThresholdConfig& thresholds) {
    auto resolved = resolve_thresholds(script, thresholds);
    if (!resolved) return unexpected(DetectError{std::move(resolved.error()), std::nullopt});

    const auto& defs = resolved->definitions;
    std::vector<detail::Program> programs;
    programs.reserve(defs.size());
    std::size_t max_stack = 1;
    for (const auto& def : defs) {
        auto prog = detail::compile(def.condition, table);
        if (!prog) return unexpected(DetectError{{}, std::move(prog.error())});
        max_stack = std::max(max_stack, prog->max_stack);
        programs.push_back(std::move(*prog));
    }

    // Ragged rows would read out of bounds in the kernel; the serial path reports them instead.
    for (const auto& row : table.rows)
        if (row.values.size() != table.columns.size()) return detect_serial(script, table, thresholds);

    const auto n_rows = static_cast<std::int64_t>(table.rows.size());
    const std::size_t n_defs = programs.size();
    std::vector<std::uint8_t> hits(table.rows.size() * n_defs, 0);

#pragma omp parallel
    {
        std::vector<std::uint8_t> stack(max_stack);
#pragma omp for schedule(static)
        for (std::int64_t r = 0; r < n_rows; ++r) {
            const auto& values = table.rows[static_cast<std::size_t>(r)].values;
            for (std::size_t d = 0; d < n_defs; ++d)
                hits[static_cast<std::size_t>(r) * n_defs + d] = detail::run(programs[d], values, stack) ? 1 : 0;
        }
    }

    std::vector<Detection> out;
    for (std::size_t r = 0; r < table.rows.size(); ++r)
        for (std::size_t d = 0; d < n_defs; ++d)
            if (hits[r * n_defs + d]) out.push_back({table.rows[r].entity_id, defs[d].name, defs[d].severity});
    return out;
}

}  // namespace smellhunter::dsl
