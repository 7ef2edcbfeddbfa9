#include <random>

#include <benchmark/benchmark.h>

#include "smellhunter/dsl/interpreter.hpp"
#include "smellhunter/dsl/parser.hpp"

namespace {

using namespace smellhunter;

constexpr const char* kScript = R"(
smell GodClass {
  severity high
  when wmc >= $WMC_VERY_HIGH and atfd > $FEW and tcc < $ONE_THIRD
}

smell DataClass {
  severity medium
  when (woc < 0.33 and nopa > $FEW) or not (wmc < 10)
}

smell FeatureEnvy {
  severity low
  when atfd > $FEW and laa < 0.33 and fdp <= 5
}
)";

inputs::MetricTable make_table(std::size_t rows) {
    inputs::MetricTable table;
    table.columns = {"wmc", "atfd", "tcc", "woc", "nopa", "laa", "fdp"};
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> dist(0.0, 60.0);
    table.rows.reserve(rows);
    for (std::size_t i = 0; i < rows; ++i) {
        inputs::MetricRow row{"Entity" + std::to_string(i), {}};
        for (std::size_t c = 0; c < table.columns.size(); ++c) row.values.push_back(c == 2 || c == 3 || c == 5 ? dist(rng) / 60.0 : dist(rng));
        table.rows.push_back(std::move(row));
    }
    return table;
}

const inputs::ThresholdConfig kThresholds{{{"WMC_VERY_HIGH", 47.0}, {"FEW", 5.0}, {"ONE_THIRD", 0.33}}};

template <auto Fn>
void run_detect(benchmark::State& state) {
    const auto script = dsl::parse_script(kScript).value();
    const auto table = make_table(static_cast<std::size_t>(state.range(0)));
    for (auto _ : state) {
        auto result = Fn(script, table, kThresholds);
        benchmark::DoNotOptimize(result);
    }
    state.SetItemsProcessed(state.iterations() * state.range(0));
}

}  // namespace

BENCHMARK(run_detect<&dsl::detect>)->Name("detect/parallel")->Range(1 << 10, 1 << 18);
BENCHMARK(run_detect<&dsl::detect_serial>)->Name("detect/serial")->Range(1 << 10, 1 << 18);

BENCHMARK_MAIN();
