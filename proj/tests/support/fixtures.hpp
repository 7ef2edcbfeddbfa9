#pragma once

#include <map>
#include <memory>
#include <string>

#include "smellhunter/inputs/model.hpp"
#include "smellhunter/inputs/parse.hpp"

namespace smellhunter::fixtures {

inline constexpr const char* kGodClassScript =
    "smell GodClass { severity high when wmc >= $WMC_VERY_HIGH and atfd > $FEW and tcc < $ONE_THIRD }";

inline constexpr const char* kGodClassMetrics =
    "entity_id,wmc,atfd,tcc\n"
    "OrderManager,50,6,0.2\n"
    "Invoice,47,5,0.1\n"
    "Customer,12,1,0.7\n";

inline constexpr const char* kGodClassThresholds = R"({"WMC_VERY_HIGH": 47, "FEW": 5, "ONE_THIRD": 0.33})";

inline constexpr const char* kMetadata =
    R"({"user_id": "dev-7", "org_id": "acme", "project_id": "shop", "file_path": "src/main/java/shop/OrderManager.java", "language": "java", "latitude": -23.55, "longitude": -46.63})";

inline std::map<std::string, std::string> god_class_parts() {
    return {{"script", kGodClassScript},
            {"metrics", kGodClassMetrics},
            {"thresholds", kGodClassThresholds},
            {"metadata", kMetadata}};
}

// Builds a request from wire texts; the texts must be structurally valid.
inline inputs::AnalysisRequest make_request(const std::string& script, const std::string& metrics,
                                            const std::string& thresholds, const std::string& metadata = kMetadata) {
    inputs::AnalysisRequest r;
    r.script_source = script;
    r.table = inputs::parse_metric_table(metrics).value();
    r.thresholds = inputs::parse_thresholds(thresholds).value();
    r.context = inputs::parse_metadata(metadata).value();
    r.submitted_at = now_utc();
    return r;
}

inline inputs::AnalysisRequest god_class_request() {
    return make_request(kGodClassScript, kGodClassMetrics, kGodClassThresholds);
}

}  // namespace smellhunter::fixtures
