#pragma once

#include <json.hpp>

#include "smellhunter/expected.hpp"
#include "smellhunter/store/records.hpp"

namespace smellhunter::store {

nlohmann::json to_json(const inputs::ContextMetadata& c);
nlohmann::json to_json(const DetectionRecord& r);
nlohmann::json to_json(const ExecutionRecord& r);

// Throw nlohmann::json::exception or std::invalid_argument on malformed documents.
inputs::ContextMetadata context_from_json(const nlohmann::json& j);
DetectionRecord detection_from_json(const nlohmann::json& j);
ExecutionRecord execution_from_json(const nlohmann::json& j);

}  // namespace smellhunter::store
