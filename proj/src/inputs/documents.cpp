#include <array>
#include <cmath>
#include <set>

#include <json.hpp>

#include "smellhunter/dsl/lexer.hpp"
#include "smellhunter/inputs/parse.hpp"

namespace smellhunter::inputs {

using nlohmann::json;

namespace {

std::pair<std::size_t, std::size_t> line_col(std::string_view text, std::size_t byte) {
    std::size_t line = 1, col = 1;
    for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
        if (text[i] == '\n') {
            ++line;
            col = 1;
        } else {
            ++col;
        }
    }
    return {line, col};
}

// Parses a top-level object, flagging repeated top-level keys (the library would keep the last one).
std::optional<json> parse_object(std::string_view text, InputErrors& errors) {
    std::set<std::string> keys;
    std::vector<std::string> dups;
    std::optional<std::string> last_key;
    auto cb = [&](int depth, json::parse_event_t event, json& parsed) {
        if (event == json::parse_event_t::key && depth == 1) {
            auto k = parsed.get<std::string>();
            if (!keys.insert(k).second) dups.push_back(k);
            last_key = k;
        }
        return true;
    };
    json doc;
    try {
        doc = json::parse(text.begin(), text.end(), cb);
    } catch (const json::parse_error& e) {
        auto [line, col] = line_col(text, e.byte > 0 ? e.byte - 1 : 0);
        std::string what = e.what();
        if (auto p = what.find("parse error"); p != std::string::npos) what = what.substr(p);
        errors.push_back({InputErrorKind::malformed, std::nullopt, std::nullopt, line, col, what});
        return std::nullopt;
    } catch (const json::out_of_range&) {
        // number literal too large for a double
        if (last_key)
            errors.push_back({InputErrorKind::non_finite, std::nullopt, last_key, std::nullopt, std::nullopt,
                              "number is out of range"});
        else
            errors.push_back({InputErrorKind::non_finite, std::nullopt, std::nullopt, 1, 1, "number is out of range"});
        return std::nullopt;
    }
    if (!doc.is_object()) {
        errors.push_back({InputErrorKind::malformed, std::nullopt, std::nullopt, 1, 1, "document must be an object"});
        return std::nullopt;
    }
    for (const auto& k : dups)
        errors.push_back({InputErrorKind::duplicate_key, std::nullopt, k, std::nullopt, std::nullopt,
                          "duplicate key '" + k + "'"});
    return doc;
}

const std::array<const char*, 5> kRequiredKeys = {"user_id", "org_id", "project_id", "file_path", "language"};

void check_coordinate(const char* key, double v, double limit, InputErrors& errors) {
    if (!std::isfinite(v) || v < -limit || v > limit)
        errors.push_back({InputErrorKind::out_of_range, std::nullopt, std::string(key), std::nullopt, std::nullopt,
                          std::string(key) + " must lie in [-" + std::to_string(static_cast<int>(limit)) + ", " +
                              std::to_string(static_cast<int>(limit)) + "]"});
}

}  // namespace

Expected<ThresholdConfig, InputErrors> parse_thresholds(std::string_view bytes) {
    InputErrors errors;
    auto doc = parse_object(bytes, errors);
    if (!doc) return unexpected(std::move(errors));

    ThresholdConfig cfg;
    for (const auto& [key, value] : doc->items()) {
        if (!dsl::is_identifier(key)) {
            errors.push_back({InputErrorKind::invalid_identifier, std::nullopt, key, std::nullopt, std::nullopt,
                              "threshold name '" + key + "' is not a valid identifier"});
            continue;
        }
        if (!value.is_number()) {
            errors.push_back({InputErrorKind::non_numeric, std::nullopt, key, std::nullopt, std::nullopt,
                              "threshold '" + key + "' must be a number"});
            continue;
        }
        const double v = value.get<double>();
        if (!std::isfinite(v)) {
            errors.push_back({InputErrorKind::non_finite, std::nullopt, key, std::nullopt, std::nullopt,
                              "threshold '" + key + "' is not finite"});
            continue;
        }
        cfg.entries.emplace(key, v);
    }
    if (!errors.empty()) return unexpected(std::move(errors));
    return cfg;
}

Expected<ContextMetadata, InputErrors> parse_metadata(std::string_view bytes) {
    InputErrors errors;
    auto doc = parse_object(bytes, errors);
    if (!doc) return unexpected(std::move(errors));

    ContextMetadata meta;
    std::array<std::string*, 5> targets = {&meta.user_id, &meta.org_id, &meta.project_id, &meta.file_path,
                                           &meta.language};
    for (std::size_t i = 0; i < kRequiredKeys.size(); ++i) {
        const char* key = kRequiredKeys[i];
        auto it = doc->find(key);
        if (it == doc->end()) {
            errors.push_back({InputErrorKind::missing_key, std::nullopt, std::string(key), std::nullopt, std::nullopt,
                              std::string("missing required key '") + key + "'"});
        } else if (!it->is_string()) {
            errors.push_back({InputErrorKind::wrong_type, std::nullopt, std::string(key), std::nullopt, std::nullopt,
                              std::string("'") + key + "' must be a string"});
        } else {
            *targets[i] = it->get<std::string>();
        }
    }

    std::optional<double> lat, lon;
    for (const char* key : {"latitude", "longitude"}) {
        auto it = doc->find(key);
        if (it == doc->end()) continue;
        if (!it->is_number()) {
            errors.push_back({InputErrorKind::wrong_type, std::nullopt, std::string(key), std::nullopt, std::nullopt,
                              std::string("'") + key + "' must be a number"});
            continue;
        }
        (std::string_view(key) == "latitude" ? lat : lon) = it->get<double>();
    }

    for (const auto& [key, value] : doc->items()) {
        bool known = key == "latitude" || key == "longitude";
        for (const char* k : kRequiredKeys) known = known || key == k;
        if (!known)
            errors.push_back({InputErrorKind::unknown_key, std::nullopt, key, std::nullopt, std::nullopt,
                              "unknown key '" + key + "'"});
    }

    bool coords_typed = true;
    for (const char* key : {"latitude", "longitude"}) {
        auto it = doc->find(key);
        if (it != doc->end() && !it->is_number()) coords_typed = false;
    }
    if (lat && lon) meta.location = GeoPoint{*lat, *lon};
    else if (coords_typed && (lat || lon))
        errors.push_back({InputErrorKind::unpaired_coordinate, std::nullopt,
                          std::string(lat ? "latitude" : "longitude"), std::nullopt, std::nullopt,
                          "latitude and longitude must be given together"});

    // Range and non-empty checks are shared with programmatic requests; skip fields already reported.
    for (auto& e : check_metadata(meta)) {
        bool seen = false;
        for (const auto& prev : errors) seen = seen || prev.field == e.field;
        if (!seen) errors.push_back(std::move(e));
    }
    if (!errors.empty()) return unexpected(std::move(errors));
    return meta;
}

InputErrors check_thresholds(const ThresholdConfig& config) {
    InputErrors errors;
    for (const auto& [k, v] : config.entries) {
        if (!dsl::is_identifier(k))
            errors.push_back({InputErrorKind::invalid_identifier, std::nullopt, k, std::nullopt, std::nullopt,
                              "threshold name is not a valid identifier"});
        if (!std::isfinite(v))
            errors.push_back({InputErrorKind::non_finite, std::nullopt, k, std::nullopt, std::nullopt,
                              "threshold value is not finite"});
    }
    return errors;
}

InputErrors check_metadata(const ContextMetadata& meta) {
    InputErrors errors;
    auto required = [&](const char* key, const std::string& v) {
        if (v.empty())
            errors.push_back({InputErrorKind::empty_value, std::nullopt, std::string(key), std::nullopt, std::nullopt,
                              std::string("'") + key + "' must not be empty"});
    };
    required("user_id", meta.user_id);
    required("org_id", meta.org_id);
    required("project_id", meta.project_id);
    if (meta.location) {
        check_coordinate("latitude", meta.location->latitude, 90, errors);
        check_coordinate("longitude", meta.location->longitude, 180, errors);
    }
    return errors;
}

std::string emit_thresholds(const ThresholdConfig& config) {
    json doc = json::object();
    for (const auto& [k, v] : config.entries) doc[k] = v;
    return doc.dump();
}

std::string emit_metadata(const ContextMetadata& meta) {
    json doc = {{"user_id", meta.user_id},       {"org_id", meta.org_id},     {"project_id", meta.project_id},
                {"file_path", meta.file_path}, {"language", meta.language}};
    if (meta.location) {
        doc["latitude"] = meta.location->latitude;
        doc["longitude"] = meta.location->longitude;
    }
    return doc.dump();
}

}  // namespace smellhunter::inputs
