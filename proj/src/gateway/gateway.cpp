#include "smellhunter/gateway/gateway.hpp"

#include <charconv>
#include <cmath>
#include <set>

#include "smellhunter/inputs/parse.hpp"
#include "smellhunter/store/record_codec.hpp"

namespace smellhunter::gateway {

using nlohmann::json;

std::string_view to_string(Stage s) {
    switch (s) {
        case Stage::requested: return "requested";
        case Stage::validated: return "validated";
        case Stage::interpreted: return "interpreted";
        case Stage::persisted: return "persisted";
        case Stage::failed: return "failed";
    }
    return "requested";
}

std::optional<StatusView> status_from_trace(const std::vector<bus::EventEnvelope>& trace,
                                            const std::optional<bus::Annotation>& halt) {
    if (trace.empty()) return std::nullopt;
    StatusView v;
    v.correlation_id = trace.front().correlation_id;
    for (const auto& e : trace) {
        switch (e.kind) {
            case bus::EventKind::analysis_requested: v.stage = Stage::requested; break;
            case bus::EventKind::validation_completed: v.stage = Stage::validated; break;
            case bus::EventKind::validation_failed:
                v.stage = Stage::failed;
                if (const auto* p = e.as<bus::ValidationFailed>()) v.diagnostics = p->report;
                break;
            case bus::EventKind::interpretation_completed:
                v.stage = Stage::interpreted;
                if (const auto* p = e.as<bus::InterpretationCompleted>()) v.detections = p->result.detections;
                break;
            case bus::EventKind::persistence_completed: v.stage = Stage::persisted; break;
        }
    }
    if (halt && v.stage != Stage::failed && v.stage != Stage::persisted) {
        v.stage = Stage::failed;
        v.diagnostics = services::ValidationReport{
            services::ValidationReport::Outcome::rejected,
            {{services::DiagnosticSource::cross_ref, "internal: " + halt->message, std::nullopt}}};
    }
    return v;
}

json to_json(const services::ValidationReport& r) {
    json arr = json::array();
    for (const auto& d : r.diagnostics) {
        json item = {{"source", std::string(services::to_string(d.source))}, {"detail", d.detail}};
        if (d.position) {
            json pos = json::object();
            if (d.position->line) pos["line"] = *d.position->line;
            if (d.position->column) pos["column"] = *d.position->column;
            if (d.position->field) pos["field"] = *d.position->field;
            item["position"] = std::move(pos);
        }
        arr.push_back(std::move(item));
    }
    return arr;
}

json to_json(const StatusView& v) {
    json j = {{"correlation_id", v.correlation_id}, {"stage", std::string(to_string(v.stage))}};
    if (v.diagnostics) j["diagnostics"] = to_json(*v.diagnostics);
    if (v.detections) {
        json arr = json::array();
        for (const auto& d : *v.detections)
            arr.push_back({{"entity_id", d.entity_id},
                           {"smell", d.smell_name},
                           {"severity", std::string(dsl::to_string(d.severity))}});
        j["detections"] = std::move(arr);
    }
    return j;
}

json to_json(const inputs::InputError& e, std::string_view part) {
    json j = {{"part", std::string(part)},
              {"kind", std::string(inputs::to_string(e.kind))},
              {"message", e.message},
              {"description", e.describe()}};
    if (e.row) j["row"] = *e.row;
    if (e.field) j["field"] = *e.field;
    if (e.line) j["line"] = *e.line;
    if (e.column) j["column"] = *e.column;
    return j;
}

// ---------------------------------------------------------------------------
// query strings

namespace {

Response error_response(int status, const std::string& message) {
    return {status, json{{"error", message}}.dump()};
}

bool parse_double(std::string_view s, double& out) {
    auto r = std::from_chars(s.data(), s.data() + s.size(), out);
    return r.ec == std::errc{} && r.ptr == s.data() + s.size() && std::isfinite(out);
}

bool parse_size(std::string_view s, std::size_t& out) {
    if (s.empty()) return false;
    auto r = std::from_chars(s.data(), s.data() + s.size(), out);
    return r.ec == std::errc{} && r.ptr == s.data() + s.size();
}

std::optional<std::string> check_keys(const Params& params, std::initializer_list<std::string_view> allowed) {
    std::set<std::string> seen;
    for (const auto& [k, v] : params) {
        bool ok = false;
        for (auto a : allowed) ok = ok || k == a;
        if (!ok) return "unknown query parameter '" + k + "'";
        if (!seen.insert(k).second) return "repeated query parameter '" + k + "'";
    }
    return std::nullopt;
}

const std::string* find(const Params& p, const std::string& key) {
    auto it = p.find(key);
    return it == p.end() ? nullptr : &it->second;
}

Expected<store::DetectionFilter, std::string> parse_filter(const Params& params) {
    store::DetectionFilter f;
    if (auto v = find(params, "smell")) f.smell_name = *v;
    if (auto v = find(params, "severity")) {
        f.severity = dsl::parse_severity(*v);
        if (!f.severity) return unexpected("invalid severity '" + *v + "'");
    }
    if (auto v = find(params, "org")) f.org_id = *v;
    if (auto v = find(params, "project")) f.project_id = *v;
    if (auto v = find(params, "bbox")) {
        std::vector<double> nums;
        std::string_view rest = *v;
        while (true) {
            auto comma = rest.find(',');
            double d = 0;
            if (!parse_double(rest.substr(0, comma), d)) return unexpected("invalid bbox '" + *v + "'");
            nums.push_back(d);
            if (comma == std::string_view::npos) break;
            rest.remove_prefix(comma + 1);
        }
        if (nums.size() != 4) return unexpected(std::string("bbox needs 4 numbers: minLat,maxLat,minLon,maxLon"));
        f.bbox = store::BoundingBox{nums[0], nums[1], nums[2], nums[3]};
    }
    const auto* from = find(params, "from");
    const auto* to = find(params, "to");
    if (from || to) {
        store::TimeRange range{Timestamp::min(), Timestamp::max()};
        if (from) {
            auto t = parse_timestamp(*from);
            if (!t) return unexpected("invalid timestamp '" + *from + "'");
            range.from = *t;
        }
        if (to) {
            auto t = parse_timestamp(*to);
            if (!t) return unexpected("invalid timestamp '" + *to + "'");
            range.to = *t;
        }
        f.time_range = range;
    }
    if (auto err = store::check_filter(f)) return unexpected(err->message);
    return f;
}

}  // namespace

Expected<store::DetectionFilter, std::string> filter_from_query(const Params& params) {
    if (auto err = check_keys(params, {"smell", "severity", "org", "project", "bbox", "from", "to"}))
        return unexpected(*err);
    return parse_filter(params);
}

Expected<store::PageRequest, std::string> page_from_query(const Params& params) {
    store::PageRequest page;
    if (auto v = find(params, "offset"); v && !parse_size(*v, page.offset))
        return unexpected("invalid offset '" + *v + "'");
    if (auto v = find(params, "limit"); v && !parse_size(*v, page.limit))
        return unexpected("invalid limit '" + *v + "'");
    if (auto err = store::check_page(page)) return unexpected(err->message);
    return page;
}

Params filter_to_query(const store::DetectionFilter& f) {
    Params p;
    if (f.smell_name) p.emplace("smell", *f.smell_name);
    if (f.severity) p.emplace("severity", std::string(dsl::to_string(*f.severity)));
    if (f.org_id) p.emplace("org", *f.org_id);
    if (f.project_id) p.emplace("project", *f.project_id);
    if (f.bbox) {
        auto num = [](double d) {
            char buf[64];
            auto r = std::to_chars(buf, buf + sizeof buf, d);
            return std::string(buf, r.ptr);
        };
        p.emplace("bbox", num(f.bbox->min_lat) + "," + num(f.bbox->max_lat) + "," + num(f.bbox->min_lon) + "," +
                              num(f.bbox->max_lon));
    }
    if (f.time_range) {
        if (f.time_range->from != Timestamp::min()) p.emplace("from", format_timestamp(f.time_range->from));
        if (f.time_range->to != Timestamp::max()) p.emplace("to", format_timestamp(f.time_range->to));
    }
    return p;
}

// ---------------------------------------------------------------------------

Gateway::Gateway(services::Platform& platform, Limits limits) : platform_(platform), limits_(limits) {}

Response Gateway::submit(const std::map<std::string, std::string>& parts) {
    std::size_t total = 0;
    for (const auto& [name, content] : parts) total += content.size();
    if (total > limits_.payload_bytes)
        return error_response(413, "payload of " + std::to_string(total) + " bytes exceeds limit of " +
                                       std::to_string(limits_.payload_bytes));

    for (const auto& [name, content] : parts) {
        if (name != "script" && name != "metrics" && name != "thresholds" && name != "metadata" && name != "label")
            return error_response(400, "unknown part '" + name + "'");
    }
    std::vector<std::string> missing;
    for (const char* required : {"script", "metrics", "thresholds", "metadata"})
        if (!parts.count(required)) missing.emplace_back(required);
    if (!missing.empty()) {
        std::string msg = "missing part";
        msg += missing.size() > 1 ? "s: " : ": ";
        for (std::size_t i = 0; i < missing.size(); ++i) msg += (i ? ", " : "") + missing[i];
        return {400, json{{"error", msg}, {"missing", missing}}.dump()};
    }

    inputs::AnalysisRequest req;
    req.script_source = parts.at("script");
    if (auto it = parts.find("label"); it != parts.end() && !it->second.empty()) req.label = it->second;

    json errors = json::array();
    auto table = inputs::parse_metric_table(parts.at("metrics"));
    auto thresholds = inputs::parse_thresholds(parts.at("thresholds"));
    auto metadata = inputs::parse_metadata(parts.at("metadata"));
    if (!table)
        for (const auto& e : table.error()) errors.push_back(to_json(e, "metrics"));
    if (!thresholds)
        for (const auto& e : thresholds.error()) errors.push_back(to_json(e, "thresholds"));
    if (!metadata)
        for (const auto& e : metadata.error()) errors.push_back(to_json(e, "metadata"));
    if (!errors.empty()) return {400, json{{"error", "malformed input files"}, {"errors", std::move(errors)}}.dump()};

    req.table = std::move(*table);
    req.thresholds = std::move(*thresholds);
    req.context = std::move(*metadata);
    req.submitted_at = now_utc();
    const Timestamp accepted = req.submitted_at;

    auto id = platform_.submit(std::move(req));
    if (!id) return error_response(503, id.error().message);
    return {202, json{{"correlation_id", *id}, {"accepted_at", format_timestamp(accepted)}}.dump()};
}

Response Gateway::status(const std::string& correlation_id) const {
    const auto& bus = platform_.bus();
    auto view = status_from_trace(bus.trace(correlation_id), bus.halted(correlation_id));
    if (!view) return error_response(404, "unknown analysis '" + correlation_id + "'");
    return {200, to_json(*view).dump()};
}

Response Gateway::trace(const std::string& correlation_id) const {
    auto events = platform_.bus().trace(correlation_id);
    if (events.empty()) return error_response(404, "unknown analysis '" + correlation_id + "'");
    json evs = json::array();
    for (const auto& e : events)
        evs.push_back({{"sequence", e.sequence},
                       {"kind", std::string(bus::to_string(e.kind))},
                       {"emitted_at", format_timestamp(e.emitted_at)}});
    json notes = json::array();
    for (const auto& a : platform_.bus().annotations(correlation_id))
        notes.push_back({{"source", a.source}, {"sequence", a.sequence}, {"message", a.message},
                         {"at", format_timestamp(a.at)}});
    return {200, json{{"correlation_id", correlation_id}, {"events", std::move(evs)}, {"annotations", std::move(notes)}}
                     .dump()};
}

Response Gateway::detections(const Params& params) const {
    if (auto err = check_keys(params, {"smell", "severity", "org", "project", "bbox", "from", "to", "offset", "limit"}))
        return error_response(400, *err);
    auto filter = parse_filter(params);
    if (!filter) return error_response(400, filter.error());
    auto page = page_from_query(params);
    if (!page) return error_response(400, page.error());
    auto result = platform_.store().query_detections(*filter, *page);
    if (!result) return error_response(400, result.error().message);
    json items = json::array();
    for (const auto& r : result->items) items.push_back(store::to_json(r));
    return {200, json{{"total", result->total}, {"offset", page->offset}, {"limit", page->limit}, {"items", std::move(items)}}
                     .dump()};
}

Response Gateway::histogram(const Params& params) const {
    auto filter = filter_from_query(params);
    if (!filter) return error_response(400, filter.error());
    auto result = platform_.store().histogram(*filter);
    if (!result) return error_response(400, result.error().message);
    json out = json::object();
    for (const auto& [name, count] : *result) out[name] = count;
    return {200, out.dump()};
}

Response Gateway::executions(const Params& params) const {
    if (auto err = check_keys(params, {"project", "offset", "limit"})) return error_response(400, *err);
    auto page = page_from_query(params);
    if (!page) return error_response(400, page.error());
    std::optional<std::string> project;
    if (auto v = find(params, "project")) project = *v;
    auto result = platform_.store().execution_history(project, *page);
    if (!result) return error_response(400, result.error().message);
    json items = json::array();
    for (const auto& r : result->items) items.push_back(store::to_json(r));
    return {200, json{{"total", result->total}, {"offset", page->offset}, {"limit", page->limit}, {"items", std::move(items)}}
                     .dump()};
}

}  // namespace smellhunter::gateway
