#include "smellhunter/cli/render.hpp"

#include <algorithm>
#include <charconv>

namespace smellhunter::cli {

using nlohmann::json;

namespace {

std::string str(const json& j, const char* key) {
    auto it = j.find(key);
    if (it == j.end() || it->is_null()) return "";
    if (it->is_string()) return it->get<std::string>();
    return it->dump();
}

std::string number(double v) {
    char buf[64];
    auto r = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, r.ptr);
}

std::string plural(std::size_t n, const char* noun) {
    return std::to_string(n) + " " + noun + (n == 1 ? "" : "s");
}

}  // namespace

std::string render_table(const std::vector<std::string>& header, const std::vector<std::vector<std::string>>& rows) {
    std::vector<std::size_t> width(header.size(), 0);
    for (std::size_t c = 0; c < header.size(); ++c) width[c] = header[c].size();
    for (const auto& r : rows)
        for (std::size_t c = 0; c < r.size() && c < width.size(); ++c) width[c] = std::max(width[c], r[c].size());

    auto line = [&](const std::vector<std::string>& cells) {
        std::string out;
        for (std::size_t c = 0; c < cells.size(); ++c) {
            out += cells[c];
            if (c + 1 < cells.size()) out += std::string(width[c] - cells[c].size() + 2, ' ');
        }
        while (!out.empty() && out.back() == ' ') out.pop_back();
        return out + "\n";
    };
    std::string out = line(header);
    for (const auto& r : rows) out += line(r);
    return out;
}

std::string render_detections(const json& page, OutputFormat format) {
    if (format == OutputFormat::document) return page.dump(2) + "\n";
    const auto& items = page.at("items");
    const std::size_t total = page.value("total", std::size_t{0});
    if (items.empty()) return total == 0 ? "no detections\n" : "no detections on this page (total " + std::to_string(total) + ")\n";

    std::vector<std::vector<std::string>> rows;
    for (const auto& d : items) {
        const auto& ctx = d.at("context");
        std::string where = "-";
        if (ctx.contains("latitude") && ctx.contains("longitude"))
            where = number(ctx.at("latitude").get<double>()) + "," + number(ctx.at("longitude").get<double>());
        rows.push_back({str(d, "detected_at"), str(d, "smell"), str(d, "severity"), str(d, "entity_id"),
                        str(ctx, "project_id"), where});
    }
    const std::size_t offset = page.value("offset", std::size_t{0});
    return render_table({"DETECTED_AT", "SMELL", "SEVERITY", "ENTITY", "PROJECT", "LOCATION"}, rows) + "showing " +
           std::to_string(offset + 1) + "-" + std::to_string(offset + items.size()) + " of " + std::to_string(total) +
           "\n";
}

std::string render_histogram(const json& histogram, OutputFormat format) {
    if (format == OutputFormat::document) return histogram.dump(2) + "\n";
    if (histogram.empty()) return "no detections\n";
    std::size_t peak = 0;
    for (const auto& [name, count] : histogram.items()) peak = std::max(peak, count.get<std::size_t>());
    std::vector<std::vector<std::string>> rows;
    for (const auto& [name, count] : histogram.items()) {
        const auto n = count.get<std::size_t>();
        const std::size_t bar = peak ? std::max<std::size_t>(1, n * 40 / peak) : 0;
        rows.push_back({name, std::to_string(n), std::string(bar, '#')});
    }
    return render_table({"SMELL", "COUNT", ""}, rows);
}

std::string render_history(const json& page, OutputFormat format) {
    if (format == OutputFormat::document) return page.dump(2) + "\n";
    const auto& items = page.at("items");
    if (items.empty()) return "no executions\n";
    std::vector<std::vector<std::string>> rows;
    for (const auto& e : items)
        rows.push_back({str(e, "executed_at"), str(e, "script"), str(e, "result"), str(e, "status"),
                        str(e, "detection_count"), str(e, "correlation_id")});
    return render_table({"TIMESTAMP", "SCRIPT", "RESULT", "STATUS", "DETECTIONS", "CORRELATION_ID"}, rows);
}

std::string render_status(const json& status, OutputFormat format) {
    if (format == OutputFormat::document) return status.dump(2) + "\n";
    std::string out = "stage: " + str(status, "stage") + "\n";
    if (auto it = status.find("diagnostics"); it != status.end()) {
        for (const auto& d : *it) {
            out += "error [" + str(d, "source") + "]";
            if (auto p = d.find("position"); p != d.end()) {
                if (p->contains("line")) {
                    out += " " + str(*p, "line");
                    if (p->contains("column")) out += ":" + str(*p, "column");
                }
                if (p->contains("field")) out += " (" + str(*p, "field") + ")";
            }
            out += ": " + str(d, "detail") + "\n";
        }
    }
    if (auto it = status.find("detections"); it != status.end()) {
        for (const auto& d : *it)
            out += "detected " + str(d, "smell") + " in " + str(d, "entity_id") + " (" + str(d, "severity") + ")\n";
        out += plural(it->size(), "detection") + "\n";
    }
    return out;
}

std::string render_trace(const json& trace, OutputFormat format) {
    if (format == OutputFormat::document) return trace.dump(2) + "\n";
    std::vector<std::vector<std::string>> rows;
    for (const auto& e : trace.at("events")) rows.push_back({str(e, "sequence"), str(e, "kind"), str(e, "emitted_at")});
    std::string out = render_table({"SEQ", "EVENT", "EMITTED_AT"}, rows);
    for (const auto& a : trace.value("annotations", json::array()))
        out += "note [" + str(a, "source") + " @" + str(a, "sequence") + "]: " + str(a, "message") + "\n";
    return out;
}

}  // namespace smellhunter::cli
