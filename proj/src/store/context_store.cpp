#include "smellhunter/store/context_store.hpp"

#include <algorithm>
#include <cerrno>
#include <cstdio>
#include <cstring>
#include <fcntl.h>
#include <fstream>
#include <mutex>
#include <sstream>
#include <unistd.h>

#include "smellhunter/store/record_codec.hpp"

namespace smellhunter::store {

namespace fs = std::filesystem;
using nlohmann::json;

// ---------------------------------------------------------------------------
// filters

std::optional<QueryError> check_filter(const DetectionFilter& f) {
    if (f.bbox) {
        const auto& b = *f.bbox;
        auto in = [](double v, double lim) { return v >= -lim && v <= lim; };
        if (!in(b.min_lat, 90) || !in(b.max_lat, 90) || !in(b.min_lon, 180) || !in(b.max_lon, 180))
            return QueryError{"bounding box coordinates out of range"};
        if (b.min_lat > b.max_lat || b.min_lon > b.max_lon)
            return QueryError{"bounding box minimum exceeds maximum"};
    }
    if (f.time_range && !(f.time_range->from < f.time_range->to))
        return QueryError{"time range must satisfy from < to"};
    return std::nullopt;
}

std::optional<QueryError> check_page(const PageRequest& p) {
    if (p.limit < 1 || p.limit > kMaxPageLimit)
        return QueryError{"limit must be in [1, " + std::to_string(kMaxPageLimit) + "]"};
    return std::nullopt;
}

bool matches(const DetectionFilter& f, const DetectionRecord& r) {
    if (f.smell_name && r.smell_name != *f.smell_name) return false;
    if (f.severity && r.severity != *f.severity) return false;
    if (f.org_id && r.context.org_id != *f.org_id) return false;
    if (f.project_id && r.context.project_id != *f.project_id) return false;
    if (f.bbox && (!r.context.location || !f.bbox->contains(*r.context.location))) return false;
    if (f.time_range && (r.detected_at < f.time_range->from || !(r.detected_at < f.time_range->to))) return false;
    return true;
}

bool consistent(const ExecutionRecord& r) {
    const bool detected = r.detection_count > 0 && r.status == RunStatus::completed;
    if ((r.result == RunResult::smell_detected) != detected) return false;
    if (r.status == RunStatus::failed && r.detection_count != 0) return false;
    return (r.result == RunResult::failed) == (r.status == RunStatus::failed);
}

// ---------------------------------------------------------------------------
// journal

struct ContextStore::Journal {
    fs::path path;
    int fd = -1;

    ~Journal() {
        if (fd >= 0) ::close(fd);
    }

    std::optional<StoreError> append(const std::string& line) {
        const char* p = line.data();
        std::size_t left = line.size();
        while (left > 0) {
            ssize_t n = ::write(fd, p, left);
            if (n < 0) {
                if (errno == EINTR) continue;
                return StoreError{std::string("journal write failed: ") + std::strerror(errno)};
            }
            p += n;
            left -= static_cast<std::size_t>(n);
        }
        if (::fsync(fd) != 0) return StoreError{std::string("journal fsync failed: ") + std::strerror(errno)};
        return std::nullopt;
    }
};

namespace {

std::string run_line(const ExecutionRecord& e, const std::vector<DetectionRecord>& ds) {
    json arr = json::array();
    for (const auto& d : ds) arr.push_back(to_json(d));
    json line = {{"execution", to_json(e)}, {"detections", std::move(arr)}};
    return line.dump() + "\n";
}

std::uint64_t record_number(const std::string& id) {
    // "det-000000000042"
    auto dash = id.rfind('-');
    if (dash == std::string::npos) return 0;
    try {
        return std::stoull(id.substr(dash + 1));
    } catch (...) {
        return 0;
    }
}

std::string make_record_id(std::uint64_t n) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "det-%012llu", static_cast<unsigned long long>(n));
    return buf;
}

}  // namespace

ContextStore::ContextStore() = default;
ContextStore::~ContextStore() = default;

Expected<std::unique_ptr<ContextStore>, StoreError> ContextStore::open(const fs::path& dir) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) return unexpected(StoreError{"cannot create store directory: " + ec.message()});

    const fs::path format_path = dir / "FORMAT";
    if (fs::exists(format_path)) {
        std::ifstream in(format_path);
        std::string tag;
        std::getline(in, tag);
        if (tag != kFormatTag)
            return unexpected(StoreError{"unsupported store format '" + tag + "', expected " + std::string(kFormatTag)});
    } else {
        std::ofstream out(format_path);
        out << kFormatTag << "\n";
        if (!out) return unexpected(StoreError{"cannot write " + format_path.string()});
    }

    auto store = std::make_unique<ContextStore>();
    const fs::path journal_path = dir / "journal.jsonl";

    std::string content;
    if (fs::exists(journal_path)) {
        std::ifstream in(journal_path, std::ios::binary);
        std::ostringstream ss;
        ss << in.rdbuf();
        content = ss.str();
    }

    // Replay complete lines. A trailing line without its newline is a torn write and is discarded.
    std::size_t valid_end = 0;
    std::size_t pos = 0;
    std::size_t line_no = 0;
    while (pos < content.size()) {
        auto nl = content.find('\n', pos);
        if (nl == std::string::npos) break;
        ++line_no;
        std::string_view line(content.data() + pos, nl - pos);
        try {
            auto j = json::parse(line);
            auto exec = execution_from_json(j.at("execution"));
            for (const auto& d : j.at("detections")) {
                auto rec = detection_from_json(d);
                store->next_record_ = std::max(store->next_record_, record_number(rec.record_id) + 1);
                store->detections_.push_back(std::move(rec));
            }
            store->executions_.push_back(std::move(exec));
        } catch (const std::exception& e) {
            return unexpected(
                StoreError{"corrupt journal line " + std::to_string(line_no) + ": " + std::string(e.what())});
        }
        pos = nl + 1;
        valid_end = pos;
    }
    if (valid_end != content.size()) {
        fs::resize_file(journal_path, valid_end, ec);
        if (ec) return unexpected(StoreError{"cannot truncate torn journal tail: " + ec.message()});
    }

    auto journal = std::make_unique<Journal>();
    journal->path = journal_path;
    journal->fd = ::open(journal_path.c_str(), O_WRONLY | O_CREAT | O_APPEND | O_CLOEXEC, 0644);
    if (journal->fd < 0)
        return unexpected(StoreError{"cannot open journal: " + std::string(std::strerror(errno))});
    store->journal_ = std::move(journal);
    return store;
}

void ContextStore::set_write_fault(std::function<bool()> fault) {
    std::unique_lock lock(mu_);
    write_fault_ = std::move(fault);
}

Expected<std::vector<std::string>, StoreError> ContextStore::append_run(ExecutionRecord execution,
                                                                        std::vector<DetectionRecord> detections) {
    std::unique_lock lock(mu_);
    if (write_fault_ && write_fault_()) return unexpected(StoreError{"injected write failure"});

    std::vector<std::string> ids;
    ids.reserve(detections.size());
    std::uint64_t next = next_record_;
    for (auto& d : detections) {
        d.record_id = make_record_id(next++);
        ids.push_back(d.record_id);
    }
    execution.detection_count = detections.size();
    if (!consistent(execution)) return unexpected(StoreError{"execution record contradicts its detections"});

    if (journal_) {
        if (auto err = journal_->append(run_line(execution, detections))) return unexpected(std::move(*err));
    }
    next_record_ = next;
    executions_.push_back(std::move(execution));
    for (auto& d : detections) detections_.push_back(std::move(d));
    return ids;
}

Expected<DetectionPage, QueryError> ContextStore::query_detections(const DetectionFilter& filter,
                                                                   PageRequest page) const {
    if (auto err = check_filter(filter)) return unexpected(std::move(*err));
    if (auto err = check_page(page)) return unexpected(std::move(*err));

    std::shared_lock lock(mu_);
    std::vector<const DetectionRecord*> hits;
    for (const auto& d : detections_)
        if (matches(filter, d)) hits.push_back(&d);

    auto newer = [](const DetectionRecord* a, const DetectionRecord* b) {
        if (a->detected_at != b->detected_at) return a->detected_at > b->detected_at;
        return a->record_id < b->record_id;
    };
    DetectionPage out;
    out.total = hits.size();
    const std::size_t begin = std::min(page.offset, hits.size());
    const std::size_t end = std::min(hits.size(), begin + page.limit);
    std::partial_sort(hits.begin(), hits.begin() + static_cast<std::ptrdiff_t>(end), hits.end(), newer);
    out.items.reserve(end - begin);
    for (std::size_t i = begin; i < end; ++i) out.items.push_back(*hits[i]);
    return out;
}

Expected<std::map<std::string, std::size_t>, QueryError> ContextStore::histogram(
    const DetectionFilter& filter) const {
    if (auto err = check_filter(filter)) return unexpected(std::move(*err));
    std::shared_lock lock(mu_);
    std::map<std::string, std::size_t> out;
    for (const auto& d : detections_)
        if (matches(filter, d)) ++out[d.smell_name];
    return out;
}

Expected<ExecutionPage, QueryError> ContextStore::execution_history(const std::optional<std::string>& project_id,
                                                                    PageRequest page) const {
    if (auto err = check_page(page)) return unexpected(std::move(*err));
    std::shared_lock lock(mu_);
    std::vector<std::size_t> hits;
    for (std::size_t i = 0; i < executions_.size(); ++i)
        if (!project_id || executions_[i].project_id == *project_id) hits.push_back(i);

    std::stable_sort(hits.begin(), hits.end(), [&](std::size_t a, std::size_t b) {
        if (executions_[a].executed_at != executions_[b].executed_at)
            return executions_[a].executed_at > executions_[b].executed_at;
        return a > b;
    });
    ExecutionPage out;
    out.total = hits.size();
    for (std::size_t i = std::min(page.offset, hits.size()); i < hits.size() && out.items.size() < page.limit; ++i)
        out.items.push_back(executions_[hits[i]]);
    return out;
}

std::size_t ContextStore::detection_count() const {
    std::shared_lock lock(mu_);
    return detections_.size();
}

std::size_t ContextStore::execution_count() const {
    std::shared_lock lock(mu_);
    return executions_.size();
}

std::string ContextStore::export_document() const {
    std::shared_lock lock(mu_);
    json execs = json::array();
    for (const auto& e : executions_) execs.push_back(to_json(e));
    json dets = json::array();
    for (const auto& d : detections_) dets.push_back(to_json(d));
    json doc = {{"format", std::string(kFormatTag)}, {"executions", std::move(execs)}, {"detections", std::move(dets)}};
    return doc.dump(2);
}

}  // namespace smellhunter::store
