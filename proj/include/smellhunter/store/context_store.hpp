#pragma once

#include <filesystem>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <shared_mutex>
#include <string>
#include <vector>

#include "smellhunter/expected.hpp"
#include "smellhunter/store/records.hpp"

namespace smellhunter::store {

inline constexpr std::string_view kFormatTag = "smellhunter-context-store/1";

struct StoreError {
    std::string message;
};

struct DetectionPage {
    std::size_t total = 0;
    std::vector<DetectionRecord> items;
};

struct ExecutionPage {
    std::size_t total = 0;
    std::vector<ExecutionRecord> items;
};

// Context history database. Single writer, concurrent readers; one run (its execution record and
// all of its detections) becomes visible atomically. When opened on a directory every run is
// appended to a journal as one line and fsynced before it becomes visible; reopening replays it.
//
// Layout: <dir>/FORMAT holds kFormatTag, <dir>/journal.jsonl holds one run per line.
class ContextStore {
public:
    // In-memory only.
    ContextStore();
    ~ContextStore();

    static Expected<std::unique_ptr<ContextStore>, StoreError> open(const std::filesystem::path& dir);

    // Assigns record ids (returned in detection order) and appends the run.
    Expected<std::vector<std::string>, StoreError> append_run(ExecutionRecord execution,
                                                              std::vector<DetectionRecord> detections);

    // Newest first by detected_at; record_id breaks ties (ascending).
    Expected<DetectionPage, QueryError> query_detections(const DetectionFilter& filter, PageRequest page) const;
    Expected<std::map<std::string, std::size_t>, QueryError> histogram(const DetectionFilter& filter) const;
    // Newest first by executed_at; later appends first on ties.
    Expected<ExecutionPage, QueryError> execution_history(const std::optional<std::string>& project_id,
                                                          PageRequest page) const;

    std::size_t detection_count() const;
    std::size_t execution_count() const;

    // Whole store as one document: {"format", "executions": [...], "detections": [...]}.
    std::string export_document() const;

    // Test hook: when set and returning true, the next journal write fails.
    void set_write_fault(std::function<bool()> fault);

private:
    struct Journal;

    mutable std::shared_mutex mu_;
    std::vector<DetectionRecord> detections_;
    std::vector<ExecutionRecord> executions_;
    std::uint64_t next_record_ = 1;
    std::unique_ptr<Journal> journal_;
    std::function<bool()> write_fault_;
};

}  // namespace smellhunter::store
