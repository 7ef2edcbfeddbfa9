#pragma once

#include <chrono>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "smellhunter/bus/events.hpp"
#include "smellhunter/expected.hpp"

namespace smellhunter::bus {

struct BusError {
    enum class Kind {
        empty_correlation,
        unknown_correlation,
        duplicate_correlation,
        after_terminal,
        out_of_order,
        duplicate_subscriber,
        closed,
    };
    Kind kind;
    std::string message;
};

// Handler failures and out-of-band notes attached to a correlation id.
struct Annotation {
    std::string source;
    std::uint64_t sequence = 0;  // event that was being handled, 0 if none
    std::string message;
    Timestamp at{};
};

struct BusStats {
    std::uint64_t published = 0;
    std::uint64_t deliveries_enqueued = 0;  // sum over events of matching subscribers
    std::uint64_t deliveries_completed = 0;
    std::uint64_t deliveries_dropped = 0;   // queued for a subscriber that unsubscribed
    std::uint64_t handler_failures = 0;
};

using Handler = std::function<void(const EventEnvelope&)>;

class SmellBus;

// Live registration. Unsubscribes on destruction; waits for an in-flight handler call to return.
class Subscription {
public:
    Subscription() = default;
    Subscription(Subscription&& other) noexcept;
    Subscription& operator=(Subscription&& other) noexcept;
    Subscription(const Subscription&) = delete;
    Subscription& operator=(const Subscription&) = delete;
    ~Subscription();

    const std::string& id() const { return id_; }
    void unsubscribe();

private:
    friend class SmellBus;
    Subscription(std::weak_ptr<void> bus, std::string id) : bus_(std::move(bus)), id_(std::move(id)) {}

    std::weak_ptr<void> bus_;
    std::string id_;
};

// In-process publish/subscribe backbone.
//
// Delivery is asynchronous on an internal worker pool. For a given (subscriber, correlation id)
// events are handed to the handler one at a time in sequence order, exactly once; different
// correlation ids and different subscribers proceed in parallel. Publishing enforces the
// pipeline chain:
//   analysis_requested -> validation_completed | validation_failed
//   validation_completed -> interpretation_completed | validation_failed
//   interpretation_completed -> persistence_completed
// validation_failed and persistence_completed are terminal.
class SmellBus {
public:
    explicit SmellBus(std::size_t workers = 0);
    ~SmellBus();
    SmellBus(const SmellBus&) = delete;
    SmellBus& operator=(const SmellBus&) = delete;

    Expected<std::uint64_t, BusError> publish(std::string_view correlation_id, Payload payload);

    Expected<Subscription, BusError> subscribe(std::string subscriber_id, std::set<EventKind> kinds,
                                               Handler handler);

    std::vector<EventEnvelope> trace(std::string_view correlation_id) const;
    std::vector<Annotation> annotations(std::string_view correlation_id) const;
    void annotate(std::string_view correlation_id, std::string source, std::string message);

    // Ends a run that cannot make progress without adding an event: records the annotation,
    // rejects later publishes for the id and releases wait_terminal. No-op once terminal.
    void halt(std::string_view correlation_id, std::string source, std::string message);
    std::optional<Annotation> halted(std::string_view correlation_id) const;

    std::vector<std::string> correlation_ids() const;
    BusStats stats() const;

    // True once every enqueued delivery has been handled or dropped.
    bool wait_idle(std::chrono::milliseconds timeout) const;
    // True once the trace ends in validation_failed or persistence_completed, or the run was halted.
    bool wait_terminal(std::string_view correlation_id, std::chrono::milliseconds timeout) const;

    static bool is_terminal(EventKind k);
    static bool allowed_after(EventKind previous, EventKind next);

    struct State;

private:
    std::shared_ptr<State> state_;
};

}  // namespace smellhunter::bus
