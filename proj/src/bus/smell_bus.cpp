#include "smellhunter/bus/smell_bus.hpp"

#include <algorithm>
#include <condition_variable>
#include <deque>
#include <map>
#include <mutex>
#include <thread>
#include <unordered_map>

namespace smellhunter::bus {

std::string_view to_string(EventKind k) {
    switch (k) {
        case EventKind::analysis_requested: return "AnalysisRequested";
        case EventKind::validation_completed: return "ValidationCompleted";
        case EventKind::validation_failed: return "ValidationFailed";
        case EventKind::interpretation_completed: return "InterpretationCompleted";
        case EventKind::persistence_completed: return "PersistenceCompleted";
    }
    return "?";
}

namespace {

struct Strand {
    std::deque<EventEnvelope> queue;
    bool running = false;
};

struct Subscriber {
    std::string id;
    std::set<EventKind> kinds;
    Handler handler;
    bool cancelled = false;
    int active = 0;
    std::unordered_map<std::string, Strand> strands;
};

struct Trace {
    std::vector<EventEnvelope> events;
    std::vector<Annotation> annotations;
    std::optional<Annotation> halt;
};

thread_local const Subscriber* t_current_subscriber = nullptr;

}  // namespace

struct SmellBus::State : std::enable_shared_from_this<SmellBus::State> {
    mutable std::mutex mu;
    mutable std::condition_variable changed;
    std::map<std::string, Trace, std::less<>> traces;
    std::map<std::string, std::shared_ptr<Subscriber>, std::less<>> subscribers;
    BusStats stats;
    std::uint64_t pending = 0;
    bool closing = false;

    // worker pool
    std::deque<std::function<void()>> tasks;
    std::condition_variable task_ready;
    std::vector<std::thread> workers;

    void post(std::function<void()> task) {
        tasks.push_back(std::move(task));
        task_ready.notify_one();
    }

    void worker_loop() {
        std::unique_lock lock(mu);
        for (;;) {
            task_ready.wait(lock, [&] { return closing || !tasks.empty(); });
            if (tasks.empty()) return;
            auto task = std::move(tasks.front());
            tasks.pop_front();
            lock.unlock();
            task();
            lock.lock();
        }
    }

    void drain(const std::shared_ptr<Subscriber>& sub, const std::string& correlation_id) {
        for (;;) {
            EventEnvelope env;
            {
                std::lock_guard lock(mu);
                auto it = sub->strands.find(correlation_id);
                auto& strand = it->second;
                if (sub->cancelled) {
                    stats.deliveries_dropped += strand.queue.size();
                    pending -= strand.queue.size();
                    sub->strands.erase(it);
                    changed.notify_all();
                    return;
                }
                if (strand.queue.empty()) {
                    sub->strands.erase(it);
                    changed.notify_all();
                    return;
                }
                env = std::move(strand.queue.front());
                strand.queue.pop_front();
                ++sub->active;
            }

            std::string failure;
            t_current_subscriber = sub.get();
            try {
                sub->handler(env);
            } catch (const std::exception& e) {
                failure = e.what();
            } catch (...) {
                failure = "unknown exception";
            }
            t_current_subscriber = nullptr;

            std::lock_guard lock(mu);
            --sub->active;
            --pending;
            ++stats.deliveries_completed;
            if (!failure.empty()) {
                ++stats.handler_failures;
                traces[correlation_id].annotations.push_back(
                    {sub->id, env.sequence, "handler failed: " + failure, now_utc()});
            }
            changed.notify_all();
        }
    }

    void unsubscribe(const std::string& id) {
        std::unique_lock lock(mu);
        auto it = subscribers.find(id);
        if (it == subscribers.end()) return;
        auto sub = it->second;
        subscribers.erase(it);
        sub->cancelled = true;
        // a handler unsubscribing itself must not wait on itself
        if (t_current_subscriber == sub.get()) return;
        changed.wait(lock, [&] { return sub->active == 0; });
    }
};

// ---------------------------------------------------------------------------

Subscription::Subscription(Subscription&& other) noexcept
    : bus_(std::move(other.bus_)), id_(std::move(other.id_)) {
    other.bus_.reset();
}

Subscription& Subscription::operator=(Subscription&& other) noexcept {
    if (this != &other) {
        unsubscribe();
        bus_ = std::move(other.bus_);
        id_ = std::move(other.id_);
        other.bus_.reset();
    }
    return *this;
}

Subscription::~Subscription() { unsubscribe(); }

void Subscription::unsubscribe() {
    if (auto p = bus_.lock()) std::static_pointer_cast<SmellBus::State>(p)->unsubscribe(id_);
    bus_.reset();
}

// ---------------------------------------------------------------------------

SmellBus::SmellBus(std::size_t workers) : state_(std::make_shared<State>()) {
    if (workers == 0) workers = std::max<std::size_t>(4, std::thread::hardware_concurrency());
    for (std::size_t i = 0; i < workers; ++i) state_->workers.emplace_back([s = state_.get()] { s->worker_loop(); });
}

SmellBus::~SmellBus() {
    {
        std::unique_lock lock(state_->mu);
        state_->changed.wait(lock, [&] { return state_->pending == 0; });
        state_->closing = true;
        state_->task_ready.notify_all();
    }
    for (auto& w : state_->workers) w.join();
}

bool SmellBus::is_terminal(EventKind k) {
    return k == EventKind::validation_failed || k == EventKind::persistence_completed;
}

bool SmellBus::allowed_after(EventKind previous, EventKind next) {
    switch (previous) {
        case EventKind::analysis_requested:
            return next == EventKind::validation_completed || next == EventKind::validation_failed;
        case EventKind::validation_completed:
            return next == EventKind::interpretation_completed || next == EventKind::validation_failed;
        case EventKind::interpretation_completed: return next == EventKind::persistence_completed;
        default: return false;
    }
}

Expected<std::uint64_t, BusError> SmellBus::publish(std::string_view correlation_id, Payload payload) {
    const EventKind kind = kind_of(payload);
    if (correlation_id.empty()) return unexpected(BusError{BusError::Kind::empty_correlation, "empty correlation id"});

    auto& s = *state_;
    std::lock_guard lock(s.mu);
    if (s.closing) return unexpected(BusError{BusError::Kind::closed, "bus is shutting down"});

    auto it = s.traces.find(correlation_id);
    const bool known = it != s.traces.end() && !it->second.events.empty();
    if (kind == EventKind::analysis_requested) {
        if (known)
            return unexpected(BusError{BusError::Kind::duplicate_correlation,
                                       "correlation id already in use: " + std::string(correlation_id)});
    } else {
        if (!known)
            return unexpected(BusError{BusError::Kind::unknown_correlation,
                                       "unknown correlation id: " + std::string(correlation_id)});
        const EventKind last = it->second.events.back().kind;
        if (it->second.halt)
            return unexpected(BusError{BusError::Kind::after_terminal,
                                       std::string(to_string(kind)) + " after the run was halted"});
        if (is_terminal(last))
            return unexpected(BusError{BusError::Kind::after_terminal,
                                       std::string(to_string(kind)) + " after terminal " +
                                           std::string(to_string(last))});
        if (!allowed_after(last, kind))
            return unexpected(BusError{BusError::Kind::out_of_order, std::string(to_string(kind)) +
                                                                         " cannot follow " +
                                                                         std::string(to_string(last))});
    }
    if (it == s.traces.end()) it = s.traces.emplace(std::string(correlation_id), Trace{}).first;

    EventEnvelope env;
    env.correlation_id = std::string(correlation_id);
    env.sequence = it->second.events.size() + 1;
    env.kind = kind;
    env.payload = std::make_shared<const Payload>(std::move(payload));
    env.emitted_at = now_utc();
    it->second.events.push_back(env);
    ++s.stats.published;

    for (auto& [id, sub] : s.subscribers) {
        if (!sub->kinds.count(kind)) continue;
        auto& strand = sub->strands[env.correlation_id];
        strand.queue.push_back(env);
        ++s.pending;
        ++s.stats.deliveries_enqueued;
        if (!strand.running) {
            strand.running = true;
            s.post([st = state_, sub = sub, cid = env.correlation_id] { st->drain(sub, cid); });
        }
    }
    s.changed.notify_all();
    return env.sequence;
}

Expected<Subscription, BusError> SmellBus::subscribe(std::string subscriber_id, std::set<EventKind> kinds,
                                                     Handler handler) {
    auto& s = *state_;
    std::lock_guard lock(s.mu);
    if (s.subscribers.count(subscriber_id))
        return unexpected(BusError{BusError::Kind::duplicate_subscriber, "duplicate subscriber: " + subscriber_id});
    auto sub = std::make_shared<Subscriber>();
    sub->id = subscriber_id;
    sub->kinds = std::move(kinds);
    sub->handler = std::move(handler);
    s.subscribers.emplace(subscriber_id, std::move(sub));
    return Subscription(std::weak_ptr<void>(std::static_pointer_cast<void>(state_)), std::move(subscriber_id));
}

std::vector<EventEnvelope> SmellBus::trace(std::string_view correlation_id) const {
    std::lock_guard lock(state_->mu);
    auto it = state_->traces.find(correlation_id);
    if (it == state_->traces.end()) return {};
    return it->second.events;
}

std::vector<Annotation> SmellBus::annotations(std::string_view correlation_id) const {
    std::lock_guard lock(state_->mu);
    auto it = state_->traces.find(correlation_id);
    if (it == state_->traces.end()) return {};
    return it->second.annotations;
}

void SmellBus::annotate(std::string_view correlation_id, std::string source, std::string message) {
    std::lock_guard lock(state_->mu);
    auto it = state_->traces.find(correlation_id);
    if (it == state_->traces.end()) return;
    const std::uint64_t seq = it->second.events.empty() ? 0 : it->second.events.back().sequence;
    it->second.annotations.push_back({std::move(source), seq, std::move(message), now_utc()});
}

void SmellBus::halt(std::string_view correlation_id, std::string source, std::string message) {
    std::lock_guard lock(state_->mu);
    auto it = state_->traces.find(correlation_id);
    if (it == state_->traces.end() || it->second.events.empty()) return;
    auto& t = it->second;
    if (t.halt || is_terminal(t.events.back().kind)) return;
    Annotation note{std::move(source), t.events.back().sequence, std::move(message), now_utc()};
    t.annotations.push_back(note);
    t.halt = std::move(note);
    state_->changed.notify_all();
}

std::optional<Annotation> SmellBus::halted(std::string_view correlation_id) const {
    std::lock_guard lock(state_->mu);
    auto it = state_->traces.find(correlation_id);
    if (it == state_->traces.end()) return std::nullopt;
    return it->second.halt;
}

std::vector<std::string> SmellBus::correlation_ids() const {
    std::lock_guard lock(state_->mu);
    std::vector<std::string> out;
    for (const auto& [id, t] : state_->traces)
        if (!t.events.empty()) out.push_back(id);
    return out;
}

BusStats SmellBus::stats() const {
    std::lock_guard lock(state_->mu);
    return state_->stats;
}

bool SmellBus::wait_idle(std::chrono::milliseconds timeout) const {
    std::unique_lock lock(state_->mu);
    return state_->changed.wait_for(lock, timeout, [&] { return state_->pending == 0; });
}

bool SmellBus::wait_terminal(std::string_view correlation_id, std::chrono::milliseconds timeout) const {
    std::unique_lock lock(state_->mu);
    return state_->changed.wait_for(lock, timeout, [&] {
        auto it = state_->traces.find(correlation_id);
        return it != state_->traces.end() && !it->second.events.empty() &&
               (it->second.halt || is_terminal(it->second.events.back().kind));
    });
}

}  // namespace smellhunter::bus
