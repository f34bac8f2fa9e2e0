#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <queue>
#include <random>
#include <stdexcept>
#include <string_view>
#include <unordered_set>
#include <vector>

namespace relsim {

// Simulation time in minutes since the start of the run.
using SimTime = double;

inline constexpr SimTime kTimeInfinity = std::numeric_limits<SimTime>::infinity();

enum class EventKind {
    ServerFailure,
    AutoRepairDone,
    ManualRepairDone,
    HostSelectionDone,
    RecoveryDone,
    SpareAcquisitionDone,
    RegenerationTick,
    JobComplete,
};

const char* event_kind_name(EventKind kind);

// Identifiers ride along with the event; unused fields stay -1/0.
struct EventPayload {
    int server = -1;
    int plan = -1;
    int batch = -1;
    int aux = 0;  // event-specific extra (e.g. failure classification)

    friend bool operator==(const EventPayload&, const EventPayload&) = default;
};

struct SimEvent {
    SimTime time = 0.0;
    std::uint64_t seq = 0;  // insertion order, breaks ties between equal times
    EventKind kind = EventKind::JobComplete;
    EventPayload payload;
};

// Handle for cancelling a scheduled event. Default-constructed handles are inert.
struct EventHandle {
    std::uint64_t seq = 0;
    bool valid = false;
};

// Pending-event queue plus the simulation clock. Events fire in (time, seq)
// order, so two events at the same instant are delivered in the order they
// were scheduled. Cancellation is lazy: cancelled entries are skipped on pop.
class EventQueue {
public:
    SimTime now() const { return now_; }

    EventHandle schedule(SimTime when, EventKind kind, EventPayload payload = {});
    void cancel(EventHandle& handle);

    // Pops the next live event and advances the clock. Empty queue means the
    // simulation has nothing left to do.
    std::optional<SimEvent> next_event();

    bool empty() const { return live_count_ == 0; }
    std::size_t scheduled_total() const { return next_seq_; }

private:
    struct Later {
        bool operator()(const SimEvent& a, const SimEvent& b) const {
            if (a.time != b.time) return a.time > b.time;
            return a.seq > b.seq;
        }
    };

    SimTime now_ = 0.0;
    std::uint64_t next_seq_ = 0;
    std::size_t live_count_ = 0;
    std::priority_queue<SimEvent, std::vector<SimEvent>, Later> heap_;
    std::unordered_set<std::uint64_t> cancelled_;
};

// Deterministic random stream identified by (base_seed, replication, label).
// Streams with different identities are statistically independent; the same
// identity always reproduces the same draw sequence, on any platform, because
// mt19937_64 and the mixing below are fully specified.
class RngStream {
public:
    RngStream(std::uint64_t base_seed, std::uint64_t replication, std::string_view label);

    std::uint64_t next_u64() { return engine_(); }

    // Uniform on [0, 1) with 53-bit resolution.
    double uniform();

    // Inverse-transform exponential; rate 0 yields +infinity (event never fires).
    double exponential(double rate);

    // Uniform integer in [0, n), n >= 1. Rejection sampling, no modulo bias.
    std::size_t uniform_index(std::size_t n);

private:
    std::mt19937_64 engine_;
};

}  // namespace relsim
