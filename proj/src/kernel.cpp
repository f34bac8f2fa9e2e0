#include "relsim/kernel.hpp"

#include <bit>
#include <cmath>

namespace relsim {

const char* event_kind_name(EventKind kind) {
    switch (kind) {
        case EventKind::ServerFailure: return "ServerFailure";
        case EventKind::AutoRepairDone: return "AutoRepairDone";
        case EventKind::ManualRepairDone: return "ManualRepairDone";
        case EventKind::HostSelectionDone: return "HostSelectionDone";
        case EventKind::RecoveryDone: return "RecoveryDone";
        case EventKind::SpareAcquisitionDone: return "SpareAcquisitionDone";
        case EventKind::RegenerationTick: return "RegenerationTick";
        case EventKind::JobComplete: return "JobComplete";
    }
    return "Unknown";
}

EventHandle EventQueue::schedule(SimTime when, EventKind kind, EventPayload payload) {
    // Scheduling into the past or at a non-finite time is a simulator bug,
    // not a modeling condition.
    if (!(when >= now_) || !std::isfinite(when)) {
        throw std::logic_error("event scheduled before current simulation time");
    }
    SimEvent ev{when, next_seq_++, kind, payload};
    heap_.push(ev);
    ++live_count_;
    return EventHandle{ev.seq, true};
}

void EventQueue::cancel(EventHandle& handle) {
    if (!handle.valid) return;
    cancelled_.insert(handle.seq);
    handle.valid = false;
    if (live_count_ > 0) --live_count_;
}

std::optional<SimEvent> EventQueue::next_event() {
    while (!heap_.empty()) {
        SimEvent ev = heap_.top();
        heap_.pop();
        auto it = cancelled_.find(ev.seq);
        if (it != cancelled_.end()) {
            cancelled_.erase(it);
            continue;
        }
        now_ = ev.time;
        --live_count_;
        return ev;
    }
    return std::nullopt;
}

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

std::uint64_t fnv1a(std::string_view s) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

}  // namespace

RngStream::RngStream(std::uint64_t base_seed, std::uint64_t replication, std::string_view label)
    : engine_(splitmix64(splitmix64(splitmix64(base_seed) ^ replication) ^ fnv1a(label))) {}

double RngStream::uniform() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

double RngStream::exponential(double rate) {
    if (rate <= 0.0) return kTimeInfinity;
    // uniform() < 1 strictly, so log1p(-u) is finite.
    return -std::log1p(-uniform()) / rate;
}

std::size_t RngStream::uniform_index(std::size_t n) {
    if (n == 0) throw std::logic_error("uniform_index over empty range");
    if (n == 1) return 0;
    std::uint64_t mask = ~std::uint64_t{0} >> std::countl_zero(std::uint64_t{n - 1});
    std::uint64_t v;
    do {
        v = engine_() & mask;
    } while (v >= n);
    return static_cast<std::size_t>(v);
}

}  // namespace relsim
