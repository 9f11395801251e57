#pragma once

#include <chrono>
#include <limits>
#include <stdexcept>

namespace mrpp {

/// Cooperative wall-clock deadline polled inside long-running loops.
class Deadline {
public:
    using Clock = std::chrono::steady_clock;

    static Deadline never() { return Deadline(Clock::time_point::max()); }
    static Deadline after(double seconds) {
        if (!(seconds < 1e9)) return never();
        return Deadline(Clock::now() + std::chrono::duration_cast<Clock::duration>(std::chrono::duration<double>(seconds)));
    }

    bool expired() const { return at_ != Clock::time_point::max() && Clock::now() >= at_; }
    bool unlimited() const { return at_ == Clock::time_point::max(); }
    double remaining_seconds() const {
        if (unlimited()) return std::numeric_limits<double>::infinity();
        return std::chrono::duration<double>(at_ - Clock::now()).count();
    }

private:
    explicit Deadline(Clock::time_point at) : at_(at) {}
    Clock::time_point at_;
};

/// Thrown from deep inside a search when its deadline passes.
class DeadlineExceeded : public std::runtime_error {
public:
    DeadlineExceeded() : std::runtime_error("deadline exceeded") {}
};

class Stopwatch {
public:
    Stopwatch() : start_(std::chrono::steady_clock::now()) {}
    double seconds() const { return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count(); }

private:
    std::chrono::steady_clock::time_point start_;
};

}  // namespace mrpp
