#pragma once

#include <chrono>

#include <sys/resource.h>

namespace fastrp {

/// Process CPU time (user + system) in seconds, the measure used for
/// all reported timings. Wall time is recorded alongside but CPU time
/// is what the scaling claims are stated in.
inline double process_cpu_seconds() {
    rusage u{};
    getrusage(RUSAGE_SELF, &u);
    const auto tv = [](const timeval& t) {
        return static_cast<double>(t.tv_sec) + static_cast<double>(t.tv_usec) * 1e-6;
    };
    return tv(u.ru_utime) + tv(u.ru_stime);
}

class WallTimer {
public:
    WallTimer() : start_(clock::now()) {}
    double seconds() const {
        return std::chrono::duration<double>(clock::now() - start_).count();
    }

private:
    using clock = std::chrono::steady_clock;
    clock::time_point start_;
};

/// Wall + CPU duration of one pipeline stage.
struct StageTiming {
    double wall_seconds = 0.0;
    double cpu_seconds = 0.0;
};

class StageTimer {
public:
    StageTimer() : cpu_start_(process_cpu_seconds()) {}
    StageTiming stop() const {
        return {wall_.seconds(), process_cpu_seconds() - cpu_start_};
    }

private:
    WallTimer wall_;
    double cpu_start_;
};

}  // namespace fastrp
