#pragma once

#include <algorithm>
#include <chrono>
#include <cmath>
#include <map>
#include <string>
#include <vector>

namespace painterly {

struct StageSummary {
    double meanMs = 0.0;
    double medianMs = 0.0;
    double p99Ms = 0.0;
    std::size_t samples = 0;
};

/// Nearest-rank percentile over a copy of the samples.
inline double percentile(std::vector<double> samples, double q) {
    if (samples.empty()) return 0.0;
    std::sort(samples.begin(), samples.end());
    const auto rank = static_cast<std::size_t>(std::ceil(q * double(samples.size())));
    return samples[std::clamp<std::size_t>(rank, 1, samples.size()) - 1];
}

inline StageSummary summarize(const std::vector<double>& ms) {
    StageSummary s;
    s.samples = ms.size();
    if (ms.empty()) return s;
    double sum = 0.0;
    for (double v : ms) sum += v;
    s.meanMs = sum / double(ms.size());
    s.medianMs = percentile(ms, 0.5);
    s.p99Ms = percentile(ms, 0.99);
    return s;
}

/// Per-stage wall-clock samples in milliseconds, keyed by stage name.
class StageTimings {
public:
    void record(const std::string& stage, double ms) {
        if (!samples_.count(stage)) order_.push_back(stage);
        samples_[stage].push_back(ms);
    }

    const std::vector<std::string>& stages() const noexcept { return order_; }
    const std::vector<double>& samples(const std::string& stage) const { return samples_.at(stage); }
    StageSummary summary(const std::string& stage) const { return summarize(samples_.at(stage)); }
    void clear() {
        samples_.clear();
        order_.clear();
    }

private:
    std::map<std::string, std::vector<double>> samples_;
    std::vector<std::string> order_;
};

class ScopedTimer {
public:
    ScopedTimer(StageTimings& sink, std::string stage) : sink_(sink), stage_(std::move(stage)) {}
    ~ScopedTimer() {
        const auto elapsed = std::chrono::steady_clock::now() - start_;
        sink_.record(stage_, std::chrono::duration<double, std::milli>(elapsed).count());
    }
    ScopedTimer(const ScopedTimer&) = delete;
    ScopedTimer& operator=(const ScopedTimer&) = delete;

private:
    StageTimings& sink_;
    std::string stage_;
    std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

}  // namespace painterly
