#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <vector>

#include "routesim/packet.hpp"

namespace routesim {

struct DeliveryRecord {
    std::uint64_t packet_id;
    NodeId src, dst;
    double created_at;
    double delivered_at;
    int hop_count;       // transmissions taken
    double reward_sum;   // sum of q+l over the hop trail
    double delivery_time() const { return delivered_at - created_at; }
};

class Metrics {
public:
    void record(const Packet& p) {
        records_.push_back({p.id, p.src, p.dst, p.created_at, *p.delivered_at,
                            static_cast<int>(p.hops.size()) - 1, p.reward_sum});
        sum_delivery_time_ += *p.delivered_at - p.created_at;
    }

    int delivered_count() const { return static_cast<int>(records_.size()); }
    double sum_delivery_time() const { return sum_delivery_time_; }

    std::optional<double> average_delivery_time() const {
        if (records_.empty()) return std::nullopt;
        return sum_delivery_time_ / static_cast<double>(records_.size());
    }

    const std::vector<DeliveryRecord>& records() const { return records_; }

    std::uint64_t created_count = 0;  // set by the simulator

private:
    std::vector<DeliveryRecord> records_;
    double sum_delivery_time_ = 0.0;
};

// Mean delivery time over packets delivered within [window_start, window_end);
// empty windows yield nullopt.
inline std::optional<double> average_delivery_time(const Metrics& m, double window_start,
                                                   double window_end) {
    double sum = 0.0;
    int count = 0;
    for (const auto& r : m.records())
        if (r.delivered_at >= window_start && r.delivered_at < window_end) {
            sum += r.delivery_time();
            ++count;
        }
    if (count == 0) return std::nullopt;
    return sum / count;
}

struct WindowStat {
    double start, end;
    int count;
    double sum;
    std::optional<double> mean() const {
        if (count == 0) return std::nullopt;
        return sum / count;
    }
};

// Partition [0, horizon) into contiguous windows of window_ms and bucket
// deliveries by delivery instant.
inline std::vector<WindowStat> window_stats(const Metrics& m, double window_ms, double horizon) {
    const int n = static_cast<int>(std::ceil(horizon / window_ms));
    std::vector<WindowStat> out;
    out.reserve(n);
    for (int i = 0; i < n; ++i)
        out.push_back({i * window_ms, std::min((i + 1) * window_ms, horizon), 0, 0.0});
    for (const auto& r : m.records()) {
        if (r.delivered_at < 0 || r.delivered_at >= horizon) continue;
        auto& w = out[static_cast<int>(r.delivered_at / window_ms)];
        w.count += 1;
        w.sum += r.delivery_time();
    }
    return out;
}

// Mean and sample standard deviation; std is nullopt with fewer than two
// values.
struct MeanStd {
    double mean = 0.0;
    std::optional<double> std;
};

inline MeanStd mean_std(const std::vector<double>& xs) {
    MeanStd out;
    if (xs.empty()) return out;
    double s = 0.0;
    for (double x : xs) s += x;
    out.mean = s / xs.size();
    if (xs.size() >= 2) {
        double ss = 0.0;
        for (double x : xs) ss += (x - out.mean) * (x - out.mean);
        out.std = std::sqrt(ss / (xs.size() - 1));
    }
    return out;
}

}  // namespace routesim
