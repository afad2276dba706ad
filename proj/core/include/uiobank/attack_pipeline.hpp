#pragma once

#include <span>
#include <utility>
#include <vector>

#include "uiobank/plant.hpp"

namespace uiobank {

// Model-matching reconstruction of the actuator attack. Two consecutive
// selected estimates are needed, so the result at step k estimates the
// attack applied at step k-1 (one-step delay).
Vec reconstruct_actuator_attack(const Vec& xhat_now, const Vec& xhat_prev, const Vec& u_prev,
                                const PlantModel& plant, const Tolerances& tol = {});

// Fast-path overload with a precomputed left inverse of B.
Vec reconstruct_actuator_attack(const Vec& xhat_now, const Vec& xhat_prev, const Vec& u_prev,
                                const Mat& a, const Mat& b_pinv);

// Sensor attack reconstruction y(k) - C xhat(k); no delay.
Vec reconstruct_sensor_attack(const Vec& y_now, const Vec& xhat_now, const PlantModel& plant);

// Thresholded-support isolation with warmup and persistence. The exact
// support of the reconstructed signals is meaningless in floats; a channel
// is isolated while any sample in the trailing window exceeds the threshold
// and returns to service after `window` consecutive quiet samples.
struct IsolationPolicy {
    double threshold = 1e-3;
    int warmup = 20; // samples with k < warmup are skipped entirely
    int window = 5;  // persistence length; window = 1 is the plain support rule

    void validate() const;
};

// Streaming isolation state. Samples taken while a channel is disconnected
// carry no information about the physical attack and are skipped for that
// channel (`observable` mask); a disconnected channel keeps its verdict.
class IsolationFilter {
public:
    IsolationFilter(int actuator_count, int sensor_count, IsolationPolicy policy);

    void update(const Vec& actuator_estimate, const Vec& sensor_estimate);
    void update(const Vec& actuator_estimate, const Vec& sensor_estimate,
                const std::vector<bool>& actuator_observable);

    bool ready() const; // true once the sample at k = warmup has been seen
    // (isolated actuators, isolated sensors); throws not_ready before warmup.
    std::pair<IndexSet, IndexSet> isolated() const;

private:
    struct Channel {
        bool member = false;
        int quiet_run = 0;
    };
    void update_side(std::vector<Channel>& side, const Vec& estimate,
                     const std::vector<bool>* observable);

    IsolationPolicy policy_;
    std::vector<Channel> actuators_;
    std::vector<Channel> sensors_;
    int k_ = -1; // last sample index fed
};

// One-shot isolation over recorded histories (entry j is the sample at
// step j). Throws not_ready when the history is shorter than the warmup.
std::pair<IndexSet, IndexSet> isolate(std::span<const Vec> actuator_history,
                                      std::span<const Vec> sensor_history,
                                      const IsolationPolicy& policy, int actuator_count,
                                      int sensor_count);

} // namespace uiobank
