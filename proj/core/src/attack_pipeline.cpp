#include "uiobank/attack_pipeline.hpp"

#include <cmath>

namespace uiobank {

Vec reconstruct_actuator_attack(const Vec& xhat_now, const Vec& xhat_prev, const Vec& u_prev,
                                const PlantModel& plant, const Tolerances& tol) {
    return reconstruct_actuator_attack(xhat_now, xhat_prev, u_prev, plant.A(), pinv(plant.B(), tol));
}

Vec reconstruct_actuator_attack(const Vec& xhat_now, const Vec& xhat_prev, const Vec& u_prev,
                                const Mat& a, const Mat& b_pinv) {
    if (xhat_now.size() != a.rows() || xhat_prev.size() != a.rows() || u_prev.size() != b_pinv.rows()) {
        fail(ErrorCode::invalid_input, "attack reconstruction dimensions mismatch");
    }
    return b_pinv * (xhat_now - a * xhat_prev) - u_prev;
}

Vec reconstruct_sensor_attack(const Vec& y_now, const Vec& xhat_now, const PlantModel& plant) {
    if (y_now.size() != plant.output_count() || xhat_now.size() != plant.n()) {
        fail(ErrorCode::invalid_input, "attack reconstruction dimensions mismatch");
    }
    return y_now - plant.C() * xhat_now;
}

void IsolationPolicy::validate() const {
    if (!(threshold > 0.0)) fail(ErrorCode::invalid_input, "isolation threshold must be positive");
    if (warmup < 1) fail(ErrorCode::invalid_input, "isolation warmup must be at least 1");
    if (window < 1) fail(ErrorCode::invalid_input, "isolation window must be at least 1");
}

IsolationFilter::IsolationFilter(int actuator_count, int sensor_count, IsolationPolicy policy)
    : policy_(policy), actuators_(static_cast<std::size_t>(actuator_count)),
      sensors_(static_cast<std::size_t>(sensor_count)) {
    policy_.validate();
    if (actuator_count < 0 || sensor_count < 0) {
        fail(ErrorCode::invalid_input, "channel counts must be non-negative");
    }
}

void IsolationFilter::update_side(std::vector<Channel>& side, const Vec& estimate,
                                  const std::vector<bool>* observable) {
    if (estimate.size() != static_cast<Eigen::Index>(side.size())) {
        fail(ErrorCode::invalid_input, "attack estimate has wrong length");
    }
    for (std::size_t i = 0; i < side.size(); ++i) {
        if (observable && !(*observable)[i]) continue; // no information, keep verdict
        if (std::abs(estimate(static_cast<Eigen::Index>(i))) > policy_.threshold) {
            side[i].member = true;
            side[i].quiet_run = 0;
        } else {
            ++side[i].quiet_run;
            if (side[i].quiet_run >= policy_.window) side[i].member = false;
        }
    }
}

void IsolationFilter::update(const Vec& actuator_estimate, const Vec& sensor_estimate) {
    update(actuator_estimate, sensor_estimate, std::vector<bool>(actuators_.size(), true));
}

void IsolationFilter::update(const Vec& actuator_estimate, const Vec& sensor_estimate,
                             const std::vector<bool>& actuator_observable) {
    if (actuator_observable.size() != actuators_.size()) {
        fail(ErrorCode::invalid_input, "observability mask has wrong length");
    }
    ++k_;
    if (k_ < policy_.warmup) return; // warmup samples are skipped
    update_side(actuators_, actuator_estimate, &actuator_observable);
    update_side(sensors_, sensor_estimate, nullptr);
}

bool IsolationFilter::ready() const { return k_ >= policy_.warmup; }

std::pair<IndexSet, IndexSet> IsolationFilter::isolated() const {
    if (!ready()) {
        fail(ErrorCode::not_ready, "isolation queried before warmup (k = " + std::to_string(k_) +
                                       ", warmup = " + std::to_string(policy_.warmup) + ")");
    }
    std::vector<int> au, ay;
    for (std::size_t i = 0; i < actuators_.size(); ++i) {
        if (actuators_[i].member) au.push_back(static_cast<int>(i) + 1);
    }
    for (std::size_t i = 0; i < sensors_.size(); ++i) {
        if (sensors_[i].member) ay.push_back(static_cast<int>(i) + 1);
    }
    return {IndexSet(std::move(au), static_cast<int>(actuators_.size())),
            IndexSet(std::move(ay), static_cast<int>(sensors_.size()))};
}

std::pair<IndexSet, IndexSet> isolate(std::span<const Vec> actuator_history,
                                      std::span<const Vec> sensor_history,
                                      const IsolationPolicy& policy, int actuator_count,
                                      int sensor_count) {
    if (actuator_history.size() != sensor_history.size()) {
        fail(ErrorCode::invalid_input, "attack-estimate histories differ in length");
    }
    IsolationFilter filter(actuator_count, sensor_count, policy);
    for (std::size_t j = 0; j < actuator_history.size(); ++j) {
        filter.update(actuator_history[j], sensor_history[j]);
    }
    return filter.isolated(); // throws not_ready on short histories
}

} // namespace uiobank
