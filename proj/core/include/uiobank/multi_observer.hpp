#pragma once

#include <span>
#include <string>
#include <utility>
#include <vector>

#include "uiobank/uio_design.hpp"

namespace uiobank {

// Identifies one observer in a bank. Complete-scheme observers carry an
// empty actuator part; partial-scheme observers carry both parts. Ordering
// is lexicographic (actuators, then sensors) and defines argmin tie-breaks.
struct ObserverKey {
    IndexSet actuators;
    IndexSet sensors;

    bool operator==(const ObserverKey&) const = default;
    std::strong_ordering operator<=>(const ObserverKey& other) const {
        if (auto c = actuators <=> other.actuators; c != 0) return c;
        return sensors <=> other.sensors;
    }

    // "1;2;4" for a sensor-only key, "3|1;3;4" for an actuator/sensor pair.
    std::string to_string() const;
};

// Runtime state of a single observer.
//
// Timing: the estimate at step k uses the fresh sample y(k) through the
// E-term, while the internal state advances on the previous pair
// (u(k-1), y(k-1)); the previous selected output is therefore kept here.
class UioRunner {
public:
    UioRunner(const CompleteUioDesign& design, const Vec& xhat0, const Vec& y0);
    UioRunner(const PartialUioDesign& design, const Mat& input_matrix, const Vec& xhat0, const Vec& y0);

    // Advances z with (u_prev, y_prev) and returns the estimate formed with
    // the new sample y_now. Complete observers ignore u_prev entirely.
    Vec step(const Vec& u_prev, const Vec& y_now);

    // Estimate without advancing (used for the step-0 record).
    Vec estimate(const Vec& y_now) const;

    const Vec& state() const { return z_; }
    const ObserverKey& key() const { return key_; }
    double dynamics_radius() const { return radius_; }

private:
    Vec select(const Vec& y) const;

    ObserverKey key_;
    Mat n_, l_, e_;
    Mat tb_; // T * B, empty for complete observers
    std::vector<int> rows_;
    Vec z_;
    Vec y_prev_sel_;
    double radius_ = 0.0;
    bool uses_input_ = false;
    int input_count_ = 0;
    int output_count_ = 0;
};

// Largest Euclidean deviation between a candidate estimate and its
// reference-family estimates (the per-candidate score pi).
double max_deviation(const Vec& candidate, std::span<const Vec> references);

// Index of the minimal score; ties go to the lexicographically smallest key.
std::size_t select_min(std::span<const std::pair<ObserverKey, double>> scores);

// One step of the bank: every candidate's score, the selected key, and the
// selected estimate.
struct SelectionRecord {
    int k = 0;
    std::vector<std::pair<ObserverKey, double>> scores;
    ObserverKey selected;
    Vec estimate;
    double min_score = 0.0;
};

// Bank runtime: steps all observers, computes deviations, and selects the
// trusted estimate. Deterministic: member order and tie-breaks are fixed.
class ObserverBank {
public:
    ObserverBank(const CompleteBank& bank, const Vec& xhat0, const Vec& y0);
    ObserverBank(const PartialBank& bank, const Mat& input_matrix, const Vec& xhat0, const Vec& y0);

    // Record at k = 0 (before any dynamics step); every estimate equals the
    // common initialization, so all scores are exactly the computed zeros.
    SelectionRecord initial(const Vec& y0) const;

    // Advances every observer once with (u_prev, y_now) and performs the
    // selection at the advanced time.
    SelectionRecord step(const Vec& u_prev, const Vec& y_now);

    int time() const { return k_; }
    std::size_t candidate_count() const { return candidates_.size(); }
    std::size_t reference_count() const { return references_.size(); }
    const std::vector<std::size_t>& family(std::size_t candidate_index) const;
    double max_dynamics_radius() const;

private:
    SelectionRecord make_record(int k, const std::vector<Vec>& cand_est,
                                const std::vector<Vec>& ref_est) const;

    std::vector<UioRunner> candidates_;
    std::vector<UioRunner> references_;
    std::vector<std::vector<std::size_t>> families_; // candidate -> reference indices
    int k_ = 0;
};

} // namespace uiobank
