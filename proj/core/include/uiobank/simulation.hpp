#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "uiobank/attack_pipeline.hpp"
#include "uiobank/multi_observer.hpp"
#include "uiobank/switching_control.hpp"

namespace uiobank {

// One generated signal on one channel. Random kinds draw one sample per
// step from the channel's dedicated stream (see rng.hpp); samples before
// active_from are forced to zero, so the support never varies over time.
struct SignalSpec {
    enum class Kind { zero, constant, uniform, gaussian, impulse, custom };

    Kind kind = Kind::zero;
    int channel = 1; // 1-based
    double value = 0.0;            // constant / impulse amplitude
    double low = 0.0, high = 0.0;  // uniform
    double mean = 0.0, stddev = 1.0; // gaussian
    int at = 0;                    // impulse step
    std::vector<double> samples;   // custom (zero past the end)
    int active_from = 0;

    void validate(int channel_count, const char* what) const;
};

struct InitialStateSpec {
    enum class Kind { fixed, gaussian };
    Kind kind = Kind::fixed;
    Vec value;                       // fixed (defaults to zeros)
    double mean = 0.0, stddev = 1.0; // gaussian, per component
};

enum class EstimatorKind { complete, partial, none };
enum class InputPolicy { open_loop, static_feedback, switching_supervisor };

// Declarative experiment description; everything a run needs, including the
// seed, so two simulations of the same scenario are byte-identical.
struct Scenario {
    explicit Scenario(PlantModel plant_model) : plant(std::move(plant_model)) {}

    PlantModel plant;
    int horizon = 1;
    std::uint64_t seed = 0;

    InitialStateSpec x0;
    Vec xhat0; // empty = zeros

    EstimatorKind estimator = EstimatorKind::complete;
    PartialPriority priority = PartialPriority::actuators_first;
    std::size_t bank_cap = kDefaultBankCap;

    InputPolicy policy = InputPolicy::open_loop;
    std::vector<SignalSpec> input_signals;  // open_loop only
    std::optional<Mat> static_gain;         // static_feedback override

    std::vector<SignalSpec> actuator_attacks;
    std::vector<SignalSpec> sensor_attacks;

    IsolationPolicy isolation;
    Tolerances tol;

    std::optional<IndexSet> declared_attacked_actuators;
    std::optional<IndexSet> declared_attacked_sensors;

    // Hard errors throw (validation); soft issues (attack cardinality above
    // the scheme's tolerance, support outside the declared sets) come back
    // as warnings.
    std::vector<std::string> validate() const;
};

struct StepRecord {
    int k = 0;
    Vec x, u, a_u, a_y, y; // a_u is the actuation the plant really received
    Vec xhat, au_hat, ay_hat;
    std::string sigma;      // selected observer key, "" when no estimator runs
    double pi_min = 0.0;
    std::vector<std::pair<ObserverKey, double>> scores;
    IndexSet isolated_actuators, isolated_sensors;
    IndexSet active_actuators; // full set outside switching mode
};

struct TraceSummary {
    std::vector<double> error_norms;           // |xhat - x| per step
    std::optional<double> decay_rate;          // log-linear fit over the first ten steps
    std::optional<int> isolation_settle_step;  // first step from which the sets are final
    double terminal_state_norm = 0.0;
    double initial_state_norm = 0.0;
};

struct Trace {
    // Dimensions and run configuration snapshot needed by writers/metrics.
    int n = 0, input_count = 0, output_count = 0;
    EstimatorKind estimator = EstimatorKind::none;
    InputPolicy policy = InputPolicy::open_loop;
    IsolationPolicy isolation;
    double max_observer_radius = 0.0; // over the synthesized bank, 0 without estimator

    std::vector<StepRecord> steps;
    TraceSummary summary;
};

// Runs the scenario. Step order: read y(k); advance the bank with
// (u(k-1), y(k-1)) and form xhat(k) with y(k); reconstruct and isolate;
// compute u(k); advance the plant. Throws `diverged` when |x| passes 1e12.
Trace simulate(const Scenario& scenario);

// Re-derives every transition and output from the recorded signals; true
// iff the worst deviation is at most 1e-10.
bool replay_check(const Trace& trace, const Scenario& scenario);

// Recomputes the summary block from the recorded steps.
TraceSummary metrics(const Trace& trace);

// Decay-envelope fit: c_bar is fitted on steps [0, fit_steps] against
// c_bar * lambda_bar^k * max(1, e(0)); holds reports whether every later
// step stays inside the envelope. The envelope bottoms out at
// noise_floor * max(1, e(0)): once the true error reaches the accumulated
// round-off floor it stops shrinking, while lambda_bar^k does not.
struct EnvelopeCheck {
    double c_bar = 0.0;
    bool holds = false;
    int first_violation = -1;
};
EnvelopeCheck check_decay_envelope(const std::vector<double>& error_norms, double lambda_bar,
                                   int fit_steps, double noise_floor = 1e-12);

} // namespace uiobank
