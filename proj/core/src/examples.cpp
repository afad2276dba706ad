#include "uiobank/examples.hpp"

#include <cmath>
#include <cstdio>

namespace uiobank {

namespace {

SignalSpec uniform_signal(int channel, double low, double high) {
    SignalSpec s;
    s.kind = SignalSpec::Kind::uniform;
    s.channel = channel;
    s.low = low;
    s.high = high;
    return s;
}

Mat two_state_sensor_array() {
    Mat c(4, 2);
    c << 1, 3, 1, 1, 3, 2, 2, 1;
    return c;
}

Mat three_state_sensor_array() {
    Mat c(4, 3);
    c << 1, 2, 0, 0, 1, 1, 0, 1, 2, 1, 1, 1;
    return c;
}

void require_id(int id) {
    if (id < 1 || id > kExampleCount) {
        fail(ErrorCode::invalid_input, "example id must be in 1.." + std::to_string(kExampleCount));
    }
}

} // namespace

PlantModel example_plant(int id, const Tolerances& tol) {
    require_id(id);
    switch (id) {
    case 1:
    case 3: {
        Mat a(2, 2), b(2, 1);
        a << 0.2, 0.5, 0.2, 0.7;
        b << 1, 2;
        return PlantModel(a, b, two_state_sensor_array(), tol);
    }
    case 2:
    case 4: {
        Mat a(3, 3), b(3, 3);
        a << 0.5, 0, 0.1, 0.2, 0.7, 0, 1, 0, 0.3;
        b << 0.5, 0, 0.5, 1, 1, 0.1, 0, 0, 0.5;
        return PlantModel(a, b, three_state_sensor_array(), tol);
    }
    case 5: {
        Mat a(2, 2);
        a << 1.2, 0.5, 0.2, 0.7;
        return PlantModel(a, Mat::Identity(2, 2), two_state_sensor_array(), tol);
    }
    default: { // 6
        Mat a(3, 3), b(3, 3);
        a << 0.5, 0, 0.1, 0.2, 1.7, 0, 1, 0, 0.3;
        b << 0.5, 0, 1, 1, 1, 1, 0, 0, 1;
        return PlantModel(a, b, three_state_sensor_array(), tol);
    }
    }
}

Scenario example_scenario(int id, std::uint64_t seed) {
    require_id(id);
    Scenario s{example_plant(id)};
    s.horizon = 101;
    s.seed = seed;
    s.x0.kind = InitialStateSpec::Kind::gaussian;
    s.x0.mean = 0.0;
    s.x0.stddev = 1.0;

    switch (id) {
    case 1:
    case 3:
        s.estimator = EstimatorKind::complete;
        s.input_signals = {uniform_signal(1, -1, 1)};
        s.actuator_attacks = {uniform_signal(1, -10, 10)};
        s.sensor_attacks = {uniform_signal(3, -10, 10)};
        s.declared_attacked_actuators = IndexSet({1}, 1);
        s.declared_attacked_sensors = IndexSet({3}, 4);
        break;
    case 2:
    case 4:
        s.estimator = EstimatorKind::partial;
        s.input_signals = {uniform_signal(1, -1, 1), uniform_signal(2, -1, 1),
                           uniform_signal(3, -1, 1)};
        s.actuator_attacks = {uniform_signal(3, -10, 10)};
        s.sensor_attacks = {uniform_signal(2, -10, 10)};
        s.declared_attacked_actuators = IndexSet({3}, 3);
        s.declared_attacked_sensors = IndexSet({2}, 4);
        break;
    case 5: {
        s.estimator = EstimatorKind::complete;
        s.policy = InputPolicy::static_feedback;
        Mat k(2, 2);
        k << -1.2, 0.7, -0.2, -0.7; // known stabilizing gain, nilpotent closed loop
        s.static_gain = k;
        s.sensor_attacks = {uniform_signal(2, -10, 10)};
        s.declared_attacked_sensors = IndexSet({2}, 4);
        break;
    }
    default: // 6
        s.estimator = EstimatorKind::partial;
        s.policy = InputPolicy::switching_supervisor;
        s.actuator_attacks = {uniform_signal(3, -10, 10)};
        s.sensor_attacks = {uniform_signal(2, -10, 10)};
        s.declared_attacked_actuators = IndexSet({3}, 3);
        s.declared_attacked_sensors = IndexSet({2}, 4);
        break;
    }
    return s;
}

namespace {

ReproduceCheck check(const std::string& name, bool pass, const std::string& detail = "") {
    return {name, pass, detail};
}

std::string num(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.3g", v);
    return buf;
}

void check_envelope(ReproduceReport& report, const Trace& trace) {
    const double lambda_bar = 0.5 * (1.0 + trace.max_observer_radius);
    const EnvelopeCheck env = check_decay_envelope(trace.summary.error_norms, lambda_bar, 5);
    report.checks.push_back(check("error stays inside the fitted decay envelope", env.holds,
                                  "lambda = " + num(lambda_bar) + ", c = " + num(env.c_bar) +
                                      (env.holds ? "" : ", violated at k = " +
                                                            std::to_string(env.first_violation))));
    const double e0 = std::max(1.0, trace.summary.error_norms.front());
    const double e40 = trace.summary.error_norms.at(40);
    report.checks.push_back(check("estimation error at k = 40 is negligible", e40 <= 1e-6 * e0,
                                  "|e(40)| = " + num(e40)));
}

void check_isolation(ReproduceReport& report, const Trace& trace, const IndexSet& expected_au,
                     const IndexSet& expected_ay) {
    bool stable = true;
    for (std::size_t k = static_cast<std::size_t>(trace.isolation.warmup); k < trace.steps.size(); ++k) {
        if (!(trace.steps[k].isolated_actuators == expected_au &&
              trace.steps[k].isolated_sensors == expected_ay)) {
            stable = false;
            break;
        }
    }
    report.checks.push_back(check("isolated sets are {" + expected_au.to_string() + "} / {" +
                                      expected_ay.to_string() + "} from warmup on",
                                  stable));
}

void check_reconstruction_tail(ReproduceReport& report, const Trace& trace) {
    double max_au = 0.0, max_ay = 0.0, worst_u = 0.0, worst_y = 0.0;
    for (const StepRecord& rec : trace.steps) {
        max_au = std::max(max_au, max_abs(rec.a_u));
        max_ay = std::max(max_ay, max_abs(rec.a_y));
    }
    for (int k = 40; k <= 60; ++k) {
        const auto& now = trace.steps.at(static_cast<std::size_t>(k));
        const auto& prev = trace.steps.at(static_cast<std::size_t>(k - 1));
        worst_u = std::max(worst_u, max_abs(now.au_hat - prev.a_u));
        worst_y = std::max(worst_y, max_abs(now.ay_hat - now.a_y));
    }
    report.checks.push_back(check("actuator attack reconstructed to scale", worst_u <= 1e-5 * (1 + max_au),
                                  "max deviation " + num(worst_u)));
    report.checks.push_back(check("sensor attack reconstructed to scale", worst_y <= 1e-5 * (1 + max_ay),
                                  "max deviation " + num(worst_y)));
}

} // namespace

ReproduceReport reproduce_example(int id, std::uint64_t seed) {
    require_id(id);
    const Scenario scenario = example_scenario(id, seed);
    ReproduceReport report;
    report.id = id;
    report.trace = simulate(scenario);
    const Trace& trace = report.trace;

    report.checks.push_back(check("trace replays through the model", replay_check(trace, scenario)));

    switch (id) {
    case 1:
    case 2:
        check_envelope(report, trace);
        break;
    case 3:
        check_isolation(report, trace, IndexSet({1}, 1), IndexSet({3}, 4));
        check_reconstruction_tail(report, trace);
        break;
    case 4:
        check_isolation(report, trace, IndexSet({3}, 3), IndexSet({2}, 4));
        check_reconstruction_tail(report, trace);
        break;
    case 5: {
        const double x0 = std::max(1.0, trace.summary.initial_state_norm);
        const double x60 = trace.steps.at(60).x.norm();
        report.checks.push_back(check("state regulated to zero despite the sensor attack",
                                      x60 <= 1e-6 * x0, "|x(60)| = " + num(x60)));
        break;
    }
    default: { // 6
        bool settled = true;
        const IndexSet expect_off({3}, 3);
        for (std::size_t k = static_cast<std::size_t>(trace.isolation.warmup); k < trace.steps.size();
             ++k) {
            if (!(trace.steps[k].isolated_actuators == expect_off)) {
                settled = false;
                break;
            }
        }
        report.checks.push_back(check("attacked actuator isolated and switched off", settled));
        const double x0 = std::max(1.0, trace.summary.initial_state_norm);
        const double x100 = trace.steps.at(100).x.norm();
        report.checks.push_back(check("state regulated under the switching supervisor",
                                      x100 <= 1e-3 * x0, "|x(100)| = " + num(x100)));
        break;
    }
    }

    report.pass = true;
    for (const ReproduceCheck& c : report.checks) report.pass = report.pass && c.pass;
    return report;
}

} // namespace uiobank
