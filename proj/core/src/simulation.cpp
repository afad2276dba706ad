#include "uiobank/simulation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "uiobank/rng.hpp"

namespace uiobank {

namespace {

constexpr double kDivergenceBound = 1e12;

void require(bool ok, const std::string& message) {
    if (!ok) fail(ErrorCode::validation, message);
}

} // namespace

void SignalSpec::validate(int channel_count, const char* what) const {
    const std::string where = std::string(what) + " signal on channel " + std::to_string(channel);
    if (channel < 1 || channel > channel_count) fail(ErrorCode::validation, where + ": channel out of range");
    if (active_from < 0) fail(ErrorCode::validation, where + ": active_from must be >= 0");
    auto finite = [&](double v, const char* name) {
        if (!std::isfinite(v)) fail(ErrorCode::validation, where + ": non-finite " + name);
    };
    switch (kind) {
    case Kind::zero: break;
    case Kind::constant: finite(value, "value"); break;
    case Kind::uniform:
        finite(low, "low");
        finite(high, "high");
        if (low > high) fail(ErrorCode::validation, where + ": uniform needs low <= high");
        break;
    case Kind::gaussian:
        finite(mean, "mean");
        finite(stddev, "stddev");
        if (stddev < 0) fail(ErrorCode::validation, where + ": negative stddev");
        break;
    case Kind::impulse:
        finite(value, "value");
        if (at < 0) fail(ErrorCode::validation, where + ": impulse step must be >= 0");
        break;
    case Kind::custom:
        for (double v : samples) finite(v, "sample");
        break;
    }
}

namespace {

// Evaluates one signal; random kinds consume one draw per step regardless of
// the activity gate so the stream stays aligned.
class SignalSource {
public:
    SignalSource(const SignalSpec& spec, std::uint64_t seed, std::uint64_t stream_base)
        : spec_(spec), stream_(seed, stream_base + static_cast<std::uint64_t>(spec.channel)) {}

    double sample(int k) {
        double v = 0.0;
        switch (spec_.kind) {
        case SignalSpec::Kind::zero: v = 0.0; break;
        case SignalSpec::Kind::constant: v = spec_.value; break;
        case SignalSpec::Kind::uniform: v = stream_.uniform(spec_.low, spec_.high); break;
        case SignalSpec::Kind::gaussian: v = stream_.gaussian(spec_.mean, spec_.stddev); break;
        case SignalSpec::Kind::impulse: v = (k == spec_.at) ? spec_.value : 0.0; break;
        case SignalSpec::Kind::custom:
            v = (k < static_cast<int>(spec_.samples.size())) ? spec_.samples[static_cast<std::size_t>(k)]
                                                             : 0.0;
            break;
        }
        return k >= spec_.active_from ? v : 0.0;
    }

    int channel() const { return spec_.channel; }

private:
    SignalSpec spec_;
    rng::Stream stream_;
};

std::vector<SignalSource> make_sources(const std::vector<SignalSpec>& specs, std::uint64_t seed,
                                       std::uint64_t stream_base) {
    std::vector<SignalSource> out;
    out.reserve(specs.size());
    for (const SignalSpec& s : specs) out.emplace_back(s, seed, stream_base);
    return out;
}

Vec sample_all(std::vector<SignalSource>& sources, int k, int length) {
    Vec v = Vec::Zero(length);
    for (SignalSource& s : sources) v(s.channel() - 1) += s.sample(k);
    return v;
}

void check_one_spec_per_channel(const std::vector<SignalSpec>& specs, const char* what) {
    std::vector<int> seen;
    for (const SignalSpec& s : specs) seen.push_back(s.channel);
    std::sort(seen.begin(), seen.end());
    if (std::adjacent_find(seen.begin(), seen.end()) != seen.end()) {
        fail(ErrorCode::validation, std::string(what) + ": more than one signal on the same channel");
    }
}

IndexSet support_of(const std::vector<SignalSpec>& specs, int universe) {
    std::vector<int> ch;
    for (const SignalSpec& s : specs) {
        if (s.kind != SignalSpec::Kind::zero) ch.push_back(s.channel);
    }
    std::sort(ch.begin(), ch.end());
    ch.erase(std::unique(ch.begin(), ch.end()), ch.end());
    return IndexSet(std::move(ch), universe);
}

} // namespace

std::vector<std::string> Scenario::validate() const {
    tol.validate();
    isolation.validate();
    require(horizon >= 1, "horizon must be at least 1");
    require(xhat0.size() == 0 || xhat0.size() == plant.n(), "xhat0 has wrong length");
    if (x0.kind == InitialStateSpec::Kind::fixed) {
        require(x0.value.size() == 0 || x0.value.size() == plant.n(), "x0 has wrong length");
    } else {
        require(std::isfinite(x0.mean) && std::isfinite(x0.stddev) && x0.stddev >= 0,
                "x0 distribution parameters invalid");
    }
    for (const SignalSpec& s : input_signals) s.validate(plant.input_count(), "input");
    for (const SignalSpec& s : actuator_attacks) s.validate(plant.input_count(), "actuator attack");
    for (const SignalSpec& s : sensor_attacks) s.validate(plant.output_count(), "sensor attack");
    check_one_spec_per_channel(input_signals, "input");
    check_one_spec_per_channel(actuator_attacks, "actuator attacks");
    check_one_spec_per_channel(sensor_attacks, "sensor attacks");
    require(policy == InputPolicy::open_loop || estimator != EstimatorKind::none,
            "feedback policies need an estimator");
    if (static_gain) {
        require(policy == InputPolicy::static_feedback, "static_gain only applies to static feedback");
        require(static_gain->rows() == plant.input_count() && static_gain->cols() == plant.n(),
                "static gain has wrong dimensions");
    }

    std::vector<std::string> warnings;
    const IndexSet au_support = support_of(actuator_attacks, plant.input_count());
    const IndexSet ay_support = support_of(sensor_attacks, plant.output_count());
    if (declared_attacked_actuators && !au_support.subset_of(*declared_attacked_actuators)) {
        warnings.push_back("actuator attack support exceeds the declared set");
    }
    if (declared_attacked_sensors && !ay_support.subset_of(*declared_attacked_sensors)) {
        warnings.push_back("sensor attack support exceeds the declared set");
    }
    if (estimator == EstimatorKind::complete) {
        const int q = complete_redundancy(plant, tol);
        if (ay_support.size() > q) {
            warnings.push_back("attacked sensors (" + std::to_string(ay_support.size()) +
                               ") exceed the complete scheme's tolerance q = " + std::to_string(q));
        }
    } else if (estimator == EstimatorKind::partial) {
        const PartialRedundancy pr = partial_redundancy(plant, tol, priority);
        if (au_support.size() > pr.q1) {
            warnings.push_back("attacked actuators (" + std::to_string(au_support.size()) +
                               ") exceed the partial scheme's tolerance q1 = " + std::to_string(pr.q1));
        }
        if (ay_support.size() > pr.q2) {
            warnings.push_back("attacked sensors (" + std::to_string(ay_support.size()) +
                               ") exceed the partial scheme's tolerance q2 = " + std::to_string(pr.q2));
        }
    }
    return warnings;
}

Trace simulate(const Scenario& scenario) {
    scenario.validate(); // hard errors only; warnings are the caller's business

    const PlantModel& plant = scenario.plant;
    const int n = plant.n();
    const int n_u = plant.input_count();
    const int n_y = plant.output_count();
    const Tolerances& tol = scenario.tol;

    // Estimator synthesis.
    std::optional<ObserverBank> bank;
    std::optional<CompleteBank> complete_bank;
    std::optional<PartialBank> partial_bank;
    if (scenario.estimator == EstimatorKind::complete) {
        const int q = complete_redundancy(plant, tol);
        if (q < 1) fail(ErrorCode::design_infeasible, "no sensor redundancy: complete scheme needs q >= 1");
        complete_bank = enumerate_complete_bank(plant, q, tol, scenario.bank_cap);
    } else if (scenario.estimator == EstimatorKind::partial) {
        const PartialRedundancy pr = partial_redundancy(plant, tol, scenario.priority);
        if (pr.q1 < 1 || pr.q2 < 1) {
            fail(ErrorCode::design_infeasible, "partial scheme needs q1 >= 1 and q2 >= 1 (got q1 = " +
                                                   std::to_string(pr.q1) + ", q2 = " +
                                                   std::to_string(pr.q2) + ")");
        }
        partial_bank = enumerate_partial_bank(plant, pr.q1, pr.q2, tol, scenario.bank_cap);
    }

    // Controller synthesis.
    Mat static_gain;
    std::optional<GainTable> gain_table;
    if (scenario.policy == InputPolicy::static_feedback) {
        static_gain = scenario.static_gain ? *scenario.static_gain : design_static_gain(plant, tol);
    } else if (scenario.policy == InputPolicy::switching_supervisor) {
        const int q_star = control_redundancy(plant, tol);
        int bound = q_star;
        if (scenario.estimator == EstimatorKind::partial) {
            bound = partial_bank->q1;
            if (bound > q_star) {
                fail(ErrorCode::unstabilizable_configuration,
                     "partial scheme tolerates q1 = " + std::to_string(bound) +
                         " attacked actuators but only " + std::to_string(q_star) +
                         " can be switched off");
            }
        }
        gain_table = design_switching_gains(plant, bound, tol);
    }

    // Seeded signal sources.
    auto inputs = make_sources(scenario.input_signals, scenario.seed, rng::kInputStreamBase);
    auto au_attacks = make_sources(scenario.actuator_attacks, scenario.seed, rng::kActuatorAttackStreamBase);
    auto ay_attacks = make_sources(scenario.sensor_attacks, scenario.seed, rng::kSensorAttackStreamBase);

    Vec x;
    if (scenario.x0.kind == InitialStateSpec::Kind::fixed) {
        x = scenario.x0.value.size() == 0 ? Vec::Zero(n) : scenario.x0.value;
    } else {
        rng::Stream stream(scenario.seed, rng::kInitialStateStream);
        x = Vec(n);
        for (int i = 0; i < n; ++i) x(i) = stream.gaussian(scenario.x0.mean, scenario.x0.stddev);
    }
    const Vec xhat0 = scenario.xhat0.size() == 0 ? Vec::Zero(n) : scenario.xhat0;

    const Mat b_pinv = pinv(plant.B(), tol);
    IsolationFilter filter(n_u, n_y, scenario.isolation);
    const IndexSet full_actuators = IndexSet::full_set(n_u);

    Trace trace;
    trace.n = n;
    trace.input_count = n_u;
    trace.output_count = n_y;
    trace.estimator = scenario.estimator;
    trace.policy = scenario.policy;
    trace.isolation = scenario.isolation;
    trace.steps.reserve(static_cast<std::size_t>(scenario.horizon));

    Vec u_prev = Vec::Zero(n_u);
    Vec xhat_prev = xhat0;
    IndexSet active_prev = full_actuators; // connections behind the sample au_hat(k) refers to

    for (int k = 0; k < scenario.horizon; ++k) {
        StepRecord rec;
        rec.k = k;
        rec.x = x;

        const Vec a_u_generated = sample_all(au_attacks, k, n_u);
        rec.a_y = sample_all(ay_attacks, k, n_y);
        rec.y = plant.C() * x + rec.a_y;

        // Estimation.
        if (scenario.estimator != EstimatorKind::none) {
            if (k == 0) {
                if (complete_bank) bank.emplace(*complete_bank, xhat0, rec.y);
                else bank.emplace(*partial_bank, plant.B(), xhat0, rec.y);
                trace.max_observer_radius = bank->max_dynamics_radius();
            }
            SelectionRecord sel = (k == 0) ? bank->initial(rec.y) : bank->step(u_prev, rec.y);
            rec.xhat = sel.estimate;
            rec.sigma = sel.selected.to_string();
            rec.pi_min = sel.min_score;
            rec.scores = std::move(sel.scores);
        } else {
            rec.xhat = Vec::Zero(n);
        }

        // Reconstruction and isolation.
        if (scenario.estimator != EstimatorKind::none) {
            rec.au_hat = (k == 0) ? Vec::Zero(n_u)
                                  : reconstruct_actuator_attack(rec.xhat, xhat_prev, u_prev,
                                                                plant.A(), b_pinv);
            rec.ay_hat = reconstruct_sensor_attack(rec.y, rec.xhat, plant);
            std::vector<bool> observable(static_cast<std::size_t>(n_u), false);
            for (int i : active_prev.indices()) observable[static_cast<std::size_t>(i - 1)] = true;
            filter.update(rec.au_hat, rec.ay_hat, observable);
            if (filter.ready()) {
                auto [w_u, w_y] = filter.isolated();
                rec.isolated_actuators = std::move(w_u);
                rec.isolated_sensors = std::move(w_y);
            } else {
                rec.isolated_actuators = IndexSet::empty_set(n_u);
                rec.isolated_sensors = IndexSet::empty_set(n_y);
            }
        } else {
            rec.au_hat = Vec::Zero(n_u);
            rec.ay_hat = Vec::Zero(n_y);
            rec.isolated_actuators = IndexSet::empty_set(n_u);
            rec.isolated_sensors = IndexSet::empty_set(n_y);
        }

        // Control.
        rec.active_actuators = full_actuators;
        switch (scenario.policy) {
        case InputPolicy::open_loop: rec.u = sample_all(inputs, k, n_u); break;
        case InputPolicy::static_feedback: rec.u = static_gain * rec.xhat; break;
        case InputPolicy::switching_supervisor: {
            SupervisorCommand cmd = supervisor_step(rec.isolated_actuators, *gain_table, rec.xhat);
            rec.active_actuators = std::move(cmd.active);
            rec.u = std::move(cmd.input);
            break;
        }
        }

        // Switched-off channels are physically disconnected: neither the
        // command (already zero) nor the attack reaches the plant.
        rec.a_u = a_u_generated;
        if (scenario.policy == InputPolicy::switching_supervisor) {
            for (int i = 1; i <= n_u; ++i) {
                if (!rec.active_actuators.contains(i)) rec.a_u(i - 1) = 0.0;
            }
        }

        const Vec x_next = plant.A() * x + plant.B() * (rec.u + rec.a_u);
        u_prev = rec.u;
        xhat_prev = rec.xhat;
        active_prev = rec.active_actuators;
        trace.steps.push_back(std::move(rec));

        if (!x_next.allFinite() || x_next.norm() > kDivergenceBound) {
            fail(ErrorCode::diverged, "state diverged at step " + std::to_string(k + 1));
        }
        x = x_next;
    }

    trace.summary = metrics(trace);
    return trace;
}

bool replay_check(const Trace& trace, const Scenario& scenario) {
    const PlantModel& plant = scenario.plant;
    if (trace.steps.empty()) return false;
    double worst = 0.0;
    for (std::size_t k = 0; k < trace.steps.size(); ++k) {
        const StepRecord& rec = trace.steps[k];
        worst = std::max(worst, max_abs(rec.y - (plant.C() * rec.x + rec.a_y)));
        if (k + 1 < trace.steps.size()) {
            const Vec x_next = plant.A() * rec.x + plant.B() * (rec.u + rec.a_u);
            worst = std::max(worst, max_abs(trace.steps[k + 1].x - x_next));
        }
    }
    return worst <= 1e-10;
}

TraceSummary metrics(const Trace& trace) {
    TraceSummary out;
    if (trace.steps.empty()) return out;
    out.initial_state_norm = trace.steps.front().x.norm();
    out.terminal_state_norm = trace.steps.back().x.norm();

    if (trace.estimator != EstimatorKind::none) {
        out.error_norms.reserve(trace.steps.size());
        for (const StepRecord& rec : trace.steps) out.error_norms.push_back((rec.xhat - rec.x).norm());

        // Log-linear fit over the first ten samples with positive error.
        double sx = 0, sy = 0, sxx = 0, sxy = 0;
        int m = 0;
        for (int k = 0; k < std::min<int>(10, static_cast<int>(out.error_norms.size())); ++k) {
            const double e = out.error_norms[static_cast<std::size_t>(k)];
            if (e <= 0.0) continue;
            const double ly = std::log(e);
            sx += k;
            sy += ly;
            sxx += static_cast<double>(k) * k;
            sxy += k * ly;
            ++m;
        }
        if (m >= 2 && (m * sxx - sx * sx) > 0) {
            out.decay_rate = std::exp((m * sxy - sx * sy) / (m * sxx - sx * sx));
        }

        // First step from which both isolated sets keep their final value,
        // never earlier than the warmup.
        const IndexSet& final_au = trace.steps.back().isolated_actuators;
        const IndexSet& final_ay = trace.steps.back().isolated_sensors;
        int settle = static_cast<int>(trace.steps.size()) - 1;
        while (settle > 0 && trace.steps[static_cast<std::size_t>(settle - 1)].isolated_actuators == final_au &&
               trace.steps[static_cast<std::size_t>(settle - 1)].isolated_sensors == final_ay) {
            --settle;
        }
        out.isolation_settle_step = std::max(settle, trace.isolation.warmup);
    }
    return out;
}

EnvelopeCheck check_decay_envelope(const std::vector<double>& error_norms, double lambda_bar,
                                   int fit_steps, double noise_floor) {
    EnvelopeCheck out;
    if (error_norms.empty() || !(lambda_bar > 0.0)) return out;
    const double scale = std::max(1.0, error_norms.front());
    double c_bar = 0.0;
    double pow_l = 1.0;
    for (int k = 0; k <= std::min<int>(fit_steps, static_cast<int>(error_norms.size()) - 1); ++k) {
        c_bar = std::max(c_bar, error_norms[static_cast<std::size_t>(k)] / (pow_l * scale));
        pow_l *= lambda_bar;
    }
    out.c_bar = c_bar;
    out.holds = true;
    pow_l = 1.0;
    for (std::size_t k = 0; k < error_norms.size(); ++k) {
        if (error_norms[k] > std::max(c_bar * pow_l, noise_floor) * scale) {
            out.holds = false;
            out.first_violation = static_cast<int>(k);
            break;
        }
        pow_l *= lambda_bar;
    }
    return out;
}

} // namespace uiobank
