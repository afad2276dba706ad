// Acceptance suite: runs every contract criterion at its stated tolerance
// and prints one PASS/FAIL line per criterion (details indented below it).
// The process exits non-zero when any criterion fails.

#include <chrono>
#include <cstdio>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "../support/oracles.hpp"
#include "uiobank/examples.hpp"
#include "uiobank/io.hpp"
#include "uiobank/rng.hpp"

using namespace uiobank;

namespace {

struct Criterion {
    int id = 0;
    std::string title;
    bool pass = true;
    std::vector<std::string> notes{};

    void require(bool ok, const std::string& note) {
        if (!ok) {
            pass = false;
            notes.push_back("FAIL " + note);
        }
    }
    void note(const std::string& text) { notes.push_back(text); }
};

double seconds_since(std::chrono::steady_clock::time_point start) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

std::string num(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.4g", v);
    return buf;
}

constexpr int kSeeds = 20;

// ---------------------------------------------------------------------------

void criterion_1_indices(Criterion& c) {
    struct Case {
        int example;
        std::function<bool(const PlantModel&, std::string&)> check;
    };
    auto timed = [&](int id, auto&& fn) {
        const PlantModel p = example_plant(id);
        const auto start = std::chrono::steady_clock::now();
        std::string detail;
        const bool ok = fn(p, detail);
        const double s = seconds_since(start);
        if (ok) c.note("ok   example " + std::to_string(id) + ": " + detail);
        else c.require(false, "example " + std::to_string(id) + ": " + detail);
        c.require(s < 1.0, "example " + std::to_string(id) + " runtime " + num(s) + " s (limit 1 s)");
    };
    timed(1, [](const PlantModel& p, std::string& d) {
        const int q = complete_redundancy(p);
        d = "q = " + std::to_string(q) + " (want 1)";
        return q == 1;
    });
    timed(2, [](const PlantModel& p, std::string& d) {
        const PartialRedundancy pr = partial_redundancy(p);
        d = "q1 = " + std::to_string(pr.q1) + ", q2 = " + std::to_string(pr.q2) + " (want 1, 1)";
        return pr.q1 == 1 && pr.q2 == 1;
    });
    timed(5, [](const PlantModel& p, std::string& d) {
        const int q = complete_redundancy(p);
        d = "q = " + std::to_string(q) + " (want 1)";
        return q == 1;
    });
    timed(6, [](const PlantModel& p, std::string& d) {
        const int qs = control_redundancy(p);
        const PartialRedundancy pr = partial_redundancy(p);
        d = "q* = " + std::to_string(qs) + " (want 2), q1 = " + std::to_string(pr.q1) +
            ", q2 = " + std::to_string(pr.q2) + " (want 1, 1)";
        return qs == 2 && pr.q1 == 1 && pr.q2 == 1;
    });
}

void criterion_2_bank_sizes(Criterion& c) {
    const std::size_t complete_size = enumerate_complete_bank(example_plant(1), 1).size();
    c.require(complete_size == 10, "example 1 complete bank size != 10");
    if (complete_size == 10) c.note("ok   example 1: 10 complete observers");
    for (int id : {2, 6}) {
        try {
            const PartialBank bank = enumerate_partial_bank(example_plant(id), 1, 1);
            c.require(bank.size() == 30, "example " + std::to_string(id) + " partial bank size " +
                                             std::to_string(bank.size()) + " (want 30)");
        } catch (const Error& e) {
            c.require(false, "example " + std::to_string(id) + " bank synthesis: " + e.what());
        }
    }
}

void criterion_3_residuals(Criterion& c) {
    const Tolerances tol;
    std::size_t designs = 0;
    double worst_residual = 0.0, worst_radius = 0.0;

    auto take_complete = [&](const PlantModel& p, const CompleteUioDesign& d) {
        worst_residual = std::max(worst_residual, design_residual(p, d));
        worst_radius = std::max(worst_radius, spectral_radius(d.N));
        ++designs;
    };
    auto take_partial = [&](const PlantModel& p, const PartialUioDesign& d) {
        worst_residual = std::max(worst_residual, design_residual(p, d));
        worst_radius = std::max(worst_radius, spectral_radius(d.N));
        ++designs;
    };

    for (int id : {1, 5}) {
        const PlantModel p = example_plant(id);
        const CompleteBank bank = enumerate_complete_bank(p, 1);
        for (const auto& d : bank.candidates) take_complete(p, d);
        for (const auto& d : bank.references) take_complete(p, d);
    }
    // the three-state examples: every feasible pair at the bank cardinalities
    for (int id : {2, 6}) {
        const PlantModel p = example_plant(id);
        for (int ac : {1, 2}) {
            for (const IndexSet& ju : IndexSet::subsets_of_size(3, ac)) {
                for (int sc : {2, 3}) {
                    for (const IndexSet& js : IndexSet::subsets_of_size(4, sc)) {
                        if (partial_feasible(p, ju, js)) take_partial(p, design_partial(p, ju, js));
                    }
                }
            }
        }
    }

    int complete_plants = 0, partial_plants = 0;
    for (std::uint64_t seed = 100; complete_plants < 25; ++seed) {
        if (auto p = oracle::random_complete_feasible_plant(seed)) {
            const int q = complete_redundancy(*p);
            const CompleteBank bank = enumerate_complete_bank(*p, q);
            for (const auto& d : bank.candidates) take_complete(*p, d);
            for (const auto& d : bank.references) take_complete(*p, d);
            ++complete_plants;
        }
    }
    for (std::uint64_t seed = 500; partial_plants < 25; ++seed) {
        if (auto p = oracle::random_partial_feasible_plant(seed)) {
            const PartialRedundancy pr = partial_redundancy(*p);
            const PartialBank bank = enumerate_partial_bank(*p, pr.q1, pr.q2);
            for (const auto& d : bank.candidates) take_partial(*p, d);
            for (const auto& d : bank.references) take_partial(*p, d);
            ++partial_plants;
        }
    }

    c.note(std::to_string(designs) + " designs over " +
           std::to_string(2 + 2 + complete_plants + partial_plants) +
           " plants: worst residual " + num(worst_residual) + ", worst radius " + num(worst_radius));
    c.require(worst_residual <= 1e-8, "max design residual " + num(worst_residual) + " > 1e-8");
    c.require(worst_radius <= 1.0 - 1e-6, "max observer radius " + num(worst_radius) + " > 1 - 1e-6");
}

void criterion_4_decay(Criterion& c) {
    for (int id : {1, 2}) {
        const auto start = std::chrono::steady_clock::now();
        bool all_ok = true;
        std::string detail;
        for (int seed = 1; seed <= kSeeds && all_ok; ++seed) {
            try {
                const Trace trace = simulate(example_scenario(id, static_cast<std::uint64_t>(seed)));
                const double lambda_bar = 0.5 * (1.0 + trace.max_observer_radius);
                const EnvelopeCheck env =
                    check_decay_envelope(trace.summary.error_norms, lambda_bar, 5);
                const double scale = std::max(1.0, trace.summary.error_norms.front());
                const double e40 = trace.summary.error_norms.at(40);
                if (!env.holds) {
                    all_ok = false;
                    detail = "seed " + std::to_string(seed) + ": envelope violated at k = " +
                             std::to_string(env.first_violation);
                } else if (e40 > 1e-6 * scale) {
                    all_ok = false;
                    detail = "seed " + std::to_string(seed) + ": |e(40)| = " + num(e40);
                }
            } catch (const Error& e) {
                all_ok = false;
                detail = e.what();
            }
        }
        const double s = seconds_since(start);
        if (all_ok) c.note("ok   example " + std::to_string(id) + ": " + std::to_string(kSeeds) +
                           " seeds inside the envelope, |e(40)| below 1e-6");
        else c.require(false, "example " + std::to_string(id) + ": " + detail);
        c.require(s < 5.0, "example " + std::to_string(id) + " runtime " + num(s) + " s (limit 5 s)");
    }
}

void criterion_5_reconstruction(Criterion& c) {
    for (int id : {3, 4}) {
        bool all_ok = true;
        std::string detail;
        for (int seed = 1; seed <= kSeeds && all_ok; ++seed) {
            try {
                const Trace trace = simulate(example_scenario(id, static_cast<std::uint64_t>(seed)));
                double max_au = 0, max_ay = 0, worst_u = 0, worst_y = 0;
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
                if (worst_u > 1e-5 * (1 + max_au) || worst_y > 1e-5 * (1 + max_ay)) {
                    all_ok = false;
                    detail = "seed " + std::to_string(seed) + ": actuator dev " + num(worst_u) +
                             ", sensor dev " + num(worst_y);
                }
            } catch (const Error& e) {
                all_ok = false;
                detail = e.what();
            }
        }
        if (all_ok) c.note("ok   example " + std::to_string(id) + ": reconstruction tails in bounds");
        else c.require(false, "example " + std::to_string(id) + ": " + detail);
    }

    // one-step actuator delay, shown with an impulse
    try {
        Scenario s = example_scenario(3, 1);
        SignalSpec impulse;
        impulse.kind = SignalSpec::Kind::impulse;
        impulse.channel = 1;
        impulse.at = 30;
        impulse.value = 7.0;
        s.actuator_attacks = {impulse};
        const Trace trace = simulate(s);
        const bool delayed = std::abs(trace.steps[31].au_hat(0) - 7.0) < 1e-6 &&
                             max_abs(trace.steps[30].au_hat) < 1e-6 &&
                             max_abs(trace.steps[32].au_hat) < 1e-6;
        c.require(delayed, "impulse at k = 30 did not surface exactly at k = 31");
    } catch (const Error& e) {
        c.require(false, std::string("impulse run: ") + e.what());
    }
}

void criterion_6_isolation(Criterion& c) {
    struct Want {
        int id;
        IndexSet au, ay;
    };
    const std::vector<Want> wants = {{3, IndexSet({1}, 1), IndexSet({3}, 4)},
                                     {4, IndexSet({3}, 3), IndexSet({2}, 4)}};
    for (const Want& w : wants) {
        bool all_ok = true;
        std::string detail;
        for (int seed = 1; seed <= kSeeds && all_ok; ++seed) {
            try {
                const Trace trace = simulate(example_scenario(w.id, static_cast<std::uint64_t>(seed)));
                for (std::size_t k = static_cast<std::size_t>(trace.isolation.warmup);
                     k < trace.steps.size(); ++k) {
                    if (!(trace.steps[k].isolated_actuators == w.au &&
                          trace.steps[k].isolated_sensors == w.ay)) {
                        all_ok = false;
                        detail = "seed " + std::to_string(seed) + ": sets {" +
                                 trace.steps[k].isolated_actuators.to_string() + "} / {" +
                                 trace.steps[k].isolated_sensors.to_string() + "} at k = " +
                                 std::to_string(k);
                        break;
                    }
                }
            } catch (const Error& e) {
                all_ok = false;
                detail = e.what();
            }
        }
        if (all_ok) c.note("ok   example " + std::to_string(w.id) + ": sets exact and stable from warmup");
        else c.require(false, "example " + std::to_string(w.id) + ": " + detail);
    }
}

void criterion_7_sensor_only_control(Criterion& c) {
    bool all_ok = true;
    std::string detail;
    for (int seed = 1; seed <= kSeeds && all_ok; ++seed) {
        const Trace trace = simulate(example_scenario(5, static_cast<std::uint64_t>(seed)));
        const double bound = 1e-6 * std::max(1.0, trace.summary.initial_state_norm);
        const double x60 = trace.steps.at(60).x.norm();
        if (x60 > bound) {
            all_ok = false;
            detail = "seed " + std::to_string(seed) + ": |x(60)| = " + num(x60);
        }
    }
    c.require(all_ok, detail);
}

void criterion_8_mixed_control(Criterion& c) {
    bool all_ok = true;
    std::string detail;
    for (int seed = 1; seed <= kSeeds && all_ok; ++seed) {
        try {
            const Trace trace = simulate(example_scenario(6, static_cast<std::uint64_t>(seed)));
            const IndexSet expect({3}, 3);
            bool isolated = !trace.steps.empty();
            for (std::size_t k = static_cast<std::size_t>(trace.isolation.warmup);
                 k < trace.steps.size(); ++k) {
                isolated = isolated && trace.steps[k].isolated_actuators == expect &&
                           !trace.steps[k].active_actuators.contains(3);
            }
            const double bound = 1e-3 * std::max(1.0, trace.summary.initial_state_norm);
            const double x100 = trace.steps.at(100).x.norm();
            if (!isolated) {
                all_ok = false;
                detail = "seed " + std::to_string(seed) + ": actuator 3 not isolated and held off";
            } else if (x100 > bound) {
                all_ok = false;
                detail = "seed " + std::to_string(seed) + ": |x(100)| = " + num(x100);
            }
        } catch (const Error& e) {
            all_ok = false;
            detail = e.what();
        }
    }
    c.require(all_ok, detail);

    // certificate-backed monotonicity, when a certificate exists and a
    // trace can be produced at all
    std::optional<LyapunovCertificate> cert;
    try {
        const GainTable table = design_switching_gains(example_plant(6), 1);
        cert = search_certificate(table);
        c.note(cert ? "common-Lyapunov certificate found, margin " + num(cert->margin)
                    : "no common-Lyapunov certificate found; trajectory-level check only");
    } catch (const Error& e) {
        c.note(std::string("gain table for the certificate stage: ") + e.what());
    }
    if (cert) {
        try {
            const Trace trace = simulate(example_scenario(6, 1));
            const int settle = trace.summary.isolation_settle_step.value_or(trace.isolation.warmup);
            bool monotone = true;
            for (std::size_t k = static_cast<std::size_t>(settle) + 1; k + 1 < trace.steps.size();
                 ++k) {
                const double v = trace.steps[k].x.dot(cert->P * trace.steps[k].x);
                const double v_next = trace.steps[k + 1].x.dot(cert->P * trace.steps[k + 1].x);
                if (v > 1e-20 && v_next >= v) {
                    monotone = false;
                    break;
                }
            }
            c.require(monotone, "certified Lyapunov function failed to decrease after settling");
        } catch (const Error& e) {
            c.note(std::string("monotonicity unchecked, no trace: ") + e.what());
        }
    }
}

void criterion_9_oracle_equivalence(Criterion& c) {
    for (int id : {1, 2, 5, 6}) {
        const PlantModel p = example_plant(id);
        c.require(complete_redundancy(p) == oracle::brute_complete_redundancy(p),
                  "example " + std::to_string(id) + ": complete index mismatch");
        const PartialRedundancy got = partial_redundancy(p);
        const PartialRedundancy want = oracle::brute_partial_redundancy(p);
        c.require(got.q1 == want.q1 && got.q2 == want.q2,
                  "example " + std::to_string(id) + ": partial index mismatch");
        c.require(control_redundancy(p) == oracle::brute_control_redundancy(p),
                  "example " + std::to_string(id) + ": control index mismatch");
    }
    int checked = 0;
    for (std::uint64_t seed = 1; checked < 50; ++seed) {
        rng::Stream dims(seed, 321);
        const int n = 2 + static_cast<int>(dims.uniform(0, 3));
        const int inputs = std::min(n, 1 + static_cast<int>(dims.uniform(0, 3)));
        const int outputs = 2 + static_cast<int>(dims.uniform(0, 4));
        const PlantModel p = oracle::random_plant(seed, n, inputs, outputs);
        const PartialRedundancy got = partial_redundancy(p);
        const PartialRedundancy want = oracle::brute_partial_redundancy(p);
        const bool ok = complete_redundancy(p) == oracle::brute_complete_redundancy(p) &&
                        got.q1 == want.q1 && got.q2 == want.q2 &&
                        control_redundancy(p) == oracle::brute_control_redundancy(p);
        c.require(ok, "random plant seed " + std::to_string(seed) + " mismatch");
        ++checked;
    }
    c.note("4 bundled plants + 50 random plants cross-checked");
}

void criterion_10_attack_independence(Criterion& c) {
    // a covering observer's error trace must not depend on the attack draw
    auto twin_deviation = [](const PlantModel& p, const IndexSet& ju, const IndexSet& js,
                             int attacked_actuator, int attacked_sensor) {
        auto run = [&](std::uint64_t attack_seed) {
            Vec x(p.n());
            rng::Stream x0s(3, 0);
            for (int i = 0; i < p.n(); ++i) x(i) = x0s.gaussian(0, 1);
            rng::Stream u_stream(3, 100), au(attack_seed, 200), ay(attack_seed, 300);

            auto output = [&](const Vec& state, double sensor_attack) {
                Vec y = p.C() * state;
                if (attacked_sensor >= 1) y(attacked_sensor - 1) += sensor_attack;
                return y;
            };

            std::vector<Vec> errors;
            const bool partial = !ju.empty();
            const Vec y0 = output(x, ay.uniform(-10, 10));
            UioRunner runner = partial
                                   ? UioRunner(design_partial(p, ju, js), p.B(), Vec::Zero(p.n()), y0)
                                   : UioRunner(design_complete(p, js), Vec::Zero(p.n()), y0);
            for (int k = 1; k <= 100; ++k) {
                Vec u(p.input_count());
                for (int i = 0; i < p.input_count(); ++i) u(i) = u_stream.uniform(-1, 1);
                Vec a_u = Vec::Zero(p.input_count());
                if (attacked_actuator >= 1) a_u(attacked_actuator - 1) = au.uniform(-10, 10);
                x = (p.A() * x + p.B() * (u + a_u)).eval();
                const Vec est = runner.step(u, output(x, ay.uniform(-10, 10)));
                errors.push_back(est - x);
            }
            return errors;
        };
        const auto e1 = run(1001), e2 = run(2002);
        double dev = 0;
        for (std::size_t k = 0; k < e1.size(); ++k) dev = std::max(dev, max_abs(e1[k] - e2[k]));
        return dev;
    };

    const double dev1 = twin_deviation(example_plant(1), IndexSet::empty_set(0), IndexSet({1, 2, 4}, 4),
                                       1, 3);
    c.require(dev1 <= 1e-10, "complete observer deviation " + num(dev1) + " > 1e-10");
    const double dev2 = twin_deviation(example_plant(2), IndexSet({3}, 3), IndexSet({1, 3, 4}, 4), 3, 2);
    c.require(dev2 <= 1e-10, "partial observer deviation " + num(dev2) + " > 1e-10");
}

void criterion_11_determinism_replay(Criterion& c) {
    int replayed = 0;
    for (int id = 1; id <= kExampleCount; ++id) {
        try {
            const Scenario s = example_scenario(id, 5);
            const Trace t1 = simulate(s);
            const Trace t2 = simulate(s);
            std::ostringstream a, b;
            write_trace_csv(t1, a);
            write_trace_csv(t2, b);
            c.require(a.str() == b.str(), "example " + std::to_string(id) + " not byte-identical");
            c.require(replay_check(t1, s), "example " + std::to_string(id) + " replay failed");
            ++replayed;
        } catch (const Error&) {
            // infeasible setups produce no trace; their failure is already
            // reported under criteria 1-2.
        }
    }
    c.note(std::to_string(replayed) + " of 6 bundled scenarios produce traces (the others fail "
           "synthesis; see criteria 1-2)");
    c.require(replayed >= 3, "fewer runnable scenarios than expected");
}

} // namespace

int main() {
    std::vector<Criterion> criteria = {
        {1, "redundancy indices match the bundled systems"},
        {2, "bank sizes (10 complete / 30 partial)"},
        {3, "design residuals and observer radii"},
        {4, "selected-estimate decay envelope and tail"},
        {5, "attack reconstruction accuracy and delay"},
        {6, "attack isolation settles on the true sets"},
        {7, "sensor-only feedback regulates the state"},
        {8, "switching supervisor handles mixed attacks"},
        {9, "redundancy indices match brute-force enumeration"},
        {10, "covered attacks leave observer errors unchanged"},
        {11, "determinism and replay of recorded traces"},
    };

    const std::vector<std::function<void(Criterion&)>> runners = {
        criterion_1_indices,          criterion_2_bank_sizes,
        criterion_3_residuals,        criterion_4_decay,
        criterion_5_reconstruction,   criterion_6_isolation,
        criterion_7_sensor_only_control, criterion_8_mixed_control,
        criterion_9_oracle_equivalence,  criterion_10_attack_independence,
        criterion_11_determinism_replay,
    };
    for (std::size_t i = 0; i < runners.size(); ++i) {
        try {
            runners[i](criteria[i]);
        } catch (const std::exception& e) {
            criteria[i].require(false, std::string("unexpected exception: ") + e.what());
        }
    }

    int failures = 0;
    for (const Criterion& c : criteria) {
        std::printf("%-4s criterion %2d: %s\n", c.pass ? "PASS" : "FAIL", c.id, c.title.c_str());
        for (const std::string& n : c.notes) std::printf("       %s\n", n.c_str());
        if (!c.pass) ++failures;
    }
    std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failures,
                criteria.size());
    return failures == 0 ? 0 : 1;
}
