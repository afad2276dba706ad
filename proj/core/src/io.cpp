#include "uiobank/io.hpp"

#include <charconv>
#include <fstream>
#include <ostream>
#include <sstream>

#include <json.hpp>

namespace uiobank {

using nlohmann::json;

namespace {

std::string fmt(double v) {
    char buf[32];
    auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, end);
}

json matrix_to_json(const Mat& m) {
    json rows = json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        json row = json::array();
        for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
        rows.push_back(std::move(row));
    }
    return rows;
}

Mat matrix_from_json(const json& j, const std::string& name) {
    if (!j.is_array() || j.empty() || !j[0].is_array()) {
        fail(ErrorCode::io, name + " must be a non-empty array of rows");
    }
    const Eigen::Index rows = static_cast<Eigen::Index>(j.size());
    const Eigen::Index cols = static_cast<Eigen::Index>(j[0].size());
    Mat m(rows, cols);
    for (Eigen::Index i = 0; i < rows; ++i) {
        if (!j[static_cast<std::size_t>(i)].is_array() ||
            static_cast<Eigen::Index>(j[static_cast<std::size_t>(i)].size()) != cols) {
            fail(ErrorCode::io, name + " rows have inconsistent lengths");
        }
        for (Eigen::Index c = 0; c < cols; ++c) {
            const json& v = j[static_cast<std::size_t>(i)][static_cast<std::size_t>(c)];
            if (!v.is_number()) fail(ErrorCode::io, name + " entries must be numbers");
            m(i, c) = v.get<double>();
        }
    }
    return m;
}

Vec vector_from_json(const json& j, const std::string& name) {
    if (!j.is_array()) fail(ErrorCode::io, name + " must be an array");
    Vec v(static_cast<Eigen::Index>(j.size()));
    for (std::size_t i = 0; i < j.size(); ++i) {
        if (!j[i].is_number()) fail(ErrorCode::io, name + " entries must be numbers");
        v(static_cast<Eigen::Index>(i)) = j[i].get<double>();
    }
    return v;
}

json index_set_to_json(const IndexSet& s) {
    json a = json::array();
    for (int i : s.indices()) a.push_back(i);
    return a;
}

IndexSet index_set_from_json(const json& j, int universe, const std::string& name) {
    if (!j.is_array()) fail(ErrorCode::io, name + " must be an array of indices");
    std::vector<int> idx;
    for (const json& v : j) {
        if (!v.is_number_integer()) fail(ErrorCode::io, name + " entries must be integers");
        idx.push_back(v.get<int>());
    }
    return IndexSet(std::move(idx), universe);
}

json parse(const std::string& text) {
    json j = json::parse(text, nullptr, /*allow_exceptions=*/false);
    if (j.is_discarded()) fail(ErrorCode::io, "malformed JSON document");
    return j;
}

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) fail(ErrorCode::io, "cannot open " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

SignalSpec signal_from_json(const json& j, const std::string& what) {
    if (!j.is_object()) fail(ErrorCode::io, what + " must be an object");
    SignalSpec s;
    s.channel = j.value("channel", 1);
    const std::string kind = j.value("kind", "zero");
    if (kind == "zero") s.kind = SignalSpec::Kind::zero;
    else if (kind == "constant") s.kind = SignalSpec::Kind::constant;
    else if (kind == "uniform") s.kind = SignalSpec::Kind::uniform;
    else if (kind == "gaussian") s.kind = SignalSpec::Kind::gaussian;
    else if (kind == "impulse") s.kind = SignalSpec::Kind::impulse;
    else if (kind == "custom") s.kind = SignalSpec::Kind::custom;
    else fail(ErrorCode::io, what + ": unknown signal kind '" + kind + "'");
    s.value = j.value("value", 0.0);
    s.low = j.value("low", 0.0);
    s.high = j.value("high", 0.0);
    s.mean = j.value("mean", 0.0);
    s.stddev = j.value("stddev", 1.0);
    s.at = j.value("at", 0);
    s.active_from = j.value("active_from", 0);
    if (j.contains("samples")) {
        for (const json& v : j.at("samples")) s.samples.push_back(v.get<double>());
    }
    return s;
}

json signal_to_json(const SignalSpec& s) {
    json j;
    j["channel"] = s.channel;
    switch (s.kind) {
    case SignalSpec::Kind::zero: j["kind"] = "zero"; break;
    case SignalSpec::Kind::constant:
        j["kind"] = "constant";
        j["value"] = s.value;
        break;
    case SignalSpec::Kind::uniform:
        j["kind"] = "uniform";
        j["low"] = s.low;
        j["high"] = s.high;
        break;
    case SignalSpec::Kind::gaussian:
        j["kind"] = "gaussian";
        j["mean"] = s.mean;
        j["stddev"] = s.stddev;
        break;
    case SignalSpec::Kind::impulse:
        j["kind"] = "impulse";
        j["at"] = s.at;
        j["value"] = s.value;
        break;
    case SignalSpec::Kind::custom:
        j["kind"] = "custom";
        j["samples"] = s.samples;
        break;
    }
    if (s.active_from != 0) j["active_from"] = s.active_from;
    return j;
}

Tolerances tolerances_from_json(const json& j) {
    Tolerances t;
    t.rank_tol = j.value("rank_tol", t.rank_tol);
    t.schur_margin = j.value("schur_margin", t.schur_margin);
    t.residual_tol = j.value("residual_tol", t.residual_tol);
    t.iter_tol = j.value("iter_tol", t.iter_tol);
    t.iter_max = j.value("iter_max", t.iter_max);
    return t;
}

} // namespace

PlantModel plant_from_json(const std::string& text, const Tolerances& tol) {
    const json j = parse(text);
    if (!j.is_object() || !j.contains("A") || !j.contains("B") || !j.contains("C")) {
        fail(ErrorCode::io, "plant document needs A, B, and C");
    }
    return PlantModel(matrix_from_json(j.at("A"), "A"), matrix_from_json(j.at("B"), "B"),
                      matrix_from_json(j.at("C"), "C"), tol);
}

PlantModel load_plant(const std::filesystem::path& path, const Tolerances& tol) {
    return plant_from_json(read_file(path), tol);
}

std::string plant_to_json(const PlantModel& plant) {
    json j;
    j["A"] = matrix_to_json(plant.A());
    j["B"] = matrix_to_json(plant.B());
    j["C"] = matrix_to_json(plant.C());
    return j.dump(2);
}

Scenario scenario_from_json(const std::string& text) {
    const json j = parse(text);
    if (!j.is_object() || !j.contains("plant")) fail(ErrorCode::io, "scenario document needs a plant");

    Tolerances tol = j.contains("tolerances") ? tolerances_from_json(j.at("tolerances")) : Tolerances{};
    Scenario s{plant_from_json(j.at("plant").dump(), tol)};
    s.tol = tol;
    s.horizon = j.value("horizon", 1);
    s.seed = j.value("seed", std::uint64_t{0});
    s.bank_cap = j.value("bank_cap", kDefaultBankCap);

    if (j.contains("x0")) {
        const json& x0 = j.at("x0");
        if (x0.is_array()) {
            s.x0.kind = InitialStateSpec::Kind::fixed;
            s.x0.value = vector_from_json(x0, "x0");
        } else if (x0.is_object() && x0.value("kind", "") == "gaussian") {
            s.x0.kind = InitialStateSpec::Kind::gaussian;
            s.x0.mean = x0.value("mean", 0.0);
            s.x0.stddev = x0.value("stddev", 1.0);
        } else {
            fail(ErrorCode::io, "x0 must be an array or {\"kind\":\"gaussian\",...}");
        }
    }
    if (j.contains("xhat0")) s.xhat0 = vector_from_json(j.at("xhat0"), "xhat0");

    const std::string estimator = j.value("estimator", "complete");
    if (estimator == "complete") s.estimator = EstimatorKind::complete;
    else if (estimator == "partial") s.estimator = EstimatorKind::partial;
    else if (estimator == "none") s.estimator = EstimatorKind::none;
    else fail(ErrorCode::io, "unknown estimator kind '" + estimator + "'");

    const std::string priority = j.value("priority", "q1");
    if (priority == "q1") s.priority = PartialPriority::actuators_first;
    else if (priority == "q2") s.priority = PartialPriority::sensors_first;
    else fail(ErrorCode::io, "priority must be 'q1' or 'q2'");

    if (j.contains("input")) {
        const json& in = j.at("input");
        const std::string policy = in.value("policy", "open_loop");
        if (policy == "open_loop") s.policy = InputPolicy::open_loop;
        else if (policy == "static_feedback") s.policy = InputPolicy::static_feedback;
        else if (policy == "switching_supervisor") s.policy = InputPolicy::switching_supervisor;
        else fail(ErrorCode::io, "unknown input policy '" + policy + "'");
        if (in.contains("signals")) {
            for (const json& sig : in.at("signals")) {
                s.input_signals.push_back(signal_from_json(sig, "input"));
            }
        }
        if (in.contains("gain")) s.static_gain = matrix_from_json(in.at("gain"), "input gain");
    }

    if (j.contains("attacks")) {
        const json& at = j.at("attacks");
        if (at.contains("actuator")) {
            for (const json& sig : at.at("actuator")) {
                s.actuator_attacks.push_back(signal_from_json(sig, "actuator attack"));
            }
        }
        if (at.contains("sensor")) {
            for (const json& sig : at.at("sensor")) {
                s.sensor_attacks.push_back(signal_from_json(sig, "sensor attack"));
            }
        }
    }

    if (j.contains("isolation")) {
        const json& iso = j.at("isolation");
        s.isolation.threshold = iso.value("eps", s.isolation.threshold);
        s.isolation.warmup = iso.value("warmup", s.isolation.warmup);
        s.isolation.window = iso.value("window", s.isolation.window);
    }

    if (j.contains("declared_attacked_actuators")) {
        s.declared_attacked_actuators = index_set_from_json(j.at("declared_attacked_actuators"),
                                                            s.plant.input_count(),
                                                            "declared_attacked_actuators");
    }
    if (j.contains("declared_attacked_sensors")) {
        s.declared_attacked_sensors = index_set_from_json(j.at("declared_attacked_sensors"),
                                                          s.plant.output_count(),
                                                          "declared_attacked_sensors");
    }
    return s;
}

Scenario load_scenario(const std::filesystem::path& path) {
    return scenario_from_json(read_file(path));
}

std::string scenario_to_json(const Scenario& s) {
    json j;
    j["plant"] = parse(plant_to_json(s.plant));
    j["horizon"] = s.horizon;
    j["seed"] = s.seed;
    if (s.x0.kind == InitialStateSpec::Kind::fixed) {
        json x0 = json::array();
        for (Eigen::Index i = 0; i < s.x0.value.size(); ++i) x0.push_back(s.x0.value(i));
        j["x0"] = std::move(x0);
    } else {
        j["x0"] = {{"kind", "gaussian"}, {"mean", s.x0.mean}, {"stddev", s.x0.stddev}};
    }
    if (s.xhat0.size() > 0) {
        json xh = json::array();
        for (Eigen::Index i = 0; i < s.xhat0.size(); ++i) xh.push_back(s.xhat0(i));
        j["xhat0"] = std::move(xh);
    }
    switch (s.estimator) {
    case EstimatorKind::complete: j["estimator"] = "complete"; break;
    case EstimatorKind::partial: j["estimator"] = "partial"; break;
    case EstimatorKind::none: j["estimator"] = "none"; break;
    }
    j["priority"] = s.priority == PartialPriority::actuators_first ? "q1" : "q2";
    json input;
    switch (s.policy) {
    case InputPolicy::open_loop: input["policy"] = "open_loop"; break;
    case InputPolicy::static_feedback: input["policy"] = "static_feedback"; break;
    case InputPolicy::switching_supervisor: input["policy"] = "switching_supervisor"; break;
    }
    if (!s.input_signals.empty()) {
        json sigs = json::array();
        for (const SignalSpec& sig : s.input_signals) sigs.push_back(signal_to_json(sig));
        input["signals"] = std::move(sigs);
    }
    if (s.static_gain) input["gain"] = matrix_to_json(*s.static_gain);
    j["input"] = std::move(input);
    json attacks;
    if (!s.actuator_attacks.empty()) {
        json sigs = json::array();
        for (const SignalSpec& sig : s.actuator_attacks) sigs.push_back(signal_to_json(sig));
        attacks["actuator"] = std::move(sigs);
    }
    if (!s.sensor_attacks.empty()) {
        json sigs = json::array();
        for (const SignalSpec& sig : s.sensor_attacks) sigs.push_back(signal_to_json(sig));
        attacks["sensor"] = std::move(sigs);
    }
    j["attacks"] = std::move(attacks);
    j["isolation"] = {{"eps", s.isolation.threshold},
                      {"warmup", s.isolation.warmup},
                      {"window", s.isolation.window}};
    if (s.declared_attacked_actuators) {
        j["declared_attacked_actuators"] = index_set_to_json(*s.declared_attacked_actuators);
    }
    if (s.declared_attacked_sensors) {
        j["declared_attacked_sensors"] = index_set_to_json(*s.declared_attacked_sensors);
    }
    return j.dump(2);
}

AnalysisReport analyze_plant(const PlantModel& plant, const Tolerances& tol, PartialPriority priority) {
    AnalysisReport report;
    report.q = complete_redundancy(plant, tol);
    report.partial = partial_redundancy(plant, tol, priority);
    report.q_star = control_redundancy(plant, tol);

    const int n_y = plant.output_count();
    const int n_u = plant.input_count();
    auto binom = [](int n, int k) -> std::size_t {
        if (k < 0 || k > n) return 0;
        std::size_t r = 1;
        for (int i = 0; i < k; ++i)
            r = r * static_cast<std::size_t>(n - i) / static_cast<std::size_t>(i + 1);
        return r;
    };
    if (report.q >= 1) {
        report.complete_bank_size = binom(n_y, n_y - report.q) + binom(n_y, n_y - 2 * report.q);
    }
    if (report.partial.q1 >= 1 && report.partial.q2 >= 1) {
        report.partial_bank_size = binom(n_u, report.partial.q1) * binom(n_y, n_y - report.partial.q2) +
                                   binom(n_u, 2 * report.partial.q1) *
                                       binom(n_y, n_y - 2 * report.partial.q2);
    }
    if (report.q >= 1) report.scheme = "complete";
    else if (report.partial.q1 >= 1 && report.partial.q2 >= 1) report.scheme = "partial";
    else report.scheme = "none";

    if (n_y < 2) report.notes.push_back("no sensor redundancy: a single sensor cannot be cross-checked");
    if (report.q < 1) report.notes.push_back("complete scheme unavailable (q = 0)");
    if (report.partial.q1 < 1) report.notes.push_back("partial scheme cannot protect any actuator (q1 = 0)");
    return report;
}

std::string analysis_to_json(const AnalysisReport& report) {
    json j;
    j["q"] = report.q;
    j["q1"] = report.partial.q1;
    j["q2"] = report.partial.q2;
    j["q_star"] = report.q_star;
    j["complete_bank_size"] = report.complete_bank_size;
    j["partial_bank_size"] = report.partial_bank_size;
    j["scheme"] = report.scheme;
    j["notes"] = report.notes;
    return j.dump(2);
}

std::string analysis_to_text(const AnalysisReport& report) {
    std::ostringstream out;
    out << "complete scheme: q = " << report.q;
    if (report.q >= 1) out << "  (bank of " << report.complete_bank_size << " observers)";
    out << "\n";
    out << "partial scheme:  q1 = " << report.partial.q1 << ", q2 = " << report.partial.q2;
    if (report.partial_bank_size > 0) out << "  (bank of " << report.partial_bank_size << " observers)";
    out << "\n";
    out << "control:         q* = " << report.q_star << "\n";
    out << "applicable scheme: " << report.scheme << "\n";
    for (const std::string& n : report.notes) out << "note: " << n << "\n";
    return out.str();
}

namespace {

json gain_table_json(const GainTable& gains, const LyapunovCertificate* certificate) {
    json g;
    g["bound"] = gains.bound();
    json entries = json::array();
    for (const auto& [j_set, k] : gains.gains()) {
        json e;
        e["actuators"] = index_set_to_json(j_set);
        e["K"] = matrix_to_json(k);
        entries.push_back(std::move(e));
    }
    g["gains"] = std::move(entries);
    if (certificate) {
        g["certificate"] = {{"P", matrix_to_json(certificate->P)}, {"margin", certificate->margin}};
    } else {
        g["certificate"] = nullptr;
    }
    return g;
}

} // namespace

std::string bank_document_json(const PlantModel& plant, const CompleteBank& bank,
                               const GainTable* gains, const LyapunovCertificate* certificate) {
    json j;
    j["kind"] = "complete";
    j["q"] = bank.q;
    json designs = json::array();
    auto emit = [&](const CompleteUioDesign& d, const char* role) {
        json e;
        e["role"] = role;
        e["sensors"] = index_set_to_json(d.sensors);
        e["N"] = matrix_to_json(d.N);
        e["L"] = matrix_to_json(d.L);
        e["E"] = matrix_to_json(d.E);
        e["radius"] = spectral_radius(d.N);
        e["residual"] = design_residual(plant, d);
        designs.push_back(std::move(e));
    };
    for (const auto& d : bank.candidates) emit(d, "candidate");
    for (const auto& d : bank.references) emit(d, "reference");
    j["designs"] = std::move(designs);
    if (gains) j["gain_table"] = gain_table_json(*gains, certificate);
    return j.dump(2);
}

std::string bank_document_json(const PlantModel& plant, const PartialBank& bank,
                               const GainTable* gains, const LyapunovCertificate* certificate) {
    json j;
    j["kind"] = "partial";
    j["q1"] = bank.q1;
    j["q2"] = bank.q2;
    json designs = json::array();
    auto emit = [&](const PartialUioDesign& d, const char* role) {
        json e;
        e["role"] = role;
        e["actuators"] = index_set_to_json(d.actuators);
        e["sensors"] = index_set_to_json(d.sensors);
        e["N"] = matrix_to_json(d.N);
        e["L"] = matrix_to_json(d.L);
        e["E"] = matrix_to_json(d.E);
        e["T"] = matrix_to_json(d.T);
        e["radius"] = spectral_radius(d.N);
        e["residual"] = design_residual(plant, d);
        designs.push_back(std::move(e));
    };
    for (const auto& d : bank.candidates) emit(d, "candidate");
    for (const auto& d : bank.references) emit(d, "reference");
    j["designs"] = std::move(designs);
    if (gains) j["gain_table"] = gain_table_json(*gains, certificate);
    return j.dump(2);
}

void write_trace_csv(const Trace& trace, std::ostream& out) {
    auto col = [&](const std::string& base, int count) {
        for (int i = 1; i <= count; ++i) out << "," << base << "_" << i;
    };
    out << "k";
    col("x", trace.n);
    col("u", trace.input_count);
    col("au", trace.input_count);
    col("ay", trace.output_count);
    col("y", trace.output_count);
    col("xhat", trace.n);
    out << ",sigma,pi_min";
    col("auhat", trace.input_count);
    col("ayhat", trace.output_count);
    out << ",Wu,Wy,rho\n";

    auto vec = [&](const Vec& v) {
        for (Eigen::Index i = 0; i < v.size(); ++i) out << "," << fmt(v(i));
    };
    for (const StepRecord& rec : trace.steps) {
        out << rec.k;
        vec(rec.x);
        vec(rec.u);
        vec(rec.a_u);
        vec(rec.a_y);
        vec(rec.y);
        vec(rec.xhat);
        out << "," << rec.sigma << "," << fmt(rec.pi_min);
        vec(rec.au_hat);
        vec(rec.ay_hat);
        out << "," << rec.isolated_actuators.to_string() << "," << rec.isolated_sensors.to_string()
            << "," << rec.active_actuators.to_string() << "\n";
    }
}

void write_trace_csv(const Trace& trace, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) fail(ErrorCode::io, "cannot write " + path.string());
    write_trace_csv(trace, out);
}

std::string summary_to_json(const Trace& trace) {
    json j;
    j["steps"] = trace.steps.size();
    switch (trace.estimator) {
    case EstimatorKind::complete: j["estimator"] = "complete"; break;
    case EstimatorKind::partial: j["estimator"] = "partial"; break;
    case EstimatorKind::none: j["estimator"] = "none"; break;
    }
    j["initial_state_norm"] = trace.summary.initial_state_norm;
    j["terminal_state_norm"] = trace.summary.terminal_state_norm;
    j["error_norms"] = trace.summary.error_norms;
    if (trace.summary.decay_rate) j["decay_rate"] = *trace.summary.decay_rate;
    else j["decay_rate"] = nullptr;
    if (trace.summary.isolation_settle_step) j["isolation_settle_step"] = *trace.summary.isolation_settle_step;
    else j["isolation_settle_step"] = nullptr;
    if (!trace.steps.empty()) {
        j["final_isolated_actuators"] = index_set_to_json(trace.steps.back().isolated_actuators);
        j["final_isolated_sensors"] = index_set_to_json(trace.steps.back().isolated_sensors);
        j["final_active_actuators"] = index_set_to_json(trace.steps.back().active_actuators);
    }
    j["max_observer_radius"] = trace.max_observer_radius;
    return j.dump(2);
}

void write_plot_series(const Trace& trace, const std::filesystem::path& directory) {
    std::filesystem::create_directories(directory);
    auto series = [&](const std::string& name, auto getter) {
        std::ofstream out(directory / (name + ".dat"));
        if (!out) fail(ErrorCode::io, "cannot write plot series " + name);
        for (const StepRecord& rec : trace.steps) out << rec.k << " " << fmt(getter(rec)) << "\n";
    };
    for (int i = 0; i < trace.n; ++i) {
        series("x_" + std::to_string(i + 1), [i](const StepRecord& r) { return r.x(i); });
        series("xhat_" + std::to_string(i + 1), [i](const StepRecord& r) { return r.xhat(i); });
    }
    for (int i = 0; i < trace.input_count; ++i) {
        series("au_" + std::to_string(i + 1), [i](const StepRecord& r) { return r.a_u(i); });
        series("auhat_" + std::to_string(i + 1), [i](const StepRecord& r) { return r.au_hat(i); });
    }
    for (int i = 0; i < trace.output_count; ++i) {
        series("ay_" + std::to_string(i + 1), [i](const StepRecord& r) { return r.a_y(i); });
        series("ayhat_" + std::to_string(i + 1), [i](const StepRecord& r) { return r.ay_hat(i); });
    }
    series("error_norm", [](const StepRecord& r) { return (r.xhat - r.x).norm(); });
    series("state_norm", [](const StepRecord& r) { return r.x.norm(); });
}

std::string reproduce_report_to_json(const ReproduceReport& report) {
    json j;
    j["example"] = report.id;
    j["pass"] = report.pass;
    json checks = json::array();
    for (const ReproduceCheck& c : report.checks) {
        checks.push_back({{"name", c.name}, {"pass", c.pass}, {"detail", c.detail}});
    }
    j["checks"] = std::move(checks);
    return j.dump(2);
}

} // namespace uiobank
