// uiobank command line: analyze a plant's redundancy structure, export
// synthesized observer banks, run simulation scenarios, and replay the six
// bundled demonstration setups.
//
// Exit codes (stable contract):
//   0  success
//   2  invalid input: malformed documents, violated invariants, bad flags
//   3  synthesis failure: no feasible bank / gain for the requested scheme
//   4  simulation divergence
//   5  a reproduce check failed

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>

#include <CLI11.hpp>

#include "uiobank/io.hpp"

using namespace uiobank;

namespace {

int exit_code_for(const Error& e) {
    switch (e.code()) {
    case ErrorCode::invalid_input:
    case ErrorCode::validation:
    case ErrorCode::io:
    case ErrorCode::not_ready: return 2;
    case ErrorCode::design_infeasible:
    case ErrorCode::no_convergence:
    case ErrorCode::internal_inconsistency:
    case ErrorCode::unstabilizable_configuration: return 3;
    case ErrorCode::diverged: return 4;
    }
    return 2;
}

void write_file(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path);
    if (!out) fail(ErrorCode::io, "cannot write " + path.string());
    out << text;
}

struct Overrides {
    std::optional<std::uint64_t> seed;
    std::optional<int> horizon;
    std::optional<double> eps;
    std::optional<int> warmup;
    std::optional<int> window;
    std::optional<std::string> priority;
    std::optional<std::size_t> bank_cap;

    void apply(Scenario& s) const {
        if (seed) s.seed = *seed;
        if (horizon) s.horizon = *horizon;
        if (eps) s.isolation.threshold = *eps;
        if (warmup) s.isolation.warmup = *warmup;
        if (window) s.isolation.window = *window;
        if (priority) {
            s.priority = *priority == "q2" ? PartialPriority::sensors_first
                                           : PartialPriority::actuators_first;
        }
        if (bank_cap) s.bank_cap = *bank_cap;
    }
};

void add_override_flags(CLI::App* cmd, Overrides& o) {
    cmd->add_option("--seed", o.seed, "Override the scenario seed")->envname("UIOBANK_SEED");
    cmd->add_option("--horizon", o.horizon, "Override the horizon")->envname("UIOBANK_HORIZON");
    cmd->add_option("--eps", o.eps, "Isolation threshold")->envname("UIOBANK_EPS");
    cmd->add_option("--warmup", o.warmup, "Isolation warmup steps")->envname("UIOBANK_WARMUP");
    cmd->add_option("--window", o.window, "Isolation persistence window")->envname("UIOBANK_WINDOW");
    cmd->add_option("--priority", o.priority, "Partial index priority: q1 or q2")
        ->check(CLI::IsMember({"q1", "q2"}))
        ->envname("UIOBANK_PRIORITY");
    cmd->add_option("--bank-cap", o.bank_cap, "Maximum number of observers in a bank")
        ->envname("UIOBANK_BANK_CAP");
}

int run_analyze(const std::string& plant_path, const std::string& out_dir,
                const std::string& priority) {
    const PlantModel plant = load_plant(plant_path);
    const AnalysisReport report = analyze_plant(
        plant, {}, priority == "q2" ? PartialPriority::sensors_first : PartialPriority::actuators_first);
    std::cout << analysis_to_text(report);
    if (!out_dir.empty()) {
        std::filesystem::create_directories(out_dir);
        write_file(std::filesystem::path(out_dir) / "analysis.json", analysis_to_json(report));
    }
    return 0;
}

int run_design(const std::string& plant_path, const std::string& out_dir, std::string scheme,
               std::size_t bank_cap) {
    const PlantModel plant = load_plant(plant_path);
    const AnalysisReport report = analyze_plant(plant);
    if (scheme == "auto") scheme = report.scheme;
    if (scheme == "none") {
        fail(ErrorCode::design_infeasible, "neither scheme is feasible for this plant (q = 0 and q1 or "
                                           "q2 = 0); see `analyze`");
    }

    std::filesystem::create_directories(out_dir);
    std::string doc;
    if (scheme == "complete") {
        if (report.q < 1) fail(ErrorCode::design_infeasible, "complete scheme needs q >= 1");
        const CompleteBank bank = enumerate_complete_bank(plant, report.q, {}, bank_cap);
        std::optional<GainTable> gains;
        std::optional<LyapunovCertificate> cert;
        if (report.q_star >= 1) {
            gains = design_switching_gains(plant, report.q_star);
            cert = search_certificate(*gains);
        }
        doc = bank_document_json(plant, bank, gains ? &*gains : nullptr, cert ? &*cert : nullptr);
    } else if (scheme == "partial") {
        if (report.partial.q1 < 1 || report.partial.q2 < 1) {
            fail(ErrorCode::design_infeasible,
                 "partial scheme needs q1 >= 1 and q2 >= 1 (got q1 = " +
                     std::to_string(report.partial.q1) + ", q2 = " + std::to_string(report.partial.q2) +
                     ")");
        }
        const PartialBank bank =
            enumerate_partial_bank(plant, report.partial.q1, report.partial.q2, {}, bank_cap);
        std::optional<GainTable> gains;
        std::optional<LyapunovCertificate> cert;
        if (report.partial.q1 <= report.q_star) {
            gains = design_switching_gains(plant, report.partial.q1);
            cert = search_certificate(*gains);
        }
        doc = bank_document_json(plant, bank, gains ? &*gains : nullptr, cert ? &*cert : nullptr);
    } else {
        fail(ErrorCode::validation, "scheme must be auto, complete, or partial");
    }
    write_file(std::filesystem::path(out_dir) / "designs.json", doc);
    std::cout << "wrote " << (std::filesystem::path(out_dir) / "designs.json").string() << "\n";
    return 0;
}

int run_simulate(const std::string& scenario_path, const std::string& out_dir,
                 const Overrides& overrides, bool plots) {
    Scenario scenario = load_scenario(scenario_path);
    overrides.apply(scenario);
    for (const std::string& w : scenario.validate()) std::cerr << "warning: " << w << "\n";

    const Trace trace = simulate(scenario);
    std::filesystem::create_directories(out_dir);
    write_trace_csv(trace, std::filesystem::path(out_dir) / "trace.csv");
    write_file(std::filesystem::path(out_dir) / "summary.json", summary_to_json(trace));
    if (plots) write_plot_series(trace, std::filesystem::path(out_dir) / "plots");
    std::cout << "wrote " << (std::filesystem::path(out_dir) / "trace.csv").string() << "\n";
    return 0;
}

int run_reproduce(int id, const std::string& out_dir, std::uint64_t seed) {
    const ReproduceReport report = reproduce_example(id, seed);
    for (const ReproduceCheck& c : report.checks) {
        std::cout << (c.pass ? "  ok   " : "  FAIL ") << c.name;
        if (!c.detail.empty()) std::cout << "  (" << c.detail << ")";
        std::cout << "\n";
    }
    std::cout << "example " << id << ": " << (report.pass ? "pass" : "fail") << "\n";
    if (!out_dir.empty()) {
        std::filesystem::create_directories(out_dir);
        write_trace_csv(report.trace, std::filesystem::path(out_dir) / "trace.csv");
        write_file(std::filesystem::path(out_dir) / "summary.json", summary_to_json(report.trace));
        write_file(std::filesystem::path(out_dir) / "report.json", reproduce_report_to_json(report));
        write_file(std::filesystem::path(out_dir) / "scenario.json",
                   scenario_to_json(example_scenario(id, seed)));
    }
    return report.pass ? 0 : 5;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Unknown-input multi-observer toolkit: secure state estimation, attack isolation, "
                 "and switching control for discrete-time linear systems"};
    app.require_subcommand(1);

    std::string plant_path, scenario_path, out_dir, scheme = "auto", priority = "q1";
    std::size_t bank_cap = kDefaultBankCap;
    bool plots = false;
    Overrides overrides;
    int example_id = 1;
    std::uint64_t reproduce_seed = 1;

    CLI::App* analyze = app.add_subcommand("analyze", "Report redundancy indices and bank sizes");
    analyze->add_option("--plant", plant_path, "Plant document (JSON)")
        ->required()
        ->envname("UIOBANK_PLANT");
    analyze->add_option("--out", out_dir, "Directory for analysis.json")->envname("UIOBANK_OUT");
    analyze->add_option("--priority", priority, "Partial index priority: q1 or q2")
        ->check(CLI::IsMember({"q1", "q2"}))
        ->envname("UIOBANK_PRIORITY");

    CLI::App* design = app.add_subcommand("design", "Synthesize and export an observer bank");
    design->add_option("--plant", plant_path, "Plant document (JSON)")
        ->required()
        ->envname("UIOBANK_PLANT");
    design->add_option("--out", out_dir, "Output directory")->required()->envname("UIOBANK_OUT");
    design->add_option("--scheme", scheme, "auto, complete, or partial")
        ->check(CLI::IsMember({"auto", "complete", "partial"}));
    design->add_option("--bank-cap", bank_cap, "Maximum number of observers in a bank")
        ->envname("UIOBANK_BANK_CAP");

    CLI::App* simulate_cmd = app.add_subcommand("simulate", "Run a scenario and write its trace");
    simulate_cmd->add_option("--scenario", scenario_path, "Scenario document (JSON)")
        ->required()
        ->envname("UIOBANK_SCENARIO");
    simulate_cmd->add_option("--out", out_dir, "Output directory")->required()->envname("UIOBANK_OUT");
    simulate_cmd->add_flag("--plots", plots, "Also write two-column plot series");
    add_override_flags(simulate_cmd, overrides);

    CLI::App* reproduce = app.add_subcommand("reproduce", "Run one of the bundled examples (1-6)");
    reproduce->add_option("id", example_id, "Example id")->required()->check(CLI::Range(1, 6));
    reproduce->add_option("--out", out_dir, "Output directory")->envname("UIOBANK_OUT");
    reproduce->add_option("--seed", reproduce_seed, "Scenario seed")->envname("UIOBANK_SEED");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e); // --help and friends
        app.exit(e);
        return 2;
    }

    try {
        if (analyze->parsed()) return run_analyze(plant_path, out_dir, priority);
        if (design->parsed()) return run_design(plant_path, out_dir, scheme, bank_cap);
        if (simulate_cmd->parsed()) return run_simulate(scenario_path, out_dir, overrides, plots);
        if (reproduce->parsed()) return run_reproduce(example_id, out_dir, reproduce_seed);
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_code_for(e);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 2;
}
