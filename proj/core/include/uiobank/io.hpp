#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>

#include "uiobank/examples.hpp"
#include "uiobank/simulation.hpp"
#include "uiobank/switching_control.hpp"

namespace uiobank {

// Plant documents: {"A": [[...]], "B": [[...]], "C": [[...]]} with matrices
// as nested row-major arrays.
PlantModel plant_from_json(const std::string& text, const Tolerances& tol = {});
PlantModel load_plant(const std::filesystem::path& path, const Tolerances& tol = {});
std::string plant_to_json(const PlantModel& plant);

// Scenario documents; see README for the schema. Parse failures throw
// `io`, semantic violations throw `validation`.
Scenario scenario_from_json(const std::string& text);
Scenario load_scenario(const std::filesystem::path& path);
std::string scenario_to_json(const Scenario& scenario);

// Analysis report for a plant: redundancy indices, bank sizes, and the
// applicable scheme.
struct AnalysisReport {
    int q = 0;
    PartialRedundancy partial;
    int q_star = 0;
    std::size_t complete_bank_size = 0;
    std::size_t partial_bank_size = 0;
    std::string scheme; // "complete", "partial", or "none"
    std::vector<std::string> notes;
};
AnalysisReport analyze_plant(const PlantModel& plant, const Tolerances& tol = {},
                             PartialPriority priority = PartialPriority::actuators_first);
std::string analysis_to_json(const AnalysisReport& report);
std::string analysis_to_text(const AnalysisReport& report);

// Synthesized bank (and optional gain table / certificate) as one document.
std::string bank_document_json(const PlantModel& plant, const CompleteBank& bank,
                               const GainTable* gains, const LyapunovCertificate* certificate);
std::string bank_document_json(const PlantModel& plant, const PartialBank& bank,
                               const GainTable* gains, const LyapunovCertificate* certificate);

// Trace CSV with the fixed column order
//   k, x_*, u_*, au_*, ay_*, y_*, xhat_*, sigma, pi_min, auhat_*, ayhat_*,
//   Wu, Wy, rho
// (index sets rendered semicolon-joined, numbers shortest round-trip).
void write_trace_csv(const Trace& trace, std::ostream& out);
void write_trace_csv(const Trace& trace, const std::filesystem::path& path);

std::string summary_to_json(const Trace& trace);

// Two-column (k, value) series for external plotting, one file per signal.
void write_plot_series(const Trace& trace, const std::filesystem::path& directory);

std::string reproduce_report_to_json(const ReproduceReport& report);

} // namespace uiobank
