#pragma once

// JSON and CSV interchange. Every emitted document carries schema_version 1;
// numeric fields round-trip exactly (shortest-representation JSON numbers,
// %.17g in CSV), and serialization is fully deterministic so equal inputs
// produce byte-equal files.

#include <iosfwd>
#include <string>

#include <json.hpp>

#include "inveff/experiment.hpp"
#include "inveff/simulate.hpp"

namespace inveff {

inline constexpr int kSchemaVersion = 1;

// --- datasets ---------------------------------------------------------------

void write_dataset_csv(const Dataset& ds, std::ostream& out);
Dataset read_dataset_csv(std::istream& in); // bare x,y table; no provenance

nlohmann::json dataset_to_json(const Dataset& ds);
Dataset dataset_from_json(const nlohmann::json& j);

// Reads either format, deciding by the first non-whitespace character.
Dataset read_dataset_auto(std::istream& in);

// --- configs ----------------------------------------------------------------

struct SimulateConfig {
    std::string operator_name = "brownian_bridge";
    std::string error_name = "gaussian";
    double sigma = 1.0;
    TruthSpec truth;
    std::size_t n = 0;
    std::uint64_t seed = 0;
};
SimulateConfig simulate_config_from_json(const nlohmann::json& j);

struct EstimateConfig {
    std::string operator_name = "brownian_bridge";
    std::string error_name = "gaussian";
    double sigma = 1.0;
    TargetSpec target;
    TruncationRule truncation;
    int k_max = 64;
};
EstimateConfig estimate_config_from_json(const nlohmann::json& j);

ExperimentConfig experiment_config_from_json(const nlohmann::json& j);
// Canonical echo of a parsed config; excludes runtime-only fields (workers).
nlohmann::json experiment_config_to_json(const ExperimentConfig& cfg);

// --- results ----------------------------------------------------------------

nlohmann::json validation_report_to_json(const ValidationReport& report);

nlohmann::json experiment_result_to_json(const ExperimentResult& res, const BoundReport& bounds);
void write_experiment_result_csv(const ExperimentResult& res, std::ostream& out);
void write_replicates_csv(const ExperimentResult& res, std::ostream& out);

// --- helpers ----------------------------------------------------------------

// Shortest decimal that round-trips a double; used by the CSV writers.
std::string format_double(double x);

nlohmann::json load_json_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& text);

} // namespace inveff
