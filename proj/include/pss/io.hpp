#pragma once

#include <json.hpp>
#include <ostream>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "pss/analysis.hpp"
#include "pss/circuit.hpp"
#include "pss/optimize.hpp"
#include "pss/states.hpp"
#include "pss/tomography.hpp"

namespace pss::io {

using json = nlohmann::ordered_json;

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Rejects unknown keys and missing required keys.
void check_keys(const json& j, const std::set<std::string>& required,
                const std::set<std::string>& optional, const std::string& context);

// complex values serialize as [re, im]
json complex_to_json(Complex value);
Complex complex_from_json(const json& j, const std::string& context);

json overlaps_to_json(const OverlapMatrix& overlaps);
OverlapMatrix overlaps_from_json(const json& j);

// { "n": int, "first_row": [[re, im], ...] } in lex order
json density_to_json(const SplitStateDensity& rho);
SplitStateDensity density_from_json(const json& j);

// Accepts either a first-row document or { "overlaps": [...] }.
SplitStateDensity state_from_json(const json& j);

json circuit_to_json(const CircuitSpec& spec);
CircuitSpec circuit_from_json(const json& j);

json design_problem_to_json(const DesignProblem& problem);
DesignProblem design_problem_from_json(const json& j);

json design_result_to_json(const DesignResult& result);
json summary_to_json(const StudySummary& summary);
json measurement_meta_to_json(const MeasurementMatrix& t, TConvention convention);

// fixed-precision round-trip-safe formatting used by every CSV writer
std::string format_number(double value, int significant_digits = 12);
std::string detector_label(const std::vector<int>& detectors);

void write_correlations_csv(std::ostream& out, const std::vector<std::vector<int>>& detector_sets,
                            const Eigen::VectorXd& gamma);
void write_measurement_csv(std::ostream& out, const MeasurementMatrix& t);
void write_sweep_csv(std::ostream& out, const std::vector<SweepPoint>& points);
void write_trials_csv(std::ostream& out, const std::string& label_column,
                      const std::vector<std::pair<std::string, std::vector<double>>>& groups,
                      const std::string& score_column);
void write_summary_csv(std::ostream& out, const std::string& label_column,
                       const std::vector<std::pair<std::string, StudySummary>>& rows);

// FNV-1a over the canonical dump, for run manifests
std::string content_hash(const json& j);

} // namespace pss::io
