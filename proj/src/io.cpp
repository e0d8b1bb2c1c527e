#include "pss/io.hpp"

#include <cinttypes>
#include <cmath>
#include <cstdio>

namespace pss::io {

void check_keys(const json& j, const std::set<std::string>& required,
                const std::set<std::string>& optional, const std::string& context) {
    if (!j.is_object()) throw ConfigError(context + ": expected a JSON object");
    for (const auto& [key, value] : j.items()) {
        (void)value;
        if (!required.count(key) && !optional.count(key)) {
            throw ConfigError(context + ": unknown field \"" + key + "\"");
        }
    }
    for (const auto& key : required) {
        if (!j.contains(key)) throw ConfigError(context + ": missing field \"" + key + "\"");
    }
}

json complex_to_json(Complex value) {
    return json::array({value.real(), value.imag()});
}

Complex complex_from_json(const json& j, const std::string& context) {
    if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number()) {
        throw ConfigError(context + ": complex values must be [re, im]");
    }
    return Complex(j[0].get<double>(), j[1].get<double>());
}

json overlaps_to_json(const OverlapMatrix& overlaps) {
    json rows = json::array();
    for (int i = 0; i < overlaps.size(); ++i) {
        json row = json::array();
        for (int k = 0; k < overlaps.size(); ++k) {
            row.push_back(complex_to_json(overlaps.entries(i, k)));
        }
        rows.push_back(std::move(row));
    }
    return json{{"overlaps", rows}};
}

OverlapMatrix overlaps_from_json(const json& j) {
    const json& rows = j.contains("overlaps") ? j.at("overlaps") : j;
    if (!rows.is_array() || rows.empty()) throw ConfigError("overlaps: expected a nonempty matrix");
    const auto n = static_cast<Eigen::Index>(rows.size());
    Eigen::MatrixXcd entries(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        const json& row = rows[static_cast<std::size_t>(i)];
        if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != n) {
            throw ConfigError("overlaps: matrix must be square");
        }
        for (Eigen::Index k = 0; k < n; ++k) {
            entries(i, k) = complex_from_json(row[static_cast<std::size_t>(k)], "overlaps");
        }
    }
    return OverlapMatrix{entries};
}

json density_to_json(const SplitStateDensity& rho) {
    json row = json::array();
    for (const Complex& value : rho.first_row) row.push_back(complex_to_json(value));
    return json{{"n", rho.n}, {"first_row", row}};
}

SplitStateDensity density_from_json(const json& j) {
    check_keys(j, {"n", "first_row"}, {}, "state");
    SplitStateDensity rho;
    rho.n = j.at("n").get<int>();
    if (rho.n < 1) throw ConfigError("state: n must be >= 1");
    const json& row = j.at("first_row");
    std::uint64_t expected = 0;
    try {
        expected = factorial(rho.n);
    } catch (const std::exception&) {
        throw ConfigError("state: n too large");
    }
    if (!row.is_array() || row.size() != expected) {
        throw ConfigError("state: first_row must hold n! complex entries in lex order");
    }
    rho.first_row.reserve(row.size());
    for (const auto& value : row) rho.first_row.push_back(complex_from_json(value, "first_row"));
    return rho;
}

SplitStateDensity state_from_json(const json& j) {
    if (!j.is_object()) throw ConfigError("state: expected a JSON object");
    if (j.contains("overlaps")) {
        check_keys(j, {"overlaps"}, {}, "state");
        return density_from_overlaps(overlaps_from_json(j));
    }
    return density_from_json(j);
}

json circuit_to_json(const CircuitSpec& spec) {
    return json{{"m", spec.m},
                {"kappa", spec.kappa},
                {"section_lengths", spec.section_lengths},
                {"phase_layers", spec.phase_layers},
                {"input_ports", spec.input_ports}};
}

CircuitSpec circuit_from_json(const json& j) {
    check_keys(j, {"m", "section_lengths", "input_ports"}, {"kappa", "phase_layers"}, "circuit");
    CircuitSpec spec;
    spec.m = j.at("m").get<int>();
    spec.kappa = j.value("kappa", 1.0);
    spec.section_lengths = j.at("section_lengths").get<std::vector<double>>();
    if (j.contains("phase_layers")) {
        spec.phase_layers = j.at("phase_layers").get<std::vector<std::vector<double>>>();
    } else {
        spec.phase_layers.assign(spec.section_lengths.empty() ? 0 : spec.section_lengths.size() - 1,
                                 std::vector<double>(static_cast<std::size_t>(std::max(spec.m, 0)), 0.0));
    }
    spec.input_ports = j.at("input_ports").get<std::vector<int>>();
    try {
        validate(spec);
    } catch (const std::exception& e) {
        throw ConfigError(std::string("circuit: ") + e.what());
    }
    for (auto& layer : spec.phase_layers) {
        for (double& phi : layer) phi = fold_phase(phi);
    }
    return spec;
}

json design_problem_to_json(const DesignProblem& problem) {
    return json{{"m", problem.m},
                {"photons", problem.n},
                {"input_ports", problem.input_ports},
                {"sections", problem.sections},
                {"total_length", problem.total_length},
                {"kappa", problem.kappa},
                {"starts", problem.starts},
                {"max_restarts", problem.max_restarts},
                {"optimize_length", problem.optimize_length}};
}

DesignProblem design_problem_from_json(const json& j) {
    check_keys(j, {"m", "photons", "input_ports", "sections", "total_length"},
               {"kappa", "starts", "max_restarts", "optimize_length"}, "design");
    DesignProblem problem;
    problem.m = j.at("m").get<int>();
    problem.n = j.at("photons").get<int>();
    problem.input_ports = j.at("input_ports").get<std::vector<int>>();
    problem.sections = j.at("sections").get<int>();
    problem.total_length = j.at("total_length").get<double>();
    problem.kappa = j.value("kappa", 1.0);
    problem.starts = j.value("starts", 50);
    problem.max_restarts = j.value("max_restarts", 8);
    problem.optimize_length = j.value("optimize_length", false);
    try {
        validate(problem);
    } catch (const std::exception& e) {
        throw ConfigError(std::string("design: ") + e.what());
    }
    return problem;
}

json design_result_to_json(const DesignResult& result) {
    json starts = json::array();
    for (const auto& record : result.starts) {
        starts.push_back(json{{"start_value", record.start_value},
                              {"final_value", record.final_value},
                              {"evaluations", record.evaluations},
                              {"converged", record.converged}});
    }
    return json{{"phase_layers", result.phase_layers},
                {"total_length", result.total_length},
                {"condition_number", result.condition_number},
                {"converged", result.converged},
                {"total_evaluations", result.total_evaluations},
                {"starts", starts}};
}

json summary_to_json(const StudySummary& summary) {
    return json{{"trials", summary.trials},
                {"mean", summary.mean},
                {"stddev", summary.stddev},
                {"min", summary.min},
                {"max", summary.max},
                {"histogram", json{{"lower", summary.histogram.lower},
                                   {"upper", summary.histogram.upper},
                                   {"counts", summary.histogram.counts}}}};
}

json measurement_meta_to_json(const MeasurementMatrix& t, TConvention convention) {
    const char* tag = convention == TConvention::PairFactor2   ? "pair-factor-2"
                      : convention == TConvention::PairFactor1 ? "pair-factor-1"
                                                               : "complex-columns";
    return json{{"m", t.m},
                {"photons", t.n},
                {"input_ports", t.input_ports},
                {"rows", t.detector_sets.size()},
                {"columns", t.t_real.cols()},
                {"convention", tag}};
}

std::string format_number(double value, int significant_digits) {
    char buffer[64];
    std::snprintf(buffer, sizeof(buffer), "%.*g", significant_digits, value);
    return buffer;
}

std::string detector_label(const std::vector<int>& detectors) {
    std::string label;
    for (std::size_t i = 0; i < detectors.size(); ++i) {
        if (i) label += '-';
        label += std::to_string(detectors[i]);
    }
    return label;
}

void write_correlations_csv(std::ostream& out, const std::vector<std::vector<int>>& detector_sets,
                            const Eigen::VectorXd& gamma) {
    out << "detector_set,probability\n";
    for (std::size_t row = 0; row < detector_sets.size(); ++row) {
        out << detector_label(detector_sets[row]) << ','
            << format_number(gamma(static_cast<Eigen::Index>(row))) << '\n';
    }
}

void write_measurement_csv(std::ostream& out, const MeasurementMatrix& t) {
    const auto& layout = FreeLayout::get(t.n);
    const auto perms = permutations_lex(t.n);
    out << "detector_set";
    for (const auto& slot : layout.slots) {
        const auto& p = perms[slot.perm_index];
        std::string name = "rho_";
        for (int v : p) name += std::to_string(v);
        if (slot.kind == SlotKind::PairReal) name += "_re";
        if (slot.kind == SlotKind::PairImag) name += "_im";
        out << ',' << name;
    }
    out << '\n';
    for (std::size_t row = 0; row < t.detector_sets.size(); ++row) {
        out << detector_label(t.detector_sets[row]);
        for (Eigen::Index col = 0; col < t.t_real.cols(); ++col) {
            out << ',' << format_number(t.t_real(static_cast<Eigen::Index>(row), col));
        }
        out << '\n';
    }
}

void write_sweep_csv(std::ostream& out, const std::vector<SweepPoint>& points) {
    std::size_t phase_columns = 0;
    for (const auto& point : points) {
        std::size_t count = 0;
        for (const auto& layer : point.result.phase_layers) count += layer.size();
        phase_columns = std::max(phase_columns, count);
    }
    out << "length,feasible,condition_number,converged";
    std::size_t layer_count = 0;
    for (const auto& point : points) {
        layer_count = std::max(layer_count, point.result.phase_layers.size());
    }
    for (std::size_t j = 0; j < layer_count; ++j) {
        const std::size_t width = phase_columns / std::max<std::size_t>(layer_count, 1);
        for (std::size_t w = 0; w < width; ++w) out << ",phi_l" << (j + 1) << "_w" << w;
    }
    out << '\n';
    for (const auto& point : points) {
        out << format_number(point.length) << ',' << (point.feasible ? 1 : 0) << ',';
        out << (point.feasible ? format_number(point.result.condition_number) : std::string("inf"));
        out << ',' << (point.result.converged ? 1 : 0);
        for (const auto& layer : point.result.phase_layers) {
            for (double phi : layer) out << ',' << format_number(phi);
        }
        out << '\n';
    }
}

void write_trials_csv(std::ostream& out, const std::string& label_column,
                      const std::vector<std::pair<std::string, std::vector<double>>>& groups,
                      const std::string& score_column) {
    if (label_column.empty()) {
        out << "trial," << score_column << '\n';
    } else {
        out << label_column << ",trial," << score_column << '\n';
    }
    for (const auto& [label, values] : groups) {
        for (std::size_t trial = 0; trial < values.size(); ++trial) {
            if (!label_column.empty()) out << label << ',';
            out << trial << ',' << format_number(values[trial]) << '\n';
        }
    }
}

void write_summary_csv(std::ostream& out, const std::string& label_column,
                       const std::vector<std::pair<std::string, StudySummary>>& rows) {
    if (label_column.empty()) {
        out << "trials,mean,stddev,min,max\n";
    } else {
        out << label_column << ",trials,mean,stddev,min,max\n";
    }
    for (const auto& [label, summary] : rows) {
        if (!label_column.empty()) out << label << ',';
        out << summary.trials << ',' << format_number(summary.mean) << ','
            << format_number(summary.stddev) << ',' << format_number(summary.min) << ','
            << format_number(summary.max) << '\n';
    }
}

std::string content_hash(const json& j) {
    const std::string dump = j.dump();
    std::uint64_t hash = 1469598103934665603ULL;
    for (unsigned char c : dump) {
        hash ^= c;
        hash *= 1099511628211ULL;
    }
    char buffer[32];
    std::snprintf(buffer, sizeof(buffer), "%016" PRIx64, hash);
    return buffer;
}

} // namespace pss::io
