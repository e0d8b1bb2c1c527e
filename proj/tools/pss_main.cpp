// Command-line frontend: batch, file-based, reproducible runs.
//
// Exit codes: 0 success, 1 internal error, 2 bad config/schema,
// 3 infeasible design, 4 filesystem error.

#include <CLI11.hpp>
#include <filesystem>
#include <fstream>
#include <iostream>

#include "pss/analysis.hpp"
#include "pss/combinatorics.hpp"
#include "pss/io.hpp"
#include "pss/optimize.hpp"
#include "pss/presets.hpp"
#include "pss/rng.hpp"
#include "pss/states.hpp"
#include "pss/tomography.hpp"
#include "pss/version.hpp"

namespace fs = std::filesystem;
using pss::io::json;

namespace {

struct CommonOptions {
    std::string config_path;
    std::string out_dir;
    std::uint64_t seed = 1;
    int threads = 1;
};

json load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw pss::io::ConfigError("cannot open config file: " + path);
    json j;
    try {
        in >> j;
    } catch (const std::exception& e) {
        throw pss::io::ConfigError("config is not valid JSON: " + std::string(e.what()));
    }
    return j;
}

fs::path prepare_out_dir(const std::string& dir) {
    fs::path path(dir);
    std::error_code ec;
    fs::create_directories(path, ec);
    if (ec) throw std::ios_base::failure("cannot create output directory: " + dir);
    return path;
}

void write_text_file(const fs::path& path, const std::string& contents) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::ios_base::failure("cannot open for writing: " + path.string());
    out << contents;
    if (!out) throw std::ios_base::failure("write failed: " + path.string());
}

void write_json_file(const fs::path& path, const json& j) {
    write_text_file(path, j.dump(2) + "\n");
}

// every run leaves a manifest sufficient to reproduce it
void write_manifest(const fs::path& out_dir, const std::string& command, const json& config,
                    const CommonOptions& opts, const std::vector<std::string>& outputs) {
    json manifest{{"command", command},
                  {"version", pss::kVersion},
                  {"config_hash", pss::io::content_hash(config)},
                  {"seed", opts.seed},
                  {"threads", opts.threads},
                  {"outputs", outputs}};
    write_json_file(out_dir / "manifest.json", manifest);
}

void warn_if_unphysical(const pss::SplitStateDensity& rho) {
    const auto d = pss::validate_physical(rho);
    if (d.min_eigenvalue < -1e-10 || d.trace_deviation > 1e-8) {
        std::cerr << "warning: state is not physical (min eigenvalue " << d.min_eigenvalue
                  << ", trace deviation " << d.trace_deviation << ")\n";
    }
}

int cmd_params(int photons) {
    const auto counts = pss::free_parameter_counts(photons);
    json out{{"total", counts.total},
             {"real", counts.real},
             {"imag", counts.imag},
             {"min_output_ports", pss::min_output_ports(photons)}};
    std::cout << out.dump() << "\n";
    return 0;
}

int cmd_simulate(const CommonOptions& opts) {
    const json config = load_config(opts.config_path);
    pss::io::check_keys(config, {"state", "circuit"}, {}, "simulate config");
    const pss::SplitStateDensity state = pss::io::state_from_json(config.at("state"));
    const pss::CircuitSpec circuit = pss::io::circuit_from_json(config.at("circuit"));
    if (circuit.photons() != state.n) {
        throw pss::io::ConfigError("simulate: circuit input ports must match the photon count");
    }
    warn_if_unphysical(state);

    const pss::MeasurementMatrix t = pss::measurement_for_circuit(circuit);
    const Eigen::VectorXd gamma = pss::predict_correlations(t, pss::to_free_vector(state));

    const fs::path out_dir = prepare_out_dir(opts.out_dir);
    std::ostringstream csv;
    pss::io::write_correlations_csv(csv, t.detector_sets, gamma);
    write_text_file(out_dir / "correlations.csv", csv.str());

    std::ostringstream t_csv;
    pss::io::write_measurement_csv(t_csv, t);
    write_text_file(out_dir / "measurement.csv", t_csv.str());
    json meta = pss::io::measurement_meta_to_json(t, pss::TConvention::PairFactor2);
    meta["condition_number"] = pss::condition_number(t);
    write_json_file(out_dir / "measurement.json", meta);

    json state_echo = pss::io::density_to_json(state);
    const auto diag = pss::validate_physical(state);
    state_echo["diagnostics"] = json{{"pairing_residual", diag.pairing_residual},
                                     {"trace_deviation", diag.trace_deviation},
                                     {"min_eigenvalue", diag.min_eigenvalue}};
    write_json_file(out_dir / "state.json", state_echo);

    write_manifest(out_dir, "simulate", config, opts,
                   {"correlations.csv", "measurement.csv", "measurement.json", "state.json"});
    return 0;
}

int cmd_design(const CommonOptions& opts) {
    const json config = load_config(opts.config_path);
    pss::DesignProblem problem = pss::io::design_problem_from_json(config);
    problem.seed = opts.seed;
    problem.threads = opts.threads;
    const pss::DesignResult result = pss::optimize_phases(problem);
    std::cerr << "best condition number " << result.condition_number << " after "
              << result.total_evaluations << " evaluations\n";

    const fs::path out_dir = prepare_out_dir(opts.out_dir);
    write_json_file(out_dir / "design_result.json", pss::io::design_result_to_json(result));
    write_manifest(out_dir, "design", config, opts, {"design_result.json"});
    return 0;
}

int cmd_sweep(const CommonOptions& opts) {
    const json config = load_config(opts.config_path);
    pss::io::check_keys(config, {"design", "lengths"}, {}, "sweep config");
    pss::DesignProblem problem = pss::io::design_problem_from_json(config.at("design"));
    problem.seed = opts.seed;
    problem.threads = opts.threads;

    std::vector<double> lengths;
    const json& grid = config.at("lengths");
    if (grid.is_array()) {
        lengths = grid.get<std::vector<double>>();
    } else {
        pss::io::check_keys(grid, {"start", "stop", "step"}, {}, "sweep lengths");
        const double start = grid.at("start").get<double>();
        const double stop = grid.at("stop").get<double>();
        const double step = grid.at("step").get<double>();
        if (step <= 0 || stop < start) throw pss::io::ConfigError("sweep: bad length grid");
        for (double length = start; length <= stop + 0.5 * step; length += step) {
            lengths.push_back(length);
        }
    }

    const auto points = pss::length_sweep(problem, lengths);
    const fs::path out_dir = prepare_out_dir(opts.out_dir);
    std::ostringstream csv;
    pss::io::write_sweep_csv(csv, points);
    write_text_file(out_dir / "sweep.csv", csv.str());

    json results = json::array();
    for (const auto& point : points) {
        json entry{{"length", point.length}, {"feasible", point.feasible}};
        if (point.feasible) {
            entry["result"] = pss::io::design_result_to_json(point.result);
        } else {
            entry["error"] = point.error;
        }
        results.push_back(std::move(entry));
    }
    write_json_file(out_dir / "sweep.json", json{{"points", results}});
    write_manifest(out_dir, "sweep", config, opts, {"sweep.csv", "sweep.json"});
    return 0;
}

int cmd_reconstruct(const CommonOptions& opts) {
    const json config = load_config(opts.config_path);
    pss::io::check_keys(config, {"circuit", "correlations"}, {"normalize", "project", "truth"},
                        "reconstruct config");
    const pss::CircuitSpec circuit = pss::io::circuit_from_json(config.at("circuit"));
    const auto values = config.at("correlations").get<std::vector<double>>();
    const bool normalize = config.value("normalize", false);
    const bool project = config.value("project", true);

    const pss::MeasurementMatrix t = pss::measurement_for_circuit(circuit);
    if (values.size() != t.detector_sets.size()) {
        throw pss::io::ConfigError("reconstruct: expected " +
                                   std::to_string(t.detector_sets.size()) + " correlations");
    }
    if (!std::isfinite(pss::condition_number(t))) {
        throw pss::InfeasibleDesignError("reconstruct: design has infinite condition number");
    }
    Eigen::VectorXd gamma(static_cast<Eigen::Index>(values.size()));
    for (std::size_t k = 0; k < values.size(); ++k) gamma(static_cast<Eigen::Index>(k)) = values[k];

    const pss::Reconstructor reconstructor(t);
    if (reconstructor.rank_deficient()) {
        std::cerr << "warning: measurement matrix is rank deficient; "
                     "returning the least-squares solution\n";
    }
    const Eigen::VectorXd recovered = reconstructor(gamma, normalize);
    pss::SplitStateDensity rho = pss::from_free_vector(recovered, circuit.photons());
    json out = json::object();
    out["raw"] = pss::io::density_to_json(rho);
    if (project) {
        rho = pss::project_physical(rho);
        out["projected"] = pss::io::density_to_json(rho);
    }
    if (config.contains("truth")) {
        const pss::SplitStateDensity truth = pss::io::state_from_json(config.at("truth"));
        out["fidelity"] = pss::fidelity(truth, project ? rho : pss::project_physical(rho));
    }
    const auto diag = pss::validate_physical(rho);
    out["diagnostics"] = json{{"pairing_residual", diag.pairing_residual},
                              {"trace_deviation", diag.trace_deviation},
                              {"min_eigenvalue", diag.min_eigenvalue}};

    const fs::path out_dir = prepare_out_dir(opts.out_dir);
    write_json_file(out_dir / "reconstruction.json", out);
    write_manifest(out_dir, "reconstruct", config, opts, {"reconstruction.json"});
    return 0;
}

int cmd_noise(const CommonOptions& opts) {
    const json config = load_config(opts.config_path);
    pss::io::check_keys(config, {"circuit", "state"},
                        {"relative_sigma", "additive", "squared_fidelity", "trials"},
                        "noise config");
    pss::NoiseStudyConfig study;
    study.design = pss::io::circuit_from_json(config.at("circuit"));
    study.true_state = pss::io::state_from_json(config.at("state"));
    study.relative_sigma = config.value("relative_sigma", 0.05);
    study.additive = config.value("additive", false);
    study.squared_fidelity = config.value("squared_fidelity", true);
    study.trials = config.value("trials", std::size_t{5000});
    study.seed = opts.seed;
    study.threads = opts.threads;

    std::vector<double> scores;
    const pss::StudySummary summary = pss::noise_study(study, &scores);
    std::cerr << "mean fidelity " << summary.mean << ", min " << summary.min << "\n";

    const fs::path out_dir = prepare_out_dir(opts.out_dir);
    std::ostringstream trials_csv;
    pss::io::write_trials_csv(trials_csv, "", {{"", scores}}, "fidelity");
    write_text_file(out_dir / "trials.csv", trials_csv.str());
    std::ostringstream summary_csv;
    pss::io::write_summary_csv(summary_csv, "", {{"", summary}});
    write_text_file(out_dir / "summary.csv", summary_csv.str());
    write_json_file(out_dir / "summary.json", pss::io::summary_to_json(summary));
    write_manifest(out_dir, "noise", config, opts, {"trials.csv", "summary.csv", "summary.json"});
    return 0;
}

int cmd_tolerance(const CommonOptions& opts) {
    const json config = load_config(opts.config_path);
    pss::io::check_keys(config, {"circuit", "magnitudes"}, {"gaussian", "trials"},
                        "tolerance config");
    pss::ToleranceStudyConfig study;
    study.design = pss::io::circuit_from_json(config.at("circuit"));
    study.magnitudes = config.at("magnitudes").get<std::vector<double>>();
    study.gaussian = config.value("gaussian", false);
    study.trials = config.value("trials", std::size_t{5000});
    study.seed = opts.seed;
    study.threads = opts.threads;

    std::vector<std::vector<double>> scores;
    const auto summaries = pss::tolerance_study(study, &scores);

    const fs::path out_dir = prepare_out_dir(opts.out_dir);
    std::vector<std::pair<std::string, std::vector<double>>> groups;
    std::vector<std::pair<std::string, pss::StudySummary>> rows;
    for (std::size_t k = 0; k < summaries.size(); ++k) {
        const std::string label = pss::io::format_number(study.magnitudes[k]);
        groups.emplace_back(label, scores[k]);
        rows.emplace_back(label, summaries[k]);
        std::cerr << "magnitude " << label << ": mean condition number " << summaries[k].mean
                  << "\n";
    }
    std::ostringstream trials_csv;
    pss::io::write_trials_csv(trials_csv, "magnitude", groups, "condition_number");
    write_text_file(out_dir / "trials.csv", trials_csv.str());
    std::ostringstream summary_csv;
    pss::io::write_summary_csv(summary_csv, "magnitude", rows);
    write_text_file(out_dir / "summary.csv", summary_csv.str());
    json summary_json = json::array();
    for (std::size_t k = 0; k < summaries.size(); ++k) {
        json entry = pss::io::summary_to_json(summaries[k]);
        entry["magnitude"] = study.magnitudes[k];
        summary_json.push_back(std::move(entry));
    }
    write_json_file(out_dir / "summary.json", json{{"magnitudes", summary_json}});
    write_manifest(out_dir, "tolerance", config, opts,
                   {"trials.csv", "summary.csv", "summary.json"});
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Split-state tomography toolkit: segmented coupled-waveguide designs, "
                 "coincidence simulation, reconstruction, and robustness studies"};
    app.require_subcommand(1);

    int photons = 0;
    auto* params = app.add_subcommand("params", "Free-parameter counts and minimum output ports");
    params->add_option("--photons", photons, "photon count")->required();

    const struct {
        const char* name;
        const char* help;
    } file_commands[] = {
        {"simulate", "Predict N-photon coincidences for a state and circuit"},
        {"design", "Optimize hidden-layer phases for one circuit length"},
        {"sweep", "Optimize over a grid of total lengths"},
        {"reconstruct", "Recover a state from measured correlations"},
        {"noise", "Monte Carlo fidelity distribution under correlation noise"},
        {"tolerance", "Monte Carlo condition numbers under phase perturbations"},
    };
    CommonOptions opts;
    for (const auto& command : file_commands) {
        auto* sub = app.add_subcommand(command.name, command.help);
        sub->add_option("--config", opts.config_path, "JSON job description")
            ->required()
            ->check(CLI::ExistingFile);
        sub->add_option("--out", opts.out_dir, "output directory")->required();
        sub->add_option("--seed", opts.seed, "RNG seed");
        sub->add_option("--threads", opts.threads, "worker threads");
    }

    CLI11_PARSE(app, argc, argv);

    try {
        if (params->parsed()) return cmd_params(photons);
        if (app.get_subcommand("simulate")->parsed()) return cmd_simulate(opts);
        if (app.get_subcommand("design")->parsed()) return cmd_design(opts);
        if (app.get_subcommand("sweep")->parsed()) return cmd_sweep(opts);
        if (app.get_subcommand("reconstruct")->parsed()) return cmd_reconstruct(opts);
        if (app.get_subcommand("noise")->parsed()) return cmd_noise(opts);
        if (app.get_subcommand("tolerance")->parsed()) return cmd_tolerance(opts);
    } catch (const pss::io::ConfigError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const nlohmann::json::exception& e) {
        std::cerr << "error: config: " << e.what() << "\n";
        return 2;
    } catch (const pss::InfeasibleDesignError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const std::ios_base::failure& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 4;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 1;
}
