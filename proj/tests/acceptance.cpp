// Acceptance suite: one pass/fail line per criterion. Run with no arguments
// for the full gate, or pass criterion numbers to run a subset.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "pss/analysis.hpp"
#include "pss/combinatorics.hpp"
#include "pss/fock_oracle.hpp"
#include "pss/io.hpp"
#include "pss/optimize.hpp"
#include "pss/presets.hpp"
#include "pss/rng.hpp"
#include "pss/states.hpp"
#include "pss/tomography.hpp"

using namespace pss;

namespace {

constexpr double kPi = 3.14159265358979323846;

struct Checker {
    bool ok = true;
    std::ostringstream detail;

    void require(bool condition, const std::string& what) {
        if (!condition) {
            ok = false;
            detail << (detail.str().empty() ? "" : "; ") << what;
        }
    }
};

OverlapMatrix random_psd_overlaps(int n, std::uint64_t seed) {
    SplitMix64 rng(seed);
    Eigen::MatrixXcd v(n, n);
    for (int j = 0; j < n; ++j) {
        for (int x = 0; x < n; ++x) v(x, j) = Complex(rng.gaussian(), rng.gaussian());
        v.col(j).normalize();
    }
    return OverlapMatrix{v.adjoint() * v};
}

CircuitSpec random_circuit(int m, int sections, std::vector<int> ports, std::uint64_t seed) {
    SplitMix64 rng(seed);
    CircuitSpec spec = CircuitSpec::uniform(m, sections, rng.uniform(0.3, 3.5), std::move(ports));
    for (auto& layer : spec.phase_layers) {
        for (auto& phi : layer) phi = rng.uniform(0.0, 2 * kPi);
    }
    return spec;
}

double circular_distance_to_zero(double phi) {
    const double folded = fold_phase(phi);
    return std::min(folded, 2 * kPi - folded);
}

// 1. Parameter counts reproduce the published (total, real, imaginary)
//    triples exactly; involution counts match brute force for n <= 7.
bool criterion_1(Checker& c) {
    const std::uint64_t totals[] = {2, 6, 24};
    const std::uint64_t reals[] = {2, 5, 17};
    const std::uint64_t imags[] = {0, 1, 7};
    for (int n = 2; n <= 4; ++n) {
        const auto counts = free_parameter_counts(n);
        c.require(counts.total == totals[n - 2], "total mismatch at n=" + std::to_string(n));
        c.require(counts.real == reals[n - 2], "real mismatch at n=" + std::to_string(n));
        c.require(counts.imag == imags[n - 2], "imag mismatch at n=" + std::to_string(n));
    }
    for (int n = 1; n <= 7; ++n) {
        std::uint64_t brute = 0;
        for (const auto& p : permutations_lex(n)) {
            if (compose(p, p) == identity_permutation(n)) ++brute;
        }
        c.require(involution_count(n) == brute,
                  "involution count disagrees with brute force at n=" + std::to_string(n));
    }
    return c.ok;
}

// 2. Minimum output ports: 3,5,7,9 for N=2..5 and the quadratic fit for
//    2 <= N <= 30, exactly.
bool criterion_2(Checker& c) {
    const int expected[] = {3, 5, 7, 9};
    for (int n = 2; n <= 5; ++n) {
        c.require(min_output_ports(n) == expected[n - 2],
                  "ports mismatch at n=" + std::to_string(n));
    }
    for (int n = 2; n <= 30; ++n) {
        const int fit = static_cast<int>(std::ceil(0.139 * n * n + 1.174 * n - 0.387));
        c.require(min_output_ports(n) == fit, "quadratic fit mismatch at n=" + std::to_string(n));
    }
    return c.ok;
}

// 3. Convention anchors: the published phase programs reproduce the
//    published condition numbers under the frozen pair-factor-2 convention.
bool criterion_3(Checker& c) {
    struct Anchor {
        const char* name;
        CircuitSpec spec;
        double published;
        double tolerance; // relative
    };
    const Anchor anchors[] = {
        {"three-photon one-layer", three_photon_design_one_layer(), 4.1, 0.05},
        {"three-photon two-layer", three_photon_design_two_layer(), 3.9, 0.05},
        {"four-photon", four_photon_design(), 16.3464, 0.01},
    };
    for (const auto& anchor : anchors) {
        const MeasurementMatrix t = measurement_for_circuit(anchor.spec);
        const double cond = condition_number(t, TConvention::PairFactor2);
        c.detail << anchor.name << " cond=" << cond << " ";
        c.require(std::abs(cond - anchor.published) <= anchor.tolerance * anchor.published,
                  std::string(anchor.name) + " outside tolerance");
    }
    return c.ok;
}

// 4. Two-photon sweep: plateau at ~2.3 for L >= 0.84 and all-zero optimal
//    phases below.
bool criterion_4(Checker& c) {
    DesignProblem problem;
    problem.m = 3;
    problem.n = 2;
    problem.input_ports = {0, 2};
    problem.sections = 2;
    problem.starts = 50;
    problem.seed = 2024;

    std::vector<double> lengths;
    for (int k = 4; k <= 40; ++k) lengths.push_back(0.05 * k); // 0.20 .. 2.00

    const auto points = length_sweep(problem, lengths);
    double plateau_min = 1e300;
    double plateau_max = 0;
    for (const auto& point : points) {
        if (!point.feasible) {
            c.require(false, "infeasible grid point at L=" + std::to_string(point.length));
            continue;
        }
        if (point.length < 0.84) {
            for (const auto& layer : point.result.phase_layers) {
                for (double phi : layer) {
                    c.require(circular_distance_to_zero(phi) < 1e-3,
                              "nonzero optimal phase at L=" + std::to_string(point.length));
                }
            }
        } else {
            plateau_min = std::min(plateau_min, point.result.condition_number);
            plateau_max = std::max(plateau_max, point.result.condition_number);
            c.require(std::abs(point.result.condition_number - 2.3) <= 0.05 * 2.3,
                      "condition number off the plateau at L=" + std::to_string(point.length));
        }
    }
    c.detail << "plateau range [" << plateau_min << ", " << plateau_max << "] ";
    return c.ok;
}

// 5. Oracle equivalence on randomized instances, plus the exact
//    Hong-Ou-Mandel cancellation.
bool criterion_5(Checker& c) {
    int instances = 0;
    double worst = 0;
    for (std::uint64_t seed = 1; seed <= 60; ++seed) {
        for (int n : {2, 3}) {
            const int m = 3 + static_cast<int>((seed + static_cast<std::uint64_t>(n)) % 3); // 3..5
            std::vector<int> ports;
            for (int k = 0; k < n; ++k) ports.push_back(std::min(2 * k, m - n + k));
            const int sections = 1 + static_cast<int>(seed % 3);
            const auto spec =
                random_circuit(m, sections, ports, 7000 + 10 * seed + static_cast<std::uint64_t>(n));
            const auto overlaps =
                random_psd_overlaps(n, 9000 + 10 * seed + static_cast<std::uint64_t>(n));

            const Eigen::MatrixXcd u = circuit_unitary(spec);
            const Eigen::VectorXd predicted = predict_correlations(
                build_measurement_matrix(input_submatrix(u, ports), n),
                to_free_vector(density_from_overlaps(overlaps)));
            const Eigen::VectorXd oracle =
                oracle_correlations(u, ports, internal_from_overlaps(overlaps, n));
            worst = std::max(worst, (predicted - oracle).cwiseAbs().maxCoeff());
            ++instances;
        }
    }
    c.detail << instances << " instances, worst deviation " << worst << " ";
    c.require(instances >= 100, "fewer than 100 instances");
    c.require(worst < 1e-10, "oracle deviation above 1e-10");

    const Eigen::MatrixXcd coupler = section_propagator(coupling_matrix(2, 1.0), kPi / 4.0);
    const MeasurementMatrix t = build_measurement_matrix(input_submatrix(coupler, {0, 1}), 2);
    const auto identical = density_from_overlaps(OverlapMatrix::all_ones(2));
    const double hom = predict_correlations(t, to_free_vector(identical))(0);
    const double hom_oracle = oracle_correlations(
        coupler, {0, 1}, internal_from_overlaps(OverlapMatrix::all_ones(2), 1))(0);
    c.require(std::abs(hom) < 1e-12, "predicted HOM coincidence not zero");
    c.require(std::abs(hom_oracle) < 1e-12, "oracle HOM coincidence not zero");
    return c.ok;
}

// 6. Noise robustness: 5000 trials at 5% relative noise on both reference
//    designs -> mean fidelity in [0.985, 0.995], minimum >= 0.95.
bool criterion_6(Checker& c) {
    for (const auto& [name, design] :
         {std::pair<const char*, CircuitSpec>{"one-layer", three_photon_design_one_layer()},
          std::pair<const char*, CircuitSpec>{"two-layer", three_photon_design_two_layer()}}) {
        NoiseStudyConfig config;
        config.design = design;
        config.true_state = density_from_overlaps(example_three_photon_overlaps());
        config.relative_sigma = 0.05;
        config.trials = 5000;
        config.seed = 99;
        const StudySummary summary = noise_study(config);
        c.detail << name << " mean=" << summary.mean << " min=" << summary.min << " ";
        c.require(summary.mean >= 0.985 && summary.mean <= 0.995,
                  std::string(name) + " mean fidelity outside [0.985, 0.995]");
        c.require(summary.min >= 0.95, std::string(name) + " minimum fidelity below 0.95");
    }
    return c.ok;
}

// 7. Fabrication tolerance: mean condition numbers stay below 7 for phase
//    perturbations up to 0.1 pi; zero magnitude reproduces the design cond
//    exactly.
bool criterion_7(Checker& c) {
    for (const auto& [name, design] :
         {std::pair<const char*, CircuitSpec>{"one-layer", three_photon_design_one_layer()},
          std::pair<const char*, CircuitSpec>{"two-layer", three_photon_design_two_layer()}}) {
        ToleranceStudyConfig config;
        config.design = design;
        config.magnitudes = {0.0, 0.02 * kPi, 0.04 * kPi, 0.06 * kPi, 0.08 * kPi, 0.1 * kPi};
        config.trials = 5000;
        config.seed = 77;
        const auto summaries = tolerance_study(config);
        const double unperturbed = condition_number(measurement_for_circuit(design));
        c.require(summaries[0].min == unperturbed && summaries[0].max == unperturbed,
                  std::string(name) + " zero-magnitude cond is not exact");
        double worst_mean = 0;
        for (std::size_t k = 1; k < summaries.size(); ++k) {
            worst_mean = std::max(worst_mean, summaries[k].mean);
            c.require(summaries[k].mean < 7.0, std::string(name) + " mean cond >= 7 at magnitude " +
                                                   std::to_string(config.magnitudes[k]));
        }
        c.detail << name << " worst mean=" << worst_mean << " ";
    }
    return c.ok;
}

// 8. Property suite: unitarity, analytic spectrum, pairing symmetries, PSD
//    support, reconstruction identity, fidelity bounds, seed determinism.
bool criterion_8(Checker& c) {
    // unitarity of random circuits
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        const auto spec = random_circuit(5, 3, {0, 2, 4}, 100 + seed);
        c.require(unitarity_error(circuit_unitary(spec)) < 1e-10, "unitarity failure");
    }

    // propagator against the analytic tridiagonal Toeplitz solution
    for (int m : {3, 5, 7}) {
        const double length = 1.7;
        const Eigen::MatrixXcd w = section_propagator(coupling_matrix(m, 1.0), length);
        Eigen::MatrixXcd analytic = Eigen::MatrixXcd::Zero(m, m);
        for (int q = 1; q <= m; ++q) {
            const double lambda = 2.0 * std::cos(kPi * q / (m + 1));
            Eigen::VectorXd mode(m);
            for (int j = 0; j < m; ++j) {
                mode(j) = std::sqrt(2.0 / (m + 1)) * std::sin(kPi * q * (j + 1) / (m + 1));
            }
            analytic += std::polar(1.0, lambda * length) * (mode * mode.transpose()).cast<Complex>();
        }
        c.require((w - analytic).cwiseAbs().maxCoeff() < 1e-10, "propagator spectrum mismatch");
    }

    // Hermitian pairing and involution realness of densities and T columns
    for (std::uint64_t seed = 1; seed <= 8; ++seed) {
        const int n = 2 + static_cast<int>(seed % 2);
        const auto rho = density_from_overlaps(random_psd_overlaps(n, 200 + seed));
        const auto& layout = FreeLayout::get(n);
        for (std::size_t k = 0; k < rho.first_row.size(); ++k) {
            const auto inv = layout.inverse_index[k];
            c.require(std::abs(rho.first_row[inv] - std::conj(rho.first_row[k])) < 1e-12,
                      "density pairing failure");
            if (inv == k) c.require(std::abs(rho.first_row[k].imag()) < 1e-12, "involution realness");
        }
        std::vector<int> ports;
        for (int k = 0; k < n; ++k) ports.push_back(2 * k);
        const auto spec = random_circuit(5, 2, ports, 300 + seed);
        const MeasurementMatrix t = measurement_for_circuit(spec);
        for (std::size_t k = 0; k < layout.inverse_index.size(); ++k) {
            const auto inv = layout.inverse_index[k];
            c.require((t.t_complex.col(static_cast<Eigen::Index>(inv)) -
                       t.t_complex.col(static_cast<Eigen::Index>(k)).conjugate())
                              .cwiseAbs()
                              .maxCoeff() < 1e-12,
                      "T column pairing failure");
            if (inv == k) {
                c.require(t.t_complex.col(static_cast<Eigen::Index>(k)).imag().cwiseAbs().maxCoeff() <
                              1e-12,
                          "T involution column not real");
            }
        }

        // PSD of overlap-built support blocks
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(support_block(rho),
                                                           Eigen::EigenvaluesOnly);
        c.require(es.eigenvalues().minCoeff() >= -1e-10, "support block not PSD");

        // noiseless reconstruct(predict) identity
        if (std::isfinite(condition_number(t))) {
            const Eigen::VectorXd v = to_free_vector(rho);
            const Eigen::VectorXd back = reconstruct(t, predict_correlations(t, v));
            c.require((back - v).cwiseAbs().maxCoeff() < 1e-10, "reconstruction identity failure");
        }
    }

    // fidelity bounds
    for (std::uint64_t seed = 1; seed <= 6; ++seed) {
        const auto a = density_from_overlaps(random_psd_overlaps(3, 400 + seed));
        const auto b = density_from_overlaps(random_psd_overlaps(3, 500 + seed));
        const double f = fidelity(a, b);
        c.require(f >= 0.0 && f <= 1.0 + 1e-10, "fidelity out of bounds");
        c.require(std::abs(fidelity(a, a) - 1.0) < 1e-10, "self fidelity not one");
    }

    // seed determinism: byte-identical reruns of the stochastic pipelines
    {
        NoiseStudyConfig config;
        config.design = three_photon_design_one_layer();
        config.true_state = density_from_overlaps(example_three_photon_overlaps());
        config.trials = 200;
        config.seed = 1234;
        std::vector<double> a;
        std::vector<double> b;
        noise_study(config, &a);
        noise_study(config, &b);
        std::ostringstream csv_a;
        std::ostringstream csv_b;
        io::write_trials_csv(csv_a, "", {{"", a}}, "fidelity");
        io::write_trials_csv(csv_b, "", {{"", b}}, "fidelity");
        c.require(csv_a.str() == csv_b.str(), "noise study rerun not byte-identical");

        DesignProblem problem;
        problem.m = 3;
        problem.n = 2;
        problem.input_ports = {0, 2};
        problem.sections = 2;
        problem.total_length = 1.2;
        problem.starts = 8;
        problem.seed = 55;
        const auto r1 = optimize_phases(problem);
        const auto r2 = optimize_phases(problem);
        c.require(io::design_result_to_json(r1).dump() == io::design_result_to_json(r2).dump(),
                  "design rerun not byte-identical");
    }
    return c.ok;
}

} // namespace

int main(int argc, char** argv) {
    std::set<int> selected;
    for (int i = 1; i < argc; ++i) selected.insert(std::atoi(argv[i]));

    struct Criterion {
        int number;
        const char* name;
        std::function<bool(Checker&)> run;
    };
    const std::vector<Criterion> criteria = {
        {1, "parameter counts", criterion_1},
        {2, "port scaling", criterion_2},
        {3, "condition-number anchors", criterion_3},
        {4, "two-photon sweep", criterion_4},
        {5, "oracle equivalence", criterion_5},
        {6, "noise robustness", criterion_6},
        {7, "fabrication tolerance", criterion_7},
        {8, "property suite", criterion_8},
    };

    int failures = 0;
    for (const auto& criterion : criteria) {
        if (!selected.empty() && !selected.count(criterion.number)) continue;
        Checker checker;
        const auto start = std::chrono::steady_clock::now();
        bool ok = false;
        try {
            ok = criterion.run(checker);
        } catch (const std::exception& e) {
            checker.require(false, std::string("exception: ") + e.what());
        }
        const double seconds =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        std::printf("[%s] criterion %d: %s (%.1fs)%s%s\n", ok ? "PASS" : "FAIL", criterion.number,
                    criterion.name, seconds, checker.detail.str().empty() ? "" : " -- ",
                    checker.detail.str().c_str());
        std::fflush(stdout);
        if (!ok) ++failures;
    }
    return failures;
}
