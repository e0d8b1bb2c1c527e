#pragma once

#include <cstdint>
#include <vector>

#include "pss/circuit.hpp"
#include "pss/states.hpp"
#include "pss/tomography.hpp"

namespace pss {

struct Histogram {
    double lower = 0;
    double upper = 0;
    std::vector<std::uint64_t> counts;

    double bin_width() const {
        return counts.empty() ? 0.0 : (upper - lower) / static_cast<double>(counts.size());
    }
};

// 100 uniform bins over the observed range; a degenerate range is widened
// symmetrically so the density stays integrable.
Histogram make_histogram(const std::vector<double>& values, int bins = 100);

struct StudySummary {
    std::size_t trials = 0;
    double mean = 0;
    double stddev = 0;
    double min = 0;
    double max = 0;
    Histogram histogram;
};

StudySummary summarize(const std::vector<double>& values, int bins = 100);

struct NoiseStudyConfig {
    CircuitSpec design;
    SplitStateDensity true_state;
    double relative_sigma = 0.05; // noise scale; relative by default
    bool additive = false;        // absolute-additive noise instead
    // Score the squared fidelity (state overlap). The squared convention is
    // what the published distribution bounds correspond to; the plain trace
    // fidelity is available by clearing the flag.
    bool squared_fidelity = true;
    std::size_t trials = 5000;
    std::uint64_t seed = 1;
    int threads = 1;
};

// Per trial: perturb the exact correlations with Gaussian noise, reconstruct
// by pseudoinverse, project to the physical cone, score the fidelity against
// the true state. Per-trial counter-based sub-seeds keep results identical
// regardless of scheduling. Throws InfeasibleDesignError for singular designs.
StudySummary noise_study(const NoiseStudyConfig& config, std::vector<double>* scores = nullptr);

struct ToleranceStudyConfig {
    CircuitSpec design;
    std::vector<double> magnitudes; // radians
    bool gaussian = false;          // Gaussian perturbations instead of uniform
    std::size_t trials = 5000;
    std::uint64_t seed = 1;
    int threads = 1;
};

// Per magnitude delta and trial: perturb every free phase (first phase of
// each layer stays pinned) by an independent draw from [-delta, delta] and
// record the condition number. One summary per magnitude.
std::vector<StudySummary> tolerance_study(const ToleranceStudyConfig& config,
                                          std::vector<std::vector<double>>* scores = nullptr);

} // namespace pss
