#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include "pss/circuit.hpp"
#include "pss/tomography.hpp"

namespace pss {

struct NelderMeadOptions {
    double reflection = 1.0;
    double expansion = 2.0;
    double contraction = 0.5;
    double shrink = 0.5;
    // converged once the simplex diameter and the value spread are BOTH
    // below their tolerances (fminsearch-style)
    double simplex_tolerance = 1e-8;
    double fvalue_tolerance = 1e-10;
    std::size_t max_evaluations_per_dim = 2000;
    double initial_step = 0.5; // offset of the initial simplex vertices
};

struct NelderMeadResult {
    Eigen::VectorXd x;
    double f = 0;
    std::size_t evaluations = 0;
    bool converged = false;
};

// Standard simplex direct search. Non-finite objective values are treated
// as a large penalty, never fatal. Deterministic: identical x0 and options
// give an identical trajectory.
NelderMeadResult nelder_mead(const std::function<double(const Eigen::VectorXd&)>& objective,
                             const Eigen::VectorXd& x0, const NelderMeadOptions& options = {});

/// Condition number of the measurement matrix as a function of the hidden
/// layer phases, with section propagators precomputed. The first phase of
/// every layer is pinned to zero (global phase gauge).
class ConditionObjective {
  public:
    ConditionObjective(const CircuitSpec& base, int photons);

    int free_dim() const { return free_dim_; }
    int photons() const { return n_; }

    // objective over free phases; 1e12 sentinel for singular designs
    double operator()(const Eigen::VectorXd& free_phases) const;

    double at_layers(const std::vector<std::vector<double>>& phase_layers) const;
    MeasurementMatrix measurement_at_layers(const std::vector<std::vector<double>>& phase_layers) const;
    Eigen::MatrixXcd unitary_at_layers(const std::vector<std::vector<double>>& phase_layers) const;

    std::vector<std::vector<double>> layers_from_free(const Eigen::VectorXd& free_phases) const;
    Eigen::VectorXd free_from_layers(const std::vector<std::vector<double>>& phase_layers) const;

    const CircuitSpec& base() const { return base_; }

  private:
    CircuitSpec base_;
    int n_ = 0;
    int free_dim_ = 0;
    std::vector<Eigen::MatrixXcd> section_w_; // per section
};

inline constexpr double kSingularObjective = 1e12;

struct DesignProblem {
    int m = 0;
    int n = 0;
    std::vector<int> input_ports;
    int sections = 2;
    double total_length = 1.0;
    double kappa = 1.0;
    int starts = 50;
    // Each start reruns the simplex from its converged point with a fresh
    // initial step until the value stops improving; escapes collapsed
    // simplices without leaving the Nelder-Mead family.
    int max_restarts = 8;
    std::uint64_t seed = 1;
    int threads = 1;
    bool optimize_length = false; // joint length + phase search
    NelderMeadOptions nelder_mead{};
};

void validate(const DesignProblem& problem);

struct StartRecord {
    double start_value = 0;
    double final_value = 0;
    std::size_t evaluations = 0;
    bool converged = false;
};

struct DesignResult {
    std::vector<std::vector<double>> phase_layers; // folded to [0, 2pi), first entry 0
    double total_length = 0;
    double condition_number = 0;
    std::vector<StartRecord> starts;
    std::size_t total_evaluations = 0;
    bool converged = false; // winning start
};

// Multi-start Nelder-Mead over the free phases, uniform starts in [0, 2pi).
// Ties between starts break on lowest value, then lexicographic phase
// vector. Throws InfeasibleDesignError if every start stays singular.
DesignResult optimize_phases(const DesignProblem& problem);

struct SweepPoint {
    double length = 0;
    bool feasible = true;
    std::string error;
    DesignResult result;
};

// optimize_phases per grid point; per-point failures are recorded, not fatal.
std::vector<SweepPoint> length_sweep(const DesignProblem& problem, const std::vector<double>& lengths);

} // namespace pss
