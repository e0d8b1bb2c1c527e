#pragma once

#include <Eigen/Dense>
#include <vector>

namespace pss {

/// Segmented coupled-waveguide circuit: S coupled-propagation sections with
/// per-interface phase shifts between them. Lengths are in units of 1/kappa.
struct CircuitSpec {
    int m = 0;                                     // waveguide count
    double kappa = 1.0;                            // nearest-neighbour coupling
    std::vector<double> section_lengths;           // size S
    std::vector<std::vector<double>> phase_layers; // size S-1, each size m
    std::vector<int> input_ports;                  // strictly increasing

    int sections() const { return static_cast<int>(section_lengths.size()); }
    int photons() const { return static_cast<int>(input_ports.size()); }
    double total_length() const;

    // Equal-length sections, all phases zero.
    static CircuitSpec uniform(int m, int sections, double total_length,
                               std::vector<int> input_ports, double kappa = 1.0);
};

// Throws std::invalid_argument on malformed specs.
void validate(const CircuitSpec& spec);

// Tridiagonal nearest-neighbour coupling matrix: zero diagonal, kappa on the
// sub/super-diagonals.
Eigen::MatrixXd coupling_matrix(int m, double kappa);

// exp(i C L) through the eigendecomposition of the real symmetric C.
Eigen::MatrixXcd section_propagator(const Eigen::MatrixXd& coupling, double length);

// diag(exp(i phi_k)).
Eigen::MatrixXcd phase_layer(const std::vector<double>& phases);

// U = W_S B_{S-1} W_{S-1} ... B_1 W_1 (first section applied first).
Eigen::MatrixXcd circuit_unitary(const CircuitSpec& spec);

// N selected columns of U; column k of the result = column ports[k] of U.
Eigen::MatrixXcd input_submatrix(const Eigen::MatrixXcd& u, const std::vector<int>& ports);

// max-norm of U^dagger U - I.
double unitarity_error(const Eigen::MatrixXcd& u);

// Fold an angle into [0, 2*pi).
double fold_phase(double phi);

} // namespace pss
