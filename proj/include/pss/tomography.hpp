#pragma once

#include <Eigen/Dense>
#include <stdexcept>
#include <vector>

#include "pss/circuit.hpp"
#include "pss/states.hpp"

namespace pss {

// Raised when a design's measurement matrix cannot resolve the state
// (singular T, or every optimizer start stuck at a singular design).
struct InfeasibleDesignError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Matrix permanent, sum over permutations without sign alternation.
// `permanent` dispatches to direct enumeration for n <= 3 and Ryser's
// inclusion-exclusion with Gray-code updates for larger n; both routes stay
// available for cross-checking. Capped at n = 8.
Complex permanent(const Eigen::MatrixXcd& a);
Complex permanent_naive(const Eigen::MatrixXcd& a);
Complex permanent_ryser(const Eigen::MatrixXcd& a);

// Column convention of the real measurement matrix. PairFactor2 is the
// direct collection of conjugate pairs: (1, 2, -2) on (involution, pair-Re,
// pair-Im) columns. The alternates exist to resolve the convention against
// published condition numbers; PairFactor2 is the frozen default.
enum class TConvention { PairFactor2, PairFactor1, ComplexColumns };

/// Linear map from the free density-matrix parameters to the vector of
/// N-fold coincidence probabilities across distinct detectors.
struct MeasurementMatrix {
    int m = 0;                                   // output ports
    int n = 0;                                   // photons
    std::vector<int> input_ports;                // provenance, when built from a circuit
    std::vector<std::vector<int>> detector_sets; // C(m,n) rows, lex order
    Eigen::MatrixXcd t_complex;                  // C(m,n) x n!, columns = permutations lex
    Eigen::MatrixXd t_real;                      // C(m,n) x n!, FreeVector convention
};

// T from the N selected columns of the circuit unitary. For detector set
// D = (d_0 < ... < d_{N-1}) and permutation sigma,
//   t_complex[D, sigma] = N! perm(W),  W[j,k] = conj(u_r[d_j,k]) u_r[d_j,sigma(k)],
// so that gamma[D] = sum_sigma rho_first_row[sigma] * t_complex[D, sigma].
MeasurementMatrix build_measurement_matrix(const Eigen::MatrixXcd& u_r, int n);

// Real stacking of t_complex under the given column convention.
Eigen::MatrixXd real_measurement_matrix(const Eigen::MatrixXcd& t_complex, int n,
                                        TConvention convention = TConvention::PairFactor2);

// unitary -> selected input columns -> T, in one step.
MeasurementMatrix measurement_for_circuit(const CircuitSpec& spec);

Eigen::VectorXd predict_correlations(const MeasurementMatrix& t, const Eigen::VectorXd& free_vector);

// sigma_max / sigma_min; +infinity once sigma_min < 1e-14 sigma_max.
double condition_number(const Eigen::MatrixXd& t);
double condition_number(const MeasurementMatrix& t);
double condition_number(const MeasurementMatrix& t, TConvention convention);

/// SVD pseudoinverse of a measurement matrix, reusable across many
/// correlation vectors (singular values below 1e-12 sigma_max truncated).
class Reconstructor {
  public:
    explicit Reconstructor(const MeasurementMatrix& t);

    Eigen::VectorXd operator()(const Eigen::VectorXd& gamma, bool normalize = false) const;

    bool rank_deficient() const { return rank_deficient_; }
    int n() const { return n_; }

  private:
    Eigen::MatrixXd pinv_;
    int n_ = 0;
    bool rank_deficient_ = false;
};

Eigen::VectorXd reconstruct(const MeasurementMatrix& t, const Eigen::VectorXd& gamma,
                            bool normalize = false);

// Nearest physical state: clip negative eigenvalues of the support block,
// renormalize the trace to one, rebuild the first row.
SplitStateDensity project_physical(const SplitStateDensity& rho);

// Tr sqrt(sqrt(A) B sqrt(A)) for Hermitian PSD matrices (small negative
// eigenvalues within `tol` are clipped; worse ones throw).
double fidelity_matrices(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b, double tol = 1e-9);

// Fidelity of two split states, computed on their support blocks.
double fidelity(const SplitStateDensity& a, const SplitStateDensity& b);

} // namespace pss
