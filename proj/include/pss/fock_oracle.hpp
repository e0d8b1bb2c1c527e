#pragma once

#include <Eigen/Dense>
#include <vector>

#include "pss/states.hpp"

namespace pss {

/// One internal-mode amplitude vector per photon (columns of a Gram
/// factorization of the overlap matrix). Used only to drive the brute-force
/// simulator; the production path never sees internal modes.
struct InternalState {
    std::vector<Eigen::VectorXcd> vectors;

    int photons() const { return static_cast<int>(vectors.size()); }
    int dim() const { return vectors.empty() ? 0 : static_cast<int>(vectors[0].size()); }
};

// Factorize I = V^dagger V (eigendecomposition, robust on semidefinite
// input); column j of V is photon j's internal vector in r dimensions.
// Throws std::domain_error if I is not PSD, std::invalid_argument if r is
// too small to carry the Gram rank.
InternalState internal_from_overlaps(const OverlapMatrix& overlaps, int r);

// Brute-force N-photon coincidence probabilities: distributes each input
// creation operator over (output port, internal mode) pairs, symmetrizes
// bosonic amplitudes per occupation pattern, and collects |amplitude|^2 for
// outcomes with exactly one photon in each detector of a set. Rows follow
// combinations_lex(m, N). Exponential cost; this is a test oracle.
Eigen::VectorXd oracle_correlations(const Eigen::MatrixXcd& u, const std::vector<int>& ports,
                                    const InternalState& internal);

// Total probability over ALL output patterns, including bunched ones.
// Equals 1 for a unitary transfer matrix.
double oracle_total_probability(const Eigen::MatrixXcd& u, const std::vector<int>& ports,
                                const InternalState& internal);

} // namespace pss
