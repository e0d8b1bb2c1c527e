#pragma once

#include <Eigen/Dense>
#include <complex>
#include <vector>

#include "pss/combinatorics.hpp"

namespace pss {

using Complex = std::complex<double>;

/// Hermitian unit-diagonal Gram matrix of pairwise spectral overlaps.
/// entries(i, j) = <phi_i | phi_j>.
struct OverlapMatrix {
    Eigen::MatrixXcd entries;

    int size() const { return static_cast<int>(entries.rows()); }

    static OverlapMatrix identity(int n);  // fully distinguishable photons
    static OverlapMatrix all_ones(int n);  // fully indistinguishable photons
};

struct OverlapDiagnostics {
    double hermitian_residual = 0; // max |I(i,j) - conj(I(j,i))|
    double diagonal_residual = 0;  // max |I(j,j) - 1|
    double max_abs_overlap = 0;    // max |I(i,j)|
    double min_eigenvalue = 0;     // of the Hermitian part

    bool physical(double tol = 1e-10) const {
        return hermitian_residual < tol && diagonal_residual < tol &&
               max_abs_overlap <= 1.0 + tol && min_eigenvalue > -tol;
    }
};

OverlapDiagnostics overlap_diagnostics(const OverlapMatrix& overlaps);

// Throws std::invalid_argument unless Hermitian with unit diagonal.
// Positive semidefiniteness is deliberately not enforced here; callers that
// care check overlap_diagnostics (noisy reconstructions pass through
// unphysical intermediates).
void require_hermitian_unit_diagonal(const OverlapMatrix& overlaps, double tol = 1e-9);

/// Split-state density matrix stored as its first row: first_row[k] is the
/// element rho_{id; sigma} for the k-th permutation sigma in lex order.
/// The full nonzero support expands to an n! x n! block on demand.
struct SplitStateDensity {
    int n = 0;
    std::vector<Complex> first_row; // length n!
};

// Slot layout of the canonical real parameter vector of length n!:
// iterate sigma in lex order, skip sigma whose inverse precedes it, emit one
// slot for involutions and (Re, Im) slots for conjugate-pair representatives.
enum class SlotKind { InvolutionReal, PairReal, PairImag };

struct FreeSlot {
    std::size_t perm_index = 0; // lex index of the permutation
    SlotKind kind = SlotKind::InvolutionReal;
};

struct FreeLayout {
    int n = 0;
    std::vector<FreeSlot> slots;            // length n!
    std::vector<std::size_t> inverse_index; // lex index of sigma^-1 per sigma

    // Cached per photon count; layouts are immutable after construction.
    static const FreeLayout& get(int n);
};

// rho_{id;sigma} = (1/n!) prod_k I(k, sigma(k)).
// Throws std::invalid_argument if the overlaps are not Hermitian with unit
// diagonal. Non-PSD overlaps are allowed (the state is then unphysical).
SplitStateDensity density_from_overlaps(const OverlapMatrix& overlaps);

Eigen::VectorXd to_free_vector(const SplitStateDensity& rho);
SplitStateDensity from_free_vector(const Eigen::VectorXd& values, int n);

// Support blocks are n! x n!; beyond six photons (720 x 720) the dense
// block and its eigendecompositions stop being practical.
inline constexpr int kMaxSupportBlockPhotons = 6;

// n! x n! Hermitian block holding every nonzero element of the reduced
// density matrix: entry (pi, tau) = first_row[tau o pi^-1].
Eigen::MatrixXcd support_block(const SplitStateDensity& rho);

// Inverse of support_block for structured matrices; entries belonging to the
// same orbit are averaged and the Hermitian pairing is enforced, so the
// result is exact on structured input and a least-squares fit otherwise.
SplitStateDensity density_from_support_block(const Eigen::MatrixXcd& block, int n);

// arg rho_{id;(1,2,0)}; defined for three photons only.
double collective_phase(const SplitStateDensity& rho);

struct StateDiagnostics {
    double pairing_residual = 0; // max |rho[sigma^-1] - conj(rho[sigma])|
    double trace_deviation = 0;  // |trace(support block) - 1|
    double min_eigenvalue = 0;   // of the support block
};

StateDiagnostics validate_physical(const SplitStateDensity& rho);

} // namespace pss
