#include "pss/states.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <stdexcept>
#include <string>

namespace pss {

OverlapMatrix OverlapMatrix::identity(int n) {
    return OverlapMatrix{Eigen::MatrixXcd::Identity(n, n)};
}

OverlapMatrix OverlapMatrix::all_ones(int n) {
    return OverlapMatrix{Eigen::MatrixXcd::Ones(n, n)};
}

OverlapDiagnostics overlap_diagnostics(const OverlapMatrix& overlaps) {
    const auto& I = overlaps.entries;
    OverlapDiagnostics d;
    d.hermitian_residual = (I - I.adjoint()).cwiseAbs().maxCoeff();
    d.diagonal_residual = (I.diagonal() - Eigen::VectorXcd::Ones(I.rows())).cwiseAbs().maxCoeff();
    d.max_abs_overlap = I.cwiseAbs().maxCoeff();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(0.5 * (I + I.adjoint()),
                                                       Eigen::EigenvaluesOnly);
    d.min_eigenvalue = es.eigenvalues().minCoeff();
    return d;
}

void require_hermitian_unit_diagonal(const OverlapMatrix& overlaps, double tol) {
    const auto& I = overlaps.entries;
    if (I.rows() != I.cols() || I.rows() < 1) {
        throw std::invalid_argument("overlap matrix must be square and nonempty");
    }
    const double herm = (I - I.adjoint()).cwiseAbs().maxCoeff();
    if (herm > tol) {
        throw std::invalid_argument("overlap matrix is not Hermitian (residual " +
                                    std::to_string(herm) + ")");
    }
    const double diag = (I.diagonal() - Eigen::VectorXcd::Ones(I.rows())).cwiseAbs().maxCoeff();
    if (diag > tol) {
        throw std::invalid_argument("overlap matrix diagonal must be 1 (residual " +
                                    std::to_string(diag) + ")");
    }
}

const FreeLayout& FreeLayout::get(int n) {
    static std::mutex mutex;
    static std::map<int, FreeLayout> cache;
    std::lock_guard<std::mutex> lock(mutex);
    auto it = cache.find(n);
    if (it != cache.end()) return it->second;

    const auto perms = permutations_lex(n);
    FreeLayout layout;
    layout.n = n;
    layout.inverse_index.resize(perms.size());
    layout.slots.reserve(perms.size());
    for (std::size_t k = 0; k < perms.size(); ++k) {
        const std::size_t inv = lex_index(invert(perms[k]));
        layout.inverse_index[k] = inv;
        if (inv == k) {
            layout.slots.push_back(FreeSlot{k, SlotKind::InvolutionReal});
        } else if (k < inv) {
            // conjugate-pair representative: the lex-smaller of {sigma, sigma^-1}
            layout.slots.push_back(FreeSlot{k, SlotKind::PairReal});
            layout.slots.push_back(FreeSlot{k, SlotKind::PairImag});
        }
    }
    return cache.emplace(n, std::move(layout)).first->second;
}

SplitStateDensity density_from_overlaps(const OverlapMatrix& overlaps) {
    require_hermitian_unit_diagonal(overlaps);
    const int n = overlaps.size();
    const auto perms = permutations_lex(n);
    const double norm = 1.0 / static_cast<double>(factorial(n));

    SplitStateDensity rho;
    rho.n = n;
    rho.first_row.resize(perms.size());
    for (std::size_t k = 0; k < perms.size(); ++k) {
        Complex prod(1.0, 0.0);
        for (int i = 0; i < n; ++i) {
            prod *= overlaps.entries(i, perms[k][static_cast<std::size_t>(i)]);
        }
        rho.first_row[k] = norm * prod;
    }
    return rho;
}

Eigen::VectorXd to_free_vector(const SplitStateDensity& rho) {
    const auto& layout = FreeLayout::get(rho.n);
    if (rho.first_row.size() != layout.slots.size()) {
        throw std::invalid_argument("to_free_vector: first row has wrong length");
    }
    Eigen::VectorXd v(static_cast<Eigen::Index>(layout.slots.size()));
    for (std::size_t s = 0; s < layout.slots.size(); ++s) {
        const auto& slot = layout.slots[s];
        const Complex value = rho.first_row[slot.perm_index];
        v[static_cast<Eigen::Index>(s)] =
            (slot.kind == SlotKind::PairImag) ? value.imag() : value.real();
    }
    return v;
}

SplitStateDensity from_free_vector(const Eigen::VectorXd& values, int n) {
    const auto& layout = FreeLayout::get(n);
    if (values.size() != static_cast<Eigen::Index>(layout.slots.size())) {
        throw std::invalid_argument("from_free_vector: expected length " +
                                    std::to_string(layout.slots.size()) + ", got " +
                                    std::to_string(values.size()));
    }
    SplitStateDensity rho;
    rho.n = n;
    rho.first_row.assign(layout.slots.size(), Complex(0, 0));
    for (std::size_t s = 0; s < layout.slots.size(); ++s) {
        const auto& slot = layout.slots[s];
        const double x = values[static_cast<Eigen::Index>(s)];
        switch (slot.kind) {
            case SlotKind::InvolutionReal:
                rho.first_row[slot.perm_index] = Complex(x, 0);
                break;
            case SlotKind::PairReal:
                rho.first_row[slot.perm_index] += Complex(x, 0);
                break;
            case SlotKind::PairImag:
                rho.first_row[slot.perm_index] += Complex(0, x);
                break;
        }
    }
    // fill the skipped inverse permutations by Hermitian pairing
    for (std::size_t k = 0; k < layout.inverse_index.size(); ++k) {
        const std::size_t inv = layout.inverse_index[k];
        if (k < inv) rho.first_row[inv] = std::conj(rho.first_row[k]);
    }
    return rho;
}

Eigen::MatrixXcd support_block(const SplitStateDensity& rho) {
    if (rho.n > kMaxSupportBlockPhotons) {
        throw std::length_error("support_block: dense block supported up to " +
                                std::to_string(kMaxSupportBlockPhotons) + " photons");
    }
    const auto perms = permutations_lex(rho.n);
    if (rho.first_row.size() != perms.size()) {
        throw std::invalid_argument("support_block: first row has wrong length");
    }
    const auto dim = static_cast<Eigen::Index>(perms.size());
    Eigen::MatrixXcd block(dim, dim);
    for (Eigen::Index r = 0; r < dim; ++r) {
        const Permutation row_inv = invert(perms[static_cast<std::size_t>(r)]);
        for (Eigen::Index c = 0; c < dim; ++c) {
            const std::size_t k = lex_index(compose(perms[static_cast<std::size_t>(c)], row_inv));
            block(r, c) = rho.first_row[k];
        }
    }
    return block;
}

SplitStateDensity density_from_support_block(const Eigen::MatrixXcd& block, int n) {
    const auto perms = permutations_lex(n);
    const auto dim = static_cast<Eigen::Index>(perms.size());
    if (block.rows() != dim || block.cols() != dim) {
        throw std::invalid_argument("density_from_support_block: block must be n! x n!");
    }
    // first_row[sigma] appears at entries (pi, sigma o pi) for every pi
    SplitStateDensity rho;
    rho.n = n;
    rho.first_row.assign(perms.size(), Complex(0, 0));
    for (std::size_t s = 0; s < perms.size(); ++s) {
        Complex acc(0, 0);
        for (std::size_t r = 0; r < perms.size(); ++r) {
            const std::size_t c = lex_index(compose(perms[s], perms[r]));
            acc += block(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c));
        }
        rho.first_row[s] = acc / static_cast<double>(perms.size());
    }
    const auto& layout = FreeLayout::get(n);
    for (std::size_t k = 0; k < perms.size(); ++k) {
        const std::size_t inv = layout.inverse_index[k];
        if (k < inv) {
            const Complex avg = 0.5 * (rho.first_row[k] + std::conj(rho.first_row[inv]));
            rho.first_row[k] = avg;
            rho.first_row[inv] = std::conj(avg);
        } else if (k == inv) {
            rho.first_row[k] = Complex(rho.first_row[k].real(), 0);
        }
    }
    return rho;
}

double collective_phase(const SplitStateDensity& rho) {
    if (rho.n != 3) {
        throw std::invalid_argument("collective_phase: defined for three photons only");
    }
    const std::size_t cycle = lex_index(Permutation{1, 2, 0});
    const Complex value = rho.first_row[cycle];
    if (std::abs(value) < 1e-300) {
        throw std::domain_error("collective_phase: cyclic element has zero magnitude");
    }
    return std::arg(value);
}

StateDiagnostics validate_physical(const SplitStateDensity& rho) {
    const auto& layout = FreeLayout::get(rho.n);
    StateDiagnostics d;
    for (std::size_t k = 0; k < rho.first_row.size(); ++k) {
        const std::size_t inv = layout.inverse_index[k];
        d.pairing_residual = std::max(
            d.pairing_residual, std::abs(rho.first_row[inv] - std::conj(rho.first_row[k])));
    }
    const Eigen::MatrixXcd block = support_block(rho);
    d.trace_deviation = std::abs(block.trace() - Complex(1, 0));
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(0.5 * (block + block.adjoint()),
                                                       Eigen::EigenvaluesOnly);
    d.min_eigenvalue = es.eigenvalues().minCoeff();
    return d;
}

} // namespace pss
