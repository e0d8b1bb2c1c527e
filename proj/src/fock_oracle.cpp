#include "pss/fock_oracle.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

#include "pss/combinatorics.hpp"

namespace pss {

namespace {

constexpr int kMaxPhotons = 4;
constexpr int kMaxPorts = 8;
constexpr int kMaxInternalDim = 4;

// Expands prod_j (sum_slot amp_j[slot] a^dag_slot) |0> over all assignments
// photon -> slot and accumulates coherent amplitudes per occupation pattern
// (key: sorted slot indices). Slot = port * r + internal mode.
std::map<std::vector<int>, Complex> expand_output_state(const Eigen::MatrixXcd& u,
                                                        const std::vector<int>& ports,
                                                        const InternalState& internal) {
    const int n = static_cast<int>(ports.size());
    const int m = static_cast<int>(u.rows());
    const int r = internal.dim();
    if (n < 1 || n > kMaxPhotons || m > kMaxPorts || r > kMaxInternalDim) {
        throw std::length_error("fock oracle: size bound exceeded (N <= 4, m <= 8, r <= 4)");
    }
    if (internal.photons() != n) {
        throw std::invalid_argument("fock oracle: one internal vector per photon required");
    }
    for (int port : ports) {
        if (port < 0 || port >= m) throw std::invalid_argument("fock oracle: port out of range");
    }

    // per-photon amplitude over slots
    std::vector<std::vector<Complex>> amp(static_cast<std::size_t>(n));
    for (int j = 0; j < n; ++j) {
        auto& a = amp[static_cast<std::size_t>(j)];
        a.resize(static_cast<std::size_t>(m * r));
        for (int d = 0; d < m; ++d) {
            for (int x = 0; x < r; ++x) {
                a[static_cast<std::size_t>(d * r + x)] =
                    u(d, ports[static_cast<std::size_t>(j)]) *
                    internal.vectors[static_cast<std::size_t>(j)](x);
            }
        }
    }

    std::map<std::vector<int>, Complex> state;
    const int slots = m * r;
    std::vector<int> assignment(static_cast<std::size_t>(n), 0);
    while (true) {
        Complex w(1, 0);
        for (int j = 0; j < n; ++j) {
            w *= amp[static_cast<std::size_t>(j)][static_cast<std::size_t>(
                assignment[static_cast<std::size_t>(j)])];
        }
        if (std::abs(w) > 0) {
            std::vector<int> key = assignment;
            std::sort(key.begin(), key.end());
            state[key] += w;
        }
        int j = n - 1;
        while (j >= 0 && assignment[static_cast<std::size_t>(j)] == slots - 1) {
            assignment[static_cast<std::size_t>(j)] = 0;
            --j;
        }
        if (j < 0) break;
        ++assignment[static_cast<std::size_t>(j)];
    }
    return state;
}

// P(pattern) = prod(occupations!) |coherent amplitude|^2
double pattern_probability(const std::vector<int>& sorted_slots, const Complex& amplitude) {
    double multiplicity = 1.0;
    int run = 1;
    for (std::size_t i = 1; i < sorted_slots.size(); ++i) {
        if (sorted_slots[i] == sorted_slots[i - 1]) {
            ++run;
            multiplicity *= run;
        } else {
            run = 1;
        }
    }
    return multiplicity * std::norm(amplitude);
}

} // namespace

InternalState internal_from_overlaps(const OverlapMatrix& overlaps, int r) {
    require_hermitian_unit_diagonal(overlaps);
    const int n = overlaps.size();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(
        0.5 * (overlaps.entries + overlaps.entries.adjoint()));
    const Eigen::VectorXd& lambda = es.eigenvalues();
    if (lambda.minCoeff() < -1e-10 * std::max(1.0, lambda.cwiseAbs().maxCoeff())) {
        throw std::domain_error("internal_from_overlaps: overlap matrix is not PSD");
    }
    int rank = 0;
    for (Eigen::Index k = 0; k < lambda.size(); ++k) {
        if (lambda(k) > 1e-12 * lambda.cwiseAbs().maxCoeff()) ++rank;
    }
    if (r < rank) {
        throw std::invalid_argument("internal_from_overlaps: r below the Gram rank");
    }
    // I = V^dagger V with V = sqrt(clip(Lambda)) Q^dagger; eigenvalues come
    // sorted ascending, keep the top r components and zero-pad the rest
    Eigen::MatrixXcd v = Eigen::MatrixXcd::Zero(r, n);
    for (int row = 0; row < std::min(r, n); ++row) {
        const Eigen::Index k = lambda.size() - 1 - row;
        const double value = std::max(lambda(k), 0.0);
        v.row(row) = std::sqrt(value) * es.eigenvectors().col(k).adjoint();
    }

    InternalState internal;
    internal.vectors.reserve(static_cast<std::size_t>(n));
    for (int j = 0; j < n; ++j) internal.vectors.push_back(v.col(j));
    return internal;
}

Eigen::VectorXd oracle_correlations(const Eigen::MatrixXcd& u, const std::vector<int>& ports,
                                    const InternalState& internal) {
    const int n = static_cast<int>(ports.size());
    const int m = static_cast<int>(u.rows());
    const int r = internal.dim();
    const auto state = expand_output_state(u, ports, internal);
    const auto sets = combinations_lex(m, n);

    // map a sorted detector list to its lex row
    std::map<std::vector<int>, std::size_t> row_of;
    for (std::size_t k = 0; k < sets.size(); ++k) row_of[sets[k]] = k;

    Eigen::VectorXd gamma = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(sets.size()));
    std::vector<int> det(static_cast<std::size_t>(n));
    for (const auto& [slots, amplitude] : state) {
        bool coincidence = true;
        for (std::size_t i = 0; i < slots.size(); ++i) {
            det[i] = slots[i] / r;
            if (i > 0 && det[i] == det[i - 1]) {
                coincidence = false; // two photons share a port (internal modes may differ)
                break;
            }
        }
        if (!coincidence) continue;
        gamma[static_cast<Eigen::Index>(row_of.at(det))] += pattern_probability(slots, amplitude);
    }
    return gamma;
}

double oracle_total_probability(const Eigen::MatrixXcd& u, const std::vector<int>& ports,
                                const InternalState& internal) {
    const auto state = expand_output_state(u, ports, internal);
    double total = 0;
    for (const auto& [slots, amplitude] : state) total += pattern_probability(slots, amplitude);
    return total;
}

} // namespace pss
