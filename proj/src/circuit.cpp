#include "pss/circuit.hpp"

#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

namespace pss {

double CircuitSpec::total_length() const {
    return std::accumulate(section_lengths.begin(), section_lengths.end(), 0.0);
}

CircuitSpec CircuitSpec::uniform(int m, int sections, double total_length,
                                 std::vector<int> input_ports, double kappa) {
    CircuitSpec spec;
    spec.m = m;
    spec.kappa = kappa;
    spec.section_lengths.assign(static_cast<std::size_t>(sections),
                                total_length / static_cast<double>(sections));
    spec.phase_layers.assign(static_cast<std::size_t>(sections - 1),
                             std::vector<double>(static_cast<std::size_t>(m), 0.0));
    spec.input_ports = std::move(input_ports);
    return spec;
}

void validate(const CircuitSpec& spec) {
    if (spec.m < 1) throw std::invalid_argument("circuit: waveguide count must be >= 1");
    if (spec.kappa <= 0) throw std::invalid_argument("circuit: coupling must be positive");
    if (spec.section_lengths.empty()) throw std::invalid_argument("circuit: need at least one section");
    for (double len : spec.section_lengths) {
        if (!(len >= 0)) throw std::invalid_argument("circuit: section lengths must be >= 0");
    }
    if (spec.phase_layers.size() + 1 != spec.section_lengths.size()) {
        throw std::invalid_argument("circuit: expected " +
                                    std::to_string(spec.section_lengths.size() - 1) +
                                    " phase layers, got " + std::to_string(spec.phase_layers.size()));
    }
    for (const auto& layer : spec.phase_layers) {
        if (static_cast<int>(layer.size()) != spec.m) {
            throw std::invalid_argument("circuit: each phase layer needs one shift per waveguide");
        }
    }
    int prev = -1;
    for (int port : spec.input_ports) {
        if (port < 0 || port >= spec.m) throw std::invalid_argument("circuit: input port out of range");
        if (port <= prev) throw std::invalid_argument("circuit: input ports must be strictly increasing");
        prev = port;
    }
}

Eigen::MatrixXd coupling_matrix(int m, double kappa) {
    if (m < 1) throw std::invalid_argument("coupling_matrix: m must be >= 1");
    if (kappa <= 0) throw std::invalid_argument("coupling_matrix: kappa must be positive");
    Eigen::MatrixXd c = Eigen::MatrixXd::Zero(m, m);
    for (int k = 0; k + 1 < m; ++k) {
        c(k, k + 1) = kappa;
        c(k + 1, k) = kappa;
    }
    return c;
}

Eigen::MatrixXcd section_propagator(const Eigen::MatrixXd& coupling, double length) {
    if (coupling.rows() != coupling.cols()) {
        throw std::invalid_argument("section_propagator: coupling matrix must be square");
    }
    if (!(length >= 0)) throw std::invalid_argument("section_propagator: length must be >= 0");
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(coupling);
    const Eigen::VectorXd& lambda = es.eigenvalues();
    const Eigen::MatrixXd& v = es.eigenvectors();
    Eigen::VectorXcd phases(lambda.size());
    for (Eigen::Index q = 0; q < lambda.size(); ++q) {
        phases[q] = std::polar(1.0, lambda[q] * length);
    }
    return v * phases.asDiagonal() * v.transpose();
}

Eigen::MatrixXcd phase_layer(const std::vector<double>& phases) {
    Eigen::MatrixXcd b = Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(phases.size()),
                                                static_cast<Eigen::Index>(phases.size()));
    for (std::size_t k = 0; k < phases.size(); ++k) {
        b(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(k)) = std::polar(1.0, phases[k]);
    }
    return b;
}

Eigen::MatrixXcd circuit_unitary(const CircuitSpec& spec) {
    validate(spec);
    const Eigen::MatrixXd c = coupling_matrix(spec.m, spec.kappa);
    Eigen::MatrixXcd u = section_propagator(c, spec.section_lengths[0]);
    for (std::size_t j = 1; j < spec.section_lengths.size(); ++j) {
        u = phase_layer(spec.phase_layers[j - 1]) * u;
        u = section_propagator(c, spec.section_lengths[j]) * u;
    }
    return u;
}

Eigen::MatrixXcd input_submatrix(const Eigen::MatrixXcd& u, const std::vector<int>& ports) {
    Eigen::MatrixXcd sub(u.rows(), static_cast<Eigen::Index>(ports.size()));
    std::vector<bool> seen(static_cast<std::size_t>(u.cols()), false);
    for (std::size_t k = 0; k < ports.size(); ++k) {
        const int port = ports[k];
        if (port < 0 || port >= u.cols()) {
            throw std::invalid_argument("input_submatrix: port out of range");
        }
        if (seen[static_cast<std::size_t>(port)]) {
            throw std::invalid_argument("input_submatrix: duplicate port");
        }
        seen[static_cast<std::size_t>(port)] = true;
        sub.col(static_cast<Eigen::Index>(k)) = u.col(port);
    }
    return sub;
}

double unitarity_error(const Eigen::MatrixXcd& u) {
    const Eigen::MatrixXcd g = u.adjoint() * u;
    return (g - Eigen::MatrixXcd::Identity(g.rows(), g.cols())).cwiseAbs().maxCoeff();
}

double fold_phase(double phi) {
    constexpr double two_pi = 6.283185307179586476925286766559;
    double folded = std::fmod(phi, two_pi);
    if (folded < 0) folded += two_pi;
    return folded;
}

} // namespace pss
