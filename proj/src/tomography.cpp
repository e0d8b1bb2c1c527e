#include "pss/tomography.hpp"

#include <bit>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace pss {

namespace {

void require_square_small(const Eigen::MatrixXcd& a) {
    if (a.rows() != a.cols()) throw std::invalid_argument("permanent: matrix must be square");
    if (a.rows() > 8) throw std::length_error("permanent: supported up to 8 x 8");
}

} // namespace

Complex permanent_naive(const Eigen::MatrixXcd& a) {
    require_square_small(a);
    const int n = static_cast<int>(a.rows());
    if (n == 0) return Complex(1, 0);
    Complex sum(0, 0);
    for (const auto& tau : permutations_lex(n)) {
        Complex prod(1, 0);
        for (int k = 0; k < n; ++k) prod *= a(tau[static_cast<std::size_t>(k)], k);
        sum += prod;
    }
    return sum;
}

Complex permanent_ryser(const Eigen::MatrixXcd& a) {
    require_square_small(a);
    const int n = static_cast<int>(a.rows());
    if (n == 0) return Complex(1, 0);
    // Gray-code iteration over column subsets: one row-sum update per step.
    std::vector<Complex> row_sum(static_cast<std::size_t>(n), Complex(0, 0));
    Complex total(0, 0);
    std::uint64_t gray = 0;
    const std::uint64_t count = std::uint64_t(1) << n;
    for (std::uint64_t k = 1; k < count; ++k) {
        const std::uint64_t next_gray = k ^ (k >> 1);
        const std::uint64_t diff = gray ^ next_gray;
        const int col = std::countr_zero(diff);
        if (next_gray & diff) {
            for (int i = 0; i < n; ++i) row_sum[static_cast<std::size_t>(i)] += a(i, col);
        } else {
            for (int i = 0; i < n; ++i) row_sum[static_cast<std::size_t>(i)] -= a(i, col);
        }
        Complex prod(1, 0);
        for (int i = 0; i < n; ++i) prod *= row_sum[static_cast<std::size_t>(i)];
        const int popcount = std::popcount(next_gray);
        total += ((n - popcount) % 2 == 0) ? prod : -prod;
        gray = next_gray;
    }
    return total;
}

Complex permanent(const Eigen::MatrixXcd& a) {
    require_square_small(a);
    return a.rows() <= 3 ? permanent_naive(a) : permanent_ryser(a);
}

MeasurementMatrix build_measurement_matrix(const Eigen::MatrixXcd& u_r, int n) {
    if (u_r.cols() != n) {
        throw std::invalid_argument("build_measurement_matrix: expected " + std::to_string(n) +
                                    " columns, got " + std::to_string(u_r.cols()));
    }
    const int m = static_cast<int>(u_r.rows());
    const auto perms = permutations_lex(n);
    const auto sets = combinations_lex(m, n);
    const double n_factorial = static_cast<double>(factorial(n));

    MeasurementMatrix t;
    t.m = m;
    t.n = n;
    t.detector_sets = sets;
    t.t_complex.resize(static_cast<Eigen::Index>(sets.size()), static_cast<Eigen::Index>(perms.size()));

    Eigen::MatrixXcd w(n, n);
    for (std::size_t row = 0; row < sets.size(); ++row) {
        const auto& det = sets[row];
        for (std::size_t col = 0; col < perms.size(); ++col) {
            const auto& sigma = perms[col];
            for (int j = 0; j < n; ++j) {
                const int d = det[static_cast<std::size_t>(j)];
                for (int k = 0; k < n; ++k) {
                    w(j, k) = std::conj(u_r(d, k)) * u_r(d, sigma[static_cast<std::size_t>(k)]);
                }
            }
            t.t_complex(static_cast<Eigen::Index>(row), static_cast<Eigen::Index>(col)) =
                n_factorial * permanent(w);
        }
    }
    t.t_real = real_measurement_matrix(t.t_complex, n);
    return t;
}

Eigen::MatrixXd real_measurement_matrix(const Eigen::MatrixXcd& t_complex, int n,
                                        TConvention convention) {
    if (convention == TConvention::ComplexColumns) {
        throw std::invalid_argument("real_measurement_matrix: ComplexColumns has no real stacking");
    }
    const auto& layout = FreeLayout::get(n);
    if (t_complex.cols() != static_cast<Eigen::Index>(layout.slots.size())) {
        throw std::invalid_argument("real_measurement_matrix: column count must be n!");
    }
    const double pair_factor = (convention == TConvention::PairFactor2) ? 2.0 : 1.0;
    Eigen::MatrixXd t_real(t_complex.rows(), t_complex.cols());
    for (std::size_t s = 0; s < layout.slots.size(); ++s) {
        const auto& slot = layout.slots[s];
        const auto col = static_cast<Eigen::Index>(slot.perm_index);
        const auto out = static_cast<Eigen::Index>(s);
        switch (slot.kind) {
            case SlotKind::InvolutionReal:
                t_real.col(out) = t_complex.col(col).real();
                break;
            case SlotKind::PairReal:
                t_real.col(out) = pair_factor * t_complex.col(col).real();
                break;
            case SlotKind::PairImag:
                t_real.col(out) = -pair_factor * t_complex.col(col).imag();
                break;
        }
    }
    return t_real;
}

MeasurementMatrix measurement_for_circuit(const CircuitSpec& spec) {
    const Eigen::MatrixXcd u = circuit_unitary(spec);
    MeasurementMatrix t = build_measurement_matrix(input_submatrix(u, spec.input_ports), spec.photons());
    t.input_ports = spec.input_ports;
    return t;
}

Eigen::VectorXd predict_correlations(const MeasurementMatrix& t, const Eigen::VectorXd& free_vector) {
    if (free_vector.size() != t.t_real.cols()) {
        throw std::invalid_argument("predict_correlations: free vector length must be n!");
    }
    return t.t_real * free_vector;
}

double condition_number(const Eigen::MatrixXd& t) {
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(t);
    const auto& sv = svd.singularValues();
    const double smax = sv(0);
    const double smin = sv(sv.size() - 1);
    if (!(smax > 0) || smin < 1e-14 * smax) {
        return std::numeric_limits<double>::infinity();
    }
    return smax / smin;
}

double condition_number(const MeasurementMatrix& t) {
    return condition_number(t.t_real);
}

double condition_number(const MeasurementMatrix& t, TConvention convention) {
    if (convention == TConvention::ComplexColumns) {
        Eigen::JacobiSVD<Eigen::MatrixXcd> svd(t.t_complex);
        const auto& sv = svd.singularValues();
        const double smax = sv(0);
        const double smin = sv(sv.size() - 1);
        if (!(smax > 0) || smin < 1e-14 * smax) {
            return std::numeric_limits<double>::infinity();
        }
        return smax / smin;
    }
    return condition_number(real_measurement_matrix(t.t_complex, t.n, convention));
}

Reconstructor::Reconstructor(const MeasurementMatrix& t) : n_(t.n) {
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(t.t_real, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const auto& sv = svd.singularValues();
    const double cutoff = 1e-12 * sv(0);
    Eigen::VectorXd inv_sv(sv.size());
    for (Eigen::Index k = 0; k < sv.size(); ++k) {
        if (sv(k) > cutoff) {
            inv_sv(k) = 1.0 / sv(k);
        } else {
            inv_sv(k) = 0.0;
            rank_deficient_ = true;
        }
    }
    if (sv.size() < t.t_real.cols()) rank_deficient_ = true;
    pinv_ = svd.matrixV() * inv_sv.asDiagonal() * svd.matrixU().transpose();
}

Eigen::VectorXd Reconstructor::operator()(const Eigen::VectorXd& gamma, bool normalize) const {
    if (gamma.size() != pinv_.cols()) {
        throw std::invalid_argument("reconstruct: correlation vector length mismatch");
    }
    Eigen::VectorXd v = pinv_ * gamma;
    if (normalize) {
        // trace of the support block is n! * rho[id]; the identity permutation
        // occupies the first slot
        const double trace = static_cast<double>(factorial(n_)) * v(0);
        if (std::abs(trace) > 1e-300) v /= trace;
    }
    return v;
}

Eigen::VectorXd reconstruct(const MeasurementMatrix& t, const Eigen::VectorXd& gamma,
                            bool normalize) {
    return Reconstructor(t)(gamma, normalize);
}

SplitStateDensity project_physical(const SplitStateDensity& rho) {
    Eigen::MatrixXcd block = support_block(rho);
    block = 0.5 * (block + block.adjoint().eval());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(block);
    Eigen::VectorXd lambda = es.eigenvalues();
    double trace = 0;
    for (Eigen::Index k = 0; k < lambda.size(); ++k) {
        lambda(k) = std::max(lambda(k), 0.0);
        trace += lambda(k);
    }
    if (trace < 1e-300) {
        throw std::domain_error("project_physical: state has no positive weight");
    }
    lambda /= trace;
    const Eigen::MatrixXcd projected =
        es.eigenvectors() * lambda.asDiagonal() * es.eigenvectors().adjoint();
    return density_from_support_block(projected, rho.n);
}

double fidelity_matrices(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b, double tol) {
    if (a.rows() != a.cols() || b.rows() != b.cols() || a.rows() != b.rows()) {
        throw std::invalid_argument("fidelity: matrices must be square and equally sized");
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es_a(0.5 * (a + a.adjoint()));
    const double scale_a = std::max(1.0, es_a.eigenvalues().cwiseAbs().maxCoeff());
    if (es_a.eigenvalues().minCoeff() < -tol * scale_a) {
        throw std::invalid_argument(
            "fidelity: first operator is not PSD; apply project_physical first");
    }
    Eigen::VectorXd sqrt_lambda = es_a.eigenvalues().cwiseMax(0.0).cwiseSqrt();
    const Eigen::MatrixXcd sqrt_a =
        es_a.eigenvectors() * sqrt_lambda.asDiagonal() * es_a.eigenvectors().adjoint();

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es_b(0.5 * (b + b.adjoint()),
                                                         Eigen::EigenvaluesOnly);
    const double scale_b = std::max(1.0, es_b.eigenvalues().cwiseAbs().maxCoeff());
    if (es_b.eigenvalues().minCoeff() < -tol * scale_b) {
        throw std::invalid_argument(
            "fidelity: second operator is not PSD; apply project_physical first");
    }

    Eigen::MatrixXcd inner = sqrt_a * b * sqrt_a;
    inner = 0.5 * (inner + inner.adjoint().eval());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es_inner(inner, Eigen::EigenvaluesOnly);
    double sum = 0;
    for (Eigen::Index k = 0; k < es_inner.eigenvalues().size(); ++k) {
        sum += std::sqrt(std::max(es_inner.eigenvalues()(k), 0.0));
    }
    return sum;
}

double fidelity(const SplitStateDensity& a, const SplitStateDensity& b) {
    if (a.n != b.n) throw std::invalid_argument("fidelity: photon counts differ");
    return fidelity_matrices(support_block(a), support_block(b));
}

} // namespace pss
