#include <doctest.h>

#include <cmath>

#include "pss/fock_oracle.hpp"
#include "pss/presets.hpp"
#include "pss/rng.hpp"
#include "pss/tomography.hpp"

using namespace pss;

namespace {

constexpr double kPi = 3.14159265358979323846;

OverlapMatrix random_psd_overlaps(int n, std::uint64_t seed) {
    SplitMix64 rng(seed);
    Eigen::MatrixXcd v(n, n);
    for (int j = 0; j < n; ++j) {
        for (int x = 0; x < n; ++x) v(x, j) = Complex(rng.gaussian(), rng.gaussian());
        v.col(j).normalize();
    }
    return OverlapMatrix{v.adjoint() * v};
}

CircuitSpec random_circuit(int m, int sections, std::vector<int> ports, std::uint64_t seed) {
    SplitMix64 rng(seed);
    CircuitSpec spec = CircuitSpec::uniform(m, sections, rng.uniform(0.3, 3.0), std::move(ports));
    for (auto& layer : spec.phase_layers) {
        for (auto& phi : layer) phi = rng.uniform(0.0, 2 * kPi);
    }
    return spec;
}

} // namespace

TEST_CASE("internal_from_overlaps reproduces the Gram matrix") {
    SUBCASE("identity overlaps give orthonormal vectors") {
        const auto internal = internal_from_overlaps(OverlapMatrix::identity(3), 3);
        for (int i = 0; i < 3; ++i) {
            for (int j = 0; j < 3; ++j) {
                const Complex dot = internal.vectors[static_cast<std::size_t>(i)].dot(
                    internal.vectors[static_cast<std::size_t>(j)]);
                CHECK(std::abs(dot - (i == j ? Complex(1, 0) : Complex(0, 0))) < 1e-12);
            }
        }
    }
    SUBCASE("all-ones overlaps collapse to one shared vector") {
        const auto internal = internal_from_overlaps(OverlapMatrix::all_ones(3), 1);
        for (const auto& v : internal.vectors) {
            CHECK(std::abs(v.norm() - 1.0) < 1e-12);
            CHECK(std::abs(v.dot(internal.vectors[0]) - Complex(1, 0)) < 1e-12);
        }
    }
    SUBCASE("worked example overlaps") {
        const auto overlaps = example_three_photon_overlaps();
        const auto internal = internal_from_overlaps(overlaps, 3);
        for (int i = 0; i < 3; ++i) {
            for (int j = 0; j < 3; ++j) {
                const Complex dot = internal.vectors[static_cast<std::size_t>(i)].dot(
                    internal.vectors[static_cast<std::size_t>(j)]);
                CHECK(std::abs(dot - overlaps.entries(i, j)) < 1e-12);
            }
        }
    }
    SUBCASE("non-PSD overlaps fail to factorize") {
        OverlapMatrix bad = OverlapMatrix::all_ones(3);
        bad.entries(0, 1) = bad.entries(1, 0) = 0.9;
        bad.entries(1, 2) = bad.entries(2, 1) = 0.9;
        bad.entries(0, 2) = bad.entries(2, 0) = -0.9;
        CHECK_THROWS_AS(internal_from_overlaps(bad, 3), std::domain_error);
    }
    SUBCASE("r below the rank is rejected") {
        CHECK_THROWS_AS(internal_from_overlaps(OverlapMatrix::identity(3), 2),
                        std::invalid_argument);
    }
}

TEST_CASE("oracle single-photon probabilities") {
    const Eigen::MatrixXcd u = circuit_unitary(CircuitSpec::uniform(4, 1, 0.9, {1}));
    const auto internal = internal_from_overlaps(OverlapMatrix::identity(1), 1);
    const Eigen::VectorXd gamma = oracle_correlations(u, {1}, internal);
    for (int d = 0; d < 4; ++d) {
        CHECK(gamma(d) == doctest::Approx(std::norm(u(d, 1))).epsilon(1e-12));
    }
}

TEST_CASE("oracle reproduces Hong-Ou-Mandel interference") {
    const Eigen::MatrixXcd u = section_propagator(coupling_matrix(2, 1.0), kPi / 4.0);
    const auto identical = internal_from_overlaps(OverlapMatrix::all_ones(2), 1);
    const Eigen::VectorXd gamma = oracle_correlations(u, {0, 1}, identical);
    REQUIRE(gamma.size() == 1);
    CHECK(std::abs(gamma(0)) < 1e-12); // exact cancellation

    const auto distinct = internal_from_overlaps(OverlapMatrix::identity(2), 2);
    const Eigen::VectorXd gamma_distinct = oracle_correlations(u, {0, 1}, distinct);
    CHECK(gamma_distinct(0) == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("oracle total probability is one") {
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
        const auto spec = random_circuit(5, 2, {0, 2, 4}, seed);
        const Eigen::MatrixXcd u = circuit_unitary(spec);
        const auto internal = internal_from_overlaps(random_psd_overlaps(3, seed + 10), 3);
        CHECK(oracle_total_probability(u, {0, 2, 4}, internal) == doctest::Approx(1.0).epsilon(1e-10));
    }
}

TEST_CASE("oracle result is independent of the internal dimension") {
    const auto spec = random_circuit(4, 2, {0, 2}, 3);
    const Eigen::MatrixXcd u = circuit_unitary(spec);
    const auto overlaps = random_psd_overlaps(2, 17);
    const Eigen::VectorXd g2 = oracle_correlations(u, {0, 2}, internal_from_overlaps(overlaps, 2));
    const Eigen::VectorXd g4 = oracle_correlations(u, {0, 2}, internal_from_overlaps(overlaps, 4));
    CHECK((g2 - g4).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("oracle is invariant under the unitary freedom of the factorization") {
    const auto spec = random_circuit(4, 2, {1, 3}, 5);
    const Eigen::MatrixXcd u = circuit_unitary(spec);
    const auto overlaps = random_psd_overlaps(2, 23);
    auto internal = internal_from_overlaps(overlaps, 2);
    const Eigen::VectorXd gamma = oracle_correlations(u, {1, 3}, internal);

    // rotate the internal space by an arbitrary unitary; overlaps are unchanged
    Eigen::MatrixXcd rot(2, 2);
    const double c = std::cos(0.7);
    const double s = std::sin(0.7);
    rot << Complex(c, 0), Complex(0, s), Complex(0, s), Complex(c, 0);
    for (auto& v : internal.vectors) v = (rot * v).eval();
    const Eigen::VectorXd rotated = oracle_correlations(u, {1, 3}, internal);
    CHECK((gamma - rotated).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("oracle agrees with the measurement matrix prediction") {
    // the module's purpose: validate the closed-form correlation formula
    int checked = 0;
    for (std::uint64_t seed = 1; seed <= 12; ++seed) {
        const int n = (seed % 2 == 0) ? 2 : 3;
        const auto ports = (n == 2) ? std::vector<int>{0, 2} : std::vector<int>{0, 2, 4};
        const auto spec = random_circuit(5, 2, ports, 400 + seed);
        const Eigen::MatrixXcd u = circuit_unitary(spec);
        const auto overlaps = random_psd_overlaps(n, 500 + seed);

        const MeasurementMatrix t = build_measurement_matrix(input_submatrix(u, ports), n);
        const Eigen::VectorXd predicted =
            predict_correlations(t, to_free_vector(density_from_overlaps(overlaps)));
        const Eigen::VectorXd oracle =
            oracle_correlations(u, ports, internal_from_overlaps(overlaps, n));
        CHECK((predicted - oracle).cwiseAbs().maxCoeff() < 1e-10);
        ++checked;
    }
    CHECK(checked == 12);
}

TEST_CASE("size bounds") {
    const Eigen::MatrixXcd u = Eigen::MatrixXcd::Identity(9, 9);
    const auto internal = internal_from_overlaps(OverlapMatrix::all_ones(2), 1);
    CHECK_THROWS_AS(oracle_correlations(u, {0, 1}, internal), std::length_error);
}
