#include <doctest.h>

#include <sstream>

#include "pss/io.hpp"
#include "pss/presets.hpp"

using namespace pss;
using pss::io::json;

TEST_CASE("state JSON round trip") {
    const auto rho = density_from_overlaps(example_three_photon_overlaps());
    const json j = io::density_to_json(rho);
    const auto back = io::density_from_json(j);
    CHECK(back.n == rho.n);
    for (std::size_t k = 0; k < rho.first_row.size(); ++k) {
        CHECK(back.first_row[k] == rho.first_row[k]);
    }
}

TEST_CASE("state from overlaps document") {
    const json j = io::overlaps_to_json(example_three_photon_overlaps());
    const auto rho = io::state_from_json(j);
    const auto direct = density_from_overlaps(example_three_photon_overlaps());
    for (std::size_t k = 0; k < rho.first_row.size(); ++k) {
        CHECK(std::abs(rho.first_row[k] - direct.first_row[k]) < 1e-15);
    }
}

TEST_CASE("schema validation rejects unknown and missing fields") {
    json j = json{{"n", 2}, {"first_row", json::array({json::array({0.5, 0.0}),
                                                       json::array({0.4, 0.0})})}};
    CHECK_NOTHROW(io::density_from_json(j));
    j["extra"] = 1;
    CHECK_THROWS_AS(io::density_from_json(j), io::ConfigError);

    json missing = json{{"n", 2}};
    CHECK_THROWS_AS(io::density_from_json(missing), io::ConfigError);

    json wrong_length = json{{"n", 2}, {"first_row", json::array({json::array({0.5, 0.0})})}};
    CHECK_THROWS_AS(io::density_from_json(wrong_length), io::ConfigError);
}

TEST_CASE("circuit JSON round trip folds phases") {
    CircuitSpec spec = three_photon_design_two_layer();
    spec.phase_layers[0][1] = -0.25; // serialized specs fold into [0, 2 pi)
    const json j = io::circuit_to_json(spec);
    const CircuitSpec back = io::circuit_from_json(j);
    CHECK(back.m == spec.m);
    CHECK(back.kappa == spec.kappa);
    CHECK(back.section_lengths == spec.section_lengths);
    CHECK(back.input_ports == spec.input_ports);
    CHECK(back.phase_layers[0][1] == doctest::Approx(2 * 3.14159265358979323846 - 0.25));

    json bad = j;
    bad["phase_layers"] = json::array();
    CHECK_THROWS_AS(io::circuit_from_json(bad), io::ConfigError);
}

TEST_CASE("circuit JSON defaults") {
    const json j{{"m", 3}, {"section_lengths", json::array({1.0})},
                 {"input_ports", json::array({0, 2})}};
    const CircuitSpec spec = io::circuit_from_json(j);
    CHECK(spec.kappa == 1.0);
    CHECK(spec.phase_layers.empty());
}

TEST_CASE("design problem JSON") {
    const json j{{"m", 5},           {"photons", 3},        {"input_ports", json::array({0, 2, 4})},
                 {"sections", 2},    {"total_length", 2.5}, {"starts", 12}};
    const DesignProblem problem = io::design_problem_from_json(j);
    CHECK(problem.m == 5);
    CHECK(problem.n == 3);
    CHECK(problem.starts == 12);
    CHECK(!problem.optimize_length);

    json bad = j;
    bad["unknown"] = true;
    CHECK_THROWS_AS(io::design_problem_from_json(bad), io::ConfigError);
}

TEST_CASE("number formatting uses 12 significant digits") {
    CHECK(io::format_number(1.0) == "1");
    CHECK(io::format_number(0.1234567890123456) == "0.123456789012");
    CHECK(io::format_number(-2.5e-7) == "-2.5e-07");
}

TEST_CASE("correlations CSV") {
    const auto spec = three_photon_design_one_layer();
    const MeasurementMatrix t = measurement_for_circuit(spec);
    const auto rho = density_from_overlaps(example_three_photon_overlaps());
    const Eigen::VectorXd gamma = predict_correlations(t, to_free_vector(rho));
    std::ostringstream out;
    io::write_correlations_csv(out, t.detector_sets, gamma);
    std::istringstream lines(out.str());
    std::string line;
    std::getline(lines, line);
    CHECK(line == "detector_set,probability");
    std::getline(lines, line);
    CHECK(line.substr(0, 6) == "0-1-2,");
    int rows = 1;
    while (std::getline(lines, line)) ++rows;
    CHECK(rows == 10);
}

TEST_CASE("measurement matrix CSV labels rows and columns") {
    const MeasurementMatrix t = measurement_for_circuit(three_photon_design_one_layer());
    std::ostringstream out;
    io::write_measurement_csv(out, t);
    std::istringstream lines(out.str());
    std::string header;
    std::getline(lines, header);
    CHECK(header ==
          "detector_set,rho_012,rho_021,rho_102,rho_120_re,rho_120_im,rho_210");
    int rows = 0;
    std::string line;
    while (std::getline(lines, line)) ++rows;
    CHECK(rows == 10);
}

TEST_CASE("content hash is stable and sensitive") {
    const json a{{"x", 1}, {"y", 2.5}};
    const json b{{"x", 1}, {"y", 2.5}};
    const json c{{"x", 1}, {"y", 2.6}};
    CHECK(io::content_hash(a) == io::content_hash(b));
    CHECK(io::content_hash(a) != io::content_hash(c));
}
