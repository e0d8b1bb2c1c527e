#include "pss/presets.hpp"

#include <cmath>

namespace pss {

CircuitSpec two_photon_template(double total_length) {
    return CircuitSpec::uniform(3, 2, total_length, {0, 2});
}

CircuitSpec three_photon_design_one_layer() {
    CircuitSpec spec = CircuitSpec::uniform(5, 2, 2.5, {0, 2, 4});
    spec.phase_layers[0] = {0.0, 1.083, 1.167, 0.973, 5.509};
    return spec;
}

CircuitSpec three_photon_design_two_layer() {
    CircuitSpec spec = CircuitSpec::uniform(5, 3, 3.0, {0, 2, 4});
    spec.phase_layers[0] = {0.0, 4.248, 3.808, 1.442, 5.098};
    spec.phase_layers[1] = {0.0, 1.844, 1.948, 2.988, 4.155};
    return spec;
}

CircuitSpec four_photon_design() {
    CircuitSpec spec = CircuitSpec::uniform(7, 3, 3.0, {0, 2, 4, 6});
    spec.phase_layers[0] = {0.0, 1.126, 0.306, 4.331, 4.990, 1.633, 2.419};
    spec.phase_layers[1] = {0.0, 1.212, 1.998, 2.246, 0.371, 6.002, 0.894};
    return spec;
}

OverlapMatrix example_three_photon_overlaps() {
    const double pi = 3.14159265358979323846;
    Eigen::MatrixXcd entries = Eigen::MatrixXcd::Identity(3, 3);
    entries(0, 1) = std::polar(0.7, -pi / 3.0); // <phi_0|phi_1>
    entries(1, 0) = std::conj(entries(0, 1));
    entries(1, 2) = Complex(0.65, 0.0); // <phi_1|phi_2>
    entries(2, 1) = Complex(0.65, 0.0);
    entries(2, 0) = Complex(0.6, 0.0); // <phi_2|phi_0>
    entries(0, 2) = Complex(0.6, 0.0);
    return OverlapMatrix{entries};
}

} // namespace pss
