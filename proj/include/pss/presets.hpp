#pragma once

#include "pss/circuit.hpp"
#include "pss/states.hpp"

namespace pss {

// Bundled reference designs for two-, three- and four-photon split-state
// tomography in uniform coupled-waveguide arrays (kappa = 1, equal section
// lengths, odd-numbered input ports). The three- and four-photon phase
// programs are the published optima this library is validated against.

// m = 3, ports (0, 2), one hidden layer, phases zero (to be optimized).
CircuitSpec two_photon_template(double total_length);

// m = 5, ports (0, 2, 4), one hidden layer, L = 2.5.
CircuitSpec three_photon_design_one_layer();

// m = 5, ports (0, 2, 4), two hidden layers, L = 3.
CircuitSpec three_photon_design_two_layer();

// m = 7, ports (0, 2, 4, 6), two hidden layers, L = 3.
CircuitSpec four_photon_design();

// Worked three-photon example: overlaps 0.7 e^{-i pi/3}, 0.65, 0.6
// (collective phase -pi/3).
OverlapMatrix example_three_photon_overlaps();

} // namespace pss
