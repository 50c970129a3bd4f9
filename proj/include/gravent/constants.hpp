#pragma once

#include <string>

namespace gravent {

// CODATA SI values. The table can be swapped out for testing through the
// GRAVENT_CONSTANTS environment variable, which names a JSON file that may
// redefine any of the keys "G", "hbar", "k_B", "c".
struct PhysicalConstants {
    double G = 6.67430e-11;         // m^3 kg^-1 s^-2
    double hbar = 1.054571817e-34;  // J s
    double k_B = 1.380649e-23;      // J / K
    double c = 2.99792458e8;        // m / s
};

/// Process-wide constants table (env override applied once, at first use).
const PhysicalConstants& constants();

/// Parse a constants override file. Throws std::runtime_error on bad input.
PhysicalConstants load_constants_file(const std::string& path);

}  // namespace gravent
