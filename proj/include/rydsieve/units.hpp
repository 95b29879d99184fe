#pragma once

#include <numbers>

namespace rydsieve {

// Library-internal unit convention: every frequency-like quantity
// (Rabi frequencies, detunings, decay rates) is an angular frequency
// in rad/s.  User-facing inputs are plain Hz and go through hz_to_rad
// exactly once at the ingestion boundary.

inline constexpr double two_pi = 2.0 * std::numbers::pi;
inline constexpr double hbar = 1.054571817e-34;  // J s

constexpr double hz_to_rad(double f_hz) { return two_pi * f_hz; }
constexpr double rad_to_hz(double w) { return w / two_pi; }

}
