#pragma once

namespace ringsense {

// CODATA 2018 (SI exact where applicable)
inline constexpr double hbar = 1.054571817e-34;  // J s
inline constexpr double k_boltzmann = 1.380649e-23;  // J/K
inline constexpr double two_pi = 6.283185307179586476925286766559;

// All user-facing frequency-like quantities are plain frequencies (Hz);
// conversion to angular frequency happens once, at the derive() boundary.
inline constexpr double rad_per_sec(double hz) { return two_pi * hz; }
inline constexpr double hz_from_rad(double w) { return w / two_pi; }

}  // namespace ringsense
