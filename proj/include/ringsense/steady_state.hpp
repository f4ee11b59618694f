#pragma once

#include <vector>

#include "ringsense/params.hpp"

namespace ringsense {

struct SteadyState {
  double amplitude = 0;   // a_s in the real gauge (phase rotated away)
  double x_c = 0, x_d = 0;  // steady sidemode displacements
  double delta_eff = 0;     // Delta' = Delta - G (X_c + X_d), rad/s
  int branch_count = 1;
  bool monostable() const { return branch_count == 1; }
};

// Coefficient W of X_c + X_d = -G |a_s|^2 W from the coupled static
// sidemode equations (exact in the collision cross-coupling).
double displacement_sum_coefficient(const DerivedFrequencies& d);

// All non-negative real roots of the photon-number cubic
// n [(Delta + G^2 W n)^2 + kappa^2/4] = eta^2.
std::vector<double> steady_state_branches(const DerivedFrequencies& d);

// Physical branch by continuation from eta = 0. Set require_monostable to
// reject multistable operating points (throws std::runtime_error).
SteadyState solve_steady_state(const SystemParams& p,
                               const DerivedFrequencies& d,
                               bool require_monostable = false);

// Bare detuning (rad/s) that realizes Delta' = 0 self-consistently
// (|a_s| = 2 eta / kappa there).
double detuning_for_zero_effective(const DerivedFrequencies& d);

// derive() with Delta chosen for Delta' = 0 at the given winding number;
// the standard operating point of the monochromatic scheme.
DerivedFrequencies derive_locked(const SystemParams& p, bool with_collisions);

}  // namespace ringsense
