#pragma once

#include <utility>

namespace ringsense {

// Physical inputs for the ring-condensate cavity sensor. Frequency-like
// fields are ordinary frequencies in Hz (the /2pi values quoted by
// experiments); derive() converts to angular units exactly once.
struct SystemParams {
  double atom_count = 1e4;                      // N
  double moment_of_inertia_over_hbar = 0.0505;  // I/hbar, seconds
  double winding_number = 1.0;  // L_p; integer physically, continuous for
                                // derivative probes
  int oam_order = 10;           // l, OAM quanta per drive photon
  double collision_rate_hz = 14.0;       // gN
  double coupling_hz = 7.5e3;            // G
  double cavity_linewidth_hz = 2e6;      // kappa
  double mechanical_damping_hz = 0.8;    // gamma
  double detuning_hz = 0.0;              // bare Delta
  double input_power_w = 12.4e-15;       // P_in
  double laser_frequency_hz = 1e14;      // omega_a
  double bec_temperature_k = 20e-9;      // T_cd
  double ambient_temperature_k = 300.0;  // T

  // trap geometry, carried as metadata only (dynamics are azimuthal)
  double ring_radius_m = 12e-6;
  double radial_trap_hz = 42.0;
  double axial_trap_hz = 42.0;

  // throws std::domain_error on unphysical values
  void validate() const;
};

// Closed-form derived quantities every solver consumes; angular units
// (rad/s) throughout unless noted.
struct DerivedFrequencies {
  double omega_c = 0, omega_d = 0;        // bare sidemode frequencies
  double Omega_c = 0, Omega_d = 0;        // collision-shifted resonances
  double omega_tilde_c = 0, omega_tilde_d = 0;
  double coupling_A = 0;                  // collision cross-coupling, rad^2/s^2
  double omega_m = 0, Omega = 0;          // (omega_c +- omega_d)/2
  double gN = 0;                          // collision rate actually applied
  double G = 0, kappa = 0, gamma = 0, Delta = 0, omega_a = 0;
  double eta = 0;                         // drive amplitude, 1/s
};

// omega_{c,d} = (L_p +- 2l)^2 / (2 I/hbar), ordered (c, d).
std::pair<double, double> sidemode_frequencies(const SystemParams& p);

struct CollisionShift {
  double Omega_c, Omega_d;
  double coupling_A;
  double omega_tilde_c, omega_tilde_d;
};

// Exact Omega^2 = (omega + 4gN)^2 - 4(gN)^2; never the small-g expansion.
CollisionShift collision_shift(const SystemParams& p, double omega_c,
                               double omega_d);

// eta = sqrt(P_in kappa / hbar omega_a), 1/s
double drive_amplitude(const SystemParams& p);

struct WindingGap {
  double full_gap;  // Omega_c - Omega_d = 4 L_p l / (I/hbar) at g=0
  double half_gap;  // Omega = 2 L_p l / (I/hbar), the BAE readout frequency
};

WindingGap winding_gap(double winding_number, int oam_order,
                       double moment_over_hbar);

// Small-g shift reported by the text; diagnostic only, solvers use the
// exact quadratic form.
double collision_shift_approx_hz(double gn_hz);

DerivedFrequencies derive(const SystemParams& p, bool with_collisions = true);

}  // namespace ringsense
