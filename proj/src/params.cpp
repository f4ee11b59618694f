#include "ringsense/params.hpp"

#include <cmath>
#include <stdexcept>

#include "ringsense/constants.hpp"

namespace ringsense {

void SystemParams::validate() const {
  if (!(atom_count > 0)) throw std::domain_error("atom_count must be > 0");
  if (!(moment_of_inertia_over_hbar > 0))
    throw std::domain_error("moment_of_inertia_over_hbar must be > 0");
  if (oam_order <= 0) throw std::domain_error("oam_order must be positive");
  if (!(cavity_linewidth_hz > 0))
    throw std::domain_error("cavity_linewidth_hz must be > 0");
  if (mechanical_damping_hz < 0)
    throw std::domain_error("mechanical_damping_hz must be >= 0");
  if (collision_rate_hz < 0)
    throw std::domain_error("collision_rate_hz must be >= 0");
  if (input_power_w < 0) throw std::domain_error("input_power_w must be >= 0");
  if (!(laser_frequency_hz > 0))
    throw std::domain_error("laser_frequency_hz must be > 0");
  if (bec_temperature_k < 0 || ambient_temperature_k < 0)
    throw std::domain_error("temperatures must be >= 0");
}

std::pair<double, double> sidemode_frequencies(const SystemParams& p) {
  if (!(p.moment_of_inertia_over_hbar > 0))
    throw std::domain_error("moment_of_inertia_over_hbar must be > 0");
  const double lp = p.winding_number;
  const double l2 = 2.0 * p.oam_order;
  const double inv = 1.0 / (2.0 * p.moment_of_inertia_over_hbar);
  return {(lp + l2) * (lp + l2) * inv, (lp - l2) * (lp - l2) * inv};
}

CollisionShift collision_shift(const SystemParams& p, double omega_c,
                               double omega_d) {
  if (p.collision_rate_hz < 0)
    throw std::domain_error("collision_rate_hz must be >= 0");
  const double gn = rad_per_sec(p.collision_rate_hz);
  CollisionShift s;
  s.Omega_c = std::sqrt((omega_c + 4 * gn) * (omega_c + 4 * gn) - 4 * gn * gn);
  s.Omega_d = std::sqrt((omega_d + 4 * gn) * (omega_d + 4 * gn) - 4 * gn * gn);
  s.omega_tilde_c = omega_c + 2 * gn;
  s.omega_tilde_d = omega_d + 2 * gn;
  s.coupling_A = 2 * gn * (omega_c - omega_d);
  return s;
}

double drive_amplitude(const SystemParams& p) {
  if (p.input_power_w < 0) throw std::domain_error("input_power_w must be >= 0");
  if (!(p.laser_frequency_hz > 0))
    throw std::domain_error("laser_frequency_hz must be > 0");
  const double kappa = rad_per_sec(p.cavity_linewidth_hz);
  const double omega_a = rad_per_sec(p.laser_frequency_hz);
  return std::sqrt(p.input_power_w * kappa / (hbar * omega_a));
}

WindingGap winding_gap(double winding_number, int oam_order,
                       double moment_over_hbar) {
  const double half = 2.0 * winding_number * oam_order / moment_over_hbar;
  return {2.0 * half, half};
}

double collision_shift_approx_hz(double gn_hz) {
  return 2.0 * gn_hz * (2.0 - gn_hz);
}

DerivedFrequencies derive(const SystemParams& p, bool with_collisions) {
  p.validate();
  DerivedFrequencies d;
  auto [oc, od] = sidemode_frequencies(p);
  d.omega_c = oc;
  d.omega_d = od;
  SystemParams q = p;
  if (!with_collisions) q.collision_rate_hz = 0.0;
  const CollisionShift s = collision_shift(q, oc, od);
  d.Omega_c = s.Omega_c;
  d.Omega_d = s.Omega_d;
  d.omega_tilde_c = s.omega_tilde_c;
  d.omega_tilde_d = s.omega_tilde_d;
  d.coupling_A = s.coupling_A;
  d.omega_m = 0.5 * (oc + od);
  d.Omega = 0.5 * (oc - od);
  d.gN = rad_per_sec(q.collision_rate_hz);
  d.G = rad_per_sec(p.coupling_hz);
  d.kappa = rad_per_sec(p.cavity_linewidth_hz);
  d.gamma = rad_per_sec(p.mechanical_damping_hz);
  d.Delta = rad_per_sec(p.detuning_hz);
  d.omega_a = rad_per_sec(p.laser_frequency_hz);
  d.eta = drive_amplitude(p);
  return d;
}

}  // namespace ringsense
