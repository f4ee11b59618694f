#pragma once

#include <vector>

#include "ringsense/linear_response.hpp"
#include "ringsense/noise.hpp"
#include "ringsense/params.hpp"

namespace ringsense {

// Bichromatic drive at omega_a +- delta with per-tone powers. At resonance
// delta = omega_m = (omega_c + omega_d)/2.
struct BaeDrive {
  double power_plus_w = 12.4e-15;
  double power_minus_w = 12.4e-15;
  bool at_resonance = true;
  double delta = 0.0;  // rad/s, used when at_resonance is false
};

struct BaeSteadyState {
  double n_plus = 0, n_minus = 0;  // sideband photon numbers |a_{+-1}|^2
  double a_bar = 0;                // linearization amplitude sqrt((n_+ + n_-)/2)
  double delta = 0;                // drive detuning actually used, rad/s
  double Omega_eff = 0;            // Kerr-like shift per photon, 1/s
  double eps_plus = 0, eps_minus = 0;
  int branch_count = 1;
  bool monostable = true;
  double residual = 0;  // max relative residual of the coupled cubics
};

// Coupled-cubic steady state by damped fixed point on (n_+, n_-) with
// bisection fallback on the total, continuation in the drive amplitude.
// collisional_shift switches Omega_eff to its collision-dressed variant
// (steady-state studies only; spectra always use the collisionless model).
BaeSteadyState bae_steady_state(const SystemParams& p,
                                const DerivedFrequencies& d,
                                const BaeDrive& drive,
                                bool collisional_shift = false);

// Number of coexisting steady states at the given drive.
int bae_branch_count(const DerivedFrequencies& d, double delta,
                     double Omega_eff, double eps_plus, double eps_minus);

struct BistabilityPoint {
  double axis_value = 0;
  int branch_count = 0;
  double n_plus = 0, n_minus = 0;
  bool converged = true;
};

enum class BistabilityAxis { InputPower, CavityLinewidth };

// Branch-count grid along a power or linewidth sweep; discontinuity loci
// show up as branch-count changes between adjacent points.
std::vector<BistabilityPoint> bistability_map(const SystemParams& p,
                                              BistabilityAxis axis,
                                              const std::vector<double>& values,
                                              const BaeDrive& drive);

// Floquet components of the output phase quadrature, P_out^(n)(w); the
// hierarchy truncates at |n| = 3 for stationary input noise.
struct FloquetCoeffs {
  cplx b0;            // P_in at n = 0
  cplx a0;            // Q_in at n = 0
  cplx c_p1, c_m1;    // eps_c at n = +1, -1
  cplx d_p1, d_m1;    // eps_d at n = +1, -1
  cplx a_p2, a_m2;    // Q_in at n = +2, -2
};

FloquetCoeffs floquet_coefficients(double omega, const DerivedFrequencies& d,
                                   const BaeSteadyState& bss);

enum class NoiseInput { QIn, PIn, EpsC, EpsD };

// Coefficient of one input channel in P_out^(n)(w); identically zero for
// every (n, channel) outside the truncated set.
cplx floquet_p_coefficient(int n, NoiseInput input, double omega,
                           const DerivedFrequencies& d,
                           const BaeSteadyState& bss);

// Zeroth-Fourier-component homodyne spectral density (time-averaged),
// decomposed like the monochromatic scheme. Kernels are evaluated at the
// shifted arguments w + n delta.
SpectrumStructure bae_spectrum_structure(double omega, const SystemParams& p,
                                         const DerivedFrequencies& d,
                                         const BaeSteadyState& bss,
                                         const SqueezeParams& sq);

SpectrumSample bae_spectral_density(double omega, double phi,
                                    const SystemParams& p,
                                    const DerivedFrequencies& d,
                                    const BaeSteadyState& bss,
                                    const SqueezeParams& sq);

std::vector<SpectrumSample> bae_spectrum_grid(
    const std::vector<double>& omegas, double phi, const SystemParams& p,
    const DerivedFrequencies& d, const BaeSteadyState& bss,
    const SqueezeParams& sq, Execution exec = Execution::Parallel);

std::vector<SpectrumStructure> bae_spectrum_structure_grid(
    const std::vector<double>& omegas, const SystemParams& p,
    const DerivedFrequencies& d, const BaeSteadyState& bss,
    const SqueezeParams& sq, Execution exec = Execution::Parallel);

// t_meas(w) = |sqrt(2 kappa) G abar / (-i w + kappa/2)|^{-2}; at w = 0 this
// is kappa / (8 G^2 abar^2).
double bae_measurement_time(double omega, const DerivedFrequencies& d,
                            const BaeSteadyState& bss);

struct BoundCheckReport {
  double max_amplitude = 0;  // max_t |alpha(t)| from vacuum start
  double bound = 0;          // |a_+1| + |a_-1|
  double ratio = 0;
  bool within_bound = false;
  std::size_t steps = 0;
};

// Integrates the mean-field equations from vacuum over the horizon and
// checks the phase-space orbit stays inside the steady-state envelope
// (tolerance fraction, default 5%). Throws on integrator failure.
BoundCheckReport semiclassical_bound_check(const SystemParams& p,
                                           const DerivedFrequencies& d,
                                           const BaeDrive& drive,
                                           double horizon = 0.0,
                                           double rel_tol = 1e-9,
                                           double bound_tol = 0.05);

}  // namespace ringsense
