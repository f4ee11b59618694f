#pragma once

#include <complex>

namespace ringsense {

using cplx = std::complex<double>;

struct SqueezeParams {
  double amplitude = 0.0;        // r >= 0
  double angle = 0.0;            // theta, radians
  double thermal_photons = 0.0;  // N_a >= 0

  bool squeezed() const { return amplitude > 0.0 || thermal_photons > 0.0; }
};

struct SqueezeMoments {
  double n_r;  // sinh^2 r + N_a (sinh^2 r + cosh^2 r)
  cplx m_r;    // e^{i theta} sinh r cosh r (2 N_a + 1)
};

SqueezeMoments squeeze_moments(const SqueezeParams& sq);

// Frequency-domain correlation coefficients of the delta-correlated optical
// input, stored as the bare brackets of the correlation functions (vacuum:
// chi_qq = chi_pp = 1, chi_qp = -chi_pq = 1). The 2pi delta(w+w') measure is
// applied by the spectrum assembler, never stored here.
struct NoiseKernel {
  double chi_qq = 1.0;
  double chi_pp = 1.0;
  cplx chi_qp{1.0, 0.0};
  cplx chi_pq{-1.0, 0.0};
};

NoiseKernel optical_kernel(const SqueezeParams& sq);

// Thermal-mechanical correlation coefficient B_k (coth[hbar w_k / 2 kB T] + 1)
// with B_k = 2 pi gamma w / w_k evaluated at the requested (signed) w.
double thermal_kernel(double omega, double omega_k, double temp_k,
                      double gamma);

// Bose occupation of the optical field; forced to 0 once
// hbar w / kB T > 50 to avoid spurious overflow.
double thermal_photon_number(double omega_a, double temp);

// Symmetrized optical noise densities (against dw'/2pi) used by the spectrum
// assemblers. The printed QP/PQ correlation brackets drop an overall factor
// i; restoring it and symmetrizing leaves the cross density Im(M). The
// squeeze angle of the physical drive maps to the kernel angle theta + pi
// (squeezed-carrier phase convention); this is the one place the mapping is
// applied.
struct OpticalDensities {
  double qq = 0.5;
  double pp = 0.5;
  double qp = 0.0;  // = Im M, shared by QP and PQ
};

OpticalDensities drive_densities(const SqueezeParams& sq);

}  // namespace ringsense
