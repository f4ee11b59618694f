#include "ringsense/noise.hpp"

#include <cmath>
#include <stdexcept>

#include "ringsense/constants.hpp"

namespace ringsense {

SqueezeMoments squeeze_moments(const SqueezeParams& sq) {
  const double sh = std::sinh(sq.amplitude);
  const double ch = std::cosh(sq.amplitude);
  const double na = sq.thermal_photons;
  SqueezeMoments m;
  m.n_r = sh * sh + na * (sh * sh + ch * ch);
  m.m_r = std::polar(sh * ch * (2 * na + 1), sq.angle);
  return m;
}

NoiseKernel optical_kernel(const SqueezeParams& sq) {
  const SqueezeMoments m = squeeze_moments(sq);
  NoiseKernel k;
  k.chi_qq = 2 * m.n_r + 1 + 2 * m.m_r.real();
  k.chi_pp = 2 * m.n_r + 1 - 2 * m.m_r.real();
  const cplx anti = std::conj(m.m_r) - m.m_r;
  k.chi_qp = 1.0 + anti;
  k.chi_pq = -1.0 + anti;
  return k;
}

double thermal_kernel(double omega, double omega_k, double temp_k,
                      double gamma) {
  if (omega_k == 0) throw std::domain_error("thermal_kernel: omega_k == 0");
  double bracket;
  if (temp_k <= 0) {
    bracket = 2.0;
  } else {
    bracket = 1.0 / std::tanh(hbar * omega_k / (2 * k_boltzmann * temp_k)) + 1.0;
  }
  return two_pi * gamma * (omega / omega_k) * bracket;
}

double thermal_photon_number(double omega_a, double temp) {
  if (!(omega_a > 0)) throw std::domain_error("thermal_photon_number: omega_a <= 0");
  if (temp <= 0) return 0.0;
  const double x = hbar * omega_a / (k_boltzmann * temp);
  if (x > 50.0) return 0.0;
  return 1.0 / std::expm1(x);
}

OpticalDensities drive_densities(const SqueezeParams& sq) {
  if (!sq.squeezed()) return {};
  SqueezeParams rotated = sq;
  rotated.angle = sq.angle + 3.14159265358979323846;
  const SqueezeMoments m = squeeze_moments(rotated);
  OpticalDensities d;
  d.qq = 0.5 * (2 * m.n_r + 1 + 2 * m.m_r.real());
  d.pp = 0.5 * (2 * m.n_r + 1 - 2 * m.m_r.real());
  d.qp = m.m_r.imag();
  return d;
}

}  // namespace ringsense
