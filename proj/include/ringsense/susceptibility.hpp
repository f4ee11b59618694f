#pragma once

#include <complex>

namespace ringsense {

// chi_a^{-1}(w) = kappa/2 - i w
inline std::complex<double> chi_cavity(double omega, double kappa) {
  return 1.0 / std::complex<double>(0.5 * kappa, -omega);
}

// chi_k^{-1}(w) = Omega_k^2 - i w gamma - w^2
inline std::complex<double> chi_mech(double omega, double Omega_k,
                                     double gamma) {
  return 1.0 /
         std::complex<double>(Omega_k * Omega_k - omega * omega, -omega * gamma);
}

}  // namespace ringsense
