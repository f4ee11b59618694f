#include "ringsense/steady_state.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace ringsense {

double displacement_sum_coefficient(const DerivedFrequencies& d) {
  const double det =
      d.Omega_c * d.Omega_c * d.Omega_d * d.Omega_d + d.coupling_A * d.coupling_A;
  return (d.omega_tilde_c * (d.Omega_d * d.Omega_d + d.coupling_A) +
          d.omega_tilde_d * (d.Omega_c * d.Omega_c - d.coupling_A)) /
         det;
}

namespace {

// Real roots of x^3 + a x^2 + b x + c, ascending.
std::vector<double> cubic_real_roots(double a, double b, double c) {
  const double p = b - a * a / 3.0;
  const double q = 2.0 * a * a * a / 27.0 - a * b / 3.0 + c;
  const double shift = -a / 3.0;
  std::vector<double> roots;
  const double disc = q * q / 4.0 + p * p * p / 27.0;
  if (disc > 0) {
    const double s = std::sqrt(disc);
    const double u = std::cbrt(-q / 2.0 + s);
    const double v = std::cbrt(-q / 2.0 - s);
    roots.push_back(u + v + shift);
  } else {
    const double r = std::sqrt(-p * p * p / 27.0);
    const double phi = std::acos(std::clamp(-q / (2.0 * r), -1.0, 1.0));
    const double m = 2.0 * std::sqrt(-p / 3.0);
    for (int k = 0; k < 3; ++k)
      roots.push_back(m * std::cos((phi + 2.0 * 3.14159265358979323846 * k) / 3.0) +
                      shift);
  }
  // Newton polish
  for (double& x : roots) {
    for (int it = 0; it < 4; ++it) {
      const double f = ((x + a) * x + b) * x + c;
      const double df = (3.0 * x + 2.0 * a) * x + b;
      if (df != 0) x -= f / df;
    }
  }
  std::sort(roots.begin(), roots.end());
  return roots;
}

std::vector<double> branches_at(const DerivedFrequencies& d, double eta) {
  const double W = displacement_sum_coefficient(d);
  const double c = d.G * d.G * W;  // Kerr-like coefficient, 1/s per photon
  const double k2 = 0.25 * d.kappa * d.kappa;
  if (c == 0.0) {
    return {eta * eta / (d.Delta * d.Delta + k2)};
  }
  // c^2 n^3 + 2 Delta c n^2 + (Delta^2 + kappa^2/4) n - eta^2 = 0
  const double A = 2.0 * d.Delta / c;
  const double B = (d.Delta * d.Delta + k2) / (c * c);
  const double C = -eta * eta / (c * c);
  std::vector<double> roots = cubic_real_roots(A, B, C);
  std::vector<double> out;
  const double tol = 1e-9 * std::max(1.0, eta * eta / k2);
  for (double n : roots) {
    if (n < -tol) continue;
    n = std::max(n, 0.0);
    // keep only genuine roots (Cardano's one-root branch can be safely kept;
    // spurious near-duplicates are deduplicated)
    if (out.empty() || std::abs(n - out.back()) > 1e-12 * std::max(1.0, n))
      out.push_back(n);
  }
  return out;
}

}  // namespace

std::vector<double> steady_state_branches(const DerivedFrequencies& d) {
  return branches_at(d, d.eta);
}

SteadyState solve_steady_state(const SystemParams& p,
                               const DerivedFrequencies& d,
                               bool require_monostable) {
  (void)p;
  const double W = displacement_sum_coefficient(d);
  // continuation in eta from zero picks the physical branch
  double n = 0.0;
  const int ramp = 64;
  for (int i = 1; i <= ramp; ++i) {
    const double eta = d.eta * static_cast<double>(i) / ramp;
    const auto roots = branches_at(d, eta);
    double best = roots.front();
    for (double r : roots)
      if (std::abs(r - n) < std::abs(best - n)) best = r;
    n = best;
  }
  SteadyState ss;
  ss.branch_count = static_cast<int>(steady_state_branches(d).size());
  if (require_monostable && ss.branch_count > 1)
    throw std::runtime_error(
        "solve_steady_state: bistable regime (branch_count > 1)");
  ss.amplitude = std::sqrt(n);
  ss.delta_eff = d.Delta + d.G * d.G * n * W;
  // exact static displacements for the selected branch
  const double det =
      d.Omega_c * d.Omega_c * d.Omega_d * d.Omega_d + d.coupling_A * d.coupling_A;
  const double bc = d.omega_tilde_c * d.G * n;
  const double bd = d.omega_tilde_d * d.G * n;
  ss.x_c = (-bc * d.Omega_d * d.Omega_d + d.coupling_A * bd) / det;
  ss.x_d = (-bd * d.Omega_c * d.Omega_c - d.coupling_A * bc) / det;
  return ss;
}

double detuning_for_zero_effective(const DerivedFrequencies& d) {
  const double n = (2.0 * d.eta / d.kappa) * (2.0 * d.eta / d.kappa);
  return -d.G * d.G * n * displacement_sum_coefficient(d);
}

DerivedFrequencies derive_locked(const SystemParams& p, bool with_collisions) {
  DerivedFrequencies d = derive(p, with_collisions);
  d.Delta = detuning_for_zero_effective(d);
  return d;
}

}  // namespace ringsense
