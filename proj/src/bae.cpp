#include "ringsense/bae.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <array>
#include <cmath>
#include <stdexcept>

#include "ringsense/constants.hpp"
#include "ringsense/ode.hpp"
#include "ringsense/steady_state.hpp"
#include "ringsense/susceptibility.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace ringsense {

namespace {

double tone_amplitude(double power_w, const DerivedFrequencies& d) {
  return std::sqrt(power_w * d.kappa / (hbar * d.omega_a));
}

double resolve_delta(const DerivedFrequencies& d, const BaeDrive& drive) {
  return drive.at_resonance ? d.omega_m : drive.delta;
}

// n_+ [(delta - Oeff N)^2 + kappa^2/4] = eps_+^2, likewise n_- with +delta.
double n_plus_of(double N, double delta, double oeff, double kappa,
                 double eps) {
  const double det = delta - oeff * N;
  return eps * eps / (det * det + 0.25 * kappa * kappa);
}

double n_minus_of(double N, double delta, double oeff, double kappa,
                  double eps) {
  const double det = delta + oeff * N;
  return eps * eps / (det * det + 0.25 * kappa * kappa);
}

// Real roots of the degree-5 polynomial N D_+ D_- = eps_+^2 D_- + eps_-^2 D_+
std::vector<double> total_occupation_roots(double delta, double oeff,
                                           double kappa, double ep,
                                           double em) {
  const double k2 = 0.25 * kappa * kappa;
  // D_+(N) = oeff^2 N^2 - 2 delta oeff N + (delta^2 + k2)
  const std::array<double, 3> dp{oeff * oeff, -2 * delta * oeff,
                                 delta * delta + k2};
  const std::array<double, 3> dm{oeff * oeff, 2 * delta * oeff,
                                 delta * delta + k2};
  std::array<double, 5> prod{};  // D_+ * D_-
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) prod[i + j] += dp[i] * dm[j];
  std::array<double, 6> poly{};  // N * D_+ D_- - ep^2 D_- - em^2 D_+
  for (int i = 0; i < 5; ++i) poly[i] += prod[i];
  for (int i = 0; i < 3; ++i) {
    poly[i + 3] -= ep * ep * dm[i] + em * em * dp[i];
  }
  // companion matrix of the monic quintic
  const double lead = poly[0];
  if (std::abs(lead) == 0.0) return {};
  Eigen::MatrixXd comp = Eigen::MatrixXd::Zero(5, 5);
  for (int i = 0; i < 4; ++i) comp(i + 1, i) = 1.0;
  for (int i = 0; i < 5; ++i) comp(i, 4) = -poly[5 - i] / lead;
  Eigen::EigenSolver<Eigen::MatrixXd> es(comp, false);
  std::vector<double> roots;
  for (int i = 0; i < 5; ++i) {
    const auto z = es.eigenvalues()[i];
    if (std::abs(z.imag()) < 1e-8 * std::max(1.0, std::abs(z)) && z.real() > 0)
      roots.push_back(z.real());
  }
  std::sort(roots.begin(), roots.end());
  roots.erase(std::unique(roots.begin(), roots.end(),
                          [](double a, double b) {
                            return std::abs(a - b) < 1e-7 * std::max(1.0, a);
                          }),
              roots.end());
  return roots;
}

}  // namespace

int bae_branch_count(const DerivedFrequencies& d, double delta,
                     double Omega_eff, double eps_plus, double eps_minus) {
  if (eps_plus == 0 && eps_minus == 0) return 1;
  const auto roots =
      total_occupation_roots(delta, Omega_eff, d.kappa, eps_plus, eps_minus);
  return std::max<int>(1, static_cast<int>(roots.size()));
}

BaeSteadyState bae_steady_state(const SystemParams& p,
                                const DerivedFrequencies& d,
                                const BaeDrive& drive, bool collisional_shift) {
  if (drive.power_plus_w < 0 || drive.power_minus_w < 0)
    throw std::domain_error("bae_steady_state: negative drive power");
  BaeSteadyState out;
  out.delta = resolve_delta(d, drive);
  if (d.omega_m == d.Omega)
    throw std::runtime_error("bae_steady_state: omega_m == Omega, Omega_eff singular");
  if (collisional_shift) {
    const DerivedFrequencies dc = derive(p, true);
    out.Omega_eff = d.G * d.G * displacement_sum_coefficient(dc);
  } else {
    out.Omega_eff = d.G * d.G * displacement_sum_coefficient(d);
  }
  out.eps_plus = tone_amplitude(drive.power_plus_w, d);
  out.eps_minus = tone_amplitude(drive.power_minus_w, d);

  if (out.eps_plus == 0 && out.eps_minus == 0) {
    out.a_bar = 0;
    return out;
  }

  // small-G closed form is exact enough below G/kappa = 1e-3
  const bool closed_form = d.G / d.kappa < 1e-3;
  double N = 0.0;
  if (!closed_form) {
    const int ramp = 32;
    for (int s = 1; s <= ramp; ++s) {
      const double f = static_cast<double>(s) / ramp;
      const double ep = f * out.eps_plus, em = f * out.eps_minus;
      bool converged = false;
      for (int it = 0; it < 4000; ++it) {
        const double next =
            n_plus_of(N, out.delta, out.Omega_eff, d.kappa, ep) +
            n_minus_of(N, out.delta, out.Omega_eff, d.kappa, em);
        if (std::abs(next - N) <= 1e-15 * std::max(1.0, N)) {
          N = next;
          converged = true;
          break;
        }
        N = 0.5 * N + 0.5 * next;
      }
      if (!converged) {
        // bisection on F(N) = n_+ + n_- - N around the continuation point
        double lo = 0.0, hi = std::max(4.0 * N, 1.0);
        auto F = [&](double x) {
          return n_plus_of(x, out.delta, out.Omega_eff, d.kappa, ep) +
                 n_minus_of(x, out.delta, out.Omega_eff, d.kappa, em) - x;
        };
        while (F(hi) > 0) hi *= 2;
        for (int it = 0; it < 200; ++it) {
          const double mid = 0.5 * (lo + hi);
          (F(mid) > 0 ? lo : hi) = mid;
        }
        N = 0.5 * (lo + hi);
      }
    }
  }
  if (closed_form) {
    const double lor = out.delta * out.delta + 0.25 * d.kappa * d.kappa;
    out.n_plus = out.eps_plus * out.eps_plus / lor;
    out.n_minus = out.eps_minus * out.eps_minus / lor;
  } else {
    out.n_plus = n_plus_of(N, out.delta, out.Omega_eff, d.kappa, out.eps_plus);
    out.n_minus =
        n_minus_of(N, out.delta, out.Omega_eff, d.kappa, out.eps_minus);
  }
  out.a_bar = std::sqrt(0.5 * (out.n_plus + out.n_minus));
  const double Nf = out.n_plus + out.n_minus;
  auto rel_res = [&](double n, double eps, double sign) {
    const double det = out.delta + sign * out.Omega_eff * Nf;
    const double lhs = n * (det * det + 0.25 * d.kappa * d.kappa);
    const double rhs = eps * eps;
    return std::abs(lhs - rhs) / std::max(rhs, 1e-300);
  };
  out.residual = std::max(rel_res(out.n_plus, out.eps_plus, -1.0),
                          rel_res(out.n_minus, out.eps_minus, +1.0));
  out.branch_count = bae_branch_count(d, out.delta, out.Omega_eff,
                                      out.eps_plus, out.eps_minus);
  out.monostable = out.branch_count == 1;
  if (!closed_form && out.residual > 1e-8)
    throw std::runtime_error(
        "bae_steady_state: fixed point did not converge, residual = " +
        std::to_string(out.residual));
  return out;
}

std::vector<BistabilityPoint> bistability_map(const SystemParams& p,
                                              BistabilityAxis axis,
                                              const std::vector<double>& values,
                                              const BaeDrive& drive) {
  std::vector<BistabilityPoint> out(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) {
    SystemParams q = p;
    BaeDrive dr = drive;
    if (axis == BistabilityAxis::InputPower) {
      dr.power_plus_w = values[i];
      dr.power_minus_w = values[i];
    } else {
      q.cavity_linewidth_hz = values[i];
    }
    BistabilityPoint pt;
    pt.axis_value = values[i];
    try {
      const DerivedFrequencies d = derive(q, false);
      const BaeSteadyState bss = bae_steady_state(q, d, dr);
      pt.branch_count = bss.branch_count;
      pt.n_plus = bss.n_plus;
      pt.n_minus = bss.n_minus;
    } catch (const std::exception&) {
      pt.converged = false;
    }
    out[i] = pt;
  }
  return out;
}

FloquetCoeffs floquet_coefficients(double omega, const DerivedFrequencies& d,
                                   const BaeSteadyState& bss) {
  FloquetCoeffs f;
  f.b0 = floquet_p_coefficient(0, NoiseInput::PIn, omega, d, bss);
  f.a0 = floquet_p_coefficient(0, NoiseInput::QIn, omega, d, bss);
  f.c_p1 = floquet_p_coefficient(1, NoiseInput::EpsC, omega, d, bss);
  f.c_m1 = floquet_p_coefficient(-1, NoiseInput::EpsC, omega, d, bss);
  f.d_p1 = floquet_p_coefficient(1, NoiseInput::EpsD, omega, d, bss);
  f.d_m1 = floquet_p_coefficient(-1, NoiseInput::EpsD, omega, d, bss);
  f.a_p2 = floquet_p_coefficient(2, NoiseInput::QIn, omega, d, bss);
  f.a_m2 = floquet_p_coefficient(-2, NoiseInput::QIn, omega, d, bss);
  return f;
}

cplx floquet_p_coefficient(int n, NoiseInput input, double omega,
                           const DerivedFrequencies& d,
                           const BaeSteadyState& bss) {
  // Collisionless sidemode resonances: omega_c = omega_m + Omega etc.
  const double dlt = bss.delta;
  const double g_ab = d.G * bss.a_bar;
  const double sk = std::sqrt(d.kappa);
  const auto xa = [&](double w) { return chi_cavity(w, d.kappa); };
  const auto xc = [&](double w) { return chi_mech(w, d.omega_c, d.gamma); };
  const auto xd = [&](double w) { return chi_mech(w, d.omega_d, d.gamma); };

  switch (input) {
    case NoiseInput::PIn:
      return n == 0 ? d.kappa * xa(omega) - 1.0 : cplx{0.0};
    case NoiseInput::QIn: {
      if (n == 0) {
        return 2.0 * d.kappa * g_ab * g_ab * xa(omega) * xa(omega) *
               (d.omega_c * (xc(omega - dlt) + xc(omega + dlt)) +
                d.omega_d * (xd(omega - dlt) + xd(omega + dlt)));
      }
      if (n == 2 || n == -2) {
        const double s = n > 0 ? 1.0 : -1.0;
        return 2.0 * d.kappa * g_ab * g_ab * xa(omega - n * dlt) * xa(omega) *
               (d.omega_c * xc(omega - s * dlt) +
                d.omega_d * xd(omega - s * dlt));
      }
      return cplx{0.0};
    }
    case NoiseInput::EpsC:
      if (n == 1 || n == -1)
        return -std::sqrt(2.0) * sk * g_ab * xa(omega - n * dlt) * d.omega_c *
               xc(omega);
      return cplx{0.0};
    case NoiseInput::EpsD:
      if (n == 1 || n == -1)
        return -std::sqrt(2.0) * sk * g_ab * xa(omega - n * dlt) * d.omega_d *
               xd(omega);
      return cplx{0.0};
  }
  return cplx{0.0};
}

namespace {

struct BaeSets {
  std::array<cplx, 4> q;  // Q_out^(n) coefficients of [Qin, Pin, eps_c, eps_d]
  std::array<cplx, 4> p;  // P_out^(n)
};

BaeSets bae_sets(int n, double omega, const DerivedFrequencies& d,
                 const BaeSteadyState& bss) {
  BaeSets s{};
  s.p[0] = floquet_p_coefficient(n, NoiseInput::QIn, omega, d, bss);
  s.p[1] = floquet_p_coefficient(n, NoiseInput::PIn, omega, d, bss);
  s.p[2] = floquet_p_coefficient(n, NoiseInput::EpsC, omega, d, bss);
  s.p[3] = floquet_p_coefficient(n, NoiseInput::EpsD, omega, d, bss);
  // dQ couples to nothing; Q_out only carries the n = 0 feedthrough
  if (n == 0) s.q[0] = d.kappa * chi_cavity(omega, d.kappa) - 1.0;
  return s;
}

PhiQuadratic pair_form(const BaeSets& a, const BaeSets& bm, int x, int y,
                       double dens) {
  PhiQuadratic r;
  r.s_qq = (a.q[x] * bm.q[y]).real() * dens;
  r.s_pp = (a.p[x] * bm.p[y]).real() * dens;
  r.s_cross = ((a.q[x] * bm.p[y]).real() + (a.p[x] * bm.q[y]).real()) * dens;
  return r;
}

}  // namespace

SpectrumStructure bae_spectrum_structure(double omega, const SystemParams& p,
                                         const DerivedFrequencies& d,
                                         const BaeSteadyState& bss,
                                         const SqueezeParams& sq) {
  const double dlt = bss.delta;
  const OpticalDensities od = drive_densities(sq);
  const double temp = p.bec_temperature_k;

  SpectrumStructure st;
  // n = 0 optical block at (w, -w)
  {
    const BaeSets a = bae_sets(0, omega, d, bss);
    const BaeSets bm = bae_sets(0, -omega, d, bss);
    st.shot = pair_form(a, bm, 1, 1, 0.5);
    st.backaction = pair_form(a, bm, 0, 0, 0.5);
    st.total += pair_form(a, bm, 0, 0, od.qq);
    st.total += pair_form(a, bm, 1, 1, od.pp);
    st.total += pair_form(a, bm, 0, 1, od.qp);
    st.total += pair_form(a, bm, 1, 0, od.qp);
  }
  // n = +-2 optical sidebands at the shifted arguments (Q_in only)
  for (int n : {2, -2}) {
    const BaeSets a = bae_sets(n, omega + n * dlt, d, bss);
    const BaeSets bm = bae_sets(-n, -omega - n * dlt, d, bss);
    PhiQuadratic vac = pair_form(a, bm, 0, 0, 0.5);
    st.backaction += vac;
    st.total += pair_form(a, bm, 0, 0, od.qq);
  }
  // n = +-1 thermal sidebands
  for (int n : {1, -1}) {
    const BaeSets a = bae_sets(n, omega + n * dlt, d, bss);
    const BaeSets bm = bae_sets(-n, -omega - n * dlt, d, bss);
    const double tc =
        thermal_kernel(omega + n * dlt, d.omega_c, temp, d.gamma) / two_pi;
    const double td =
        thermal_kernel(omega + n * dlt, d.omega_d, temp, d.gamma) / two_pi;
    st.thermal += pair_form(a, bm, 2, 2, tc);
    st.thermal += pair_form(a, bm, 3, 3, td);
  }
  st.total += st.thermal;
  return st;
}

SpectrumSample bae_spectral_density(double omega, double phi,
                                    const SystemParams& p,
                                    const DerivedFrequencies& d,
                                    const BaeSteadyState& bss,
                                    const SqueezeParams& sq) {
  return sample_at(bae_spectrum_structure(omega, p, d, bss, sq), phi);
}

std::vector<SpectrumSample> bae_spectrum_grid(
    const std::vector<double>& omegas, double phi, const SystemParams& p,
    const DerivedFrequencies& d, const BaeSteadyState& bss,
    const SqueezeParams& sq, Execution exec) {
  std::vector<SpectrumSample> out(omegas.size());
  const auto n = static_cast<long>(omegas.size());
  if (exec == Execution::Parallel) {
#ifdef _OPENMP
#pragma omp parallel for schedule(static)
#endif
    for (long i = 0; i < n; ++i)
      out[i] = bae_spectral_density(omegas[i], phi, p, d, bss, sq);
  } else {
    for (long i = 0; i < n; ++i)
      out[i] = bae_spectral_density(omegas[i], phi, p, d, bss, sq);
  }
  return out;
}

std::vector<SpectrumStructure> bae_spectrum_structure_grid(
    const std::vector<double>& omegas, const SystemParams& p,
    const DerivedFrequencies& d, const BaeSteadyState& bss,
    const SqueezeParams& sq, Execution exec) {
  std::vector<SpectrumStructure> out(omegas.size());
  const auto n = static_cast<long>(omegas.size());
  if (exec == Execution::Parallel) {
#ifdef _OPENMP
#pragma omp parallel for schedule(static)
#endif
    for (long i = 0; i < n; ++i)
      out[i] = bae_spectrum_structure(omegas[i], p, d, bss, sq);
  } else {
    for (long i = 0; i < n; ++i)
      out[i] = bae_spectrum_structure(omegas[i], p, d, bss, sq);
  }
  return out;
}

double bae_measurement_time(double omega, const DerivedFrequencies& d,
                            const BaeSteadyState& bss) {
  if (!(d.kappa > 0)) throw std::domain_error("bae_measurement_time: kappa <= 0");
  const double g2 = d.G * d.G * bss.a_bar * bss.a_bar;
  return (omega * omega + 0.25 * d.kappa * d.kappa) / (2.0 * d.kappa * g2);
}

BoundCheckReport semiclassical_bound_check(const SystemParams& p,
                                           const DerivedFrequencies& d,
                                           const BaeDrive& drive,
                                           double horizon, double rel_tol,
                                           double bound_tol) {
  const BaeSteadyState bss = bae_steady_state(p, d, drive);
  if (!bss.monostable)
    throw std::runtime_error("semiclassical_bound_check: not monostable");
  const double dlt = bss.delta;
  const double ep = bss.eps_plus, em = bss.eps_minus;
  if (horizon <= 0)
    horizon = 50.0 * two_pi / d.kappa + 20.0 * two_pi / dlt;

  // mean field in the frame rotating at the laser frequency:
  //   a' = -k/2 a - i G a (X_c + X_d) - i (e_+ e^{i d t} + e_- e^{-i d t})
  //   X_k'' = -w_k^2 X_k - g X_k' - w_k G |a|^2
  auto rhs = [&](double t, const std::vector<double>& y,
                 std::vector<double>& dy) {
    const cplx a{y[0], y[1]};
    const double xc = y[2], vc = y[3], xd = y[4], vd = y[5];
    const cplx drive_t =
        cplx{0, -1} * (ep * std::polar(1.0, dlt * t) +
                       em * std::polar(1.0, -dlt * t));
    const cplx da = -0.5 * d.kappa * a - cplx{0, 1} * d.G * a * (xc + xd) +
                    drive_t;
    const double n_ph = std::norm(a);
    dy[0] = da.real();
    dy[1] = da.imag();
    dy[2] = vc;
    dy[3] = -d.omega_c * d.omega_c * xc - d.gamma * vc - d.omega_c * d.G * n_ph;
    dy[4] = vd;
    dy[5] = -d.omega_d * d.omega_d * xd - d.gamma * vd - d.omega_d * d.G * n_ph;
  };

  std::vector<double> y(6, 0.0);
  double max_amp = 0.0;
  OdeStats stats;
  try {
    stats = integrate_adaptive(
        rhs, y, 0.0, horizon, rel_tol, 1e-14,
        [&](double, const std::vector<double>& s) {
          max_amp = std::max(max_amp, std::hypot(s[0], s[1]));
        });
  } catch (const std::exception& e) {
    throw std::runtime_error(std::string("semiclassical_bound_check: ") +
                             e.what());
  }

  BoundCheckReport rep;
  rep.max_amplitude = max_amp;
  rep.bound = std::sqrt(bss.n_plus) + std::sqrt(bss.n_minus);
  rep.ratio = rep.bound > 0 ? max_amp / rep.bound : 0.0;
  rep.within_bound = max_amp <= (1.0 + bound_tol) * rep.bound ||
                     (rep.bound == 0 && max_amp == 0);
  rep.steps = stats.steps;
  if (!rep.within_bound)
    throw std::runtime_error(
        "semiclassical_bound_check: orbit exceeds steady-state envelope, "
        "ratio = " +
        std::to_string(rep.ratio));
  return rep;
}

}  // namespace ringsense
