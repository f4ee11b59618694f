#include "ringsense/linear_response.hpp"

#include <array>
#include <cmath>
#include <stdexcept>

#include "ringsense/constants.hpp"
#include "ringsense/susceptibility.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace ringsense {

namespace {

struct IntracavityCoeffs {
  cplx q[4];  // dQ response to [Q_in, P_in, eps_c, eps_d]
  cplx p[4];  // dP response
};

IntracavityCoeffs intracavity(double omega, const DerivedFrequencies& d,
                              const SteadyState& ss) {
  const cplx xa = chi_cavity(omega, d.kappa);
  const cplx xc = chi_mech(omega, d.Omega_c, d.gamma);
  const cplx xd = chi_mech(omega, d.Omega_d, d.gamma);
  const double dp = ss.delta_eff;
  const double beta = std::sqrt(2.0) * d.G * ss.amplitude;
  const double sk = std::sqrt(d.kappa);

  const cplx lam = 1.0 + d.coupling_A * d.coupling_A * xc * xd;
  const cplx uc = d.omega_tilde_c * xc * (1.0 + d.coupling_A * xd);
  const cplx ud = d.omega_tilde_d * xd * (1.0 - d.coupling_A * xc);
  const cplx sig_c = d.omega_c * xc * (1.0 + d.coupling_A * xd);  // eps_c drive
  const cplx sig_d = d.omega_d * xd * (1.0 - d.coupling_A * xc);  // eps_d drive
  const cplx V = dp + beta * beta * (uc + ud) / lam;
  const cplx Dm = 1.0 + dp * xa * xa * V;

  IntracavityCoeffs ic;
  ic.q[0] = sk * xa / Dm;
  ic.q[1] = -dp * xa * xa * sk / Dm;
  ic.q[2] = dp * xa * xa * beta * sig_c / (lam * Dm);
  ic.q[3] = dp * xa * xa * beta * sig_d / (lam * Dm);
  ic.p[0] = sk * xa * xa * V / Dm;
  ic.p[1] = sk * xa / Dm;
  ic.p[2] = -xa * beta * sig_c / (lam * Dm);
  ic.p[3] = -xa * beta * sig_d / (lam * Dm);
  return ic;
}

}  // namespace

QuadCoeffs output_coefficients(double omega, const DerivedFrequencies& d,
                               const SteadyState& ss, IoConvention convention) {
  const IntracavityCoeffs ic = intracavity(omega, d, ss);
  const double sk = std::sqrt(d.kappa);
  QuadCoeffs out;
  out.b_q = sk * ic.q[1];
  out.c_q = sk * ic.q[2];
  out.d_q = sk * ic.q[3];
  out.a_p = sk * ic.p[0];
  out.c_p = sk * ic.p[2];
  out.d_p = sk * ic.p[3];
  if (convention == IoConvention::Standard) {
    out.a_q = sk * ic.q[0] - 1.0;
    out.b_p = sk * ic.p[1] - 1.0;
  } else {
    out.a_q = (sk - 1.0) * ic.q[0];
    out.b_p = (sk - 1.0) * ic.p[1];
  }
  return out;
}

Eigen::Matrix4cd response_matrix(double omega, const DerivedFrequencies& d,
                                 const SteadyState& ss) {
  const cplx xa_inv(0.5 * d.kappa, -omega);
  const cplx xc_inv(d.Omega_c * d.Omega_c - omega * omega, -omega * d.gamma);
  const cplx xd_inv(d.Omega_d * d.Omega_d - omega * omega, -omega * d.gamma);
  const double b = std::sqrt(2.0) * d.G * ss.amplitude;
  Eigen::Matrix4cd F;
  F << xa_inv, cplx(ss.delta_eff), cplx(0), cplx(0),
      cplx(-ss.delta_eff), xa_inv, cplx(b), cplx(b),
      cplx(b * d.omega_tilde_c), cplx(0), xc_inv, cplx(d.coupling_A),
      cplx(b * d.omega_tilde_d), cplx(0), cplx(-d.coupling_A), xd_inv;
  double scale = 1.0;
  for (int i = 0; i < 4; ++i) scale *= F.row(i).norm();
  if (std::abs(F.determinant()) < 1e-30 * scale)
    throw std::runtime_error("response_matrix: singular at omega = " +
                             std::to_string(omega));
  return F;
}

QuadCoeffs output_coefficients_via_matrix(double omega,
                                          const DerivedFrequencies& d,
                                          const SteadyState& ss) {
  const Eigen::Matrix4cd F = response_matrix(omega, d, ss);
  Eigen::Matrix4cd Din = Eigen::Matrix4cd::Zero();
  const double sk = std::sqrt(d.kappa);
  Din(0, 0) = sk;
  Din(1, 1) = sk;
  Din(2, 2) = d.omega_c;
  Din(3, 3) = d.omega_d;
  const Eigen::Matrix4cd R = F.partialPivLu().solve(Din);
  QuadCoeffs out;
  out.a_q = sk * R(0, 0) - 1.0;
  out.b_q = sk * R(0, 1);
  out.c_q = sk * R(0, 2);
  out.d_q = sk * R(0, 3);
  out.a_p = sk * R(1, 0);
  out.b_p = sk * R(1, 1) - 1.0;
  out.c_p = sk * R(1, 2);
  out.d_p = sk * R(1, 3);
  return out;
}

double PhiQuadratic::at(double phi) const {
  const double c = std::cos(phi), s = std::sin(phi);
  return c * c * s_qq + s * s * s_pp + s * c * s_cross;
}

PhiQuadratic& PhiQuadratic::operator+=(const PhiQuadratic& o) {
  s_qq += o.s_qq;
  s_pp += o.s_pp;
  s_cross += o.s_cross;
  return *this;
}

PhiQuadratic& PhiQuadratic::operator-=(const PhiQuadratic& o) {
  s_qq -= o.s_qq;
  s_pp -= o.s_pp;
  s_cross -= o.s_cross;
  return *this;
}

PhiQuadratic& PhiQuadratic::operator*=(double f) {
  s_qq *= f;
  s_pp *= f;
  s_cross *= f;
  return *this;
}

PhiQuadratic SpectrumStructure::excess() const {
  PhiQuadratic e = total;
  e -= shot;
  e -= backaction;
  e -= thermal;
  return e;
}

namespace {

// All quadratic forms pair coefficients at (+w, -w) explicitly so complex
// asymmetries survive; the measured (real) value is the real part.
struct PairAccum {
  const std::array<cplx, 4>& kq;   // Q_out set at +w
  const std::array<cplx, 4>& kp;   // P_out set at +w
  const std::array<cplx, 4>& kqm;  // at -w
  const std::array<cplx, 4>& kpm;

  PhiQuadratic weighted(int x, int y, double dens) const {
    PhiQuadratic r;
    r.s_qq = (kq[x] * kqm[y]).real() * dens;
    r.s_pp = (kp[x] * kpm[y]).real() * dens;
    r.s_cross = ((kq[x] * kpm[y]).real() + (kp[x] * kqm[y]).real()) * dens;
    return r;
  }
};

}  // namespace

SpectrumStructure spectrum_structure(double omega, const SystemParams& p,
                                     const DerivedFrequencies& d,
                                     const SteadyState& ss,
                                     const SqueezeParams& sq) {
  const QuadCoeffs c = output_coefficients(omega, d, ss);
  const QuadCoeffs cm = output_coefficients(-omega, d, ss);
  const std::array<cplx, 4> kq{c.a_q, c.b_q, c.c_q, c.d_q};
  const std::array<cplx, 4> kp{c.a_p, c.b_p, c.c_p, c.d_p};
  const std::array<cplx, 4> kqm{cm.a_q, cm.b_q, cm.c_q, cm.d_q};
  const std::array<cplx, 4> kpm{cm.a_p, cm.b_p, cm.c_p, cm.d_p};
  const PairAccum acc{kq, kp, kqm, kpm};

  const OpticalDensities od = drive_densities(sq);
  const double tc =
      thermal_kernel(omega, d.omega_c, p.bec_temperature_k, d.gamma) / two_pi;
  const double td =
      thermal_kernel(omega, d.omega_d, p.bec_temperature_k, d.gamma) / two_pi;

  SpectrumStructure st;
  st.shot = acc.weighted(1, 1, 0.5);
  st.backaction = acc.weighted(0, 0, 0.5);
  st.thermal = acc.weighted(2, 2, tc);
  st.thermal += acc.weighted(3, 3, td);
  st.total = acc.weighted(0, 0, od.qq);
  st.total += acc.weighted(1, 1, od.pp);
  st.total += acc.weighted(0, 1, od.qp);
  st.total += acc.weighted(1, 0, od.qp);
  st.total += st.thermal;
  return st;
}

SpectrumSample sample_at(const SpectrumStructure& st, double phi) {
  SpectrumSample s;
  s.total = st.total.at(phi);
  s.shot = st.shot.at(phi);
  s.backaction = st.backaction.at(phi);
  s.thermal = st.thermal.at(phi);
  s.excess = st.excess().at(phi);
  return s;
}

SpectrumSample spectral_density(double omega, double phi,
                                const SystemParams& p,
                                const DerivedFrequencies& d,
                                const SteadyState& ss,
                                const SqueezeParams& sq) {
  return sample_at(spectrum_structure(omega, p, d, ss, sq), phi);
}

HomodyneAngle optimal_homodyne_angle(double omega, const SystemParams& p,
                                     const DerivedFrequencies& d,
                                     const SteadyState& ss,
                                     const SqueezeParams& sq) {
  constexpr double half_pi = 1.57079632679489661923;
  if (!sq.squeezed()) return {half_pi, false};
  const SpectrumStructure st = spectrum_structure(omega, p, d, ss, sq);
  const double diff = st.total.s_qq - st.total.s_pp;
  const double cross = st.total.s_cross;
  const double scale = std::abs(st.total.s_qq) + std::abs(st.total.s_pp);
  if (std::abs(diff) < 1e-14 * scale && std::abs(cross) < 1e-14 * scale)
    return {half_pi, true};
  double phi = 0.5 * std::atan2(cross, diff);
  if (phi < 0) phi += 2 * half_pi;
  return {phi, false};
}

std::vector<SpectrumSample> spectrum_grid(const std::vector<double>& omegas,
                                          double phi, const SystemParams& p,
                                          const DerivedFrequencies& d,
                                          const SteadyState& ss,
                                          const SqueezeParams& sq,
                                          Execution exec) {
  std::vector<SpectrumSample> out(omegas.size());
  const auto n = static_cast<long>(omegas.size());
  if (exec == Execution::Parallel) {
#ifdef _OPENMP
#pragma omp parallel for schedule(static)
#endif
    for (long i = 0; i < n; ++i)
      out[i] = spectral_density(omegas[i], phi, p, d, ss, sq);
  } else {
    for (long i = 0; i < n; ++i)
      out[i] = spectral_density(omegas[i], phi, p, d, ss, sq);
  }
  return out;
}

std::vector<SpectrumStructure> spectrum_structure_grid(
    const std::vector<double>& omegas, const SystemParams& p,
    const DerivedFrequencies& d, const SteadyState& ss,
    const SqueezeParams& sq, Execution exec) {
  std::vector<SpectrumStructure> out(omegas.size());
  const auto n = static_cast<long>(omegas.size());
  if (exec == Execution::Parallel) {
#ifdef _OPENMP
#pragma omp parallel for schedule(static)
#endif
    for (long i = 0; i < n; ++i)
      out[i] = spectrum_structure(omegas[i], p, d, ss, sq);
  } else {
    for (long i = 0; i < n; ++i)
      out[i] = spectrum_structure(omegas[i], p, d, ss, sq);
  }
  return out;
}

}  // namespace ringsense
