// Independent time-domain check of the Floquet transfer coefficients: the
// linearized bichromatic equations are integrated directly with a complex
// sinusoidal probe on one input channel, and the steady periodic response is
// demodulated at omega_p - n*delta. Tame cavity parameters keep the ODE
// nonstiff; the coefficient formulas are exact in all parameters, so this
// validates their full structure (weights, factors, argument shifts).
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <array>
#include <cmath>
#include <complex>
#include <vector>

#include "ringsense/bae.hpp"
#include "ringsense/constants.hpp"
#include "test_helpers.hpp"

using namespace ringsense;
using namespace ringsense::testing;

namespace {

struct TameSetup {
  SystemParams p;
  DerivedFrequencies d;
  BaeSteadyState bss;
};

TameSetup tame_setup() {
  TameSetup s;
  s.p = paper_params();
  s.p.cavity_linewidth_hz = 2000.0;  // nonstiff cavity
  s.p.mechanical_damping_hz = 4.0;   // faster transient decay
  s.d = derive(s.p, false);
  s.bss.delta = s.d.omega_m;
  s.bss.a_bar = 0.244;  // linearization amplitude is a free probe parameter
  return s;
}

enum Probe { ProbeQ, ProbeP, ProbeC, ProbeD };

using State = std::array<cplx, 6>;  // Q, P, Xc, Vc, Xd, Vd

State rhs(const TameSetup& s, Probe probe, double wp, double t,
          const State& y) {
  const double kappa = s.d.kappa, gamma = s.d.gamma;
  const double wc = s.d.omega_c, wd = s.d.omega_d;
  const double cg = 2.0 * std::sqrt(2.0) * s.d.G * s.bss.a_bar *
                    std::cos(s.bss.delta * t);
  const double sk = std::sqrt(kappa);
  const cplx pr = std::polar(1.0, -wp * t);
  State dy;
  dy[0] = -0.5 * kappa * y[0] + (probe == ProbeQ ? sk * pr : cplx{});
  dy[1] = -0.5 * kappa * y[1] + (probe == ProbeP ? sk * pr : cplx{}) -
          cg * (y[2] + y[4]);
  dy[2] = y[3];
  dy[3] = -wc * wc * y[2] - gamma * y[3] - cg * wc * y[0] +
          (probe == ProbeC ? wc * pr : cplx{});
  dy[4] = y[5];
  dy[5] = -wd * wd * y[4] - gamma * y[5] - cg * wd * y[0] +
          (probe == ProbeD ? wd * pr : cplx{});
  return dy;
}

std::vector<cplx> transfer(const TameSetup& s, Probe probe, double wp,
                           const std::vector<int>& ns) {
  const double dlt = s.bss.delta;
  const double sk = std::sqrt(s.d.kappa);
  const double settle = 7.0 / (0.5 * s.d.gamma);
  const double window = 400.0 * two_pi / dlt;  // integer delta periods
  const double dt = 2.5e-6;

  State y{};
  auto step = [&](double t, const State& cur) {
    const State k1 = rhs(s, probe, wp, t, cur);
    State tmp;
    for (int i = 0; i < 6; ++i) tmp[i] = cur[i] + 0.5 * dt * k1[i];
    const State k2 = rhs(s, probe, wp, t + 0.5 * dt, tmp);
    for (int i = 0; i < 6; ++i) tmp[i] = cur[i] + 0.5 * dt * k2[i];
    const State k3 = rhs(s, probe, wp, t + 0.5 * dt, tmp);
    for (int i = 0; i < 6; ++i) tmp[i] = cur[i] + dt * k3[i];
    const State k4 = rhs(s, probe, wp, t + dt, tmp);
    State nxt;
    for (int i = 0; i < 6; ++i)
      nxt[i] = cur[i] + dt / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
    return nxt;
  };

  const long n_settle = static_cast<long>(settle / dt);
  double t = 0;
  for (long i = 0; i < n_settle; ++i, t += dt) y = step(t, y);

  auto pout = [&](double tt, const State& st) {
    cplx out = sk * st[1];
    if (probe == ProbeP) out -= std::polar(1.0, -wp * tt);
    return out;
  };

  const long n_win = static_cast<long>(window / dt);
  std::vector<cplx> acc(ns.size(), 0.0);
  std::vector<cplx> prev(ns.size());
  for (std::size_t k = 0; k < ns.size(); ++k)
    prev[k] = pout(t, y) * std::polar(1.0, (wp - ns[k] * dlt) * t);
  const double t_end = t + window;
  for (long i = 0; i < n_win; ++i) {
    y = step(t, y);
    t += dt;
    for (std::size_t k = 0; k < ns.size(); ++k) {
      const cplx f = pout(t, y) * std::polar(1.0, (wp - ns[k] * dlt) * t);
      acc[k] += 0.5 * (f + prev[k]) * dt;
      prev[k] = f;
    }
  }
  for (auto& a : acc) a /= (t - (t_end - window));
  return acc;
}

}  // namespace

TEST_CASE("Floquet coefficients vs time-domain transfer functions") {
  const TameSetup s = tame_setup();
  const double Om = s.d.Omega;
  const std::vector<double> probes{0.3 * Om, 0.7 * Om, 1.1 * Om, 1.6 * Om,
                                   0.55 * s.d.omega_m};

  SUBCASE("Q probe: A0 and A+-2") {
    for (double wp : {probes[0], probes[2], probes[4]}) {
      const auto got = transfer(s, ProbeQ, wp, {0, 2, -2});
      const cplx a0 = floquet_p_coefficient(0, NoiseInput::QIn, wp, s.d, s.bss);
      const cplx a2 = floquet_p_coefficient(2, NoiseInput::QIn, wp, s.d, s.bss);
      const cplx am2 =
          floquet_p_coefficient(-2, NoiseInput::QIn, wp, s.d, s.bss);
      CHECK(std::abs(got[0] - a0) < 1e-3 * std::abs(a0));
      CHECK(std::abs(got[1] - a2) < 1e-3 * std::abs(a2));
      CHECK(std::abs(got[2] - am2) < 1e-3 * std::abs(am2));
    }
  }
  SUBCASE("P probe: B0") {
    for (double wp : {probes[1], probes[3]}) {
      const auto got = transfer(s, ProbeP, wp, {0});
      const cplx b0 = floquet_p_coefficient(0, NoiseInput::PIn, wp, s.d, s.bss);
      CHECK(std::abs(got[0] - b0) < 1e-3 * std::abs(b0));
    }
  }
  SUBCASE("thermal probes: C+-1 and D+-1") {
    for (double wp : {probes[0], probes[3]}) {
      const auto gc = transfer(s, ProbeC, wp, {1, -1});
      const cplx cp =
          floquet_p_coefficient(1, NoiseInput::EpsC, wp, s.d, s.bss);
      const cplx cm =
          floquet_p_coefficient(-1, NoiseInput::EpsC, wp, s.d, s.bss);
      CHECK(std::abs(gc[0] - cp) < 1e-3 * std::abs(cp));
      CHECK(std::abs(gc[1] - cm) < 1e-3 * std::abs(cm));
    }
    const double wp = probes[2];
    const auto gd = transfer(s, ProbeD, wp, {1, -1});
    const cplx dp = floquet_p_coefficient(1, NoiseInput::EpsD, wp, s.d, s.bss);
    const cplx dm = floquet_p_coefficient(-1, NoiseInput::EpsD, wp, s.d, s.bss);
    CHECK(std::abs(gd[0] - dp) < 1e-3 * std::abs(dp));
    CHECK(std::abs(gd[1] - dm) < 1e-3 * std::abs(dm));
  }
}
