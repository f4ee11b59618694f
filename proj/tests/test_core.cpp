#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "ringsense/constants.hpp"
#include "ringsense/noise.hpp"
#include "ringsense/params.hpp"
#include "test_helpers.hpp"

using namespace ringsense;
using namespace ringsense::testing;

TEST_CASE("sidemode frequencies, paper geometry") {
  SystemParams p = paper_params();
  auto [oc, od] = sidemode_frequencies(p);
  // (1 + 20)^2 / (2 * 0.0505) and (1 - 20)^2 / (2 * 0.0505)
  CHECK(close_rel(hz_from_rad(oc), 694.924058450751, 1e-12));
  CHECK(close_rel(hz_from_rad(od), 568.8607371898437, 1e-12));

  SUBCASE("degenerate at zero winding") {
    p.winding_number = 0;
    auto [c0, d0] = sidemode_frequencies(p);
    CHECK(c0 == d0);
  }
  SUBCASE("rejects nonpositive moment of inertia") {
    p.moment_of_inertia_over_hbar = 0;
    CHECK_THROWS_AS(sidemode_frequencies(p), std::domain_error);
  }
  SUBCASE("gap matches winding_gap exactly") {
    for (double lp : {1.0, 2.0, 3.0, 5.0}) {
      p.winding_number = lp;
      auto [c, d] = sidemode_frequencies(p);
      const WindingGap g =
          winding_gap(lp, p.oam_order, p.moment_of_inertia_over_hbar);
      CHECK(c - d == doctest::Approx(g.full_gap).epsilon(1e-14));
      CHECK(0.5 * (c - d) == doctest::Approx(g.half_gap).epsilon(1e-14));
    }
  }
  SUBCASE("direct gap oracle at L_p = 2") {
    p.winding_number = 2;
    auto [c, d] = sidemode_frequencies(p);
    CHECK(close_rel(hz_from_rad(c - d), 4.0 * 2 * 10 / 0.0505 / two_pi, 1e-12));
  }
}

TEST_CASE("winding gap") {
  const WindingGap g = winding_gap(1, 10, 0.0505);
  CHECK(close_abs(hz_from_rad(g.half_gap), 63.03, 0.02));  // Omega/2pi
  CHECK(winding_gap(0, 10, 0.0505).full_gap == 0.0);
  // linear scaling: gap(L_p)/L_p constant
  const double base = winding_gap(1, 10, 0.0505).full_gap;
  for (double lp : {2.0, 3.0, 4.0, 5.0})
    CHECK(close_rel(winding_gap(lp, 10, 0.0505).full_gap / lp, base, 1e-14));
  CHECK(close_abs(hz_from_rad(winding_gap(3, 10, 0.0505).full_gap), 378.2, 0.1));
}

TEST_CASE("collision shift, exact quadratic form") {
  SystemParams p = paper_params();
  auto [oc, od] = sidemode_frequencies(p);
  const CollisionShift s = collision_shift(p, oc, od);
  CHECK(close_abs(hz_from_rad(s.Omega_c), 750.4, 0.1));
  CHECK(close_abs(hz_from_rad(s.Omega_d), 624.2, 0.1));
  CHECK(s.omega_tilde_c == oc + 2 * rad_per_sec(14.0));

  SUBCASE("no-collision limit is the identity") {
    p.collision_rate_hz = 0;
    const CollisionShift s0 = collision_shift(p, oc, od);
    CHECK(s0.Omega_c == doctest::Approx(oc).epsilon(1e-15));
    CHECK(s0.Omega_d == doctest::Approx(od).epsilon(1e-15));
    CHECK(s0.coupling_A == 0.0);
    CHECK(s0.omega_tilde_c == oc);
  }
  SUBCASE("cross-coupling arithmetic") {
    const double expect = 2 * rad_per_sec(14.0) * (oc - od);
    CHECK(close_rel(s.coupling_A, expect, 1e-14));
  }
  SUBCASE("ordering preserved for any gN") {
    for (double gn : {0.0, 1.0, 14.0, 200.0, 5e3}) {
      p.collision_rate_hz = gn;
      const CollisionShift sh = collision_shift(p, oc, od);
      CHECK(sh.Omega_c > sh.Omega_d);
    }
  }
}

TEST_CASE("drive amplitude") {
  SystemParams p = paper_params();
  CHECK(close_rel(drive_amplitude(p), 1.5335e6, 1e-3));
  SUBCASE("zero power") {
    p.input_power_w = 0;
    CHECK(drive_amplitude(p) == 0.0);
  }
  SUBCASE("square-root power scaling") {
    const double e1 = drive_amplitude(p);
    p.input_power_w *= 4;
    CHECK(close_rel(drive_amplitude(p), 2 * e1, 1e-14));
  }
  SUBCASE("negative power rejected") {
    p.input_power_w = -1e-15;
    CHECK_THROWS_AS(drive_amplitude(p), std::domain_error);
  }
}

TEST_CASE("squeeze moments") {
  CHECK(squeeze_moments({0, 0, 0}).n_r == 0.0);
  CHECK(std::abs(squeeze_moments({0, 0, 0}).m_r) == 0.0);

  const SqueezeMoments m = squeeze_moments({2.0, 3.14159265358979323846, 0});
  CHECK(close_rel(m.n_r, 13.154116418008243, 1e-12));  // sinh^2 2
  CHECK(close_rel(m.m_r.real(), -13.644958598563876, 1e-12));  // -sinh(4)/2
  CHECK(close_abs(m.m_r.imag(), 0.0, 1e-12));

  SUBCASE("minimum-uncertainty identity at N_a = 0") {
    for (double r : {0.5, 1.0, 2.0}) {
      const SqueezeMoments q = squeeze_moments({r, 0.7, 0});
      CHECK(close_rel(std::norm(q.m_r), q.n_r * (q.n_r + 1), 1e-12));
    }
  }
}

TEST_CASE("optical kernel") {
  SUBCASE("vacuum") {
    const NoiseKernel k = optical_kernel({});
    CHECK(k.chi_qq == 1.0);
    CHECK(k.chi_pp == 1.0);
    CHECK(k.chi_qp == cplx{1.0});
    CHECK(k.chi_pq == cplx{-1.0});
  }
  SUBCASE("r = 2, theta = pi") {
    const NoiseKernel k = optical_kernel({2.0, 3.14159265358979323846, 0});
    CHECK(close_rel(k.chi_qq, std::exp(-4.0), 1e-10));
    CHECK(close_rel(k.chi_pp, std::exp(4.0), 1e-10));
  }
  SUBCASE("r = 2, theta = pi/2 has no mean quadrature asymmetry") {
    const NoiseKernel k = optical_kernel({2.0, 1.57079632679489661923, 0});
    const SqueezeMoments m = squeeze_moments({2.0, 1.57079632679489661923, 0});
    CHECK(close_rel(k.chi_qq, 2 * m.n_r + 1, 1e-12));
    CHECK(close_rel(k.chi_pp, 2 * m.n_r + 1, 1e-12));
  }
  SUBCASE("commutator residue is exactly 2") {
    for (double r : {0.0, 0.7, 2.4})
      for (double th : {0.0, 1.0, 2.5, 5.9}) {
        const NoiseKernel k = optical_kernel({r, th, 0.1});
        CHECK(k.chi_qp - k.chi_pq == cplx{2.0});
      }
  }
  SUBCASE("2pi periodicity in theta") {
    const NoiseKernel a = optical_kernel({1.3, 0.9, 0});
    const NoiseKernel b = optical_kernel({1.3, 0.9 + two_pi, 0});
    CHECK(close_rel(a.chi_qq, b.chi_qq, 1e-12));
    CHECK(close_rel(a.chi_pp, b.chi_pp, 1e-12));
  }
  SUBCASE("quadrature exchange under theta shift by pi") {
    const NoiseKernel a = optical_kernel({1.7, 3.14159265358979323846, 0});
    const NoiseKernel b = optical_kernel({1.7, 0.0, 0});
    CHECK(close_rel(a.chi_qq, b.chi_pp, 1e-12));
  }
  SUBCASE("uncertainty-consistent kernel") {
    for (double th : {0.0, 3.14159265358979323846}) {
      const NoiseKernel k = optical_kernel({1.5, th, 0});
      CHECK(k.chi_qq * k.chi_pp >= std::abs(k.chi_qp * k.chi_pq) - 1e-12);
    }
  }
}

TEST_CASE("thermal kernel") {
  const double gamma = rad_per_sec(0.8);
  const double wk = two_pi * 694.6;
  SUBCASE("zero-temperature bracket is 2") {
    CHECK(close_rel(thermal_kernel(wk, wk, 0.0, gamma), 2 * two_pi * gamma,
                    1e-12));
  }
  SUBCASE("20 nK bracket") {
    const double k = thermal_kernel(wk, wk, 20e-9, gamma);
    CHECK(close_rel(k / (two_pi * gamma), 2.4657, 2e-4));
  }
  SUBCASE("vanishes at omega = 0") {
    CHECK(thermal_kernel(0.0, wk, 20e-9, gamma) == 0.0);
  }
  SUBCASE("strictly increasing in temperature") {
    double prev = thermal_kernel(wk, wk, 1e-9, gamma);
    for (double t : {5e-9, 2e-8, 1e-7, 1e-6}) {
      const double cur = thermal_kernel(wk, wk, t, gamma);
      CHECK(cur > prev);
      prev = cur;
    }
  }
  SUBCASE("zero mode frequency rejected") {
    CHECK_THROWS_AS(thermal_kernel(1.0, 0.0, 1e-9, gamma), std::domain_error);
  }
}

TEST_CASE("thermal photon number") {
  SUBCASE("optical frequencies at room temperature are empty") {
    CHECK(thermal_photon_number(rad_per_sec(1e14), 300.0) < 1e-6);
  }
  SUBCASE("zero temperature") {
    CHECK(thermal_photon_number(rad_per_sec(1e14), 0.0) == 0.0);
  }
  SUBCASE("closed form at hbar w / kB T = ln 2") {
    const double t = 1.0;  // kelvin
    const double w = std::log(2.0) * k_boltzmann * t / hbar;
    CHECK(close_rel(thermal_photon_number(w, t), 1.0, 1e-12));
  }
  SUBCASE("overflow guard returns exactly zero") {
    CHECK(thermal_photon_number(rad_per_sec(1e14), 1e-3) == 0.0);
  }
}

TEST_CASE("drive densities") {
  SUBCASE("vacuum") {
    const OpticalDensities d = drive_densities({});
    CHECK(d.qq == 0.5);
    CHECK(d.pp == 0.5);
    CHECK(d.qp == 0.0);
  }
  SUBCASE("theta = pi squeezes the measured P quadrature") {
    const OpticalDensities d = drive_densities({2.0, 3.14159265358979323846, 0});
    CHECK(close_rel(2 * d.pp, std::exp(-4.0), 1e-10));
    CHECK(close_rel(2 * d.qq, std::exp(4.0), 1e-10));
    CHECK(close_abs(d.qp, 0.0, 1e-12));
  }
  SUBCASE("covariance determinant is vacuum-level (PSD kernel)") {
    for (double th : {0.4, 2.1, 4.4}) {
      const OpticalDensities d = drive_densities({1.8, th, 0});
      CHECK(close_rel(d.qq * d.pp - d.qp * d.qp, 0.25, 1e-9));
    }
  }
}

TEST_CASE("parameter validation") {
  SystemParams p = paper_params();
  p.atom_count = -1;
  CHECK_THROWS_AS(p.validate(), std::domain_error);
  p = paper_params();
  p.bec_temperature_k = -1e-9;
  CHECK_THROWS_AS(p.validate(), std::domain_error);
  CHECK_NOTHROW(paper_params().validate());
}

TEST_CASE("small-g shift is diagnostic only") {
  // the text's approximation does not reproduce the exact shifted peaks
  CHECK(collision_shift_approx_hz(14.0) != doctest::Approx(750.4 - 694.9));
}
