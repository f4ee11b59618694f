#pragma once

#include <vector>

#include "ringsense/bae.hpp"
#include "ringsense/grid.hpp"
#include "ringsense/linear_response.hpp"
#include "ringsense/noise.hpp"
#include "ringsense/params.hpp"

namespace ringsense {

enum class Scheme { MonoSqueezed, Bae };

// Detection-angle policy for zeta curves. Auto keeps pi/2 for vacuum input
// and optimizes the angle for squeezed input in the monochromatic scheme;
// the BAE scheme always detects at pi/2.
enum class PhiPolicy { Auto, FixedHalfPi, Explicit };

struct SensitivityOptions {
  PhiPolicy policy = PhiPolicy::Auto;
  double phi = 1.57079632679489661923;  // used when policy == Explicit
  double winding_step = 1e-3;           // finite-difference step in L_p
  bool with_collisions = true;          // monochromatic scheme only
  GridSpec grid{};
};

struct SensitivityCurve {
  std::vector<double> omega;  // rad/s
  std::vector<double> zeta;   // angular momentum per root bandwidth
  double omega_opt = 0;
  double zeta_opt = 0;
  std::vector<double> local_minima;  // all interior zeta minima (rad/s)
  bool phi_optimized = false;
  double phi = 0;  // detection angle when not per-omega optimized
};

SensitivityCurve sensitivity_curve(Scheme scheme, const SystemParams& p,
                                   const SqueezeParams& sq,
                                   const SensitivityOptions& opts = {});

// zeta_opt(vacuum) / zeta_opt(sq) on identical grids; > 1 means squeezing
// helps.
double enhancement_factor(Scheme scheme, const SystemParams& p,
                          const SqueezeParams& sq,
                          const SensitivityOptions& opts = {});

enum class PointStatus { Ok, BistableSkipped, Failed };

// Measurement-referred budget: every stored value is S(omega_opt) * t_meas
// (units 1/Hz), which is what makes the shot/backaction crossing and the
// SQL comparisons power-resolved. s_min and s_sql always reference the
// monochromatic unsqueezed scheme at T_cd and T = 0.
struct NoiseBudgetCurve {
  std::vector<double> power_w;
  std::vector<double> total, shot, backaction, thermal, excess;
  std::vector<double> omega_opt;
  std::vector<PointStatus> status;
  double s_min = 0;
  double s_sql = 0;
};

NoiseBudgetCurve noise_budget_vs_power(Scheme scheme, const SystemParams& p,
                                       const SqueezeParams& sq,
                                       const std::vector<double>& powers_w,
                                       const SensitivityOptions& opts = {});

// Fixed-angle (pi/2) sensitivity comparison of the four drive
// configurations against the plain monochromatic drive, per power.
struct ComparisonReport {
  std::vector<double> power_w;
  std::vector<double> zeta_plain, zeta_squeezed, zeta_bae, zeta_bae_squeezed;
  std::vector<double> db_squeezed, db_bae, db_bae_squeezed;  // 10 log10
};

ComparisonReport comparison_suite(const SystemParams& p,
                                  const std::vector<double>& powers_w,
                                  const SqueezeParams& sq = {2.0,
                                                             3.14159265358979323846,
                                                             0.0});

}  // namespace ringsense
