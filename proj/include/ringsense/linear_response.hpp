#pragma once

#include <Eigen/Dense>
#include <complex>
#include <vector>

#include "ringsense/noise.hpp"
#include "ringsense/params.hpp"
#include "ringsense/steady_state.hpp"

namespace ringsense {

// Output-quadrature coefficients: K_out = A K(Q_in) + B K(P_in) + C eps_c +
// D eps_d for K in {P, Q}.
struct QuadCoeffs {
  cplx a_p, b_p, c_p, d_p;
  cplx a_q, b_q, c_q, d_q;
};

// How the direct-feedthrough entries A_Q, B_P absorb the input-output
// relation. Standard subtracts the incident field (sqrt(k) X' - 1);
// PaperVerbatim multiplies by (sqrt(k) - 1) literally, kept only so the two
// conventions can be compared.
enum class IoConvention { Standard, PaperVerbatim };

QuadCoeffs output_coefficients(double omega, const DerivedFrequencies& d,
                               const SteadyState& ss,
                               IoConvention convention = IoConvention::Standard);

// 4x4 frequency-domain response F with F du = D u_in,
// du = [dQ, dP, dX_c, dX_d]. Throws on a numerically singular matrix.
Eigen::Matrix4cd response_matrix(double omega, const DerivedFrequencies& d,
                                 const SteadyState& ss);

// Same output coefficients by direct numeric inversion of the response
// matrix; the independent route the closed forms are checked against.
QuadCoeffs output_coefficients_via_matrix(double omega,
                                          const DerivedFrequencies& d,
                                          const SteadyState& ss);

// S^phi(w) = cos^2 s_qq + sin^2 s_pp + sin cos s_cross.
struct PhiQuadratic {
  double s_qq = 0, s_pp = 0, s_cross = 0;
  double at(double phi) const;
  PhiQuadratic& operator+=(const PhiQuadratic& o);
  PhiQuadratic& operator-=(const PhiQuadratic& o);
  PhiQuadratic& operator*=(double f);
};

// Homodyne spectral density at one frequency, decomposed by noise channel
// and kept as quadratic forms in the detection angle. shot/backaction carry
// vacuum weights; excess() is the squeeze-only residual (identically zero
// for vacuum input).
struct SpectrumStructure {
  PhiQuadratic total, shot, backaction, thermal;
  PhiQuadratic excess() const;
};

SpectrumStructure spectrum_structure(double omega, const SystemParams& p,
                                     const DerivedFrequencies& d,
                                     const SteadyState& ss,
                                     const SqueezeParams& sq);

struct SpectrumSample {
  double total = 0, shot = 0, backaction = 0, thermal = 0, excess = 0;
};

SpectrumSample sample_at(const SpectrumStructure& st, double phi);

SpectrumSample spectral_density(double omega, double phi,
                                const SystemParams& p,
                                const DerivedFrequencies& d,
                                const SteadyState& ss, const SqueezeParams& sq);

struct HomodyneAngle {
  double angle = 0;          // in [0, pi)
  bool indeterminate = false;  // S_QQ = S_PP and S_QP + S_PQ = 0
};

// Detection angle maximizing S^phi; pi/2 for unsqueezed input.
HomodyneAngle optimal_homodyne_angle(double omega, const SystemParams& p,
                                     const DerivedFrequencies& d,
                                     const SteadyState& ss,
                                     const SqueezeParams& sq);

enum class Execution { Serial, Parallel };

// Grid evaluation; the parallel path is OpenMP over frequencies and is
// bit-identical to the serial reference.
std::vector<SpectrumSample> spectrum_grid(const std::vector<double>& omegas,
                                          double phi, const SystemParams& p,
                                          const DerivedFrequencies& d,
                                          const SteadyState& ss,
                                          const SqueezeParams& sq,
                                          Execution exec = Execution::Parallel);

std::vector<SpectrumStructure> spectrum_structure_grid(
    const std::vector<double>& omegas, const SystemParams& p,
    const DerivedFrequencies& d, const SteadyState& ss,
    const SqueezeParams& sq, Execution exec = Execution::Parallel);

}  // namespace ringsense
