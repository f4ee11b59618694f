#include "ringsense/sensitivity.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "ringsense/constants.hpp"
#include "ringsense/steady_state.hpp"

namespace ringsense {

namespace {

constexpr double kHalfPi = 1.57079632679489661923;
constexpr double kInf = std::numeric_limits<double>::infinity();

// Spectrum structures at (L_p, L_p +- h) with the cavity lock held fixed,
// plus the scheme's measurement time; enough to evaluate zeta at any
// (omega, phi).
class ZetaModel {
 public:
  ZetaModel(Scheme scheme, const SystemParams& p, const SqueezeParams& sq,
            const SensitivityOptions& opts)
      : scheme_(scheme), p_(p), sq_(sq), h_(opts.winding_step) {
    if (scheme == Scheme::MonoSqueezed) {
      d0_ = derive_locked(p, opts.with_collisions);
      ss0_ = solve_steady_state(p, d0_);
      for (int s : {+1, -1}) {
        SystemParams q = p;
        q.winding_number += s * h_;
        DerivedFrequencies dq = derive(q, opts.with_collisions);
        dq.Delta = d0_.Delta;  // lock does not track the winding number
        (s > 0 ? dp_ : dm_) = dq;
        (s > 0 ? ssp_ : ssm_) = solve_steady_state(q, dq);
      }
      t_const_ =
          d0_.kappa / (8.0 * ss0_.amplitude * ss0_.amplitude * d0_.G * d0_.G);
    } else {
      d0_ = derive(p, false);
      BaeDrive drive;
      drive.power_plus_w = p.input_power_w;
      drive.power_minus_w = p.input_power_w;
      bss0_ = bae_steady_state(p, d0_, drive);
      BaeDrive locked = drive;
      locked.at_resonance = false;
      locked.delta = bss0_.delta;  // tones stay where the nominal lock put them
      for (int s : {+1, -1}) {
        SystemParams q = p;
        q.winding_number += s * h_;
        DerivedFrequencies dq = derive(q, false);
        (s > 0 ? dp_ : dm_) = dq;
        (s > 0 ? bssp_ : bssm_) = bae_steady_state(q, dq, locked);
      }
    }
  }

  const DerivedFrequencies& nominal() const { return d0_; }
  const SteadyState& steady() const { return ss0_; }
  const BaeSteadyState& bae_steady() const { return bss0_; }

  struct Triple {
    SpectrumStructure s0, sp, sm;
  };

  Triple structures(double omega) const {
    if (scheme_ == Scheme::MonoSqueezed)
      return {spectrum_structure(omega, p_, d0_, ss0_, sq_),
              spectrum_structure(omega, p_, dp_, ssp_, sq_),
              spectrum_structure(omega, p_, dm_, ssm_, sq_)};
    return {bae_spectrum_structure(omega, p_, d0_, bss0_, sq_),
            bae_spectrum_structure(omega, p_, dp_, bssp_, sq_),
            bae_spectrum_structure(omega, p_, dm_, bssm_, sq_)};
  }

  double meas_time(double omega) const {
    return scheme_ == Scheme::MonoSqueezed
               ? t_const_
               : bae_measurement_time(omega, d0_, bss0_);
  }

  double zeta_at(const Triple& tr, double omega, double phi) const {
    const double s = tr.s0.total.at(phi);
    PhiQuadratic diff = tr.sp.total;
    diff -= tr.sm.total;
    const double slope = diff.at(phi) / (2.0 * h_ * hbar);
    if (slope == 0.0) return kInf;
    return s / std::abs(slope) * std::sqrt(meas_time(omega));
  }

  double zeta_min_phi(const Triple& tr, double omega) const {
    double best = kInf;
    double best_phi = kHalfPi;
    constexpr int n = 96;
    for (int i = 1; i < n; ++i) {
      const double phi = 3.14159265358979323846 * i / n;
      const double z = zeta_at(tr, omega, phi);
      if (z < best) {
        best = z;
        best_phi = phi;
      }
    }
    // golden polish around the scan minimum
    const double step = 3.14159265358979323846 / n;
    double a = best_phi - step, b = best_phi + step;
    const double gr = 0.61803398874989484820;
    double x1 = b - gr * (b - a), x2 = a + gr * (b - a);
    double f1 = zeta_at(tr, omega, x1), f2 = zeta_at(tr, omega, x2);
    for (int it = 0; it < 40; ++it) {
      if (f1 < f2) {
        b = x2;
        x2 = x1;
        f2 = f1;
        x1 = b - gr * (b - a);
        f1 = zeta_at(tr, omega, x1);
      } else {
        a = x1;
        x1 = x2;
        f1 = f2;
        x2 = a + gr * (b - a);
        f2 = zeta_at(tr, omega, x2);
      }
    }
    return std::min(best, std::min(f1, f2));
  }

  Scheme scheme() const { return scheme_; }

 private:
  Scheme scheme_;
  SystemParams p_;
  SqueezeParams sq_;
  double h_;
  DerivedFrequencies d0_, dp_, dm_;
  SteadyState ss0_, ssp_, ssm_;
  BaeSteadyState bss0_, bssp_, bssm_;
  double t_const_ = 0;
};

struct PhiResolved {
  bool optimized;
  double phi;
};

PhiResolved resolve_phi(Scheme scheme, const SqueezeParams& sq,
                        const SensitivityOptions& opts) {
  if (opts.policy == PhiPolicy::Explicit) return {false, opts.phi};
  if (opts.policy == PhiPolicy::FixedHalfPi) return {false, kHalfPi};
  if (scheme == Scheme::Bae) return {false, kHalfPi};
  return {sq.squeezed(), kHalfPi};
}

double golden_omega(const ZetaModel& model, const PhiResolved& pr, double a,
                    double b) {
  const double gr = 0.61803398874989484820;
  auto eval = [&](double w) {
    const auto tr = model.structures(w);
    return pr.optimized ? model.zeta_min_phi(tr, w)
                        : model.zeta_at(tr, w, pr.phi);
  };
  double x1 = b - gr * (b - a), x2 = a + gr * (b - a);
  double f1 = eval(x1), f2 = eval(x2);
  while ((b - a) > 1e-6 * std::abs(a + b)) {
    if (f1 < f2) {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - gr * (b - a);
      f1 = eval(x1);
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + gr * (b - a);
      f2 = eval(x2);
    }
  }
  return 0.5 * (a + b);
}

std::vector<double> scheme_grid(Scheme scheme, const DerivedFrequencies& d,
                                const GridSpec& spec) {
  return scheme == Scheme::MonoSqueezed ? default_grid(d, spec)
                                        : bae_default_grid(d, spec);
}

}  // namespace

SensitivityCurve sensitivity_curve(Scheme scheme, const SystemParams& p,
                                   const SqueezeParams& sq,
                                   const SensitivityOptions& opts) {
  const ZetaModel model(scheme, p, sq, opts);
  const PhiResolved pr = resolve_phi(scheme, sq, opts);
  SensitivityCurve out;
  out.omega = scheme_grid(scheme, model.nominal(), opts.grid);
  out.zeta.resize(out.omega.size());
  out.phi_optimized = pr.optimized;
  out.phi = pr.phi;

  const auto n = static_cast<long>(out.omega.size());
#ifdef _OPENMP
#pragma omp parallel for schedule(static)
#endif
  for (long i = 0; i < n; ++i) {
    const auto tr = model.structures(out.omega[i]);
    out.zeta[i] = pr.optimized ? model.zeta_min_phi(tr, out.omega[i])
                               : model.zeta_at(tr, out.omega[i], pr.phi);
  }

  std::size_t imin = 0;
  double best = kInf;
  for (std::size_t i = 0; i < out.zeta.size(); ++i) {
    if (out.zeta[i] < best) {
      best = out.zeta[i];
      imin = i;
    }
    if (i > 0 && i + 1 < out.zeta.size() && std::isfinite(out.zeta[i]) &&
        out.zeta[i] < out.zeta[i - 1] && out.zeta[i] < out.zeta[i + 1])
      out.local_minima.push_back(out.omega[i]);
  }
  if (!std::isfinite(best))
    throw std::runtime_error("sensitivity_curve: no finite zeta on the grid");
  const double lo = imin > 0 ? out.omega[imin - 1] : out.omega[imin];
  const double hi =
      imin + 1 < out.omega.size() ? out.omega[imin + 1] : out.omega[imin];
  out.omega_opt = golden_omega(model, pr, lo, hi);
  {
    const auto tr = model.structures(out.omega_opt);
    out.zeta_opt = pr.optimized ? model.zeta_min_phi(tr, out.omega_opt)
                                : model.zeta_at(tr, out.omega_opt, pr.phi);
    if (out.zeta_opt > best) {  // golden landed on a worse bracket edge
      out.zeta_opt = best;
      out.omega_opt = out.omega[imin];
    }
  }
  return out;
}

double enhancement_factor(Scheme scheme, const SystemParams& p,
                          const SqueezeParams& sq,
                          const SensitivityOptions& opts) {
  const SensitivityCurve ref =
      sensitivity_curve(scheme, p, SqueezeParams{}, opts);
  const SensitivityCurve squeezed = sensitivity_curve(scheme, p, sq, opts);
  return ref.zeta_opt / squeezed.zeta_opt;
}

namespace {

struct BudgetPoint {
  PointStatus status = PointStatus::Ok;
  double total = 0, shot = 0, backaction = 0, thermal = 0, excess = 0;
  double omega_opt = 0;
};

BudgetPoint budget_point(Scheme scheme, const SystemParams& p,
                         const SqueezeParams& sq,
                         const SensitivityOptions& opts) {
  BudgetPoint bp;
  try {
    if (scheme == Scheme::MonoSqueezed) {
      const DerivedFrequencies d = derive_locked(p, opts.with_collisions);
      const SteadyState ss = solve_steady_state(p, d);
      if (!ss.monostable()) {
        bp.status = PointStatus::BistableSkipped;
        return bp;
      }
    } else {
      BaeDrive drive{p.input_power_w, p.input_power_w, true, 0.0};
      const DerivedFrequencies d = derive(p, false);
      if (!bae_steady_state(p, d, drive).monostable) {
        bp.status = PointStatus::BistableSkipped;
        return bp;
      }
    }
    SensitivityOptions fixed = opts;
    fixed.policy = PhiPolicy::FixedHalfPi;  // budgets live in the P quadrature
    const SensitivityCurve curve = sensitivity_curve(scheme, p, sq, fixed);
    bp.omega_opt = curve.omega_opt;
    SpectrumSample s;
    double tmeas;
    if (scheme == Scheme::MonoSqueezed) {
      const DerivedFrequencies d = derive_locked(p, opts.with_collisions);
      const SteadyState ss = solve_steady_state(p, d);
      s = spectral_density(curve.omega_opt, kHalfPi, p, d, ss, sq);
      tmeas = d.kappa / (8.0 * ss.amplitude * ss.amplitude * d.G * d.G);
    } else {
      const DerivedFrequencies d = derive(p, false);
      BaeDrive drive{p.input_power_w, p.input_power_w, true, 0.0};
      const BaeSteadyState bss = bae_steady_state(p, d, drive);
      s = bae_spectral_density(curve.omega_opt, kHalfPi, p, d, bss, sq);
      tmeas = bae_measurement_time(curve.omega_opt, d, bss);
    }
    bp.total = s.total * tmeas;
    bp.shot = s.shot * tmeas;
    bp.backaction = s.backaction * tmeas;
    bp.thermal = s.thermal * tmeas;
    bp.excess = s.excess * tmeas;
  } catch (const std::exception&) {
    bp.status = PointStatus::Failed;
  }
  return bp;
}

}  // namespace

NoiseBudgetCurve noise_budget_vs_power(Scheme scheme, const SystemParams& p,
                                       const SqueezeParams& sq,
                                       const std::vector<double>& powers_w,
                                       const SensitivityOptions& opts) {
  NoiseBudgetCurve out;
  out.power_w = powers_w;
  const std::size_t n = powers_w.size();
  out.total.resize(n);
  out.shot.resize(n);
  out.backaction.resize(n);
  out.thermal.resize(n);
  out.excess.resize(n);
  out.omega_opt.resize(n);
  out.status.resize(n);
  double s_min = kInf, s_sql = kInf;
  for (std::size_t i = 0; i < n; ++i) {
    SystemParams q = p;
    q.input_power_w = powers_w[i];
    const BudgetPoint bp = budget_point(scheme, q, sq, opts);
    out.status[i] = bp.status;
    out.total[i] = bp.total;
    out.shot[i] = bp.shot;
    out.backaction[i] = bp.backaction;
    out.thermal[i] = bp.thermal;
    out.excess[i] = bp.excess;
    out.omega_opt[i] = bp.omega_opt;
    // references: monochromatic unsqueezed at T_cd and at T = 0
    SystemParams ref = q;
    const BudgetPoint mp =
        budget_point(Scheme::MonoSqueezed, ref, SqueezeParams{}, opts);
    if (mp.status == PointStatus::Ok) s_min = std::min(s_min, mp.total);
    ref.bec_temperature_k = 0.0;
    const BudgetPoint zp =
        budget_point(Scheme::MonoSqueezed, ref, SqueezeParams{}, opts);
    if (zp.status == PointStatus::Ok) s_sql = std::min(s_sql, zp.total);
  }
  out.s_min = s_min;
  out.s_sql = s_sql;
  return out;
}

ComparisonReport comparison_suite(const SystemParams& p,
                                  const std::vector<double>& powers_w,
                                  const SqueezeParams& sq) {
  ComparisonReport rep;
  rep.power_w = powers_w;
  SensitivityOptions opts;
  opts.policy = PhiPolicy::FixedHalfPi;
  opts.with_collisions = false;
  for (double pw : powers_w) {
    SystemParams q = p;
    q.input_power_w = pw;
    const double plain =
        sensitivity_curve(Scheme::MonoSqueezed, q, SqueezeParams{}, opts)
            .zeta_opt;
    const double squeezed =
        sensitivity_curve(Scheme::MonoSqueezed, q, sq, opts).zeta_opt;
    const double bae =
        sensitivity_curve(Scheme::Bae, q, SqueezeParams{}, opts).zeta_opt;
    const double bae_sq = sensitivity_curve(Scheme::Bae, q, sq, opts).zeta_opt;
    rep.zeta_plain.push_back(plain);
    rep.zeta_squeezed.push_back(squeezed);
    rep.zeta_bae.push_back(bae);
    rep.zeta_bae_squeezed.push_back(bae_sq);
    rep.db_squeezed.push_back(10.0 * std::log10(plain / squeezed));
    rep.db_bae.push_back(10.0 * std::log10(plain / bae));
    rep.db_bae_squeezed.push_back(10.0 * std::log10(plain / bae_sq));
  }
  return rep;
}

}  // namespace ringsense
