#include "ringsense/grid.hpp"

#include <algorithm>
#include <cmath>

namespace ringsense {

std::vector<double> frequency_grid(const std::vector<double>& peaks,
                                   double gamma, const GridSpec& spec) {
  const double lo = spec.span_low * *std::min_element(peaks.begin(), peaks.end());
  const double hi = spec.span_high * *std::max_element(peaks.begin(), peaks.end());
  std::vector<double> g;
  g.reserve(spec.points + peaks.size() * 2 * spec.refine_factor * 16);
  const double base_step = (hi - lo) / (spec.points - 1);
  for (int i = 0; i < spec.points; ++i) g.push_back(lo + base_step * i);
  const double half = spec.peak_halfwidth_in_gamma * gamma;
  const double fine = base_step / spec.refine_factor;
  for (double pk : peaks) {
    const int n = static_cast<int>(2 * half / fine) + 1;
    for (int i = 0; i <= n; ++i) {
      const double w = pk - half + i * fine;
      if (w > 0) g.push_back(w);
    }
  }
  std::sort(g.begin(), g.end());
  g.erase(std::unique(g.begin(), g.end(),
                      [](double a, double b) {
                        return std::abs(a - b) < 1e-12 * std::max(1.0, a);
                      }),
          g.end());
  return g;
}

std::vector<double> default_grid(const DerivedFrequencies& d,
                                 const GridSpec& spec) {
  return frequency_grid({d.Omega_d, d.Omega_c}, d.gamma, spec);
}

std::vector<double> bae_default_grid(const DerivedFrequencies& d,
                                     GridSpec spec) {
  spec.span_low = 0.05;
  spec.span_high = 1.95;
  return frequency_grid({d.Omega}, d.gamma, spec);
}

}  // namespace ringsense
