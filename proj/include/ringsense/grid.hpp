#pragma once

#include <vector>

#include "ringsense/params.hpp"

namespace ringsense {

struct GridSpec {
  int points = 4000;        // base linear grid
  int refine_factor = 16;   // extra density inside the peak windows
  double peak_halfwidth_in_gamma = 5.0;
  double span_low = 0.5;    // in units of the lowest predicted peak
  double span_high = 1.2;   // in units of the highest predicted peak
};

// Dense linear grid spanning [span_low * min(peaks), span_high * max(peaks)]
// with local refinement around each predicted peak; strictly increasing,
// deduplicated. Angular frequencies (rad/s).
std::vector<double> frequency_grid(const std::vector<double>& peaks,
                                   double gamma, const GridSpec& spec = {});

// Default grid for the monochromatic scheme: peaks at Omega_c, Omega_d.
std::vector<double> default_grid(const DerivedFrequencies& d,
                                 const GridSpec& spec = {});

// Default grid for the BAE scheme: single peak at Omega, wider rel. span.
std::vector<double> bae_default_grid(const DerivedFrequencies& d,
                                     GridSpec spec = {});

}  // namespace ringsense
