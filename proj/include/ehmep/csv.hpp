#pragma once

// Plot-ready CSV exports (gnuplot-compatible column layout, decimal point,
// 12 significant digits). The surface/slice schema is pinned by a golden
// test; rendering is left to the user.

#include <string>
#include <vector>

#include "ehmep/archive.hpp"
#include "ehmep/scaling.hpp"
#include "ehmep/scan.hpp"

namespace ehmep {

inline constexpr const char* kSurfaceHeader = "U,V,L,ep,energy,converged";
inline constexpr const char* kEventsHeader =
    "slice,kind,location,uncertainty,magnitude";
inline constexpr const char* kFitHeader =
    "U,V,ep_inf,a,stderr_ep_inf,stderr_a,constant,residual_max,n";

std::string surface_csv(const std::vector<PointRecord>& records);
// Slice rows sorted by the running coupling.
std::string slice_csv(std::vector<PointRecord> records);
std::string events_csv(const std::string& slice_id,
                       const std::vector<TransitionEvent>& events);
std::string spectrum_csv(const std::vector<double>& k,
                         const std::vector<double>& lambda_up,
                         const std::vector<double>& lambda_down);
std::string quadrature_csv(const std::vector<double>& x_delta);
std::string scaling_series_csv(const ScalingSeries& series);
std::string fit_csv(double U, double V, const ScalingFit& fit);

void write_file(const std::string& path, const std::string& content);

}  // namespace ehmep
