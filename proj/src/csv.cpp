#include "ehmep/csv.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace ehmep {

namespace {
std::string num(double v) { return format_double_12(v); }
}  // namespace

std::string surface_csv(const std::vector<PointRecord>& records) {
  std::ostringstream o;
  o << kSurfaceHeader << "\n";
  for (const auto& r : records)
    o << num(r.U) << "," << num(r.V) << "," << r.L << "," << num(r.ep) << ","
      << num(r.energy) << "," << (r.converged ? 1 : 0) << "\n";
  return o.str();
}

std::string slice_csv(std::vector<PointRecord> records) {
  std::sort(records.begin(), records.end(),
            [](const PointRecord& a, const PointRecord& b) {
              return a.coupling < b.coupling;
            });
  return surface_csv(records);
}

std::string events_csv(const std::string& slice_id,
                       const std::vector<TransitionEvent>& events) {
  std::ostringstream o;
  o << kEventsHeader << "\n";
  for (const auto& e : events)
    o << slice_id << "," << to_string(e.kind) << "," << num(e.location) << ","
      << num(e.uncertainty) << "," << num(e.magnitude) << "\n";
  return o.str();
}

std::string spectrum_csv(const std::vector<double>& k,
                         const std::vector<double>& lambda_up,
                         const std::vector<double>& lambda_down) {
  if (k.size() != lambda_up.size() || k.size() != lambda_down.size())
    throw std::invalid_argument("spectrum columns differ in length");
  std::ostringstream o;
  o << "k,lambda_up,lambda_down\n";
  for (std::size_t i = 0; i < k.size(); ++i)
    o << num(k[i]) << "," << num(lambda_up[i]) << "," << num(lambda_down[i])
      << "\n";
  return o.str();
}

std::string quadrature_csv(const std::vector<double>& x_delta) {
  std::ostringstream o;
  o << "delta,x_delta\n";
  for (std::size_t d = 0; d < x_delta.size(); ++d)
    o << d << "," << num(x_delta[d]) << "\n";
  return o.str();
}

std::string scaling_series_csv(const ScalingSeries& series) {
  std::ostringstream o;
  o << "L,inv_L,ep,truncation_error\n";
  std::vector<ScalingSample> pts = series.samples;
  std::sort(pts.begin(), pts.end(),
            [](const ScalingSample& a, const ScalingSample& b) { return a.L < b.L; });
  for (const auto& s : pts)
    o << s.L << "," << num(1.0 / s.L) << "," << num(s.ep) << "," << num(s.sigma)
      << "\n";
  return o.str();
}

std::string fit_csv(double U, double V, const ScalingFit& fit) {
  std::ostringstream o;
  o << kFitHeader << "\n";
  o << num(U) << "," << num(V) << "," << num(fit.b) << "," << num(fit.a) << ","
    << num(fit.stderr_b) << "," << num(fit.stderr_a) << ","
    << (fit.constant ? 1 : 0) << "," << num(fit.residual_max) << "," << fit.n
    << "\n";
  return o.str();
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write '" + path + "'");
  out << content;
}

}  // namespace ehmep
