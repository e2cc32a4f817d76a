#include "ehmep/scan.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace ehmep {

std::string to_string(TransitionKind k) {
  return k == TransitionKind::discontinuity ? "discontinuity" : "minimum";
}

namespace {

double uniform_step(const std::vector<SlicePoint>& pts) {
  const double h = pts[1].coupling - pts[0].coupling;
  if (!(h > 0)) throw std::invalid_argument("slice must be strictly increasing");
  for (std::size_t i = 1; i + 1 < pts.size(); ++i) {
    const double hi = pts[i + 1].coupling - pts[i].coupling;
    if (std::abs(hi - h) > 1e-6 * std::max(1.0, std::abs(h)))
      throw std::invalid_argument("slice grid is not uniform");
  }
  return h;
}

std::map<std::string, double> signal_deltas(const SlicePoint& left,
                                            const SlicePoint& right) {
  std::map<std::string, double> d;
  for (const auto& [name, lv] : left.signals) {
    auto it = right.signals.find(name);
    if (it != right.signals.end()) d[name] = it->second - lv;
  }
  return d;
}

}  // namespace

std::vector<TransitionEvent> detect_transitions(const std::string& slice_id,
                                                const std::vector<SlicePoint>& pts,
                                                const ScanThresholds& th) {
  if (pts.size() < 5)
    throw std::invalid_argument("transition detection needs at least 5 points");
  const double h = uniform_step(pts);

  std::vector<double> jumps;
  for (std::size_t i = 0; i + 1 < pts.size(); ++i)
    jumps.push_back(std::abs(pts[i + 1].ep - pts[i].ep));
  std::vector<double> sorted_jumps = jumps;
  std::sort(sorted_jumps.begin(), sorted_jumps.end());
  const double median = sorted_jumps[sorted_jumps.size() / 2];
  const double jump_threshold = std::max(th.jump_abs, th.jump_rel * median);

  std::vector<TransitionEvent> events;
  std::vector<double> jump_locations;
  for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
    if (jumps[i] > jump_threshold) {
      TransitionEvent e;
      e.slice_id = slice_id;
      e.kind = TransitionKind::discontinuity;
      e.location = 0.5 * (pts[i].coupling + pts[i + 1].coupling);
      e.uncertainty = 0.5 * h;
      e.magnitude = jumps[i];
      e.supporting = signal_deltas(pts[i], pts[i + 1]);
      events.push_back(std::move(e));
      jump_locations.push_back(events.back().location);
    }
  }

  for (std::size_t i = 1; i + 1 < pts.size(); ++i) {
    const double curvature =
        (pts[i - 1].ep - 2.0 * pts[i].ep + pts[i + 1].ep) / (h * h);
    const bool strict_min =
        pts[i].ep < pts[i - 1].ep && pts[i].ep < pts[i + 1].ep;
    if (!strict_min || !(curvature > 0)) continue;
    // A discontinuity within one grid step swallows the minimum (the two
    // signals merge at strong first-order lines).
    bool suppressed = false;
    for (double loc : jump_locations)
      if (std::abs(pts[i].coupling - loc) <= h * (1.0 + 1e-9)) suppressed = true;
    if (suppressed) continue;
    TransitionEvent e;
    e.slice_id = slice_id;
    e.kind = TransitionKind::local_minimum;
    e.location = pts[i].coupling;
    e.uncertainty = 0.5 * h;
    e.magnitude = curvature;
    e.supporting = signal_deltas(pts[i - 1], pts[i + 1]);
    events.push_back(std::move(e));
  }

  std::sort(events.begin(), events.end(),
            [](const TransitionEvent& a, const TransitionEvent& b) {
              return a.location < b.location;
            });
  return events;
}

std::string classify_signals(const std::map<std::string, double>& s) {
  auto get = [&](const char* k) {
    auto it = s.find(k);
    return it == s.end() ? 0.0 : it->second;
  };
  const double cdw_pi = get("cdw_pi");
  const double sdw_pi = get("sdw_pi");
  const double cdw_kmin = get("cdw_kmin");
  const bool has_pairing = s.count("pairing_singlet") && s.count("pairing_triplet");
  const double ss = get("pairing_singlet");
  const double ts = get("pairing_triplet");

  // Phase separation piles charge into one region: the density structure
  // factor peaks at the smallest momentum instead of pi.
  if (cdw_kmin > 1.5 * cdw_pi && cdw_kmin > 0.5) return "PS";
  if (cdw_pi > 2.0 * sdw_pi && cdw_pi > 1.0) return "CDW";
  if (sdw_pi > 1.2 * cdw_pi && sdw_pi > 0.25) return "SDW";
  if (has_pairing) {
    if (ss <= 0 && ts <= 0) return "unresolved";
    return ss > ts ? "SS" : "TS";
  }
  return "unresolved";
}

PhaseReport classify_and_report(const std::string& slice_id,
                                const std::vector<SlicePoint>& points,
                                const std::vector<TransitionEvent>& events) {
  PhaseReport rep;
  rep.slice_id = slice_id;
  rep.events = events;

  std::vector<double> cuts;
  cuts.push_back(points.front().coupling);
  for (const auto& e : events) cuts.push_back(e.location);
  cuts.push_back(points.back().coupling);

  for (std::size_t seg = 0; seg + 1 < cuts.size(); ++seg) {
    SegmentLabel lab;
    lab.from = cuts[seg];
    lab.to = cuts[seg + 1];
    // Representative: the point with signals nearest the segment midpoint.
    const double mid = 0.5 * (lab.from + lab.to);
    const SlicePoint* best = nullptr;
    for (const auto& p : points) {
      if (p.coupling < lab.from - 1e-12 || p.coupling > lab.to + 1e-12) continue;
      if (p.signals.empty()) continue;
      if (!best || std::abs(p.coupling - mid) < std::abs(best->coupling - mid))
        best = &p;
    }
    if (best) {
      lab.signals = best->signals;
      lab.phase = classify_signals(best->signals);
    } else {
      lab.phase = "unresolved";
    }
    rep.segments.push_back(std::move(lab));
  }

  rep.caveats.push_back(
      "SDW-BOW boundary: not detectable by the particle-entanglement signal");
  rep.caveats.push_back(
      "TS-SS boundary: not detectable by the particle-entanglement signal");
  return rep;
}

std::string PhaseReport::text() const {
  std::ostringstream o;
  o << "slice " << slice_id << "\n";
  for (const auto& e : events)
    o << "  event: " << to_string(e.kind) << " at " << e.location << " +- "
      << e.uncertainty << " (magnitude " << e.magnitude << ")\n";
  for (const auto& s : segments)
    o << "  segment [" << s.from << ", " << s.to << "]: " << s.phase << "\n";
  for (const auto& c : caveats) o << "  note: " << c << "\n";
  return o.str();
}

}  // namespace ehmep
