#pragma once

// Transition detection and phase labeling along 1D slices of the (U, V)
// plane: a jump in E_p between neighboring grid points marks a first-order
// transition, an interior local minimum a second-order one. A discontinuity
// suppresses minimum detection within one grid step so merged signals are
// not double counted.

#include <map>
#include <string>
#include <vector>

namespace ehmep {

struct ScanThresholds {
  double jump_abs = 0.02;
  double jump_rel = 5.0;  // multiple of the median neighbor difference
};

enum class TransitionKind { discontinuity, local_minimum };

std::string to_string(TransitionKind k);

struct TransitionEvent {
  std::string slice_id;
  TransitionKind kind = TransitionKind::discontinuity;
  double location = 0.0;     // coupling value
  double uncertainty = 0.0;  // half the local grid step
  double magnitude = 0.0;    // jump size, or discrete curvature for minima
  std::map<std::string, double> supporting;  // signal deltas across the event
};

struct SlicePoint {
  double coupling = 0.0;
  double ep = 0.0;
  bool converged = true;
  std::map<std::string, double> signals;  // order-parameter values, optional
};

// `points` must be sorted with a uniform step and hold at least 5 entries.
std::vector<TransitionEvent> detect_transitions(
    const std::string& slice_id, const std::vector<SlicePoint>& points,
    const ScanThresholds& thresholds = {});

struct SegmentLabel {
  double from = 0.0, to = 0.0;
  std::string phase;  // CDW | SDW | PS | SS | TS | unresolved
  std::map<std::string, double> signals;
};

struct PhaseReport {
  std::string slice_id;
  std::vector<TransitionEvent> events;
  std::vector<SegmentLabel> segments;
  std::vector<std::string> caveats;

  std::string text() const;
};

// Labels the segments between events from the order-parameter signatures at
// the segment's representative points; ambiguous segments get "unresolved".
PhaseReport classify_and_report(const std::string& slice_id,
                                const std::vector<SlicePoint>& points,
                                const std::vector<TransitionEvent>& events);

// The signature heuristic on one point's signals, exposed for tests.
std::string classify_signals(const std::map<std::string, double>& signals);

}  // namespace ehmep
