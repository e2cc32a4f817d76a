#pragma once

// Run manifests: an INI-style key/value document with sections for model,
// solver, scan geometry, detection thresholds, and output. Unknown keys are
// fatal so typos cannot silently change a run.

#include <cstdint>
#include <string>
#include <vector>

#include "ehmep/model.hpp"

namespace ehmep {

enum class Command { solve, slice, scan, scale, detect };
enum class SolverType { automatic, ed, dmrg };

std::string to_string(Command c);
std::string to_string(SolverType s);

struct SliceSpec {
  char vary = 'V';  // which coupling runs
  double from = 0.0, to = 0.0, step = 0.0;

  int count() const;
  double value(int i) const;
  friend bool operator==(const SliceSpec&, const SliceSpec&) = default;
};

struct GridSpec {
  double u_from = 0.0, u_to = 0.0, u_step = 1.0;
  double v_from = 0.0, v_to = 0.0, v_step = 1.0;

  int u_count() const;
  int v_count() const;
  friend bool operator==(const GridSpec&, const GridSpec&) = default;
};

struct DetectSpec {
  double jump_abs = 0.02;
  double jump_rel = 5.0;
  bool refine = false;
  double refine_step = 0.0125;  // target step for bisection refinement
  friend bool operator==(const DetectSpec&, const DetectSpec&) = default;
};

struct SolverSpec {
  SolverType type = SolverType::automatic;
  // DMRG knobs (see DmrgOptions).
  int m = 300;
  int sweeps = 20;
  int min_sweeps = 4;
  double truncation_target = 1e-9;
  double noise = 1e-4;
  bool stall_retry = true;
  // ED knobs.
  double ed_tol = 1e-11;
  int ed_max_iterations = 4000;
  std::uint64_t seed = 1;
  friend bool operator==(const SolverSpec&, const SolverSpec&) = default;
};

struct OutputSpec {
  std::string dir;  // empty: derive from the output root and command
  int workers = 0;  // 0: hardware concurrency
  bool force_dense_spectrum = false;
  // Pairing correlators at slice endpoints: 0 auto (ED only), 1 on, 2 off.
  int measure_pairing = 0;
  friend bool operator==(const OutputSpec&, const OutputSpec&) = default;
};

struct RunManifest {
  int version = 1;
  Command command = Command::solve;
  ModelParams model;
  SolverSpec solver;
  SliceSpec slice;
  GridSpec grid;
  std::vector<int> scale_sizes;
  DetectSpec detect;
  OutputSpec output;

  friend bool operator==(const RunManifest& a, const RunManifest& b) {
    return a.version == b.version && a.command == b.command &&
           a.model.t == b.model.t && a.model.U == b.model.U &&
           a.model.V == b.model.V && a.model.L == b.model.L &&
           a.model.pbc == b.model.pbc && a.solver == b.solver &&
           a.slice == b.slice && a.grid == b.grid &&
           a.scale_sizes == b.scale_sizes && a.detect == b.detect &&
           a.output == b.output;
  }
};

// Parses the document; `command_hint` (from the CLI subcommand) supplies the
// command when the document omits it and must agree when both are present.
RunManifest parse_manifest(const std::string& text,
                           const std::string& command_hint = "");

RunManifest load_manifest(const std::string& path,
                          const std::string& command_hint = "");

std::string serialize_manifest(const RunManifest& m);

// Shortest exact decimal form (round-trips bit-exactly).
std::string format_double_exact(double v);
// Fixed 12-significant-digit form used by CSV exports.
std::string format_double_12(double v);

}  // namespace ehmep
