#pragma once

// Result archive: one JSON record per line, first line the manifest, then one
// record per solved point. Every record carries an FNV-1a checksum of its
// canonical serialization, so partial archives are valid and resumable and a
// corrupted record is detected by name.

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "ehmep/manifest.hpp"

namespace ehmep {

struct PointRecord {
  std::string id;        // stable key, e.g. "p0041"
  double U = 0, V = 0;
  int L = 0;
  std::uint64_t seed = 0;
  std::string solver;    // ed-lanczos | ed-dense | dmrg
  double energy = 0;
  double ep = 0;
  double svn = 0;
  bool converged = false;
  bool circulant = false;
  bool degenerate = false;
  double truncation_error = 0;
  double coupling = 0;   // slice coordinate (equals U or V)
  std::vector<double> spectrum_up, spectrum_down;
  std::vector<double> x_delta;  // translation-averaged quadratures, up spin
  // Optional order-parameter signatures for classification.
  std::map<std::string, double> signals;
  std::string note;
};

std::uint64_t fnv1a64(const std::string& bytes);

class ResultArchive {
 public:
  // Opens or creates `path`. When the file exists, the stored manifest must
  // match `manifest` and every record checksum must verify.
  ResultArchive(std::string path, const RunManifest& manifest);

  // Loads an existing archive as-is (for `detect` and exports).
  static ResultArchive open_existing(const std::string& path);

  const RunManifest& manifest() const { return manifest_; }
  bool has(const std::string& id) const { return records_.count(id) > 0; }
  const PointRecord* find(const std::string& id) const;
  std::vector<PointRecord> sorted_records() const;  // by id
  std::size_t size() const { return records_.size(); }

  void append(const PointRecord& rec);  // serialized through a single writer

 private:
  ResultArchive() = default;
  void load(bool require_manifest_match, const RunManifest* expected);

  std::string path_;
  RunManifest manifest_;
  std::map<std::string, PointRecord> records_;
};

}  // namespace ehmep
