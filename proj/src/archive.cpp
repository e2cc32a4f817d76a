#include "ehmep/archive.hpp"

#include <json.hpp>

#include <fstream>
#include <sstream>
#include <stdexcept>

namespace ehmep {

using nlohmann::json;

std::uint64_t fnv1a64(const std::string& bytes) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

namespace {

std::string checksum_hex(const std::string& payload) {
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx",
                static_cast<unsigned long long>(fnv1a64(payload)));
  return std::string(buf);
}

json record_to_json(const PointRecord& r) {
  json j;
  j["id"] = r.id;
  j["type"] = "point";
  j["U"] = r.U;
  j["V"] = r.V;
  j["L"] = r.L;
  j["seed"] = r.seed;
  j["solver"] = r.solver;
  j["energy"] = r.energy;
  j["ep"] = r.ep;
  j["svn"] = r.svn;
  j["converged"] = r.converged;
  j["circulant"] = r.circulant;
  j["degenerate"] = r.degenerate;
  j["truncation_error"] = r.truncation_error;
  j["coupling"] = r.coupling;
  j["spectrum_up"] = r.spectrum_up;
  j["spectrum_down"] = r.spectrum_down;
  j["x_delta"] = r.x_delta;
  j["signals"] = r.signals;
  if (!r.note.empty()) j["note"] = r.note;
  return j;
}

PointRecord record_from_json(const json& j) {
  PointRecord r;
  r.id = j.at("id").get<std::string>();
  r.U = j.at("U").get<double>();
  r.V = j.at("V").get<double>();
  r.L = j.at("L").get<int>();
  r.seed = j.at("seed").get<std::uint64_t>();
  r.solver = j.at("solver").get<std::string>();
  r.energy = j.at("energy").get<double>();
  r.ep = j.at("ep").get<double>();
  r.svn = j.at("svn").get<double>();
  r.converged = j.at("converged").get<bool>();
  r.circulant = j.at("circulant").get<bool>();
  r.degenerate = j.at("degenerate").get<bool>();
  r.truncation_error = j.at("truncation_error").get<double>();
  r.coupling = j.at("coupling").get<double>();
  r.spectrum_up = j.at("spectrum_up").get<std::vector<double>>();
  r.spectrum_down = j.at("spectrum_down").get<std::vector<double>>();
  r.x_delta = j.at("x_delta").get<std::vector<double>>();
  if (j.contains("signals"))
    r.signals = j.at("signals").get<std::map<std::string, double>>();
  if (j.contains("note")) r.note = j.at("note").get<std::string>();
  return r;
}

std::string with_checksum(json j) {
  j.erase("checksum");
  const std::string payload = j.dump();
  j["checksum"] = checksum_hex(payload);
  return j.dump();
}

void verify_checksum(json j, const std::string& what) {
  if (!j.contains("checksum"))
    throw std::runtime_error("archive record '" + what + "' has no checksum");
  const std::string stored = j.at("checksum").get<std::string>();
  j.erase("checksum");
  const std::string expect = checksum_hex(j.dump());
  if (stored != expect)
    throw std::runtime_error("archive record '" + what +
                             "' failed its checksum (stored " + stored +
                             ", computed " + expect + ")");
}

}  // namespace

ResultArchive::ResultArchive(std::string path, const RunManifest& manifest)
    : path_(std::move(path)), manifest_(manifest) {
  std::ifstream in(path_);
  if (in.good() && in.peek() != std::ifstream::traits_type::eof()) {
    load(true, &manifest);
    return;
  }
  std::ofstream out(path_, std::ios::trunc);
  if (!out) throw std::runtime_error("cannot create archive '" + path_ + "'");
  json j;
  j["type"] = "manifest";
  j["version"] = manifest.version;
  j["manifest"] = serialize_manifest(manifest);
  out << with_checksum(j) << "\n";
}

ResultArchive ResultArchive::open_existing(const std::string& path) {
  ResultArchive a;
  a.path_ = path;
  a.load(false, nullptr);
  return a;
}

void ResultArchive::load(bool require_manifest_match,
                         const RunManifest* expected) {
  std::ifstream in(path_);
  if (!in) throw std::runtime_error("cannot open archive '" + path_ + "'");
  std::string line;
  bool have_manifest = false;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    json j;
    try {
      j = json::parse(line);
    } catch (const json::parse_error&) {
      // A torn trailing line is the footprint of an interrupted writer and
      // is treated as absent; anything before the end is corruption.
      if (in.peek() == std::ifstream::traits_type::eof()) break;
      throw std::runtime_error("archive '" + path_ + "' line " +
                               std::to_string(lineno) + " is not valid JSON");
    }
    const std::string type = j.value("type", "");
    if (type == "manifest") {
      verify_checksum(j, "manifest");
      if (j.at("version").get<int>() != 1)
        throw std::runtime_error("archive format version mismatch");
      manifest_ = parse_manifest(j.at("manifest").get<std::string>());
      have_manifest = true;
      if (require_manifest_match && expected && !(manifest_ == *expected))
        throw std::runtime_error(
            "archive '" + path_ +
            "' was produced by a different manifest; refusing to mix runs");
    } else if (type == "point") {
      const std::string id = j.value("id", "<unnamed>");
      verify_checksum(j, id);
      PointRecord r = record_from_json(j);
      records_[r.id] = std::move(r);
    } else {
      throw std::runtime_error("archive '" + path_ + "' line " +
                               std::to_string(lineno) + ": unknown record type");
    }
  }
  if (!have_manifest)
    throw std::runtime_error("archive '" + path_ + "' has no manifest record");
}

const PointRecord* ResultArchive::find(const std::string& id) const {
  auto it = records_.find(id);
  return it == records_.end() ? nullptr : &it->second;
}

std::vector<PointRecord> ResultArchive::sorted_records() const {
  std::vector<PointRecord> out;
  out.reserve(records_.size());
  for (const auto& [id, rec] : records_) out.push_back(rec);
  return out;
}

void ResultArchive::append(const PointRecord& rec) {
  std::ofstream out(path_, std::ios::app);
  if (!out) throw std::runtime_error("cannot append to archive '" + path_ + "'");
  out << with_checksum(record_to_json(rec)) << "\n";
  out.flush();
  records_[rec.id] = rec;
}

}  // namespace ehmep
