#include "ehmep/manifest.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>

namespace ehmep {

std::string to_string(Command c) {
  switch (c) {
    case Command::solve: return "solve";
    case Command::slice: return "slice";
    case Command::scan: return "scan";
    case Command::scale: return "scale";
    case Command::detect: return "detect";
  }
  return "?";
}

std::string to_string(SolverType s) {
  switch (s) {
    case SolverType::automatic: return "auto";
    case SolverType::ed: return "ed";
    case SolverType::dmrg: return "dmrg";
  }
  return "?";
}

namespace {

int range_count(double from, double to, double step, const char* what) {
  if (!(step > 0.0)) throw std::invalid_argument(std::string(what) + ": step must be positive");
  const double span = to - from;
  if (span < -1e-12) throw std::invalid_argument(std::string(what) + ": empty range");
  const int n = static_cast<int>(std::llround(span / step)) + 1;
  if (std::abs(from + (n - 1) * step - to) > 1e-6 * step)
    throw std::invalid_argument(std::string(what) +
                                ": range is not an integer number of steps");
  return n;
}

}  // namespace

int SliceSpec::count() const { return range_count(from, to, step, "slice"); }
double SliceSpec::value(int i) const { return from + i * step; }
int GridSpec::u_count() const { return range_count(u_from, u_to, u_step, "scan U"); }
int GridSpec::v_count() const { return range_count(v_from, v_to, v_step, "scan V"); }

std::string format_double_exact(double v) {
  char buf[40];
  auto [p, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  if (ec != std::errc{}) throw std::runtime_error("to_chars failure");
  return std::string(buf, p);
}

std::string format_double_12(double v) {
  char buf[48];
  auto [p, ec] = std::to_chars(buf, buf + sizeof(buf), v,
                               std::chars_format::general, 12);
  if (ec != std::errc{}) throw std::runtime_error("to_chars failure");
  return std::string(buf, p);
}

namespace {

struct KeyValue {
  std::string section, key, value;
  int line;
};

std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  const auto b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

std::vector<KeyValue> tokenize(const std::string& text) {
  std::vector<KeyValue> out;
  std::istringstream in(text);
  std::string line, section = "model";  // bare keys default to the model
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']')
        throw std::invalid_argument("manifest line " + std::to_string(lineno) +
                                    ": malformed section header");
      section = trim(line.substr(1, line.size() - 2));
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw std::invalid_argument("manifest line " + std::to_string(lineno) +
                                  ": expected key = value");
    out.push_back({section, trim(line.substr(0, eq)), trim(line.substr(eq + 1)),
                   lineno});
  }
  return out;
}

double parse_num(const KeyValue& kv) {
  try {
    std::size_t pos = 0;
    const double v = std::stod(kv.value, &pos);
    if (pos != kv.value.size()) throw std::invalid_argument("trailing junk");
    return v;
  } catch (const std::exception&) {
    throw std::invalid_argument("manifest key '" + kv.section + "." + kv.key +
                                "': cannot parse number from '" + kv.value + "'");
  }
}

int parse_int(const KeyValue& kv) {
  const double v = parse_num(kv);
  if (v != std::floor(v))
    throw std::invalid_argument("manifest key '" + kv.section + "." + kv.key +
                                "' must be an integer");
  return static_cast<int>(v);
}

bool parse_bool(const KeyValue& kv) {
  if (kv.value == "true" || kv.value == "1" || kv.value == "on") return true;
  if (kv.value == "false" || kv.value == "0" || kv.value == "off") return false;
  throw std::invalid_argument("manifest key '" + kv.section + "." + kv.key +
                              "' must be a boolean");
}

}  // namespace

RunManifest parse_manifest(const std::string& text,
                           const std::string& command_hint) {
  RunManifest m;
  bool command_seen = false, l_seen = false;
  bool u_seen = false, v_seen = false;

  for (const KeyValue& kv : tokenize(text)) {
    const std::string id = kv.section + "." + kv.key;
    auto fail_unknown = [&]() {
      throw std::invalid_argument("unknown manifest key '" + id + "' (line " +
                                  std::to_string(kv.line) + ")");
    };
    if (kv.section == "manifest") {
      if (kv.key == "version") m.version = parse_int(kv);
      else if (kv.key == "command") {
        command_seen = true;
        const std::string& c = kv.value;
        if (c == "solve") m.command = Command::solve;
        else if (c == "slice") m.command = Command::slice;
        else if (c == "scan") m.command = Command::scan;
        else if (c == "scale") m.command = Command::scale;
        else if (c == "detect") m.command = Command::detect;
        else throw std::invalid_argument("unknown command '" + c + "'");
      } else fail_unknown();
    } else if (kv.section == "model") {
      if (kv.key == "L") { m.model.L = parse_int(kv); l_seen = true; }
      else if (kv.key == "t") m.model.t = parse_num(kv);
      else if (kv.key == "U") { m.model.U = parse_num(kv); u_seen = true; }
      else if (kv.key == "V") { m.model.V = parse_num(kv); v_seen = true; }
      else if (kv.key == "pbc") m.model.pbc = parse_bool(kv);
      else fail_unknown();
    } else if (kv.section == "solver") {
      if (kv.key == "type") {
        if (kv.value == "auto") m.solver.type = SolverType::automatic;
        else if (kv.value == "ed") m.solver.type = SolverType::ed;
        else if (kv.value == "dmrg") m.solver.type = SolverType::dmrg;
        else throw std::invalid_argument("solver.type must be auto|ed|dmrg");
      } else if (kv.key == "m") m.solver.m = parse_int(kv);
      else if (kv.key == "sweeps") m.solver.sweeps = parse_int(kv);
      else if (kv.key == "min_sweeps") m.solver.min_sweeps = parse_int(kv);
      else if (kv.key == "truncation_target") m.solver.truncation_target = parse_num(kv);
      else if (kv.key == "noise") m.solver.noise = parse_num(kv);
      else if (kv.key == "stall_retry") m.solver.stall_retry = parse_bool(kv);
      else if (kv.key == "ed_tol") m.solver.ed_tol = parse_num(kv);
      else if (kv.key == "ed_max_iterations") m.solver.ed_max_iterations = parse_int(kv);
      else if (kv.key == "seed") {
        try {
          std::size_t pos = 0;
          m.solver.seed = std::stoull(kv.value, &pos);
          if (pos != kv.value.size()) throw std::invalid_argument("junk");
        } catch (const std::exception&) {
          throw std::invalid_argument(
              "manifest key 'solver.seed' must be an unsigned integer");
        }
      } else fail_unknown();
    } else if (kv.section == "slice") {
      if (kv.key == "vary") {
        if (kv.value != "U" && kv.value != "V")
          throw std::invalid_argument("slice.vary must be U or V");
        m.slice.vary = kv.value[0];
      } else if (kv.key == "from") m.slice.from = parse_num(kv);
      else if (kv.key == "to") m.slice.to = parse_num(kv);
      else if (kv.key == "step") m.slice.step = parse_num(kv);
      else fail_unknown();
    } else if (kv.section == "scan") {
      if (kv.key == "u_from") m.grid.u_from = parse_num(kv);
      else if (kv.key == "u_to") m.grid.u_to = parse_num(kv);
      else if (kv.key == "u_step") m.grid.u_step = parse_num(kv);
      else if (kv.key == "v_from") m.grid.v_from = parse_num(kv);
      else if (kv.key == "v_to") m.grid.v_to = parse_num(kv);
      else if (kv.key == "v_step") m.grid.v_step = parse_num(kv);
      else fail_unknown();
    } else if (kv.section == "scale") {
      if (kv.key == "sizes") {
        std::istringstream ss(kv.value);
        std::string tok;
        while (std::getline(ss, tok, ',')) {
          tok = trim(tok);
          if (tok.empty()) continue;
          m.scale_sizes.push_back(std::stoi(tok));
        }
        if (m.scale_sizes.empty())
          throw std::invalid_argument("scale.sizes: empty list");
      } else fail_unknown();
    } else if (kv.section == "detect") {
      if (kv.key == "jump_abs") m.detect.jump_abs = parse_num(kv);
      else if (kv.key == "jump_rel") m.detect.jump_rel = parse_num(kv);
      else if (kv.key == "refine") m.detect.refine = parse_bool(kv);
      else if (kv.key == "refine_step") m.detect.refine_step = parse_num(kv);
      else fail_unknown();
    } else if (kv.section == "output") {
      if (kv.key == "dir") m.output.dir = kv.value;
      else if (kv.key == "workers") m.output.workers = parse_int(kv);
      else if (kv.key == "force_dense_spectrum")
        m.output.force_dense_spectrum = parse_bool(kv);
      else if (kv.key == "measure_pairing") {
        if (kv.value == "auto") m.output.measure_pairing = 0;
        else if (kv.value == "on") m.output.measure_pairing = 1;
        else if (kv.value == "off") m.output.measure_pairing = 2;
        else throw std::invalid_argument("output.measure_pairing must be auto|on|off");
      } else fail_unknown();
    } else {
      throw std::invalid_argument("unknown manifest section '" + kv.section +
                                  "' (line " + std::to_string(kv.line) + ")");
    }
  }

  if (m.version != 1)
    throw std::invalid_argument("unsupported manifest version " +
                                std::to_string(m.version));
  if (!command_hint.empty()) {
    Command hinted;
    if (command_hint == "solve") hinted = Command::solve;
    else if (command_hint == "slice") hinted = Command::slice;
    else if (command_hint == "scan") hinted = Command::scan;
    else if (command_hint == "scale") hinted = Command::scale;
    else if (command_hint == "detect") hinted = Command::detect;
    else throw std::invalid_argument("unknown command '" + command_hint + "'");
    if (command_seen && hinted != m.command)
      throw std::invalid_argument("manifest command '" + to_string(m.command) +
                                  "' conflicts with subcommand '" + command_hint + "'");
    m.command = hinted;
    command_seen = true;
  }

  if (!l_seen) throw std::invalid_argument("model.L is required");
  m.model.validate();
  const bool needs_uv = m.command == Command::solve || m.command == Command::scale;
  if (needs_uv && !(u_seen && v_seen))
    throw std::invalid_argument("model.U and model.V are required for " +
                                to_string(m.command));
  if (m.command == Command::slice) {
    if (m.slice.vary == 'U' ? !v_seen : !u_seen)
      throw std::invalid_argument("slice needs the non-varying coupling set");
    (void)m.slice.count();  // validates the range
  }
  if (m.command == Command::scan) {
    (void)m.grid.u_count();
    (void)m.grid.v_count();
  }
  if (m.command == Command::scale) {
    if (m.scale_sizes.size() < 3)
      throw std::invalid_argument("scale.sizes needs at least 3 lattice sizes");
    for (int L : m.scale_sizes)
      if (L < 2 || L % 2 != 0)
        throw std::invalid_argument("scale.sizes: L must be even and >= 2");
  }
  if (m.solver.m < 2) throw std::invalid_argument("solver.m must be >= 2");
  if (m.solver.sweeps < 1) throw std::invalid_argument("solver.sweeps must be >= 1");
  if (!(m.solver.ed_tol > 0)) throw std::invalid_argument("solver.ed_tol must be positive");
  return m;
}

RunManifest load_manifest(const std::string& path, const std::string& command_hint) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open manifest '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_manifest(ss.str(), command_hint);
}

std::string serialize_manifest(const RunManifest& m) {
  std::ostringstream o;
  o << "[manifest]\n";
  o << "version = " << m.version << "\n";
  o << "command = " << to_string(m.command) << "\n\n";
  o << "[model]\n";
  o << "L = " << m.model.L << "\n";
  o << "t = " << format_double_exact(m.model.t) << "\n";
  o << "U = " << format_double_exact(m.model.U) << "\n";
  o << "V = " << format_double_exact(m.model.V) << "\n";
  o << "pbc = " << (m.model.pbc ? "true" : "false") << "\n\n";
  o << "[solver]\n";
  o << "type = " << to_string(m.solver.type) << "\n";
  o << "m = " << m.solver.m << "\n";
  o << "sweeps = " << m.solver.sweeps << "\n";
  o << "min_sweeps = " << m.solver.min_sweeps << "\n";
  o << "truncation_target = " << format_double_exact(m.solver.truncation_target) << "\n";
  o << "noise = " << format_double_exact(m.solver.noise) << "\n";
  o << "stall_retry = " << (m.solver.stall_retry ? "true" : "false") << "\n";
  o << "ed_tol = " << format_double_exact(m.solver.ed_tol) << "\n";
  o << "ed_max_iterations = " << m.solver.ed_max_iterations << "\n";
  o << "seed = " << m.solver.seed << "\n\n";
  if (m.command == Command::slice) {
    o << "[slice]\n";
    o << "vary = " << m.slice.vary << "\n";
    o << "from = " << format_double_exact(m.slice.from) << "\n";
    o << "to = " << format_double_exact(m.slice.to) << "\n";
    o << "step = " << format_double_exact(m.slice.step) << "\n\n";
  }
  if (m.command == Command::scan) {
    o << "[scan]\n";
    o << "u_from = " << format_double_exact(m.grid.u_from) << "\n";
    o << "u_to = " << format_double_exact(m.grid.u_to) << "\n";
    o << "u_step = " << format_double_exact(m.grid.u_step) << "\n";
    o << "v_from = " << format_double_exact(m.grid.v_from) << "\n";
    o << "v_to = " << format_double_exact(m.grid.v_to) << "\n";
    o << "v_step = " << format_double_exact(m.grid.v_step) << "\n\n";
  }
  if (!m.scale_sizes.empty()) {
    o << "[scale]\n";
    o << "sizes = ";
    for (std::size_t i = 0; i < m.scale_sizes.size(); ++i)
      o << (i ? "," : "") << m.scale_sizes[i];
    o << "\n\n";
  }
  o << "[detect]\n";
  o << "jump_abs = " << format_double_exact(m.detect.jump_abs) << "\n";
  o << "jump_rel = " << format_double_exact(m.detect.jump_rel) << "\n";
  o << "refine = " << (m.detect.refine ? "true" : "false") << "\n";
  o << "refine_step = " << format_double_exact(m.detect.refine_step) << "\n\n";
  o << "[output]\n";
  if (!m.output.dir.empty()) o << "dir = " << m.output.dir << "\n";
  o << "workers = " << m.output.workers << "\n";
  o << "force_dense_spectrum = " << (m.output.force_dense_spectrum ? "true" : "false") << "\n";
  o << "measure_pairing = "
    << (m.output.measure_pairing == 0 ? "auto"
                                      : m.output.measure_pairing == 1 ? "on" : "off")
    << "\n";
  return o.str();
}

}  // namespace ehmep
