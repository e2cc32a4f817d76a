#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>

#include "ehmep/archive.hpp"
#include "ehmep/csv.hpp"
#include "ehmep/manifest.hpp"

using namespace ehmep;

namespace {

struct TempDir {
  std::filesystem::path path;
  TempDir() {
    path = std::filesystem::temp_directory_path() /
           ("ehmep_test_" + std::to_string(std::random_device{}()));
    std::filesystem::create_directories(path);
  }
  ~TempDir() { std::filesystem::remove_all(path); }
  std::string file(const char* name) const { return (path / name).string(); }
};

PointRecord sample_record(const std::string& id, double coupling) {
  PointRecord r;
  r.id = id;
  r.U = -2.0;
  r.V = coupling;
  r.L = 8;
  r.seed = 7;
  r.solver = "ed-lanczos";
  r.energy = -3.25;
  r.ep = 0.5 + coupling;
  r.svn = 3.5;
  r.converged = true;
  r.circulant = true;
  r.coupling = coupling;
  r.spectrum_up = {0.1, 0.2};
  r.spectrum_down = {0.1, 0.2};
  r.x_delta = {0.5, 0.1};
  r.signals["cdw_pi"] = 1.0;
  return r;
}

}  // namespace

TEST_CASE("minimal manifest gets all defaults") {
  RunManifest m = parse_manifest("L = 6\nU = 4\nV = 2\n", "solve");
  CHECK(m.command == Command::solve);
  CHECK(m.model.L == 6);
  CHECK(m.model.t == 1.0);
  CHECK(m.model.pbc);
  CHECK(m.solver.type == SolverType::automatic);
  CHECK(m.solver.m == 300);
  CHECK(m.solver.sweeps == 20);
  CHECK(m.detect.jump_abs == 0.02);
  CHECK(m.detect.jump_rel == 5.0);
}

TEST_CASE("odd lattice size is rejected with the model invariant") {
  CHECK_THROWS_WITH_AS(parse_manifest("L = 13\nU = 1\nV = 1\n", "solve"),
                       "L must be even and >= 2", std::invalid_argument);
}

TEST_CASE("unknown keys are fatal and named") {
  try {
    parse_manifest("L = 6\nU = 1\nV = 1\nbogus = 3\n", "solve");
    FAIL("expected throw");
  } catch (const std::invalid_argument& e) {
    CHECK(std::string(e.what()).find("model.bogus") != std::string::npos);
  }
  CHECK_THROWS(parse_manifest("[nosuch]\nx = 1\n", "solve"));
}

TEST_CASE("scan ranges produce the documented grid size") {
  const char* doc =
      "[manifest]\ncommand = scan\n[model]\nL = 64\n"
      "[scan]\nu_from = -8\nu_to = 8\nu_step = 0.25\n"
      "v_from = -3\nv_to = 6\nv_step = 0.25\n";
  RunManifest m = parse_manifest(doc);
  CHECK(m.grid.u_count() == 65);
  CHECK(m.grid.v_count() == 37);
}

TEST_CASE("command hint conflicts are fatal") {
  CHECK_THROWS(parse_manifest("[manifest]\ncommand = scan\n[model]\nL = 6\n"
                              "[scan]\nu_from=0\nu_to=1\nu_step=1\n"
                              "v_from=0\nv_to=1\nv_step=1\n",
                              "solve"));
}

TEST_CASE("manifest round-trips through serialization") {
  std::mt19937_64 rng(3);
  auto coin = [&]() { return rng() % 2 == 0; };
  for (int trial = 0; trial < 40; ++trial) {
    RunManifest m;
    m.command = static_cast<Command>(rng() % 5);
    m.model.L = 2 * (1 + static_cast<int>(rng() % 40));
    m.model.t = 1.0 + static_cast<double>(rng() % 100) / 64.0;
    m.model.U = static_cast<double>(static_cast<int>(rng() % 65) - 32) / 4.0;
    m.model.V = static_cast<double>(static_cast<int>(rng() % 65) - 32) / 8.0;
    m.solver.type = static_cast<SolverType>(rng() % 3);
    m.solver.m = 2 + static_cast<int>(rng() % 500);
    m.solver.sweeps = 1 + static_cast<int>(rng() % 30);
    m.solver.seed = rng();
    m.solver.noise = coin() ? 1e-4 : 3.5e-5;
    m.solver.stall_retry = coin();
    m.output.workers = static_cast<int>(rng() % 4);
    m.output.force_dense_spectrum = coin();
    m.output.measure_pairing = static_cast<int>(rng() % 3);
    m.detect.jump_abs = 0.02 + static_cast<double>(rng() % 10) / 1000.0;
    if (m.command == Command::slice) {
      m.slice.vary = coin() ? 'U' : 'V';
      m.slice.from = -1.0;
      m.slice.to = 1.0;
      m.slice.step = 0.125;
    }
    if (m.command == Command::scan) {
      m.grid = {0.0, 2.0, 0.5, -1.0, 1.0, 0.25};
    }
    if (m.command == Command::scale) {
      m.scale_sizes = {16, 32, 64};
    }
    const std::string text = serialize_manifest(m);
    RunManifest back = parse_manifest(text);
    CHECK(back == m);
  }
}

TEST_CASE("archive: append, reload, verify") {
  TempDir dir;
  RunManifest m = parse_manifest("L = 8\nU = -2\nV = 0\n", "solve");
  {
    ResultArchive a(dir.file("run.jsonl"), m);
    a.append(sample_record("p0000", -1.0));
    a.append(sample_record("p0001", -0.5));
    CHECK(a.size() == 2);
  }
  {
    ResultArchive a(dir.file("run.jsonl"), m);
    CHECK(a.size() == 2);
    CHECK(a.has("p0000"));
    CHECK_FALSE(a.has("p0002"));
    const PointRecord* r = a.find("p0001");
    REQUIRE(r != nullptr);
    CHECK(r->ep == doctest::Approx(0.0));
    CHECK(r->signals.at("cdw_pi") == doctest::Approx(1.0));
  }
}

TEST_CASE("archive: manifest mismatch refuses to mix runs") {
  TempDir dir;
  RunManifest m1 = parse_manifest("L = 8\nU = -2\nV = 0\n", "solve");
  { ResultArchive a(dir.file("run.jsonl"), m1); }
  RunManifest m2 = parse_manifest("L = 10\nU = -2\nV = 0\n", "solve");
  CHECK_THROWS(ResultArchive(dir.file("run.jsonl"), m2));
}

TEST_CASE("archive: corrupted record is detected by name") {
  TempDir dir;
  RunManifest m = parse_manifest("L = 8\nU = -2\nV = 0\n", "solve");
  {
    ResultArchive a(dir.file("run.jsonl"), m);
    a.append(sample_record("p0000", -1.0));
    a.append(sample_record("p0001", -0.5));
  }
  // Flip one digit inside the first point record.
  std::ifstream in(dir.file("run.jsonl"));
  std::string all((std::istreambuf_iterator<char>(in)),
                  std::istreambuf_iterator<char>());
  in.close();
  auto pos = all.find("-3.25");
  REQUIRE(pos != std::string::npos);
  all.replace(pos, 5, "-3.26");
  std::ofstream(dir.file("run.jsonl"), std::ios::trunc) << all;
  try {
    ResultArchive a(dir.file("run.jsonl"), m);
    FAIL("expected checksum failure");
  } catch (const std::runtime_error& e) {
    CHECK(std::string(e.what()).find("p0000") != std::string::npos);
  }
}

TEST_CASE("archive: torn trailing line is treated as absent") {
  TempDir dir;
  RunManifest m = parse_manifest("L = 8\nU = -2\nV = 0\n", "solve");
  {
    ResultArchive a(dir.file("run.jsonl"), m);
    a.append(sample_record("p0000", -1.0));
  }
  std::ofstream(dir.file("run.jsonl"), std::ios::app)
      << "{\"type\":\"point\",\"id\":\"p0001\",\"trunc";
  ResultArchive a(dir.file("run.jsonl"), m);
  CHECK(a.size() == 1);
  CHECK(a.has("p0000"));
  CHECK_FALSE(a.has("p0001"));
}

TEST_CASE("csv schema golden") {
  CHECK(std::string(kSurfaceHeader) == "U,V,L,ep,energy,converged");
  CHECK(std::string(kEventsHeader) == "slice,kind,location,uncertainty,magnitude");
  CHECK(std::string(kFitHeader) ==
        "U,V,ep_inf,a,stderr_ep_inf,stderr_a,constant,residual_max,n");

  std::vector<PointRecord> recs{sample_record("p0000", -1.0)};
  const std::string csv = surface_csv(recs);
  CHECK(csv == "U,V,L,ep,energy,converged\n-2,-1,8,-0.5,-3.25,1\n");

  // Slice export sorts by coupling and a one-point archive is two lines.
  std::vector<PointRecord> unsorted{sample_record("a", 0.5),
                                    sample_record("b", -0.5)};
  const std::string sorted = slice_csv(unsorted);
  const auto first_row = sorted.find('\n') + 1;
  CHECK(sorted.substr(first_row, 7) == "-2,-0.5");
}

TEST_CASE("12-significant-digit formatting") {
  CHECK(format_double_12(1.0 / 3.0) == "0.333333333333");
  CHECK(format_double_12(-0.000125) == "-0.000125");
  CHECK(format_double_12(6.53376575073693) == "6.53376575074");
  CHECK(format_double_exact(0.1) == "0.1");
}
