#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "ehmep/ed.hpp"
#include "ehmep/ground_state.hpp"
#include "oracles.hpp"

using namespace ehmep;

namespace {

// Free tight-binding comparison energy: sum of the lowest single-particle
// ring energies -2t cos(2 pi n / L) over the occupied orbitals.
double free_fermi_energy(int L, int nUp, int nDown, double t) {
  std::vector<double> eps;
  for (int n = 0; n < L; ++n)
    eps.push_back(-2.0 * t * std::cos(2.0 * std::numbers::pi * n / L));
  std::sort(eps.begin(), eps.end());
  double e = 0.0;
  for (int i = 0; i < nUp; ++i) e += eps[static_cast<std::size_t>(i)];
  for (int i = 0; i < nDown; ++i) e += eps[static_cast<std::size_t>(i)];
  return e;
}

}  // namespace

TEST_CASE("single free particle on a 6-ring has energy -2t") {
  ModelParams p{.t = 1, .U = 0, .V = 0, .L = 6};
  auto basis = build_sector_basis(6, 1, 0);
  EdResult r = lanczos_ground_state(p, basis);
  CHECK(r.converged);
  CHECK(r.energy == doctest::Approx(-2.0).epsilon(1e-10));
}

TEST_CASE("strong-U zero modes at t->0") {
  // U >> t: ground energy approaches 0 from below as t/U -> 0; at the
  // diagonal level the singly-occupied manifold is exactly at zero.
  ModelParams p{.t = 1, .U = 5000, .V = 0, .L = 4};
  auto basis = build_sector_basis(4, 2, 2);
  EdResult r = lanczos_ground_state(p, basis);
  CHECK(r.energy < 0.0);
  CHECK(r.energy > -0.01);  // superexchange ~ 4t^2/U
}

TEST_CASE("lanczos equals dense on the L=6 half-filled sector") {
  ModelParams p{.t = 1, .U = 4, .V = 2, .L = 6};
  auto basis = build_sector_basis(6, 3, 3);
  EdResult lz = lanczos_ground_state(p, basis);
  EdResult dn = dense_ground_state(p, basis);
  CHECK(lz.converged);
  CHECK(std::abs(lz.energy - dn.energy) < 1e-10);
  // Frozen from the dense 400x400 oracle.
  CHECK(dn.energy == doctest::Approx(6.53376575073693).epsilon(1e-11));
}

TEST_CASE("dense ground state at L=2 matches the two-site formula") {
  // With the ring convention the two bonds coincide, so the effective dimer
  // hopping is 2t: at U=0 the singlet energy is -2 * (2t) = -4t.
  ModelParams p{.t = 1, .U = 0, .V = 0, .L = 2};
  auto basis = build_sector_basis(2, 1, 1);
  CHECK(basis->size() == 4);
  EdResult r = dense_ground_state(p, basis);
  CHECK(r.energy == doctest::Approx(-4.0).epsilon(1e-12));
}

TEST_CASE("dimension-1 sector returns the diagonal energy") {
  ModelParams p{.t = 1, .U = 4, .V = 2, .L = 4};
  auto basis = build_sector_basis(4, 0, 0);
  EdResult r = dense_ground_state(p, basis);
  CHECK(r.energy == doctest::Approx(0.0));
  EdResult lz = lanczos_ground_state(p, basis);
  CHECK(lz.energy == doctest::Approx(0.0));
  auto full = build_sector_basis(4, 4, 4);
  EdResult rf = dense_ground_state(p, full);
  CHECK(rf.energy ==
        doctest::Approx(diagonal_energy(p, full->config(0))).epsilon(1e-12));
}

TEST_CASE("dense feasibility guard") {
  ModelParams p{.t = 1, .U = 0, .V = 0, .L = 10};
  auto basis = build_sector_basis(10, 5, 5);  // 63504 > 20000
  CHECK_THROWS_AS(dense_ground_state(p, basis), std::length_error);
}

TEST_CASE("cross-solver agreement at L=4, U=8") {
  ModelParams p{.t = 1, .U = 8, .V = 0, .L = 4};
  auto basis = build_sector_basis(4, 2, 2);
  EdResult lz = lanczos_ground_state(p, basis);
  EdResult dn = dense_ground_state(p, basis);
  CHECK(std::abs(lz.energy - dn.energy) < 1e-10);
}

TEST_CASE("variational bound and residual contract on random parameters") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 12; ++trial) {
    const double U = 16.0 * (static_cast<double>(rng() >> 11) * 0x1.0p-53) - 8.0;
    const double V = 9.0 * (static_cast<double>(rng() >> 11) * 0x1.0p-53) - 3.0;
    ModelParams p{.t = 1, .U = U, .V = V, .L = 6};
    auto basis = build_sector_basis(6, 3, 3);
    EdOptions opts;
    opts.seed = 1000 + static_cast<std::uint64_t>(trial);
    EdResult lz = lanczos_ground_state(p, basis, opts);
    EdResult dn = dense_ground_state(p, basis);
    CHECK(lz.energy >= dn.energy - 1e-10);
    CHECK(std::abs(lz.energy - dn.energy) < 1e-10);
    CHECK(lz.residual_norm <= 10.0 * opts.convergence_tol);
  }
}

TEST_CASE("seed determinism") {
  ModelParams p{.t = 1, .U = -3, .V = 1, .L = 6};
  auto basis = build_sector_basis(6, 3, 3);
  EdOptions opts;
  opts.seed = 99;
  EdResult a = lanczos_ground_state(p, basis, opts);
  EdResult b = lanczos_ground_state(p, basis, opts);
  CHECK(a.energy == doctest::Approx(b.energy).epsilon(1e-14));
  CHECK(a.iterations == b.iterations);
  CHECK((a.vector.amp - b.vector.amp).cwiseAbs().maxCoeff() < 1e-13);
}

TEST_CASE("degeneracy flagging on an open-shell free point") {
  // L = 0 mod 4 free fermions at half filling have an open shell: the exact
  // ground state is degenerate.
  ModelParams p{.t = 1, .U = 0, .V = 0, .L = 4};
  auto basis = build_sector_basis(4, 2, 2);
  EdResult dn = dense_ground_state(p, basis);
  CHECK(dn.degenerate);
  CHECK(dn.degenerate_within < 1e-10);

  EdOptions opts;
  auto lowest = lanczos_lowest_states(p, basis, opts, 2);
  CHECK(std::abs(lowest[0].energy - lowest[1].energy) < 1e-9);
}

TEST_CASE("free-point energies match the Fermi sea") {
  for (int L : {6, 10}) {
    ModelParams p{.t = 1, .U = 0, .V = 0, .L = L};
    auto basis = build_sector_basis(L, L / 2, L / 2);
    EdResult r = lanczos_ground_state(p, basis);
    CHECK(r.energy ==
          doctest::Approx(free_fermi_energy(L, L / 2, L / 2, 1.0)).epsilon(1e-9));
  }
}

TEST_CASE("thick restart converges with a tight window") {
  ModelParams p{.t = 1, .U = 4, .V = 2, .L = 6};
  auto basis = build_sector_basis(6, 3, 3);
  EdOptions opts;
  opts.max_basis = 8;  // force several restarts
  opts.keep_on_restart = 4;
  EdResult r = lanczos_ground_state(p, basis, opts);
  EdResult dn = dense_ground_state(p, basis);
  CHECK(r.converged);
  CHECK(std::abs(r.energy - dn.energy) < 1e-9);
}

TEST_CASE("ground-state result assembles symmetrized quadratures") {
  ModelParams p{.t = 1, .U = 4, .V = 2, .L = 6};
  GroundStateResult g = ed_ground_state_result(p, EdOptions{});
  CHECK(g.converged);
  CHECK(g.trace_particle_number() == doctest::Approx(6.0).epsilon(1e-8));
  CHECK((g.quad_up - g.quad_up.adjoint()).cwiseAbs().maxCoeff() < 1e-10);
  CHECK((g.quad_down - g.quad_down.adjoint()).cwiseAbs().maxCoeff() < 1e-10);
  // Spin symmetry at Sz = 0.
  CHECK((g.quad_up - g.quad_down).cwiseAbs().maxCoeff() < 1e-8);
}

TEST_CASE("quadratures against brute-force operator application") {
  ModelParams p{.t = 1, .U = 2, .V = -1, .L = 4};
  auto basis = build_sector_basis(4, 2, 2);
  EdResult dn = dense_ground_state(p, basis);
  auto [qu, qd] = quadratures_from_states(*basis, {dn.vector.amp}, {1.0});

  // Oracle: <a^dag_i a_j> by explicit mode-level operator application.
  auto ref_basis = oracle::enumerate_sector(4, 2, 2);
  for (int spin = 0; spin < 2; ++spin) {
    for (int i = 0; i < 4; ++i) {
      for (int j = 0; j < 4; ++j) {
        double acc = 0.0;
        for (std::size_t c = 0; c < ref_basis.size(); ++c) {
          auto ann = oracle::annihilate(ref_basis[c], oracle::mode_of(4, j, spin));
          if (!ann) continue;
          auto cre = oracle::create(ann->first, oracle::mode_of(4, i, spin));
          if (!cre) continue;
          auto it = std::find(ref_basis.begin(), ref_basis.end(), cre->first);
          const auto row = static_cast<Eigen::Index>(it - ref_basis.begin());
          acc += ann->second * cre->second * dn.vector.amp[row] *
                 dn.vector.amp[static_cast<Eigen::Index>(c)];
        }
        const auto& q = spin == 0 ? qu : qd;
        CHECK(q(i, j).real() == doctest::Approx(acc).epsilon(1e-11));
        CHECK(q(i, j).imag() == doctest::Approx(0.0));
      }
    }
  }
}
