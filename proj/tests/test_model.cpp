#include <doctest.h>

#include <random>

#include "ehmep/ed.hpp"
#include "ehmep/model.hpp"
#include "oracles.hpp"

using namespace ehmep;

namespace {

Eigen::VectorXd random_state(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  Eigen::VectorXd v(static_cast<Eigen::Index>(n));
  for (Eigen::Index i = 0; i < v.size(); ++i)
    v[i] = 2.0 * (static_cast<double>(rng() >> 11) * 0x1.0p-53) - 1.0;
  v.normalize();
  return v;
}

Config config_from_mode(const oracle::ModeConfig& c, int L) {
  Config out;
  for (int j = 0; j < L; ++j) {
    if (c.occ[static_cast<std::size_t>(oracle::mode_of(L, j, 0))]) out.up |= Word{1} << j;
    if (c.occ[static_cast<std::size_t>(oracle::mode_of(L, j, 1))]) out.down |= Word{1} << j;
  }
  return out;
}

}  // namespace

TEST_CASE("sector basis sizes") {
  CHECK(build_sector_basis(2, 1, 1)->size() == 4);
  CHECK(build_sector_basis(8, 4, 4)->size() == 4900);
  CHECK(build_sector_basis(6, 3, 3)->size() == 400);
  CHECK(build_sector_basis(4, 0, 0)->size() == 1);
}

TEST_CASE("sector basis rejects out-of-range counts") {
  CHECK_THROWS(build_sector_basis(4, 5, 2));
  CHECK_THROWS(build_sector_basis(4, -1, 2));
  CHECK_THROWS(build_sector_basis(62, 31, 31));  // overflows the index type
  CHECK_THROWS(build_sector_basis(63, 31, 31));  // beyond the word support
}

TEST_CASE("canonical ordering matches brute-force enumeration") {
  const int L = 6, nUp = 3, nDown = 3;
  auto basis = build_sector_basis(L, nUp, nDown);
  auto ref = oracle::enumerate_sector(L, nUp, nDown);
  REQUIRE(basis->size() == ref.size());
  CHECK(basis->config(0).up == Word{0b000111});
  CHECK(basis->config(0).down == Word{0b000111});
  for (std::size_t i = 0; i < ref.size(); ++i) {
    const Config expected = config_from_mode(ref[i], L);
    CHECK(basis->config(i) == expected);
    CHECK(basis->index(expected) == i);
  }
}

TEST_CASE("basis invariants: popcounts") {
  auto basis = build_sector_basis(5, 2, 3);
  for (std::size_t i = 0; i < basis->size(); ++i) {
    CHECK(popcount(basis->config(i).up) == 2);
    CHECK(popcount(basis->config(i).down) == 3);
  }
}

TEST_CASE("diagonal energy examples") {
  ModelParams p{.t = 1, .U = 4, .V = 2, .L = 4};
  // All singly occupied: every bond has n_j n_{j+1} = 1.
  Config all_single{0b0101, 0b1010};
  CHECK(diagonal_energy(p, all_single) == doctest::Approx(8.0).epsilon(1e-14));
  // Alternating doubly-occupied/empty kills the V term.
  Config cdw{0b0101, 0b0101};
  CHECK(diagonal_energy(p, cdw) == doctest::Approx(8.0).epsilon(1e-14));
  // Clustered pairs: U twice, four occupied bonds of weight 2*2 on the ring
  // (sites 1-2 and the 2-3 / 4-1 bonds vanish against empties).
  ModelParams p2{.t = 1, .U = -1.76, .V = -0.6, .L = 4};
  Config ps{0b0011, 0b0011};
  CHECK(diagonal_energy(p2, ps) == doctest::Approx(-5.92).epsilon(1e-12));
}

TEST_CASE("diagonal energy matches the site-loop oracle") {
  std::mt19937_64 rng(42);
  for (int trial = 0; trial < 50; ++trial) {
    const int L = 2 + 2 * static_cast<int>(rng() % 3);  // 2, 4, 6
    const double U = static_cast<double>(static_cast<int>(rng() % 17) - 8);
    const double V = 0.5 * static_cast<double>(static_cast<int>(rng() % 12) - 6);
    ModelParams p{.t = 1, .U = U, .V = V, .L = L};
    auto ref = oracle::enumerate_sector(L, static_cast<int>(rng() % (L + 1)),
                                        static_cast<int>(rng() % (L + 1)));
    for (const auto& c : ref) {
      CHECK(diagonal_energy(p, config_from_mode(c, L)) ==
            doctest::Approx(oracle::diagonal_energy(U, V, c, L)).epsilon(1e-13));
    }
  }
}

TEST_CASE("matrix-free action equals the independently built dense matrix") {
  for (auto [L, nUp, nDown] : {std::tuple{4, 2, 2}, {6, 3, 3}, {6, 2, 4}, {4, 1, 2}}) {
    ModelParams p{.t = 1.0, .U = 3.7, .V = -1.3, .L = L};
    auto basis = build_sector_basis(L, nUp, nDown);
    auto ref_basis = oracle::enumerate_sector(L, nUp, nDown);
    Eigen::MatrixXd href =
        oracle::dense_hamiltonian(p.t, p.U, p.V, L, ref_basis);
    HamiltonianOperator op(p, basis);
    Eigen::MatrixXd hfast = op.to_dense();
    REQUIRE(href.rows() == hfast.rows());
    CHECK((href - hfast).cwiseAbs().maxCoeff() < 1e-13);

    // And the matrix-free application agrees with the dense action.
    Eigen::VectorXd v = random_state(basis->size(), 7 + static_cast<unsigned>(L));
    CHECK((op.apply(v) - href * v).cwiseAbs().maxCoeff() < 1e-13);
  }
}

TEST_CASE("apply_hamiltonian free function and dimension mismatch") {
  ModelParams p{.t = 1, .U = 4, .V = 2, .L = 4};
  auto basis = build_sector_basis(4, 2, 2);
  StateVector v{basis, random_state(basis->size(), 3)};
  StateVector hv = apply_hamiltonian(p, basis, v);
  CHECK(hv.amp.size() == v.amp.size());
  StateVector bad{basis, Eigen::VectorXd::Zero(7)};
  CHECK_THROWS(apply_hamiltonian(p, basis, bad));
}

TEST_CASE("diagonal expectation of the CDW configuration at L=6") {
  ModelParams p{.t = 1, .U = 4, .V = 2, .L = 6};
  auto basis = build_sector_basis(6, 3, 3);
  Config cdw{0b010101, 0b010101};
  const std::size_t idx = basis->index(cdw);
  Eigen::VectorXd e = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(basis->size()));
  e[static_cast<Eigen::Index>(idx)] = 1.0;
  HamiltonianOperator op(p, basis);
  CHECK(e.dot(op.apply(e)) == doctest::Approx(12.0).epsilon(1e-14));
  CHECK(diagonal_energy(p, cdw) == doctest::Approx(12.0).epsilon(1e-14));
}

TEST_CASE("two-site double occupation has zero diagonal at U=V=0") {
  ModelParams p{.t = 1, .U = 0, .V = 0, .L = 2};
  auto basis = build_sector_basis(2, 1, 1);
  Config c{0b01, 0b01};
  Eigen::VectorXd e = Eigen::VectorXd::Zero(4);
  e[static_cast<Eigen::Index>(basis->index(c))] = 1.0;
  HamiltonianOperator op(p, basis);
  CHECK(std::abs(e.dot(op.apply(e))) < 1e-14);
}

TEST_CASE("hopping-free limit: diagonal spectrum") {
  // With t -> 0 only the U term survives: singly-occupied configurations are
  // zero modes, one doubly occupied site costs U.
  ModelParams p0{.t = 1, .U = 3, .V = 0, .L = 4};
  Config single{0b0101, 0b1010};
  CHECK(diagonal_energy(p0, single) == doctest::Approx(0.0));
  Config one_double{0b0011, 0b0110};  // doubly occupied site 1 only
  CHECK(diagonal_energy(p0, one_double) == doctest::Approx(3.0));
}

TEST_CASE("hermiticity on random vectors") {
  ModelParams p{.t = 1, .U = -2.5, .V = 1.25, .L = 6};
  auto basis = build_sector_basis(6, 3, 3);
  HamiltonianOperator op(p, basis);
  for (int trial = 0; trial < 20; ++trial) {
    Eigen::VectorXd v = random_state(basis->size(), 100 + trial);
    Eigen::VectorXd w = random_state(basis->size(), 200 + trial);
    CHECK(w.dot(op.apply(v)) == doctest::Approx(v.dot(op.apply(w))).epsilon(1e-12));
  }
}

TEST_CASE("scatter audit: every hop target stays inside the sector") {
  auto basis = build_sector_basis(6, 2, 3);
  for (std::size_t i = 0; i < basis->size(); ++i) {
    const Config c = basis->config(i);
    for (int j = 0; j < 6; ++j) {
      const int jn = (j + 1) % 6;
      for (Spin s : kSpins) {
        for (auto [from, to] : {std::pair{j, jn}, std::pair{jn, j}}) {
          if (auto h = hop(c, s, from, to)) {
            CHECK(basis->find(h->target).has_value());
            CHECK(popcount(h->target.up) == 2);
            CHECK(popcount(h->target.down) == 3);
          }
        }
      }
    }
  }
}

TEST_CASE("translation covariance of the Hamiltonian") {
  ModelParams p{.t = 1, .U = 2.2, .V = -0.7, .L = 6};
  auto basis = build_sector_basis(6, 3, 3);
  HamiltonianOperator op(p, basis);

  // Build the translation matrix action on amplitudes.
  auto translate_vec = [&](const Eigen::VectorXd& v) {
    Eigen::VectorXd out = Eigen::VectorXd::Zero(v.size());
    for (std::size_t i = 0; i < basis->size(); ++i) {
      const auto tr = translate_one(basis->config(i), 6);
      out[static_cast<Eigen::Index>(basis->index(tr.config))] +=
          tr.sign * v[static_cast<Eigen::Index>(i)];
    }
    return out;
  };

  for (int trial = 0; trial < 10; ++trial) {
    Eigen::VectorXd v = random_state(basis->size(), 300 + trial);
    Eigen::VectorXd w = random_state(basis->size(), 400 + trial);
    const double lhs = translate_vec(w).dot(op.apply(translate_vec(v)));
    const double rhs = w.dot(op.apply(v));
    CHECK(lhs == doctest::Approx(rhs).epsilon(1e-12));
  }
}

TEST_CASE("model params validation") {
  CHECK_THROWS(ModelParams{.t = 1, .U = 0, .V = 0, .L = 3}.validate());
  CHECK_THROWS(ModelParams{.t = 0, .U = 0, .V = 0, .L = 4}.validate());
  CHECK_THROWS(ModelParams{.t = -1, .U = 0, .V = 0, .L = 4}.validate());
  CHECK_NOTHROW(ModelParams{.t = 1, .U = 0, .V = 0, .L = 4}.validate());
}
