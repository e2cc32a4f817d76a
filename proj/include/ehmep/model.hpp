#pragma once

// Half-filled extended Hubbard chain on a ring: symmetry-sector basis
// enumeration and matrix-free application of
//
//   H = -t sum_{j,s} (a^dag_{j,s} a_{j+1,s} + h.c.)
//       + U sum_j n_{j,up} n_{j,down} + V sum_j n_j n_{j+1},
//
// with site L+1 = 1. The per-spin hopping acts on one occupation word only,
// so H factorizes as H_up (x) 1 + 1 (x) H_down + diagonal, which is what the
// sparse kernel below exploits.

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <cstdint>
#include <memory>
#include <optional>
#include <stdexcept>
#include <vector>

#include "ehmep/fock.hpp"

namespace ehmep {

struct ModelParams {
  double t = 1.0;  // hopping amplitude; energies are reported in units of t
  double U = 0.0;  // on-site coupling, units of t
  double V = 0.0;  // inter-site coupling, units of t
  int L = 2;       // lattice size, positive even
  bool pbc = true; // always periodic here; kept for forward compatibility

  void validate() const {
    if (L < 2 || L % 2 != 0) throw std::invalid_argument("L must be even and >= 2");
    if (!(t > 0.0)) throw std::invalid_argument("t must be positive");
    if (!pbc) throw std::invalid_argument("only periodic boundaries are supported");
  }
};

std::uint64_t binomial(int n, int k);

// Fixed-(Nup, Ndown) Fock sector. Configurations are ordered by the canonical
// key (up word, then down word), realized as a product of the two per-spin
// word lists, each sorted ascending: index = rank_up * #down + rank_down.
class SectorBasis {
 public:
  SectorBasis(int L, int nUp, int nDown);

  int L() const { return L_; }
  int n_up() const { return n_up_; }
  int n_down() const { return n_down_; }
  std::size_t size() const { return size_; }
  std::size_t up_count() const { return up_words_.size(); }
  std::size_t down_count() const { return down_words_.size(); }

  const std::vector<Word>& up_words() const { return up_words_; }
  const std::vector<Word>& down_words() const { return down_words_; }

  Config config(std::size_t i) const {
    return {up_words_[i / down_words_.size()], down_words_[i % down_words_.size()]};
  }
  std::size_t index(Config c) const;                 // throws if absent
  std::optional<std::size_t> find(Config c) const;   // nullopt if absent

  std::size_t up_rank(Word w) const;
  std::size_t down_rank(Word w) const;

 private:
  int L_, n_up_, n_down_;
  std::size_t size_;
  std::vector<Word> up_words_, down_words_;
};

std::shared_ptr<const SectorBasis> build_sector_basis(int L, int nUp, int nDown);

struct StateVector {
  std::shared_ptr<const SectorBasis> basis;
  // H is real symmetric in the canonical configuration basis, so real
  // amplitudes are fully general for ground-state work (see decisions log).
  Eigen::VectorXd amp;

  double norm() const { return amp.norm(); }
};

// U * (#doubly occupied sites) + V * sum_j n_j n_{j+1} with wraparound.
inline double diagonal_energy(const ModelParams& p, Config c) {
  return p.U * double_occupancy(c) + p.V * neighbor_density_sum(c, p.L);
}

// Matrix-free H restricted to a sector. Per-spin hopping is precomputed as a
// sparse matrix over that spin's word list; the diagonal is evaluated from
// the occupation words on the fly.
class HamiltonianOperator {
 public:
  HamiltonianOperator(const ModelParams& params,
                      std::shared_ptr<const SectorBasis> basis);

  void apply(const Eigen::VectorXd& in, Eigen::VectorXd& out) const;
  Eigen::VectorXd apply(const Eigen::VectorXd& in) const;

  Eigen::MatrixXd to_dense() const;  // small sectors only (tests, oracle)

  const SectorBasis& basis() const { return *basis_; }
  std::shared_ptr<const SectorBasis> basis_ptr() const { return basis_; }
  const ModelParams& params() const { return params_; }

 private:
  ModelParams params_;
  std::shared_ptr<const SectorBasis> basis_;
  Eigen::SparseMatrix<double, Eigen::RowMajor> hop_up_, hop_down_;
  // Cached per-word pieces of the diagonal; the up/down cross terms are
  // assembled from these inside apply().
  std::vector<Word> up_rot_, down_rot_;
  std::vector<double> up_bond_, down_bond_;
};

StateVector apply_hamiltonian(const ModelParams& params,
                              const std::shared_ptr<const SectorBasis>& basis,
                              const StateVector& v);

}  // namespace ehmep
