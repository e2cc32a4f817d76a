#pragma once

// Matrix-free Lanczos ground-state solver over a SectorBasis, plus the dense
// Hermitian oracle used by tests and small-sector calibration.
//
// The Lanczos keeps an explicitly projected matrix and reorthogonalizes every
// new direction against the whole active basis (two passes), thick-restarting
// when the basis hits max_basis so memory stays bounded on large sectors.

#include <cstdint>
#include <vector>

#include "ehmep/model.hpp"

namespace ehmep {

struct EdOptions {
  int max_iterations = 4000;
  double convergence_tol = 1e-11;  // energy tolerance, units of t
  bool reorthogonalize = true;
  std::uint64_t seed = 1;
  // Thick-restart window; 0 picks a size from the sector dimension so the
  // Krylov memory stays within desk-scale RAM.
  int max_basis = 0;
  int keep_on_restart = 0;  // 0: max_basis / 4
};

struct EdResult {
  double energy = 0.0;
  StateVector vector;
  int iterations = 0;          // Hamiltonian applications
  double residual_norm = 0.0;  // ||Hv - Ev||, recomputed at exit
  double degenerate_within = 0.0;  // gap estimate to the next Ritz value
  bool degenerate = false;         // gap < 100 * convergence_tol
  bool converged = false;
};

EdResult lanczos_ground_state(const ModelParams& params,
                              const std::shared_ptr<const SectorBasis>& basis,
                              const EdOptions& opts = {});

// Lowest k eigenpairs via locking/deflation; pairs are returned ordered by
// energy. Used to symmetrize correlators over a degenerate ground multiplet.
std::vector<EdResult> lanczos_lowest_states(
    const ModelParams& params, const std::shared_ptr<const SectorBasis>& basis,
    const EdOptions& opts, int count);

// Full dense diagonalization; sector dimension must be <= 20 000.
EdResult dense_ground_state(const ModelParams& params,
                            const std::shared_ptr<const SectorBasis>& basis);

// All dense eigenpairs within `window` of the ground energy.
std::vector<EdResult> dense_lowest_subspace(
    const ModelParams& params, const std::shared_ptr<const SectorBasis>& basis,
    double window);

}  // namespace ehmep
