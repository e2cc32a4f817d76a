#pragma once

// Solver-agnostic ground-state record: parameters, energy, the spin-resolved
// quadrature matrices <a^dag_{i,s} a_{j,s}>, and an optional raw-state handle
// for higher-order correlators.

#include <Eigen/Dense>
#include <memory>
#include <string>
#include <vector>

#include "ehmep/ed.hpp"
#include "ehmep/model.hpp"

namespace ehmep {

struct MpsState;  // defined in mps.hpp

// Raw ED states (possibly a degenerate multiplet with mixture weights).
struct EdStateHandle {
  std::shared_ptr<const SectorBasis> basis;
  std::vector<Eigen::VectorXd> states;
  std::vector<double> weights;  // sum to 1
};

struct MpsStateHandle {
  std::shared_ptr<const MpsState> mps;
};

enum class SolverKind { ed_lanczos, ed_dense, dmrg };

std::string to_string(SolverKind k);

struct GroundStateResult {
  ModelParams params;
  int n_up = 0, n_down = 0;
  double energy = 0.0;
  SolverKind source = SolverKind::ed_lanczos;
  // quad[s](i, j) = <a^dag_{i,s} a_{j,s}>, sites 0-based; Hermitian.
  Eigen::MatrixXcd quad_up, quad_down;
  bool degenerate = false;
  int degeneracy = 1;
  bool converged = true;
  std::string solver_info;

  std::shared_ptr<const EdStateHandle> ed_handle;
  std::shared_ptr<const MpsStateHandle> mps_handle;

  const Eigen::MatrixXcd& quadratures(Spin s) const {
    return s == Spin::up ? quad_up : quad_down;
  }
  int particle_count() const { return n_up + n_down; }
  double trace_particle_number() const {
    return quad_up.diagonal().real().sum() + quad_down.diagonal().real().sum();
  }
};

// Quadratures of a statistical mixture of sector states. The per-spin factors
// of the basis let the two-point functions contract through the Gram matrices
// of the state matrix, so the cost is one dense product per spin.
std::pair<Eigen::MatrixXcd, Eigen::MatrixXcd> quadratures_from_states(
    const SectorBasis& basis, const std::vector<Eigen::VectorXd>& states,
    const std::vector<double>& weights);

// Solve + measure: Lanczos (or dense) ground state, degeneracy-symmetrized
// quadratures, and a raw handle for the correlation module.
GroundStateResult ed_ground_state_result(const ModelParams& params,
                                         const EdOptions& opts,
                                         bool prefer_dense = false);

}  // namespace ehmep
