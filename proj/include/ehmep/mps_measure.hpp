#pragma once

// Correlation measurements on matrix product states: diagonal two-point
// functions, bond kinetic-energy correlators, and nearest-neighbor pairing.
// Translation invariance of the periodic ground state is used to reduce the
// pairing and bond sums to one reference site.

#include <Eigen/Dense>

namespace ehmep {

struct MpsState;

// <sz_m sz_n> matrix and <sz_m> means.
void mps_spin_z_correlations(const MpsState& mps, Eigen::MatrixXd& corr,
                             Eigen::VectorXd& mean);

// <n_m n_n> and <n_m>.
void mps_density_correlations(const MpsState& mps, Eigen::MatrixXd& corr,
                              Eigen::VectorXd& mean);

// <B_m B_n> and <B_m> for the bond operator B_{m,m+1}.
void mps_bond_kinetic_correlations(const MpsState& mps, Eigen::MatrixXd& corr,
                                   Eigen::VectorXd& mean);

// <Delta_x^dag Delta_x'> for x, x' in {-1, 0, +1}.
Eigen::Matrix3d mps_pairing_matrix(const MpsState& mps);

}  // namespace ehmep
