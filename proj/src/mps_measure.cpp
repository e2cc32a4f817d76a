// Interim stubs so the ED-side library links during bring-up; replaced by the
// full MPS measurement engine.
#include "ehmep/mps_measure.hpp"
#include <stdexcept>
namespace ehmep {
void mps_spin_z_correlations(const MpsState&, Eigen::MatrixXd&, Eigen::VectorXd&) { throw std::logic_error("mps backend pending"); }
void mps_density_correlations(const MpsState&, Eigen::MatrixXd&, Eigen::VectorXd&) { throw std::logic_error("mps backend pending"); }
void mps_bond_kinetic_correlations(const MpsState&, Eigen::MatrixXd&, Eigen::VectorXd&) { throw std::logic_error("mps backend pending"); }
Eigen::Matrix3d mps_pairing_matrix(const MpsState&) { throw std::logic_error("mps backend pending"); }
}  // namespace ehmep
