#pragma once

// Order parameters and pairing correlators of the extended Hubbard chain,
// evaluated on the momentum grid k = 2*pi*n/L. These give phase signatures
// independent of the entanglement-based detection.
//
//   O_sdw(k) = (1/L) sum_{m,n} e^{ik(m-n)} [<sz_m sz_n> - <sz_m><sz_n>]
//   O_cdw(k) = same with n_m
//   O_bow(k) = same with the bond kinetic-energy operator B_{m,m+1}
//   pairing: O = sum over pair-operator combinations <D^dag D>, with the
//   singlet set {Delta_nn^-, Delta_onsite} and the triplet Delta_nn^+.

#include <complex>
#include <vector>

#include "ehmep/ground_state.hpp"

namespace ehmep {

struct OrderParameterSet {
  std::vector<double> k;  // momentum grid
  std::vector<double> sdw, cdw, bow;
  double pairing_singlet = 0.0;
  double pairing_triplet = 0.0;
};

double order_parameter_sdw(const GroundStateResult& state, double k);
double order_parameter_cdw(const GroundStateResult& state, double k);
double order_parameter_bow(const GroundStateResult& state, double k);

struct PairingValues {
  double singlet = 0.0;
  double triplet = 0.0;
  double onsite_singlet = 0.0;  // the Delta_0 contribution alone
};
PairingValues pairing_order_parameters(const GroundStateResult& state);

// Everything on the full momentum grid; `with_bow` and `with_pairing` gate
// the more expensive correlators.
OrderParameterSet order_parameters(const GroundStateResult& state,
                                   bool with_bow = true,
                                   bool with_pairing = true);

// Connected structure factors (1/L) sum e^{ik(m-n)} [<AB> - <A><B>] from a
// precomputed correlation matrix; exposed for tests.
double structure_factor(const Eigen::MatrixXd& corr,
                        const Eigen::VectorXd& mean, double k);

}  // namespace ehmep
