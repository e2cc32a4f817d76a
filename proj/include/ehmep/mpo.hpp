#pragma once

// Matrix product operator for the extended Hubbard ring. The chain is open
// in MPO terms; the wraparound bond (hopping and density) travels through
// dedicated long-range channels that carry the fermionic string from site 1
// to site L, so the periodic Hamiltonian keeps a constant bond dimension.

#include <vector>

#include "ehmep/model.hpp"
#include "ehmep/qn.hpp"
#include "ehmep/site_ops.hpp"

namespace ehmep {

struct MpoEntry {
  int row = 0;
  int col = 0;
  Mat4 op;
  Qn charge;  // q(out) - q(in) of every nonzero element
};

struct SiteMpo {
  int rows = 1, cols = 1;
  std::vector<MpoEntry> entries;
};

struct Mpo {
  int L = 0;
  std::vector<SiteMpo> w;                 // per site
  std::vector<std::vector<Qn>> charges;   // per bond 0..L: channel charges

  const SiteMpo& site(int j) const { return w[static_cast<std::size_t>(j)]; }
};

Mpo build_ehm_mpo(const ModelParams& params);

// Dense matrix of the MPO on the full 4^L space (tests only, L <= 6).
Eigen::MatrixXd mpo_to_dense(const Mpo& mpo);

}  // namespace ehmep
