#pragma once

// Local operator algebra on the 4-state site space {empty, up, down, updown}
// and a Jordan-Wigner term compiler: any monomial of creation/annihilation
// operators is turned into per-site 4x4 factors with all fermionic strings
// folded in. Mode order is site-major (site 1 up, site 1 down, site 2 up,
// ...), which keeps every compiled factor local to its site range.

#include <Eigen/Dense>
#include <optional>
#include <vector>

#include "ehmep/fock.hpp"
#include "ehmep/qn.hpp"

namespace ehmep {

using Mat4 = Eigen::Matrix4d;

struct FermionOp {
  int site = 0;
  Spin spin = Spin::up;
  bool dagger = false;
};

inline FermionOp create_op(int site, Spin s) { return {site, s, true}; }
inline FermionOp annihilate_op(int site, Spin s) { return {site, s, false}; }

struct CompiledTerm {
  int first_site = 0;
  int last_site = 0;
  std::vector<Mat4> factors;  // one per site in [first_site, last_site]

  const Mat4& factor(int site) const {
    return factors[static_cast<std::size_t>(site - first_site)];
  }
};

// Compiles the operator product ops[0] * ops[1] * ... (leftmost acts last).
// The monomial must contain an even number of operators so the string closes
// inside the compiled range.
CompiledTerm compile_monomial(const std::vector<FermionOp>& ops);

// Common single-site matrices.
Mat4 site_identity();
Mat4 site_parity();           // (-1)^n
Mat4 site_number();           // n_up + n_down
Mat4 site_number(Spin s);
Mat4 site_double_occupancy();  // n_up * n_down
Mat4 site_spin_z();            // (n_up - n_down) / 2

// Charge of a matrix with a definite (N, Sz) shift; empty when mixed.
std::optional<Qn> matrix_charge(const Mat4& m);

}  // namespace ehmep
