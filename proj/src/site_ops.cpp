#include "ehmep/site_ops.hpp"

#include <algorithm>
#include <stdexcept>

namespace ehmep {

namespace {

using Mat2 = Eigen::Matrix2d;

Mat2 mode_identity() { return Mat2::Identity(); }

Mat2 mode_z() {
  Mat2 z = Mat2::Identity();
  z(1, 1) = -1.0;
  return z;
}

Mat2 mode_raise() {  // |1><0|
  Mat2 m = Mat2::Zero();
  m(1, 0) = 1.0;
  return m;
}

Mat2 mode_lower() {  // |0><1|
  Mat2 m = Mat2::Zero();
  m(0, 1) = 1.0;
  return m;
}

// Site basis index: n_up + 2 * n_down, matching {empty, up, down, updown}.
Mat4 site_from_modes(const Mat2& up, const Mat2& down) {
  Mat4 out;
  for (int nu2 = 0; nu2 < 2; ++nu2)
    for (int nd2 = 0; nd2 < 2; ++nd2)
      for (int nu = 0; nu < 2; ++nu)
        for (int nd = 0; nd < 2; ++nd)
          out(nu2 + 2 * nd2, nu + 2 * nd) = up(nu2, nu) * down(nd2, nd);
  return out;
}

int mode_of(const FermionOp& op) {
  return 2 * op.site + (op.spin == Spin::down ? 1 : 0);
}

}  // namespace

CompiledTerm compile_monomial(const std::vector<FermionOp>& ops) {
  if (ops.empty() || ops.size() % 2 != 0)
    throw std::invalid_argument("compile_monomial needs an even operator count");
  int first = ops[0].site, last = ops[0].site;
  for (const auto& op : ops) {
    first = std::min(first, op.site);
    last = std::max(last, op.site);
  }
  const int nsites = last - first + 1;
  std::vector<Mat2> mode(static_cast<std::size_t>(2 * nsites), mode_identity());
  auto slot = [&](int m) -> Mat2& {
    return mode[static_cast<std::size_t>(m - 2 * first)];
  };

  // Apply operators in action order (rightmost first). Each one is the
  // tensor product of its raise/lower matrix with Z on every mode below it,
  // so left-multiplying slot by slot reproduces the product exactly.
  for (auto it = ops.rbegin(); it != ops.rend(); ++it) {
    const int m = mode_of(*it);
    for (int lower = 2 * first; lower < m; ++lower)
      slot(lower) = mode_z() * slot(lower);
    slot(m) = (it->dagger ? mode_raise() : mode_lower()) * slot(m);
  }

  CompiledTerm term;
  term.first_site = first;
  term.last_site = last;
  term.factors.reserve(static_cast<std::size_t>(nsites));
  for (int s = 0; s < nsites; ++s)
    term.factors.push_back(site_from_modes(mode[static_cast<std::size_t>(2 * s)],
                                           mode[static_cast<std::size_t>(2 * s + 1)]));
  return term;
}

Mat4 site_identity() { return Mat4::Identity(); }

Mat4 site_parity() { return site_from_modes(mode_z(), mode_z()); }

Mat4 site_number(Spin s) {
  Mat2 n = Mat2::Zero();
  n(1, 1) = 1.0;
  return s == Spin::up ? site_from_modes(n, mode_identity())
                       : site_from_modes(mode_identity(), n);
}

Mat4 site_number() { return site_number(Spin::up) + site_number(Spin::down); }

Mat4 site_double_occupancy() {
  Mat2 n = Mat2::Zero();
  n(1, 1) = 1.0;
  return site_from_modes(n, n);
}

Mat4 site_spin_z() {
  return 0.5 * (site_number(Spin::up) - site_number(Spin::down));
}

std::optional<Qn> matrix_charge(const Mat4& m) {
  std::optional<Qn> charge;
  for (int i = 0; i < 4; ++i) {
    for (int j = 0; j < 4; ++j) {
      if (m(i, j) == 0.0) continue;
      const Qn q = kPhysQn[i] - kPhysQn[j];
      if (charge && !(*charge == q)) return std::nullopt;
      charge = q;
    }
  }
  if (!charge) charge = Qn{0, 0};  // zero matrix: neutral by convention
  return charge;
}

}  // namespace ehmep
