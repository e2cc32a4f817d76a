#include "ehmep/mpo.hpp"

#include <stdexcept>

namespace ehmep {

namespace {

void add_entry(SiteMpo& w, int row, int col, const Mat4& op) {
  if (op.cwiseAbs().maxCoeff() == 0.0) return;
  for (auto& e : w.entries) {
    if (e.row == row && e.col == col) {
      e.op += op;
      auto q = matrix_charge(e.op);
      if (!q) throw std::logic_error("mixed-charge MPO entry");
      e.charge = *q;
      return;
    }
  }
  auto q = matrix_charge(op);
  if (!q) throw std::logic_error("mixed-charge MPO entry");
  w.entries.push_back({row, col, op, *q});
}

}  // namespace

Mpo build_ehm_mpo(const ModelParams& p) {
  p.validate();
  const int L = p.L;

  // Channel layout: 0 identity-before, 1..5 nearest-neighbor carriers
  // (4 hopping + 1 density), 6..10 wraparound carriers, 11 identity-after.
  constexpr int kBefore = 0;
  constexpr int kNn0 = 1;
  constexpr int kLr0 = 6;
  constexpr int kDone = 11;
  constexpr int kDim = 12;

  // Bond terms j -> j+1 as (left factor, right factor) monomial pairs.
  struct BondTerm {
    Mat4 left, right;
  };
  auto bond_terms = [&](int j, int jn) {
    std::vector<BondTerm> terms;
    for (Spin s : kSpins) {
      for (auto [a, b] : {std::pair{j, jn}, std::pair{jn, j}}) {
        CompiledTerm t = compile_monomial({create_op(a, s), annihilate_op(b, s)});
        BondTerm bt;
        bt.left = -p.t * t.factor(j);
        bt.right = t.factor(jn);
        terms.push_back(bt);
      }
    }
    // V n_j n_{j+1}.
    terms.push_back({p.V * site_number(), site_number()});
    return terms;
  };

  Mpo mpo;
  mpo.L = L;
  mpo.w.resize(static_cast<std::size_t>(L));

  // Wraparound factors, compiled across the whole chain: opening at site 0,
  // string through the bulk, closing at site L-1.
  struct LongTerm {
    Mat4 open, close, string;
  };
  std::vector<LongTerm> wrap;
  for (Spin s : kSpins) {
    for (auto [a, b] : {std::pair{L - 1, 0}, std::pair{0, L - 1}}) {
      CompiledTerm t = compile_monomial({create_op(a, s), annihilate_op(b, s)});
      LongTerm lt;
      lt.open = -p.t * t.factor(0);
      lt.close = t.factor(L - 1);
      lt.string = L > 2 ? t.factor(1) : site_identity();
      wrap.push_back(lt);
    }
  }
  wrap.push_back({p.V * site_number(), site_number(), site_identity()});

  const Mat4 onsite = p.U * site_double_occupancy();

  for (int j = 0; j < L; ++j) {
    SiteMpo& w = mpo.w[static_cast<std::size_t>(j)];
    const bool is_first = j == 0;
    const bool is_last = j == L - 1;
    w.rows = is_first ? 1 : kDim;
    w.cols = is_last ? 1 : kDim;
    const int row_before = kBefore;          // row 0 both at site 0 and bulk
    const int col_done = is_last ? 0 : kDone;

    // Pass-through identities.
    if (!is_last) add_entry(w, row_before, kBefore, site_identity());
    if (!is_first) add_entry(w, kDone, col_done, site_identity());

    // On-site interaction.
    add_entry(w, row_before, col_done, onsite);

    // Nearest-neighbor bond (j, j+1): open on j, close on j+1.
    if (!is_last) {
      auto terms = bond_terms(j, j + 1);
      for (std::size_t k = 0; k < terms.size(); ++k)
        add_entry(w, row_before, kNn0 + static_cast<int>(k), terms[k].left);
    }
    if (!is_first) {
      auto terms = bond_terms(j - 1, j);
      for (std::size_t k = 0; k < terms.size(); ++k)
        add_entry(w, kNn0 + static_cast<int>(k), col_done, terms[k].right);
    }

    // Wraparound channels.
    for (std::size_t k = 0; k < wrap.size(); ++k) {
      const int ch = kLr0 + static_cast<int>(k);
      if (is_first) {
        add_entry(w, row_before, is_last ? col_done : ch, wrap[k].open);
      } else if (is_last) {
        add_entry(w, ch, col_done, wrap[k].close);
      } else {
        add_entry(w, ch, ch, wrap[k].string);
      }
    }
  }

  // Propagate channel charges bond by bond and check consistency.
  mpo.charges.assign(static_cast<std::size_t>(L + 1), {});
  mpo.charges[0] = {Qn{0, 0}};
  for (int j = 0; j < L; ++j) {
    const SiteMpo& w = mpo.site(j);
    std::vector<Qn> col_charge(static_cast<std::size_t>(w.cols), Qn{0, 0});
    std::vector<bool> seen(static_cast<std::size_t>(w.cols), false);
    for (const auto& e : w.entries) {
      const Qn q = mpo.charges[static_cast<std::size_t>(j)]
                              [static_cast<std::size_t>(e.row)] +
                   e.charge;
      auto& slot = col_charge[static_cast<std::size_t>(e.col)];
      if (seen[static_cast<std::size_t>(e.col)] && !(slot == q))
        throw std::logic_error("inconsistent MPO channel charge");
      slot = q;
      seen[static_cast<std::size_t>(e.col)] = true;
    }
    mpo.charges[static_cast<std::size_t>(j + 1)] = std::move(col_charge);
  }
  if (!(mpo.charges.back()[0] == Qn{0, 0}))
    throw std::logic_error("Hamiltonian MPO carries net charge");
  return mpo;
}

Eigen::MatrixXd mpo_to_dense(const Mpo& mpo) {
  const int L = mpo.L;
  if (L > 6) throw std::length_error("dense MPO contraction limited to L <= 6");
  std::size_t dim = 1;
  for (int j = 0; j < L; ++j) dim *= kPhysDim;

  // Row-vector of matrices, contracted site by site.
  std::vector<Eigen::MatrixXd> acc(
      static_cast<std::size_t>(mpo.site(0).rows),
      Eigen::MatrixXd::Zero(1, 1));
  acc[0](0, 0) = 1.0;
  std::size_t cur = 1;
  for (int j = 0; j < L; ++j) {
    const SiteMpo& w = mpo.site(j);
    std::vector<Eigen::MatrixXd> next(
        static_cast<std::size_t>(w.cols),
        Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(cur * kPhysDim),
                              static_cast<Eigen::Index>(cur * kPhysDim)));
    for (const auto& e : w.entries) {
      const auto& left = acc[static_cast<std::size_t>(e.row)];
      auto& out = next[static_cast<std::size_t>(e.col)];
      for (int a = 0; a < kPhysDim; ++a)
        for (int b = 0; b < kPhysDim; ++b)
          if (e.op(a, b) != 0.0)
            out.block(static_cast<Eigen::Index>(a * cur),
                      static_cast<Eigen::Index>(b * cur),
                      static_cast<Eigen::Index>(cur),
                      static_cast<Eigen::Index>(cur)) += e.op(a, b) * left;
    }
    acc = std::move(next);
    cur *= kPhysDim;
  }
  return acc[0];
}

}  // namespace ehmep
