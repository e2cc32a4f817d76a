#include "ehmep/model.hpp"

#include <algorithm>
#include <limits>

namespace ehmep {

std::uint64_t binomial(int n, int k) {
  if (k < 0 || k > n) return 0;
  k = std::min(k, n - k);
  std::uint64_t r = 1;
  for (int i = 1; i <= k; ++i) {
    // r * (n - k + i) cannot overflow for the lattice sizes the basis
    // builder accepts; guard anyway.
    const std::uint64_t num = static_cast<std::uint64_t>(n - k + i);
    if (r > std::numeric_limits<std::uint64_t>::max() / num)
      throw std::overflow_error("binomial overflow");
    r = r * num / i;
  }
  return r;
}

namespace {

std::vector<Word> words_with_popcount(int L, int n) {
  std::vector<Word> out;
  out.reserve(binomial(L, n));
  if (n == 0) {
    out.push_back(0);
    return out;
  }
  Word w = mask_bits(n);
  const Word limit = Word{1} << L;
  while (w < limit) {
    out.push_back(w);
    // Gosper's hack: next word with the same popcount, ascending.
    const Word c = w & -w;
    const Word r = w + c;
    w = (((r ^ w) >> 2) / c) | r;
  }
  return out;
}

std::size_t rank_in(const std::vector<Word>& words, Word w) {
  auto it = std::lower_bound(words.begin(), words.end(), w);
  if (it == words.end() || *it != w) return words.size();
  return static_cast<std::size_t>(it - words.begin());
}

}  // namespace

SectorBasis::SectorBasis(int L, int nUp, int nDown)
    : L_(L), n_up_(nUp), n_down_(nDown) {
  if (L < 1 || L > 62) throw std::invalid_argument("sector basis supports 1 <= L <= 62");
  if (nUp < 0 || nUp > L || nDown < 0 || nDown > L)
    throw std::invalid_argument("particle count out of range [0, L]");
  const std::uint64_t nu = binomial(L, nUp), nd = binomial(L, nDown);
  if (nd != 0 && nu > std::numeric_limits<std::uint64_t>::max() / nd)
    throw std::overflow_error("sector dimension overflows the index type");
  size_ = static_cast<std::size_t>(nu * nd);
  up_words_ = words_with_popcount(L, nUp);
  down_words_ = words_with_popcount(L, nDown);
}

std::size_t SectorBasis::up_rank(Word w) const { return rank_in(up_words_, w); }
std::size_t SectorBasis::down_rank(Word w) const { return rank_in(down_words_, w); }

std::optional<std::size_t> SectorBasis::find(Config c) const {
  const std::size_t iu = up_rank(c.up);
  if (iu == up_words_.size()) return std::nullopt;
  const std::size_t id = down_rank(c.down);
  if (id == down_words_.size()) return std::nullopt;
  return iu * down_words_.size() + id;
}

std::size_t SectorBasis::index(Config c) const {
  auto i = find(c);
  if (!i) throw std::out_of_range("configuration not in sector");
  return *i;
}

std::shared_ptr<const SectorBasis> build_sector_basis(int L, int nUp, int nDown) {
  return std::make_shared<const SectorBasis>(L, nUp, nDown);
}

namespace {

// Sparse one-spin hopping matrix over a sorted word list:
//   -t sum_j (a^dag_{j+1} a_j + a^dag_j a_{j+1}),  j+1 taken mod L,
// with Jordan-Wigner parities local to the word.
Eigen::SparseMatrix<double, Eigen::RowMajor> build_hop_matrix(
    const std::vector<Word>& words, int L, double t) {
  std::vector<Eigen::Triplet<double>> trip;
  trip.reserve(words.size() * static_cast<std::size_t>(L));
  for (std::size_t col = 0; col < words.size(); ++col) {
    const Config c{words[col], 0};
    for (int j = 0; j < L; ++j) {
      const int jn = (j + 1) % L;
      for (auto [from, to] : {std::pair{j, jn}, std::pair{jn, j}}) {
        if (auto h = hop(c, Spin::up, from, to)) {
          const std::size_t row = rank_in(words, h->target.up);
          trip.emplace_back(static_cast<int>(row), static_cast<int>(col),
                            -t * h->sign);
        }
      }
    }
  }
  Eigen::SparseMatrix<double, Eigen::RowMajor> m(
      static_cast<int>(words.size()), static_cast<int>(words.size()));
  m.setFromTriplets(trip.begin(), trip.end());
  return m;
}

}  // namespace

HamiltonianOperator::HamiltonianOperator(
    const ModelParams& params, std::shared_ptr<const SectorBasis> basis)
    : params_(params), basis_(std::move(basis)) {
  params_.validate();
  if (basis_->L() != params_.L)
    throw std::invalid_argument("basis lattice size does not match params");
  hop_up_ = build_hop_matrix(basis_->up_words(), params_.L, params_.t);
  hop_down_ = build_hop_matrix(basis_->down_words(), params_.L, params_.t);
  const int L = params_.L;
  up_rot_.reserve(basis_->up_count());
  up_bond_.reserve(basis_->up_count());
  for (Word w : basis_->up_words()) {
    const Word r = rotl_ring(w, L);
    up_rot_.push_back(r);
    up_bond_.push_back(params_.V * popcount(w & r));
  }
  down_rot_.reserve(basis_->down_count());
  down_bond_.reserve(basis_->down_count());
  for (Word w : basis_->down_words()) {
    const Word r = rotl_ring(w, L);
    down_rot_.push_back(r);
    down_bond_.push_back(params_.V * popcount(w & r));
  }
}

void HamiltonianOperator::apply(const Eigen::VectorXd& in,
                                Eigen::VectorXd& out) const {
  const auto nu = static_cast<Eigen::Index>(basis_->up_count());
  const auto nd = static_cast<Eigen::Index>(basis_->down_count());
  if (in.size() != nu * nd)
    throw std::invalid_argument("state dimension does not match sector");
  out.resize(in.size());

  using RowMat =
      Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
  Eigen::Map<const RowMat> vin(in.data(), nu, nd);
  Eigen::Map<RowMat> vout(out.data(), nu, nd);

  // Hopping: (H_up (x) 1 + 1 (x) H_down) v.
  vout.noalias() = hop_up_ * vin;
  vout.noalias() += vin * hop_down_.transpose();

  // Diagonal interactions.
  const auto& uw = basis_->up_words();
  const auto& dw = basis_->down_words();
  const double U = params_.U, V = params_.V;
  for (Eigen::Index iu = 0; iu < nu; ++iu) {
    const Word u = uw[iu], ru = up_rot_[iu];
    const double ubond = up_bond_[iu];
    double* row = out.data() + iu * nd;
    const double* src = in.data() + iu * nd;
    for (Eigen::Index id = 0; id < nd; ++id) {
      const Word d = dw[id], rd = down_rot_[id];
      const double diag = U * popcount(u & d) + ubond + down_bond_[id] +
                          V * (popcount(u & rd) + popcount(d & ru));
      row[id] += diag * src[id];
    }
  }
}

Eigen::VectorXd HamiltonianOperator::apply(const Eigen::VectorXd& in) const {
  Eigen::VectorXd out;
  apply(in, out);
  return out;
}

Eigen::MatrixXd HamiltonianOperator::to_dense() const {
  const auto n = static_cast<Eigen::Index>(basis_->size());
  if (n > 20000) throw std::length_error("sector too large for dense assembly");
  const auto nd = static_cast<Eigen::Index>(basis_->down_count());
  Eigen::MatrixXd h = Eigen::MatrixXd::Zero(n, n);
  for (int k = 0; k < hop_up_.outerSize(); ++k)
    for (Eigen::SparseMatrix<double, Eigen::RowMajor>::InnerIterator it(hop_up_, k);
         it; ++it)
      for (Eigen::Index id = 0; id < nd; ++id)
        h(it.row() * nd + id, it.col() * nd + id) += it.value();
  const auto nu = static_cast<Eigen::Index>(basis_->up_count());
  for (int k = 0; k < hop_down_.outerSize(); ++k)
    for (Eigen::SparseMatrix<double, Eigen::RowMajor>::InnerIterator it(hop_down_, k);
         it; ++it)
      for (Eigen::Index iu = 0; iu < nu; ++iu)
        h(iu * nd + it.row(), iu * nd + it.col()) += it.value();
  for (Eigen::Index i = 0; i < n; ++i)
    h(i, i) += diagonal_energy(params_, basis_->config(i));
  return h;
}

StateVector apply_hamiltonian(const ModelParams& params,
                              const std::shared_ptr<const SectorBasis>& basis,
                              const StateVector& v) {
  HamiltonianOperator op(params, basis);
  StateVector out{basis, {}};
  op.apply(v.amp, out.amp);
  return out;
}

}  // namespace ehmep
