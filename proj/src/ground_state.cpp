#include "ehmep/ground_state.hpp"

#include <numeric>

namespace ehmep {

std::string to_string(SolverKind k) {
  switch (k) {
    case SolverKind::ed_lanczos: return "ed-lanczos";
    case SolverKind::ed_dense: return "ed-dense";
    case SolverKind::dmrg: return "dmrg";
  }
  return "unknown";
}

std::pair<Eigen::MatrixXcd, Eigen::MatrixXcd> quadratures_from_states(
    const SectorBasis& basis, const std::vector<Eigen::VectorXd>& states,
    const std::vector<double>& weights) {
  if (states.empty() || states.size() != weights.size())
    throw std::invalid_argument("state/weight mismatch");
  const auto nu = static_cast<Eigen::Index>(basis.up_count());
  const auto nd = static_cast<Eigen::Index>(basis.down_count());
  const int L = basis.L();

  using RowMat =
      Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
  Eigen::MatrixXd gram_up = Eigen::MatrixXd::Zero(nu, nu);
  Eigen::MatrixXd gram_down = Eigen::MatrixXd::Zero(nd, nd);
  for (std::size_t s = 0; s < states.size(); ++s) {
    Eigen::Map<const RowMat> v(states[s].data(), nu, nd);
    gram_up.noalias() += weights[s] * (v * v.transpose());
    gram_down.noalias() += weights[s] * (v.transpose() * v);
  }

  // <a^dag_i a_j> per spin: every word with site j occupied and site i free
  // (or i == j) contributes sign * gram[target_rank, source_rank].
  auto one_spin = [L](const std::vector<Word>& words,
                      const Eigen::MatrixXd& gram) {
    Eigen::MatrixXd q = Eigen::MatrixXd::Zero(L, L);
    for (std::size_t col = 0; col < words.size(); ++col) {
      const Config c{words[col], 0};
      for (int j = 0; j < L; ++j) {
        if (!occupied(words[col], j)) continue;
        q(j, j) += gram(static_cast<Eigen::Index>(col),
                        static_cast<Eigen::Index>(col));
        for (int i = 0; i < L; ++i) {
          if (i == j) continue;
          if (auto h = hop(c, Spin::up, j, i)) {
            auto row = std::lower_bound(words.begin(), words.end(),
                                        h->target.up) -
                       words.begin();
            q(i, j) += h->sign * gram(row, static_cast<Eigen::Index>(col));
          }
        }
      }
    }
    return q;
  };

  Eigen::MatrixXcd qu = one_spin(basis.up_words(), gram_up).cast<std::complex<double>>();
  Eigen::MatrixXcd qd = one_spin(basis.down_words(), gram_down).cast<std::complex<double>>();
  return {std::move(qu), std::move(qd)};
}

GroundStateResult ed_ground_state_result(const ModelParams& params,
                                         const EdOptions& opts,
                                         bool prefer_dense) {
  params.validate();
  auto basis = build_sector_basis(params.L, params.L / 2, params.L / 2);
  const double window = 100.0 * opts.convergence_tol;

  std::vector<Eigen::VectorXd> states;
  std::vector<double> energies;
  SolverKind kind;
  bool converged = true;
  std::string info;

  constexpr std::size_t kDenseFast = 2000;  // dense eigensolve stays subsecond
  if (prefer_dense && basis->size() <= kDenseFast) {
    auto subspace = dense_lowest_subspace(params, basis, window);
    for (auto& r : subspace) {
      states.push_back(std::move(r.vector.amp));
      energies.push_back(r.energy);
    }
    kind = SolverKind::ed_dense;
    info = "dense";
  } else {
    EdResult r = lanczos_ground_state(params, basis, opts);
    converged = r.converged;
    info = "lanczos iters=" + std::to_string(r.iterations) +
           " resid=" + std::to_string(r.residual_norm);
    kind = SolverKind::ed_lanczos;
    if (r.degenerate || r.degenerate_within < window) {
      // Resolve the multiplet: prefer the dense subspace on small sectors,
      // otherwise deflated Lanczos until the gap opens.
      if (basis->size() <= kDenseFast) {
        auto subspace = dense_lowest_subspace(params, basis, window);
        for (auto& s : subspace) {
          states.push_back(std::move(s.vector.amp));
          energies.push_back(s.energy);
        }
        kind = SolverKind::ed_dense;
        info += " degenerate->dense";
      } else {
        auto lowest = lanczos_lowest_states(params, basis, opts, 6);
        for (auto& s : lowest) {
          if (s.energy > lowest.front().energy + window) break;
          states.push_back(std::move(s.vector.amp));
          energies.push_back(s.energy);
          converged = converged && s.converged;
        }
        info += " degenerate->deflated";
      }
    } else {
      states.push_back(std::move(r.vector.amp));
      energies.push_back(r.energy);
    }
  }

  GroundStateResult g;
  g.params = params;
  g.n_up = basis->n_up();
  g.n_down = basis->n_down();
  g.energy = energies.front();
  g.source = kind;
  g.converged = converged;

  std::vector<double> weights(states.size(), 1.0 / static_cast<double>(states.size()));
  auto [qu, qd] = quadratures_from_states(*basis, states, weights);

  // A nondegenerate eigenstate of the ring is translation invariant, so a
  // translation-varying quadrature profile means the Ritz gap missed a
  // ground multiplet. Resolve it by deflation and remix.
  if (states.size() == 1 && kind == SolverKind::ed_lanczos) {
    double deviation = 0.0;
    for (const auto* q : {&qu, &qd}) {
      for (Eigen::Index d = 0; d < q->rows(); ++d) {
        std::complex<double> mean = 0.0;
        const auto L = q->rows();
        for (Eigen::Index j = 0; j < L; ++j) mean += (*q)((j + d) % L, j);
        mean /= static_cast<double>(L);
        for (Eigen::Index j = 0; j < L; ++j)
          deviation = std::max(deviation,
                               std::abs((*q)((j + d) % L, j) - mean));
      }
    }
    if (deviation > 1e-6) {
      auto lowest = lanczos_lowest_states(params, basis, opts, 6);
      states.clear();
      energies.clear();
      for (auto& s : lowest) {
        if (s.energy > lowest.front().energy + window) break;
        states.push_back(std::move(s.vector.amp));
        energies.push_back(s.energy);
      }
      info += " multiplet->deflated(x" + std::to_string(states.size()) + ")";
      weights.assign(states.size(), 1.0 / static_cast<double>(states.size()));
      std::tie(qu, qd) = quadratures_from_states(*basis, states, weights);
      g.energy = energies.front();
    }
  }

  g.degeneracy = static_cast<int>(states.size());
  g.degenerate = states.size() > 1;
  g.solver_info = info;
  g.quad_up = std::move(qu);
  g.quad_down = std::move(qd);

  auto handle = std::make_shared<EdStateHandle>();
  handle->basis = basis;
  handle->states = std::move(states);
  handle->weights = std::move(weights);
  g.ed_handle = std::move(handle);
  return g;
}

}  // namespace ehmep
