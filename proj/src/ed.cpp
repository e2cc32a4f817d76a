#include "ehmep/ed.hpp"

#include <cmath>
#include <limits>
#include <random>
#include <sstream>

namespace ehmep {

namespace {

// Portable deterministic start vector: uniform in (-1, 1) from raw engine
// bits, independent of libstdc++ distribution internals.
Eigen::VectorXd seeded_vector(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  Eigen::VectorXd v(static_cast<Eigen::Index>(n));
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
    v[i] = 2.0 * u - 1.0;
  }
  return v;
}

void check_finite(const Eigen::VectorXd& v, int iteration) {
  if (!v.allFinite()) {
    std::ostringstream msg;
    msg << "Lanczos produced a non-finite vector at matvec " << iteration
        << "; aborting (check couplings and start vector)";
    throw std::runtime_error(msg.str());
  }
}

// Thick-restart Lanczos with an explicitly projected matrix.
//
// Invariant: `basis` holds at most one direction beyond `completed`; columns
// 0..completed-1 of `projected` are exact, and the trailing direction couples
// to the completed block only through its recorded beta entries.
class LanczosEngine {
 public:
  LanczosEngine(const HamiltonianOperator& op, const EdOptions& opts,
                std::vector<Eigen::VectorXd> locked_vectors)
      : op_(op), opts_(opts), locked_(std::move(locked_vectors)) {}

  int matvecs() const { return matvecs_; }

  void start(Eigen::VectorXd v) {
    orthogonalize(v);
    if (v.norm() < 1e-12) {
      v = seeded_vector(static_cast<std::size_t>(v.size()),
                        opts_.seed * 7919 + 13);
      orthogonalize(v);
    }
    v.normalize();
    basis_.assign(1, std::move(v));
    projected_ = Eigen::MatrixXd::Zero(1, 1);
    completed_ = 0;
  }

  bool has_pending() const {
    return static_cast<int>(basis_.size()) == completed_ + 1;
  }

  // Applies H to the first incomplete direction and extends the Krylov
  // space. Returns the norm of the new orthogonal remainder.
  double step() {
    Eigen::VectorXd w = op_.apply(basis_[completed_]);
    ++matvecs_;
    check_finite(w, matvecs_);
    const int k = completed_;
    for (int i = 0; i <= k; ++i) {
      const double c = basis_[i].dot(w);
      projected_(i, k) = c;
      projected_(k, i) = c;
    }
    ++completed_;
    orthogonalize(w);
    const double beta = w.norm();
    if (beta > 1e-14) {
      basis_.push_back(w / beta);
      const Eigen::Index m = projected_.rows();
      Eigen::MatrixXd grown = Eigen::MatrixXd::Zero(m + 1, m + 1);
      grown.topLeftCorner(m, m) = projected_;
      grown(m, k) = beta;
      grown(k, m) = beta;
      projected_.swap(grown);
    }
    return beta;
  }

  // Ritz data of the completed block: value, residual estimate for the
  // lowest pair, and gap to the next Ritz value.
  struct Ritz {
    double value;
    double residual_estimate;
    double gap;
  };
  Ritz analyze() const {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(
        projected_.topLeftCorner(completed_, completed_));
    Ritz r;
    r.value = es.eigenvalues()(0);
    double beta = 0.0;
    if (has_pending()) beta = projected_(completed_, completed_ - 1);
    r.residual_estimate = std::abs(beta * es.eigenvectors()(completed_ - 1, 0));
    r.gap = completed_ > 1
                ? es.eigenvalues()(1) - es.eigenvalues()(0)
                : std::numeric_limits<double>::infinity();
    return r;
  }

  Eigen::VectorXd ritz_vector(int which = 0) const {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(
        projected_.topLeftCorner(completed_, completed_));
    Eigen::VectorXd y = Eigen::VectorXd::Zero(basis_[0].size());
    for (int i = 0; i < completed_; ++i)
      y += es.eigenvectors()(i, which) * basis_[i];
    y.normalize();
    return y;
  }

  void thick_restart(int keep) {
    keep = std::min(keep, completed_);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(
        projected_.topLeftCorner(completed_, completed_));
    const bool pending = has_pending();
    const double beta =
        pending ? projected_(completed_, completed_ - 1) : 0.0;
    std::vector<Eigen::VectorXd> fresh;
    fresh.reserve(static_cast<std::size_t>(keep) + 1);
    for (int j = 0; j < keep; ++j) {
      Eigen::VectorXd y = Eigen::VectorXd::Zero(basis_[0].size());
      for (int i = 0; i < completed_; ++i)
        y += es.eigenvectors()(i, j) * basis_[i];
      fresh.push_back(std::move(y));
    }
    const int size = keep + (pending ? 1 : 0);
    Eigen::MatrixXd p = Eigen::MatrixXd::Zero(size, size);
    for (int j = 0; j < keep; ++j) p(j, j) = es.eigenvalues()(j);
    if (pending) {
      fresh.push_back(basis_.back());
      for (int j = 0; j < keep; ++j) {
        const double h = beta * es.eigenvectors()(completed_ - 1, j);
        p(keep, j) = h;
        p(j, keep) = h;
      }
    }
    basis_ = std::move(fresh);
    projected_ = std::move(p);
    completed_ = keep;
  }

  int basis_size() const { return static_cast<int>(basis_.size()); }
  int completed() const { return completed_; }

 private:
  void orthogonalize(Eigen::VectorXd& w) const {
    const int passes = opts_.reorthogonalize ? 2 : 1;
    for (int pass = 0; pass < passes; ++pass) {
      for (const auto& v : locked_) w -= v.dot(w) * v;
      for (const auto& v : basis_) w -= v.dot(w) * v;
    }
  }

  const HamiltonianOperator& op_;
  const EdOptions& opts_;
  std::vector<Eigen::VectorXd> locked_;
  std::vector<Eigen::VectorXd> basis_;
  Eigen::MatrixXd projected_;
  int completed_ = 0;
  int matvecs_ = 0;
};

int auto_max_basis(std::size_t dim) {
  if (dim <= 64) return static_cast<int>(dim);
  if (dim <= 200000) return 200;
  if (dim <= 2000000) return 96;
  return 40;
}

EdResult run_lanczos(const HamiltonianOperator& op, EdOptions opts,
                     const std::vector<Eigen::VectorXd>& locked) {
  if (op.basis().size() == 0) throw std::invalid_argument("empty sector");
  if (opts.max_iterations < 2 || !(opts.convergence_tol > 0) ||
      opts.max_basis < 0)
    throw std::invalid_argument("invalid EdOptions");
  if (opts.max_basis == 0) opts.max_basis = auto_max_basis(op.basis().size());
  opts.max_basis = std::max(opts.max_basis, 4);
  if (opts.keep_on_restart <= 0) opts.keep_on_restart = opts.max_basis / 4;

  const std::size_t dim = op.basis().size();
  const int reachable = static_cast<int>(
      std::min<std::size_t>(dim - locked.size(), 100000));

  LanczosEngine eng(op, opts, locked);
  eng.start(seeded_vector(dim, opts.seed + 0x9e3779b97f4a7c15ull * locked.size()));

  bool converged = false;
  while (eng.matvecs() < opts.max_iterations) {
    if (!eng.has_pending() && eng.completed() > 0) {
      converged = true;  // Krylov space exhausted: exact in this subspace
      break;
    }
    if (eng.basis_size() >= std::min(opts.max_basis, reachable + 1) &&
        eng.completed() >= 2) {
      if (eng.completed() >= reachable) {
        converged = true;
        break;
      }
      eng.thick_restart(opts.keep_on_restart);
    }
    eng.step();
    const auto ritz = eng.analyze();
    if (ritz.residual_estimate <= 2.0 * opts.convergence_tol &&
        eng.completed() >= 2) {
      converged = true;
      break;
    }
  }

  EdResult res;
  const auto ritz = eng.analyze();
  res.energy = ritz.value;
  res.vector = {op.basis_ptr(), eng.ritz_vector(0)};
  res.iterations = eng.matvecs();
  res.converged = converged;
  res.residual_norm =
      (op.apply(res.vector.amp) - res.energy * res.vector.amp).norm();
  res.degenerate_within = ritz.gap;
  res.degenerate = res.degenerate_within < 100.0 * opts.convergence_tol;
  return res;
}

}  // namespace

EdResult lanczos_ground_state(const ModelParams& params,
                              const std::shared_ptr<const SectorBasis>& basis,
                              const EdOptions& opts) {
  HamiltonianOperator op(params, basis);
  return run_lanczos(op, opts, {});
}

std::vector<EdResult> lanczos_lowest_states(
    const ModelParams& params, const std::shared_ptr<const SectorBasis>& basis,
    const EdOptions& opts, int count) {
  HamiltonianOperator op(params, basis);
  std::vector<EdResult> out;
  std::vector<Eigen::VectorXd> locked;
  count = std::min<int>(count, static_cast<int>(basis->size()));
  for (int i = 0; i < count; ++i) {
    EdResult r = run_lanczos(op, opts, locked);
    locked.push_back(r.vector.amp);
    out.push_back(std::move(r));
  }
  return out;
}

EdResult dense_ground_state(const ModelParams& params,
                            const std::shared_ptr<const SectorBasis>& basis) {
  if (basis->size() > 20000)
    throw std::length_error("dense solver limited to sector dimension 20000");
  HamiltonianOperator op(params, basis);
  if (basis->size() == 1) {
    EdResult res;
    res.energy = diagonal_energy(params, basis->config(0));
    res.vector = {basis, Eigen::VectorXd::Ones(1)};
    res.converged = true;
    res.degenerate_within = std::numeric_limits<double>::infinity();
    return res;
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(op.to_dense());
  EdResult res;
  res.energy = es.eigenvalues()(0);
  res.vector = {basis, es.eigenvectors().col(0)};
  res.converged = true;
  res.residual_norm =
      (op.apply(res.vector.amp) - res.energy * res.vector.amp).norm();
  res.degenerate_within = es.eigenvalues()(1) - es.eigenvalues()(0);
  res.degenerate = res.degenerate_within < 1e-9;
  return res;
}

std::vector<EdResult> dense_lowest_subspace(
    const ModelParams& params, const std::shared_ptr<const SectorBasis>& basis,
    double window) {
  if (basis->size() > 20000)
    throw std::length_error("dense solver limited to sector dimension 20000");
  HamiltonianOperator op(params, basis);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(op.to_dense());
  std::vector<EdResult> out;
  const double e0 = es.eigenvalues()(0);
  for (Eigen::Index j = 0; j < es.eigenvalues().size(); ++j) {
    if (es.eigenvalues()(j) > e0 + window) break;
    EdResult r;
    r.energy = es.eigenvalues()(j);
    r.vector = {basis, es.eigenvectors().col(j)};
    r.converged = true;
    out.push_back(std::move(r));
  }
  return out;
}

}  // namespace ehmep
