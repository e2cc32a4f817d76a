#include "ehmep/entanglement.hpp"

#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace ehmep {

CirculantProfile circulant_profile(const Eigen::MatrixXcd& quad) {
  const auto L = quad.rows();
  CirculantProfile p;
  p.x.assign(static_cast<std::size_t>(L), {0.0, 0.0});
  for (Eigen::Index delta = 0; delta < L; ++delta) {
    std::complex<double> acc = 0.0;
    for (Eigen::Index j = 0; j < L; ++j) acc += quad((j + delta) % L, j);
    p.x[static_cast<std::size_t>(delta)] = acc / static_cast<double>(L);
  }
  for (Eigen::Index delta = 0; delta < L; ++delta)
    for (Eigen::Index j = 0; j < L; ++j)
      p.max_deviation = std::max(
          p.max_deviation,
          std::abs(quad((j + delta) % L, j) - p.x[static_cast<std::size_t>(delta)]));
  return p;
}

ParticleRdm rdm_from_quadratures(const GroundStateResult& state) {
  const int L = state.params.L;
  const int N = state.particle_count();
  if (N <= 0) throw std::invalid_argument("particle count must be positive");
  for (const auto* q : {&state.quad_up, &state.quad_down}) {
    const double herm = (*q - q->adjoint()).cwiseAbs().maxCoeff();
    if (herm > 1e-8) {
      std::ostringstream msg;
      msg << "quadratures not Hermitian (deviation " << herm << ")";
      throw std::invalid_argument(msg.str());
    }
  }
  ParticleRdm rdm;
  rdm.N = N;
  rdm.L = L;
  // rho_r(i,j) = (1/N) <a^dag_j a_i> = (1/N) quad(j,i).
  rdm.up = state.quad_up.transpose() / static_cast<double>(N);
  rdm.down = state.quad_down.transpose() / static_cast<double>(N);
  const double trace = rdm.up.trace().real() + rdm.down.trace().real();
  if (std::abs(trace - 1.0) > 1e-6) {
    std::ostringstream msg;
    msg << "single-particle density matrix trace " << trace
        << " deviates from 1; source state unconverged or corrupted";
    throw std::runtime_error(msg.str());
  }
  return rdm;
}

namespace {

std::vector<double> circulant_block(const Eigen::MatrixXcd& block, int N,
                                    double tol, double* deviation) {
  const auto L = block.rows();
  CirculantProfile prof = circulant_profile(block);
  if (deviation) *deviation = prof.max_deviation;
  if (prof.max_deviation > tol / static_cast<double>(N)) {
    // Compare at quadrature scale: block entries are x/N.
    std::ostringstream msg;
    msg << "spin block deviates from circulant form by "
        << prof.max_deviation * N << " (tolerance " << tol << ")";
    throw std::runtime_error(msg.str());
  }
  std::vector<double> lambda(static_cast<std::size_t>(L));
  for (Eigen::Index k = 0; k < L; ++k) {
    const double kk = 2.0 * std::numbers::pi * static_cast<double>(k) /
                      static_cast<double>(L);
    std::complex<double> acc = 0.0;
    for (Eigen::Index d = 0; d < L; ++d)
      acc += std::polar(1.0, kk * static_cast<double>(d)) *
             prof.x[static_cast<std::size_t>(d)];
    lambda[static_cast<std::size_t>(k)] = acc.real();
  }
  return lambda;
}

}  // namespace

RdmSpectrum eigenvalues_circulant(const ParticleRdm& rdm, double tol) {
  RdmSpectrum s;
  s.method = SpectrumMethod::circulant;
  s.up = circulant_block(rdm.up, rdm.N, tol, nullptr);
  s.down = circulant_block(rdm.down, rdm.N, tol, nullptr);
  return s;
}

RdmSpectrum eigenvalues_dense(const ParticleRdm& rdm) {
  RdmSpectrum s;
  s.method = SpectrumMethod::dense;
  for (auto [block, out] : {std::pair{&rdm.up, &s.up}, {&rdm.down, &s.down}}) {
    const double herm = (*block - block->adjoint()).cwiseAbs().maxCoeff();
    if (herm > 1e-6)
      throw std::runtime_error("non-Hermitian density-matrix block");
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(*block);
    if (es.info() != Eigen::Success)
      throw std::runtime_error("dense eigensolver failed on density matrix");
    out->assign(es.eigenvalues().data(),
                es.eigenvalues().data() + es.eigenvalues().size());
    std::sort(out->begin(), out->end(), std::greater<>());
  }
  return s;
}

RdmSpectrum rdm_spectrum(ParticleRdm& rdm, bool force_dense, double tol) {
  if (!force_dense) {
    try {
      RdmSpectrum s = eigenvalues_circulant(rdm, tol);
      rdm.circulant_used = true;
      return s;
    } catch (const std::runtime_error&) {
      // Translation invariance numerically broken: dense fallback.
    }
  }
  rdm.circulant_used = false;
  return eigenvalues_dense(rdm);
}

EntanglementValue entanglement_of_particles(const RdmSpectrum& spectrum,
                                            int N) {
  if (N <= 0) throw std::invalid_argument("particle count must be positive");
  std::vector<double> lambda = spectrum.all();
  double sum = 0.0;
  for (double& v : lambda) {
    if (v < -1e-10) {
      std::ostringstream msg;
      msg << "eigenvalue " << v << " below the clip tolerance -1e-10";
      throw std::runtime_error(msg.str());
    }
    if (v < 0.0) v = 0.0;
    sum += v;
  }
  if (std::abs(sum - 1.0) > 1e-6)
    throw std::runtime_error("spectrum does not sum to 1");
  double svn = 0.0;
  for (double v : lambda) {
    if (v <= 0.0) continue;
    const double p = v / sum;
    svn -= p * std::log2(p);
  }
  EntanglementValue e;
  e.svn = svn;
  e.ep = svn - std::log2(static_cast<double>(N));
  e.N = N;
  e.method = spectrum.method;
  return e;
}

EntanglementReport particle_entanglement(const GroundStateResult& state,
                                         bool force_dense) {
  EntanglementReport rep;
  rep.rdm = rdm_from_quadratures(state);
  rep.profile_up = circulant_profile(state.quad_up);
  rep.spectrum = rdm_spectrum(rep.rdm, force_dense);
  rep.value = entanglement_of_particles(rep.spectrum, rep.rdm.N);
  return rep;
}

}  // namespace ehmep
