#pragma once

// Entanglement of particles: the single-particle reduced density matrix built
// from quadratures, its spectrum (circulant fast path under translation
// invariance, dense Hermitian fallback), and the shifted von Neumann entropy
//
//   E_p = S(rho_r) - log2(N),   S in bits,
//
// which vanishes exactly on single Slater determinants and reaches 1 at half
// filling for a maximally mixed single-particle state.

#include <Eigen/Dense>
#include <vector>

#include "ehmep/ground_state.hpp"

namespace ehmep {

struct ParticleRdm {
  // rho_r(i,j) = (1/N) <a^dag_j a_i> per spin block; no up-down coherences
  // because Sz is conserved.
  Eigen::MatrixXcd up, down;
  int N = 0;
  int L = 0;
  bool circulant_used = false;
};

enum class SpectrumMethod { circulant, dense };

struct RdmSpectrum {
  // Per spin block. Circulant path: entry k corresponds to momentum
  // 2*pi*k/L; dense path: sorted descending.
  std::vector<double> up, down;
  SpectrumMethod method = SpectrumMethod::dense;

  std::vector<double> all() const {
    std::vector<double> v(up);
    v.insert(v.end(), down.begin(), down.end());
    return v;
  }
};

struct EntanglementValue {
  double ep = 0.0;   // shifted entropy, bits
  double svn = 0.0;  // raw von Neumann entropy, bits
  int N = 0;
  SpectrumMethod method = SpectrumMethod::dense;
};

// Translation-averaged quadrature profile x_delta of one spin block, with
// the maximum deviation across reference sites (the circulant test).
struct CirculantProfile {
  std::vector<std::complex<double>> x;  // x[delta], delta = 0..L-1
  double max_deviation = 0.0;
};

CirculantProfile circulant_profile(const Eigen::MatrixXcd& quad);

ParticleRdm rdm_from_quadratures(const GroundStateResult& state);

inline constexpr double kCirculantTol = 1e-6;

// Eigenvalues via the Fourier transform of x_delta. Throws if either spin
// block deviates from circulant form by more than `tol` (fall back to dense).
RdmSpectrum eigenvalues_circulant(const ParticleRdm& rdm,
                                  double tol = kCirculantTol);

RdmSpectrum eigenvalues_dense(const ParticleRdm& rdm);

// Automatic choice: circulant when translation invariance holds, else dense.
RdmSpectrum rdm_spectrum(ParticleRdm& rdm, bool force_dense = false,
                         double tol = kCirculantTol);

// Clips tiny negative weights (floor -1e-10), renormalizes, and evaluates
// S = -sum lambda log2 lambda and ep = S - log2 N.
EntanglementValue entanglement_of_particles(const RdmSpectrum& spectrum, int N);

// Convenience: full pipeline from a solved ground state.
struct EntanglementReport {
  ParticleRdm rdm;
  RdmSpectrum spectrum;
  EntanglementValue value;
  CirculantProfile profile_up;  // x_delta, for the quadrature dump
};

EntanglementReport particle_entanglement(const GroundStateResult& state,
                                         bool force_dense = false);

}  // namespace ehmep
