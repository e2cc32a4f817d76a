#include "ehmep/correlations.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "ehmep/mps_measure.hpp"

namespace ehmep {

double structure_factor(const Eigen::MatrixXd& corr, const Eigen::VectorXd& mean,
                        double k) {
  const auto L = corr.rows();
  std::complex<double> acc = 0.0;
  for (Eigen::Index m = 0; m < L; ++m)
    for (Eigen::Index n = 0; n < L; ++n)
      acc += std::polar(1.0, k * static_cast<double>(m - n)) *
             (corr(m, n) - mean(m) * mean(n));
  const double im = std::abs(acc.imag());
  if (im > 1e-8 * std::max(1.0, std::abs(acc.real())) && im > 1e-8)
    throw std::runtime_error("structure factor has a non-vanishing imaginary part");
  return acc.real() / static_cast<double>(L);
}

namespace {

// ---------------------------------------------------------------------------
// ED backend: diagonal observables and operator application on raw vectors.
// ---------------------------------------------------------------------------

// <A_m B_n> and <A_m> for diagonal single-site observables A, B given per
// configuration by `value(c, site)`.
template <typename F>
void diagonal_correlations(const EdStateHandle& h, F&& value,
                           Eigen::MatrixXd& corr, Eigen::VectorXd& mean) {
  const SectorBasis& basis = *h.basis;
  const int L = basis.L();
  corr.setZero(L, L);
  mean.setZero(L);
  Eigen::VectorXd site_val(L);
  for (std::size_t s = 0; s < h.states.size(); ++s) {
    const Eigen::VectorXd& psi = h.states[s];
    const double w = h.weights[s];
    for (std::size_t c = 0; c < basis.size(); ++c) {
      const double p = w * psi[static_cast<Eigen::Index>(c)] *
                       psi[static_cast<Eigen::Index>(c)];
      if (p == 0.0) continue;
      const Config cfg = basis.config(c);
      for (int j = 0; j < L; ++j) site_val[j] = value(cfg, j);
      mean.noalias() += p * site_val;
      corr.noalias() += p * (site_val * site_val.transpose());
    }
  }
}

double sz_value(Config c, int j) {
  return 0.5 * (static_cast<int>(occupied(c.up, j)) -
                static_cast<int>(occupied(c.down, j)));
}

double density_value(Config c, int j) {
  return static_cast<double>(occupied(c.up, j)) +
         static_cast<double>(occupied(c.down, j));
}

// B_{m,m+1} = sum_s (a^dag_{m,s} a_{m+1,s} + h.c.) applied to a sector state.
Eigen::VectorXd apply_bond_kinetic(const SectorBasis& basis,
                                   const Eigen::VectorXd& psi, int m) {
  const int L = basis.L();
  const int mn = (m + 1) % L;
  Eigen::VectorXd out = Eigen::VectorXd::Zero(psi.size());
  for (std::size_t c = 0; c < basis.size(); ++c) {
    const double amp = psi[static_cast<Eigen::Index>(c)];
    if (amp == 0.0) continue;
    const Config cfg = basis.config(c);
    for (Spin s : kSpins) {
      for (auto [from, to] : {std::pair{mn, m}, std::pair{m, mn}}) {
        if (auto hres = hop(cfg, s, from, to))
          out[static_cast<Eigen::Index>(basis.index(hres->target))] +=
              hres->sign * amp;
      }
    }
  }
  return out;
}

// Delta_x |psi> = (1/sqrt(L)) sum_j a_{j,up} a_{j+x,down} |psi>, which lands
// in the (nUp-1, nDown-1) sector.
Eigen::VectorXd apply_pair_annihilator(const SectorBasis& from,
                                       const SectorBasis& to,
                                       const Eigen::VectorXd& psi, int x) {
  const int L = from.L();
  Eigen::VectorXd out = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(to.size()));
  for (std::size_t c = 0; c < from.size(); ++c) {
    const double amp = psi[static_cast<Eigen::Index>(c)];
    if (amp == 0.0) continue;
    const Config cfg = from.config(c);
    for (int j = 0; j < L; ++j) {
      const int jd = ((j + x) % L + L) % L;
      auto dn = apply_annihilate(cfg, Spin::down, jd);
      if (!dn) continue;
      auto up = apply_annihilate(dn->first, Spin::up, j);
      if (!up) continue;
      out[static_cast<Eigen::Index>(to.index(up->first))] +=
          dn->second * up->second * amp;
    }
  }
  return out / std::sqrt(static_cast<double>(L));
}

struct EdCorrData {
  Eigen::MatrixXd corr;
  Eigen::VectorXd mean;
};

EdCorrData ed_bond_correlations(const EdStateHandle& h) {
  const SectorBasis& basis = *h.basis;
  const int L = basis.L();
  EdCorrData out;
  out.corr.setZero(L, L);
  out.mean.setZero(L);
  for (std::size_t s = 0; s < h.states.size(); ++s) {
    const double w = h.weights[s];
    std::vector<Eigen::VectorXd> bpsi(static_cast<std::size_t>(L));
    for (int m = 0; m < L; ++m)
      bpsi[static_cast<std::size_t>(m)] = apply_bond_kinetic(basis, h.states[s], m);
    for (int m = 0; m < L; ++m) {
      out.mean[m] += w * h.states[s].dot(bpsi[static_cast<std::size_t>(m)]);
      for (int n = 0; n < L; ++n)
        out.corr(m, n) += w * bpsi[static_cast<std::size_t>(m)].dot(
                                  bpsi[static_cast<std::size_t>(n)]);
    }
  }
  return out;
}

// <Delta_x^dag Delta_x'> for x, x' in {-1, 0, +1}.
Eigen::Matrix3d ed_pairing_matrix(const EdStateHandle& h) {
  const SectorBasis& basis = *h.basis;
  Eigen::Matrix3d t = Eigen::Matrix3d::Zero();
  if (basis.n_up() == 0 || basis.n_down() == 0) return t;
  auto smaller =
      build_sector_basis(basis.L(), basis.n_up() - 1, basis.n_down() - 1);
  for (std::size_t s = 0; s < h.states.size(); ++s) {
    const double w = h.weights[s];
    std::array<Eigen::VectorXd, 3> dpsi;
    for (int xi = 0; xi < 3; ++xi)
      dpsi[static_cast<std::size_t>(xi)] =
          apply_pair_annihilator(basis, *smaller, h.states[s], xi - 1);
    for (int a = 0; a < 3; ++a)
      for (int b = 0; b < 3; ++b)
        t(a, b) += w * dpsi[static_cast<std::size_t>(a)].dot(
                           dpsi[static_cast<std::size_t>(b)]);
  }
  return t;
}

PairingValues pairing_from_matrix(const Eigen::Matrix3d& t) {
  // Index 0: x=-1, 1: onsite, 2: x=+1.
  auto quad_form = [&](double sm, double so, double sp) {
    const Eigen::Vector3d c(sm, so, sp);
    return c.dot(t * c);
  };
  PairingValues v;
  v.singlet = quad_form(-1.0, 1.0, 1.0);  // (Delta_+1 - Delta_-1) + Delta_0
  v.triplet = quad_form(1.0, 0.0, 1.0);   // Delta_+1 + Delta_-1
  v.onsite_singlet = t(1, 1);
  return v;
}

const EdStateHandle& require_ed(const GroundStateResult& state) {
  if (!state.ed_handle)
    throw std::runtime_error(
        "raw ED state handle required for this correlator");
  return *state.ed_handle;
}

bool has_raw_handle(const GroundStateResult& s) {
  return s.ed_handle || s.mps_handle;
}

}  // namespace

double order_parameter_sdw(const GroundStateResult& state, double k) {
  if (!has_raw_handle(state))
    throw std::runtime_error("raw state handle required for O_sdw");
  Eigen::MatrixXd corr;
  Eigen::VectorXd mean;
  if (state.ed_handle) {
    diagonal_correlations(*state.ed_handle, sz_value, corr, mean);
  } else {
    mps_spin_z_correlations(*state.mps_handle->mps, corr, mean);
  }
  return structure_factor(corr, mean, k);
}

double order_parameter_cdw(const GroundStateResult& state, double k) {
  if (!has_raw_handle(state))
    throw std::runtime_error("raw state handle required for O_cdw");
  Eigen::MatrixXd corr;
  Eigen::VectorXd mean;
  if (state.ed_handle) {
    diagonal_correlations(*state.ed_handle, density_value, corr, mean);
  } else {
    mps_density_correlations(*state.mps_handle->mps, corr, mean);
  }
  return structure_factor(corr, mean, k);
}

double order_parameter_bow(const GroundStateResult& state, double k) {
  if (!has_raw_handle(state))
    throw std::runtime_error("raw state handle required for O_bow");
  if (state.ed_handle) {
    EdCorrData d = ed_bond_correlations(*state.ed_handle);
    return structure_factor(d.corr, d.mean, k);
  }
  Eigen::MatrixXd corr;
  Eigen::VectorXd mean;
  mps_bond_kinetic_correlations(*state.mps_handle->mps, corr, mean);
  return structure_factor(corr, mean, k);
}

PairingValues pairing_order_parameters(const GroundStateResult& state) {
  if (!has_raw_handle(state))
    throw std::runtime_error("raw state handle required for pairing");
  Eigen::Matrix3d t;
  if (state.ed_handle) {
    t = ed_pairing_matrix(require_ed(state));
  } else {
    t = mps_pairing_matrix(*state.mps_handle->mps);
  }
  return pairing_from_matrix(t);
}

OrderParameterSet order_parameters(const GroundStateResult& state,
                                   bool with_bow, bool with_pairing) {
  const int L = state.params.L;
  OrderParameterSet set;
  set.k.resize(static_cast<std::size_t>(L));
  for (int n = 0; n < L; ++n)
    set.k[static_cast<std::size_t>(n)] =
        2.0 * std::numbers::pi * static_cast<double>(n) / static_cast<double>(L);

  Eigen::MatrixXd corr;
  Eigen::VectorXd mean;
  if (state.ed_handle) {
    diagonal_correlations(*state.ed_handle, sz_value, corr, mean);
  } else if (state.mps_handle) {
    mps_spin_z_correlations(*state.mps_handle->mps, corr, mean);
  } else {
    throw std::runtime_error("raw state handle required for order parameters");
  }
  for (double k : set.k) set.sdw.push_back(structure_factor(corr, mean, k));

  if (state.ed_handle) {
    diagonal_correlations(*state.ed_handle, density_value, corr, mean);
  } else {
    mps_density_correlations(*state.mps_handle->mps, corr, mean);
  }
  for (double k : set.k) set.cdw.push_back(structure_factor(corr, mean, k));

  if (with_bow) {
    if (state.ed_handle) {
      EdCorrData d = ed_bond_correlations(*state.ed_handle);
      for (double k : set.k) set.bow.push_back(structure_factor(d.corr, d.mean, k));
    } else {
      mps_bond_kinetic_correlations(*state.mps_handle->mps, corr, mean);
      for (double k : set.k) set.bow.push_back(structure_factor(corr, mean, k));
    }
  }
  if (with_pairing) {
    const PairingValues pv = pairing_order_parameters(state);
    set.pairing_singlet = pv.singlet;
    set.pairing_triplet = pv.triplet;
  }
  return set;
}

}  // namespace ehmep
