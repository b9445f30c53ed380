#include "gapstab/frustration_free.hpp"

#include <algorithm>
#include <cmath>

#include "gapstab/linalg.hpp"

namespace gapstab {

NormalOrderedPoly local_h0_poly(const BdgData& bdg, std::size_t x, std::size_t y, double drop) {
  NormalOrderedPoly p;
  auto block = [&](std::size_t u, std::size_t w) {
    for (int mu = 0; mu < 2; ++mu)
      for (int nu = 0; nu < 2; ++nu) {
        const std::size_t k = 2 * u + mu, l = 2 * w + nu;
        cd a = bdg.abs_A(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(l));
        if (std::abs(a) < drop) continue;
        p.add_term({1ULL << k, 1ULL << l}, a);
      }
  };
  block(x, y);
  if (x != y) block(y, x);
  return p;
}

DoubledHamiltonian build_doubled_h0(const BdgData& bdg, std::size_t max_sites) {
  if (bdg.sites > max_sites)
    throw Error(Errc::dimension, std::to_string(bdg.sites) + " sites exceed the doubled-space limit of " +
                                     std::to_string(max_sites));
  if (bdg.gap < kGaplessTol) throw Error(Errc::gapless, "doubled Hamiltonian needs a gapped model");
  DoubledHamiltonian dh;
  dh.sites = bdg.sites;
  dh.space = doubled_space(bdg.sites);
  NormalOrderedPoly h0;
  for (std::size_t k = 0; k < 2 * bdg.sites; ++k)
    for (std::size_t l = 0; l < 2 * bdg.sites; ++l)
      h0.add_term({1ULL << k, 1ULL << l}, bdg.abs_A(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(l)));
  h0.prune(0.0);
  dh.H0 = h0.to_operator(dh.space);
  for (std::size_t x = 0; x < bdg.sites; ++x)
    for (std::size_t y = x; y < bdg.sites; ++y) {
      NormalOrderedPoly p = local_h0_poly(bdg, x, y);
      if (p.empty()) continue;
      dh.local_terms.push_back({make_site_set({x, y}), p.to_operator(dh.space)});
    }
  dh.ground_state = CVec::Zero(dh.space->dimension());
  dh.ground_state(0) = 1.0;
  dh.number_op = zero(dh.space);
  for (std::size_t k = 0; k < 2 * bdg.sites; ++k) dh.number_op = dh.number_op + number(dh.space, k);
  dh.gap = eigh(bdg.abs_A).values.minCoeff();
  dh.trace_abs_A = bdg.abs_A.trace().real();
  dh.half_trace_T = 0.5 * bdg.trace_T;
  return dh;
}

double DoublingResidual::worst() const {
  return std::max({gamma_form, tilde_form, tilde_selfadjoint, eta_car, spectrum});
}

DoublingResidual verify_doubling_identity(const BdgData& bdg, const DoubledHamiltonian& dh) {
  const std::size_t n = bdg.sites, m = 2 * n;
  // Two physical copies: copy 1 on modes 0..n-1, copy 2 on modes n..2n-1.
  std::vector<std::string> labels;
  for (int copy = 1; copy <= 2; ++copy)
    for (std::size_t x = 0; x < n; ++x) labels.push_back(std::to_string(copy) + ":" + std::to_string(x));
  auto space = std::make_shared<const FockSpace>(labels);
  const Eigen::Index dim = space->dimension();

  std::vector<CMat> g1(m), g2(m);
  for (std::size_t x = 0; x < n; ++x)
    for (Species mu : {Species::c, Species::d}) {
      g1[majorana_index(x, mu)] = majorana(space, x, mu).dense();
      g2[majorana_index(x, mu)] = majorana(space, n + x, mu).dense();
    }
  const CMat& A = bdg.A;
  const CMat& S = bdg.sign_A;
  const CMat& absA = bdg.abs_A;
  const double r = 1.0 / std::sqrt(2.0);

  CMat lhs1 = CMat::Zero(dim, dim);
  for (std::size_t k = 0; k < m; ++k)
    for (std::size_t l = 0; l < m; ++l) {
      cd a = A(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(l));
      if (a != cd(0.0)) lhs1 += a * (g1[k] * g1[l] - g2[k] * g2[l]);
    }

  std::vector<CMat> t1(m), t2(m);
  for (std::size_t k = 0; k < m; ++k) {
    CMat s1 = CMat::Zero(dim, dim), s2 = CMat::Zero(dim, dim);
    for (std::size_t l = 0; l < m; ++l) {
      cd s = S(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(l));
      s1 += s * g1[l];
      s2 += s * g2[l];
    }
    t1[k] = r * (g1[k] - I * s2);
    t2[k] = r * (-I * s1 + g2[k]);
  }

  DoublingResidual res;
  CMat lhs2 = CMat::Zero(dim, dim);
  for (std::size_t k = 0; k < m; ++k) {
    res.tilde_selfadjoint = std::max({res.tilde_selfadjoint, max_abs(t1[k] - t1[k].adjoint()),
                                      max_abs(t2[k] - t2[k].adjoint())});
    for (std::size_t l = 0; l < m; ++l)
      lhs2 += (2.0 * I * absA(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(l))) * (t1[k] * t2[l]);
  }

  std::vector<CMat> eta(m);
  for (std::size_t k = 0; k < m; ++k) eta[k] = r * (t1[k] + I * t2[k]);
  const CMat id = CMat::Identity(dim, dim);
  CMat quad = CMat::Zero(dim, dim);
  for (std::size_t k = 0; k < m; ++k)
    for (std::size_t l = 0; l < m; ++l) {
      quad += absA(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(l)) * (eta[k].adjoint() * eta[l]);
      CMat car = anticommutator(eta[k], eta[l].adjoint());
      if (k == l) car -= id;
      res.eta_car = std::max({res.eta_car, max_abs(car), max_abs(anticommutator(eta[k], eta[l]))});
    }
  const double tr = absA.trace().real();
  CMat rhs = 2.0 * quad - tr * id;
  res.gamma_form = spectral_norm(CMat(lhs1 - rhs));
  res.tilde_form = spectral_norm(CMat(lhs2 - rhs));
  res.plus_trace_offset = spectral_norm(CMat(lhs1 - (2.0 * quad + tr * id)));

  RVec ev_rhs = eigh(rhs).values;
  RVec ev_dh = eigh(CMat(2.0 * dh.H0.dense() - tr * CMat::Identity(dh.H0.dimension(), dh.H0.dimension()))).values;
  if (ev_rhs.size() != ev_dh.size()) throw Error(Errc::dimension, "doubled spaces differ in dimension");
  res.spectrum = (ev_rhs - ev_dh).cwiseAbs().maxCoeff();
  return res;
}

double check_h0sq_vs_nsq(const DoubledHamiltonian& dh, std::optional<double> delta_e) {
  const double de = delta_e.value_or(dh.gap);
  CMat h = dh.H0.dense();
  CMat nn = dh.number_op.dense();
  return eigh(CMat(h * h - de * de * nn * nn)).values.minCoeff();
}

}  // namespace gapstab
