#pragma once

#include "gapstab/single_particle.hpp"

namespace gapstab {

enum class Species { c = 0, d = 1 };

// Majorana mode (x, mu) sits at index 2x + mu.
inline std::size_t majorana_index(std::size_t site, Species mu) {
  return 2 * site + static_cast<std::size_t>(mu);
}

struct BdgData {
  std::size_t sites = 0;
  CMat A;
  CMat abs_A;
  CMat sign_A;
  RVec eigenvalues;
  CMat eigenvectors;
  double gap = 0.0;
  double trace_T = 0.0;  // sum of T_xx, kept for the constant of H0

  CMat projector_plus() const;
  CMat projector_minus() const;
};

BdgData build_A(const SingleParticleModel& model);

// Spectral data for an arbitrary Hermitian 2N x 2N matrix; used to probe the
// structure checks with deliberately broken inputs.
BdgData bdg_from_matrix(const CMat& A);

struct StructureReport {
  double real_part = 0.0;
  double antisymmetry_A = 0.0;
  double symmetry_abs_A = 0.0;
  double antisymmetry_sign = 0.0;
  double selfadjoint_sign = 0.0;
  double sign_squared = 0.0;
  double polar = 0.0;
  double min_eig_abs_A = 0.0;
  double gap_mismatch = 0.0;

  double worst() const;
};

StructureReport structure_report(const BdgData& bdg, double single_particle_gap);

// M(x, 2y + nu) = (i s^{c nu}_{xy} - s^{d nu}_{xy}) / sqrt 2.
CMat m_coefficients(const BdgData& bdg);

}  // namespace gapstab
