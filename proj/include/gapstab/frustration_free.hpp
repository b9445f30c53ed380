#pragma once

#include "gapstab/interaction.hpp"

namespace gapstab {

struct LocalTerm {
  SiteSet sites;
  OperatorMatrix op;
};

struct DoubledHamiltonian {
  std::size_t sites = 0;
  FockSpacePtr space;
  OperatorMatrix H0;  // eta^dagger |A| eta, constants dropped
  std::vector<LocalTerm> local_terms;
  CVec ground_state;
  OperatorMatrix number_op;
  double gap = 0.0;
  double trace_abs_A = 0.0;
  double half_trace_T = 0.0;

  CMat ground_projector() const { return ground_state * ground_state.adjoint(); }
};

inline constexpr std::size_t kDefaultMaxDoubledSites = 6;
inline constexpr double kLocalTermDrop = 1e-12;

DoubledHamiltonian build_doubled_h0(const BdgData& bdg, std::size_t max_sites = kDefaultMaxDoubledSites);

// |A| restricted to the Z = {x, y} blocks, both orders folded together.
NormalOrderedPoly local_h0_poly(const BdgData& bdg, std::size_t x, std::size_t y, double drop = kLocalTermDrop);

struct DoublingResidual {
  double gamma_form = 0.0;        // sum gamma_1 A gamma_1 - gamma_2 A gamma_2 vs eta form
  double tilde_form = 0.0;        // 2i gamma~_1 |A| gamma~_2 vs eta form
  double tilde_selfadjoint = 0.0; // max over k, j of |gamma~_j,k - gamma~_j,k^dagger|
  double eta_car = 0.0;           // canonical anticommutators of the constructed eta
  double spectrum = 0.0;          // eta form vs 2 H0 - tr|A| from the eta Fock space
  double plus_trace_offset = 0.0; // distance to 2 eta^dagger |A| eta + tr|A|

  double worst() const;
};

DoublingResidual verify_doubling_identity(const BdgData& bdg, const DoubledHamiltonian& dh);

// Smallest eigenvalue of H0^2 - dE^2 N^2; dE defaults to the model gap.
double check_h0sq_vs_nsq(const DoubledHamiltonian& dh, std::optional<double> delta_e = std::nullopt);

}  // namespace gapstab
