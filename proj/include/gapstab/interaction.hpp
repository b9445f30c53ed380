#pragma once

#include <optional>

#include "gapstab/normal_order.hpp"

namespace gapstab {

// Fock space of the eta modes (x,c), (x,d), site-major.
FockSpacePtr doubled_space(std::size_t sites);

// One local interaction V_X. Factor modes are lattice site indices.
struct InteractionTerm {
  SiteSet support;
  std::vector<MonomialTerm> monomials;
};

struct InteractionSet {
  std::size_t sites = 0;
  std::vector<InteractionTerm> terms;
  std::size_t max_support = 0;
};

// Groups monomials by the set of sites they touch. Odd monomials are rejected.
InteractionSet make_interaction(std::size_t sites, const std::vector<MonomialTerm>& monomials);

MonomialTerm density_density(std::size_t x, std::size_t y, double u);
InteractionSet nearest_neighbour_density(const Lattice& lattice, double u);

// V_X on the Fock space spanned by its own sites (order preserved).
OperatorMatrix local_operator(const InteractionTerm& term);
// Whole interaction on the physical Fock space with one mode per site.
OperatorMatrix interaction_operator(const InteractionSet& v, const FockSpacePtr& space);

struct AssumptionReport {
  bool even_parity = true;
  std::size_t n_max = 0;
  double k_h = 0.0;
  std::vector<double> term_norms;
  RMat pair_sums;
  RMat weighted_pair_sums;
  std::optional<DecayFit> fit;
  std::optional<DecayFit> weighted_fit;
  double max_weighted_sum = 0.0;
  bool weighted_sum_finite = true;
};

AssumptionReport validate_assumptions(const InteractionSet& v, const Lattice& lattice, double k_h);

struct TransformedTerm {
  ModeSet support;  // doubled modes 2x + mu
  NormalOrderedPoly poly;
  std::vector<std::size_t> origins;  // indices into InteractionSet::terms
};

struct TransformedInteraction {
  std::size_t sites = 0;
  double epsilon = 0.0;
  double dropped_mass = 0.0;
  std::vector<TransformedTerm> terms;

  NormalOrderedPoly total() const;
};

inline constexpr double kDefaultTruncation = 1e-12;

// a_x written in the eta modes of the doubled space.
LinearForm annihilator_in_eta(const BdgData& bdg, std::size_t x);

TransformedInteraction transform_to_eta(const InteractionSet& v, const BdgData& bdg,
                                        double epsilon = kDefaultTruncation);

// a_x as a matrix on the doubled space, built from eta through gamma-tilde,
// gamma_1 and the Majorana combination; no normal ordering involved.
OperatorMatrix direct_annihilator(const FockSpacePtr& doubled, const BdgData& bdg, std::size_t x);
OperatorMatrix direct_doubled_operator(const InteractionSet& v, const BdgData& bdg, const FockSpacePtr& doubled);

// Spectral norm of (direct V) - (transformed V) on the doubled space.
double oracle_compare(const InteractionSet& v, const TransformedInteraction& tv, const BdgData& bdg);

// Sites touched by a set of doubled modes.
SiteSet sites_of(ModeSet modes);
ModeSet modes_of(const SiteSet& sites);

struct LocalBoundProfile {
  RMat pair_sums;
  RVec site_sums;
  std::vector<double> term_norms;
  std::vector<double> coefficient_bounds;
  std::optional<DecayFit> fit;
};

LocalBoundProfile local_bound_profile(const TransformedInteraction& tv, const Lattice& lattice);

}  // namespace gapstab
