#pragma once

#include <map>
#include <optional>

#include "gapstab/lattice.hpp"

namespace gapstab {

struct Bond {
  std::vector<int> offset;
  cd amplitude;
};

// Raw matrix element t_{ij}; the conjugate entry is filled in when absent.
struct HoppingEntry {
  std::size_t i = 0;
  std::size_t j = 0;
  cd amplitude;
};

struct HoppingSpec {
  std::vector<Bond> bonds;
  std::vector<HoppingEntry> entries;
};

struct DisorderSpec {
  double width = 0.0;
  std::uint64_t seed = 0;
};

struct SingleParticleModel {
  Lattice lattice;
  CMat T;
  double fermi_energy = 0.0;
  RVec eigenvalues;
  CMat eigenvectors;
  double gap = 0.0;
  bool gapless = false;
};

inline constexpr double kGaplessTol = 1e-10;

SingleParticleModel assemble_T(const Lattice& lattice, const HoppingSpec& hopping, double fermi_energy,
                               const DisorderSpec& disorder = {});

// Wraps an already assembled Hermitian T.
SingleParticleModel model_from_matrix(const Lattice& lattice, const CMat& T, double fermi_energy = 0.0);

double gap_at_fermi(const SingleParticleModel& model);

// Alternating bonds -t1, -t2, -t1, ... on an open chain.
HoppingSpec dimerized_chain(std::size_t sites, double t1, double t2);

struct DecayFit {
  double prefactor = 0.0;
  double rate = 0.0;
  double r_squared = 0.0;
  std::vector<std::pair<int, double>> samples;
};

inline constexpr double kDecayFloor = 1e-14;

// Regresses log of the per-distance maximum onto distance.
DecayFit fit_decay_samples(const std::map<int, double>& shell_max);

// Entries indexed by (site, species) pairs laid out site-major with the given
// number of species per site on rows and columns.
DecayFit fit_exponential_decay(const CMat& entries, const Lattice& lattice, int row_species = 1,
                               int col_species = 1);

std::map<int, double> shell_maxima(const CMat& entries, const Lattice& lattice, int row_species = 1,
                                   int col_species = 1);

}  // namespace gapstab
