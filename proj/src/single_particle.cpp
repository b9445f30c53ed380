#include "gapstab/single_particle.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "gapstab/linalg.hpp"

namespace gapstab {

namespace {

void check_finite(cd z) {
  if (!std::isfinite(z.real()) || !std::isfinite(z.imag()))
    throw Error(Errc::invalid_input, "non-finite hopping amplitude");
}

void diagonalise(SingleParticleModel& m) {
  HermitianEig e = eigh(m.T);
  m.eigenvalues = e.values;
  m.eigenvectors = e.vectors;
  m.gap = m.eigenvalues.cwiseAbs().minCoeff();
  m.gapless = m.gap < kGaplessTol;
}

}  // namespace

SingleParticleModel assemble_T(const Lattice& lattice, const HoppingSpec& hopping, double fermi_energy,
                               const DisorderSpec& disorder) {
  if (!std::isfinite(fermi_energy)) throw Error(Errc::invalid_input, "non-finite Fermi energy");
  const std::size_t n = lattice.size();
  CMat T = CMat::Zero(n, n);

  for (const Bond& b : hopping.bonds) {
    check_finite(b.amplitude);
    if (std::all_of(b.offset.begin(), b.offset.end(), [](int o) { return o == 0; })) {
      if (b.amplitude.imag() != 0.0) throw Error(Errc::hermiticity, "on-site bond must be real");
      for (std::size_t x = 0; x < n; ++x) T(x, x) += b.amplitude.real();
      continue;
    }
    for (std::size_t x = 0; x < n; ++x) {
      auto y = lattice.shifted(x, b.offset);
      if (!y) continue;
      T(x, *y) += b.amplitude;
      T(*y, x) += std::conj(b.amplitude);
    }
  }

  std::map<std::pair<std::size_t, std::size_t>, cd> raw;
  for (const HoppingEntry& e : hopping.entries) {
    check_finite(e.amplitude);
    if (e.i >= n || e.j >= n) throw Error(Errc::site_out_of_range, "hopping entry outside lattice");
    raw[{e.i, e.j}] += e.amplitude;
  }
  for (const auto& [ij, amp] : raw) {
    auto [i, j] = ij;
    if (i == j) {
      if (std::abs(amp.imag()) > 1e-12) throw Error(Errc::hermiticity, "complex diagonal entry");
      T(i, i) += amp.real();
      continue;
    }
    auto rev = raw.find({j, i});
    if (rev != raw.end()) {
      if (std::abs(rev->second - std::conj(amp)) > 1e-12)
        throw Error(Errc::hermiticity, "entries (" + std::to_string(i) + "," + std::to_string(j) +
                                           ") and their transpose are not conjugate");
      T(i, j) += amp;
    } else {
      T(i, j) += amp;
      T(j, i) += std::conj(amp);
    }
  }

  if (disorder.width < 0.0 || !std::isfinite(disorder.width))
    throw Error(Errc::invalid_input, "disorder width must be finite and non-negative");
  if (disorder.width > 0.0) {
    std::seed_seq seq{static_cast<std::uint32_t>(disorder.seed), static_cast<std::uint32_t>(disorder.seed >> 32),
                      0x5eedu};
    std::mt19937_64 rng(seq);
    std::uniform_real_distribution<double> u(-disorder.width, disorder.width);
    for (std::size_t x = 0; x < n; ++x) T(x, x) += u(rng);
  }

  for (std::size_t x = 0; x < n; ++x) T(x, x) -= fermi_energy;
  SingleParticleModel m{lattice, T, fermi_energy, {}, {}, 0.0, false};
  diagonalise(m);
  return m;
}

SingleParticleModel model_from_matrix(const Lattice& lattice, const CMat& T, double fermi_energy) {
  if (T.rows() != static_cast<Eigen::Index>(lattice.size()) || T.cols() != T.rows())
    throw Error(Errc::dimension, "T must be |Lambda| x |Lambda|");
  if (!T.allFinite()) throw Error(Errc::invalid_input, "non-finite entry in T");
  if (hermiticity_defect(T) > 1e-12) throw Error(Errc::hermiticity, "T is not Hermitian");
  SingleParticleModel m{lattice, T, fermi_energy, {}, {}, 0.0, false};
  diagonalise(m);
  return m;
}

double gap_at_fermi(const SingleParticleModel& model) { return model.eigenvalues.cwiseAbs().minCoeff(); }

HoppingSpec dimerized_chain(std::size_t sites, double t1, double t2) {
  HoppingSpec h;
  for (std::size_t x = 0; x + 1 < sites; ++x) h.entries.push_back({x, x + 1, cd(x % 2 == 0 ? -t1 : -t2, 0.0)});
  return h;
}

std::map<int, double> shell_maxima(const CMat& entries, const Lattice& lattice, int row_species,
                                   int col_species) {
  const auto n = static_cast<Eigen::Index>(lattice.size());
  if (entries.rows() != n * row_species || entries.cols() != n * col_species)
    throw Error(Errc::dimension, "entry matrix does not match the lattice and species layout");
  std::map<int, double> shells;
  for (Eigen::Index i = 0; i < entries.rows(); ++i)
    for (Eigen::Index j = 0; j < entries.cols(); ++j) {
      int d = lattice.distance(i / row_species, j / col_species);
      double& slot = shells[d];
      slot = std::max(slot, std::abs(entries(i, j)));
    }
  return shells;
}

DecayFit fit_decay_samples(const std::map<int, double>& shell_max) {
  DecayFit fit;
  for (auto [d, v] : shell_max)
    if (v > kDecayFloor) fit.samples.emplace_back(d, v);
  if (fit.samples.size() < 2) throw Error(Errc::insufficient_data, "fewer than two nonzero distance shells");
  const double k = static_cast<double>(fit.samples.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0, syy = 0;
  for (auto [d, v] : fit.samples) {
    double x = d, y = std::log(v);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    syy += y * y;
  }
  double vx = sxx - sx * sx / k, vy = syy - sy * sy / k, cxy = sxy - sx * sy / k;
  double slope = cxy / vx;
  double intercept = (sy - slope * sx) / k;
  fit.prefactor = std::exp(intercept);
  fit.rate = -slope;
  fit.r_squared = vy <= 0.0 ? 1.0 : std::clamp(cxy * cxy / (vx * vy), 0.0, 1.0);
  return fit;
}

DecayFit fit_exponential_decay(const CMat& entries, const Lattice& lattice, int row_species, int col_species) {
  return fit_decay_samples(shell_maxima(entries, lattice, row_species, col_species));
}

}  // namespace gapstab
