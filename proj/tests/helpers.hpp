#pragma once

#include <random>

#include "gapstab/common.hpp"
#include "gapstab/single_particle.hpp"

namespace testing {

using namespace gapstab;

inline CMat chain_T(const std::vector<double>& bonds, const std::vector<double>& onsite = {}) {
  const auto n = static_cast<Eigen::Index>(bonds.size() + 1);
  CMat T = CMat::Zero(n, n);
  for (Eigen::Index i = 0; i + 1 < n; ++i) T(i, i + 1) = T(i + 1, i) = -bonds[i];
  for (std::size_t i = 0; i < onsite.size(); ++i) T(i, i) = onsite[i];
  return T;
}

inline SingleParticleModel chain_model(const std::vector<double>& bonds, const std::vector<double>& onsite = {}) {
  return model_from_matrix(build_lattice({static_cast<int>(bonds.size() + 1)}, {false}), chain_T(bonds, onsite));
}

// Random Hermitian matrix with entries of unit scale.
inline CMat random_hermitian(Eigen::Index n, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  CMat a(n, n);
  for (Eigen::Index j = 0; j < n; ++j)
    for (Eigen::Index i = 0; i < n; ++i) a(i, j) = cd(g(rng), g(rng));
  return (a + a.adjoint()) * 0.5;
}

inline CMat even_part(CMat a) {
  for (Eigen::Index j = 0; j < a.cols(); ++j)
    for (Eigen::Index i = 0; i < a.rows(); ++i)
      if (__builtin_popcountll(static_cast<unsigned long long>(i ^ j)) & 1) a(i, j) = 0.0;
  return a;
}

}  // namespace testing
