#pragma once

#include "gapstab/common.hpp"

namespace gapstab {

struct HermitianEig {
  RVec values;
  CMat vectors;
};

// Eigendecomposition of the Hermitian part of m, ascending eigenvalues.
HermitianEig eigh(const CMat& m);

// Largest singular value. Dense SVD up to 4096, power iteration above.
double spectral_norm(const CMat& m);
double spectral_norm(const SpMat& m);

double max_abs(const CMat& m);
double hermiticity_defect(const CMat& m);

CMat commutator(const CMat& a, const CMat& b);
CMat anticommutator(const CMat& a, const CMat& b);

// Spread (max - min)/2 of the spectrum of a Hermitian matrix, i.e. the distance
// to the nearest multiple of the identity in operator norm.
double distance_to_scalar(const CMat& hermitian);

// Matrix function f applied to a Hermitian matrix via its eigenbasis.
template <class F>
CMat hermitian_function(const HermitianEig& e, F f) {
  CVec d(e.values.size());
  for (Eigen::Index i = 0; i < e.values.size(); ++i) d(i) = f(e.values(i));
  return e.vectors * d.asDiagonal() * e.vectors.adjoint();
}

// Closest unitary in Frobenius norm, u (u^* u)^{-1/2}.
CMat polar_unitary(const CMat& u);

// Lowest k eigenvalues of a sparse Hermitian matrix by Lanczos with full
// reorthogonalisation. Used beyond the dense limit.
RVec lanczos_lowest(const SpMat& h, int k, int max_iter = 300, double tol = 1e-12,
                    std::uint64_t seed = 1);

inline constexpr Eigen::Index kDenseLimit = 4096;

}  // namespace gapstab
