#include "gapstab/majorana.hpp"

#include <cmath>

#include "gapstab/linalg.hpp"

namespace gapstab {

namespace {

void spectral_parts(BdgData& b) {
  HermitianEig e = eigh(b.A);
  b.eigenvalues = e.values;
  b.eigenvectors = e.vectors;
  b.gap = e.values.cwiseAbs().minCoeff();
  b.abs_A = hermitian_function(e, [](double x) { return std::abs(x); });
  b.sign_A = hermitian_function(e, [](double x) { return x > 0 ? 1.0 : (x < 0 ? -1.0 : 0.0); });
}

}  // namespace

CMat BdgData::projector_plus() const {
  return 0.5 * (CMat::Identity(A.rows(), A.cols()) + sign_A);
}

CMat BdgData::projector_minus() const {
  return 0.5 * (CMat::Identity(A.rows(), A.cols()) - sign_A);
}

BdgData build_A(const SingleParticleModel& model) {
  const auto n = model.T.rows();
  BdgData b;
  b.sites = static_cast<std::size_t>(n);
  b.A = CMat::Zero(2 * n, 2 * n);
  for (Eigen::Index x = 0; x < n; ++x)
    for (Eigen::Index y = 0; y < n; ++y) {
      const double re = model.T(x, y).real(), im = model.T(x, y).imag();
      b.A(2 * x, 2 * y) = I * im;
      b.A(2 * x, 2 * y + 1) = I * re;
      b.A(2 * x + 1, 2 * y) = -I * re;
      b.A(2 * x + 1, 2 * y + 1) = I * im;
    }
  b.trace_T = model.T.trace().real();
  spectral_parts(b);
  if (b.gap < kGaplessTol) throw Error(Errc::gapless, "A has a zero eigenvalue, s(A) is undefined");
  return b;
}

BdgData bdg_from_matrix(const CMat& A) {
  if (A.rows() != A.cols() || A.rows() % 2 != 0) throw Error(Errc::dimension, "A must be 2N x 2N");
  BdgData b;
  b.sites = static_cast<std::size_t>(A.rows() / 2);
  b.A = A;
  spectral_parts(b);
  return b;
}

double StructureReport::worst() const {
  return std::max({real_part, antisymmetry_A, symmetry_abs_A, antisymmetry_sign, selfadjoint_sign, sign_squared,
                   polar, gap_mismatch});
}

StructureReport structure_report(const BdgData& b, double single_particle_gap) {
  StructureReport r;
  const auto n = b.A.rows();
  r.real_part = max_abs(CMat(b.A.real().cast<cd>()));
  r.antisymmetry_A = max_abs(b.A + b.A.transpose());
  r.symmetry_abs_A = max_abs(b.abs_A - b.abs_A.transpose());
  r.antisymmetry_sign = max_abs(b.sign_A + b.sign_A.transpose());
  r.selfadjoint_sign = max_abs(b.sign_A - b.sign_A.adjoint());
  r.sign_squared = max_abs(b.sign_A * b.sign_A - CMat::Identity(n, n));
  r.polar = max_abs(b.A - b.sign_A * b.abs_A);
  r.min_eig_abs_A = eigh(b.abs_A).values.minCoeff();
  r.gap_mismatch = std::abs(r.min_eig_abs_A - single_particle_gap);
  return r;
}

CMat m_coefficients(const BdgData& b) {
  const auto n = static_cast<Eigen::Index>(b.sites);
  CMat M(n, 2 * n);
  const double k = 1.0 / std::sqrt(2.0);
  for (Eigen::Index x = 0; x < n; ++x)
    for (Eigen::Index y = 0; y < n; ++y)
      for (int nu = 0; nu < 2; ++nu)
        M(x, 2 * y + nu) = k * (I * b.sign_A(2 * x, 2 * y + nu) - b.sign_A(2 * x + 1, 2 * y + nu));
  return M;
}

}  // namespace gapstab
