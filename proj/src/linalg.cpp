#include "gapstab/linalg.hpp"

#include <cmath>
#include <random>

namespace gapstab {

HermitianEig eigh(const CMat& m) {
  CMat h = 0.5 * (m + m.adjoint());
  Eigen::SelfAdjointEigenSolver<CMat> es(h);
  if (es.info() != Eigen::Success) throw Error(Errc::numerical, "eigensolver did not converge");
  return {es.eigenvalues(), es.eigenvectors()};
}

namespace {

template <class Apply, class ApplyAdj>
double power_norm(Eigen::Index n, Apply apply, ApplyAdj apply_adj) {
  std::mt19937_64 rng(7);
  std::normal_distribution<double> g;
  CVec x(n);
  for (Eigen::Index i = 0; i < n; ++i) x(i) = cd(g(rng), g(rng));
  x.normalize();
  double last = 0.0;
  for (int it = 0; it < 2000; ++it) {
    CVec y = apply_adj(apply(x));
    double lam = y.norm();
    if (lam == 0.0) return 0.0;
    x = y / lam;
    if (std::abs(lam - last) <= 1e-10 * lam) return std::sqrt(lam);
    last = lam;
  }
  return std::sqrt(last);
}

}  // namespace

double spectral_norm(const CMat& m) {
  if (m.size() == 0) return 0.0;
  if (std::max(m.rows(), m.cols()) <= kDenseLimit) {
    if (m.rows() == m.cols() && (m - m.adjoint()).cwiseAbs().maxCoeff() == 0.0) {
      Eigen::SelfAdjointEigenSolver<CMat> es(m, Eigen::EigenvaluesOnly);
      return es.eigenvalues().cwiseAbs().maxCoeff();
    }
    Eigen::BDCSVD<CMat> svd(m);
    return svd.singularValues()(0);
  }
  return power_norm(
      m.cols(), [&](const CVec& v) { return CVec(m * v); },
      [&](const CVec& v) { return CVec(m.adjoint() * v); });
}

double spectral_norm(const SpMat& m) {
  if (std::max(m.rows(), m.cols()) <= kDenseLimit) return spectral_norm(CMat(m));
  SpMat adj = m.adjoint();
  return power_norm(
      m.cols(), [&](const CVec& v) { return CVec(m * v); },
      [&](const CVec& v) { return CVec(adj * v); });
}

double max_abs(const CMat& m) { return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff(); }

double hermiticity_defect(const CMat& m) { return max_abs(m - m.adjoint()); }

CMat commutator(const CMat& a, const CMat& b) { return a * b - b * a; }

CMat anticommutator(const CMat& a, const CMat& b) { return a * b + b * a; }

double distance_to_scalar(const CMat& hermitian) {
  if (hermitian.size() == 0) return 0.0;
  CMat h = 0.5 * (hermitian + hermitian.adjoint());
  Eigen::SelfAdjointEigenSolver<CMat> es(h, Eigen::EigenvaluesOnly);
  const RVec& ev = es.eigenvalues();
  return 0.5 * (ev(ev.size() - 1) - ev(0));
}

CMat polar_unitary(const CMat& u) {
  HermitianEig e = eigh(u.adjoint() * u);
  return u * hermitian_function(e, [](double x) { return 1.0 / std::sqrt(x); });
}

RVec lanczos_lowest(const SpMat& h, int k, int max_iter, double tol, std::uint64_t seed) {
  const Eigen::Index n = h.rows();
  if (n <= 2 * k + 2 || n <= 64) {
    Eigen::SelfAdjointEigenSolver<CMat> es(CMat(h), Eigen::EigenvaluesOnly);
    return es.eigenvalues().head(k);
  }
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g;
  const int m_max = static_cast<int>(std::min<Eigen::Index>(max_iter, n));
  CMat basis(n, m_max);
  CVec v(n);
  for (Eigen::Index i = 0; i < n; ++i) v(i) = cd(g(rng), g(rng));
  v.normalize();
  std::vector<double> alpha, beta;
  RVec last = RVec::Constant(k, 1e300);
  for (int j = 0; j < m_max; ++j) {
    basis.col(j) = v;
    CVec w = h * v;
    alpha.push_back(v.dot(w).real());
    // full reorthogonalisation, applied twice for stability
    for (int pass = 0; pass < 2; ++pass)
      w -= basis.leftCols(j + 1) * (basis.leftCols(j + 1).adjoint() * w);
    double b = w.norm();
    const int m = j + 1;
    if (m >= k && (m % 5 == 0 || b < 1e-12 || m == m_max)) {
      RMat t = RMat::Zero(m, m);
      for (int i = 0; i < m; ++i) {
        t(i, i) = alpha[i];
        if (i + 1 < m) t(i, i + 1) = t(i + 1, i) = beta[i];
      }
      Eigen::SelfAdjointEigenSolver<RMat> es(t, Eigen::EigenvaluesOnly);
      RVec now = es.eigenvalues().head(k);
      if ((now - last).cwiseAbs().maxCoeff() < tol || b < 1e-12 || m == m_max) return now;
      last = now;
    }
    beta.push_back(b);
    v = w / b;
  }
  return last;
}

}  // namespace gapstab
