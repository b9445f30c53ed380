#include "gapstab/localization.hpp"

#include <bit>
#include <cmath>

#include "gapstab/interaction.hpp"
#include "gapstab/linalg.hpp"

namespace gapstab {

namespace {

// Jordan-Wigner sign of xi_m + xi_m^dagger acting on state s.
inline double string_sign(std::uint64_t s, std::size_t mode) {
  return (std::popcount(s & ((1ULL << mode) - 1)) & 1) ? -1.0 : 1.0;
}

void require_even(const CMat& A, const char* what) {
  if (parity_of(A) != Parity::even) throw Error(Errc::parity, std::string(what) + " needs an even-parity operator");
}

std::size_t checked_modes(const CMat& A) {
  if (A.rows() != A.cols()) throw Error(Errc::dimension, "operator is not square");
  return modes_of_dimension(A.rows());
}

std::string describe(ModeSet Z) {
  std::string out = "{";
  for (std::size_t m : Z.modes()) {
    if (out.size() > 1) out += " ";
    out += std::to_string(m / 2) + (m % 2 ? ",d" : ",c");
  }
  return out + "}";
}

}  // namespace

std::size_t modes_of_dimension(Eigen::Index dim) {
  if (dim <= 0 || (dim & (dim - 1)) != 0) throw Error(Errc::dimension, "dimension is not a power of two");
  return static_cast<std::size_t>(std::countr_zero(static_cast<std::uint64_t>(dim)));
}

// Same probe as support_of, evaluated entrywise on the dense matrix: the
// commutator with q_m only sees entries that flip bit m, and xi_m + xi_m^dagger
// permutes basis states with the string sign.
ModeSet support_of_dense(const CMat& A, double tol) {
  const std::size_t modes = checked_modes(A);
  const Parity p = parity_of(A, tol);
  if (p == Parity::mixed) throw Error(Errc::unsupported, "support of a mixed-parity operator is undefined");
  const double anti = p == Parity::odd ? 1.0 : -1.0;
  const auto dim = A.rows();
  ModeSet sup;
  for (std::size_t m = 0; m < modes; ++m) {
    const Eigen::Index bit = Eigen::Index(1) << m;
    double cq = 0.0, cc = 0.0;
    for (Eigen::Index j = 0; j < dim; ++j) {
      const double sj = string_sign(static_cast<std::uint64_t>(j), m);
      for (Eigen::Index i = 0; i < dim; ++i) {
        if ((i ^ j) & bit) cq += std::norm(A(i, j));
        const double si = string_sign(static_cast<std::uint64_t>(i), m);
        cc += std::norm(A(i, j ^ bit) * sj + anti * si * A(i ^ bit, j));
      }
    }
    if (std::sqrt(cq) > tol || std::sqrt(cc) > tol) sup.insert(m);
  }
  return sup;
}

Parity parity_of(const CMat& A, double tol) {
  double even = 0.0, odd = 0.0;
  for (Eigen::Index j = 0; j < A.cols(); ++j)
    for (Eigen::Index i = 0; i < A.rows(); ++i) {
      const double a = std::abs(A(i, j));
      if (a == 0.0) continue;
      if (std::popcount(static_cast<std::uint64_t>(i ^ j)) & 1)
        odd = std::max(odd, a);
      else
        even = std::max(even, a);
    }
  const double scale = tol * std::max(1.0, std::max(even, odd));
  if (odd <= scale) return Parity::even;
  if (even <= scale) return Parity::odd;
  return Parity::mixed;
}

CMat single_mode_average(const CMat& A, std::size_t mode) {
  const std::size_t modes = checked_modes(A);
  if (mode >= modes) throw Error(Errc::site_out_of_range, "mode outside the Fock space");
  const Eigen::Index dim = A.rows();
  const std::uint64_t bit = 1ULL << mode;
  // (A + Z A Z)/2 keeps the entries diagonal in mode m.
  CMat B = A;
  for (Eigen::Index j = 0; j < dim; ++j)
    for (Eigen::Index i = 0; i < dim; ++i)
      if (((i ^ j) & bit) != 0) B(i, j) = 0.0;
  // (B + X B X)/2 with X = xi + xi^dagger and its string.
  CMat out(dim, dim);
  for (Eigen::Index j = 0; j < dim; ++j) {
    const auto jf = static_cast<Eigen::Index>(static_cast<std::uint64_t>(j) ^ bit);
    const double sj = string_sign(static_cast<std::uint64_t>(j), mode);
    for (Eigen::Index i = 0; i < dim; ++i) {
      const auto iff = static_cast<Eigen::Index>(static_cast<std::uint64_t>(i) ^ bit);
      const double si = string_sign(static_cast<std::uint64_t>(i), mode);
      out(i, j) = 0.5 * (B(i, j) + si * sj * B(iff, jf));
    }
  }
  return out;
}

CMat pi_bar(const CMat& A, ModeSet X) {
  const std::size_t modes = checked_modes(A);
  require_even(A, "pi_bar");
  if (!X.subset_of(ModeSet::range(modes))) throw Error(Errc::site_out_of_range, "mode set outside the Fock space");
  CMat out = A;
  for (std::size_t m : X.modes()) out = single_mode_average(out, m);
  return out;
}

OperatorMatrix pi_bar(const OperatorMatrix& A, ModeSet X) {
  OperatorMatrix r = OperatorMatrix::from_dense(A.space, pi_bar(A.dense(), X));
  r.declared_support = A.declared_support.minus(X);
  return r;
}

CMat sign_swap_unitary(ModeSet X, std::uint64_t sigma, std::size_t modes) {
  if (modes > kMaxFockModes) throw Error(Errc::dimension, "too many modes for a dense unitary");
  const Eigen::Index dim = Eigen::Index(1) << modes;
  CMat U = CMat::Identity(dim, dim);
  for (std::size_t m : X.modes()) {
    const unsigned digit = sigma & 3U;
    sigma >>= 2;
    const std::uint64_t bit = 1ULL << m;
    CMat Zm = CMat::Zero(dim, dim), Xm = CMat::Zero(dim, dim);
    for (Eigen::Index s = 0; s < dim; ++s) {
      const auto u = static_cast<std::uint64_t>(s);
      Zm(s, s) = (u & bit) ? -1.0 : 1.0;
      Xm(static_cast<Eigen::Index>(u ^ bit), s) = string_sign(u, m);
    }
    CMat factor = CMat::Identity(dim, dim);
    if (digit == 1) factor = Zm;
    if (digit == 2) factor = Xm;
    if (digit == 3) factor = Zm * Xm;
    U = U * factor;
  }
  return U;
}

CMat pi_bar_direct(const CMat& A, ModeSet X) {
  const std::size_t modes = checked_modes(A);
  require_even(A, "pi_bar");
  const std::uint64_t count = 1ULL << (2 * X.size());
  CMat out = CMat::Zero(A.rows(), A.cols());
  for (std::uint64_t sigma = 0; sigma < count; ++sigma) {
    CMat U = sign_swap_unitary(X, sigma, modes);
    out += U.adjoint() * A * U;
  }
  return out / static_cast<double>(count);
}

CMat pi_truncate(const CMat& A, ModeSet X) {
  const std::size_t modes = checked_modes(A);
  return pi_bar(A, ModeSet::range(modes).minus(X));
}

OperatorMatrix pi_truncate(const OperatorMatrix& A, ModeSet X) {
  OperatorMatrix r = OperatorMatrix::from_dense(A.space, pi_truncate(A.dense(), X));
  r.declared_support = A.declared_support & X;
  return r;
}

TruncationLemmaCheck truncation_lemma(const CMat& A, ModeSet X) {
  const std::size_t modes = checked_modes(A);
  const ModeSet Y = ModeSet::range(modes).minus(X);
  TruncationLemmaCheck r;
  const std::uint64_t count = 1ULL << (2 * Y.size());
  for (std::uint64_t sigma = 0; sigma < count; ++sigma) {
    CMat U = sign_swap_unitary(Y, sigma, modes);
    r.epsilon = std::max(r.epsilon, spectral_norm(commutator(A, U)));
  }
  r.lhs = spectral_norm(CMat(A - pi_truncate(A, X)));
  r.holds = r.lhs <= r.epsilon * (1.0 + 1e-10) + 1e-12;
  return r;
}

const char* to_string(ShellMode m) { return m == ShellMode::filter ? "filter" : "flow-conjugation"; }

ModeSet grown_region(const Lattice& lattice, ModeSet Z, int n, ShellMode mode) {
  const SiteSet base = sites_of(Z);
  const int radius = mode == ShellMode::filter ? 2 * n : n;
  return modes_of(lattice.ball(base, radius));
}

LocalizationShells shell_decompose(const CMat& whole, const Lattice& lattice, ModeSet Z, int n_max, ShellMode mode) {
  const std::size_t modes = checked_modes(whole);
  if (modes != 2 * lattice.size()) throw Error(Errc::dimension, "operator does not live on the doubled lattice");
  if (n_max < 0) throw Error(Errc::invalid_input, "n_max must be nonnegative");
  require_even(whole, "shell_decompose");

  LocalizationShells out;
  out.base = Z;
  out.mode = mode;
  const double scale = std::max(1.0, spectral_norm(whole));
  const CVec vac = CVec::Unit(whole.rows(), 0);
  CMat sum = CMat::Zero(whole.rows(), whole.cols());
  std::map<int, double> norms;
  for (int n = 0; n <= n_max; ++n) {
    // Z_0 is Z itself, not the ball around its sites.
    const ModeSet region = n == 0 ? Z : grown_region(lattice, Z, n, mode);
    out.truncations.push_back(pi_truncate(whole, region));
    Shell sh;
    sh.n = n;
    sh.region = region;
    sh.op = n == 0 ? out.truncations[0] : CMat(out.truncations[n] - out.truncations[n - 1]);
    sh.norm = spectral_norm(sh.op);
    sh.annihilation_residual = (sh.op * vac).norm();
    if (!support_of_dense(sh.op, 1e-10 * scale).subset_of(region)) out.support_violation = 1.0;
    sum += sh.op;
    norms[n] = sh.norm;
    out.shells.push_back(std::move(sh));
  }
  out.tail = whole - out.truncations.back();
  out.tail_norm = spectral_norm(out.tail);
  out.telescoping_residual = spectral_norm(CMat(sum + out.tail - whole));
  if (norms.size() >= 2) {
    try {
      out.fit = fit_decay_samples(norms);
    } catch (const Error&) {
      out.fit.reset();
    }
  }
  return out;
}

SandwichSplit sandwich_split(const CMat& W, const LocalizationShells& shells, double tol) {
  if (shells.truncations.empty()) throw Error(Errc::invalid_input, "no shells to split");
  const std::size_t modes = checked_modes(W);
  const Eigen::Index dim = W.rows();
  const double scale = std::max(1.0, spectral_norm(W));

  // vacuum projectors are diagonal in the occupation basis; keep the diagonals
  auto vac = [dim](ModeSet X) {
    RVec d(dim);
    for (Eigen::Index s = 0; s < dim; ++s) d(s) = (static_cast<std::uint64_t>(s) & X.bits()) == 0 ? 1.0 : 0.0;
    return d;
  };
  auto sand = [](const RVec& l, const CMat& M, const RVec& r) -> CMat {
    return l.cast<cd>().asDiagonal() * M * r.cast<cd>().asDiagonal();
  };
  const RVec one = RVec::Ones(dim);
  const RVec P0 = vac(ModeSet::range(modes));
  const double right = spectral_norm(CMat(W * P0.cast<cd>().asDiagonal()));
  const double left = spectral_norm(CMat(P0.cast<cd>().asDiagonal() * W));
  if (right > tol * scale || left > tol * scale)
    throw Error(Errc::precondition, "W_Z does not annihilate the vacuum for Z = " + describe(shells.base));

  SandwichSplit out;
  const std::size_t N = shells.truncations.size();
  CMat sum = CMat::Zero(dim, dim);
  RVec P_prev;
  for (std::size_t n = 0; n < N; ++n) {
    const ModeSet region = shells.shells[n].region;
    const CMat& delta = shells.shells[n].op;
    const RVec Pn = vac(region);
    const RVec Qn = n == 0 ? Pn : vac(region.minus(shells.shells[n - 1].region));
    CMat part = sand(one - Pn, delta, one - Pn);
    if (n > 0) {
      out.projector_identity = std::max(out.projector_identity, (Pn - P_prev.cwiseProduct(Qn)).cwiseAbs().maxCoeff());
      const CMat& prev = shells.truncations[n - 1];
      const CMat mid = sand(P_prev, prev, P_prev);
      part += sand(one - P_prev, prev, P_prev.cwiseProduct(one - Qn));
      part += sand((one - Qn).cwiseProduct(P_prev), prev, one - P_prev);
      part += sand(one - Qn, mid, one - Qn);
    }
    SandwichPart p;
    p.n = static_cast<int>(n);
    p.region = region;
    p.norm = spectral_norm(part);
    p.annihilation_residual = spectral_norm(CMat(part * P0.cast<cd>().asDiagonal()));
    p.support_ok = support_of_dense(part, 1e-10 * scale).subset_of(region);
    out.supports_ok = out.supports_ok && p.support_ok;
    out.max_annihilation = std::max(out.max_annihilation, p.annihilation_residual);
    sum += part;
    p.op = std::move(part);
    out.parts.push_back(std::move(p));
    P_prev = Pn;
  }
  // Blocks of the last truncation that touch the vacuum of its region are not
  // carried by any part; they vanish once the region covers every mode.
  const CMat& last = shells.truncations.back();
  out.boundary_norm = spectral_norm(CMat(last - sand(one - P_prev, last, one - P_prev)));
  out.sum_residual = spectral_norm(CMat(sum - W));
  return out;
}

SandwichSplit sandwich_split(const EffectiveInteraction& w, const LocalizationShells& shells, double tol) {
  return sandwich_split(w.op, shells, tol);
}

}  // namespace gapstab
