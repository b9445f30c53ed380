#include "gapstab/assembly.hpp"

#include <cmath>
#include <random>

#include "gapstab/linalg.hpp"

namespace gapstab {

namespace {

void check_path(const std::vector<FlowState>& path, double budget) {
  if (path.empty()) throw Error(Errc::invalid_input, "empty flow path");
  if (path.back().intertwining_residual > budget)
    throw Error(Errc::refuse_to_build, "flow residual " + std::to_string(path.back().intertwining_residual) +
                                           " exceeds budget at s = " + std::to_string(path.back().s));
}

CVec ground_of(const std::vector<FlowState>& path) { return path.front().eigenvectors.col(0); }

EffectiveInteraction finish(int kind, const std::string& label, const std::vector<FlowState>& path, CMat op) {
  EffectiveInteraction w;
  w.kind = kind;
  w.label = label;
  w.s = path.back().s;
  w.op = std::move(op);
  w.norm = spectral_norm(w.op);
  w.annihilation_residual = (w.op * ground_of(path)).norm();
  return w;
}

// Trapezoid weights on the (possibly non-uniform) path grid.
std::vector<double> trapezoid_weights(const std::vector<FlowState>& path) {
  std::vector<double> w(path.size(), 0.0);
  for (std::size_t k = 1; k < path.size(); ++k) {
    double h = path[k].s - path[k - 1].s;
    w[k - 1] += 0.5 * h;
    w[k] += 0.5 * h;
  }
  return w;
}

}  // namespace

CMat normal_ordered(const CMat& A, const CVec& ground) {
  cd e = ground.dot(A * ground);
  return A - e * CMat::Identity(A.rows(), A.cols());
}

EffectiveInteraction build_W1(const std::vector<FlowState>& path, const CMat& VZ, const std::string& label,
                              double gamma, double budget) {
  check_path(path, budget);
  const FlowState& st = path.back();
  CMat inner = normal_ordered(st.U.adjoint() * VZ * st.U, ground_of(path));
  return finish(1, label, path, st.s * apply_filter(st, inner, gamma));
}

EffectiveInteraction build_W2(const std::vector<FlowState>& path, const CMat& H0Z, const std::string& label,
                              double gamma, double budget) {
  check_path(path, budget);
  const auto w = trapezoid_weights(path);
  CMat acc = CMat::Zero(H0Z.rows(), H0Z.cols());
  for (std::size_t k = 0; k < path.size(); ++k) {
    if (w[k] == 0.0) continue;
    const FlowState& p = path[k];
    acc += w[k] * (p.U.adjoint() * (I * commutator(H0Z, p.D)) * p.U);
  }
  return finish(2, label, path, apply_filter(path.back(), normal_ordered(acc, ground_of(path)), gamma));
}

cd third_kind_kernel(double omega, double gamma) {
  if (std::abs(omega) < 1e-14) return 0.0;
  return (w_hat(omega, gamma) - 1.0) / (I * omega);
}

EffectiveInteraction build_W3(const std::vector<FlowState>& path, const CMat& H0, const CMat& V, const CMat& H0Z,
                              const std::string& label, double gamma, double budget) {
  check_path(path, budget);
  const FlowState& st = path.back();
  // U^* H_s U - H0 equals s U^* V U + int_0^s U^* i[H0, D] U exactly; the
  // conjugated form is used to avoid the quadrature error of the integral.
  CMat shifted = st.U.adjoint() * (H0 + st.s * V) * st.U - H0;
  CMat L = I * commutator(shifted, H0Z);
  return finish(3, label, path, apply_spectral_kernel(st, L, [gamma](double w) { return third_kind_kernel(w, gamma); }));
}

double AssembledInteractions::max_annihilation(int kind) const {
  double m = 0.0;
  for (const auto& w : terms)
    if (kind == 0 || w.kind == kind) m = std::max(m, w.annihilation_residual);
  return m;
}

CMat AssembledInteractions::sum(int kind) const {
  CMat acc;
  for (const auto& w : terms) {
    if (kind != 0 && w.kind != kind) continue;
    if (acc.size() == 0)
      acc = w.op;
    else
      acc += w.op;
  }
  return acc;
}

double AssembledInteractions::norm(int kind) const {
  CMat s = sum(kind);
  return s.size() == 0 ? 0.0 : spectral_norm(s);
}

AssembledInteractions assemble_all(const std::vector<FlowState>& path, const DoubledHamiltonian& dh,
                                   const TransformedInteraction& tv, double gamma, double budget) {
  AssembledInteractions out;
  out.s = path.back().s;
  const CMat H0 = dh.H0.dense();
  const CMat V = CMat(tv.total().to_matrix(dh.space->dimension()));
  for (const auto& t : tv.terms) {
    CMat VZ = CMat(t.poly.to_matrix(dh.space->dimension()));
    std::string label;
    for (std::size_t m : t.support.modes()) label += (label.empty() ? "" : " ") + dh.space->label(m);
    auto w = build_W1(path, VZ, "{" + label + "}", gamma, budget);
    w.support = t.support;
    out.terms.push_back(std::move(w));
  }
  for (const auto& lt : dh.local_terms) {
    const CMat H0Z = lt.op.dense();
    std::string label;
    for (std::size_t x : lt.sites) label += (label.empty() ? "" : ",") + std::to_string(x);
    label = "{" + label + "}";
    auto w2 = build_W2(path, H0Z, label, gamma, budget);
    auto w3 = build_W3(path, H0, V, H0Z, label, gamma, budget);
    w2.support = w3.support = modes_of(lt.sites);
    out.terms.push_back(std::move(w2));
    out.terms.push_back(std::move(w3));
  }
  return out;
}

double reconstruct_hamiltonian(const FlowState& state, const CMat& H0, const CMat& V,
                               const std::vector<EffectiveInteraction>& ws) {
  CMat diff = state.U.adjoint() * (H0 + state.s * V) * state.U - H0;
  for (const auto& w : ws) diff -= w.op;
  return distance_to_scalar(diff);
}

double relative_bound_b(const CMat& W, const CMat& H0) {
  HermitianEig e = eigh(H0);
  int kernel = 0;
  Eigen::Index k0 = 0;
  for (Eigen::Index i = 0; i < e.values.size(); ++i)
    if (std::abs(e.values(i)) <= kKernelCutoff) {
      ++kernel;
      k0 = i;
    }
  if (kernel != 1) throw Error(Errc::precondition, "kernel of H0 is not one-dimensional");
  const CVec phi = e.vectors.col(k0);
  const double wn = spectral_norm(W);
  if ((W * phi).norm() > 1e-8 * std::max(1.0, wn))
    throw Error(Errc::unbounded_relative, "W does not annihilate the ground state; b is infinite");
  CMat pinv = hermitian_function(e, [](double x) { return std::abs(x) <= kKernelCutoff ? 0.0 : 1.0 / x; });
  return spectral_norm(CMat(W * pinv));
}

GapBound gap_lower_bound(double b, double delta_e) {
  if (!(b >= 0.0) || b >= 0.5) throw Error(Errc::domain, "relative bound b must lie in [0, 1/2)");
  const double r = b / std::sqrt(1.0 - 2.0 * b);
  return {(1.0 - r) * delta_e, r <= 0.5 + 1e-12};
}

CMat vacuum_projector(const FockSpacePtr& space, ModeSet X) {
  const Eigen::Index dim = space->dimension();
  CMat p = CMat::Zero(dim, dim);
  for (Eigen::Index s = 0; s < dim; ++s)
    if ((static_cast<std::uint64_t>(s) & X.bits()) == 0) p(s, s) = 1.0;
  return p;
}

LemmaResult g_norm_and_lemma(const FockSpacePtr& space, const std::vector<LocalW>& terms, const CMat& H0,
                             double delta_e, const std::vector<CVec>& trials) {
  LemmaResult r;
  const Eigen::Index dim = space->dimension();
  std::vector<double> per_mode(space->modes(), 0.0);
  CMat W = CMat::Zero(dim, dim);
  for (const auto& t : terms) {
    CMat p = vacuum_projector(space, t.support);
    const double n = spectral_norm(t.op);
    if (spectral_norm(CMat(t.op * p)) > 1e-10 * std::max(1.0, n)) {
      std::string label;
      for (std::size_t m : t.support.modes()) label += " " + space->label(m);
      throw Error(Errc::precondition, "W_X P_{0,X} != 0 for X = {" + label + " }");
    }
    for (std::size_t m : t.support.modes()) per_mode[m] += static_cast<double>(t.support.size()) * n;
    W += t.op;
  }
  for (double v : per_mode) r.g_tilde = std::max(r.g_tilde, v);
  const double scale = std::pow(r.g_tilde / delta_e, 2);
  for (const CVec& psi : trials) {
    const double lhs = (W * psi).squaredNorm();
    const double rhs = (H0 * psi).squaredNorm();
    if (rhs <= 1e-24) {
      if (lhs > 1e-20) r.worst_ratio = std::numeric_limits<double>::infinity();
      continue;
    }
    if (scale == 0.0) continue;
    r.worst_ratio = std::max(r.worst_ratio, lhs / (scale * rhs));
  }
  return r;
}

std::vector<CVec> lemma_trials(const CMat& H0, int random_count, std::uint64_t seed) {
  std::vector<CVec> out;
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g;
  for (int k = 0; k < random_count; ++k) {
    CVec v(H0.rows());
    for (Eigen::Index i = 0; i < v.size(); ++i) v(i) = cd(g(rng), g(rng));
    out.push_back(v.normalized());
  }
  HermitianEig e = eigh(H0);
  for (Eigen::Index i = 0; i < e.vectors.cols(); ++i) out.push_back(e.vectors.col(i));
  return out;
}

namespace {

CMat number_dense(const FockSpacePtr& space, std::size_t m) { return number(space, m).dense(); }

}  // namespace

double decomposition_identity(const FockSpacePtr& space, ModeSet X) {
  if (X.empty()) throw Error(Errc::invalid_input, "X must be nonempty");
  const Eigen::Index dim = space->dimension();
  const CMat id = CMat::Identity(dim, dim);
  CMat lhs = id - vacuum_projector(space, X);
  CMat rhs = CMat::Zero(dim, dim);
  CMat Q = id;
  for (std::size_t m : X.modes()) {
    CMat q = number_dense(space, m);
    rhs += Q * q;
    Q = Q * (id - q);
  }
  return spectral_norm(CMat(lhs - rhs));
}

double wx_decomposition_residual(const FockSpacePtr& space, ModeSet X, const CMat& WX) {
  const Eigen::Index dim = space->dimension();
  const CMat id = CMat::Identity(dim, dim);
  std::vector<CMat> left;  // Q_{n-1} q_n
  CMat Q = id;
  for (std::size_t m : X.modes()) {
    CMat q = number_dense(space, m);
    left.push_back(Q * q);
    Q = Q * (id - q);
  }
  CMat acc = CMat::Zero(dim, dim);
  for (const CMat& a : left)
    for (const CMat& b : left) acc += a.adjoint() * WX * b;
  return spectral_norm(CMat(WX - acc));
}

GapCurve gap_curve(const SpMat& H0, const SpMat& V, const std::vector<double>& s_grid, double degeneracy_tol) {
  GapCurve c;
  c.lipschitz_bound = 2.0 * spectral_norm(V);
  for (double s : s_grid) {
    SpMat h = H0 + s * V;
    RVec ev;
    try {
      if (h.rows() <= kDenseLimit) {
        ev = eigh(CMat(h)).values.head(2);
      } else {
        ev = lanczos_lowest(h, 2);
      }
    } catch (const Error&) {
      throw Error(Errc::numerical, "eigensolve failed at s = " + std::to_string(s));
    }
    c.s.push_back(s);
    c.E0.push_back(ev(0));
    c.E1.push_back(ev(1));
    c.gap.push_back(ev(1) - ev(0));
    c.nondegenerate.push_back(ev(1) - ev(0) > degeneracy_tol);
  }
  const double half = c.gap.empty() ? 0.0 : 0.5 * c.gap.front();
  bool holding = true;
  for (std::size_t k = 0; k < c.s.size(); ++k) {
    if (holding && c.gap[k] >= half && c.nondegenerate[k])
      c.s_dagger = std::abs(c.s[k]);
    else
      holding = false;
    if (k > 0) {
      const double ds = std::abs(c.s[k] - c.s[k - 1]);
      const double jump = std::abs(c.gap[k] - c.gap[k - 1]);
      c.max_slope = std::max(c.max_slope, jump / ds);
      if (jump > c.lipschitz_bound * ds + 1e-12) c.continuous = false;
    }
  }
  return c;
}

OperatorMatrix physical_h0(const SingleParticleModel& model, const FockSpacePtr& space) {
  const std::size_t n = model.lattice.size();
  if (space->modes() != n) throw Error(Errc::dimension, "physical Fock space must have one mode per site");
  NormalOrderedPoly p;
  for (std::size_t x = 0; x < n; ++x)
    for (std::size_t y = 0; y < n; ++y) {
      cd t = model.T(static_cast<Eigen::Index>(x), static_cast<Eigen::Index>(y));
      if (t != cd(0.0)) p.add_term({1ULL << x, 1ULL << y}, t);
    }
  return p.to_operator(space);
}

}  // namespace gapstab
