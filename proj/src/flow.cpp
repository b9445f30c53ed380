#include "gapstab/flow.hpp"

#include <gsl/gsl_integration.h>

#include <cmath>
#include <numbers>

#include "gapstab/linalg.hpp"

namespace gapstab {

double w_hat(double omega, double gamma) {
  if (!(gamma > 0.0)) throw Error(Errc::domain, "filter width gamma must be positive");
  const double x = omega / gamma;
  if (std::abs(x) >= 1.0) return 0.0;
  return std::exp(1.0 - 1.0 / (1.0 - x * x));
}

GaussLegendre gauss_legendre(int order, double a, double b) {
  if (order < 1) throw Error(Errc::invalid_input, "quadrature order must be positive");
  gsl_integration_glfixed_table* table = gsl_integration_glfixed_table_alloc(static_cast<std::size_t>(order));
  GaussLegendre q;
  q.nodes.resize(order);
  q.weights.resize(order);
  for (int i = 0; i < order; ++i)
    gsl_integration_glfixed_point(a, b, static_cast<std::size_t>(i), &q.nodes[i], &q.weights[i], table);
  gsl_integration_glfixed_table_free(table);
  return q;
}

namespace {

int omega_order_for(double t, double gamma) {
  return std::max(200, static_cast<int>(std::ceil(1.5 * std::abs(t) * gamma)) + 64);
}

}  // namespace

double w_time(double t, double gamma, int omega_nodes) {
  const int order = omega_nodes > 0 ? omega_nodes : omega_order_for(t, gamma);
  GaussLegendre q = gauss_legendre(order, 0.0, gamma);
  double acc = 0.0;
  for (int i = 0; i < order; ++i) acc += q.weights[i] * w_hat(q.nodes[i], gamma) * std::cos(q.nodes[i] * t);
  return acc / std::numbers::pi;
}

double weight_tail_mass(double gamma, double T, double span) {
  if (span <= 0.0) span = 400.0 / gamma;
  const int pieces = std::max(8, static_cast<int>(span * gamma));
  const double h = span / pieces;
  const int omega_order = omega_order_for(T + span, gamma);
  GaussLegendre wq = gauss_legendre(omega_order, 0.0, gamma);
  std::vector<double> wv(omega_order);
  for (int i = 0; i < omega_order; ++i) wv[i] = wq.weights[i] * w_hat(wq.nodes[i], gamma);
  double acc = 0.0;
  for (int p = 0; p < pieces; ++p) {
    GaussLegendre tq = gauss_legendre(16, T + p * h, T + (p + 1) * h);
    for (int j = 0; j < 16; ++j) {
      double w = 0.0;
      for (int i = 0; i < omega_order; ++i) w += wv[i] * std::cos(wq.nodes[i] * tq.nodes[j]);
      acc += tq.weights[j] * std::abs(w / std::numbers::pi);
    }
  }
  return 2.0 * acc;
}

CMat FlowState::tilde_hamiltonian() const {
  CMat b = tilde_basis();
  return b * energies.cast<cd>().asDiagonal() * b.adjoint();
}

namespace {

struct GroundData {
  HermitianEig eig;
  double gap;
};

GroundData ground_data(const CMat& H0, const CMat& V, double s) {
  GroundData g{eigh(CMat(H0 + s * V)), 0.0};
  g.gap = g.eig.values.size() > 1 ? g.eig.values(1) - g.eig.values(0) : 0.0;
  return g;
}

CMat generator_from(const GroundData& g, const CMat& V, double gap_tol, double s) {
  if (g.gap < gap_tol)
    throw Error(Errc::degenerate_flow, "ground state degenerate at s = " + std::to_string(s));
  const CMat& vec = g.eig.vectors;
  const CVec v0 = vec.col(0);
  CVec c = vec.adjoint() * (V * v0);
  CVec d = CVec::Zero(c.size());
  for (Eigen::Index n = 1; n < c.size(); ++n) d(n) = c(n) / (g.eig.values(0) - g.eig.values(n));
  const CVec v1 = vec * d;  // |0'>, orthogonal to |0>
  // i[P, P'] = i(|0><0'| - |0'><0|)
  return I * (v0 * v1.adjoint() - v1 * v0.adjoint());
}

}  // namespace

CMat kato_generator(const CMat& H0, const CMat& V, double s, double gap_tol) {
  return generator_from(ground_data(H0, V, s), V, gap_tol, s);
}

std::vector<double> uniform_grid(double s_max, int steps) {
  if (steps < 1) throw Error(Errc::invalid_input, "grid needs at least one step");
  std::vector<double> g(steps + 1);
  for (int k = 0; k <= steps; ++k) g[k] = s_max * k / steps;
  return g;
}

std::vector<FlowState> integrate_flow(const CMat& H0, const CMat& V, const std::vector<double>& s_grid,
                                      int rk4_substeps, double gap_tol) {
  if (s_grid.empty() || s_grid.front() != 0.0) throw Error(Errc::invalid_input, "grid must start at s = 0");
  for (std::size_t k = 1; k < s_grid.size(); ++k)
    if (!(s_grid[k] > s_grid[k - 1])) throw Error(Errc::invalid_input, "grid must be strictly ascending");
  if (rk4_substeps < 1) throw Error(Errc::invalid_input, "rk4_substeps must be positive");

  const Eigen::Index dim = H0.rows();
  const CMat id = CMat::Identity(dim, dim);
  std::vector<FlowState> path;
  CMat U = id;
  CVec g0;

  auto record = [&](double s, const GroundData& g) {
    FlowState st;
    st.s = s;
    st.energies = g.eig.values;
    st.eigenvectors = g.eig.vectors;
    st.E0 = g.eig.values(0);
    st.gap = g.gap;
    st.nondegenerate = g.gap >= gap_tol;
    st.U = U;
    st.D = generator_from(g, V, gap_tol, s);
    if (path.empty()) g0 = g.eig.vectors.col(0);
    CVec rotated = U.adjoint() * g.eig.vectors.col(0);
    st.intertwining_residual = spectral_norm(CMat(rotated * rotated.adjoint() - g0 * g0.adjoint()));
    st.unitarity_defect = max_abs(CMat(U.adjoint() * U - id));
    double spacing = std::numeric_limits<double>::infinity();
    for (Eigen::Index i = 1; i < st.energies.size(); ++i)
      spacing = std::min(spacing, st.energies(i) - st.energies(i - 1));
    st.min_level_spacing = spacing;
    path.push_back(std::move(st));
  };

  auto generator = [&](double s) {
    GroundData g = ground_data(H0, V, s);
    return generator_from(g, V, gap_tol, s);
  };

  try {
    record(0.0, ground_data(H0, V, 0.0));
    for (std::size_t k = 1; k < s_grid.size(); ++k) {
      const double h = (s_grid[k] - s_grid[k - 1]) / rk4_substeps;
      CMat d_start = path.back().D;
      for (int j = 0; j < rk4_substeps; ++j) {
        const double s = s_grid[k - 1] + j * h;
        const bool last = j + 1 == rk4_substeps;
        CMat d_mid = generator(s + 0.5 * h);
        GroundData g_end = ground_data(H0, V, last ? s_grid[k] : s + h);
        CMat d_end = generator_from(g_end, V, gap_tol, s + h);
        CMat k1 = I * d_start * U;
        CMat k2 = I * d_mid * (U + 0.5 * h * k1);
        CMat k3 = I * d_mid * (U + 0.5 * h * k2);
        CMat k4 = I * d_end * (U + h * k3);
        U = polar_unitary(U + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4));
        d_start = d_end;
        if (last) record(s_grid[k], g_end);
      }
    }
  } catch (const Error& e) {
    if (e.code() != Errc::degenerate_flow) throw;
    const double last_good = path.empty() ? 0.0 : path.back().s;
    throw Error(Errc::flow_aborted, std::string(e.what()) + "; last good s = " + std::to_string(last_good));
  }
  return path;
}

double min_gap(const std::vector<FlowState>& path) {
  double g = std::numeric_limits<double>::infinity();
  for (const auto& st : path) g = std::min(g, st.gap);
  return g;
}

double default_filter_gamma(const std::vector<FlowState>& path, double factor) {
  return factor * min_gap(path);
}

CMat apply_spectral_kernel(const FlowState& state, const CMat& A, const std::function<cd(double)>& kernel) {
  const CMat b = state.tilde_basis();
  CMat m = b.adjoint() * A * b;
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j) m(i, j) *= kernel(state.energies(i) - state.energies(j));
  return b * m * b.adjoint();
}

CMat apply_filter(const FlowState& state, const CMat& A, double gamma) {
  if (!(gamma > 0.0)) throw Error(Errc::domain, "filter width gamma must be positive");
  return apply_spectral_kernel(state, A, [gamma](double w) { return cd(w_hat(w, gamma), 0.0); });
}

double quasi_adiabatic_check(const FlowState& state, const CMat& A, double T, int order, double gamma) {
  if (!(T > 0.0)) throw Error(Errc::domain, "time horizon must be positive");
  GaussLegendre tq = gauss_legendre(order, -T, T);
  const int omega_order = omega_order_for(T, gamma);
  GaussLegendre wq = gauss_legendre(omega_order, 0.0, gamma);
  std::vector<double> wt(order);
  for (int j = 0; j < order; ++j) {
    double w = 0.0;
    for (int i = 0; i < omega_order; ++i) w += wq.weights[i] * w_hat(wq.nodes[i], gamma) * std::cos(wq.nodes[i] * tq.nodes[j]);
    wt[j] = tq.weights[j] * w / std::numbers::pi;
  }
  CMat quad = apply_spectral_kernel(state, A, [&](double omega) {
    cd acc = 0.0;
    for (int j = 0; j < order; ++j) acc += wt[j] * std::exp(I * omega * tq.nodes[j]);
    return acc;
  });
  return spectral_norm(CMat(quad - apply_filter(state, A, gamma)));
}

}  // namespace gapstab
