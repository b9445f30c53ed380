#pragma once

#include <functional>

#include "gapstab/common.hpp"

namespace gapstab {

// Smooth bump exp(1 - 1/(1 - (w/gamma)^2)) on (-gamma, gamma), zero outside.
double w_hat(double omega, double gamma);

// Time-domain weight w(t) = (1/pi) int_0^gamma w_hat(w) cos(w t) dw.
double w_time(double t, double gamma, int omega_nodes = 0);

// int_{|t| > T} |w(t)| dt, evaluated on [T, T + span].
double weight_tail_mass(double gamma, double T, double span = 0.0);

struct GaussLegendre {
  std::vector<double> nodes;
  std::vector<double> weights;
};
GaussLegendre gauss_legendre(int order, double a, double b);

inline constexpr double kFlowGapTol = 1e-8;
inline constexpr double kIntertwiningTol = 1e-6;

struct FlowState {
  double s = 0.0;
  RVec energies;     // of H_s = H0 + s V, ascending
  CMat eigenvectors;
  double E0 = 0.0;
  double gap = 0.0;
  bool nondegenerate = true;
  CMat U;            // accumulated flow unitary from 0 to s
  CMat D;            // generator at s
  double intertwining_residual = 0.0;
  double unitarity_defect = 0.0;
  double min_level_spacing = 0.0;

  // Eigenbasis of U^dagger H_s U.
  CMat tilde_basis() const { return U.adjoint() * eigenvectors; }
  CMat tilde_hamiltonian() const;
};

// D(s) = i[P, P'] with P' from first-order perturbation theory, so that
// dU/ds = i D U transports the ground projector.
CMat kato_generator(const CMat& H0, const CMat& V, double s, double gap_tol = kFlowGapTol);

// States on every grid point; each grid interval is split into rk4_substeps
// classical RK4 steps followed by a polar re-unitarisation.
std::vector<FlowState> integrate_flow(const CMat& H0, const CMat& V, const std::vector<double>& s_grid,
                                      int rk4_substeps = 1, double gap_tol = kFlowGapTol);

std::vector<double> uniform_grid(double s_max, int steps);

double min_gap(const std::vector<FlowState>& path);
double default_filter_gamma(const std::vector<FlowState>& path, double factor = 0.9);

// A_mn -> k(E_m - E_n) A_mn in the eigenbasis of U^dagger H_s U.
CMat apply_spectral_kernel(const FlowState& state, const CMat& A, const std::function<cd(double)>& kernel);
CMat apply_filter(const FlowState& state, const CMat& A, double gamma);

// Time-domain evaluation of the filter by Gauss-Legendre quadrature on
// [-T, T]; returns the norm distance to apply_filter.
double quasi_adiabatic_check(const FlowState& state, const CMat& A, double T, int order, double gamma);

}  // namespace gapstab
