#pragma once

#include "gapstab/flow.hpp"
#include "gapstab/frustration_free.hpp"

namespace gapstab {

struct EffectiveInteraction {
  int kind = 1;
  std::string label;  // originating Z
  ModeSet support;    // modes of Z
  double s = 0.0;
  CMat op;
  double norm = 0.0;
  double annihilation_residual = 0.0;
};

// ":A:" with respect to the ground vector.
CMat normal_ordered(const CMat& A, const CVec& ground);

// All builders take the flow path from s = 0 to s = path.back().s and refuse
// to run when the intertwining residual at the end exceeds the budget.
EffectiveInteraction build_W1(const std::vector<FlowState>& path, const CMat& VZ, const std::string& label,
                              double gamma, double budget = kIntertwiningTol);
EffectiveInteraction build_W2(const std::vector<FlowState>& path, const CMat& H0Z, const std::string& label,
                              double gamma, double budget = kIntertwiningTol);
EffectiveInteraction build_W3(const std::vector<FlowState>& path, const CMat& H0, const CMat& V, const CMat& H0Z,
                              const std::string& label, double gamma, double budget = kIntertwiningTol);

// Frequency kernel of int dt w(t) int_0^t dt' e^{i w t'}: (w_hat - 1)/(i w), 0 at w = 0.
cd third_kind_kernel(double omega, double gamma);

struct AssembledInteractions {
  double s = 0.0;
  std::vector<EffectiveInteraction> terms;
  double max_annihilation(int kind = 0) const;
  double norm(int kind) const;  // norm of the sum over Z of one kind
  CMat sum(int kind = 0) const;
};

// W1 for every group of the transformed interaction, W2 and W3 for every
// local term of H0.
AssembledInteractions assemble_all(const std::vector<FlowState>& path, const DoubledHamiltonian& dh,
                                   const TransformedInteraction& tv, double gamma,
                                   double budget = kIntertwiningTol);

// min over c of ||U^dagger H_s U - (H0 + sum W) - c||.
double reconstruct_hamiltonian(const FlowState& state, const CMat& H0, const CMat& V,
                               const std::vector<EffectiveInteraction>& ws);

inline constexpr double kKernelCutoff = 1e-10;

double relative_bound_b(const CMat& W, const CMat& H0);

struct GapBound {
  double value = 0.0;
  bool valid = false;  // b / sqrt(1 - 2b) <= 1/2
};

GapBound gap_lower_bound(double b, double delta_e);

struct LocalW {
  ModeSet support;
  CMat op;
};

struct LemmaResult {
  double g_tilde = 0.0;
  double worst_ratio = 0.0;
};

// Vacuum projector prod_{x in X} (1 - q_x) on the given space.
CMat vacuum_projector(const FockSpacePtr& space, ModeSet X);

LemmaResult g_norm_and_lemma(const FockSpacePtr& space, const std::vector<LocalW>& terms, const CMat& H0,
                             double delta_e, const std::vector<CVec>& trials);

std::vector<CVec> lemma_trials(const CMat& H0, int random_count, std::uint64_t seed);

// || (1 - P_{0,X}) - sum_n Q_{n-1} q_{x_n} ||.
double decomposition_identity(const FockSpacePtr& space, ModeSet X);
// || W_X - sum_{m,n} q_m Q_{m-1}^* W_X Q_{n-1} q_n ||.
double wx_decomposition_residual(const FockSpacePtr& space, ModeSet X, const CMat& WX);

struct GapCurve {
  std::vector<double> s;
  std::vector<double> E0;
  std::vector<double> E1;
  std::vector<double> gap;
  std::vector<bool> nondegenerate;
  double lipschitz_bound = 0.0;  // 2 ||V|| from Weyl's inequality
  double max_slope = 0.0;
  double s_dagger = 0.0;
  bool continuous = true;
};

GapCurve gap_curve(const SpMat& H0, const SpMat& V, const std::vector<double>& s_grid, double degeneracy_tol = 1e-8);

// Many-body a^dagger T a on the physical Fock space (one mode per site).
OperatorMatrix physical_h0(const SingleParticleModel& model, const FockSpacePtr& space);

}  // namespace gapstab
