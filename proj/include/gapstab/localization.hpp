#pragma once

#include "gapstab/assembly.hpp"
#include "gapstab/lattice.hpp"

namespace gapstab {

// Number of modes behind a 2^n dimensional matrix.
std::size_t modes_of_dimension(Eigen::Index dim);

// Parity of a dense operator in the occupation basis.
Parity parity_of(const CMat& A, double tol = 1e-12);

// support_of for a dense matrix, evaluated entrywise without sparse products.
ModeSet support_of_dense(const CMat& A, double tol = 1e-12);

// Average over {1, 1-2q_m, xi_m + xi_m^dagger, (1-2q_m)(xi_m + xi_m^dagger)}
// without a parity check. On odd operators the result can keep mode m.
CMat single_mode_average(const CMat& A, std::size_t mode);

// Conditional expectation onto the complement of X. Even operators only.
CMat pi_bar(const CMat& A, ModeSet X);
OperatorMatrix pi_bar(const OperatorMatrix& A, ModeSet X);

// Literal 4^|X| sum over the product unitaries; reference for small X.
CMat pi_bar_direct(const CMat& A, ModeSet X);

// Truncation onto X: pi_bar over the remaining modes.
CMat pi_truncate(const CMat& A, ModeSet X);
OperatorMatrix pi_truncate(const OperatorMatrix& A, ModeSet X);

// The unitary U_X(sigma) with sigma in base 4 (digit k belongs to the k-th mode of X).
CMat sign_swap_unitary(ModeSet X, std::uint64_t sigma, std::size_t modes);

struct TruncationLemmaCheck {
  double epsilon = 0.0;  // max over probes ||[A, U_Y(sigma)]||
  double lhs = 0.0;      // ||A - truncate_X(A)||
  bool holds = false;
};

// Probes every product unitary on Y = complement of X.
TruncationLemmaCheck truncation_lemma(const CMat& A, ModeSet X);

// Flow conjugation grows Z to Z_n (distance n); the filter grows it once more
// to the set of sites within n of Z_n.
enum class ShellMode { flow_conjugation, filter };
const char* to_string(ShellMode m);

// Doubled modes of the sites within the growth radius of the sites of Z.
ModeSet grown_region(const Lattice& lattice, ModeSet Z, int n, ShellMode mode);

struct Shell {
  int n = 0;
  ModeSet region;
  CMat op;
  double norm = 0.0;
  double annihilation_residual = 0.0;  // ||shell P_0||
};

struct LocalizationShells {
  ModeSet base;
  ShellMode mode = ShellMode::flow_conjugation;
  std::vector<CMat> truncations;  // Pi_{Z_n}(whole)
  std::vector<Shell> shells;
  CMat tail;
  double tail_norm = 0.0;
  double telescoping_residual = 0.0;  // ||sum shells + tail - whole||
  double support_violation = 0.0;     // worst mode outside its region, 0 or 1
  std::optional<DecayFit> fit;
};

LocalizationShells shell_decompose(const CMat& whole, const Lattice& lattice, ModeSet Z, int n_max,
                                   ShellMode mode = ShellMode::flow_conjugation);

struct SandwichPart {
  int n = 0;
  ModeSet region;
  CMat op;
  double norm = 0.0;
  double annihilation_residual = 0.0;
  bool support_ok = true;
};

struct SandwichSplit {
  std::vector<SandwichPart> parts;
  double sum_residual = 0.0;          // ||sum parts - W_Z||
  double max_annihilation = 0.0;      // max_n ||W_{Z,n} P_0||
  double projector_identity = 0.0;    // max_n ||P_n - P_{n-1} Q_n||
  double boundary_norm = 0.0;         // vacuum blocks of the last truncation, left to no part
  bool supports_ok = true;
};

// Four-block projector sandwich of the shells; every part kills the vacuum.
SandwichSplit sandwich_split(const CMat& W, const LocalizationShells& shells, double tol = 1e-9);
SandwichSplit sandwich_split(const EffectiveInteraction& w, const LocalizationShells& shells, double tol = 1e-9);

}  // namespace gapstab
