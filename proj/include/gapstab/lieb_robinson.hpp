#pragma once

#include "gapstab/fock.hpp"
#include "gapstab/lattice.hpp"
#include "gapstab/linalg.hpp"

namespace gapstab {

// Heisenberg evolution tau_t(A) = e^{iHt} A e^{-iHt} from one diagonalisation.
class Evolution {
 public:
  explicit Evolution(const CMat& H);
  explicit Evolution(const OperatorMatrix& H) : Evolution(H.dense()) {}

  CMat evolve(const CMat& A, double t) const;
  const HermitianEig& eig() const { return eig_; }

 private:
  HermitianEig eig_;
};

struct LRSample {
  double t = 0.0;
  double norm = 0.0;
};

struct LRProfile {
  int distance = 0;
  double bound = 0.0;  // 2 ||A|| ||B||
  bool overlapping = false;
  std::vector<LRSample> samples;
};

// Distance between the supports of A and B, read off with support_of. Modes
// are lattice sites, or doubled modes 2x + mu when the space is twice as large.
int support_distance(const OperatorMatrix& A, const OperatorMatrix& B, const Lattice& lattice);

LRProfile commutator_profile(const Evolution& ev, const OperatorMatrix& A, const OperatorMatrix& B,
                             const std::vector<double>& t_grid, const Lattice& lattice);

struct VelocityFit {
  double theta = 0.1;
  std::vector<int> distances;
  std::vector<double> arrival_times;
  double velocity = 0.0;
  double intercept = 0.0;
  double r_squared = 0.0;
  bool monotone = true;  // arrival times nondecreasing in distance
};

inline constexpr double kDefaultThreshold = 0.1;

// First passage of norm > theta * bound, linearly interpolated; the velocity is
// the slope of distance against arrival time.
VelocityFit fit_velocity(const std::vector<LRProfile>& profiles, double theta = kDefaultThreshold);

struct ReferenceDecay {
  double u = 1.0;
  double F = 1.0;
};

// u_mu(r) = exp(-mu r / log(r)^2), frozen at its r = e^2 value below e^2.
double u_mu(double mu, double r);
ReferenceDecay reference_decay(double mu, double r0, double r, int dimension = 1);

double isometry_defect(const Evolution& ev, const CMat& A, const std::vector<double>& t_grid);
double group_law_defect(const Evolution& ev, const CMat& A, double t, double s);

}  // namespace gapstab
