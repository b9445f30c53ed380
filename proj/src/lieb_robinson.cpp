#include "gapstab/lieb_robinson.hpp"

#include <cmath>
#include <numbers>

#include "gapstab/interaction.hpp"

namespace gapstab {

Evolution::Evolution(const CMat& H) {
  if (hermiticity_defect(H) > 1e-10 * std::max(1.0, max_abs(H)))
    throw Error(Errc::hermiticity, "generator of the evolution is not Hermitian");
  eig_ = eigh(H);
}

CMat Evolution::evolve(const CMat& A, double t) const {
  const CMat& V = eig_.vectors;
  CMat B = V.adjoint() * A * V;
  const RVec& E = eig_.values;
  for (Eigen::Index j = 0; j < B.cols(); ++j)
    for (Eigen::Index i = 0; i < B.rows(); ++i) B(i, j) *= std::exp(I * ((E(i) - E(j)) * t));
  return V * B * V.adjoint();
}

int support_distance(const OperatorMatrix& A, const OperatorMatrix& B, const Lattice& lattice) {
  const ModeSet sa = support_of(A, 1e-10), sb = support_of(B, 1e-10);
  auto sites = [&](ModeSet m) {
    if (A.space->modes() == 2 * lattice.size()) return sites_of(m);
    if (A.space->modes() != lattice.size()) throw Error(Errc::dimension, "Fock space does not match the lattice");
    return make_site_set(m.modes());
  };
  const SiteSet xa = sites(sa), xb = sites(sb);
  if (xa.empty() || xb.empty()) return 0;
  int d = std::numeric_limits<int>::max();
  for (std::size_t y : xb) d = std::min(d, lattice.distance(xa, y));
  return d;
}

LRProfile commutator_profile(const Evolution& ev, const OperatorMatrix& A, const OperatorMatrix& B,
                             const std::vector<double>& t_grid, const Lattice& lattice) {
  LRProfile p;
  p.distance = support_distance(A, B, lattice);
  p.overlapping = (support_of(A, 1e-10) & support_of(B, 1e-10)).bits() != 0;
  const CMat a = A.dense(), b = B.dense();
  p.bound = 2.0 * spectral_norm(a) * spectral_norm(b);
  for (double t : t_grid) p.samples.push_back({t, spectral_norm(commutator(ev.evolve(a, t), b))});
  return p;
}

VelocityFit fit_velocity(const std::vector<LRProfile>& profiles, double theta) {
  if (profiles.size() < 3) throw Error(Errc::invalid_input, "velocity fit needs at least three distances");
  VelocityFit fit;
  fit.theta = theta;
  for (const LRProfile& p : profiles) {
    const double level = theta * p.bound;
    for (std::size_t k = 0; k < p.samples.size(); ++k) {
      if (!(p.samples[k].norm > level)) continue;
      double t = p.samples[k].t;
      if (k > 0) {
        const LRSample& a = p.samples[k - 1];
        const LRSample& b = p.samples[k];
        t = a.t + (level - a.norm) / (b.norm - a.norm) * (b.t - a.t);
      }
      fit.distances.push_back(p.distance);
      fit.arrival_times.push_back(t);
      break;
    }
  }
  if (fit.distances.size() < 2)
    throw Error(Errc::insufficient_signal, "fewer than two profiles cross the threshold");

  std::vector<std::size_t> order(fit.distances.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](auto a, auto b) { return fit.distances[a] < fit.distances[b]; });
  for (std::size_t i = 1; i < order.size(); ++i)
    if (fit.arrival_times[order[i]] < fit.arrival_times[order[i - 1]] - 1e-12) fit.monotone = false;

  // r = v t* + c
  const double n = static_cast<double>(fit.distances.size());
  double st = 0, sr = 0, stt = 0, str = 0, srr = 0;
  for (std::size_t i = 0; i < fit.distances.size(); ++i) {
    const double t = fit.arrival_times[i], r = fit.distances[i];
    st += t, sr += r, stt += t * t, str += t * r, srr += r * r;
  }
  const double vt = stt - st * st / n, vr = srr - sr * sr / n, cov = str - st * sr / n;
  if (vt <= 0.0) throw Error(Errc::insufficient_signal, "arrival times do not vary");
  fit.velocity = cov / vt;
  fit.intercept = (sr - fit.velocity * st) / n;
  fit.r_squared = vr > 0.0 ? cov * cov / (vt * vr) : 1.0;
  return fit;
}

double u_mu(double mu, double r) {
  const double e2 = std::exp(2.0);
  const double x = std::max(r, e2);
  const double l = std::log(x);
  return std::exp(-mu * x / (l * l));
}

ReferenceDecay reference_decay(double mu, double r0, double r, int dimension) {
  if (r < 0.0 || r0 <= 0.0 || mu < 0.0) throw Error(Errc::domain, "reference decay needs r >= 0, r0 > 0, mu >= 0");
  ReferenceDecay out;
  const double x = r / r0;
  out.u = u_mu(mu, x);
  out.F = out.u / std::pow(1.0 + x, dimension + 1);
  return out;
}

double isometry_defect(const Evolution& ev, const CMat& A, const std::vector<double>& t_grid) {
  const double n0 = spectral_norm(A);
  double worst = 0.0;
  for (double t : t_grid) worst = std::max(worst, std::abs(spectral_norm(ev.evolve(A, t)) - n0));
  return worst;
}

double group_law_defect(const Evolution& ev, const CMat& A, double t, double s) {
  return spectral_norm(CMat(ev.evolve(A, t + s) - ev.evolve(ev.evolve(A, s), t)));
}

}  // namespace gapstab
