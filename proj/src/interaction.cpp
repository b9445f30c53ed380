#include "gapstab/interaction.hpp"

#include <cmath>
#include <limits>
#include <map>
#include <numeric>

#include "gapstab/linalg.hpp"

namespace gapstab {

namespace {

bool factor_is_odd(const MonomialTerm& m) { return m.factors.size() % 2 == 1; }

LinearForm physical_factor(const BdgData& bdg, const Factor& f) {
  LinearForm a = annihilator_in_eta(bdg, f.mode);
  const double k = 1.0 / std::sqrt(2.0);
  switch (f.kind) {
    case FactorKind::annihilate: return a;
    case FactorKind::create: return a.adjoint();
    case FactorKind::majorana_c: {
      LinearForm out;
      for (auto [l, z] : a.adjoint().terms) out.add(l, k * z);
      for (auto [l, z] : a.terms) out.add(l, k * z);
      return out;
    }
    case FactorKind::majorana_d: {
      LinearForm out;
      for (auto [l, z] : a.adjoint().terms) out.add(l, I * k * z);
      for (auto [l, z] : a.terms) out.add(l, -I * k * z);
      return out;
    }
  }
  return a;
}

}  // namespace

FockSpacePtr doubled_space(std::size_t sites) {
  std::vector<std::string> labels;
  for (std::size_t x = 0; x < sites; ++x) {
    labels.push_back(std::to_string(x) + ",c");
    labels.push_back(std::to_string(x) + ",d");
  }
  return std::make_shared<const FockSpace>(std::move(labels));
}

InteractionSet make_interaction(std::size_t sites, const std::vector<MonomialTerm>& monomials) {
  std::map<SiteSet, std::vector<MonomialTerm>> grouped;
  for (const MonomialTerm& m : monomials) {
    if (factor_is_odd(m)) throw Error(Errc::parity, "interaction monomial of odd degree");
    if (!std::isfinite(m.coefficient.real()) || !std::isfinite(m.coefficient.imag()))
      throw Error(Errc::invalid_input, "non-finite interaction coefficient");
    std::vector<std::size_t> s;
    for (const Factor& f : m.factors) {
      if (f.mode >= sites) throw Error(Errc::site_out_of_range, "interaction factor outside lattice");
      s.push_back(f.mode);
    }
    grouped[make_site_set(s)].push_back(m);
  }
  InteractionSet v;
  v.sites = sites;
  for (auto& [support, ms] : grouped) {
    v.max_support = std::max(v.max_support, support.size());
    v.terms.push_back({support, std::move(ms)});
  }
  return v;
}

MonomialTerm density_density(std::size_t x, std::size_t y, double u) {
  return {cd(u, 0.0),
          {{x, FactorKind::create}, {x, FactorKind::annihilate}, {y, FactorKind::create}, {y, FactorKind::annihilate}}};
}

InteractionSet nearest_neighbour_density(const Lattice& lattice, double u) {
  std::vector<MonomialTerm> ms;
  for (std::size_t x = 0; x < lattice.size(); ++x)
    for (std::size_t y = x + 1; y < lattice.size(); ++y)
      if (lattice.distance(x, y) == 1) ms.push_back(density_density(x, y, u));
  return make_interaction(lattice.size(), ms);
}

OperatorMatrix local_operator(const InteractionTerm& term) {
  auto space = FockSpace::numbered(term.support.size(), "x");
  std::vector<MonomialTerm> local;
  for (const MonomialTerm& m : term.monomials) {
    MonomialTerm r{m.coefficient, {}};
    for (const Factor& f : m.factors) {
      auto it = std::lower_bound(term.support.begin(), term.support.end(), f.mode);
      r.factors.push_back({static_cast<std::size_t>(it - term.support.begin()), f.kind});
    }
    local.push_back(r);
  }
  return assemble_polynomial(space, local);
}

OperatorMatrix interaction_operator(const InteractionSet& v, const FockSpacePtr& space) {
  if (space->modes() != v.sites) throw Error(Errc::dimension, "Fock space does not match the lattice");
  std::vector<MonomialTerm> all;
  for (const auto& t : v.terms) all.insert(all.end(), t.monomials.begin(), t.monomials.end());
  return assemble_polynomial(space, all);
}

AssumptionReport validate_assumptions(const InteractionSet& v, const Lattice& lattice, double k_h) {
  if (!(k_h > 1.0)) throw Error(Errc::invalid_input, "K_h must exceed 1");
  if (v.sites != lattice.size()) throw Error(Errc::dimension, "interaction and lattice disagree on size");
  AssumptionReport r;
  r.k_h = k_h;
  const auto n = static_cast<Eigen::Index>(lattice.size());
  r.pair_sums = RMat::Zero(n, n);
  r.weighted_pair_sums = RMat::Zero(n, n);
  for (const InteractionTerm& t : v.terms) {
    for (const MonomialTerm& m : t.monomials)
      if (factor_is_odd(m)) throw Error(Errc::parity, "interaction monomial of odd degree");
    double norm = t.support.empty() ? std::abs(std::accumulate(
                                          t.monomials.begin(), t.monomials.end(), cd(0.0),
                                          [](cd acc, const MonomialTerm& m) { return acc + m.coefficient; }))
                                    : operator_norm(local_operator(t));
    r.term_norms.push_back(norm);
    r.n_max = std::max(r.n_max, t.support.size());
    double weight = std::pow(k_h, static_cast<double>(t.support.size())) * norm;
    if (!std::isfinite(weight)) r.weighted_sum_finite = false;
    for (std::size_t x : t.support)
      for (std::size_t y : t.support) {
        r.pair_sums(x, y) += norm;
        r.weighted_pair_sums(x, y) += weight;
      }
  }
  r.max_weighted_sum = n ? r.weighted_pair_sums.maxCoeff() : 0.0;
  try {
    r.fit = fit_exponential_decay(r.pair_sums.cast<cd>(), lattice);
    r.weighted_fit = fit_exponential_decay(r.weighted_pair_sums.cast<cd>(), lattice);
  } catch (const Error& e) {
    if (e.code() != Errc::insufficient_data) throw;
  }
  return r;
}

NormalOrderedPoly TransformedInteraction::total() const {
  NormalOrderedPoly p;
  for (const auto& t : terms) p += t.poly;
  return p;
}

LinearForm annihilator_in_eta(const BdgData& bdg, std::size_t x) {
  if (x >= bdg.sites) throw Error(Errc::site_out_of_range, "site outside the model");
  if (bdg.gap < kGaplessTol) throw Error(Errc::gapless, "s(A) undefined for a gapless model");
  const double r = 1.0 / std::sqrt(2.0);
  const CMat M = m_coefficients(bdg);
  LinearForm f;
  // zeta part: (gt1^c + i gt1^d) / 2 with gt1_k = (eta_k^dag + eta_k)/sqrt 2
  const std::size_t kc = majorana_index(x, Species::c), kd = majorana_index(x, Species::d);
  f.add({kc, true}, 0.5 * r).add({kc, false}, 0.5 * r);
  f.add({kd, true}, 0.5 * r * I).add({kd, false}, 0.5 * r * I);
  // omega part: sum M^nu_{xy} gt2^nu_y / sqrt 2 with gt2_k = i(eta_k^dag - eta_k)/sqrt 2
  for (Eigen::Index col = 0; col < M.cols(); ++col) {
    cd m = M(static_cast<Eigen::Index>(x), col);
    if (m == cd(0.0)) continue;
    const auto k = static_cast<std::size_t>(col);
    f.add({k, true}, 0.5 * I * m).add({k, false}, -0.5 * I * m);
  }
  return f;
}

TransformedInteraction transform_to_eta(const InteractionSet& v, const BdgData& bdg, double epsilon) {
  if (bdg.gap < kGaplessTol) throw Error(Errc::gapless, "cannot transform with a gapless model");
  if (v.sites != bdg.sites) throw Error(Errc::dimension, "interaction and model disagree on size");
  if (2 * bdg.sites > 64) throw Error(Errc::dimension, "too many doubled modes for the symbolic engine");
  TransformedInteraction tv;
  tv.sites = bdg.sites;
  tv.epsilon = epsilon;

  std::vector<LinearForm> annihilators, creators;
  for (std::size_t x = 0; x < bdg.sites; ++x) {
    annihilators.push_back(annihilator_in_eta(bdg, x));
    creators.push_back(annihilators.back().adjoint());
  }

  std::map<std::uint64_t, std::pair<NormalOrderedPoly, std::vector<std::size_t>>> groups;
  for (std::size_t ti = 0; ti < v.terms.size(); ++ti) {
    NormalOrderedPoly sum;
    for (const MonomialTerm& m : v.terms[ti].monomials) {
      if (m.coefficient == cd(0.0)) continue;
      NormalOrderedPoly p = NormalOrderedPoly::scalar(m.coefficient);
      for (const Factor& f : m.factors) {
        const LinearForm form = f.kind == FactorKind::annihilate ? annihilators[f.mode]
                                : f.kind == FactorKind::create   ? creators[f.mode]
                                                                 : physical_factor(bdg, f);
        p = p.times(form);
      }
      sum += p;
    }
    for (const auto& [key, z] : sum.terms()) {
      auto& g = groups[NormalOrderedPoly::support(key).bits()];
      g.first.add_term(key, z);
      if (g.second.empty() || g.second.back() != ti) g.second.push_back(ti);
    }
  }

  for (auto& [bits, g] : groups) {
    tv.dropped_mass += g.first.prune(epsilon);
    if (g.first.empty()) continue;
    tv.terms.push_back({ModeSet(bits), std::move(g.first), std::move(g.second)});
  }
  return tv;
}

OperatorMatrix direct_annihilator(const FockSpacePtr& doubled, const BdgData& bdg, std::size_t x) {
  const std::size_t n = 2 * bdg.sites;
  const double r = 1.0 / std::sqrt(2.0);
  std::vector<OperatorMatrix> gt1, gt2;
  for (std::size_t k = 0; k < n; ++k) {
    OperatorMatrix up = ladder(doubled, k, FactorKind::create), dn = ladder(doubled, k, FactorKind::annihilate);
    gt1.push_back(r * (up + dn));
    gt2.push_back((I * r) * (up - dn));
  }
  auto gamma1 = [&](std::size_t k) {
    OperatorMatrix g = gt1[k];
    for (std::size_t l = 0; l < n; ++l) {
      cd s = bdg.sign_A(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(l));
      if (s != cd(0.0)) g = g + (I * s) * gt2[l];
    }
    return r * g;
  };
  return r * (gamma1(majorana_index(x, Species::c)) + I * gamma1(majorana_index(x, Species::d)));
}

OperatorMatrix direct_doubled_operator(const InteractionSet& v, const BdgData& bdg, const FockSpacePtr& doubled) {
  if (doubled->modes() != 2 * bdg.sites) throw Error(Errc::dimension, "doubled space does not match the model");
  std::vector<OperatorMatrix> a, ad;
  for (std::size_t x = 0; x < bdg.sites; ++x) {
    a.push_back(direct_annihilator(doubled, bdg, x));
    ad.push_back(a.back().adjoint());
  }
  const double r = 1.0 / std::sqrt(2.0);
  OperatorMatrix total = zero(doubled);
  for (const auto& t : v.terms)
    for (const MonomialTerm& m : t.monomials) {
      OperatorMatrix p = identity(doubled);
      for (const Factor& f : m.factors) {
        switch (f.kind) {
          case FactorKind::annihilate: p = p * a[f.mode]; break;
          case FactorKind::create: p = p * ad[f.mode]; break;
          case FactorKind::majorana_c: p = p * (r * (ad[f.mode] + a[f.mode])); break;
          case FactorKind::majorana_d: p = p * ((I * r) * (ad[f.mode] - a[f.mode])); break;
        }
      }
      total = total + m.coefficient * p;
    }
  return total;
}

double oracle_compare(const InteractionSet& v, const TransformedInteraction& tv, const BdgData& bdg) {
  auto doubled = doubled_space(bdg.sites);
  OperatorMatrix direct = direct_doubled_operator(v, bdg, doubled);
  SpMat diff = direct.matrix - tv.total().to_matrix(doubled->dimension());
  return spectral_norm(diff);
}

SiteSet sites_of(ModeSet modes) {
  std::vector<std::size_t> s;
  for (std::size_t m : modes.modes()) s.push_back(m / 2);
  return make_site_set(s);
}

ModeSet modes_of(const SiteSet& sites) {
  ModeSet m;
  for (std::size_t x : sites) {
    m.insert(2 * x);
    m.insert(2 * x + 1);
  }
  return m;
}

LocalBoundProfile local_bound_profile(const TransformedInteraction& tv, const Lattice& lattice) {
  if (tv.sites != lattice.size()) throw Error(Errc::dimension, "transformed interaction and lattice disagree");
  const auto n = static_cast<Eigen::Index>(lattice.size());
  LocalBoundProfile p;
  p.pair_sums = RMat::Zero(n, n);
  p.site_sums = RVec::Zero(n);
  for (const TransformedTerm& t : tv.terms) {
    // evaluate on the Fock space of the term's own modes, order preserved
    const std::vector<std::size_t> modes = t.support.modes();
    auto compress = [&](std::uint64_t mask) {
      std::uint64_t out = 0;
      for (std::size_t i = 0; i < modes.size(); ++i)
        if ((mask >> modes[i]) & 1ULL) out |= 1ULL << i;
      return out;
    };
    NormalOrderedPoly local;
    for (const auto& [key, z] : t.poly.terms()) local.add_term({compress(key.first), compress(key.second)}, z);
    const double norm = spectral_norm(local.to_matrix(Eigen::Index(1) << modes.size()));
    p.term_norms.push_back(norm);
    p.coefficient_bounds.push_back(t.poly.coefficient_mass());
    const SiteSet s = sites_of(t.support);
    const double w = std::pow(static_cast<double>(s.size()), 3) * norm;
    for (std::size_t x : s) {
      p.site_sums(x) += w;
      for (std::size_t y : s) p.pair_sums(x, y) += w;
    }
  }
  try {
    p.fit = fit_exponential_decay(p.pair_sums.cast<cd>(), lattice);
  } catch (const Error& e) {
    if (e.code() != Errc::insufficient_data) throw;
  }
  return p;
}

}  // namespace gapstab
