#include "gapstab/normal_order.hpp"

namespace gapstab {

namespace {

int count_above(std::uint64_t mask, std::size_t k) {
  return std::popcount(mask & ~((2ULL << k) - 1));
}

}  // namespace

LinearForm LinearForm::adjoint() const {
  LinearForm out;
  for (auto [l, z] : terms) out.terms.push_back({Ladder{l.mode, !l.creation}, std::conj(z)});
  return out;
}

LinearForm& LinearForm::add(Ladder l, cd z) {
  for (auto& [m, c] : terms)
    if (m.mode == l.mode && m.creation == l.creation) {
      c += z;
      return *this;
    }
  terms.push_back({l, z});
  return *this;
}

NormalOrderedPoly NormalOrderedPoly::scalar(cd z) {
  NormalOrderedPoly p;
  if (z != cd(0.0)) p.terms_[{0, 0}] = z;
  return p;
}

void NormalOrderedPoly::accumulate(const Key& k, cd z) {
  auto [it, inserted] = terms_.try_emplace(k, z);
  if (!inserted) it->second += z;
}

NormalOrderedPoly& NormalOrderedPoly::operator+=(const NormalOrderedPoly& other) {
  for (const auto& [k, z] : other.terms_) accumulate(k, z);
  return *this;
}

NormalOrderedPoly NormalOrderedPoly::scaled(cd z) const {
  NormalOrderedPoly p;
  for (const auto& [k, c] : terms_) p.terms_[k] = c * z;
  return p;
}

NormalOrderedPoly NormalOrderedPoly::times(Ladder l) const {
  NormalOrderedPoly out;
  const std::uint64_t bit = 1ULL << l.mode;
  for (const auto& [key, z] : terms_) {
    const auto [cre, ann] = key;
    if (!l.creation) {
      // C A eta_k: move eta_k left past the annihilators above k.
      if (ann & bit) continue;
      double sign = (count_above(ann, l.mode) & 1) ? -1.0 : 1.0;
      out.accumulate({cre, ann | bit}, sign * z);
      continue;
    }
    // C A eta_k^dagger = (-1)^{|A|} C eta_k^dagger A + contraction.
    const int na = std::popcount(ann);
    if (!(cre & bit)) {
      double sign = ((na + count_above(cre, l.mode)) & 1) ? -1.0 : 1.0;
      out.accumulate({cre | bit, ann}, sign * z);
    }
    if (ann & bit) {
      // eta_k eta_k^dagger = 1 - eta_k^dagger eta_k; the second piece is the
      // pass-through term above, so only the contraction remains here.
      double sign = (count_above(ann, l.mode) & 1) ? -1.0 : 1.0;
      out.accumulate({cre, ann & ~bit}, sign * z);
    }
  }
  return out;
}

NormalOrderedPoly NormalOrderedPoly::times(const LinearForm& f) const {
  NormalOrderedPoly out;
  for (auto [l, z] : f.terms) {
    if (z == cd(0.0)) continue;
    out += times(l).scaled(z);
  }
  return out;
}

double NormalOrderedPoly::prune(double eps) {
  double dropped = 0.0;
  for (auto it = terms_.begin(); it != terms_.end();) {
    double a = std::abs(it->second);
    if (a == 0.0 || a < eps) {
      dropped += a;
      it = terms_.erase(it);
    } else {
      ++it;
    }
  }
  return dropped;
}

double NormalOrderedPoly::coefficient_mass() const {
  double m = 0.0;
  for (const auto& [k, z] : terms_) m += std::abs(z);
  return m;
}

NormalOrderedPoly NormalOrderedPoly::restricted_to(ModeSet support) const {
  NormalOrderedPoly p;
  for (const auto& [k, z] : terms_)
    if (NormalOrderedPoly::support(k) == support) p.terms_[k] = z;
  return p;
}

bool NormalOrderedPoly::even(const Key& k) { return ((std::popcount(k.first) + std::popcount(k.second)) & 1) == 0; }

SpMat NormalOrderedPoly::to_matrix(Eigen::Index dimension) const {
  std::vector<Eigen::Triplet<cd>> trip;
  for (const auto& [key, z] : terms_) {
    const auto [cre, ann] = key;
    if (static_cast<Eigen::Index>((cre | ann)) >= dimension && (cre | ann) != 0)
      throw Error(Errc::dimension, "monomial outside the Fock space");
    for (Eigen::Index s0 = 0; s0 < dimension; ++s0) {
      std::uint64_t s = static_cast<std::uint64_t>(s0);
      if ((s & ann) != ann) continue;
      double sign = 1.0;
      // annihilators act right to left: highest mode first
      for (std::uint64_t b = ann; b;) {
        int k = 63 - std::countl_zero(b);
        if (std::popcount(s & ((1ULL << k) - 1)) & 1) sign = -sign;
        s &= ~(1ULL << k);
        b &= ~(1ULL << k);
      }
      if (s & cre) continue;
      for (std::uint64_t b = cre; b;) {
        int k = 63 - std::countl_zero(b);
        if (std::popcount(s & ((1ULL << k) - 1)) & 1) sign = -sign;
        s |= 1ULL << k;
        b &= ~(1ULL << k);
      }
      trip.emplace_back(static_cast<Eigen::Index>(s), s0, sign * z);
    }
  }
  SpMat m(dimension, dimension);
  m.setFromTriplets(trip.begin(), trip.end());
  m.prune(cd(0.0));
  return m;
}

OperatorMatrix NormalOrderedPoly::to_operator(const FockSpacePtr& space) const {
  OperatorMatrix op{space, to_matrix(space->dimension()), Parity::even, ModeSet{}};
  bool any_even = false, any_odd = false;
  for (const auto& [k, z] : terms_) {
    op.declared_support = op.declared_support | support(k);
    (even(k) ? any_even : any_odd) = true;
  }
  op.parity = any_even && any_odd ? Parity::mixed : (any_odd ? Parity::odd : Parity::even);
  return op;
}

}  // namespace gapstab
