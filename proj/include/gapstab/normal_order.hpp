#pragma once

#include <map>

#include "gapstab/fock.hpp"

namespace gapstab {

struct Ladder {
  std::size_t mode = 0;
  bool creation = false;
};

// Linear combination of single ladder operators.
struct LinearForm {
  std::vector<std::pair<Ladder, cd>> terms;

  LinearForm adjoint() const;
  LinearForm& add(Ladder l, cd z);
};

// Polynomial in ladder operators kept in normal order: creators in ascending
// mode order, then annihilators in ascending mode order. A monomial is keyed
// by (creation mask, annihilation mask).
class NormalOrderedPoly {
 public:
  using Key = std::pair<std::uint64_t, std::uint64_t>;

  static NormalOrderedPoly scalar(cd z);

  const std::map<Key, cd>& terms() const { return terms_; }
  bool empty() const { return terms_.empty(); }
  std::size_t size() const { return terms_.size(); }

  NormalOrderedPoly& operator+=(const NormalOrderedPoly& other);
  void add_term(const Key& k, cd z) { accumulate(k, z); }
  NormalOrderedPoly scaled(cd z) const;

  // this * l, re-normal-ordered with the canonical anticommutation relations.
  NormalOrderedPoly times(Ladder l) const;
  NormalOrderedPoly times(const LinearForm& f) const;

  // Removes monomials with |coefficient| < eps (and exact zeros); returns the
  // removed coefficient mass.
  double prune(double eps);

  double coefficient_mass() const;
  NormalOrderedPoly restricted_to(ModeSet support) const;

  // Matrix on the given Fock space, built from the action on occupation states.
  SpMat to_matrix(Eigen::Index dimension) const;
  OperatorMatrix to_operator(const FockSpacePtr& space) const;

  static ModeSet support(const Key& k) { return ModeSet(k.first | k.second); }
  static bool even(const Key& k);

 private:
  void accumulate(const Key& k, cd z);
  std::map<Key, cd> terms_;
};

}  // namespace gapstab
