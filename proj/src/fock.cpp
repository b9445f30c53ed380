#include "gapstab/fock.hpp"

#include <cmath>

#include "gapstab/linalg.hpp"

namespace gapstab {

namespace {

using Triplet = Eigen::Triplet<cd>;

bool odd_state(Eigen::Index s) { return std::popcount(static_cast<std::uint64_t>(s)) & 1; }

// Jordan-Wigner sign of a ladder operator on mode m acting on state s.
double jw_sign(Eigen::Index s, std::size_t m) {
  std::uint64_t below = static_cast<std::uint64_t>(s) & ((1ULL << m) - 1);
  return (std::popcount(below) & 1) ? -1.0 : 1.0;
}

void same_space(const OperatorMatrix& a, const OperatorMatrix& b) {
  if (a.space != b.space && (a.space == nullptr || b.space == nullptr || a.space->labels() != b.space->labels()))
    throw Error(Errc::invalid_input, "operators live on different Fock spaces");
}

Parity sum_parity(Parity a, Parity b) { return a == b ? a : Parity::mixed; }

Parity product_parity(Parity a, Parity b) {
  if (a == Parity::mixed || b == Parity::mixed) return Parity::mixed;
  return a == b ? Parity::even : Parity::odd;
}

}  // namespace

ModeSet ModeSet::of(std::initializer_list<std::size_t> modes) {
  ModeSet s;
  for (auto m : modes) s.insert(m);
  return s;
}

std::vector<std::size_t> ModeSet::modes() const {
  std::vector<std::size_t> out;
  for (std::uint64_t b = bits_; b; b &= b - 1) out.push_back(static_cast<std::size_t>(std::countr_zero(b)));
  return out;
}

FockSpace::FockSpace(std::vector<std::string> labels) : labels_(std::move(labels)) {
  if (labels_.size() > kMaxFockModes)
    throw Error(Errc::dimension, "Fock space with " + std::to_string(labels_.size()) + " modes is too large");
}

std::shared_ptr<const FockSpace> FockSpace::numbered(std::size_t modes, const std::string& prefix) {
  std::vector<std::string> labels;
  for (std::size_t m = 0; m < modes; ++m) labels.push_back(prefix + std::to_string(m));
  return std::make_shared<const FockSpace>(std::move(labels));
}

std::size_t FockSpace::mode(const std::string& label) const {
  for (std::size_t m = 0; m < labels_.size(); ++m)
    if (labels_[m] == label) return m;
  throw Error(Errc::unknown_mode, "no mode labelled '" + label + "'");
}

void FockSpace::check_mode(std::size_t m) const {
  if (m >= labels_.size()) throw Error(Errc::unknown_mode, "mode " + std::to_string(m) + " not in Fock space");
}

const char* to_string(Parity p) {
  switch (p) {
    case Parity::even: return "even";
    case Parity::odd: return "odd";
    case Parity::mixed: return "mixed";
  }
  return "?";
}

OperatorMatrix OperatorMatrix::adjoint() const {
  return {space, SpMat(matrix.adjoint()), parity, declared_support};
}

OperatorMatrix OperatorMatrix::from_dense(FockSpacePtr space, const CMat& m, double drop) {
  if (m.rows() != space->dimension() || m.cols() != space->dimension())
    throw Error(Errc::dimension, "matrix does not match Fock space dimension");
  SpMat s = m.sparseView(1.0, drop);
  s.makeCompressed();
  return {space, s, detect_parity(s), space->all()};
}

OperatorMatrix operator+(const OperatorMatrix& a, const OperatorMatrix& b) {
  same_space(a, b);
  return {a.space, a.matrix + b.matrix, sum_parity(a.parity, b.parity), a.declared_support | b.declared_support};
}

OperatorMatrix operator-(const OperatorMatrix& a, const OperatorMatrix& b) {
  same_space(a, b);
  return {a.space, a.matrix - b.matrix, sum_parity(a.parity, b.parity), a.declared_support | b.declared_support};
}

OperatorMatrix operator*(const OperatorMatrix& a, const OperatorMatrix& b) {
  same_space(a, b);
  SpMat p = (a.matrix * b.matrix).pruned();
  return {a.space, p, product_parity(a.parity, b.parity), a.declared_support | b.declared_support};
}

OperatorMatrix operator*(cd z, const OperatorMatrix& a) {
  return {a.space, z * a.matrix, a.parity, a.declared_support};
}

OperatorMatrix identity(const FockSpacePtr& space) {
  SpMat m(space->dimension(), space->dimension());
  m.setIdentity();
  return {space, m, Parity::even, ModeSet{}};
}

OperatorMatrix zero(const FockSpacePtr& space) {
  return {space, SpMat(space->dimension(), space->dimension()), Parity::even, ModeSet{}};
}

OperatorMatrix ladder(const FockSpacePtr& space, std::size_t mode, FactorKind kind) {
  space->check_mode(mode);
  if (kind == FactorKind::majorana_c) return majorana(space, mode, Species::c);
  if (kind == FactorKind::majorana_d) return majorana(space, mode, Species::d);
  const Eigen::Index dim = space->dimension();
  const Eigen::Index bit = Eigen::Index(1) << mode;
  std::vector<Triplet> t;
  t.reserve(dim / 2);
  for (Eigen::Index s = 0; s < dim; ++s) {
    bool occupied = s & bit;
    if (kind == FactorKind::create && !occupied) t.emplace_back(s | bit, s, jw_sign(s, mode));
    if (kind == FactorKind::annihilate && occupied) t.emplace_back(s & ~bit, s, jw_sign(s, mode));
  }
  SpMat m(dim, dim);
  m.setFromTriplets(t.begin(), t.end());
  ModeSet sup;
  sup.insert(mode);
  return {space, m, Parity::odd, sup};
}

OperatorMatrix majorana(const FockSpacePtr& space, std::size_t mode, Species species) {
  OperatorMatrix up = ladder(space, mode, FactorKind::create);
  OperatorMatrix dn = ladder(space, mode, FactorKind::annihilate);
  const double k = 1.0 / std::sqrt(2.0);
  if (species == Species::c) return k * (up + dn);
  return (I * k) * (up - dn);
}

OperatorMatrix number(const FockSpacePtr& space, std::size_t mode) {
  space->check_mode(mode);
  const Eigen::Index dim = space->dimension();
  std::vector<Triplet> t;
  for (Eigen::Index s = 0; s < dim; ++s)
    if ((s >> mode) & 1) t.emplace_back(s, s, 1.0);
  SpMat m(dim, dim);
  m.setFromTriplets(t.begin(), t.end());
  ModeSet sup;
  sup.insert(mode);
  return {space, m, Parity::even, sup};
}

OperatorMatrix parity_operator(const FockSpacePtr& space) {
  const Eigen::Index dim = space->dimension();
  std::vector<Triplet> t;
  for (Eigen::Index s = 0; s < dim; ++s) t.emplace_back(s, s, odd_state(s) ? -1.0 : 1.0);
  SpMat m(dim, dim);
  m.setFromTriplets(t.begin(), t.end());
  return {space, m, Parity::even, space->all()};
}

OperatorMatrix assemble_polynomial(const FockSpacePtr& space, const std::vector<MonomialTerm>& terms) {
  OperatorMatrix total = zero(space);
  bool first = true;
  for (const MonomialTerm& term : terms) {
    OperatorMatrix prod = identity(space);
    for (const Factor& f : term.factors) prod = prod * ladder(space, f.mode, f.kind);
    OperatorMatrix scaled = term.coefficient * prod;
    if (first) {
      scaled.parity = prod.parity;
      total = {space, scaled.matrix, scaled.parity, scaled.declared_support};
      first = false;
    } else {
      total = total + scaled;
    }
  }
  total.matrix.prune(cd(0.0));
  return total;
}

Parity detect_parity(const SpMat& m, double tol) {
  bool even = false, odd = false;
  for (Eigen::Index k = 0; k < m.outerSize(); ++k)
    for (SpMat::InnerIterator it(m, k); it; ++it) {
      if (std::abs(it.value()) <= tol) continue;
      if (odd_state(it.row()) == odd_state(it.col()))
        even = true;
      else
        odd = true;
    }
  if (even && odd) return Parity::mixed;
  return odd ? Parity::odd : Parity::even;
}

double operator_norm(const OperatorMatrix& op) { return spectral_norm(op.matrix); }

double frobenius_norm(const OperatorMatrix& op) { return op.matrix.norm(); }

ModeSet support_of(const OperatorMatrix& op, double tol) {
  Parity p = detect_parity(op.matrix, tol);
  if (p == Parity::mixed) throw Error(Errc::unsupported, "support of a mixed-parity operator is undefined");
  ModeSet sup;
  for (std::size_t m = 0; m < op.space->modes(); ++m) {
    OperatorMatrix q = number(op.space, m);
    OperatorMatrix c = ladder(op.space, m, FactorKind::create) + ladder(op.space, m, FactorKind::annihilate);
    // Frobenius norm dominates the operator norm, so this test is conservative.
    SpMat cq = op.matrix * q.matrix - q.matrix * op.matrix;
    // odd operators anticommute with distant Majoranas
    SpMat cc = p == Parity::odd ? SpMat(op.matrix * c.matrix + c.matrix * op.matrix)
                                : SpMat(op.matrix * c.matrix - c.matrix * op.matrix);
    if (cq.norm() > tol || cc.norm() > tol) sup.insert(m);
  }
  return sup;
}

}  // namespace gapstab
