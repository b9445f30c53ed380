#pragma once

#include <bit>
#include <memory>
#include <optional>

#include "gapstab/majorana.hpp"

namespace gapstab {

// Set of Fock modes as a bitmask; mode k is bit k.
class ModeSet {
 public:
  ModeSet() = default;
  explicit ModeSet(std::uint64_t bits) : bits_(bits) {}
  static ModeSet of(std::initializer_list<std::size_t> modes);
  static ModeSet range(std::size_t n) { return ModeSet(n >= 64 ? ~0ULL : (1ULL << n) - 1); }

  std::uint64_t bits() const { return bits_; }
  bool empty() const { return bits_ == 0; }
  std::size_t size() const { return static_cast<std::size_t>(std::popcount(bits_)); }
  bool contains(std::size_t m) const { return (bits_ >> m) & 1ULL; }
  bool subset_of(ModeSet o) const { return (bits_ & ~o.bits_) == 0; }
  std::vector<std::size_t> modes() const;

  ModeSet operator|(ModeSet o) const { return ModeSet(bits_ | o.bits_); }
  ModeSet operator&(ModeSet o) const { return ModeSet(bits_ & o.bits_); }
  ModeSet minus(ModeSet o) const { return ModeSet(bits_ & ~o.bits_); }
  void insert(std::size_t m) { bits_ |= 1ULL << m; }
  bool operator==(const ModeSet&) const = default;
  auto operator<=>(const ModeSet&) const = default;

 private:
  std::uint64_t bits_ = 0;
};

class FockSpace {
 public:
  explicit FockSpace(std::vector<std::string> labels);
  static std::shared_ptr<const FockSpace> numbered(std::size_t modes, const std::string& prefix = "x");

  std::size_t modes() const { return labels_.size(); }
  Eigen::Index dimension() const { return Eigen::Index(1) << labels_.size(); }
  const std::string& label(std::size_t m) const { return labels_.at(m); }
  const std::vector<std::string>& labels() const { return labels_; }
  std::size_t mode(const std::string& label) const;
  void check_mode(std::size_t m) const;
  ModeSet all() const { return ModeSet::range(labels_.size()); }

 private:
  std::vector<std::string> labels_;
};

using FockSpacePtr = std::shared_ptr<const FockSpace>;

inline constexpr std::size_t kMaxFockModes = 16;

enum class Parity { even, odd, mixed };
const char* to_string(Parity p);

struct OperatorMatrix {
  FockSpacePtr space;
  SpMat matrix;
  Parity parity = Parity::even;
  ModeSet declared_support;

  Eigen::Index dimension() const { return matrix.rows(); }
  CMat dense() const { return CMat(matrix); }
  OperatorMatrix adjoint() const;

  static OperatorMatrix from_dense(FockSpacePtr space, const CMat& m, double drop = 0.0);
};

OperatorMatrix operator+(const OperatorMatrix& a, const OperatorMatrix& b);
OperatorMatrix operator-(const OperatorMatrix& a, const OperatorMatrix& b);
OperatorMatrix operator*(const OperatorMatrix& a, const OperatorMatrix& b);
OperatorMatrix operator*(cd z, const OperatorMatrix& a);

enum class FactorKind { create, annihilate, majorana_c, majorana_d };

struct Factor {
  std::size_t mode = 0;
  FactorKind kind = FactorKind::create;
};

struct MonomialTerm {
  cd coefficient{1.0, 0.0};
  std::vector<Factor> factors;
};

OperatorMatrix identity(const FockSpacePtr& space);
OperatorMatrix zero(const FockSpacePtr& space);
OperatorMatrix ladder(const FockSpacePtr& space, std::size_t mode, FactorKind kind);
OperatorMatrix majorana(const FockSpacePtr& space, std::size_t mode, Species species);
OperatorMatrix number(const FockSpacePtr& space, std::size_t mode);
OperatorMatrix parity_operator(const FockSpacePtr& space);
OperatorMatrix assemble_polynomial(const FockSpacePtr& space, const std::vector<MonomialTerm>& terms);

// Parity from the matrix pattern: even and odd blocks of the occupation basis.
Parity detect_parity(const SpMat& m, double tol = 1e-12);

double operator_norm(const OperatorMatrix& op);
double frobenius_norm(const OperatorMatrix& op);

// Modes m for which op fails to commute with q_m or with xi_m + xi_m^dagger.
ModeSet support_of(const OperatorMatrix& op, double tol = 1e-12);

// Occupation basis index of a configuration given as a mode set.
inline Eigen::Index basis_index(ModeSet occupied) { return static_cast<Eigen::Index>(occupied.bits()); }

}  // namespace gapstab
