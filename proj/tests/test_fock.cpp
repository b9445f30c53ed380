#include <doctest.h>

#include "gapstab/linalg.hpp"
#include "gapstab/normal_order.hpp"

using namespace gapstab;

namespace {

double anticomm(const OperatorMatrix& a, const OperatorMatrix& b) {
  return spectral_norm(SpMat(a.matrix * b.matrix + b.matrix * a.matrix));
}

}  // namespace

TEST_CASE("canonical anticommutation on six modes") {
  auto space = FockSpace::numbered(6);
  const OperatorMatrix one = identity(space);
  for (std::size_t i = 0; i < 6; ++i)
    for (std::size_t j = 0; j < 6; ++j) {
      const auto ai = ladder(space, i, FactorKind::annihilate);
      const auto aj = ladder(space, j, FactorKind::annihilate);
      const auto adj = ladder(space, j, FactorKind::create);
      const double want = i == j ? 1.0 : 0.0;
      CHECK(spectral_norm(SpMat(ai.matrix * adj.matrix + adj.matrix * ai.matrix - want * one.matrix)) <= 1e-13);
      CHECK(anticomm(ai, aj) <= 1e-13);
      const auto ci = majorana(space, i, Species::c), dj = majorana(space, j, Species::d);
      CHECK(anticomm(ci, dj) <= 1e-13);
      const auto cj = majorana(space, j, Species::c);
      CHECK(spectral_norm(SpMat(ci.matrix * cj.matrix + cj.matrix * ci.matrix - want * one.matrix)) <= 1e-13);
    }
  for (std::size_t i = 0; i < 6; ++i) {
    const auto c = majorana(space, i, Species::c);
    CHECK(spectral_norm(SpMat(c.matrix * c.matrix - 0.5 * one.matrix)) <= 1e-13);
  }
}

TEST_CASE("labels and guards") {
  FockSpace f({"a", "b"});
  CHECK(f.mode("b") == 1);
  CHECK(f.dimension() == 4);
  CHECK_THROWS_AS(f.mode("c"), Error);
  CHECK_THROWS_AS(FockSpace::numbered(kMaxFockModes + 1), Error);
}

TEST_CASE("parity and support") {
  auto space = FockSpace::numbered(4);
  const auto a0 = ladder(space, 0, FactorKind::annihilate);
  const auto a2d = ladder(space, 2, FactorKind::create);
  CHECK(detect_parity(a0.matrix) == Parity::odd);
  const auto hop = a2d * a0;
  CHECK(detect_parity(hop.matrix) == Parity::even);
  CHECK(support_of(hop) == ModeSet::of({0, 2}));
  CHECK(support_of(number(space, 3)) == ModeSet::of({3}));
  CHECK(detect_parity(SpMat((a0 + identity(space)).matrix)) == Parity::mixed);
  // parity operator commutes with even operators
  const auto p = parity_operator(space);
  CHECK(spectral_norm(SpMat(p.matrix * hop.matrix - hop.matrix * p.matrix)) == 0.0);
}

TEST_CASE("normal ordering reproduces the matrix product") {
  auto space = FockSpace::numbered(3);
  // a_0 a_1^dagger = -a_1^dagger a_0
  NormalOrderedPoly p = NormalOrderedPoly::scalar(1.0).times(Ladder{0, false}).times(Ladder{1, true});
  CHECK(p.size() == 1);
  const SpMat direct = ladder(space, 0, FactorKind::annihilate).matrix * ladder(space, 1, FactorKind::create).matrix;
  CHECK(spectral_norm(SpMat(p.to_matrix(8) - direct)) <= 1e-15);
  // a_0 a_0^dagger = 1 - n_0
  NormalOrderedPoly q = NormalOrderedPoly::scalar(1.0).times(Ladder{0, false}).times(Ladder{0, true});
  CHECK(q.size() == 2);
  const SpMat want = identity(space).matrix - number(space, 0).matrix;
  CHECK(spectral_norm(SpMat(q.to_matrix(8) - want)) <= 1e-15);
  CHECK(NormalOrderedPoly::even({0b011, 0b000}));
  CHECK_FALSE(NormalOrderedPoly::even({0b001, 0b000}));
}

TEST_CASE("prune reports the dropped mass") {
  NormalOrderedPoly p = NormalOrderedPoly::scalar(1.0);
  p.add_term({1, 1}, 1e-14);
  p.add_term({2, 2}, 0.5);
  CHECK(p.prune(1e-12) == doctest::Approx(1e-14));
  CHECK(p.size() == 2);
}
