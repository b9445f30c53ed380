#include <doctest.h>

#include <cmath>

#include "gapstab/assembly.hpp"
#include "gapstab/linalg.hpp"
#include "helpers.hpp"

using namespace gapstab;

TEST_CASE("gap bound formula") {
  // 1 - 0.1/sqrt(0.8)
  CHECK(gap_lower_bound(0.1, 1.0).value == doctest::Approx(0.8881966011250105).epsilon(1e-14));
  CHECK(gap_lower_bound(0.1, 1.0).valid);
  const double bstar = (std::sqrt(5.0) - 1.0) / 4.0;
  CHECK(gap_lower_bound(bstar, 2.0).value == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(gap_lower_bound(0.0, 3.0).value == doctest::Approx(3.0));
  CHECK_THROWS_AS(gap_lower_bound(0.5, 1.0), Error);
  CHECK_THROWS_AS(gap_lower_bound(-0.1, 1.0), Error);
}

TEST_CASE("third kernel") {
  // (e^{-1/3} - 1) / (i/2)
  const cd k = third_kind_kernel(0.5, 1.0);
  CHECK(std::abs(k - cd(0.0, 0.5669373788524215)) <= 1e-14);
  CHECK(third_kind_kernel(0.0, 1.0) == cd(0.0));
  CHECK(std::abs(third_kind_kernel(2.0, 1.0) - cd(0.0, 0.5)) <= 1e-15);
}

TEST_CASE("normal ordering removes the ground expectation") {
  std::mt19937_64 rng(3);
  const CMat A = testing::random_hermitian(8, rng);
  const CVec g = CVec::Unit(8, 0);
  const CMat N = normal_ordered(A, g);
  CHECK(std::abs(N(0, 0)) <= 1e-14);
  // only the constant moves
  CHECK(max_abs(CMat(A - N - A(0, 0) * CMat::Identity(8, 8))) <= 1e-14);
}

TEST_CASE("decomposition identity for small X") {
  auto space = FockSpace::numbered(4);
  for (std::size_t n = 1; n <= 3; ++n) CHECK(decomposition_identity(space, ModeSet::range(n)) <= 1e-13);
}

namespace {

struct Pipeline {
  DoubledHamiltonian dh;
  TransformedInteraction tv;
  CMat H0, V;
  std::vector<FlowState> path;
};

Pipeline pipeline(double s_max) {
  BdgData b = build_A(testing::chain_model({1.0}, {0.4, -0.2}));
  DoubledHamiltonian dh = build_doubled_h0(b);
  // a hopping-like term so the vacuum is not an eigenvector of V
  InteractionSet v = make_interaction(2, {density_density(0, 1, 2.0),
                                          {cd(0.5), {{0, FactorKind::create}, {1, FactorKind::annihilate}}},
                                          {cd(0.5), {{1, FactorKind::create}, {0, FactorKind::annihilate}}}});
  TransformedInteraction tv = transform_to_eta(v, b);
  CMat H0 = dh.H0.dense();
  CMat V = CMat(tv.total().to_matrix(dh.space->dimension()));
  auto path = integrate_flow(H0, V, uniform_grid(s_max, 100));
  return {std::move(dh), std::move(tv), H0, V, std::move(path)};
}

}  // namespace

TEST_CASE("effective interactions annihilate the vacuum and reconstruct H") {
  Pipeline p = pipeline(0.1);
  const double gamma = default_filter_gamma(p.path);
  AssembledInteractions all = assemble_all(p.path, p.dh, p.tv, gamma);
  CHECK(all.max_annihilation(1) <= 1e-8);
  CHECK(all.max_annihilation(2) <= 1e-8);
  CHECK(all.max_annihilation(3) <= 1e-8);
  CHECK(reconstruct_hamiltonian(p.path.back(), p.H0, p.V, all.terms) <= 1e-7);
  for (const auto& w : all.terms) CHECK(hermiticity_defect(w.op) <= 1e-10);

  const CMat W = all.sum();
  const double b = relative_bound_b(W, p.H0);
  CHECK(b >= 0.0);
  const RVec ev = eigh(CMat(p.H0 + W)).values;
  if (b < 0.5 && gap_lower_bound(b, p.dh.gap).valid)
    CHECK(ev(1) - ev(0) >= gap_lower_bound(b, p.dh.gap).value - 1e-9);

  std::vector<LocalW> locals;
  for (const auto& w : all.terms) locals.push_back({p.dh.space->all(), w.op});
  LemmaResult lem = g_norm_and_lemma(p.dh.space, locals, p.H0, p.dh.gap, lemma_trials(p.H0, 50, 1));
  CHECK(lem.worst_ratio <= 1.0 + 1e-9);
}

TEST_CASE("builders refuse a path with a large residual") {
  Pipeline p = pipeline(0.1);
  try {
    build_W1(p.path, p.V, "all", 0.5, -1.0);
    FAIL("negative budget accepted");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::refuse_to_build);
  }
}

TEST_CASE("relative bound needs an annihilating W") {
  auto space = FockSpace::numbered(2);
  const CMat H0 = number(space, 0).dense() + number(space, 1).dense();
  CHECK_THROWS_AS(relative_bound_b(CMat::Identity(4, 4), H0), Error);
}

TEST_CASE("gap curve of the dimerized chain") {
  Lattice l = build_lattice({6}, {false});
  SingleParticleModel m = assemble_T(l, dimerized_chain(6, 1.0, 0.3), 0.0);
  auto space = FockSpace::numbered(6);
  const SpMat H0 = physical_h0(m, space).matrix;
  const SpMat V = interaction_operator(nearest_neighbour_density(l, 0.5), space).matrix;
  std::vector<double> grid;
  for (int k = 0; k <= 20; ++k) grid.push_back(0.05 * k);
  GapCurve gc = gap_curve(H0, V, grid);
  CHECK(gc.s.size() == grid.size());
  CHECK(gc.s_dagger > 0.0);
  CHECK(gc.max_slope <= gc.lipschitz_bound);
}
