#include <doctest.h>

#include <cmath>

#include "gapstab/linalg.hpp"
#include "gapstab/majorana.hpp"
#include "helpers.hpp"

using namespace gapstab;

TEST_CASE("two-site chain") {
  Lattice l = build_lattice({2}, {false});
  SingleParticleModel m = assemble_T(l, {{{std::vector<int>{1}, cd(-1.0)}}, {}}, 0.0);
  CHECK(std::abs(m.T(0, 1) - cd(-1.0)) < 1e-15);
  CHECK(std::abs(m.T(1, 0) - cd(-1.0)) < 1e-15);
  CHECK(m.eigenvalues(0) == doctest::Approx(-1.0));
  CHECK(m.eigenvalues(1) == doctest::Approx(1.0));
  CHECK(m.gap == doctest::Approx(1.0));
  CHECK_FALSE(m.gapless);
}

TEST_CASE("Fermi energy is subtracted on the diagonal") {
  SingleParticleModel m = assemble_T(build_lattice({1}, {false}), {}, -1.0);
  CHECK(m.T(0, 0).real() == doctest::Approx(1.0));
  CHECK(m.gap == doctest::Approx(1.0));
}

TEST_CASE("dimerized chain against a frozen eigensolve") {
  // numpy eigvalsh of the 6x6 matrix with bonds 1, 0.3, 1, 0.3, 1
  const double want[] = {-1.222497216032182, -1.0224972160321824, -0.8, 0.8, 1.0224972160321821, 1.2224972160321823};
  Lattice l = build_lattice({6}, {false});
  SingleParticleModel m = assemble_T(l, dimerized_chain(6, 1.0, 0.3), 0.0);
  for (int i = 0; i < 6; ++i) CHECK(m.eigenvalues(i) == doctest::Approx(want[i]).epsilon(1e-12));
  CHECK(m.gap == doctest::Approx(0.8).epsilon(1e-12));
  CHECK(gap_at_fermi(m) == doctest::Approx(m.gap));
}

TEST_CASE("gapless flag") {
  CMat T(2, 2);
  T << 0.0, 1.0, 1.0, 0.0;
  SingleParticleModel m = model_from_matrix(build_lattice({2}, {false}), T, 0.0);
  CHECK_FALSE(m.gapless);
  CMat Z = CMat::Zero(2, 2);
  Z(0, 0) = 1.0;
  CHECK(model_from_matrix(build_lattice({2}, {false}), Z, 0.0).gapless);
}

TEST_CASE("hopping errors") {
  Lattice l = build_lattice({3}, {false});
  HoppingSpec bad;
  bad.entries = {{0, 1, cd(1.0)}, {1, 0, cd(2.0)}};
  CHECK_THROWS_AS(assemble_T(l, bad, 0.0), Error);
  HoppingSpec nan;
  nan.bonds = {{std::vector<int>{1}, cd(std::nan(""))}};
  try {
    assemble_T(l, nan, 0.0);
    FAIL("NaN accepted");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::invalid_input);
  }
}

TEST_CASE("disorder is reproducible from its seed") {
  Lattice l = build_lattice({8}, {false});
  HoppingSpec h = dimerized_chain(8, 1.0, 0.5);
  SingleParticleModel a = assemble_T(l, h, 0.0, {0.3, 42});
  SingleParticleModel b = assemble_T(l, h, 0.0, {0.3, 42});
  SingleParticleModel c = assemble_T(l, h, 0.0, {0.3, 43});
  CHECK((a.T - b.T).norm() == 0.0);
  CHECK((a.T - c.T).norm() > 0.0);
  for (int i = 0; i < 8; ++i) CHECK(std::abs(a.T(i, i).real()) <= 0.3);
}

TEST_CASE("BdG pairing of the spectrum") {
  std::mt19937_64 rng(5);
  CMat T = testing::random_hermitian(5, rng);
  RVec t = eigh(T).values;
  CMat big = CMat::Zero(10, 10);
  big.topLeftCorner(5, 5) = T;
  big.bottomRightCorner(5, 5) = -T.transpose();
  RVec got = eigh(big).values;
  std::vector<double> want;
  for (int i = 0; i < 5; ++i) want.insert(want.end(), {t(i), -t(i)});
  std::sort(want.begin(), want.end());
  for (int i = 0; i < 10; ++i) CHECK(got(i) == doctest::Approx(want[i]).epsilon(1e-10));
}

TEST_CASE("decay fits") {
  Lattice l = build_lattice({6}, {false});
  SingleParticleModel m = assemble_T(l, dimerized_chain(6, 1.0, 0.3), 0.0);
  // nearest-neighbour T with an empty diagonal has one nonzero shell
  CHECK_THROWS_AS(fit_exponential_decay(m.T, l), Error);
  CMat shifted = m.T + 0.5 * CMat::Identity(6, 6);
  DecayFit t = fit_exponential_decay(shifted, l);
  CHECK(t.samples.size() == 2);
  CHECK(t.rate == doctest::Approx(std::log(0.5 / 1.0)).epsilon(1e-12));
  BdgData b = build_A(m);
  DecayFit s = fit_exponential_decay(b.sign_A, l, 2, 2);
  CHECK(s.rate > 0.0);
  CHECK(s.r_squared >= 0.9);
  try {
    fit_exponential_decay(CMat::Identity(6, 6), l);
    FAIL("identity fitted");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::insufficient_data);
  }
}
