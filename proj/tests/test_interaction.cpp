#include <doctest.h>

#include "gapstab/frustration_free.hpp"
#include "gapstab/linalg.hpp"
#include "helpers.hpp"

using namespace gapstab;

TEST_CASE("grouping by support") {
  InteractionSet v = make_interaction(3, {density_density(0, 1, 0.5), density_density(1, 0, 0.25),
                                          density_density(1, 2, 1.0)});
  CHECK(v.terms.size() == 2);
  CHECK(v.terms[0].support == SiteSet{0, 1});
  CHECK(v.terms[0].monomials.size() == 2);
  CHECK(v.max_support == 2);
}

TEST_CASE("odd monomials and bad sites are rejected") {
  MonomialTerm odd{1.0, {{0, FactorKind::create}}};
  try {
    make_interaction(2, {odd});
    FAIL("odd accepted");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::parity);
  }
  try {
    make_interaction(2, {density_density(0, 5, 1.0)});
    FAIL("site 5 accepted");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::site_out_of_range);
  }
}

TEST_CASE("exact transform matches the doubled-space oracle") {
  for (int n = 1; n <= 3; ++n) {
    std::vector<double> bonds(n - 1, 1.0);
    std::vector<double> onsite{0.4, -0.3, 0.2};
    onsite.resize(n);
    SingleParticleModel m = testing::chain_model(bonds, onsite);
    BdgData b = build_A(m);
    std::vector<MonomialTerm> mono;
    for (int x = 0; x + 1 < n; ++x) mono.push_back(density_density(x, x + 1, 0.7));
    // pair hopping and an on-site density as well
    if (n >= 2)
      mono.push_back({cd(0.2, 0.1), {{0, FactorKind::create}, {1, FactorKind::annihilate}}}),
      mono.push_back({cd(0.2, -0.1), {{1, FactorKind::create}, {0, FactorKind::annihilate}}});
    mono.push_back({0.3, {{0, FactorKind::create}, {0, FactorKind::annihilate}}});
    InteractionSet v = make_interaction(n, mono);
    TransformedInteraction tv = transform_to_eta(v, b, 0.0);
    CHECK(oracle_compare(v, tv, b) <= 1e-10);
    for (const auto& t : tv.terms)
      for (const auto& [k, z] : t.poly.terms()) CHECK(NormalOrderedPoly::even(k));
  }
}

TEST_CASE("annihilator in eta modes satisfies the CAR") {
  BdgData b = build_A(testing::chain_model({1.0, 0.5}, {0.3, 0.0, -0.2}));
  auto space = doubled_space(3);
  for (std::size_t x = 0; x < 3; ++x)
    for (std::size_t y = 0; y < 3; ++y) {
      const CMat ax = direct_annihilator(space, b, x).dense();
      const CMat ay = direct_annihilator(space, b, y).dense();
      const CMat want = CMat::Identity(64, 64) * (x == y ? 1.0 : 0.0);
      CHECK(max_abs(CMat(ax * ay.adjoint() + ay.adjoint() * ax - want)) <= 1e-12);
    }
}

TEST_CASE("transformed interaction decays on a gapped chain") {
  Lattice l = build_lattice({6}, {false});
  SingleParticleModel m = assemble_T(l, dimerized_chain(6, 1.0, 0.3), 0.0);
  TransformedInteraction tv = transform_to_eta(nearest_neighbour_density(l, 0.5), build_A(m));
  LocalBoundProfile p = local_bound_profile(tv, l);
  REQUIRE(p.fit.has_value());
  CHECK(p.fit->rate > 0.0);
}

TEST_CASE("assumption report") {
  Lattice l = build_lattice({6}, {false});
  InteractionSet v = nearest_neighbour_density(l, 0.5);
  AssumptionReport a = validate_assumptions(v, l, 2.0);
  CHECK(a.even_parity);
  CHECK(a.weighted_sum_finite);
  CHECK_THROWS_AS(validate_assumptions(v, l, 1.0), Error);
}
