#include <doctest.h>

#include <cmath>
#include <random>

#include "ncprob/ergodics.hpp"
#include "ncprob/errors.hpp"

using namespace ncprob;

TEST_CASE("series_scales_must_increase") {
  ConvergenceSeries s("q", 0.5);
  s.append(2, 1.0);
  CHECK_THROWS_AS(s.append(2, 0.5), InvalidParameter);
  s.append(4, 0.5);
  CHECK(s.first_deviation() == 1.0);
  CHECK(s.last_deviation() == 0.5);
  CHECK(s.non_increasing_from(2));
}

TEST_CASE("series_csv_layout") {
  ConvergenceSeries s("q", 0.3, 7);
  s.append(4, 0.25);
  CHECK(s.to_csv() == "scale,deviation,engine,q_or_lambda,seed\n4,0.25,q,0.3,7\n");
}

TEST_CASE("cesaro_average_of_the_unit_is_the_identity") {
  const QFockBasis basis(ModeWindow(0, 4), 2);
  CHECK(cesaro_shift_average(AlgebraPolynomial::unit(), 3, basis, 0.5) ==
        SparseOperator::identity(basis.size()));
}

TEST_CASE("cesaro_average_unrolls_the_definition") {
  const QFockBasis basis(ModeWindow(0, 2), 1);
  const SparseOperator avg =
      cesaro_shift_average(parse_polynomial("ad(0) a(0)"), 2, basis, 0.0);
  CHECK(avg.at(basis.index_of({0}), basis.index_of({0})) == cplx{0.5});
  CHECK(avg.at(basis.index_of({1}), basis.index_of({1})) == cplx{0.5});
  CHECK(avg.nnz() == 2);
}

TEST_CASE("cesaro_average_reports_the_needed_window") {
  const QFockBasis basis(ModeWindow(0, 2), 1);
  CHECK_THROWS_WITH_AS(
      static_cast<void>(cesaro_shift_average(parse_polynomial("ad(0) a(0)"), 8, basis, 0.0)),
      doctest::Contains("[0,7]"), WindowTooSmall);
}

TEST_CASE("cesaro_telescoping_bound") {
  const QFockBasis basis(ModeWindow(0, 16), 2);
  std::mt19937_64 rng(401);
  for (int t = 0; t < 10; ++t) {
    AlgebraPolynomial p = parse_polynomial("ad(0) a(0)");
    p += AlgebraPolynomial::from_letter(creator(1), cplx{0.5, 0.25});
    p += AlgebraPolynomial::from_letter(annihilator(static_cast<int>(rng() % 3)));
    const SparseOperator c4 = cesaro_shift_average(p, 4, basis, 0.3);
    const SparseOperator c8 = cesaro_shift_average(p, 8, basis, 0.3);
    CHECK(max_abs_diff(c4, c8) <=
          materialize(p, basis, 0.3).max_abs() + 1e-15);
  }
}

TEST_CASE("cesaro_deviation_series_strictly_decreases") {
  const AlgebraPolynomial p = parse_polynomial("ad(0) a(0) + a(0) + ad(0)");
  const QFockBasis basis(ModeWindow(0, 33), 3);
  const double q = 0.3;
  const QGram gram(basis, q);
  const ConvergenceSeries series =
      cesaro_deviation_series(p, basis, q, gram, {4, 8, 16, 32}, 2, ModeWindow(0, 2));
  REQUIRE(series.points().size() == 4);
  for (std::size_t i = 1; i < series.points().size(); ++i) {
    CHECK(series.points()[i].deviation < series.points()[i - 1].deviation);
  }
}

TEST_CASE("mixing_probe_escapes_a_fixed_test_family") {
  // Number-operator word in the free case: the deviation dies as soon as the
  // shifted mode leaves the family.
  {
    const QFockBasis basis(ModeWindow(0, 9), 1);
    const QGram gram(basis, 0.0);
    const ConvergenceSeries s =
        unique_mixing_probe(parse_polynomial("ad(0) a(0)"), basis, 0.0, gram,
                            {1, 2, 3, 4}, 1, ModeWindow(0, 2));
    CHECK(s.points()[0].deviation == 1.0);
    CHECK(s.points()[1].deviation == 1.0);
    CHECK(s.points()[2].deviation == 0.0);
    CHECK(s.points()[3].deviation == 0.0);
  }
  // The unit never deviates.
  {
    const QFockBasis basis(ModeWindow(0, 9), 1);
    const QGram gram(basis, 0.4);
    const ConvergenceSeries s = unique_mixing_probe(
        AlgebraPolynomial::unit(), basis, 0.4, gram, {1, 2, 4}, 1, ModeWindow(0, 2));
    for (const auto& point : s.points()) CHECK(point.deviation == 0.0);
  }
  // a_0 ad_0 at q = 0.5: the residue on the family is exactly q, then zero.
  {
    const QFockBasis basis(ModeWindow(0, 9), 2);
    const QGram gram(basis, 0.5);
    const ConvergenceSeries s =
        unique_mixing_probe(parse_polynomial("a(0) ad(0)"), basis, 0.5, gram,
                            {1, 2, 4, 8}, 1, ModeWindow(0, 2));
    CHECK(s.points()[0].deviation == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(s.points()[1].deviation == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(s.points()[2].deviation == 0.0);
    CHECK(s.points()[3].deviation == 0.0);
    CHECK(s.non_increasing_from(1));
    CHECK(s.last_deviation() < s.first_deviation());
  }
}

TEST_CASE("state_functional_validation") {
  const QFockBasis basis(ModeWindow(0, 3), 2);
  VectorState bad;
  bad.rep = QVectorRep{&basis, 0.0, nullptr};
  bad.xi = SparseVec{{0, 2.0}};
  CHECK_THROWS_AS(StateFunctional{std::move(bad)}, InvalidParameter);

  const StateFunctional h = StateFunctional::haagerup_state(1.0);
  CHECK_THROWS_AS(h(AlgebraPolynomial::unit()), InvalidParameter);
  CHECK(h(GroupWord{}) == cplx{1.0});

  CHECK_THROWS_AS(StateFunctional(SegmentState{SegmentState::Engine::Monotone, 1.5}),
                  GammaOutOfRange);
  CHECK_THROWS_AS(StateFunctional(HaagerupStateTag{-2.0}), LambdaOutOfRange);
}

TEST_CASE("q_vacuum_state_values") {
  const QFockBasis basis(ModeWindow(0, 4), 2);
  const StateFunctional omega = StateFunctional::q_vacuum(basis, 0.3);
  CHECK(omega(AlgebraPolynomial::unit()) == cplx{1.0});
  CHECK(omega(parse_polynomial("a(0) ad(0)")) == cplx{1.0});
  CHECK(omega(parse_polynomial("ad(0) a(0)")) == cplx{0.0});
  CHECK(omega.engine_name() == "q");
  CHECK(omega.parameter() == 0.3);
}

TEST_CASE("permutation_average_fixes_words_supported_outside") {
  const StateFunctional phi = StateFunctional::haagerup_state(1.0);
  const GroupWord u = parse_group_word("g1");
  const GroupWord v = parse_group_word("g9");
  const GroupWord w = parse_group_word("g1^-1");
  const cplx avg = permutation_average(u, v, w, phi, {1, 2, 3, 4, 5},
                                       ExactEnumeration{});
  CHECK(std::abs(avg - cplx{std::exp(-3.0)}) < 1e-15);
}

TEST_CASE("permutation_average_blends_the_collision_orbit") {
  // u = g1, v = g2, w = g1^-1 over I = {1..m}: the image g(2) hits 1 with
  // frequency 1/m, where the word collapses to g1.
  const StateFunctional phi = StateFunctional::haagerup_state(1.0);
  const GroupWord u = parse_group_word("g1");
  const GroupWord v = parse_group_word("g2");
  const GroupWord w = parse_group_word("g1^-1");
  for (int m = 3; m <= 7; ++m) {
    std::vector<int> index_set;
    for (int i = 1; i <= m; ++i) index_set.push_back(i);
    const cplx avg = permutation_average(u, v, w, phi, index_set, ExactEnumeration{});
    const double expected =
        (1.0 - 1.0 / m) * std::exp(-3.0) + (1.0 / m) * std::exp(-1.0);
    CHECK(std::abs(avg - cplx{expected}) < 1e-15);
  }
  CHECK_THROWS_AS(permutation_average(u, v, w, phi, {1, 2, 3, 4, 5, 6, 7, 8, 9},
                                      ExactEnumeration{}),
                  FactorialBlowup);
}

TEST_CASE("sampled_average_tracks_the_exact_one") {
  const StateFunctional phi = StateFunctional::haagerup_state(1.0);
  const GroupWord u = parse_group_word("g1");
  const GroupWord v = parse_group_word("g2");
  const GroupWord w = parse_group_word("g1^-1");
  const std::vector<int> index_set = {1, 2, 3, 4, 5, 6};
  const cplx exact = permutation_average(u, v, w, phi, index_set, ExactEnumeration{});
  const int count = 2000;
  const cplx sampled = permutation_average(u, v, w, phi, index_set,
                                           SampledPermutations{count, 424242});
  // Two-valued terms: e^-3 with frequency 5/6, e^-1 with frequency 1/6.
  const double sigma =
      std::sqrt(5.0 / 36.0) * (std::exp(-1.0) - std::exp(-3.0));
  CHECK(std::abs(sampled - exact) < 4.0 * sigma / std::sqrt(double(count)));
}

TEST_CASE("weak_clustering_is_exact_for_disjoint_haagerup_words") {
  const StateFunctional phi = StateFunctional::haagerup_state(0.8);
  const ConvergenceSeries s = weak_clustering_probe_shift(
      parse_group_word("g1"), parse_group_word("g2"), phi, {1, 2, 4, 8});
  for (const auto& point : s.points()) CHECK(point.deviation == 0.0);

  const ConvergenceSeries trivial = weak_clustering_probe_shift(
      GroupWord{}, GroupWord{}, phi, {1, 2, 4});
  for (const auto& point : trivial.points()) CHECK(point.deviation == 0.0);
}

TEST_CASE("weak_clustering_decays_for_the_q_field_word") {
  const QFockBasis basis(ModeWindow(0, 16), 2);
  const StateFunctional omega = StateFunctional::q_vacuum(basis, 0.3);
  AlgebraPolynomial field = AlgebraPolynomial::from_letter(creator(0));
  field += AlgebraPolynomial::from_letter(annihilator(0));
  const ConvergenceSeries s =
      weak_clustering_probe_shift(field, field, omega, {2, 4, 8, 16});
  REQUIRE(s.points().size() == 4);
  for (std::size_t i = 0; i < s.points().size(); ++i) {
    CHECK(s.points()[i].deviation ==
          doctest::Approx(1.0 / s.points()[i].scale).epsilon(1e-14));
  }
}

TEST_CASE("equilibrium_probe_matches_the_boolean_mixing_experiment") {
  const BooleanBasis basis(ModeWindow(0, 15));
  VectorState vs;
  vs.rep = BooleanVectorRep{&basis};
  vs.xi = SparseVec{{basis.index_of_mode(5), 1.0}};
  const StateFunctional state{std::move(vs)};
  const ConvergenceSeries s =
      equilibrium_probe_shift(AlgebraPolynomial::unit(), parse_polynomial("ad(0) a(0)"),
                              AlgebraPolynomial::unit(), state, {2, 4, 6, 8, 12});
  REQUIRE(s.points().size() == 5);
  CHECK(s.points()[0].deviation == 0.0);
  CHECK(s.points()[1].deviation == 0.0);
  CHECK(s.points()[2].deviation == doctest::Approx(1.0 / 6).epsilon(1e-15));
  CHECK(s.points()[3].deviation == doctest::Approx(1.0 / 8).epsilon(1e-15));
  CHECK(s.points()[4].deviation == doctest::Approx(1.0 / 12).epsilon(1e-15));
}

TEST_CASE("equilibrium_probe_perm_reproduces_the_haagerup_gap") {
  const StateFunctional phi = StateFunctional::haagerup_state(1.0);
  std::vector<std::vector<int>> sets;
  for (int m = 3; m <= 7; ++m) {
    std::vector<int> index_set;
    for (int i = 1; i <= m; ++i) index_set.push_back(i);
    sets.push_back(std::move(index_set));
  }
  const ConvergenceSeries s = equilibrium_probe_perm(
      parse_group_word("g1"), parse_group_word("g2"), parse_group_word("g1^-1"), phi,
      sets, ExactEnumeration{});
  REQUIRE(s.points().size() == 5);
  for (std::size_t i = 0; i < s.points().size(); ++i) {
    const double m = s.points()[i].scale;
    const double expected = (1.0 - 1.0 / m) * (std::exp(-1.0) - std::exp(-3.0));
    CHECK(s.points()[i].deviation == doctest::Approx(expected).epsilon(1e-13));
  }
}

TEST_CASE("boolean_permutation_average_examples") {
  const BooleanBasis basis(ModeWindow(0, 8));
  const std::vector<int> j_set = {0, 1, 2, 3, 4, 5};

  const SparseOperator p_sharp = boolean_matrix_unit(basis, 0, 0);
  CHECK(max_abs_diff(boolean_permutation_average(p_sharp, basis, j_set), p_sharp) == 0.0);

  const SparseOperator unit00 =
      boolean_matrix_unit(basis, basis.index_of_mode(0), basis.index_of_mode(0));
  const SparseOperator avg = boolean_permutation_average(unit00, basis, j_set);
  for (int k = 0; k <= 5; ++k) {
    CHECK(std::abs(avg.at(basis.index_of_mode(k), basis.index_of_mode(k)) -
                   cplx{1.0 / 6}) < 1e-15);
  }
  CHECK(avg.nnz() == 6);

  const SparseOperator vac_row = boolean_matrix_unit(basis, 0, basis.index_of_mode(0));
  const SparseOperator avg_row = boolean_permutation_average(vac_row, basis, j_set);
  for (int k = 0; k <= 5; ++k) {
    CHECK(std::abs(avg_row.at(0, basis.index_of_mode(k)) - cplx{1.0 / 6}) < 1e-15);
  }

  CHECK_THROWS_AS(
      boolean_permutation_average(p_sharp, basis, {0, 1, 2, 3, 4, 5, 6, 7, 8}),
      FactorialBlowup);
}

TEST_CASE("stabilizer_fractions_match_enumeration") {
  // n = 5, F = {0,1}: stabilizer fraction 3!/5!, avoidance of a 1-set 3/5
  // and of a 2-set (3*2)/(5*4).
  const StabilizerFractions one = stabilizer_fractions(5, 2, 1);
  CHECK(one.stabilizer_ratio == doctest::Approx(6.0 / 120.0).epsilon(1e-15));
  CHECK(one.avoidance_ratio == doctest::Approx(3.0 / 5.0).epsilon(1e-15));
  const StabilizerFractions two = stabilizer_fractions(5, 2, 2);
  CHECK(two.avoidance_ratio == doctest::Approx(6.0 / 20.0).epsilon(1e-15));

  std::vector<int> images = {0, 1, 2, 3, 4};
  int stabilizer = 0, avoid1 = 0, avoid2 = 0, total = 0;
  do {
    ++total;
    if (images[0] == 0 && images[1] == 1) ++stabilizer;
    if (images[4] != 0 && images[4] != 1) ++avoid1;
    if (images[3] != 0 && images[3] != 1 && images[4] != 0 && images[4] != 1) ++avoid2;
  } while (std::next_permutation(images.begin(), images.end()));
  CHECK(one.stabilizer_ratio == doctest::Approx(double(stabilizer) / total));
  CHECK(one.avoidance_ratio == doctest::Approx(double(avoid1) / total));
  CHECK(two.avoidance_ratio == doctest::Approx(double(avoid2) / total));
  // The two ratios drift apart as the index set grows: the stabilizer
  // fraction collapses while the avoidance fraction approaches one.
  CHECK(stabilizer_fractions(40, 2, 1).stabilizer_ratio < 1e-3);
  CHECK(stabilizer_fractions(40, 2, 1).avoidance_ratio > 0.9);
}
