#include <doctest.h>

#include <random>

#include "ncprob/errors.hpp"
#include "ncprob/qfock.hpp"

using namespace ncprob;

namespace {

AlgebraPolynomial random_word(std::mt19937_64& rng, int max_len, int lo, int hi) {
  const int len = 1 + static_cast<int>(rng() % static_cast<std::uint64_t>(max_len));
  std::vector<Letter> letters;
  const std::uint64_t width = static_cast<std::uint64_t>(hi - lo + 1);
  for (int i = 0; i < len; ++i) {
    const int mode = lo + static_cast<int>(rng() % width);
    letters.push_back(rng() % 2 ? creator(mode) : annihilator(mode));
  }
  return AlgebraPolynomial::from_word(AlgebraWord{std::move(letters)});
}

}  // namespace

TEST_CASE("q_basis_counts_levels") {
  CHECK(QFockBasis(ModeWindow(0, 1), 0).size() == 1);
  CHECK(QFockBasis(ModeWindow(0, 1), 2).size() == 7);   // 1 + 2 + 4
  CHECK(QFockBasis(ModeWindow(0, 0), 3).size() == 4);
}

TEST_CASE("q_basis_is_graded_then_lexicographic") {
  const QFockBasis basis(ModeWindow(0, 1), 2);
  const std::vector<ModeSeq> expected = {{},     {0},    {1},    {0, 0},
                                         {0, 1}, {1, 0}, {1, 1}};
  CHECK(basis.entries() == expected);
  for (std::size_t i = 0; i < basis.size(); ++i) {
    CHECK(basis.index_of(basis.entries()[i]) == i);
  }
  CHECK(basis.level_of(0) == 0);
  CHECK(basis.level_of(3) == 2);
}

TEST_CASE("q_basis_capacity_guard") {
  CHECK_THROWS_AS(QFockBasis(ModeWindow(0, 9), 8, 1000), CapacityExceeded);
}

TEST_CASE("q_rejects_boundary_deformations") {
  const QFockBasis basis(ModeWindow(0, 0), 1);
  CHECK_THROWS_AS(q_creator(basis, 1.0, 0), InvalidParameter);
  CHECK_THROWS_AS(q_creator(basis, -0.995, 0), InvalidParameter);
  CHECK_THROWS_AS(q_creator(basis, 0.5, 3), ModeOutOfWindow);
}

TEST_CASE("q_creator_prepends_and_truncates") {
  const QFockBasis basis(ModeWindow(0, 1), 2);
  const SparseOperator c0 = q_creator(basis, 0.5, 0);
  // vacuum -> e_(0)
  CHECK(c0.at(basis.index_of({0}), basis.index_of({})) == cplx{1.0});
  // e_(0) -> e_(1,0) under creator at mode 1
  const SparseOperator c1 = q_creator(basis, 0.5, 1);
  CHECK(c1.at(basis.index_of({1, 0}), basis.index_of({0})) == cplx{1.0});
  // top-level sequences map to zero
  for (const auto& [rc, v] : c0.entries()) {
    CHECK(basis.level_of(rc.second) < 2);
  }
}

TEST_CASE("q_annihilator_weighted_removal") {
  const double q = 0.5;
  const QFockBasis basis(ModeWindow(0, 1), 2);
  const SparseOperator a0 = q_annihilator(basis, q, 0);
  // a_0 e_(0,0) = (1 + q) e_(0)
  CHECK(a0.at(basis.index_of({0}), basis.index_of({0, 0})) == cplx{1.0 + q});
  // a_0 annihilates the vacuum: no column 0 entries
  for (const auto& [rc, v] : a0.entries()) CHECK(rc.second != 0);
  // a_1 e_(0,1) = q e_(0): the match sits at position 2
  const SparseOperator a1 = q_annihilator(basis, q, 1);
  CHECK(a1.at(basis.index_of({0}), basis.index_of({0, 1})) == cplx{q});
}

TEST_CASE("q_relation_exact_on_interior") {
  // Free case, diagonal pair.
  {
    const QFockBasis basis(ModeWindow(0, 2), 3);
    const RelationReport r = check_q_relation(basis, 0.0, 1, 1);
    CHECK(r.interior_defect == 0.0);
  }
  // Deformed, off-diagonal; q = 0.5 is dyadic so the cancellation is exact.
  {
    const QFockBasis basis(ModeWindow(0, 1), 3);
    const RelationReport r = check_q_relation(basis, 0.5, 0, 1);
    CHECK(r.interior_defect == 0.0);
  }
}

TEST_CASE("q_relation_boundary_defect_from_truncation") {
  // Width-1 window at depth 1: the creator truncates the single top state,
  // so the defect column at the top level carries -(1 + q).
  for (double q : {0.0, 0.5}) {
    const QFockBasis basis(ModeWindow(0, 0), 1);
    const RelationReport r = check_q_relation(basis, q, 0, 0);
    CHECK(r.interior_defect == 0.0);
    CHECK(r.boundary_defect == 1.0 + q);
    CHECK(r.boundary_columns == std::vector<std::size_t>{basis.index_of({0})});
  }
}

TEST_CASE("q_relation_grid_within_tolerance") {
  for (double q : {-0.9, -0.5, 0.3, 0.9}) {
    const QFockBasis basis(ModeWindow(0, 2), 3);
    for (int i = 0; i <= 2; ++i) {
      for (int j = 0; j <= 2; ++j) {
        CHECK(check_q_relation(basis, q, i, j).interior_defect < 1e-12);
      }
    }
  }
}

TEST_CASE("q_gram_brute_force_values") {
  const double q = 0.3;
  const QFockBasis basis(ModeWindow(0, 1), 2);
  const QGram gram(basis, q);
  const SparseOperator g = gram.to_operator(basis);
  // Level 1 is the identity block.
  CHECK(g.at(basis.index_of({0}), basis.index_of({0})) == cplx{1.0});
  CHECK(g.at(basis.index_of({0}), basis.index_of({1})) == cplx{0.0});
  // <e_(i,i), e_(i,i)> = 1 + q.
  CHECK(g.at(basis.index_of({0, 0}), basis.index_of({0, 0})) == cplx{1.0 + q});
  // <e_(i,j), e_(j,i)> = q for i != j.
  CHECK(g.at(basis.index_of({0, 1}), basis.index_of({1, 0})) == cplx{q});
  CHECK(g.at(basis.index_of({0, 1}), basis.index_of({0, 1})) == cplx{1.0});
}

TEST_CASE("q_gram_blocks_stay_positive") {
  for (double q : {-0.9, -0.5, 0.0, 0.5, 0.9}) {
    const QFockBasis basis(ModeWindow(0, 1), 4);
    const QGram gram(basis, q);
    CHECK(gram.min_eigenvalue() > 0.0);
  }
}

TEST_CASE("q_gram_depth_cap") {
  const QFockBasis basis(ModeWindow(0, 0), 6);
  CHECK_THROWS_AS(QGram(basis, 0.5), CapacityExceeded);
}

TEST_CASE("q_free_case_adjointness_is_plain_transpose") {
  const QFockBasis basis(ModeWindow(0, 2), 3);
  const SparseOperator a = q_annihilator(basis, 0.0, 1);
  const SparseOperator c = q_creator(basis, 0.0, 1);
  CHECK(max_abs_diff(a, c.adjoint()) == 0.0);
  CHECK(check_q_adjointness(basis, 0.0, 1) == 0.0);
}

TEST_CASE("q_adjointness_defect_small_on_grid") {
  {
    const QFockBasis basis(ModeWindow(0, 1), 3);
    const QGram gram(basis, 0.5);
    for (int i = 0; i <= 1; ++i) CHECK(check_q_adjointness(basis, gram, i) < 1e-10);
  }
  {
    const QFockBasis basis(ModeWindow(0, 0), 4);
    for (double q : {-0.9, 0.3, 0.9}) {
      CHECK(check_q_adjointness(basis, q, 0) < 1e-10);
    }
  }
}

TEST_CASE("vacuum_expectation_reads_the_corner") {
  const QFockBasis basis(ModeWindow(0, 1), 2);
  const double q = 0.3;
  CHECK(vacuum_expectation(SparseOperator::identity(basis.size())) == cplx{1.0});

  const AlgebraPolynomial a_ad = parse_polynomial("a(0) ad(0)");
  CHECK(vacuum_expectation(materialize(a_ad, basis, q)) == cplx{1.0});

  const AlgebraPolynomial ad_a = parse_polynomial("ad(0) a(0)");
  CHECK(vacuum_expectation(materialize(ad_a, basis, q)) == cplx{0.0});
}

TEST_CASE("materialize_unit_and_number_word") {
  const QFockBasis basis(ModeWindow(0, 1), 2);
  CHECK(materialize(AlgebraPolynomial::unit(), basis, 0.5) ==
        SparseOperator::identity(basis.size()));
  const SparseOperator n0 = materialize(parse_polynomial("ad(0) a(0)"), basis, 0.5);
  CHECK(n0.at(0, 0) == cplx{0.0});
}

TEST_CASE("materialize_rejects_modes_outside_window") {
  const QFockBasis basis(ModeWindow(0, 1), 2);
  CHECK_THROWS_WITH_AS(static_cast<void>(materialize(parse_polynomial("a(7)"), basis, 0.5)),
                       doctest::Contains("7"), ModeOutOfWindow);
}

TEST_CASE("materialize_star_matches_gram_adjoint_on_interior") {
  // Rows and columns at levels <= depth - wordlength never see truncation,
  // so the adjoint identity must hold there up to roundoff.
  const double q = 0.5;
  const QFockBasis basis(ModeWindow(0, 1), 4);
  const QGram gram(basis, q);
  const SparseOperator g = gram.to_operator(basis);
  std::mt19937_64 rng(31);
  for (int t = 0; t < 25; ++t) {
    const AlgebraPolynomial p = random_word(rng, 2, 0, 1);
    const int word_len = static_cast<int>(p.terms().begin()->first.size());
    const int safe_level = basis.depth() - word_len;
    SparseOperator defect = g * materialize(star(p), basis, q);
    defect -= materialize(p, basis, q).adjoint() * g;
    const double value = defect.max_abs_where([&](std::size_t row, std::size_t col) {
      return basis.level_of(row) <= safe_level && basis.level_of(col) <= safe_level;
    });
    CHECK(value < 1e-10);
  }
}

TEST_CASE("materialize_is_multiplicative_up_to_roundoff") {
  const double q = 0.3;
  const QFockBasis basis(ModeWindow(0, 1), 4);
  std::mt19937_64 rng(37);
  for (int t = 0; t < 30; ++t) {
    const AlgebraPolynomial p = random_word(rng, 3, 0, 1);
    const AlgebraPolynomial r = random_word(rng, 3, 0, 1);
    const SparseOperator left = materialize(multiply(p, r), basis, q);
    const SparseOperator right = materialize(p, basis, q) * materialize(r, basis, q);
    CHECK(max_abs_diff(left, right) < 1e-12);
  }
}

TEST_CASE("apply_polynomial_matches_materialized_action") {
  const double q = -0.5;
  const QFockBasis basis(ModeWindow(0, 1), 3);
  std::mt19937_64 rng(41);
  for (int t = 0; t < 20; ++t) {
    const AlgebraPolynomial p = random_word(rng, 4, 0, 1);
    SparseVec x;
    x[rng() % basis.size()] = cplx{1.0, -0.5};
    x[rng() % basis.size()] += cplx{0.25, 0.75};
    const SparseVec via_matrix = materialize(p, basis, q).apply(x);
    SparseVec direct = apply_polynomial(p, basis, q, x);
    vec_axpy(direct, -1.0, via_matrix);
    CHECK(vec_norm(direct) < 1e-13);
  }
}

TEST_CASE("orthonormal_vectors_are_gram_orthonormal") {
  const double q = 0.5;
  const QFockBasis basis(ModeWindow(0, 1), 3);
  const QGram gram(basis, q);
  const auto family = gram.orthonormal_vectors(basis, basis.window(), 2);
  CHECK(family.size() == 7);  // levels 0..2 over two modes
  for (std::size_t i = 0; i < family.size(); ++i) {
    for (std::size_t j = 0; j < family.size(); ++j) {
      const cplx ip = gram.inner(family[i], family[j]);
      CHECK(std::abs(ip - (i == j ? cplx{1.0} : cplx{0.0})) < 1e-12);
    }
  }
}
