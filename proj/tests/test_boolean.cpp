#include <doctest.h>

#include <Eigen/Dense>

#include <random>

#include "ncprob/boolean.hpp"
#include "ncprob/errors.hpp"

using namespace ncprob;

TEST_CASE("boolean_letters_are_matrix_units") {
  const BooleanBasis basis(ModeWindow(0, 4));
  const SparseOperator a2 = b_annihilator(basis, 2);
  // a_i e_i = e#
  CHECK(a2.at(BooleanBasis::vacuum_index(), basis.index_of_mode(2)) == cplx{1.0});
  CHECK(a2.nnz() == 1);
  // ad_i e# = e_i
  const SparseOperator c2 = b_creator(basis, 2);
  CHECK(c2.at(basis.index_of_mode(2), BooleanBasis::vacuum_index()) == cplx{1.0});
  CHECK(c2.nnz() == 1);
  CHECK(c2.max_abs() == 1.0);  // norm one: a single unimodular entry
  CHECK_THROWS_AS(b_creator(basis, 9), ModeOutOfWindow);
}

TEST_CASE("boolean_products_collapse_to_units") {
  const BooleanBasis basis(ModeWindow(0, 6));
  for (int i = 0; i <= 6; ++i) {
    for (int j = 0; j <= 6; ++j) {
      const SparseOperator left = b_annihilator(basis, i) * b_creator(basis, j);
      SparseOperator delta(basis.size());
      if (i == j) delta.add_at(0, 0, 1.0);
      CHECK(left == delta);

      const SparseOperator right = b_creator(basis, i) * b_annihilator(basis, j);
      CHECK(right == boolean_matrix_unit(basis, basis.index_of_mode(i),
                                         basis.index_of_mode(j)));
    }
  }
}

TEST_CASE("boolean_expectation_examples") {
  const BooleanBasis basis(ModeWindow(0, 4));
  const ConditionalExpectation from_vacuum_unit =
      boolean_expectation(boolean_matrix_unit(basis, 0, 0), 0.0);
  CHECK(from_vacuum_unit == ConditionalExpectation{cplx{1.0}, cplx{0.0}});

  const ConditionalExpectation off_diagonal =
      boolean_expectation(boolean_matrix_unit(basis, 0, basis.index_of_mode(1)), 0.0);
  CHECK(off_diagonal == ConditionalExpectation{cplx{0.0}, cplx{0.0}});

  const ConditionalExpectation pure_identity =
      boolean_expectation(SparseOperator(basis.size()), cplx{0.0, 2.0});
  CHECK(pure_identity == ConditionalExpectation{cplx{0.0}, cplx{0.0, 2.0}});
}

TEST_CASE("boolean_expectation_idempotent_unital_positive") {
  const BooleanBasis basis(ModeWindow(0, 5));
  const std::size_t dim = basis.size();
  std::mt19937_64 rng(211);
  auto uniform = [&rng]() {
    return (static_cast<double>(rng() >> 11) * 0x1.0p-53) * 2.0 - 1.0;
  };
  for (int t = 0; t < 50; ++t) {
    Eigen::MatrixXcd b(dim, dim);
    for (std::size_t r = 0; r < dim; ++r) {
      for (std::size_t c = 0; c < dim; ++c) {
        b(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) =
            cplx(uniform(), uniform());
      }
    }
    const Eigen::MatrixXcd psd = b.adjoint() * b;
    SparseOperator a(dim);
    for (std::size_t r = 0; r < dim; ++r) {
      for (std::size_t c = 0; c < dim; ++c) {
        a.add_at(r, c, psd(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)));
      }
    }
    const ConditionalExpectation e = boolean_expectation(a, {0.5, -0.5});
    CHECK(e.vacuum_part.real() >= -1e-12);
    CHECK(std::abs(e.vacuum_part.imag()) <= 1e-12);
    SparseOperator compact(dim);
    compact.add_at(0, 0, e.vacuum_part);
    CHECK(boolean_expectation(compact, e.identity_part) == e);
  }
  CHECK(boolean_expectation(SparseOperator(dim), 1.0) ==
        ConditionalExpectation{cplx{0.0}, cplx{1.0}});
}

TEST_CASE("e_mixing_number_word_spikes_at_the_vector_mode") {
  const BooleanBasis basis(ModeWindow(0, 20));
  const SparseVec xi{{basis.index_of_mode(5), 1.0}};
  const AlgebraPolynomial word = parse_polynomial("ad(0) a(0)");
  const std::vector<double> dev = e_mixing_experiment(word, basis, xi, 10);
  REQUIRE(dev.size() == 11);
  for (int n = 0; n <= 10; ++n) {
    CHECK(dev[static_cast<std::size_t>(n)] == (n == 5 ? 1.0 : 0.0));
  }
}

TEST_CASE("e_mixing_fixed_points_have_zero_deviation") {
  const BooleanBasis basis(ModeWindow(0, 15));
  const SparseVec xi{{basis.index_of_mode(5), 1.0}};
  // The identity is invariant.
  for (double d : e_mixing_experiment(AlgebraPolynomial::unit(), basis, xi, 8)) {
    CHECK(d == 0.0);
  }
  // The vacuum projection a_0 ad_0 is shift-invariant with <P# e5, e5> = 0.
  for (double d : e_mixing_experiment(parse_polynomial("a(0) ad(0)"), basis, xi, 8)) {
    CHECK(d == 0.0);
  }
}

TEST_CASE("e_mixing_rejects_small_windows") {
  const BooleanBasis basis(ModeWindow(0, 5));
  const SparseVec xi{{basis.index_of_mode(2), 1.0}};
  CHECK_THROWS_AS(e_mixing_experiment(parse_polynomial("ad(0) a(0)"), basis, xi, 9),
                  WindowTooSmall);
}

TEST_CASE("boolean_segment_state_invariance") {
  const BooleanBasis basis(ModeWindow(0, 12));
  const std::vector<AlgebraPolynomial> words = {
      parse_polynomial("ad(0) a(0)"),
      parse_polynomial("a(0) ad(0)"),
      AlgebraPolynomial::unit(),
  };
  const std::vector<GroupElement> elements = {
      GroupElement::shift(3),
      GroupElement::transposition(0, 7),
      GroupElement::cycle({0, 1, 2, 3}),
  };
  for (double gamma : {0.0, 0.25, 1.0}) {
    const InvarianceReport report =
        boolean_state_invariance_check(gamma, basis, words, elements);
    CHECK(report.all_equal);
    CHECK(report.max_deviation == 0.0);
  }
  // Spot values: the vacuum unit has state value (1 - gamma).
  CHECK(boolean_segment_value(0.25, basis, parse_polynomial("a(0) ad(0)")) ==
        cplx{0.75});
  CHECK(boolean_segment_value(0.25, basis, parse_polynomial("ad(0) a(0)")) == cplx{0.0});
  CHECK(boolean_segment_value(0.25, basis, AlgebraPolynomial::unit()) == cplx{1.0});
  CHECK_THROWS_AS(boolean_segment_value(1.5, basis, AlgebraPolynomial::unit()),
                  GammaOutOfRange);
}

TEST_CASE("boolean_invariance_rejects_window_escapes") {
  const BooleanBasis basis(ModeWindow(0, 3));
  const std::vector<AlgebraPolynomial> words = {parse_polynomial("ad(2) a(2)")};
  const std::vector<GroupElement> elements = {GroupElement::shift(5)};
  CHECK_THROWS_AS(boolean_state_invariance_check(0.0, basis, words, elements),
                  WindowTooSmall);
}

TEST_CASE("boolean_shift_fixed_points_are_spanned_by_the_vacuum_projection") {
  // Solve [X, U] = 0 and [X, U^H] = 0 on a small window; the solution space
  // must be exactly span{P#, I - P#}.
  const BooleanBasis basis(ModeWindow(0, 3));
  const std::size_t dim = basis.size();
  const SparseOperator u = boolean_shift_matrix(basis);
  Eigen::MatrixXcd mu = Eigen::MatrixXcd::Zero(dim, dim);
  for (const auto& [rc, v] : u.entries()) {
    mu(static_cast<Eigen::Index>(rc.first), static_cast<Eigen::Index>(rc.second)) = v;
  }
  const Eigen::MatrixXcd muh = mu.adjoint();

  const Eigen::Index n = static_cast<Eigen::Index>(dim);
  Eigen::MatrixXcd system(2 * n * n, n * n);
  auto flat = [n](Eigen::Index r, Eigen::Index c) { return r * n + c; };
  system.setZero();
  for (Eigen::Index r = 0; r < n; ++r) {
    for (Eigen::Index c = 0; c < n; ++c) {
      for (Eigen::Index k = 0; k < n; ++k) {
        // (XU - UX)[r,c] and (XU^H - U^H X)[r,c]
        system(flat(r, c), flat(r, k)) += mu(k, c);
        system(flat(r, c), flat(k, c)) -= mu(r, k);
        system(n * n + flat(r, c), flat(r, k)) += muh(k, c);
        system(n * n + flat(r, c), flat(k, c)) -= muh(r, k);
      }
    }
  }
  const Eigen::FullPivLU<Eigen::MatrixXcd> lu(system);
  CHECK(lu.dimensionOfKernel() == 2);
  // P# and I - P# are in the kernel.
  auto commutes = [&](const Eigen::MatrixXcd& x) {
    return ((x * mu - mu * x).norm() + (x * muh - muh * x).norm()) < 1e-12;
  };
  Eigen::MatrixXcd p_sharp = Eigen::MatrixXcd::Zero(n, n);
  p_sharp(0, 0) = 1.0;
  CHECK(commutes(p_sharp));
  CHECK(commutes(Eigen::MatrixXcd::Identity(n, n) - p_sharp));
}
