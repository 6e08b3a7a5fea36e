#include <doctest.h>

#include <cmath>

#include "ncprob/errors.hpp"
#include "ncprob/moments.hpp"

using namespace ncprob;

TEST_CASE("alphabet_involution_and_composites") {
  const SampleAlphabet fock = SampleAlphabet::fock();
  CHECK(fock.valid("ad*a"));
  CHECK(fock.star("a") == "ad");
  CHECK(fock.star("ad*a") == "ad*a");
  CHECK(fock.star("x*a") == "ad*x");
  CHECK_FALSE(fock.valid("z"));
  CHECK_FALSE(fock.valid(""));

  const SampleAlphabet group = SampleAlphabet::group();
  CHECK(group.star("g") == "g^-1");
  CHECK(group.star("g*g") == "g^-1*g^-1");
}

TEST_CASE("key_validation") {
  const SampleAlphabet fock = SampleAlphabet::fock();
  CHECK_THROWS_AS(validate_key(MomentKey{{0, 0}, {"x", "x"}}, fock), InvalidParameter);
  CHECK_THROWS_AS(validate_key(MomentKey{{0}, {"z"}}, fock), UnknownLabel);
  CHECK_THROWS_AS(validate_key(MomentKey{{0, 1}, {"x"}}, fock), InvalidParameter);

  const MomentKey key{{0, 1}, {"a", "ad"}};
  const MomentKey starred = star_key(key, fock);
  CHECK(starred == MomentKey{{1, 0}, {"a", "ad"}});
}

TEST_CASE("q_engine_key_evaluation") {
  const QFockBasis basis(ModeWindow(0, 4), 3);
  const MomentTable table(SampleAlphabet::fock(), MomentTable::QBinding{&basis, 0.3});
  CHECK(table.evaluate(MomentKey{{0}, {"ad*a"}}) == cplx{0.0});
  CHECK(table.evaluate(MomentKey{{0}, {"a*ad"}}) == cplx{1.0});
  CHECK(table.evaluate(MomentKey{}) == cplx{1.0});
  CHECK_THROWS_AS(table.evaluate(MomentKey{{9}, {"x"}}), WindowTooSmall);
}

TEST_CASE("boolean_engine_key_evaluation") {
  const BooleanBasis basis(ModeWindow(0, 6));
  const MomentTable table(SampleAlphabet::fock(),
                          MomentTable::BooleanBinding{&basis, 0.0});
  CHECK(table.evaluate(MomentKey{{0, 1}, {"x", "x"}}) == cplx{0.0});
  CHECK(table.evaluate(MomentKey{{0, 1, 0}, {"x", "x", "x"}}) == cplx{0.0});
  CHECK(table.evaluate(MomentKey{{0}, {"a*ad"}}) == cplx{1.0});
}

TEST_CASE("haagerup_engine_key_evaluation") {
  const MomentTable table(SampleAlphabet::group(), MomentTable::HaagerupBinding{1.0});
  CHECK(table.evaluate(MomentKey{{1, 2, 1}, {"g", "g", "g^-1"}}) == std::exp(-3.0));
  CHECK(table.evaluate(MomentKey{{1, 2}, {"g", "g^-1"}}) == std::exp(-2.0));
  CHECK(table.evaluate(MomentKey{{1}, {"g*g^-1"}}) == cplx{1.0});
}

TEST_CASE("engine_tables_are_conjugate_symmetric") {
  const QFockBasis basis(ModeWindow(0, 3), 3);
  const MomentTable table(SampleAlphabet::fock(), MomentTable::QBinding{&basis, 0.4});
  const std::vector<MomentKey> keys = {
      {{0, 1}, {"x", "x"}},
      {{0, 1, 2}, {"ad", "x", "a"}},
      {{2, 0}, {"ad*a", "x"}},
  };
  for (const MomentKey& key : keys) {
    const cplx direct = table.evaluate(key);
    const cplx starred = table.evaluate(star_key(key, table.alphabet()));
    CHECK(std::abs(starred - std::conj(direct)) < 1e-12);
  }
}

TEST_CASE("positivity_on_engine_backed_tables") {
  const QFockBasis basis(ModeWindow(0, 3), 4);
  const MomentTable table(SampleAlphabet::fock(), MomentTable::QBinding{&basis, 0.5});
  const std::vector<MomentKey> halves = {
      MomentKey{},
      {{0}, {"x"}},
      {{1}, {"x"}},
      {{0, 1}, {"x", "x"}},
      {{1, 0}, {"ad", "a"}},
  };
  CHECK(positivity_check(table, halves) >= -1e-10);
  CHECK(positivity_check(table, {MomentKey{}}) == 1.0);
}

TEST_CASE("positivity_detects_a_tampered_table") {
  std::map<MomentKey, cplx> entries;
  entries[MomentKey{}] = 1.0;
  entries[MomentKey{{0}, {"x"}}] = 3.0;  // exceeds the geometric mean
  entries[MomentKey{{0}, {"x*x"}}] = 1.0;
  const MomentTable table(SampleAlphabet::fock(), std::move(entries));
  const std::vector<MomentKey> halves = {MomentKey{}, {{0}, {"x"}}};
  CHECK(positivity_check(table, halves) == doctest::Approx(-2.0).epsilon(1e-12));
}

TEST_CASE("consistency_removes_unit_slots") {
  const QFockBasis basis(ModeWindow(0, 4), 4);
  const MomentTable table(SampleAlphabet::fock(), MomentTable::QBinding{&basis, 0.3});
  const MomentKey key{{0, 1, 0}, {"x", "1", "x"}};
  const ConsistencyReport r = consistency_check(table, key, 1);
  CHECK(r.equal);
  CHECK(r.reduced_key == MomentKey{{0}, {"x*x"}});

  const BooleanBasis b_basis(ModeWindow(0, 4));
  const MomentTable b_table(SampleAlphabet::fock(),
                            MomentTable::BooleanBinding{&b_basis, 0.25});
  const ConsistencyReport rb =
      consistency_check(b_table, MomentKey{{0, 2, 1}, {"x", "1", "a*ad"}}, 1);
  CHECK(rb.equal);
  CHECK(rb.reduced_key == MomentKey{{0, 1}, {"x", "a*ad"}});

  CHECK_THROWS_AS(consistency_check(table, MomentKey{{0, 1}, {"x", "x"}}, 1),
                  InvalidParameter);
}

TEST_CASE("consistency_flags_a_broken_unit_entry") {
  std::map<MomentKey, cplx> entries;
  entries[MomentKey{{0, 1}, {"x", "1"}}] = 5.0;
  entries[MomentKey{{0}, {"x"}}] = 7.0;
  const MomentTable table(SampleAlphabet::fock(), std::move(entries));
  const ConsistencyReport r = consistency_check(table, MomentKey{{0, 1}, {"x", "1"}}, 1);
  CHECK_FALSE(r.equal);
  CHECK(r.with_unit == cplx{5.0});
  CHECK(r.without_unit == cplx{7.0});
}

TEST_CASE("haagerup_tables_are_exchangeable_and_stationary") {
  const MomentTable table(SampleAlphabet::group(), MomentTable::HaagerupBinding{1.0});
  const std::vector<MomentKey> keys = {
      {{1, 2}, {"g", "g"}},
      {{1, 2, 1}, {"g", "g", "g^-1"}},
      {{2, 3}, {"g", "g^-1"}},
  };
  const SymshReport r = symsh_verification(table, keys, {1, 2, 5});
  CHECK(r.hypothesis_met);
  CHECK(r.stationary);
  CHECK(r.exchange_deviation == 0.0);
  CHECK(r.shift_deviation == 0.0);
}

TEST_CASE("boolean_tables_are_exchangeable_and_stationary") {
  const BooleanBasis basis(ModeWindow(0, 10));
  const MomentTable table(SampleAlphabet::fock(),
                          MomentTable::BooleanBinding{&basis, 0.4});
  const std::vector<MomentKey> keys = {
      {{0, 1}, {"x", "x"}},
      {{0, 1, 0}, {"x", "x", "x"}},
      {{0, 2}, {"a", "ad"}},
      {{0}, {"a*ad"}},
  };
  const SymshReport r = symsh_verification(table, keys, {1, 2});
  CHECK(r.hypothesis_met);
  CHECK(r.stationary);
}

TEST_CASE("monotone_tables_fail_the_exchangeability_hypothesis") {
  const MomentTable table(SampleAlphabet::fock(), MomentTable::MonotoneBinding{0.2});
  // The head-stripping order is one-sided: swapping 0 and 1 in the first key
  // turns a vacuum-fixing word into a vanishing one.
  const std::vector<MomentKey> keys = {
      {{1, 0, 1}, {"a", "a*ad", "ad"}},
      {{0, 1}, {"x", "x"}},
  };
  CHECK(table.evaluate(keys[0]) == cplx{0.8});
  CHECK(table.evaluate(MomentKey{{0, 1, 0}, {"a", "a*ad", "ad"}}) == cplx{0.0});

  const SymshReport r = symsh_verification(table, keys, {1, 2});
  CHECK_FALSE(r.hypothesis_met);
  CHECK(r.exchange_deviation == doctest::Approx(0.8).epsilon(1e-15));
  // Stationarity still holds on its own.
  CHECK(stationarity_check(table, keys, {1, 2, 3}).passed);
}

TEST_CASE("moment_table_csv_round_trips") {
  std::map<MomentKey, cplx> entries;
  entries[MomentKey{{-1, 3}, {"x", "ad*a"}}] = cplx{0.5, -2.0};
  entries[MomentKey{{0}, {"x"}}] = cplx{1.0, 0.0};
  entries[MomentKey{}] = cplx{1.0, 0.0};
  const MomentTable table(SampleAlphabet::fock(), std::move(entries));
  const std::string csv = table.to_csv();
  const MomentTable back = MomentTable::from_csv(SampleAlphabet::fock(), csv);
  CHECK(back.entries() == table.entries());
  CHECK(back.to_csv() == csv);
}

TEST_CASE("stored_tables_reject_unknown_keys") {
  std::map<MomentKey, cplx> entries;
  entries[MomentKey{{0}, {"x"}}] = 1.0;
  const MomentTable table(SampleAlphabet::fock(), std::move(entries));
  CHECK_THROWS_AS(table.evaluate(MomentKey{{1}, {"x"}}), KeyConcatenationInvalid);
}
