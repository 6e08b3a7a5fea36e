#pragma once

#include <compare>
#include <complex>
#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <variant>
#include <vector>

#include "ncprob/errors.hpp"

namespace ncprob {

using cplx = std::complex<double>;

enum class LetterKind : std::uint8_t { Annihilator, Creator };

/// One generator symbol: an annihilator a(i) or a creator ad(i) at mode i.
struct Letter {
  int mode = 0;
  LetterKind kind = LetterKind::Annihilator;

  friend auto operator<=>(const Letter&, const Letter&) = default;
};

inline Letter annihilator(int mode) { return {mode, LetterKind::Annihilator}; }
inline Letter creator(int mode) { return {mode, LetterKind::Creator}; }

/// Adjoint of a single letter: a(i) <-> ad(i).
Letter star(const Letter& l);

/// A word in the letters; the empty word is the unit.
struct AlgebraWord {
  std::vector<Letter> letters;

  AlgebraWord() = default;
  explicit AlgebraWord(std::vector<Letter> ls) : letters(std::move(ls)) {}

  bool empty() const { return letters.empty(); }
  std::size_t size() const { return letters.size(); }

  friend auto operator<=>(const AlgebraWord&, const AlgebraWord&) = default;
};

/// Finite complex-linear combination of words, kept as a sorted term map so
/// that equality is plain map comparison. Terms with coefficient exactly 0
/// are never stored; the symbolic layer applies no epsilon.
class AlgebraPolynomial {
 public:
  using TermMap = std::map<AlgebraWord, cplx>;

  AlgebraPolynomial() = default;

  static AlgebraPolynomial zero() { return {}; }
  static AlgebraPolynomial unit() { return from_word(AlgebraWord{}, 1.0); }
  static AlgebraPolynomial from_word(AlgebraWord w, cplx coeff = 1.0);
  static AlgebraPolynomial from_letter(Letter l, cplx coeff = 1.0);

  const TermMap& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  std::size_t size() const { return terms_.size(); }

  void add_term(const AlgebraWord& w, cplx coeff);

  AlgebraPolynomial& operator+=(const AlgebraPolynomial& other);
  AlgebraPolynomial& operator-=(const AlgebraPolynomial& other);
  AlgebraPolynomial& operator*=(cplx scale);

  friend AlgebraPolynomial operator+(AlgebraPolynomial a, const AlgebraPolynomial& b) {
    a += b;
    return a;
  }
  friend AlgebraPolynomial operator-(AlgebraPolynomial a, const AlgebraPolynomial& b) {
    a -= b;
    return a;
  }
  friend AlgebraPolynomial operator*(AlgebraPolynomial a, cplx scale) {
    a *= scale;
    return a;
  }
  friend AlgebraPolynomial operator*(cplx scale, AlgebraPolynomial a) {
    a *= scale;
    return a;
  }

  friend bool operator==(const AlgebraPolynomial&, const AlgebraPolynomial&) = default;

 private:
  TermMap terms_;
};

/// Index relabelings acting on words: the shift by a fixed power, or a
/// finite-support permutation. A permutation fixes every index it does not
/// list, so its listed images must form a bijection of the listed keys.
class GroupElement {
 public:
  struct Shift {
    int power = 0;
  };
  struct Permutation {
    std::map<int, int> images;
  };

  static GroupElement shift(int power);
  static GroupElement permutation(std::map<int, int> images);
  static GroupElement transposition(int a, int b);
  static GroupElement cycle(const std::vector<int>& orbit);
  static GroupElement identity() { return shift(0); }

  bool is_shift() const { return std::holds_alternative<Shift>(action_); }
  bool is_permutation() const { return std::holds_alternative<Permutation>(action_); }
  bool is_identity() const;

  int operator()(int mode) const;
  GroupElement inverse() const;

  /// Composition g*h (apply h first). Only same-variant elements compose
  /// inside this representation.
  friend GroupElement compose(const GroupElement& g, const GroupElement& h);

  const std::variant<Shift, Permutation>& action() const { return action_; }

 private:
  explicit GroupElement(std::variant<Shift, Permutation> a) : action_(std::move(a)) {}
  std::variant<Shift, Permutation> action_;
};

/// Adjoint: reverse letter order, flip kinds, conjugate coefficients.
AlgebraWord star(const AlgebraWord& w);
AlgebraPolynomial star(const AlgebraPolynomial& p);

/// Relabel every mode through g; coefficients are untouched.
AlgebraWord act(const GroupElement& g, const AlgebraWord& w);
AlgebraPolynomial act(const GroupElement& g, const AlgebraPolynomial& p);

/// Free concatenation product; no commutation relations are applied here.
AlgebraPolynomial multiply(const AlgebraPolynomial& p, const AlgebraPolynomial& q);

/// Modes appearing in any term with nonzero coefficient.
std::set<int> support(const AlgebraPolynomial& p);

/// Text form used by the CLI and fixtures, e.g. "1 * ad(0) a(0) + 0.5 * a(1)".
/// parse_polynomial(print_polynomial(p)) == p holds exactly.
std::string print_polynomial(const AlgebraPolynomial& p);
AlgebraPolynomial parse_polynomial(const std::string& text);

std::string print_word(const AlgebraWord& w);

}  // namespace ncprob
