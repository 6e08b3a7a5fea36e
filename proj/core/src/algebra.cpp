#include "ncprob/algebra.hpp"

#include <algorithm>
#include <cctype>
#include <cstdlib>

#include "ncprob/io.hpp"

namespace ncprob {

Letter star(const Letter& l) {
  return {l.mode, l.kind == LetterKind::Creator ? LetterKind::Annihilator
                                                : LetterKind::Creator};
}

AlgebraPolynomial AlgebraPolynomial::from_word(AlgebraWord w, cplx coeff) {
  AlgebraPolynomial p;
  p.add_term(w, coeff);
  return p;
}

AlgebraPolynomial AlgebraPolynomial::from_letter(Letter l, cplx coeff) {
  return from_word(AlgebraWord{{l}}, coeff);
}

void AlgebraPolynomial::add_term(const AlgebraWord& w, cplx coeff) {
  if (coeff == cplx{}) return;
  auto [it, inserted] = terms_.try_emplace(w, coeff);
  if (!inserted) {
    it->second += coeff;
    if (it->second == cplx{}) terms_.erase(it);
  }
}

AlgebraPolynomial& AlgebraPolynomial::operator+=(const AlgebraPolynomial& other) {
  for (const auto& [w, c] : other.terms_) add_term(w, c);
  return *this;
}

AlgebraPolynomial& AlgebraPolynomial::operator-=(const AlgebraPolynomial& other) {
  for (const auto& [w, c] : other.terms_) add_term(w, -c);
  return *this;
}

AlgebraPolynomial& AlgebraPolynomial::operator*=(cplx scale) {
  if (scale == cplx{}) {
    terms_.clear();
    return *this;
  }
  for (auto& [w, c] : terms_) c *= scale;
  // Scaling by a nonzero factor cannot zero out an IEEE value other than by
  // underflow; prune those anyway to keep the invariant.
  for (auto it = terms_.begin(); it != terms_.end();) {
    it = (it->second == cplx{}) ? terms_.erase(it) : std::next(it);
  }
  return *this;
}

GroupElement GroupElement::shift(int power) { return GroupElement{Shift{power}}; }

GroupElement GroupElement::permutation(std::map<int, int> images) {
  std::set<int> keys, values;
  for (const auto& [k, v] : images) {
    keys.insert(k);
    if (!values.insert(v).second) {
      throw InvalidParameter("permutation images are not distinct");
    }
  }
  if (keys != values) {
    throw InvalidParameter(
        "permutation must map its listed indices onto themselves");
  }
  // Listed fixed points are legal but redundant; drop them.
  for (auto it = images.begin(); it != images.end();) {
    it = (it->first == it->second) ? images.erase(it) : std::next(it);
  }
  return GroupElement{Permutation{std::move(images)}};
}

GroupElement GroupElement::transposition(int a, int b) {
  if (a == b) return identity();
  return permutation({{a, b}, {b, a}});
}

GroupElement GroupElement::cycle(const std::vector<int>& orbit) {
  std::map<int, int> images;
  for (std::size_t i = 0; i < orbit.size(); ++i) {
    images[orbit[i]] = orbit[(i + 1) % orbit.size()];
  }
  if (images.size() != orbit.size()) {
    throw InvalidParameter("cycle entries must be distinct");
  }
  return permutation(std::move(images));
}

bool GroupElement::is_identity() const {
  if (const auto* s = std::get_if<Shift>(&action_)) return s->power == 0;
  return std::get<Permutation>(action_).images.empty();
}

int GroupElement::operator()(int mode) const {
  if (const auto* s = std::get_if<Shift>(&action_)) return mode + s->power;
  const auto& images = std::get<Permutation>(action_).images;
  auto it = images.find(mode);
  return it == images.end() ? mode : it->second;
}

GroupElement GroupElement::inverse() const {
  if (const auto* s = std::get_if<Shift>(&action_)) return shift(-s->power);
  std::map<int, int> inv;
  for (const auto& [k, v] : std::get<Permutation>(action_).images) inv[v] = k;
  return permutation(std::move(inv));
}

GroupElement compose(const GroupElement& g, const GroupElement& h) {
  if (g.is_shift() && h.is_shift()) {
    return GroupElement::shift(std::get<GroupElement::Shift>(g.action()).power +
                               std::get<GroupElement::Shift>(h.action()).power);
  }
  if (g.is_permutation() && h.is_permutation()) {
    const auto& gi = std::get<GroupElement::Permutation>(g.action()).images;
    const auto& hi = std::get<GroupElement::Permutation>(h.action()).images;
    std::map<int, int> images;
    std::set<int> domain;
    for (const auto& [k, v] : gi) domain.insert(k);
    for (const auto& [k, v] : hi) domain.insert(k);
    for (int k : domain) images[k] = g(h(k));
    return GroupElement::permutation(std::move(images));
  }
  throw InvalidParameter("cannot compose a shift with a permutation");
}

AlgebraWord star(const AlgebraWord& w) {
  std::vector<Letter> out;
  out.reserve(w.letters.size());
  for (auto it = w.letters.rbegin(); it != w.letters.rend(); ++it) {
    out.push_back(star(*it));
  }
  return AlgebraWord{std::move(out)};
}

AlgebraPolynomial star(const AlgebraPolynomial& p) {
  AlgebraPolynomial out;
  for (const auto& [w, c] : p.terms()) out.add_term(star(w), std::conj(c));
  return out;
}

AlgebraWord act(const GroupElement& g, const AlgebraWord& w) {
  std::vector<Letter> out;
  out.reserve(w.letters.size());
  for (const Letter& l : w.letters) out.push_back({g(l.mode), l.kind});
  return AlgebraWord{std::move(out)};
}

AlgebraPolynomial act(const GroupElement& g, const AlgebraPolynomial& p) {
  AlgebraPolynomial out;
  for (const auto& [w, c] : p.terms()) out.add_term(act(g, w), c);
  return out;
}

AlgebraPolynomial multiply(const AlgebraPolynomial& p, const AlgebraPolynomial& q) {
  AlgebraPolynomial out;
  for (const auto& [wp, cp] : p.terms()) {
    for (const auto& [wq, cq] : q.terms()) {
      std::vector<Letter> letters = wp.letters;
      letters.insert(letters.end(), wq.letters.begin(), wq.letters.end());
      out.add_term(AlgebraWord{std::move(letters)}, cp * cq);
    }
  }
  return out;
}

std::set<int> support(const AlgebraPolynomial& p) {
  std::set<int> modes;
  for (const auto& [w, c] : p.terms()) {
    for (const Letter& l : w.letters) modes.insert(l.mode);
  }
  return modes;
}

std::string print_word(const AlgebraWord& w) {
  if (w.empty()) return "1";
  std::string out;
  for (std::size_t i = 0; i < w.letters.size(); ++i) {
    if (i) out += " ";
    const Letter& l = w.letters[i];
    out += (l.kind == LetterKind::Creator ? "ad(" : "a(") + std::to_string(l.mode) + ")";
  }
  return out;
}

namespace {

bool coefficient_prints_negative(cplx c) {
  return c.real() < 0.0 || (c.real() == 0.0 && c.imag() < 0.0);
}

struct Tokenizer {
  const std::string& text;
  std::size_t pos = 0;

  void skip_ws() {
    while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
  }
  bool done() {
    skip_ws();
    return pos >= text.size();
  }
  char peek() {
    skip_ws();
    return pos < text.size() ? text[pos] : '\0';
  }
  bool consume(char c) {
    skip_ws();
    if (pos < text.size() && text[pos] == c) {
      ++pos;
      return true;
    }
    return false;
  }
  bool try_keyword(const std::string& kw) {
    skip_ws();
    if (text.compare(pos, kw.size(), kw) == 0) {
      pos += kw.size();
      return true;
    }
    return false;
  }
  int parse_int() {
    skip_ws();
    std::size_t start = pos;
    if (pos < text.size() && (text[pos] == '-' || text[pos] == '+')) ++pos;
    while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) ++pos;
    if (pos == start) throw ParseError("expected integer at position " + std::to_string(start));
    return std::stoi(text.substr(start, pos - start));
  }
  double parse_double() {
    skip_ws();
    const char* begin = text.c_str() + pos;
    char* end = nullptr;
    double v = std::strtod(begin, &end);
    if (end == begin) throw ParseError("expected number at position " + std::to_string(pos));
    pos += static_cast<std::size_t>(end - begin);
    return v;
  }
  bool at_number() {
    skip_ws();
    if (pos >= text.size()) return false;
    char c = text[pos];
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return true;
    if ((c == '+' || c == '-') && pos + 1 < text.size()) {
      char n = text[pos + 1];
      return std::isdigit(static_cast<unsigned char>(n)) || n == '.';
    }
    return false;
  }
};

// coefficient := double [('+'|'-') double 'j']
cplx parse_coefficient(Tokenizer& tk) {
  double re = tk.parse_double();
  std::size_t save = tk.pos;
  tk.skip_ws();
  if (tk.pos < tk.text.size() && (tk.text[tk.pos] == '+' || tk.text[tk.pos] == '-')) {
    char sign = tk.text[tk.pos];
    ++tk.pos;
    tk.skip_ws();
    std::size_t num_start = tk.pos;
    if (num_start < tk.text.size() &&
        (std::isdigit(static_cast<unsigned char>(tk.text[num_start])) ||
         tk.text[num_start] == '.')) {
      double im = tk.parse_double();
      if (tk.pos < tk.text.size() && tk.text[tk.pos] == 'j') {
        ++tk.pos;
        return {re, sign == '-' ? -im : im};
      }
    }
  }
  tk.pos = save;
  return {re, 0.0};
}

// letter := ('ad' | 'a') '(' int ')'
bool try_parse_letter(Tokenizer& tk, Letter& out) {
  tk.skip_ws();
  std::size_t save = tk.pos;
  LetterKind kind;
  if (tk.try_keyword("ad")) {
    kind = LetterKind::Creator;
  } else if (tk.try_keyword("a")) {
    kind = LetterKind::Annihilator;
  } else {
    return false;
  }
  if (!tk.consume('(')) {
    tk.pos = save;
    return false;
  }
  int mode = tk.parse_int();
  if (!tk.consume(')')) throw ParseError("expected ')' in letter");
  out = {mode, kind};
  return true;
}

}  // namespace

std::string print_polynomial(const AlgebraPolynomial& p) {
  if (p.is_zero()) return "0";
  std::string out;
  bool first = true;
  for (const auto& [w, c] : p.terms()) {
    cplx coeff = c;
    if (first) {
      if (coefficient_prints_negative(coeff)) {
        out += "-";
        coeff = -coeff;
      }
    } else {
      if (coefficient_prints_negative(coeff)) {
        out += " - ";
        coeff = -coeff;
      } else {
        out += " + ";
      }
    }
    out += fmt_complex(coeff) + " * " + print_word(w);
    first = false;
  }
  return out;
}

AlgebraPolynomial parse_polynomial(const std::string& text) {
  Tokenizer tk{text};
  AlgebraPolynomial result;
  if (tk.done()) throw ParseError("empty polynomial text");
  {
    std::size_t save = tk.pos;
    if (tk.try_keyword("0") && tk.done()) return result;
    tk.pos = save;
  }
  bool negative = tk.consume('-');
  if (!negative) tk.consume('+');

  while (true) {
    cplx coeff{1.0, 0.0};
    bool have_coeff = false;
    if (tk.at_number()) {
      coeff = parse_coefficient(tk);
      have_coeff = true;
    }
    std::vector<Letter> letters;
    bool expect_letters = !have_coeff;
    if (have_coeff) expect_letters = tk.consume('*');
    if (expect_letters) {
      if (tk.try_keyword("1")) {
        // unit word
      } else {
        Letter l;
        if (!try_parse_letter(tk, l)) throw ParseError("expected word after coefficient");
        letters.push_back(l);
        while (try_parse_letter(tk, l)) letters.push_back(l);
      }
    }
    if (negative) coeff = -coeff;
    result.add_term(AlgebraWord{std::move(letters)}, coeff);

    if (tk.done()) break;
    if (tk.consume('+')) {
      negative = false;
    } else if (tk.consume('-')) {
      negative = true;
    } else {
      throw ParseError("unexpected token at position " + std::to_string(tk.pos));
    }
  }
  return result;
}

}  // namespace ncprob
