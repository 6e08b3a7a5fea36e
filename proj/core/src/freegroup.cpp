#include "ncprob/freegroup.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cctype>
#include <cmath>
#include <limits>

#include "ncprob/io.hpp"

namespace ncprob {

GroupWord reduce(std::vector<GroupLetter> letters) {
  std::vector<GroupLetter> stack;
  stack.reserve(letters.size());
  for (const GroupLetter& l : letters) {
    if (l.exponent != 1 && l.exponent != -1) {
      throw InvalidParameter("group letter exponent must be +1 or -1");
    }
    if (!stack.empty() && stack.back().generator == l.generator &&
        stack.back().exponent == -l.exponent) {
      stack.pop_back();
    } else {
      stack.push_back(l);
    }
  }
  return GroupWord{std::move(stack)};
}

GroupWord inverse(const GroupWord& w) {
  std::vector<GroupLetter> letters;
  letters.reserve(w.letters.size());
  for (auto it = w.letters.rbegin(); it != w.letters.rend(); ++it) {
    letters.push_back({it->generator, -it->exponent});
  }
  return GroupWord{std::move(letters)};  // already reduced
}

GroupWord multiply(const GroupWord& v, const GroupWord& w) {
  std::vector<GroupLetter> letters = v.letters;
  letters.insert(letters.end(), w.letters.begin(), w.letters.end());
  return reduce(std::move(letters));
}

std::set<int> support(const GroupWord& w) {
  std::set<int> gens;
  for (const GroupLetter& l : w.letters) gens.insert(l.generator);
  return gens;
}

GroupWord act(const GroupElement& g, const GroupWord& w) {
  std::vector<GroupLetter> letters;
  letters.reserve(w.letters.size());
  for (const GroupLetter& l : w.letters) letters.push_back({g(l.generator), l.exponent});
  return GroupWord{std::move(letters)};  // injective relabeling keeps reducedness
}

GroupAlgebraElement GroupAlgebraElement::from_word(GroupWord w, cplx coeff) {
  GroupAlgebraElement x;
  x.add_term(w, coeff);
  return x;
}

void GroupAlgebraElement::add_term(const GroupWord& w, cplx coeff) {
  if (coeff == cplx{}) return;
  auto [it, inserted] = terms_.try_emplace(w, coeff);
  if (!inserted) {
    it->second += coeff;
    if (it->second == cplx{}) terms_.erase(it);
  }
}

namespace {

void validate_lambda(double lambda) {
  if (std::isnan(lambda) || lambda <= 0.0) {
    throw LambdaOutOfRange("lambda must lie in (0, +inf], got " + fmt_double(lambda));
  }
}

}  // namespace

double haagerup(double lambda, const GroupWord& w) {
  validate_lambda(lambda);
  if (std::isinf(lambda)) return w.is_identity() ? 1.0 : 0.0;  // tracial limit
  return std::exp(-lambda * static_cast<double>(w.length()));
}

cplx haagerup(double lambda, const GroupAlgebraElement& x) {
  validate_lambda(lambda);
  cplx sum{};
  for (const auto& [w, c] : x.terms()) sum += c * haagerup(lambda, w);
  return sum;
}

ProductStateReport product_state_check(double lambda, const GroupWord& v,
                                       const GroupWord& w) {
  validate_lambda(lambda);
  ProductStateReport report;
  const std::set<int> sv = support(v);
  const std::set<int> sw = support(w);
  report.supports_disjoint =
      std::none_of(sv.begin(), sv.end(), [&](int g) { return sw.count(g) > 0; });
  const GroupWord vw = multiply(v, w);
  report.lhs = haagerup(lambda, vw);
  report.rhs = haagerup(lambda, v) * haagerup(lambda, w);
  report.equal = vw.length() == v.length() + w.length();
  return report;
}

BlockSingletonReport block_singleton_check(double lambda, const GroupWord& u,
                                           const GroupWord& v, const GroupWord& w) {
  validate_lambda(lambda);
  BlockSingletonReport report;
  std::set<int> outer = support(u);
  for (int g : support(w)) outer.insert(g);
  const std::set<int> sv = support(v);
  report.supports_disjoint =
      std::none_of(sv.begin(), sv.end(), [&](int g) { return outer.count(g) > 0; });
  const GroupWord uvw = multiply(multiply(u, v), w);
  const GroupWord uw = multiply(u, w);
  report.lhs = haagerup(lambda, uvw);
  report.rhs = haagerup(lambda, uw) * haagerup(lambda, v);
  report.equal = uvw.length() == uw.length() + v.length();
  return report;
}

double haagerup_positivity_probe(double lambda, const std::vector<GroupWord>& words) {
  validate_lambda(lambda);
  const std::size_t n = words.size();
  if (n == 0) throw InvalidParameter("positivity probe needs at least one word");
  Eigen::MatrixXd gram(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    const GroupWord vi_inv = inverse(words[i]);
    for (std::size_t j = 0; j < n; ++j) {
      gram(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
          haagerup(lambda, multiply(vi_inv, words[j]));
    }
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(gram, Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

bool haagerup_symmetry_check(double lambda, const GroupWord& w, const GroupElement& g) {
  return haagerup(lambda, act(g, w)) == haagerup(lambda, w);
}

std::string print_group_word(const GroupWord& w) {
  if (w.is_identity()) return "e";
  std::string out;
  for (std::size_t i = 0; i < w.letters.size(); ++i) {
    if (i) out += " ";
    out += "g" + std::to_string(w.letters[i].generator);
    if (w.letters[i].exponent == -1) out += "^-1";
  }
  return out;
}

GroupWord parse_group_word(const std::string& text) {
  std::vector<GroupLetter> letters;
  std::size_t pos = 0;
  auto skip_ws = [&] {
    while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
  };
  skip_ws();
  if (pos < text.size() && text[pos] == 'e') {
    ++pos;
    skip_ws();
    if (pos != text.size()) throw ParseError("unexpected text after identity word");
    return GroupWord{};
  }
  while (pos < text.size()) {
    skip_ws();
    if (pos >= text.size()) break;
    if (text[pos] != 'g') throw ParseError("expected generator token at position " +
                                           std::to_string(pos));
    ++pos;
    std::size_t start = pos;
    if (pos < text.size() && (text[pos] == '-' || text[pos] == '+')) ++pos;
    while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) ++pos;
    if (pos == start) throw ParseError("expected generator index");
    const int gen = std::stoi(text.substr(start, pos - start));
    int exponent = 1;
    if (pos < text.size() && text[pos] == '^') {
      ++pos;
      std::size_t estart = pos;
      if (pos < text.size() && (text[pos] == '-' || text[pos] == '+')) ++pos;
      while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) ++pos;
      if (pos == estart) throw ParseError("expected exponent after '^'");
      exponent = std::stoi(text.substr(estart, pos - estart));
      if (exponent != 1 && exponent != -1) {
        throw ParseError("exponent must be +1 or -1; repeat letters instead");
      }
    }
    letters.push_back({gen, exponent});
  }
  // Free reduction is idempotent, so parse/print round-trips on any input.
  return reduce(std::move(letters));
}

}  // namespace ncprob
