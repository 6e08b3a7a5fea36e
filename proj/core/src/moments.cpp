#include "ncprob/moments.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

#include "ncprob/io.hpp"

namespace ncprob {

SampleAlphabet SampleAlphabet::fock() {
  SampleAlphabet a;
  a.base_ = {"1", "a", "ad", "x"};
  a.star_of_ = {{"1", "1"}, {"a", "ad"}, {"ad", "a"}, {"x", "x"}};
  return a;
}

SampleAlphabet SampleAlphabet::group() {
  SampleAlphabet a;
  a.base_ = {"1", "g", "g^-1"};
  a.star_of_ = {{"1", "1"}, {"g", "g^-1"}, {"g^-1", "g"}};
  return a;
}

std::vector<std::string> SampleAlphabet::split_composite(const std::string& label) {
  std::vector<std::string> parts;
  std::string current;
  for (char ch : label) {
    if (ch == '*') {
      parts.push_back(current);
      current.clear();
    } else {
      current.push_back(ch);
    }
  }
  parts.push_back(current);
  return parts;
}

std::string SampleAlphabet::join_composite(const std::vector<std::string>& parts) {
  std::string out;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (i) out += "*";
    out += parts[i];
  }
  return out;
}

bool SampleAlphabet::valid(const std::string& label) const {
  if (label.empty()) return false;
  for (const std::string& part : split_composite(label)) {
    if (star_of_.find(part) == star_of_.end()) return false;
  }
  return true;
}

std::string SampleAlphabet::star(const std::string& label) const {
  std::vector<std::string> parts = split_composite(label);
  std::vector<std::string> starred;
  starred.reserve(parts.size());
  for (auto it = parts.rbegin(); it != parts.rend(); ++it) {
    auto found = star_of_.find(*it);
    if (found == star_of_.end()) throw UnknownLabel("label '" + *it + "' not in alphabet");
    starred.push_back(found->second);
  }
  return join_composite(starred);
}

void validate_key(const MomentKey& key, const SampleAlphabet& alphabet) {
  if (key.indices.size() != key.labels.size()) {
    throw InvalidParameter("index and label tuples must have equal length");
  }
  for (std::size_t i = 0; i + 1 < key.indices.size(); ++i) {
    if (key.indices[i] == key.indices[i + 1]) {
      throw InvalidParameter("contiguous key indices must differ");
    }
  }
  for (const std::string& label : key.labels) {
    if (!alphabet.valid(label)) throw UnknownLabel("label '" + label + "' not in alphabet");
  }
}

MomentKey star_key(const MomentKey& key, const SampleAlphabet& alphabet) {
  MomentKey out;
  out.indices.assign(key.indices.rbegin(), key.indices.rend());
  for (auto it = key.labels.rbegin(); it != key.labels.rend(); ++it) {
    out.labels.push_back(alphabet.star(*it));
  }
  return out;
}

MomentTable::MomentTable(SampleAlphabet alphabet, EngineBinding binding)
    : alphabet_(std::move(alphabet)), binding_(std::move(binding)) {
  if (const auto* b = std::get_if<BooleanBinding>(&*binding_)) {
    if (b->basis == nullptr) throw InvalidParameter("Boolean binding needs a basis");
    if (!(b->gamma >= 0.0 && b->gamma <= 1.0)) throw GammaOutOfRange("gamma in [0,1]");
  } else if (const auto* qb = std::get_if<QBinding>(&*binding_)) {
    if (qb->basis == nullptr) throw InvalidParameter("q binding needs a basis");
    validate_q(qb->q);
  } else if (const auto* m = std::get_if<MonotoneBinding>(&*binding_)) {
    if (!(m->gamma >= 0.0 && m->gamma <= 1.0)) throw GammaOutOfRange("gamma in [0,1]");
  } else if (const auto* h = std::get_if<HaagerupBinding>(&*binding_)) {
    if (std::isnan(h->lambda) || h->lambda <= 0.0) {
      throw LambdaOutOfRange("lambda in (0, +inf]");
    }
  }
}

MomentTable::MomentTable(SampleAlphabet alphabet, std::map<MomentKey, cplx> entries)
    : alphabet_(std::move(alphabet)), entries_(std::move(entries)) {
  for (const auto& [key, value] : entries_) validate_key(key, alphabet_);
}

std::string MomentTable::engine_name() const {
  if (!binding_) return "table";
  if (std::holds_alternative<QBinding>(*binding_)) return "q";
  if (std::holds_alternative<BooleanBinding>(*binding_)) return "boolean";
  if (std::holds_alternative<MonotoneBinding>(*binding_)) return "monotone";
  return "haagerup";
}

double MomentTable::exact_tolerance() const {
  return binding_ && std::holds_alternative<QBinding>(*binding_) ? 1e-13 : 0.0;
}

namespace {

AlgebraPolynomial fock_slot_polynomial(const std::string& label, int index) {
  AlgebraPolynomial slot = AlgebraPolynomial::unit();
  for (const std::string& part : SampleAlphabet::split_composite(label)) {
    AlgebraPolynomial factor;
    if (part == "1") {
      factor = AlgebraPolynomial::unit();
    } else if (part == "a") {
      factor = AlgebraPolynomial::from_letter(annihilator(index));
    } else if (part == "ad") {
      factor = AlgebraPolynomial::from_letter(creator(index));
    } else if (part == "x") {
      factor = AlgebraPolynomial::from_letter(annihilator(index));
      factor += AlgebraPolynomial::from_letter(creator(index));
    } else {
      throw UnknownLabel("label '" + part + "' not in the Fock alphabet");
    }
    slot = multiply(slot, factor);
  }
  return slot;
}

AlgebraPolynomial fock_key_polynomial(const MomentKey& key) {
  AlgebraPolynomial p = AlgebraPolynomial::unit();
  for (std::size_t i = 0; i < key.indices.size(); ++i) {
    p = multiply(p, fock_slot_polynomial(key.labels[i], key.indices[i]));
  }
  return p;
}

GroupWord group_key_word(const MomentKey& key) {
  std::vector<GroupLetter> letters;
  for (std::size_t i = 0; i < key.indices.size(); ++i) {
    for (const std::string& part : SampleAlphabet::split_composite(key.labels[i])) {
      if (part == "1") continue;
      if (part == "g") {
        letters.push_back({key.indices[i], 1});
      } else if (part == "g^-1") {
        letters.push_back({key.indices[i], -1});
      } else {
        throw UnknownLabel("label '" + part + "' not in the group alphabet");
      }
    }
  }
  return reduce(std::move(letters));
}

}  // namespace

cplx MomentTable::evaluate(const MomentKey& key) const {
  validate_key(key, alphabet_);
  if (!binding_) {
    auto it = entries_.find(key);
    if (it == entries_.end()) {
      throw KeyConcatenationInvalid("key not present in the stored table");
    }
    return it->second;
  }
  if (const auto* qb = std::get_if<QBinding>(&*binding_)) {
    const AlgebraPolynomial p = fock_key_polynomial(key);
    for (int mode : support(p)) {
      if (!qb->basis->window().contains(mode)) {
        throw WindowTooSmall("key index " + std::to_string(mode) + " outside the window");
      }
    }
    SparseVec vac{{0, 1.0}};
    const SparseVec image = apply_polynomial(p, *qb->basis, qb->q, vac);
    auto it = image.find(0);
    return it == image.end() ? cplx{} : it->second;
  }
  if (const auto* bb = std::get_if<BooleanBinding>(&*binding_)) {
    const AlgebraPolynomial p = fock_key_polynomial(key);
    for (int mode : support(p)) {
      if (!bb->basis->window().contains(mode)) {
        throw WindowTooSmall("key index " + std::to_string(mode) + " outside the window");
      }
    }
    return boolean_segment_value(bb->gamma, *bb->basis, p);
  }
  if (const auto* mb = std::get_if<MonotoneBinding>(&*binding_)) {
    return MonotoneState(mb->gamma)(fock_key_polynomial(key));
  }
  const auto& hb = std::get<HaagerupBinding>(*binding_);
  return haagerup(hb.lambda, group_key_word(key));
}

std::string MomentTable::to_csv() const {
  std::string out = "indices;labels;re;im\n";
  for (const auto& [key, value] : entries_) {
    std::string idx, lab;
    for (std::size_t i = 0; i < key.indices.size(); ++i) {
      if (i) {
        idx += ",";
        lab += ",";
      }
      idx += std::to_string(key.indices[i]);
      lab += key.labels[i];
    }
    out += idx + ";" + lab + ";" + fmt_double(value.real()) + ";" +
           fmt_double(value.imag()) + "\n";
  }
  return out;
}

MomentTable MomentTable::from_csv(SampleAlphabet alphabet, const std::string& text) {
  std::map<MomentKey, cplx> entries;
  std::istringstream in(text);
  std::string line;
  bool first = true;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (first) {
      first = false;
      if (line == "indices;labels;re;im") continue;
    }
    std::vector<std::string> fields;
    std::string field;
    std::istringstream ls(line);
    while (std::getline(ls, field, ';')) fields.push_back(field);
    if (fields.size() != 4) throw ParseError("moment CSV row needs 4 fields: " + line);
    MomentKey key;
    if (!fields[0].empty()) {
      std::istringstream is(fields[0]);
      std::string tok;
      while (std::getline(is, tok, ',')) key.indices.push_back(std::stoi(tok));
    }
    if (!fields[1].empty()) {
      std::istringstream ll(fields[1]);
      std::string tok;
      while (std::getline(ll, tok, ',')) key.labels.push_back(tok);
    }
    entries[key] = {std::stod(fields[2]), std::stod(fields[3])};
  }
  return MomentTable(std::move(alphabet), std::move(entries));
}

namespace {

/// star(half_a) . half_b with the junction fused when indices collide.
MomentKey concatenate_halves(const MomentKey& half_a, const MomentKey& half_b,
                             const SampleAlphabet& alphabet) {
  MomentKey left = star_key(half_a, alphabet);
  MomentKey out = left;
  std::size_t start = 0;
  if (!out.indices.empty() && !half_b.indices.empty() &&
      out.indices.back() == half_b.indices.front()) {
    out.labels.back() =
        SampleAlphabet::join_composite({out.labels.back(), half_b.labels.front()});
    start = 1;
  }
  for (std::size_t i = start; i < half_b.indices.size(); ++i) {
    out.indices.push_back(half_b.indices[i]);
    out.labels.push_back(half_b.labels[i]);
  }
  return out;
}

}  // namespace

double positivity_check(const MomentTable& table, const std::vector<MomentKey>& half_keys) {
  const std::size_t n = half_keys.size();
  if (n == 0) throw InvalidParameter("positivity check needs at least one half key");
  Eigen::MatrixXcd gram(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      const MomentKey key = concatenate_halves(half_keys[i], half_keys[j],
                                               table.alphabet());
      try {
        validate_key(key, table.alphabet());
      } catch (const InvalidParameter& e) {
        throw KeyConcatenationInvalid(e.what());
      }
      gram(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
          table.evaluate(key);
    }
  }
  const Eigen::MatrixXcd hermitian = 0.5 * (gram + gram.adjoint());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(hermitian, Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

ConsistencyReport consistency_check(const MomentTable& table, const MomentKey& key,
                                    std::size_t position) {
  validate_key(key, table.alphabet());
  if (position >= key.labels.size()) throw InvalidParameter("position out of range");
  if (key.labels[position] != "1") {
    throw InvalidParameter("consistency check needs the unit label at the position");
  }
  ConsistencyReport report;
  report.with_unit = table.evaluate(key);

  MomentKey reduced;
  reduced.indices.reserve(key.indices.size() - 1);
  for (std::size_t i = 0; i < key.indices.size(); ++i) {
    if (i == position) continue;
    if (!reduced.indices.empty() && reduced.indices.back() == key.indices[i]) {
      // Neighbours collided after the unit slot went away: labels multiply
      // inside the single remaining slot.
      reduced.labels.back() =
          SampleAlphabet::join_composite({reduced.labels.back(), key.labels[i]});
    } else {
      reduced.indices.push_back(key.indices[i]);
      reduced.labels.push_back(key.labels[i]);
    }
  }
  report.reduced_key = reduced;
  report.without_unit = table.evaluate(reduced);
  report.equal = report.with_unit == report.without_unit;
  return report;
}

namespace {

SymmetryReport relabeling_check(const MomentTable& table, const std::vector<MomentKey>& keys,
                                const std::vector<GroupElement>& elements) {
  SymmetryReport report;
  for (const MomentKey& key : keys) {
    const cplx base = table.evaluate(key);
    for (const GroupElement& g : elements) {
      MomentKey moved = key;
      for (int& index : moved.indices) index = g(index);
      const double dev = std::abs(table.evaluate(moved) - base);
      report.max_deviation = std::max(report.max_deviation, dev);
    }
  }
  report.passed = report.max_deviation <= table.exact_tolerance();
  return report;
}

}  // namespace

SymmetryReport exchangeability_check(const MomentTable& table,
                                     const std::vector<MomentKey>& keys,
                                     const std::vector<GroupElement>& permutations) {
  for (const GroupElement& g : permutations) {
    if (!g.is_permutation()) {
      throw InvalidParameter("exchangeability check takes permutations");
    }
  }
  return relabeling_check(table, keys, permutations);
}

SymmetryReport stationarity_check(const MomentTable& table,
                                  const std::vector<MomentKey>& keys,
                                  const std::vector<int>& shift_powers) {
  std::vector<GroupElement> shifts;
  shifts.reserve(shift_powers.size());
  for (int power : shift_powers) shifts.push_back(GroupElement::shift(power));
  return relabeling_check(table, keys, shifts);
}

SymshReport symsh_verification(const MomentTable& table, const std::vector<MomentKey>& keys,
                               const std::vector<int>& shift_powers) {
  std::set<int> index_pool;
  for (const MomentKey& key : keys) index_pool.insert(key.indices.begin(), key.indices.end());
  std::vector<int> indices(index_pool.begin(), index_pool.end());

  std::vector<GroupElement> family;
  for (std::size_t i = 0; i + 1 < indices.size(); ++i) {
    family.push_back(GroupElement::transposition(indices[i], indices[i + 1]));
  }
  if (indices.size() >= 2) family.push_back(GroupElement::cycle(indices));

  SymshReport report;
  const SymmetryReport exchange = exchangeability_check(table, keys, family);
  report.hypothesis_met = exchange.passed;
  report.exchange_deviation = exchange.max_deviation;
  if (!report.hypothesis_met) return report;

  const SymmetryReport shift = stationarity_check(table, keys, shift_powers);
  report.stationary = shift.passed;
  report.shift_deviation = shift.max_deviation;
  return report;
}

}  // namespace ncprob
