// Experiment runner for the q-deformed / Boolean / monotone Fock engines and
// the free-group Haagerup states. Subcommands emit CSV artifacts and verdict
// tables; exit code 0 means every assertion passed, 1 an assertion failed,
// 2 a configuration error.

#include <CLI11.hpp>

#include <complex>
#include <cstdio>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "ncprob/acceptance.hpp"
#include "ncprob/algebra.hpp"
#include "ncprob/boolean.hpp"
#include "ncprob/ergodics.hpp"
#include "ncprob/errors.hpp"
#include "ncprob/freegroup.hpp"
#include "ncprob/io.hpp"
#include "ncprob/moments.hpp"
#include "ncprob/monotone.hpp"
#include "ncprob/qfock.hpp"

namespace {

using namespace ncprob;

constexpr int kExitPass = 0;
constexpr int kExitAssertionFailed = 1;
constexpr int kExitConfigError = 2;

ModeWindow parse_window(const std::string& text) {
  const auto colon = text.find(':');
  if (colon == std::string::npos) {
    throw InvalidParameter("window must be lo:hi, got '" + text + "'");
  }
  return ModeWindow(std::stoi(text.substr(0, colon)), std::stoi(text.substr(colon + 1)));
}

std::vector<int> parse_int_list(const std::string& text) {
  std::vector<int> out;
  std::istringstream in(text);
  std::string tok;
  while (std::getline(in, tok, ',')) {
    if (!tok.empty()) out.push_back(std::stoi(tok));
  }
  if (out.empty()) throw InvalidParameter("empty integer list");
  return out;
}

// "0,1:x,x;1,0:x,x" -> keys
std::vector<MomentKey> parse_keys(const std::string& text) {
  std::vector<MomentKey> keys;
  std::istringstream in(text);
  std::string item;
  while (std::getline(in, item, ';')) {
    if (item.empty()) continue;
    const auto colon = item.find(':');
    if (colon == std::string::npos) {
      throw InvalidParameter("key must be indices:labels, got '" + item + "'");
    }
    MomentKey key;
    key.indices = parse_int_list(item.substr(0, colon));
    std::istringstream ls(item.substr(colon + 1));
    std::string label;
    while (std::getline(ls, label, ',')) key.labels.push_back(label);
    keys.push_back(std::move(key));
  }
  if (keys.empty()) throw InvalidParameter("no keys given");
  return keys;
}

SparseVec parse_basis_vector(const std::string& text, const BooleanBasis& basis) {
  // "e5" -> basis vector at mode 5; "e#" -> the vacuum.
  if (text.size() < 2 || text[0] != 'e') {
    throw InvalidParameter("vector must be e<mode> or e#, got '" + text + "'");
  }
  if (text == "e#") return SparseVec{{BooleanBasis::vacuum_index(), 1.0}};
  return SparseVec{{basis.index_of_mode(std::stoi(text.substr(1))), 1.0}};
}

void emit(const std::string& path, const std::string& content) {
  if (path.empty()) {
    std::fputs(content.c_str(), stdout);
  } else {
    atomic_write_file(path, content);
  }
}

int run_relations(const std::string& engine, double q, const std::string& window_text,
                  int depth, const std::string& out) {
  const ModeWindow window = parse_window(window_text);
  std::vector<Verdict> verdicts;
  if (engine == "q") {
    const QFockBasis basis(window, depth);
    const QGram gram(basis, q);
    double worst_rel = 0.0, worst_adj = 0.0;
    for (int i = window.lo; i <= window.hi; ++i) {
      for (int j = window.lo; j <= window.hi; ++j) {
        worst_rel = std::max(worst_rel, check_q_relation(basis, q, i, j).interior_defect);
      }
      worst_adj = std::max(worst_adj, check_q_adjointness(basis, gram, i));
    }
    const std::string params = "q=" + fmt_double(q) + ";window=" + window_text +
                               ";depth=" + std::to_string(depth);
    verdicts.push_back({"q-relation", "q", params, worst_rel, 1e-12, worst_rel < 1e-12});
    verdicts.push_back(
        {"q-adjointness", "q", params, worst_adj, 1e-10, worst_adj < 1e-10});
  } else if (engine == "monotone") {
    const MonotoneBasis basis(window);
    const MonotoneRelationReport r = check_monotone_relations(basis);
    const std::string params = "window=" + window_text;
    verdicts.push_back({"monotone-creator-pairs", "monotone", params,
                        r.creator_pair_defect, 0.0, r.creator_pair_defect == 0.0});
    verdicts.push_back({"monotone-annihilator-pairs", "monotone", params,
                        r.annihilator_pair_defect, 0.0, r.annihilator_pair_defect == 0.0});
    verdicts.push_back({"monotone-mixed-pairs", "monotone", params, r.mixed_defect, 0.0,
                        r.mixed_defect == 0.0});
    verdicts.push_back({"monotone-completeness", "monotone", params,
                        r.completeness_defect, 0.0, r.completeness_defect == 0.0});
  } else if (engine == "boolean") {
    const BooleanBasis basis(window);
    double worst = 0.0;
    for (int i = window.lo; i <= window.hi; ++i) {
      for (int j = window.lo; j <= window.hi; ++j) {
        const SparseOperator left = b_annihilator(basis, i) * b_creator(basis, j);
        SparseOperator expected(basis.size());
        if (i == j) expected.add_at(0, 0, 1.0);
        worst = std::max(worst, max_abs_diff(left, expected));
        const SparseOperator right = b_creator(basis, i) * b_annihilator(basis, j);
        SparseOperator unit(basis.size());
        unit.add_at(basis.index_of_mode(i), basis.index_of_mode(j), 1.0);
        worst = std::max(worst, max_abs_diff(right, unit));
      }
    }
    verdicts.push_back({"boolean-matrix-units", "boolean", "window=" + window_text, worst,
                        0.0, worst == 0.0});
  } else {
    throw InvalidParameter("unknown engine '" + engine + "'");
  }
  emit(out, verdicts_to_csv(verdicts));
  for (const Verdict& v : verdicts) {
    if (!v.pass) return kExitAssertionFailed;
  }
  return kExitPass;
}

int run_normalform(const std::string& word_text, const std::string& window_text,
                   bool flatten) {
  const AlgebraPolynomial p = parse_polynomial(word_text);
  const NormalForm nf = normalize(p);
  std::cout << "normal_form: " << print_normal_form(nf) << "\n";

  ModeWindow window(0, 0);
  const std::set<int> modes = support(p);
  if (!window_text.empty()) {
    window = parse_window(window_text);
  } else if (!modes.empty()) {
    window = ModeWindow(*modes.begin() - 1, *modes.rbegin() + 1);
  }
  if (!modes.empty()) {
    const double defect = normal_form_oracle_check(p, window);
    std::cout << "oracle_defect: " << fmt_double(defect) << "\n";
    if (!(defect < 1e-12)) return kExitAssertionFailed;
  }
  if (flatten) {
    AlgebraPolynomial lambda_only;
    for (const auto& [key, coeff] : flatten_to_lambda(nf, window)) {
      lambda_only.add_term(lambda_word(key), coeff);
    }
    std::cout << "flattened: " << print_polynomial(lambda_only) << "\n";
  }
  return kExitPass;
}

int run_ergodic(const std::string& engine, const std::string& probe, double q, double gamma,
                double lambda, const std::string& word_a, const std::string& word_b,
                const std::string& word_c, const std::string& window_text, int depth,
                const std::string& scales_text, const std::string& vector_text,
                int test_depth, const std::string& test_modes_text, std::uint64_t seed,
                int samples, const std::string& out) {
  const std::vector<int> scales = parse_int_list(scales_text);

  if (engine == "haagerup") {
    const StateFunctional state = StateFunctional::haagerup_state(lambda);
    const GroupWord a = parse_group_word(word_a);
    const GroupWord b = parse_group_word(word_b);
    ConvergenceSeries series("haagerup", lambda);
    if (probe == "clustering") {
      series = weak_clustering_probe_shift(a, b, state, scales);
    } else if (probe == "equilibrium") {
      const GroupWord c = parse_group_word(word_c);
      std::vector<std::vector<int>> sets;
      for (int s : scales) {
        std::vector<int> index_set;
        for (int v = 1; v <= s; ++v) index_set.push_back(v);
        sets.push_back(std::move(index_set));
      }
      PermutationMode mode = ExactEnumeration{};
      if (samples > 0) mode = SampledPermutations{samples, seed};
      series = equilibrium_probe_perm(a, b, c, state, sets, mode);
    } else {
      throw InvalidParameter("haagerup probes: clustering | equilibrium");
    }
    emit(out, series.to_csv());
    return kExitPass;
  }

  const ModeWindow window = parse_window(window_text);
  const AlgebraPolynomial a = parse_polynomial(word_a);

  if (engine == "q") {
    const QFockBasis basis(window, depth);
    const QGram gram(basis, q);
    const ModeWindow test_modes =
        test_modes_text.empty() ? window : parse_window(test_modes_text);
    ConvergenceSeries series("q", q);
    if (probe == "mixing") {
      series = unique_mixing_probe(a, basis, q, gram, scales, test_depth, test_modes);
    } else if (probe == "cesaro") {
      series = cesaro_deviation_series(a, basis, q, gram, scales, test_depth, test_modes);
    } else if (probe == "clustering") {
      const AlgebraPolynomial b = parse_polynomial(word_b);
      series = weak_clustering_probe_shift(a, b, StateFunctional::q_vacuum(basis, q),
                                           scales);
    } else if (probe == "equilibrium") {
      const AlgebraPolynomial b = parse_polynomial(word_b);
      const AlgebraPolynomial c = parse_polynomial(word_c);
      series = equilibrium_probe_shift(a, b, c, StateFunctional::q_vacuum(basis, q),
                                       scales);
    } else {
      throw InvalidParameter("q probes: mixing | cesaro | clustering | equilibrium");
    }
    emit(out, series.to_csv());
    return kExitPass;
  }

  if (engine == "boolean") {
    const BooleanBasis basis(window);
    if (probe == "mixing") {
      const SparseVec xi = parse_basis_vector(vector_text, basis);
      const int n_max = scales.back();
      const std::vector<double> deviations = e_mixing_experiment(a, basis, xi, n_max);
      ConvergenceSeries series("boolean", gamma);
      for (int n = 0; n <= n_max; ++n) {
        series.append(static_cast<double>(n), deviations[static_cast<std::size_t>(n)]);
      }
      emit(out, series.to_csv());
      return kExitPass;
    }
    StateFunctional state = [&]() -> StateFunctional {
      if (!vector_text.empty()) {
        VectorState vs;
        vs.rep = BooleanVectorRep{&basis};
        vs.xi = parse_basis_vector(vector_text, basis);
        return StateFunctional(std::move(vs));
      }
      return StateFunctional(SegmentState{SegmentState::Engine::Boolean, gamma, &basis});
    }();
    ConvergenceSeries series("boolean", gamma);
    if (probe == "clustering") {
      const AlgebraPolynomial b = parse_polynomial(word_b);
      series = weak_clustering_probe_shift(a, b, state, scales);
    } else if (probe == "equilibrium") {
      const AlgebraPolynomial b = parse_polynomial(word_b);
      const AlgebraPolynomial c = parse_polynomial(word_c);
      series = equilibrium_probe_shift(a, b, c, state, scales);
    } else {
      throw InvalidParameter("boolean probes: mixing | clustering | equilibrium");
    }
    emit(out, series.to_csv());
    return kExitPass;
  }

  throw InvalidParameter("unknown engine '" + engine + "'");
}

int run_haagerup(double lambda, const std::string& check, const std::string& u_text,
                 const std::string& v_text, const std::string& w_text,
                 const std::string& words_text, const std::string& out) {
  std::ostringstream report;
  int exit_code = kExitPass;
  if (check == "evaluate") {
    const GroupWord w = parse_group_word(w_text.empty() ? v_text : w_text);
    report << "word: " << print_group_word(w) << "\n";
    report << "value: " << fmt_double(haagerup(lambda, w)) << "\n";
  } else if (check == "product-state") {
    const GroupWord v = parse_group_word(v_text);
    const GroupWord w = parse_group_word(w_text);
    const ProductStateReport r = product_state_check(lambda, v, w);
    report << "lhs: " << fmt_double(r.lhs) << "\n";
    report << "rhs: " << fmt_double(r.rhs) << "\n";
    report << "supports_disjoint: " << (r.supports_disjoint ? "yes" : "no") << "\n";
    report << "verdict: " << (r.equal ? "EQUAL" : "NOT-EQUAL") << "\n";
    if (r.supports_disjoint && !r.equal) exit_code = kExitAssertionFailed;
  } else if (check == "block-singleton") {
    const GroupWord u = parse_group_word(u_text);
    const GroupWord v = parse_group_word(v_text);
    const GroupWord w = parse_group_word(w_text);
    const BlockSingletonReport r = block_singleton_check(lambda, u, v, w);
    report << "lhs: " << fmt_double(r.lhs) << "\n";
    report << "rhs: " << fmt_double(r.rhs) << "\n";
    report << "supports_disjoint: " << (r.supports_disjoint ? "yes" : "no") << "\n";
    report << "verdict: " << (r.equal ? "EQUAL" : "NOT-EQUAL") << "\n";
  } else if (check == "positivity") {
    std::vector<GroupWord> words;
    std::istringstream in(words_text);
    std::string tok;
    while (std::getline(in, tok, ';')) {
      if (!tok.empty()) words.push_back(parse_group_word(tok));
    }
    const double eig = haagerup_positivity_probe(lambda, words);
    report << "min_eigenvalue: " << fmt_double(eig) << "\n";
    if (!(eig > -1e-10)) exit_code = kExitAssertionFailed;
  } else {
    throw InvalidParameter(
        "haagerup checks: evaluate | product-state | block-singleton | positivity");
  }
  emit(out, report.str());
  return exit_code;
}

int run_moments(const std::string& engine, double q, double gamma, double lambda,
                const std::string& window_text, int depth, const std::string& keys_text,
                const std::string& check, const std::string& shifts_text,
                const std::string& out) {
  const std::vector<MomentKey> keys = parse_keys(keys_text);
  const std::vector<int> shifts =
      shifts_text.empty() ? std::vector<int>{1, 2} : parse_int_list(shifts_text);

  std::optional<QFockBasis> q_basis;
  std::optional<BooleanBasis> b_basis;
  std::optional<MomentTable> table;
  SampleAlphabet alphabet =
      engine == "haagerup" ? SampleAlphabet::group() : SampleAlphabet::fock();
  if (engine == "q") {
    q_basis.emplace(parse_window(window_text), depth);
    table.emplace(alphabet, MomentTable::QBinding{&*q_basis, q});
  } else if (engine == "boolean") {
    b_basis.emplace(parse_window(window_text));
    table.emplace(alphabet, MomentTable::BooleanBinding{&*b_basis, gamma});
  } else if (engine == "monotone") {
    table.emplace(alphabet, MomentTable::MonotoneBinding{gamma});
  } else if (engine == "haagerup") {
    table.emplace(alphabet, MomentTable::HaagerupBinding{lambda});
  } else {
    throw InvalidParameter("unknown engine '" + engine + "'");
  }

  std::ostringstream report;
  int exit_code = kExitPass;
  if (check == "evaluate") {
    std::map<MomentKey, cplx> entries;
    for (const MomentKey& key : keys) entries[key] = table->evaluate(key);
    const MomentTable snapshot(alphabet, std::move(entries));
    emit(out, snapshot.to_csv());
    return kExitPass;
  }
  if (check == "positivity") {
    const double eig = positivity_check(*table, keys);
    report << "min_eigenvalue: " << fmt_double(eig) << "\n";
    if (!(eig >= -1e-10)) exit_code = kExitAssertionFailed;
  } else if (check == "exchangeability" || check == "stationarity" || check == "symsh") {
    const SymshReport r = symsh_verification(*table, keys, shifts);
    report << "exchangeable: " << (r.hypothesis_met ? "yes" : "no")
           << " (deviation " << fmt_double(r.exchange_deviation) << ")\n";
    if (check == "exchangeability") {
      if (!r.hypothesis_met) exit_code = kExitAssertionFailed;
    } else if (check == "stationarity") {
      const SymmetryReport s = stationarity_check(*table, keys, shifts);
      report << "stationary: " << (s.passed ? "yes" : "no") << " (deviation "
             << fmt_double(s.max_deviation) << ")\n";
      if (!s.passed) exit_code = kExitAssertionFailed;
    } else {
      if (!r.hypothesis_met) {
        report << "verdict: hypothesis not met (not a violation)\n";
      } else {
        report << "stationary: " << (r.stationary ? "yes" : "no") << " (deviation "
               << fmt_double(r.shift_deviation) << ")\n";
        if (!r.stationary) exit_code = kExitAssertionFailed;
      }
    }
  } else {
    throw InvalidParameter(
        "moment checks: evaluate | positivity | exchangeability | stationarity | symsh");
  }
  emit(out, report.str());
  return exit_code;
}

int run_acceptance_cmd(std::uint64_t seed, const std::string& outdir) {
  const AcceptanceReport report = run_acceptance(seed);
  std::cout << report.summary_lines();
  if (!outdir.empty()) write_acceptance_artifacts(report, outdir);
  return report.all_passed() ? kExitPass : kExitAssertionFailed;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Fock-representation and free-group workbench"};
  app.set_config("--config", "", "key=value configuration file; flags take precedence");
  app.require_subcommand(1);

  std::string engine = "q", probe = "mixing", check = "evaluate";
  std::string window_text = "0:8", test_modes_text, scales_text = "4,8,16,32";
  std::string word_a = "1", word_b = "1", word_c = "1", words_text, keys_text;
  std::string vector_text, out_path, outdir;
  std::string u_text = "e", v_text = "e", w_text = "e", shifts_text;
  double q = 0.0, gamma = 0.0, lambda = 1.0;
  int depth = 2, test_depth = 1, samples = 0;
  std::uint64_t seed = 1;
  bool flatten = false;

  auto* relations = app.add_subcommand("relations", "relation defect reports");
  relations->add_option("--engine", engine, "q | monotone | boolean");
  relations->add_option("--q", q, "deformation parameter");
  relations->add_option("--window", window_text, "mode window lo:hi");
  relations->add_option("--depth", depth, "basis depth cutoff (q engine)");
  relations->add_option("--out", out_path, "verdict CSV path (stdout when empty)");

  auto* normalform = app.add_subcommand("normalform", "rewrite a word to lambda/pi form");
  normalform->add_option("--word", word_a, "polynomial text")->required();
  normalform->add_option("--window", window_text, "oracle window lo:hi")->default_str("");
  normalform->add_flag("--flatten", flatten, "also expand pi blocks over the window");

  auto* ergodic = app.add_subcommand("ergodic", "convergence probes, CSV series");
  ergodic->add_option("--engine", engine, "q | boolean | haagerup");
  ergodic->add_option("--probe", probe, "cesaro | mixing | clustering | equilibrium");
  ergodic->add_option("--q", q, "deformation parameter");
  ergodic->add_option("--gamma", gamma, "segment-state parameter");
  ergodic->add_option("--lambda", lambda, "Haagerup parameter");
  ergodic->add_option("--word", word_a, "word A");
  ergodic->add_option("--word-b", word_b, "word B");
  ergodic->add_option("--word-c", word_c, "word C");
  ergodic->add_option("--window", window_text, "mode window lo:hi");
  ergodic->add_option("--depth", depth, "basis depth (q engine)");
  ergodic->add_option("--scales", scales_text, "comma-separated scale list");
  ergodic->add_option("--vector", vector_text, "vector state e<mode> (boolean)");
  ergodic->add_option("--test-depth", test_depth, "test family depth bound");
  ergodic->add_option("--test-modes", test_modes_text, "test family mode window lo:hi");
  ergodic->add_option("--samples", samples, "sampled permutations (0 = exact)");
  ergodic->add_option("--seed", seed, "PRNG seed (mt19937_64)");
  ergodic->add_option("--out", out_path, "CSV path (stdout when empty)");

  auto* haagerup_cmd = app.add_subcommand("haagerup", "Haagerup state checks");
  haagerup_cmd->add_option("--lambda", lambda, "state parameter");
  haagerup_cmd->add_option("--check", check,
                           "evaluate | product-state | block-singleton | positivity");
  haagerup_cmd->add_option("--u", u_text, "word u");
  haagerup_cmd->add_option("--v", v_text, "word v");
  haagerup_cmd->add_option("--w", w_text, "word w");
  haagerup_cmd->add_option("--words", words_text, "semicolon-separated word list");
  haagerup_cmd->add_option("--out", out_path, "report path (stdout when empty)");

  auto* moments = app.add_subcommand("moments", "moment tables and checks");
  moments->add_option("--engine", engine, "q | boolean | monotone | haagerup");
  moments->add_option("--q", q, "deformation parameter");
  moments->add_option("--gamma", gamma, "segment-state parameter");
  moments->add_option("--lambda", lambda, "Haagerup parameter");
  moments->add_option("--window", window_text, "mode window lo:hi");
  moments->add_option("--depth", depth, "basis depth (q engine)");
  moments->add_option("--keys", keys_text, "keys '0,1:x,x;1,0:x,x'")->required();
  moments->add_option("--check", check,
                      "evaluate | positivity | exchangeability | stationarity | symsh");
  moments->add_option("--shifts", shifts_text, "shift powers, default 1,2");
  moments->add_option("--out", out_path, "output path (stdout when empty)");

  auto* acceptance = app.add_subcommand("acceptance", "run the full acceptance suite");
  acceptance->add_option("--seed", seed, "PRNG seed shared by every criterion");
  acceptance->add_option("--outdir", outdir, "directory for verdicts.csv and series");

  CLI11_PARSE(app, argc, argv);

  try {
    if (relations->parsed()) {
      return run_relations(engine, q, window_text, depth, out_path);
    }
    if (normalform->parsed()) {
      return run_normalform(word_a, window_text, flatten);
    }
    if (ergodic->parsed()) {
      return run_ergodic(engine, probe, q, gamma, lambda, word_a, word_b, word_c,
                         window_text, depth, scales_text, vector_text, test_depth,
                         test_modes_text, seed, samples, out_path);
    }
    if (haagerup_cmd->parsed()) {
      return run_haagerup(lambda, check, u_text, v_text, w_text, words_text, out_path);
    }
    if (moments->parsed()) {
      return run_moments(engine, q, gamma, lambda, window_text, depth, keys_text, check,
                         shifts_text, out_path);
    }
    if (acceptance->parsed()) {
      return run_acceptance_cmd(seed, outdir);
    }
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfigError;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return kExitConfigError;
  }
  return kExitConfigError;
}
