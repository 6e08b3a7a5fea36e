#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "ncprob/io.hpp"

namespace ncprob {

struct CriterionResult {
  int id = 0;
  std::string name;
  bool passed = false;
  std::string details;
};

/// Outcome of the in-process acceptance criteria (1-8). The CLI determinism
/// criterion compares two full runs of the `acceptance` subcommand and is
/// exercised by the acceptance test binary on top of this.
struct AcceptanceReport {
  std::vector<CriterionResult> criteria;
  std::vector<Verdict> verdicts;
  std::map<std::string, std::string> artifacts;  // file name -> CSV content

  bool all_passed() const;
  std::string summary_lines() const;  // one "PASS|FAIL  <id>  <name>" line each
};

AcceptanceReport run_acceptance(std::uint64_t seed);

/// Writes verdicts.csv and every artifact into outdir (atomically per file).
void write_acceptance_artifacts(const AcceptanceReport& report, const std::string& outdir);

}  // namespace ncprob
