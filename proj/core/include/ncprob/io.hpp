#pragma once

#include <complex>
#include <string>
#include <vector>

namespace ncprob {

/// Shortest round-tripping decimal form of a double ("%.17g" fallback).
std::string fmt_double(double v);

/// "re" for real values, "re+imj" / "re-imj" otherwise.
std::string fmt_complex(std::complex<double> v);

/// Writes content to path via a temporary file plus rename, so readers never
/// observe a partially written experiment artifact.
void atomic_write_file(const std::string& path, const std::string& content);

std::string read_file(const std::string& path);

/// One row of a pass/fail verdict table.
struct Verdict {
  std::string check;
  std::string engine;
  std::string params;
  double max_defect = 0.0;
  double tolerance = 0.0;
  bool pass = false;
};

std::string verdicts_to_csv(const std::vector<Verdict>& rows);

}  // namespace ncprob
