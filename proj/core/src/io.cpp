#include "ncprob/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace ncprob {

std::string fmt_double(double v) {
  if (v == 0.0) return "0";  // normalizes -0
  // Find the shortest precision that round-trips, capped at %.17g.
  char buf[64];
  for (int prec = 1; prec <= 17; ++prec) {
    std::snprintf(buf, sizeof(buf), "%.*g", prec, v);
    double back = 0.0;
    std::sscanf(buf, "%lf", &back);
    if (back == v) return buf;
  }
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string fmt_complex(std::complex<double> v) {
  if (v.imag() == 0.0) return fmt_double(v.real());
  std::string out = fmt_double(v.real());
  if (std::signbit(v.imag()) && !std::isnan(v.imag())) {
    out += "-" + fmt_double(-v.imag());
  } else {
    out += "+" + fmt_double(v.imag());
  }
  out += "j";
  return out;
}

void atomic_write_file(const std::string& path, const std::string& content) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open for writing: " + tmp);
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out) throw std::runtime_error("write failed: " + tmp);
  }
  if (std::rename(tmp.c_str(), path.c_str()) != 0) {
    throw std::runtime_error("rename failed: " + path);
  }
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string verdicts_to_csv(const std::vector<Verdict>& rows) {
  std::string out = "check,engine,params,max_defect,tolerance,pass\n";
  for (const auto& r : rows) {
    out += r.check + "," + r.engine + "," + r.params + "," + fmt_double(r.max_defect) +
           "," + fmt_double(r.tolerance) + "," + (r.pass ? "1" : "0") + "\n";
  }
  return out;
}

}  // namespace ncprob
