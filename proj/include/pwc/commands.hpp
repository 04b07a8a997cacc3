#pragma once

// The four subcommands behind the pwcontract executable. Each returns the
// process exit status and writes its report to `out` (or stdout when empty);
// diagnostics go to the error stream.

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <string>

namespace pwc::cli {

enum Exit : int {
  kContractive = 0,
  kUsage = 1,
  kHypothesis = 2,
  kNotContractive = 3,
  kNumerical = 4,
};

struct Options {
  std::string s1_file;
  std::string s2_file;
  std::string p = "4";
  std::size_t trials = 1000;
  std::uint64_t seed = 0;
  double grid_T = 64.0;
  std::size_t grid_M = std::size_t{1} << 17;
  std::string lattice_L = "4";
  unsigned k_max = 8;
  int threads = 0;  // 0 keeps the OpenMP default
  unsigned iterations = 500;
  unsigned restarts = 8;
  std::string out;
};

int cmd_decide(const Options& o, std::ostream& err);
int cmd_verify(const Options& o, std::ostream& err);
int cmd_witness(const Options& o, std::ostream& err);
int cmd_sweep(const Options& o, std::ostream& err);

}  // namespace pwc::cli
