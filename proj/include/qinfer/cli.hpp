#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "qinfer/monty_hall.hpp"

namespace qinfer::cli {

enum ExitCode : int {
  kOk = 0,
  kUsage = 1,
  kValidation = 2,
  kImpossibleEvidence = 3,
  kIo = 4,
};

/// 12 significant digits, classic locale; values below 1e-13 in magnitude
/// print as 0.
std::string format_number(double x);

std::string sweep_csv(const std::vector<monty::SweepPoint>& points);
std::string sweep_svg(const std::vector<monty::SweepPoint>& points);

/// Runs one command line (args excludes the program name). Data goes to
/// `out`, diagnostics to `err`; returns the process exit code.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace qinfer::cli
