#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace plp::cli {

enum ExitCode : int
{
  exit_ok = 0,
  exit_usage = 1,
  exit_input = 2,
  exit_numerical = 3,
};

//! Runs the command line `args` (without the program name). Every result is
//! assembled in memory first, so a failing command writes nothing to `out`
//! or to any --out file.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace plp::cli
