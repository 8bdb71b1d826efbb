#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "hqn/integrator.hpp"

namespace hqn::cli {

enum ExitCode : int { ok = 0, failure = 1, usage = 2 };

// Parses the arguments and runs one verb. Reports go to `out`, diagnostics to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);
int run(int argc, const char* const* argv);

// %.17g
std::string format_double(double v);
// Header s,c1,c2,sigma,V,I1,I2,residual, one row per sample.
void write_curve_csv(std::ostream& os, const std::vector<Sample>& samples);

}  // namespace hqn::cli
