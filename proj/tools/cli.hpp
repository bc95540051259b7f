#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace ttconvex::cli {

/// Runs one `ttconvex` invocation. Exit codes: 0 success, 1 validation
/// failure, 2 configuration or input error.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);
int run(int argc, char** argv);

/// %.10g rounding applied to every number in a report.
double round10(double x);

}  // namespace ttconvex::cli
