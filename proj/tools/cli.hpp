#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace amalgam::cli {

inline constexpr int kOk = 0;
inline constexpr int kUsage = 1;
inline constexpr int kVerifierFailed = 2;

/// Runs one amalgam-lab invocation. Report payloads go to `out` (or to the
/// --output file), diagnostics and errors to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace amalgam::cli
