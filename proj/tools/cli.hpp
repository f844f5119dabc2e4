#pragma once

#include <string>
#include <vector>

namespace vrbea::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitNumeric = 3;

/// Default output directory when --out is absent.
inline constexpr const char* kOutDirEnv = "VRBEA_OUT_DIR";

/// Parses and runs one command line. args[0] is the program name.
int run(const std::vector<std::string>& args);

}  // namespace vrbea::cli
