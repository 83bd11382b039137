#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace remap::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitRuntime = 1;
inline constexpr int kExitUsage = 2;

/// Entry point for the remap tool. args excludes the program name. Errors
/// are reported on err as a single JSON object.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);
int run(int argc, char** argv);

}  // namespace remap::cli
