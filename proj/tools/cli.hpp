#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace sepfix::cli {

// Exit codes. 0-2 are verdicts; 64 and up follow sysexits.h.
inline constexpr int kSeparable = 0;
inline constexpr int kEntangled = 1;
inline constexpr int kInconclusive = 2;
inline constexpr int kUsage = 64;
inline constexpr int kDataError = 65;
inline constexpr int kNoInput = 66;
inline constexpr int kSoftware = 70;
inline constexpr int kCantCreate = 73;

// Environment overrides for defaults.
inline constexpr const char* kSamplesEnv = "SEPFIX_SAMPLES";
inline constexpr const char* kThreadsEnv = "SEPFIX_THREADS";

// args excludes the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace sepfix::cli
