#pragma once

#include <iosfwd>
#include <span>
#include <string>

namespace sentibt {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitData = 3;

// Entry point for the sentibt command: run, compare, sweep, synth.
int run_cli(std::span<const std::string> args, std::ostream& out, std::ostream& err);

}  // namespace sentibt
