// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <iosfwd>

namespace filtra::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitCheckFailed = 1;
inline constexpr int kExitUsage = 2;

/// Entry point of the `filtra` tool: verify, gen, decompose, capacity, demo.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace filtra::cli
