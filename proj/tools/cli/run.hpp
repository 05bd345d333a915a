#pragma once

#include <iosfwd>

namespace tprice::cli {

// Exit codes.
inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitConstraint = 3;
inline constexpr int kExitNumerical = 4;

/// Entry point behind the `tprice` executable. Human-readable output goes to
/// `out`; failures are reported on `err` as a single-line JSON object.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace tprice::cli
