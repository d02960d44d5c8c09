#pragma once

#include <iosfwd>

namespace driftnet::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitInvalid = 1;  // validation failure
inline constexpr int kExitIo = 2;       // I/O, format or usage error

/// Runs one `driftnet` subcommand. Machine-readable output goes to `out`
/// unless --out names a file; diagnostics and logs go to `err`. The log
/// level comes from DRIFTNET_LOG (trace, debug, info, warn, error, off).
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace driftnet::cli
