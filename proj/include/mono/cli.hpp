#pragma once

namespace mono {

/// Entry point for the monotest command-line tool.
/// Exit codes: 0 accept/success, 1 reject, 2 usage error, 3 verification failure.
int cli_main(int argc, const char* const* argv);

}  // namespace mono
