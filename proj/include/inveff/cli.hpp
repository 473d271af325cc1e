#pragma once

// Command-line entry point: subcommands simulate | estimate | mc | validate.
// Exit codes: 0 success, 1 validation failure or refusal, 2 config/usage
// error. Diagnostics go to stderr; data goes to --out or stdout.

namespace inveff {

int run_cli(int argc, const char* const* argv);

} // namespace inveff
