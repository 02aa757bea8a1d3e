#pragma once
// Command-line front end over the library: sieved tables, error-term
// sampling, spacing experiments, constants, moment sweeps, and the two
// formula cross-checks.  One subcommand per run; output is a single CSV
// table (one header row, LF, 17 significant digits) or a single JSON
// document carrying schema_version; diagnostics go to standard error only.
//
// Exit codes: 0 success, 2 invalid parameters (usage on stderr),
// 3 resource/time budget exceeded, 4 internal error.

namespace divmom::cli {

int run_cli(int argc, const char* const* argv);

} // namespace divmom::cli
