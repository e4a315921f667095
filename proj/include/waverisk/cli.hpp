#pragma once

namespace waverisk {

// Full command-line driver. Parses argv, dispatches to the subcommands
// (denoise, experiment, verify-bounds, rate-fit) and maps failures to the
// documented exit codes: 0 success, 2 data, 3 configuration, 4 numeric,
// 1 internal bug.
int cli_main(int argc, const char* const* argv);

}  // namespace waverisk
