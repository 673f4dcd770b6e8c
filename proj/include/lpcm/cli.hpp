#pragma once

#include <iosfwd>

namespace lpcm {

/// Entry point of the `lpcm` command line tool. Subcommands: check,
/// simulate, waveforms, sweep, rootlocus. Output goes to --out or `out`;
/// diagnostics to `err`. Returns 0 on success, 1 on usage or validation
/// errors, 2 on runtime or numerical errors.
int cli_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace lpcm
