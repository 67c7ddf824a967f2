#pragma once

namespace mskel {

/// Command-line front end (gen / decompose / skeleton / cover / simulate /
/// pathological). Returns the process exit status; machine output goes to
/// files or stdout, diagnostics to stderr.
int run_cli(int argc, const char* const* argv);

}  // namespace mskel
