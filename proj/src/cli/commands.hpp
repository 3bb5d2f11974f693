#pragma once

// Subcommands of the ircg tool. Everything is reachable through run_cli so
// tests can drive the tool in-process.

#include <iosfwd>
#include <string>
#include <vector>

#include "cli/config.hpp"
#include "ircg/core.hpp"

namespace ircg::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitNumerical = 3;

/// args excludes the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// `name` inside $IRCG_OUTPUT_DIR when set, else `name` itself.
std::string default_output_path(const std::string& name);

extern const char* const kTraceHeader;

void write_trace_header(std::ostream& os, bool with_estimate_error);
void write_trace_row(std::ostream& os, const TraceRecord& r, bool with_estimate_error);
/// Reads a trace CSV written by `solve`; empty gap fields become NaN.
std::vector<TraceRecord> read_trace_csv(const std::string& path);

struct ReferenceFile {
  ReferenceOptima optima;
  /// Canonical [problem] section the reference was computed for.
  std::string problem;
};

ReferenceFile read_reference(const std::string& path);

/// Canonical text of the [problem] section alone.
std::string problem_fingerprint(const RunConfig& config);

}  // namespace ircg::cli
