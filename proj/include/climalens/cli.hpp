#pragma once

#include "climalens/config.hpp"

namespace climalens::cli {

// Full command-line entry point; returns the process exit code.
int run(int argc, const char* const* argv);

// Individual commands, callable in-process with an assembled config.
int cmd_fetch(const config::RunConfig& cfg);
int cmd_ingest(const config::RunConfig& cfg);
int cmd_build_indices(const config::RunConfig& cfg);
int cmd_estimate_risk(const config::RunConfig& cfg);
int cmd_regress(const config::RunConfig& cfg);
int cmd_report(const config::RunConfig& cfg);
int cmd_selftest(const config::RunConfig& cfg);

}  // namespace climalens::cli
