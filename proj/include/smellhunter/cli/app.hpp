#pragma once

#include <iosfwd>
#include <string>

#include "smellhunter/cli/render.hpp"

namespace smellhunter::cli {

// Exit codes are a function of the outcome class only.
enum ExitCode : int {
    kExitOk = 0,
    kExitUsage = 1,  // usage, local file/parse, network or HTTP errors
    kExitPipelineFailed = 2,
    kExitTimeout = 3,
};

struct CliConfig {
    std::string server_url = "http://127.0.0.1:8080";
    int poll_interval_ms = 250;
    int timeout_ms = 30'000;
    OutputFormat format = OutputFormat::table;
};

// Entry point of the `smellhunter` tool.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace smellhunter::cli
