#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace shadowlab::cli {

enum ExitCode { kDecided = 0, kUsage = 1, kBestEffort = 2, kInternal = 3 };

struct RunResult {
    int code = kDecided;
    std::string out;  // JSON report, newline terminated
    std::string err;
};

// args excludes the program name. `seed_env` stands in for SHADOWLAB_SEED when given.
RunResult run(const std::vector<std::string>& args, std::optional<std::string> seed_env = std::nullopt);

int main(int argc, char** argv);

} // namespace shadowlab::cli
