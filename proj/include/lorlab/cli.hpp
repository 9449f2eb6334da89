#pragma once

#include <cstdint>
#include <optional>
#include <string>

namespace lorlab {

struct CliOptions {
    std::string manifest_path;
    std::optional<std::string> expected_command;  // invoked subcommand, checked vs manifest
    std::optional<std::string> out_dir;     // --out, else LORLAB_OUT, else manifest
    std::optional<std::uint64_t> seed;      // --seed override
    bool strict = false;                    // verdict failures exit 1
    int jobs = 1;
};

// Runs one manifest end to end. Returns the process exit code:
// 0 success, 1 verdict failures in strict mode, 2 errors (schema, io, math).
int run_manifest(const CliOptions& options);

// Entry point used by the binary; parses argv into CliOptions.
int cli_main(int argc, char** argv);

}  // namespace lorlab
