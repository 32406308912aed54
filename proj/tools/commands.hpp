#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "cmscat/io.hpp"

namespace cmscat::cli {

struct RunOptions {
    Config config;
    std::string out_dir = ".";
    int threads = 1;
    std::optional<unsigned> seed;
    std::optional<int> snapshot_every;
    std::vector<int> orders{0, 1, 2};
};

int cmd_spectrum(const RunOptions& o, std::ostream& out);
int cmd_scatter(const RunOptions& o, std::ostream& out);
int cmd_trace(const RunOptions& o, std::ostream& out);
int cmd_evolve(const RunOptions& o, std::ostream& out);
int cmd_reconstruct(const RunOptions& o, std::ostream& out);
int cmd_selftest(const RunOptions& o, std::ostream& out);

// Runs a subcommand by name. Validation failures return 2, numerical
// contract failures return 3; both print an error object to err.
int run_command(const std::string& name, const RunOptions& o, std::ostream& out, std::ostream& err);

}  // namespace cmscat::cli
