// config.hpp — JSON run configuration for the CLI: system description,
// tolerance overrides, probe parameters, and output options.
#pragma once

#include "sympkit/reporting.hpp"
#include "sympkit/system.hpp"

#include <optional>
#include <string>
#include <vector>

namespace sympkit {

/// Raised on malformed configuration files; the CLI maps it to exit code 2.
class ConfigError : public std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct RunConfig {
    std::optional<SymplecticSystem> system;
    Json echo;  // parsed document, echoed into reports

    std::vector<Complex> lambdas;
    std::optional<IndexRange> interval;
    std::optional<Matrix> alpha;
    std::optional<Matrix> beta;
    std::vector<int> N_list;
    double growth_ratio_threshold{1.0 + 1e-6};
    std::optional<int> boundary_index;
    std::optional<int> l_index;
    std::vector<Vector> forcing;       // f_k per index, starting at k = 0
    std::optional<Vector> v;

    std::string format{"json"};       // "json" | "csv"
    std::optional<std::string> out_path;
};

RunConfig load_run_config(const std::string& path);

/// Parse from an already-loaded document (used by tests).
RunConfig parse_run_config(const Json& doc);

} // namespace sympkit
