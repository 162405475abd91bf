#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "bai/instances.hpp"
#include "bai/simulation.hpp"

namespace bai::cli {

enum ExitCode : int { ok = 0, usage = 2, io = 3, check_failed = 4 };

// Raised for unreadable inputs or unwritable outputs (exit code 3).
struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// One "[kind name]" block of the config file; keys in file order.
struct Section {
    std::string kind;  // experiment, algorithm, instance
    std::string name;
    std::vector<std::pair<std::string, std::string>> entries;
    std::size_t line = 0;
};

std::vector<Section> parse_sections(const std::string& text);

struct RunPlan {
    std::vector<ExperimentConfig> experiments;  // one per instance, resolved
    std::string config_text;
    std::uint64_t seed = 0;
    std::optional<std::uint64_t> replications_override;
    std::optional<std::string> checkpoints_override;
    MovielensMode movielens_mode = MovielensMode::divide;
};

struct Overrides {
    std::optional<std::uint64_t> seed;
    std::optional<std::uint64_t> replications;
    std::optional<unsigned> workers;
    std::optional<std::string> checkpoints;  // "default" or comma list
};

// Builds and validates every experiment before anything runs. Throws ConfigError.
RunPlan plan_from_config(const std::string& text, const Overrides& overrides);

std::string format_real(double v);
std::string poe_csv(const PoECurve& curve);
std::string csv_file_name(const std::string& instance, const std::string& algorithm);

// Parsed back from a PoE CSV.
struct PoETable {
    std::string algorithm;
    std::string instance;
    std::uint64_t seed = 0;
    std::vector<PoEPoint> points;
};

PoETable parse_poe_csv(const std::string& text, const std::string& origin);

// Entry point shared by the executable and the tests.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace bai::cli
