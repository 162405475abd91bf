#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "bai/core.hpp"

namespace bai {

struct InstanceSpec {
    std::string id;
    Instance instance;
    std::uint64_t suggested_budget = 0;
    bool budget_verified = false;  // false: a calibrated default, not a reference value
    std::string note;
};

// The ten K=40 benchmark instances, id 1..10; throws ConfigError otherwise.
Instance synthetic_instance(int id);

// How the MovieLens table is turned into means.
enum class MovielensMode {
    divide,  // table / 0.17820006619699696
    as_is,   // table taken as final means
};

MovielensMode parse_movielens_mode(std::string_view text);

// "obd": CTR / 0.057774753125 * sqrt(1000), 80 entries.
// "movielens": 31 entries, see MovielensMode.
// Throws DataFormatError on a wrong entry count, ConfigError on a bad name.
Instance load_real_instance(std::string_view name, std::span<const double> raw,
                            MovielensMode mode = MovielensMode::divide);

struct RawTable {
    std::vector<double> values;
    std::uint64_t checksum = 0;  // fnv1a64 of the file bytes
};

// One real per line; blank lines and '#' comments ignored.
RawTable read_table(const std::filesystem::path& path);

// Compiled-in asset directory, overridden by the BAI_DATA_DIR environment variable.
std::filesystem::path data_dir();

// Ids "1".."10", "obd", "movielens". The real-data assets are verified
// against their recorded checksums.
InstanceSpec lookup_instance(std::string_view id, MovielensMode mode = MovielensMode::divide);
std::vector<std::string> instance_ids();

}  // namespace bai
