#include "bai/instances.hpp"

#include <charconv>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <numbers>
#include <sstream>

#include "bai/errors.hpp"
#include "bai/rng.hpp"

#ifndef BAI_DATA_DIR
#define BAI_DATA_DIR "data"
#endif

namespace bai {

namespace {

constexpr std::size_t kSyntheticArms = 40;
constexpr double kObdScale = 0.057774753125;
constexpr double kMovielensScale = 0.17820006619699696;

constexpr std::uint64_t kObdChecksum = 0x17d795d6a0fe996fULL;
constexpr std::uint64_t kMovielensChecksum = 0x94e06c91690326c1ULL;

// Calibrated with Simple Tracking (R=300) to land near PoE 0.03.
constexpr std::uint64_t kSyntheticBudget[10] = {16000, 1000, 4500, 8000, 60000, 8000, 7000, 3000, 2000, 4500};

std::vector<double> repeat(std::initializer_list<std::pair<double, std::size_t>> blocks) {
    std::vector<double> m;
    for (const auto& [v, n] : blocks) m.insert(m.end(), n, v);
    return m;
}

}  // namespace

Instance synthetic_instance(int id) {
    const std::size_t k = kSyntheticArms;
    const double kd = static_cast<double>(k);
    std::vector<double> m(k);
    switch (id) {
        case 1:
            for (std::size_t i = 1; i <= k; ++i) m[i - 1] = 1.0 - static_cast<double>(i - 1) * 0.05;
            break;
        case 2:
            for (std::size_t i = 1; i <= k; ++i) {
                m[i - 1] = 10.0 * std::pow(static_cast<double>(i - 1), 0.8) / std::pow(kd - 1.0, 0.8);
            }
            break;
        case 3:
            for (std::size_t i = 1; i <= k; ++i) m[i - 1] = 1.0 - std::sqrt(static_cast<double>(i - 1)) / 10.0;
            break;
        case 4:
            m = repeat({{1.0, 1}, {0.9, 4}, {0.0, 35}});
            break;
        case 5:
            m[0] = std::sin((kd - 1.0) * std::numbers::pi / (2.0 * kd));
            for (std::size_t i = 2; i <= k; ++i) {
                m[i - 1] = std::sin(9.0 * std::numbers::pi * (kd - static_cast<double>(i)) / (20.0 * kd));
            }
            break;
        case 6:
            for (std::size_t i = 1; i <= k; ++i) m[i - 1] = 0.75 * std::pow(3.0, -static_cast<double>(i) / 10.0);
            break;
        case 7:
            m = repeat({{1.0, 1}, {0.8, 39}});
            break;
        case 8:
            m = repeat({{1.0, 1}, {0.8, 9}, {0.2, 10}, {0.0, 20}});
            break;
        case 9:
            m = repeat({{1.0, 1}, {0.8, 2}, {0.0, 37}});
            break;
        case 10:
            m = repeat({{1.0, 1}, {0.9, 1}, {0.85, 1}, {0.8, 1}, {0.0, 36}});
            break;
        default:
            throw ConfigError("unknown synthetic instance " + std::to_string(id) + " (expected 1..10)");
    }
    return Instance(std::move(m), "instance-" + std::to_string(id));
}

MovielensMode parse_movielens_mode(std::string_view text) {
    if (text == "divide") return MovielensMode::divide;
    if (text == "as-is") return MovielensMode::as_is;
    throw ConfigError("movielens mode must be 'divide' or 'as-is'");
}

Instance load_real_instance(std::string_view name, std::span<const double> raw, MovielensMode mode) {
    std::vector<double> m(raw.begin(), raw.end());
    if (name == "obd") {
        if (m.size() != 80) throw DataFormatError("obd table needs 80 entries, got " + std::to_string(m.size()));
        for (auto& v : m) v = v / kObdScale * std::sqrt(1000.0);
    } else if (name == "movielens") {
        if (m.size() != 31) throw DataFormatError("movielens table needs 31 entries, got " + std::to_string(m.size()));
        if (mode == MovielensMode::divide) {
            for (auto& v : m) v /= kMovielensScale;
        }
    } else {
        throw ConfigError("unknown real-data instance '" + std::string(name) + "'");
    }
    return Instance(std::move(m), std::string(name));
}

RawTable read_table(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataFormatError("cannot open " + path.string());
    std::stringstream buf;
    buf << in.rdbuf();
    const std::string text = buf.str();

    RawTable t;
    t.checksum = fnv1a64(text);
    std::istringstream lines(text);
    std::string line;
    std::size_t no = 0;
    while (std::getline(lines, line)) {
        ++no;
        if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        const auto b = line.find_first_not_of(" \t\r");
        if (b == std::string::npos) continue;
        const auto e = line.find_last_not_of(" \t\r");
        double v = 0.0;
        const char* first = line.data() + b;
        const char* last = line.data() + e + 1;
        const auto [ptr, ec] = std::from_chars(first, last, v);
        if (ec != std::errc() || ptr != last || !std::isfinite(v)) {
            throw DataFormatError(path.string() + ":" + std::to_string(no) + ": not a real number");
        }
        t.values.push_back(v);
    }
    return t;
}

std::filesystem::path data_dir() {
    if (const char* env = std::getenv("BAI_DATA_DIR"); env && *env) return env;
    return BAI_DATA_DIR;
}

InstanceSpec lookup_instance(std::string_view id, MovielensMode mode) {
    InstanceSpec spec;
    spec.id = std::string(id);
    if (id == "obd" || id == "movielens") {
        const bool obd = id == "obd";
        const auto path = data_dir() / (obd ? "obd_ctr.txt" : "movielens_ratings.txt");
        const auto table = read_table(path);
        if (table.checksum != (obd ? kObdChecksum : kMovielensChecksum)) {
            throw DataFormatError(path.string() + ": checksum mismatch, the asset was modified");
        }
        spec.instance = load_real_instance(id, table.values, mode);
        spec.suggested_budget = obd ? 3000 : 10000;
        spec.budget_verified = true;
        spec.note = obd ? "Open Bandit CTR table" : "MovieLens 1M rating table";
        return spec;
    }
    int n = 0;
    const auto [ptr, ec] = std::from_chars(id.data(), id.data() + id.size(), n);
    if (ec != std::errc() || ptr != id.data() + id.size() || n < 1 || n > 10) {
        throw ConfigError("unknown instance '" + std::string(id) + "' (expected 1..10, obd, movielens)");
    }
    spec.instance = synthetic_instance(n);
    spec.suggested_budget = kSyntheticBudget[n - 1];
    spec.budget_verified = n == 9;
    spec.note = n == 9 ? "T=2000 has reference rates" : "calibrated default, unverified";
    return spec;
}

std::vector<std::string> instance_ids() {
    std::vector<std::string> ids;
    for (int i = 1; i <= 10; ++i) ids.push_back(std::to_string(i));
    ids.push_back("obd");
    ids.push_back("movielens");
    return ids;
}

}  // namespace bai
