#include "cli.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <ctime>
#include <fstream>
#include <iomanip>
#include <set>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "bai/core.hpp"
#include "bai/errors.hpp"
#include "bai/rng.hpp"
#include "bai/theory_checks.hpp"

#ifndef BAI_VERSION
#define BAI_VERSION "0.0.0"
#endif

namespace bai::cli {

namespace {

const char* const kCsvHeader = "algorithm,instance,t,errors,replications,poe,ci_low,ci_high,seed";

std::string trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return std::string(s.substr(b, e - b + 1));
}

std::vector<std::string> split(std::string_view s, char sep) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (true) {
        const auto pos = s.find(sep, start);
        out.push_back(trim(s.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start)));
        if (pos == std::string_view::npos) break;
        start = pos + 1;
    }
    return out;
}

bool safe_id(std::string_view s) {
    return !s.empty() && std::all_of(s.begin(), s.end(), [](char c) {
        return std::isalnum(static_cast<unsigned char>(c)) || c == '-' || c == '_' || c == '.';
    });
}

std::uint64_t parse_u64(const std::string& s, const std::string& what) {
    std::uint64_t v = 0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (s.empty() || ec != std::errc() || ptr != s.data() + s.size()) {
        throw ConfigError(what + ": expected a non-negative integer, got '" + s + "'");
    }
    return v;
}

double parse_real(const std::string& s, const std::string& what) {
    if (s == "inf") return std::numeric_limits<double>::infinity();
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (s.empty() || ec != std::errc() || ptr != s.data() + s.size()) {
        throw ConfigError(what + ": expected a real number, got '" + s + "'");
    }
    return v;
}

std::vector<std::uint64_t> parse_checkpoints(const std::string& s) {
    if (s == "default") return {};
    std::vector<std::uint64_t> out;
    for (const auto& tok : split(s, ',')) out.push_back(parse_u64(tok, "checkpoints"));
    return out;
}

std::vector<double> parse_means(const std::string& s, const std::string& what) {
    std::vector<double> out;
    for (const auto& tok : split(s, ',')) out.push_back(parse_real(tok, what));
    return out;
}

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot read " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void write_file(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot write " + path.string());
    out << text;
    out.close();
    if (!out) throw IoError("write failed for " + path.string());
}

void make_dir(const std::filesystem::path& dir) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec || !std::filesystem::is_directory(dir)) throw IoError("cannot create directory " + dir.string());
}

std::string utc_now() {
    const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    std::ostringstream s;
    s << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
    return s.str();
}

std::string hex64(std::uint64_t v) {
    std::ostringstream s;
    s << std::hex << std::setw(16) << std::setfill('0') << v;
    return s.str();
}

using Entries = std::vector<std::pair<std::string, std::string>>;

void reject_unknown(const Section& sec, std::initializer_list<std::string_view> known) {
    for (const auto& [k, v] : sec.entries) {
        if (std::find(known.begin(), known.end(), k) == known.end()) {
            throw ConfigError("line " + std::to_string(sec.line) + ": unknown key '" + k + "' in [" + sec.kind +
                              (sec.name.empty() ? "" : " " + sec.name) + "]");
        }
    }
}

const std::string* find_key(const Section& sec, std::string_view key) {
    for (const auto& [k, v] : sec.entries) {
        if (k == key) return &v;
    }
    return nullptr;
}

AlgorithmConfig algorithm_from(const Section& sec) {
    reject_unknown(sec, {"kind", "c_suf", "batch_size", "budget", "initial_budget", "recompute_period",
                         "pooled_batches"});
    if (!safe_id(sec.name)) throw ConfigError("algorithm name '" + sec.name + "' must match [A-Za-z0-9._-]+");
    AlgorithmConfig a;
    a.name = sec.name;
    const auto* kind = find_key(sec, "kind");
    a.kind = parse_kind(kind ? *kind : sec.name);
    const std::string who = "[algorithm " + sec.name + "] ";
    if (const auto* v = find_key(sec, "c_suf")) a.c_suf = parse_real(*v, who + "c_suf");
    if (const auto* v = find_key(sec, "batch_size")) a.batch_size = parse_u64(*v, who + "batch_size");
    if (const auto* v = find_key(sec, "budget")) a.budget = parse_u64(*v, who + "budget");
    if (const auto* v = find_key(sec, "initial_budget")) a.initial_budget = parse_u64(*v, who + "initial_budget");
    if (const auto* v = find_key(sec, "recompute_period")) a.recompute_period = parse_u64(*v, who + "recompute_period");
    if (const auto* v = find_key(sec, "pooled_batches")) a.pooled_batches = parse_u64(*v, who + "pooled_batches");
    return a;
}

struct CustomInstance {
    std::optional<std::vector<double>> means;
    std::optional<std::uint64_t> budget;
};

std::map<std::string, CustomInstance> instances_from(const std::vector<Section>& sections) {
    std::map<std::string, CustomInstance> out;
    for (const auto& sec : sections) {
        if (sec.kind != "instance") continue;
        reject_unknown(sec, {"means", "budget"});
        if (!safe_id(sec.name)) throw ConfigError("instance name '" + sec.name + "' must match [A-Za-z0-9._-]+");
        CustomInstance ci;
        if (const auto* v = find_key(sec, "means")) ci.means = parse_means(*v, "[instance " + sec.name + "] means");
        if (const auto* v = find_key(sec, "budget")) ci.budget = parse_u64(*v, "[instance " + sec.name + "] budget");
        if (!out.emplace(sec.name, ci).second) throw ConfigError("duplicate [instance " + sec.name + "]");
    }
    return out;
}

Instance resolve_instance(const std::string& id, const std::map<std::string, CustomInstance>& custom,
                          MovielensMode mode, std::uint64_t& suggested) {
    const auto it = custom.find(id);
    if (it != custom.end() && it->second.means) {
        suggested = 0;
        return Instance(*it->second.means, id);
    }
    const auto spec = lookup_instance(id, mode);
    suggested = spec.suggested_budget;
    return spec.instance;
}

struct RateRow {
    std::string algorithm;
    std::string instance;
    PoEPoint point;
    double h = 0.0;
    RateEstimate rate;
};

int cmd_simulate(const std::string& config_path, const std::string& out_dir, const Overrides& ov, std::ostream& out,
                 std::ostream& err) {
    const std::string text = read_file(config_path);
    const auto started = utc_now();
    const RunPlan plan = plan_from_config(text, ov);

    struct Result {
        std::string file;
        std::string text;
        const ExperimentConfig* exp;
        PoECurve curve;
    };
    std::vector<Result> results;
    for (const auto& exp : plan.experiments) {
        for (const auto& alg : exp.algorithms) {
            err << "simulate: instance " << exp.instance_id << ", " << alg.id() << ", T=" << exp.budget
                << ", R=" << exp.replications << "\n";
            auto curve = estimate_poe(exp, alg);
            results.push_back({csv_file_name(exp.instance_id, alg.id()), poe_csv(curve), &exp, std::move(curve)});
        }
    }

    const std::filesystem::path dir(out_dir);
    make_dir(dir);
    nlohmann::ordered_json manifest;
    manifest["tool"] = "bai";
    manifest["version"] = BAI_VERSION;
    manifest["seed"] = plan.seed;
    manifest["rng_method"] = std::string(Rng::method_name);
    manifest["seed_derivation"] =
        "derive_seed(seed, {fnv1a64(instance), fnv1a64(algorithm), replication, 0 noise | 1 algorithm})";
    manifest["config_text"] = plan.config_text;
    manifest["overrides"] = nlohmann::ordered_json::object();
    if (ov.seed) manifest["overrides"]["seed"] = *ov.seed;
    if (ov.replications) manifest["overrides"]["replications"] = *ov.replications;
    if (ov.checkpoints) manifest["overrides"]["checkpoints"] = *ov.checkpoints;
    manifest["started_at"] = started;

    auto insts = nlohmann::ordered_json::array();
    for (const auto& exp : plan.experiments) {
        insts.push_back({{"id", exp.instance_id},
                         {"arms", exp.instance.arms()},
                         {"budget", exp.budget},
                         {"replications", exp.replications},
                         {"checkpoints", exp.checkpoints},
                         {"means", exp.instance.means}});
    }
    manifest["instances"] = insts;

    auto files = nlohmann::ordered_json::array();
    for (const auto& r : results) {
        write_file(dir / r.file, r.text);
        auto fallback = nlohmann::ordered_json::array();
        for (const auto& p : r.curve.points) {
            if (p.fallbacks > 0) fallback.push_back({{"t", p.t}, {"count", p.fallbacks}});
        }
        files.push_back({{"file", r.file},
                         {"instance", r.curve.instance},
                         {"algorithm", r.curve.algorithm},
                         {"rows", r.curve.points.size()},
                         {"bytes", r.text.size()},
                         {"fnv1a64", hex64(fnv1a64(r.text))},
                         {"fallback_checkpoints", fallback}});
        out << r.file << "\n";
    }
    manifest["results"] = files;
    manifest["finished_at"] = utc_now();
    write_file(dir / "manifest.json", manifest.dump(2) + "\n");
    return ExitCode::ok;
}

int cmd_rates(const std::vector<std::string>& inputs, const std::string& measure, const std::string& out_dir,
              const std::string& config_path, const std::string& mode_text, std::ostream& out) {
    if (measure != "h1" && measure != "h2") throw ConfigError("--measure must be h1 or h2");
    const auto mode = parse_movielens_mode(mode_text);
    std::map<std::string, CustomInstance> custom;
    if (!config_path.empty()) custom = instances_from(parse_sections(read_file(config_path)));

    std::vector<std::filesystem::path> files;
    for (const auto& in : inputs) {
        const std::filesystem::path p(in);
        if (std::filesystem::is_directory(p)) {
            std::vector<std::filesystem::path> found;
            for (const auto& e : std::filesystem::directory_iterator(p)) {
                const auto name = e.path().filename().string();
                if (name.rfind("poe_", 0) == 0 && e.path().extension() == ".csv") found.push_back(e.path());
            }
            std::sort(found.begin(), found.end());
            files.insert(files.end(), found.begin(), found.end());
        } else {
            files.push_back(p);
        }
    }
    if (files.empty()) throw ConfigError("rates: no PoE CSV inputs");

    std::map<std::string, std::map<std::string, PoEPoint>> cells;  // instance -> algorithm -> final point
    std::set<std::string> algorithms;
    for (const auto& f : files) {
        const auto table = parse_poe_csv(read_file(f), f.string());
        if (table.points.empty()) throw DataFormatError(f.string() + ": no rows");
        auto& row = cells[table.instance];
        if (!row.emplace(table.algorithm, table.points.back()).second) {
            throw ConfigError("rates: duplicate results for " + table.algorithm + " on " + table.instance);
        }
        algorithms.insert(table.algorithm);
    }

    std::vector<RateRow> rows;
    for (const auto& [inst, row] : cells) {
        for (const auto& a : algorithms) {
            if (!row.count(a)) throw ConfigError("rates: instance " + inst + " has no results for " + a);
        }
        const auto final_t = row.begin()->second.t;
        for (const auto& [a, p] : row) {
            if (p.t != final_t) {
                throw ConfigError("rates: instance " + inst + " mixes final budgets " + std::to_string(final_t) +
                                  " and " + std::to_string(p.t));
            }
        }
        std::uint64_t unused = 0;
        const auto instance = resolve_instance(inst, custom, mode, unused);
        const double h = measure == "h1" ? h1(instance.means) : h2(instance.means);
        for (const auto& [a, p] : row) rows.push_back({a, inst, p, h, estimate_rate(p, h, p.t)});
    }

    std::ostringstream csv;
    csv << "algorithm,instance,t,measure,h,errors,replications,poe,rate_lower,rate_plugin,rate_upper\n";
    for (const auto& r : rows) {
        csv << r.algorithm << ',' << r.instance << ',' << r.point.t << ',' << measure << ',' << format_real(r.h) << ','
            << r.point.errors << ',' << r.point.replications << ',' << format_real(r.point.poe) << ','
            << format_real(r.rate.lower) << ',' << format_real(r.rate.plugin) << ',' << format_real(r.rate.upper)
            << '\n';
    }
    for (const auto& a : algorithms) {
        std::vector<double> lo, mid, hi;
        for (const auto& r : rows) {
            if (r.algorithm != a) continue;
            lo.push_back(r.rate.lower);
            mid.push_back(r.rate.plugin);
            hi.push_back(r.rate.upper);
        }
        csv << a << ",minimax,," << measure << ",,,,," << format_real(minimax_rate(lo)) << ','
            << format_real(minimax_rate(mid)) << ',' << format_real(minimax_rate(hi)) << '\n';
    }

    const std::filesystem::path dir(out_dir);
    make_dir(dir);
    write_file(dir / "rates.csv", csv.str());
    out << csv.str();
    return ExitCode::ok;
}

int cmd_check(const std::string& suite, const std::string& out_dir, std::uint64_t seed, std::uint64_t trials,
              std::uint64_t replications, unsigned workers, bool inject, std::ostream& out) {
    static const std::set<std::string> suites{"allocation", "h3", "stability", "sr-exponent", "all"};
    if (!suites.count(suite)) throw ConfigError("unknown suite '" + suite + "'");
    const bool all = suite == "all";
    // Validate the output location before spending time on the suites.
    const std::filesystem::path dir(out_dir);
    make_dir(dir);

    std::vector<std::pair<std::string, CheckResult>> results;
    auto add = [&](const std::string& name, std::vector<CheckResult> rs) {
        for (auto& r : rs) results.emplace_back(name, std::move(r));
    };
    if (all || suite == "allocation") add("allocation", allocation_suite(trials, seed, inject ? 5.0 : 1.0));
    if (all || suite == "h3") add("h3", h3_suite(std::min<std::uint64_t>(trials, 1000), seed));
    if (all || suite == "stability") add("stability", stability_suite(GridSpec{}));
    if (all || suite == "sr-exponent") add("sr-exponent", sr_exponent_suite(replications, seed, workers));

    std::ostringstream report;
    report << "suite\tcheck\tstatus\tdetail\twitness\n";
    bool failed = false;
    for (const auto& [s, r] : results) {
        failed = failed || r.status == CheckStatus::fail;
        std::string wit;
        for (std::size_t i = 0; i < r.witness.size(); ++i) wit += (i ? " " : "") + format_real(r.witness[i]);
        report << s << '\t' << r.name << '\t' << status_name(r.status) << '\t' << r.detail << '\t' << wit << '\n';
        out << status_name(r.status) << "  " << s << ": " << r.name << "  " << r.detail << "\n";
    }
    write_file(dir / "check_report.tsv", report.str());
    return failed ? ExitCode::check_failed : ExitCode::ok;
}

int cmd_complexity(const std::vector<std::string>& ids, const std::vector<std::string>& means,
                   const std::string& mode_text, std::ostream& out) {
    const auto mode = parse_movielens_mode(mode_text);
    std::vector<Instance> list;
    for (const auto& id : ids) list.push_back(lookup_instance(id, mode).instance);
    for (const auto& m : means) list.push_back(Instance(parse_means(m, "--means"), "custom"));
    if (list.empty()) throw ConfigError("complexity: give --instance or --means");
    out << "instance,arms,best_arm,h1,h2,h2_gaussian,h3,h3_over_h2_gaussian,logbar\n";
    for (const auto& inst : list) {
        const double g = h2(inst.means, true);
        const double t3 = h3(inst.means);
        out << inst.label << ',' << inst.arms() << ',' << first_best(inst.means) + 1 << ','
            << format_real(h1(inst.means)) << ',' << format_real(h2(inst.means)) << ',' << format_real(g) << ','
            << format_real(t3) << ',' << format_real(t3 / g) << ',' << format_real(log_bar(inst.arms())) << '\n';
    }
    return ExitCode::ok;
}

}  // namespace

std::vector<Section> parse_sections(const std::string& text) {
    std::vector<Section> out;
    std::istringstream in(text);
    std::string raw;
    std::size_t no = 0;
    while (std::getline(in, raw)) {
        ++no;
        if (const auto c = raw.find('#'); c != std::string::npos) raw.erase(c);
        const auto line = trim(raw);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']') throw ConfigError("line " + std::to_string(no) + ": unterminated section header");
            std::istringstream hdr(line.substr(1, line.size() - 2));
            Section sec;
            sec.line = no;
            hdr >> sec.kind >> sec.name;
            std::string extra;
            if (hdr >> extra) throw ConfigError("line " + std::to_string(no) + ": section header has extra words");
            if (sec.kind == "experiment") {
                if (!sec.name.empty()) throw ConfigError("line " + std::to_string(no) + ": [experiment] takes no name");
            } else if (sec.kind == "algorithm" || sec.kind == "instance") {
                if (sec.name.empty()) throw ConfigError("line " + std::to_string(no) + ": [" + sec.kind + "] needs a name");
            } else {
                throw ConfigError("line " + std::to_string(no) + ": unknown section [" + sec.kind + "]");
            }
            out.push_back(std::move(sec));
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos) throw ConfigError("line " + std::to_string(no) + ": expected key = value");
        if (out.empty()) throw ConfigError("line " + std::to_string(no) + ": key outside any section");
        auto key = trim(std::string_view(line).substr(0, eq));
        auto value = trim(std::string_view(line).substr(eq + 1));
        if (key.empty()) throw ConfigError("line " + std::to_string(no) + ": empty key");
        if (find_key(out.back(), key)) throw ConfigError("line " + std::to_string(no) + ": duplicate key '" + key + "'");
        out.back().entries.emplace_back(std::move(key), std::move(value));
    }
    return out;
}

RunPlan plan_from_config(const std::string& text, const Overrides& ov) {
    const auto sections = parse_sections(text);
    RunPlan plan;
    plan.config_text = text;

    const Section* exp = nullptr;
    std::vector<AlgorithmConfig> algorithms;
    std::set<std::string> names;
    for (const auto& sec : sections) {
        if (sec.kind == "experiment") {
            if (exp) throw ConfigError("line " + std::to_string(sec.line) + ": second [experiment] section");
            exp = &sec;
        } else if (sec.kind == "algorithm") {
            if (!names.insert(sec.name).second) throw ConfigError("duplicate [algorithm " + sec.name + "]");
            algorithms.push_back(algorithm_from(sec));
        }
    }
    if (!exp) throw ConfigError("config has no [experiment] section");
    if (algorithms.empty()) throw ConfigError("config has no [algorithm] section");
    reject_unknown(*exp, {"instances", "budget", "replications", "seed", "checkpoints", "workers", "movielens_mode",
                          "noise_sigma"});
    const auto custom = instances_from(sections);

    const auto* inst_list = find_key(*exp, "instances");
    if (!inst_list || inst_list->empty()) throw ConfigError("[experiment] needs instances = id, ...");
    std::optional<std::uint64_t> budget;
    if (const auto* v = find_key(*exp, "budget")) budget = parse_u64(*v, "budget");
    std::uint64_t replications = 100;
    if (const auto* v = find_key(*exp, "replications")) replications = parse_u64(*v, "replications");
    if (ov.replications) replications = *ov.replications;
    plan.seed = 0;
    if (const auto* v = find_key(*exp, "seed")) plan.seed = parse_u64(*v, "seed");
    if (ov.seed) plan.seed = *ov.seed;
    std::string checkpoints = "default";
    if (const auto* v = find_key(*exp, "checkpoints")) checkpoints = *v;
    if (ov.checkpoints) checkpoints = *ov.checkpoints;
    unsigned workers = 1;
    if (const auto* v = find_key(*exp, "workers")) workers = static_cast<unsigned>(parse_u64(*v, "workers"));
    if (ov.workers) workers = *ov.workers;
    double sigma = 1.0;
    if (const auto* v = find_key(*exp, "noise_sigma")) sigma = parse_real(*v, "noise_sigma");
    if (const auto* v = find_key(*exp, "movielens_mode")) plan.movielens_mode = parse_movielens_mode(*v);
    plan.replications_override = ov.replications;
    plan.checkpoints_override = ov.checkpoints;
    const auto cps = parse_checkpoints(checkpoints);

    std::set<std::string> seen;
    for (const auto& id : split(*inst_list, ',')) {
        if (!safe_id(id)) throw ConfigError("instance id '" + id + "' must match [A-Za-z0-9._-]+");
        if (!seen.insert(id).second) throw ConfigError("instance " + id + " listed twice");
        ExperimentConfig e;
        std::uint64_t suggested = 0;
        e.instance = resolve_instance(id, custom, plan.movielens_mode, suggested);
        e.instance_id = id;
        const auto it = custom.find(id);
        if (it != custom.end() && it->second.budget) {
            e.budget = *it->second.budget;
        } else if (budget) {
            e.budget = *budget;
        } else if (suggested > 0) {
            e.budget = suggested;
        } else {
            throw ConfigError("instance " + id + " has no budget; set [experiment] budget or [instance " + id + "] budget");
        }
        e.algorithms = algorithms;
        e.checkpoints = cps;
        e.replications = replications;
        e.seed = plan.seed;
        e.workers = workers;
        e.noise_sigma = sigma;
        try {
            e.resolve();
        } catch (const ConfigError& ex) {
            throw ConfigError("instance " + id + ": " + ex.what());
        }
        plan.experiments.push_back(std::move(e));
    }
    return plan;
}

std::string format_real(double v) {
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    if (std::isnan(v)) return "nan";
    char buf[64];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, ptr);
}

std::string poe_csv(const PoECurve& curve) {
    std::ostringstream s;
    s << kCsvHeader << '\n';
    for (const auto& p : curve.points) {
        s << curve.algorithm << ',' << curve.instance << ',' << p.t << ',' << p.errors << ',' << p.replications << ','
          << format_real(p.poe) << ',' << format_real(p.ci_low) << ',' << format_real(p.ci_high) << ',' << curve.seed
          << '\n';
    }
    return s.str();
}

std::string csv_file_name(const std::string& instance, const std::string& algorithm) {
    return "poe_" + instance + "_" + algorithm + ".csv";
}

PoETable parse_poe_csv(const std::string& text, const std::string& origin) {
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line)) throw DataFormatError(origin + ": empty file");
    if (trim(line) != kCsvHeader) {
        const auto want = split(kCsvHeader, ',');
        const auto got = split(line, ',');
        std::size_t i = 0;
        while (i < want.size() && i < got.size() && want[i] == got[i]) ++i;
        const std::string col = i < want.size() ? want[i] : got[i];
        throw DataFormatError(origin + ": header mismatch at column " + std::to_string(i + 1) + " ('" + col +
                              "'), expected '" + std::string(kCsvHeader) + "'");
    }
    PoETable t;
    std::size_t no = 1;
    while (std::getline(in, line)) {
        ++no;
        if (trim(line).empty()) continue;
        const auto f = split(line, ',');
        const std::string where = origin + ":" + std::to_string(no);
        if (f.size() != 9) throw DataFormatError(where + ": expected 9 columns, got " + std::to_string(f.size()));
        try {
            PoEPoint p;
            p.t = parse_u64(f[2], "t");
            p.errors = parse_u64(f[3], "errors");
            p.replications = parse_u64(f[4], "replications");
            p.poe = parse_real(f[5], "poe");
            p.ci_low = parse_real(f[6], "ci_low");
            p.ci_high = parse_real(f[7], "ci_high");
            const auto seed = parse_u64(f[8], "seed");
            if (p.replications == 0 || p.errors > p.replications) throw ConfigError("errors must lie in [0, replications]");
            if (!(0.0 <= p.ci_low && p.ci_low <= p.poe && p.poe <= p.ci_high && p.ci_high <= 1.0)) {
                throw ConfigError("need 0 <= ci_low <= poe <= ci_high <= 1");
            }
            if (t.points.empty()) {
                t.algorithm = f[0];
                t.instance = f[1];
                t.seed = seed;
            } else if (f[0] != t.algorithm || f[1] != t.instance || seed != t.seed) {
                throw ConfigError("algorithm, instance and seed must be constant within a file");
            } else if (p.t <= t.points.back().t) {
                throw ConfigError("t must increase");
            }
            t.points.push_back(p);
        } catch (const ConfigError& e) {
            throw DataFormatError(where + ": " + e.what());
        }
    }
    return t;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Best arm identification benchmark harness", "bai"};
    app.require_subcommand(1);
    app.set_version_flag("--version", BAI_VERSION);

    std::string config_path, out_dir;
    Overrides ov;
    std::uint64_t seed = 0, replications = 0;
    unsigned workers = 0;
    std::string checkpoints;
    auto* sim = app.add_subcommand("simulate", "Estimate PoE curves and write CSVs plus a manifest");
    sim->add_option("--config", config_path, "Experiment config file")->required();
    sim->add_option("--out", out_dir, "Output directory")->required();
    auto* sim_seed = sim->add_option("--seed", seed, "Master seed override");
    auto* sim_reps = sim->add_option("--replications", replications, "Replication count override");
    auto* sim_workers = sim->add_option("--workers", workers, "Worker threads")->envname("BAI_WORKERS");
    auto* sim_cps = sim->add_option("--checkpoints", checkpoints, "'default' or comma-separated t values");

    std::vector<std::string> csvs;
    std::string measure = "h1", rates_out, rates_config, mode = "divide";
    auto* rates = app.add_subcommand("rates", "Turn PoE CSVs into rate tables with a minimax row");
    rates->add_option("--csv", csvs, "PoE CSV file or directory (repeatable)")->required();
    rates->add_option("--measure", measure, "h1 or h2")->check(CLI::IsMember({"h1", "h2"}));
    rates->add_option("--out", rates_out, "Output directory")->required();
    rates->add_option("--config", rates_config, "Config providing custom [instance] means");
    rates->add_option("--movielens-mode", mode, "divide or as-is");

    std::string suite = "all", check_out;
    std::uint64_t check_seed = 1, trials = 10000, sr_reps = 100000;
    unsigned check_workers = 1;
    bool inject = false;
    auto* check = app.add_subcommand("check", "Run the theory check suites");
    check->add_option("--suite", suite, "allocation, h3, stability, sr-exponent or all");
    check->add_option("--out", check_out, "Output directory for check_report.tsv")->required();
    check->add_option("--seed", check_seed, "Seed for randomized checks");
    check->add_option("--trials", trials, "Randomized trials per check");
    check->add_option("--replications", sr_reps, "Replications per budget for sr-exponent");
    check->add_option("--workers", check_workers, "Worker threads")->envname("BAI_WORKERS");
    check->add_flag("--inject-violation", inject)->group("");

    std::vector<std::string> ids, means;
    std::string cmode = "divide";
    auto* cx = app.add_subcommand("complexity", "Print H1, H2, H3 for instances");
    cx->add_option("--instance", ids, "Registered instance id (repeatable)");
    cx->add_option("--means", means, "Comma-separated means (repeatable)");
    cx->add_option("--movielens-mode", cmode, "divide or as-is");

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? ExitCode::ok : ExitCode::usage;
    }

    try {
        if (*sim) {
            if (*sim_seed) ov.seed = seed;
            if (*sim_reps) ov.replications = replications;
            if (*sim_workers) ov.workers = workers;
            if (*sim_cps) ov.checkpoints = checkpoints;
            return cmd_simulate(config_path, out_dir, ov, out, err);
        }
        if (*rates) return cmd_rates(csvs, measure, rates_out, rates_config, mode, out);
        if (*check) {
            return cmd_check(suite, check_out, check_seed, trials, sr_reps, std::max(1u, check_workers), inject, out);
        }
        if (*cx) return cmd_complexity(ids, means, cmode, out);
    } catch (const IoError& e) {
        err << "error: " << e.what() << "\n";
        return ExitCode::io;
    } catch (const std::filesystem::filesystem_error& e) {
        err << "error: " << e.what() << "\n";
        return ExitCode::io;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return ExitCode::usage;
    }
    return ExitCode::usage;
}

}  // namespace bai::cli
