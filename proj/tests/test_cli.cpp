#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "../tools/cli.hpp"
#include "bai/errors.hpp"
#include "bai/rng.hpp"

using namespace bai;
namespace fs = std::filesystem;

namespace {

struct Scratch {
    fs::path dir;
    explicit Scratch(const std::string& name) : dir(fs::temp_directory_path() / ("bai_cli_" + name)) {
        fs::remove_all(dir);
        fs::create_directories(dir);
    }
    ~Scratch() { fs::remove_all(dir); }
    fs::path write(const std::string& name, const std::string& text) const {
        std::ofstream(dir / name, std::ios::binary) << text;
        return dir / name;
    }
};

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

int call(std::vector<std::string> args, std::string* out_text = nullptr, std::string* err_text = nullptr) {
    std::ostringstream out, err;
    const int code = cli::run(args, out, err);
    if (out_text) *out_text = out.str();
    if (err_text) *err_text = err.str();
    return code;
}

const char* const kMinimal =
    "[experiment]\n"
    "instances = 9\n"
    "budget = 2000\n"
    "replications = 100\n"
    "seed = 7\n"
    "\n"
    "[algorithm simple-tracking]\n";

}  // namespace

TEST_SUITE("cli") {
    TEST_CASE("config sections") {
        const auto s = cli::parse_sections("# c\n[experiment]\nseed = 3 # note\n[algorithm a]\nkind = sr\n");
        REQUIRE(s.size() == 2);
        CHECK(s[0].entries[0] == std::pair<std::string, std::string>{"seed", "3"});
        CHECK(s[1].name == "a");
        CHECK_THROWS_AS(cli::parse_sections("seed = 3\n"), ConfigError);
        CHECK_THROWS_AS(cli::parse_sections("[experiment]\nseed\n"), ConfigError);
        CHECK_THROWS_AS(cli::parse_sections("[experiment]\nseed = 1\nseed = 2\n"), ConfigError);
        CHECK_THROWS_AS(cli::parse_sections("[weird x]\n"), ConfigError);
        CHECK_THROWS_AS(cli::parse_sections("[algorithm]\n"), ConfigError);
    }

    TEST_CASE("plan from config") {
        const auto plan = cli::plan_from_config(kMinimal, {});
        REQUIRE(plan.experiments.size() == 1);
        CHECK(plan.experiments[0].checkpoints.size() == 51);
        CHECK(plan.seed == 7);
        cli::Overrides ov;
        ov.replications = 5;
        ov.checkpoints = "100,2000";
        const auto p2 = cli::plan_from_config(kMinimal, ov);
        CHECK(p2.experiments[0].replications == 5);
        CHECK(p2.experiments[0].checkpoints == std::vector<std::uint64_t>{100, 2000});
        CHECK_THROWS_AS(cli::plan_from_config("[experiment]\ninstances = 9\n", {}), ConfigError);
        CHECK_THROWS_AS(cli::plan_from_config(std::string(kMinimal) + "[algorithm x]\nkind = sr\nc_suf = 2\n", {}),
                        ConfigError);
        CHECK_THROWS_AS(cli::plan_from_config(std::string(kMinimal) + "colour = red\n", {}), ConfigError);
        // custom instance with its own budget
        const auto p3 = cli::plan_from_config(
            "[experiment]\ninstances = mine\n[instance mine]\nmeans = 1, 0.5, 0\nbudget = 60\n[algorithm sr]\n", {});
        CHECK(p3.experiments[0].budget == 60);
        CHECK(p3.experiments[0].algorithms[0].budget == std::optional<std::uint64_t>{60});
    }

    TEST_CASE("csv schema round trip") {
        PoECurve c;
        c.algorithm = "sr";
        c.instance = "9";
        c.seed = 11;
        c.points = {make_point(40, 30, 100), make_point(2000, 0, 100)};
        c.points[0].poe = 0.1 + 0.2;  // not exactly representable in short form
        c.points[0].ci_high = 0.5;
        const auto text = cli::poe_csv(c);
        CHECK(text.rfind("algorithm,instance,t,errors,replications,poe,ci_low,ci_high,seed\n", 0) == 0);
        CHECK(text.find('\r') == std::string::npos);
        const auto back = cli::parse_poe_csv(text, "mem");
        CHECK(back.algorithm == "sr");
        CHECK(back.instance == "9");
        CHECK(back.seed == 11);
        REQUIRE(back.points.size() == 2);
        CHECK(back.points[0].poe == c.points[0].poe);
        CHECK(back.points[0].ci_low == c.points[0].ci_low);
        CHECK(back.points[1].ci_high == c.points[1].ci_high);
        CHECK(back.points[1].errors == 0);
    }

    TEST_CASE("csv schema violations name the column") {
        try {
            cli::parse_poe_csv("algorithm,instance,t,errs,replications,poe,ci_low,ci_high,seed\n", "f.csv");
            FAIL("expected a schema error");
        } catch (const DataFormatError& e) {
            CHECK(std::string(e.what()).find("'errors'") != std::string::npos);
        }
        const std::string hdr = "algorithm,instance,t,errors,replications,poe,ci_low,ci_high,seed\n";
        CHECK_THROWS_AS(cli::parse_poe_csv("", "f"), DataFormatError);
        CHECK_THROWS_AS(cli::parse_poe_csv(hdr + "a,b,1,2,3\n", "f"), DataFormatError);
        CHECK_THROWS_AS(cli::parse_poe_csv(hdr + "a,b,1,5,3,0.5,0.1,0.9,1\n", "f"), DataFormatError);
        CHECK_THROWS_AS(cli::parse_poe_csv(hdr + "a,b,1,1,4,0.25,0.3,0.9,1\n", "f"), DataFormatError);
        CHECK_THROWS_AS(cli::parse_poe_csv(hdr + "a,b,5,1,4,0.25,0.1,0.9,1\na,b,5,1,4,0.25,0.1,0.9,1\n", "f"),
                        DataFormatError);
    }

    TEST_CASE("format_real") {
        CHECK(cli::format_real(std::numeric_limits<double>::infinity()) == "inf");
        CHECK(cli::format_real(0.1) == "0.1");
        CHECK(std::stod(cli::format_real(1.0 / 3.0)) == 1.0 / 3.0);
    }

    TEST_CASE("simulate writes 51 rows and reruns are byte-identical") {
        Scratch s("simulate");
        const auto cfg = s.write("min.cfg", kMinimal);
        const auto a = s.dir / "a", b = s.dir / "b";
        REQUIRE(call({"simulate", "--config", cfg.string(), "--out", a.string()}) == 0);
        REQUIRE(call({"simulate", "--config", cfg.string(), "--out", b.string(), "--workers", "3"}) == 0);
        const auto name = cli::csv_file_name("9", "simple-tracking");
        const auto text = slurp(a / name);
        CHECK(text == slurp(b / name));
        const auto table = cli::parse_poe_csv(text, name);
        CHECK(table.points.size() == 51);
        CHECK(table.seed == 7);
        CHECK(table.points.back().t == 2000);

        const auto manifest = nlohmann::json::parse(slurp(a / "manifest.json"));
        CHECK(manifest["seed"] == 7);
        CHECK(manifest["config_text"] == kMinimal);
        CHECK(manifest["results"][0]["rows"] == 51);
        std::ostringstream hex;
        hex << std::hex << std::setw(16) << std::setfill('0') << fnv1a64(text);
        CHECK(manifest["results"][0]["fnv1a64"] == hex.str());
    }

    TEST_CASE("misspelled algorithm exits 2 and writes nothing") {
        Scratch s("typo");
        const auto cfg = s.write("bad.cfg", "[experiment]\ninstances = 9\n[algorithm simple-trackin]\n");
        std::string err;
        CHECK(call({"simulate", "--config", cfg.string(), "--out", (s.dir / "out").string()}, nullptr, &err) == 2);
        CHECK(err.find("simple-trackin") != std::string::npos);
        CHECK_FALSE(fs::exists(s.dir / "out"));

        const auto cfg2 = s.write("bad2.cfg", "[experiment]\ninstances = 99\n[algorithm sr]\n");
        CHECK(call({"simulate", "--config", cfg2.string(), "--out", (s.dir / "out").string()}) == 2);
        CHECK_FALSE(fs::exists(s.dir / "out"));
    }

    TEST_CASE("exit codes") {
        Scratch s("codes");
        CHECK(call({}) == 2);
        CHECK(call({"bogus"}) == 2);
        CHECK(call({"simulate", "--out", "x"}) == 2);
        CHECK(call({"simulate", "--config", (s.dir / "missing.cfg").string(), "--out", (s.dir / "o").string()}) == 3);
        const auto cfg = s.write("min.cfg", kMinimal);
        const auto blocker = s.write("file", "x");
        CHECK(call({"simulate", "--config", cfg.string(), "--out", (blocker / "sub").string(), "--replications",
                    "2"}) == 3);
        CHECK(call({"check", "--suite", "nope", "--out", (s.dir / "c").string()}) == 2);
        std::string out;
        CHECK(call({"--version"}, &out) == 0);
        CHECK(out.find('.') != std::string::npos);
    }

    TEST_CASE("rates: plugin value, inf cells and minimax") {
        Scratch s("rates");
        const std::string hdr = "algorithm,instance,t,errors,replications,poe,ci_low,ci_high,seed\n";
        auto row = [](const std::string& alg, const std::string& inst, std::uint64_t errors) {
            const auto p = make_point(10000, errors, 10000);
            return alg + "," + inst + ",10000," + std::to_string(errors) + ",10000," + cli::format_real(p.poe) + "," +
                   cli::format_real(p.ci_low) + "," + cli::format_real(p.ci_high) + ",1\n";
        };
        s.write("poe_9_a.csv", hdr + row("a", "9", 100));
        s.write("poe_9_b.csv", hdr + row("b", "9", 0));
        s.write("poe_4_a.csv", hdr + row("a", "4", 100));
        s.write("poe_4_b.csv", hdr + row("b", "4", 0));
        std::string out;
        REQUIRE(call({"rates", "--csv", s.dir.string(), "--out", (s.dir / "r").string()}, &out) == 0);
        const auto table = slurp(s.dir / "r" / "rates.csv");
        CHECK(table == out);
        CHECK(table.find("a,9,10000,h1,87.0") != std::string::npos);
        CHECK(table.find(",0.04006498061809") != std::string::npos);
        CHECK(table.find("b,minimax,,h1,,,,,") != std::string::npos);
        CHECK(table.find("b,minimax,,h1,,,,,inf,inf,inf") == std::string::npos);  // lower bound is finite
        CHECK(table.find("inf,inf\n") != std::string::npos);

        // instance 4 lacks algorithm c
        fs::create_directories(s.dir / "extra");
        s.write("extra/poe_9_c.csv", hdr + row("c", "9", 3));
        CHECK(call({"rates", "--csv", s.dir.string(), "--csv", (s.dir / "extra").string(), "--out",
                    (s.dir / "r2").string()}) == 2);
        CHECK(call({"rates", "--csv", (s.dir / "none.csv").string(), "--out", (s.dir / "r3").string()}) == 3);
    }

    TEST_CASE("check exit status") {
        Scratch s("check");
        std::string out;
        CHECK(call({"check", "--suite", "h3", "--out", s.dir.string()}, &out) == 0);
        const auto report = slurp(s.dir / "check_report.tsv");
        std::size_t instance_lines = 0;
        for (int i = 1; i <= 10; ++i) {
            instance_lines += report.find("h3-band instance-" + std::to_string(i) + "\tpass") != std::string::npos;
        }
        CHECK(instance_lines == 10);
        CHECK(call({"check", "--suite", "allocation", "--trials", "300", "--out", s.dir.string()}) == 0);
        CHECK(call({"check", "--suite", "allocation", "--trials", "300", "--inject-violation", "--out",
                    s.dir.string()}) == 4);
        CHECK(slurp(s.dir / "check_report.tsv").find("\tfail\t") != std::string::npos);
    }

    TEST_CASE("complexity") {
        std::string out;
        CHECK(call({"complexity", "--means", "1,0"}, &out) == 0);
        CHECK(out.find("custom,2,1,1,2,8,8,1,1\n") != std::string::npos);
        CHECK(call({"complexity", "--means", "1,1"}) == 2);
    }
}
