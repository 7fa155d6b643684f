// Drives the installed binary end to end and checks the documented exit
// codes: 0 pass, 1 verdict failure, 2 config/io, 3 solver.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>

#include "spikelab/config.hpp"

namespace fs = std::filesystem;

namespace {

std::string binary() {
    const char* bin = std::getenv("SPIKELAB_BIN");
    REQUIRE(bin != nullptr);
    return bin;
}

int run_cmd(const std::string& args) {
    const int status = std::system((binary() + " " + args + " >/dev/null 2>&1").c_str());
    return WEXITSTATUS(status);
}

fs::path write_config(const std::string& name, const std::string& text) {
    const fs::path dir = fs::temp_directory_path() / "spikelab_cli_test";
    fs::create_directories(dir);
    const fs::path p = dir / name;
    std::ofstream(p) << text;
    return p;
}

// Small enough to run in a blink; the enabled verdicts (exact identity,
// informational medians, loose moment bounds) hold at toy scale, unlike the
// CLT variance bands which need the reference sizes.
const char* kGood = R"({
  "ensemble": {"n": 48, "profile": {"family": "const"}, "law": {"kind": "gaussian"},
    "spike": {"theta": "n", "alphas": [1.0], "signals": [{"family": "const"}]}},
  "replicates": 120, "master_seed": 3,
  "statistics": ["resolvent_oracle", "delocalization", "concentration"]
})";

}  // namespace

TEST_CASE("run: good config exits 0 and writes the three artifacts") {
    const auto cfg = write_config("good.cfg", kGood);
    const fs::path out = fs::temp_directory_path() / "spikelab_cli_test" / "out_good";
    CHECK(run_cmd("run --config " + cfg.string() + " --out " + out.string() + " --samples") == 0);
    CHECK(fs::exists(out / "summary.json"));
    CHECK(fs::exists(out / "manifest.json"));
    CHECK(fs::exists(out / "samples.csv"));
}

TEST_CASE("run: non-monotone alphas exit 2") {
    const auto cfg = write_config("bad_alpha.cfg", R"({
      "ensemble": {"n": 32, "spike": {"theta": "n", "alphas": [1.0, 2.0],
        "signals": [{"family": "const"}, {"family": "cos", "m": 1}]}},
      "replicates": 100, "statistics": []})");
    CHECK(run_cmd("run --config " + cfg.string() + " --out /tmp/spikelab_cli_na") == 2);
}

TEST_CASE("run: unwritable output directory exits 2") {
    const auto cfg = write_config("good2.cfg", kGood);
    CHECK(run_cmd("run --config " + cfg.string() + " --out /proc/nope") == 2);
}

TEST_CASE("theory: prints predictions and exits 0; missing file exits 2") {
    const auto cfg = write_config("good3.cfg", kGood);
    CHECK(run_cmd("theory --config " + cfg.string()) == 0);
    CHECK(run_cmd("theory --config /does/not/exist.cfg") == 2);
}

TEST_CASE("report: merges runs, rejects corrupt summaries") {
    const auto cfg = write_config("good4.cfg", kGood);
    const fs::path out = fs::temp_directory_path() / "spikelab_cli_test" / "out_rep";
    REQUIRE(run_cmd("run --config " + cfg.string() + " --out " + out.string()) == 0);
    const fs::path csv = fs::temp_directory_path() / "spikelab_cli_test" / "table.csv";
    CHECK(run_cmd("report " + out.string() + " --csv " + csv.string()) == 0);
    CHECK(fs::exists(csv));

    const auto corrupt = write_config("corrupt_summary.json", "{ not json");
    CHECK(run_cmd("report " + corrupt.string()) == 2);
}

TEST_CASE("run: master seed override changes the summary, reruns reproduce bytes") {
    const auto cfg = write_config("good5.cfg", kGood);
    const fs::path base = fs::temp_directory_path() / "spikelab_cli_test";
    REQUIRE(run_cmd("run --config " + cfg.string() + " --out " + (base / "a").string()) == 0);
    REQUIRE(run_cmd("run --config " + cfg.string() + " --out " + (base / "b").string()) == 0);
    REQUIRE(run_cmd("run --config " + cfg.string() + " --out " + (base / "c").string() +
                    " --master-seed 77") == 0);
    const auto slurp = [](const fs::path& p) {
        return spikelab::read_text_file((p / "summary.json").string());
    };
    CHECK(slurp(base / "a") == slurp(base / "b"));
    CHECK(slurp(base / "a") != slurp(base / "c"));
}
