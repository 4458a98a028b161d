#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <string>

#include "../support/synthetic.hpp"
#include "ped/io.hpp"
#include "ped/manifest.hpp"
#include "ped/report_io.hpp"

using namespace ped;
namespace fs = std::filesystem;

namespace {

int run_cli(const std::string& args) {
    const std::string cmd = std::string(PED_CLI_PATH) + " " + args + " >/dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    return WEXITSTATUS(status);
}

struct TempDir {
    fs::path path;
    explicit TempDir(const char* tag) {
        path = fs::temp_directory_path() / (std::string("ped_cli_") + tag);
        fs::remove_all(path);
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
};

} // namespace

TEST_CASE("cli: full convert / perturb / eval / report round trip") {
    TempDir dir("roundtrip");
    ped::testing::write_synth_dataset(dir.path / "raw", 2, 64, 64, 4, 4242);
    const std::string raw = (dir.path / "raw").string();
    const std::string gt = (dir.path / "gt").string();

    CHECK(run_cli("convert-gt --input " + raw + " --output " + gt + " --categories " + raw
                  + "/categories.json --radius 2")
          == 0);
    CHECK(fs::exists(dir.path / "gt/manifest.json"));

    CHECK(run_cli("perturb --gt " + gt + "/manifest.json --out " + (dir.path / "pred").string()
                  + " --seed 7 --drop 0.25 --flip-noise 0.01")
          == 0);

    const std::string report = (dir.path / "report.json").string();
    const std::string csv = (dir.path / "report.csv").string();
    CHECK(run_cli("eval --gt " + gt + "/manifest.json --pred " + (dir.path / "pred").string()
                  + "/manifest.json --tolerance 2px --out-json " + report + " --out-csv " + csv)
          == 0);
    const Report r = read_report(report);
    CHECK(!r.categories.empty());
    CHECK(fs::exists(csv));

    CHECK(run_cli("report --json " + report + " --out-csv " + (dir.path / "again.csv").string())
          == 0);
    CHECK(read_file(csv) == read_file(dir.path / "again.csv"));
}

TEST_CASE("cli: eval --jobs 1 and --jobs 8 write byte-identical reports") {
    TempDir dir("jobs");
    ped::testing::write_synth_dataset(dir.path / "raw", 3, 64, 64, 4, 99);
    const std::string raw = (dir.path / "raw").string();
    REQUIRE(run_cli("convert-gt --input " + raw + " --output " + (dir.path / "gt").string()
                    + " --categories " + raw + "/categories.json")
            == 0);
    REQUIRE(run_cli("perturb --gt " + (dir.path / "gt/manifest.json").string() + " --out "
                    + (dir.path / "pred").string() + " --seed 3 --jitter 2")
            == 0);
    const std::string base = "eval --gt " + (dir.path / "gt/manifest.json").string() + " --pred "
                           + (dir.path / "pred/manifest.json").string() + " --tolerance 2px ";
    REQUIRE(run_cli(base + "--jobs 1 --out-json " + (dir.path / "r1.json").string()) == 0);
    REQUIRE(run_cli(base + "--jobs 8 --out-json " + (dir.path / "r8.json").string()) == 0);
    CHECK(read_file(dir.path / "r1.json") == read_file(dir.path / "r8.json"));
}

TEST_CASE("cli: loss subcommand prints the breakdown") {
    TempDir dir("loss");
    ProbMap gt(1, 2, 1);
    gt.values = {1.0f, 0.0f};
    ProbMap pred(1, 2, 1);
    pred.values = {0.9f, 0.2f};
    write_prob_map(dir.path / "gt.pedp", gt);
    write_prob_map(dir.path / "pred.pedp", pred);
    const std::string out = (dir.path / "out.json").string();
    const std::string cmd = std::string(PED_CLI_PATH) + " loss --pred "
                          + (dir.path / "pred.pedp").string() + " --gt "
                          + (dir.path / "gt.pedp").string() + " > " + out + " 2>/dev/null";
    REQUIRE(WEXITSTATUS(std::system(cmd.c_str())) == 0);
    const std::string text = read_file(out);
    CHECK(text.find("0.1642") != std::string::npos);
}

TEST_CASE("cli: exit codes distinguish usage, data and success") {
    TempDir dir("codes");
    CHECK(run_cli("") == 1);                       // no subcommand
    CHECK(run_cli("eval --gt x") == 1);            // missing required flags
    CHECK(run_cli("eval --gt /nonexistent/m.json --pred /nonexistent/p.json") == 2);
    CHECK(run_cli("report --json /nonexistent/r.json") == 2);
    // bad PEDP content is a data error
    write_file_atomic(dir.path / "junk.pedp", "JUNK");
    CHECK(run_cli("loss --pred " + (dir.path / "junk.pedp").string() + " --gt "
                  + (dir.path / "junk.pedp").string())
          == 2);
}
