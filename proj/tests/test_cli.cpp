// SPDX-License-Identifier: Apache-2.0

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sys/wait.h>
#include <unistd.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "sparsechan/drop_io.hpp"
#include "sparsechan/gini.hpp"

namespace fs = std::filesystem;

namespace {

struct RunResult {
    int exit_code = -1;
    std::string out;
    std::string err;
};

std::string slurp(const fs::path& p) {
    std::ifstream f(p);
    std::stringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

class Sandbox {
  public:
    Sandbox() {
        dir_ = fs::temp_directory_path() /
               ("sparsechan_cli_" + std::to_string(::getpid()) + "_" + std::to_string(counter_++));
        fs::create_directories(dir_);
    }
    ~Sandbox() { fs::remove_all(dir_); }
    const fs::path& dir() const { return dir_; }

    RunResult run(const std::string& args) const {
        const fs::path out = dir_ / "stdout.log";
        const fs::path err = dir_ / "stderr.log";
        const std::string cmd = std::string(CLI_BIN) + " " + args + " >" + out.string() + " 2>" +
                                err.string();
        const int status = std::system(cmd.c_str());
        RunResult r;
        r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
        r.out = slurp(out);
        r.err = slurp(err);
        return r;
    }

  private:
    fs::path dir_;
    static inline int counter_ = 0;
};

}  // namespace

TEST_CASE("generate writes deterministic drop files") {
    Sandbox sb;
    const std::string out_a = (sb.dir() / "a").string();
    const std::string out_b = (sb.dir() / "b").string();
    CHECK(sb.run("generate --band subTHz --mode ick --drops 3 --seed 11 --out " + out_a)
              .exit_code == 0);
    CHECK(sb.run("generate --band subTHz --mode ick --drops 3 --seed 11 --out " + out_b)
              .exit_code == 0);
    for (int i = 0; i < 3; ++i) {
        const fs::path fa = fs::path(out_a) / ("drop_" + std::to_string(i) + ".txt");
        const fs::path fb = fs::path(out_b) / ("drop_" + std::to_string(i) + ".txt");
        REQUIRE(fs::exists(fa));
        REQUIRE(fs::exists(fb));
        CHECK(slurp(fa) == slurp(fb));
    }
}

TEST_CASE("usage errors exit with code 1") {
    Sandbox sb;
    CHECK(sb.run("generate --band nowhere").exit_code == 1);
    CHECK(sb.run("report --table bogus --in x.csv").exit_code == 1);
    CHECK(sb.run("frobnicate").exit_code == 1);
}

TEST_CASE("metrics over generated drops") {
    Sandbox sb;
    const std::string drops = (sb.dir() / "drops").string();
    const std::string out = (sb.dir() / "m").string();
    REQUIRE(sb.run("generate --band cmWave --mode equal --drops 4 --seed 3 --out " + drops)
                .exit_code == 0);
    const RunResult r = sb.run("metrics " + drops + " --out " + out);
    CHECK(r.exit_code == 0);
    const std::string csv = slurp(fs::path(out) / "samples.csv");
    CHECK(csv.rfind("band,mode,variant,drop_index,gini", 0) == 0);
    // 4 drops x 2 variants = 8 rows + header.
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 9);
    CHECK(fs::exists(fs::path(out) / "summary.json"));

    // CSV values must equal the library metric on the file contents.
    const auto rows = sparsechan::io::read_samples_csv(fs::path(out) / "samples.csv");
    const auto drop0 = sparsechan::io::read_drop_file(fs::path(drops) / "drop_0.txt");
    for (const auto& row : rows) {
        if (row.sample.drop_index != 0) continue;
        const auto expect =
            sparsechan::gini_realization(drop0.realization, row.sample.variant, 0);
        CHECK(row.sample.value == expect.value);
    }
}

TEST_CASE("default montecarlo enumerates all twelve reports") {
    Sandbox sb;
    const RunResult r = sb.run("montecarlo --drops 30 --seed 1 --out " +
                               (sb.dir() / "mc").string());
    CHECK((r.exit_code == 0 || r.exit_code == 2));
    std::size_t lines = 0, pos = 0;
    while ((pos = r.out.find("band=", pos)) != std::string::npos) {
        ++lines;
        ++pos;
    }
    CHECK(lines == 12);  // 3 bands x 2 modes x 2 variants
}

TEST_CASE("metrics keeps going past a LoS-free drop under without_los") {
    Sandbox sb;
    const std::string drops = (sb.dir() / "drops").string();
    fs::create_directories(drops);
    REQUIRE(sb.run("generate --band cmWave --drops 1 --seed 3 --out " + drops).exit_code == 0);
    {
        std::ofstream f(fs::path(drops) / "drop_999.txt");
        f << "format 1\nseed 0\ndrop 999\nband custom\nmode equal\nhas_los 0\nrays 2\n"
          << "0 0.5 0 0 0\n1e-9 0.5 0 0 0\n";
    }
    const RunResult r = sb.run("metrics " + drops + " --variant without_los --out " +
                               (sb.dir() / "m").string());
    CHECK(r.exit_code == 0);  // the good drop still produces a sample
    CHECK(r.err.find("drop_999.txt") != std::string::npos);
}

TEST_CASE("metrics on an empty directory is an I/O error") {
    Sandbox sb;
    fs::create_directories(sb.dir() / "empty");
    CHECK(sb.run("metrics " + (sb.dir() / "empty").string()).exit_code == 3);
}

TEST_CASE("metrics scores a single-ray drop as zero with a warning") {
    Sandbox sb;
    const fs::path drop = sb.dir() / "single.txt";
    {
        std::ofstream f(drop);
        f << "format 1\nseed 0\ndrop 0\nband custom\nmode equal\nhas_los 1\nrays 1\n"
          << "0 1 0 0 1\n";
    }
    const RunResult r = sb.run("metrics " + drop.string() + " --variant with_los --out " +
                               (sb.dir() / "m").string());
    CHECK(r.exit_code == 0);
    CHECK(r.err.find("single-ray") != std::string::npos);
    const std::string csv = slurp(sb.dir() / "m" / "samples.csv");
    CHECK(csv.find("custom,equal,with_los,0,0") != std::string::npos);
}

TEST_CASE("montecarlo produces byte-identical output across workers") {
    Sandbox sb;
    const std::string args =
        "montecarlo --band subTHz --mode ick --drops 200 --seed 5 ";
    const std::string out1 = (sb.dir() / "w1").string();
    const std::string out4 = (sb.dir() / "w4").string();
    const RunResult a = sb.run(args + "--workers 1 --out " + out1);
    const RunResult b = sb.run(args + "--workers 4 --out " + out4);
    // Exit code 2 is expected: the sub-THz without-LoS row misses its gate.
    CHECK(a.exit_code == 2);
    CHECK(b.exit_code == 2);
    CHECK(slurp(fs::path(out1) / "samples.csv") == slurp(fs::path(out4) / "samples.csv"));
    CHECK(fs::exists(fs::path(out1) / "summary.json"));
    CHECK(fs::exists(fs::path(out1) / "cdf_subTHz_ick_with_los.csv"));
}

TEST_CASE("montecarlo on a custom band has nothing to gate") {
    Sandbox sb;
    const RunResult r = sb.run(
        "montecarlo --band custom --custom-clusters 4 --mode equal --drops 100 --seed 2 "
        "--svg --out " +
        (sb.dir() / "mc").string());
    CHECK(r.exit_code == 0);
    CHECK(fs::exists(sb.dir() / "mc" / "cdf_custom_equal_with_los.svg"));
}

TEST_CASE("theory-check sweeps cleanly and validates its bounds") {
    Sandbox sb;
    const RunResult ok = sb.run("theory-check --sweep 500 --seed 4");
    CHECK(ok.exit_code == 0);
    CHECK(ok.out.find("\"counterexamples\": 0") != std::string::npos);
    const RunResult usage = sb.run("theory-check --ick-linear 0.01 --m-rays 20");
    CHECK(usage.exit_code == 1);
    const RunResult single = sb.run("theory-check --ick-linear 5 --m-rays 20 --seed 4");
    CHECK(single.exit_code == 0);
    CHECK(single.out.find("\"holds\": true") != std::string::npos);
}

TEST_CASE("extract round trip on a fixture") {
    Sandbox sb;
    const std::string fx = (sb.dir() / "fx").string();
    REQUIRE(sb.run("generate --band subTHz --mode ick --drops 1 --seed 5 --fixture --out " + fx)
                .exit_code == 0);
    const RunResult r =
        sb.run("extract " + fx + " --noise-floor-db -300 --target-clusters 4");
    CHECK(r.exit_code == 0);
    CHECK(r.out.find("estimated rays: 61") != std::string::npos);
    // The sub-THz reference concentration comes back intact.
    CHECK(r.out.find("ick_db=17.99") != std::string::npos);
    CHECK(r.out.find("matched in delay: 61/61") != std::string::npos);
}

TEST_CASE("extract reports an exact bin for a noiseless single ray") {
    Sandbox sb;
    const fs::path drop = sb.dir() / "one.txt";
    {
        std::ofstream f(drop);
        // One boresight ray at bin 6 of the 1.2 GHz grid.
        f << "format 1\nseed 0\ndrop 0\nband custom\nmode equal\nhas_los 0\nrays 1\n"
          << "5e-09 1 0 0 0\n";
    }
    const RunResult with_truth = sb.run("extract " + drop.string() + " --noise-floor-db -300");
    CHECK(with_truth.exit_code == 0);
    CHECK(with_truth.out.find("estimated rays: 1") != std::string::npos);
    CHECK(with_truth.out.find("matched in delay: 1/1") != std::string::npos);

    const RunResult r = sb.run("extract " + drop.string() + " --noise-floor-db -300 --no-truth");
    CHECK(r.exit_code == 0);
    CHECK(r.out.find("estimated rays: 1") != std::string::npos);
    CHECK(r.out.find("matched in delay") == std::string::npos);  // --no-truth
}

TEST_CASE("report recomputes percentiles from a samples csv") {
    Sandbox sb;
    const std::string mc_out = (sb.dir() / "mc").string();
    REQUIRE(sb.run("montecarlo --band cmWave --mode equal --drops 300 --seed 6 --out " + mc_out)
                .exit_code == 0);
    const RunResult r = sb.run("report --in " + mc_out + "/samples.csv --out " +
                               (sb.dir() / "rep").string());
    CHECK(r.exit_code == 0);
    CHECK(r.out.find("band=cmWave") != std::string::npos);
    CHECK(fs::exists(sb.dir() / "rep" / "summary.json"));
    // Measurement rows are reference-only: comparing against them never gates.
    const RunResult meas = sb.run("report --in " + mc_out + "/samples.csv --table measurement " +
                                  "--out " + (sb.dir() / "rep2").string());
    CHECK(meas.exit_code == 0);
}

TEST_CASE("missing input is an I/O error") {
    Sandbox sb;
    CHECK(sb.run("metrics " + (sb.dir() / "nope").string()).exit_code == 3);
    CHECK(sb.run("report --in " + (sb.dir() / "nope.csv").string()).exit_code == 3);
}
