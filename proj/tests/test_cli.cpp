#include <catch2/catch_amalgamated.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

namespace fs = std::filesystem;
using json = nlohmann::json;

namespace {

std::string cli_path() {
    const char* p = std::getenv("MNAR_CLI");
    REQUIRE(p != nullptr);
    return p;
}

int run(const std::string& args) {
    const std::string cmd = cli_path() + " " + args + " > /dev/null 2>&1";
    int status = std::system(cmd.c_str());
    return WEXITSTATUS(status);
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p);
    REQUIRE(in.good());
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

json read_json(const fs::path& p) { return json::parse(slurp(p)); }

struct TempDir {
    fs::path path;
    TempDir() {
        path = fs::temp_directory_path() /
               ("mnar_cli_" + std::to_string(std::rand()));
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
    std::string dir(const std::string& name) const { return (path / name).string(); }
};

}  // namespace

TEST_CASE("simulate is replayable byte-for-byte") {
    TempDir tmp;
    REQUIRE(run("simulate --n 40 --rank 4 --f quad --seed 9 --out " +
                tmp.dir("a")) == 0);
    REQUIRE(run("simulate --n 40 --rank 4 --f quad --seed 9 --out " +
                tmp.dir("b")) == 0);
    REQUIRE(slurp(tmp.path / "a/truth.csv") == slurp(tmp.path / "b/truth.csv"));
    REQUIRE(slurp(tmp.path / "a/observed.csv") ==
            slurp(tmp.path / "b/observed.csv"));
    auto manifest = read_json(tmp.path / "a/manifest.json");
    REQUIRE(manifest["seed"] == 9);
    REQUIRE(manifest["f"] == "quad");
}

TEST_CASE("estimate usvt end to end with and without truth") {
    TempDir tmp;
    REQUIRE(run("simulate --n 60 --rank 5 --f quad --seed 3 --out " +
                tmp.dir("sim")) == 0);
    REQUIRE(run("estimate --observed " + tmp.dir("sim") +
                "/observed.csv --truth " + tmp.dir("sim") +
                "/truth.csv --method usvt --out " + tmp.dir("est")) == 0);
    auto report = read_json(tmp.path / "est/report.json");
    REQUIRE(report["method"] == "usvt");
    REQUIRE(report.contains("mse"));
    REQUIRE(report["mse"].get<double>() >= 0.0);
    REQUIRE(report["wall_time_seconds"].get<double>() >= 0.0);
    REQUIRE(fs::exists(tmp.path / "est/estimate.csv"));

    // missing-truth mode omits mse but still writes the estimate
    REQUIRE(run("estimate --observed " + tmp.dir("sim") +
                "/observed.csv --method usvt --out " + tmp.dir("est2")) == 0);
    auto report2 = read_json(tmp.path / "est2/report.json");
    REQUIRE_FALSE(report2.contains("mse"));
    REQUIRE(fs::exists(tmp.path / "est2/estimate.csv"));
}

TEST_CASE("estimate candes_recht converges on a small instance") {
    TempDir tmp;
    // n must be large enough for exact recovery; n=40 is not identifiable
    REQUIRE(run("simulate --n 60 --rank 4 --f quad --seed 5 --out " +
                tmp.dir("sim")) == 0);
    REQUIRE(run("estimate --observed " + tmp.dir("sim") +
                "/observed.csv --truth " + tmp.dir("sim") +
                "/truth.csv --method candes_recht --out " + tmp.dir("est")) == 0);
    auto report = read_json(tmp.path / "est/report.json");
    REQUIRE(report["diagnostics"]["converged"] == true);
    REQUIRE(report["mse"].get<double>() < 1e-6);

    // starved iteration budget exits with the non-convergence code
    REQUIRE(run("estimate --observed " + tmp.dir("sim") +
                "/observed.csv --method candes_recht --max-iters 2 --out " +
                tmp.dir("est3")) == 4);
}

TEST_CASE("estimate-f writes interval rows and ISE") {
    TempDir tmp;
    REQUIRE(run("simulate --n 60 --rank 5 --f quad --seed 7 --out " +
                tmp.dir("sim")) == 0);
    REQUIRE(run("estimate --observed " + tmp.dir("sim") +
                "/observed.csv --method usvt --out " + tmp.dir("est")) == 0);
    REQUIRE(run("estimate-f --observed " + tmp.dir("sim") + "/observed.csv" +
                " --estimate " + tmp.dir("est") + "/estimate.csv --b 10" +
                " --seed 2 --f quad --truth " + tmp.dir("sim") +
                "/truth.csv --out " + tmp.dir("fh")) == 0);
    auto report = read_json(tmp.path / "fh/report.json");
    REQUIRE(report["intervals"] == 22);  // 2b+2
    REQUIRE(report.contains("ise"));

    // 2b+2 data rows plus header
    std::string fhat = slurp(tmp.path / "fh/fhat.csv");
    REQUIRE(std::count(fhat.begin(), fhat.end(), '\n') == 23);
}

TEST_CASE("energy-curve output") {
    TempDir tmp;
    REQUIRE(run("simulate --n 50 --rank 7 --f quad --seed 2 --out " +
                tmp.dir("sim")) == 0);
    const std::string out = tmp.dir("curve.csv");
    REQUIRE(run("energy-curve --input " + tmp.dir("sim") + "/truth.csv --out " +
                out) == 0);
    std::ifstream in(out);
    std::string header;
    std::getline(in, header);
    REQUIRE(header == "k,cumulative_energy");
    int k;
    double e = 0.0, last = 0.0;
    char comma;
    int rows = 0;
    while (in >> k >> comma >> e) {
        REQUIRE(e >= last - 1e-15);
        last = e;
        ++rows;
    }
    REQUIRE(rows == 50);
    REQUIRE(last == Catch::Approx(1.0).margin(1e-12));
}

TEST_CASE("experiment aggregates seed medians") {
    TempDir tmp;
    const std::string out = tmp.dir("exp.json");
    REQUIRE(run("experiment --n 40 --rank 4 --f quad --seed 1 --seeds 3 "
                "--method usvt --out " + out) == 0);
    auto report = read_json(out);
    REQUIRE(report["mse_per_seed"].size() == 3);
    REQUIRE(report["mse_median"].get<double>() >= 0.0);
}

TEST_CASE("exit codes distinguish config and I/O errors") {
    TempDir tmp;
    // unknown method -> config error
    REQUIRE(run("simulate --n 20 --rank 3 --f quad --seed 1 --out " +
                tmp.dir("sim")) == 0);
    REQUIRE(run("estimate --observed " + tmp.dir("sim") +
                "/observed.csv --method bogus --out " + tmp.dir("x")) == 2);
    // missing input file -> I/O error
    REQUIRE(run("estimate --observed /nonexistent.csv --method usvt --out " +
                tmp.dir("y")) == 3);
    // invalid f-spec -> config error
    REQUIRE(run("simulate --n 20 --rank 3 --f wiggle --seed 1 --out " +
                tmp.dir("z")) == 2);
}
