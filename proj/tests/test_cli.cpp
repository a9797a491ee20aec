#include <doctest.h>

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <sys/wait.h>

#include "dilres/cli.hpp"
#include "dilres/spectral.hpp"

using namespace dilres;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
    const fs::path p = fs::path(DILRES_TEST_TMP) / "cli" / name;
    fs::remove_all(p);
    fs::create_directories(p);
    return p;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

struct Run {
    int code;
    std::string err;
};

// Runs the dilres binary with the given config text and returns its exit code and stderr.
Run run_tool(const std::string& command, const fs::path& dir, const std::string& toml, const std::string& extra = "") {
    const fs::path cfg = dir / "config.toml";
    std::ofstream(cfg) << toml;
    const fs::path err = dir / "stderr.txt";
    const std::string cmd = std::string(DILRES_BIN) + " " + command + " --config " + cfg.string() + " --out " +
                            (dir / "out").string() + " " + extra + " 2> " + err.string();
    const int status = std::system(cmd.c_str());
    return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, slurp(err)};
}

std::vector<std::vector<std::string>> read_csv(const fs::path& p) {
    std::vector<std::vector<std::string>> rows;
    std::istringstream in(slurp(p));
    for (std::string line; std::getline(in, line);) {
        std::vector<std::string> cells;
        std::istringstream ls(line);
        for (std::string cell; std::getline(ls, cell, ',');) cells.push_back(cell);
        rows.push_back(cells);
    }
    return rows;
}

RunConfig toy_config(const fs::path& out) {
    RunConfig c = parse_config("[grid]\nn_radial = 1\n[fock]\nN_ph = 2\n");
    c.out_dir = out.string();
    return c;
}

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("config defaults and complex values") {
    const RunConfig d = parse_config("");
    CHECK(d.model.kind == "toy");
    CHECK(d.n_ph == 1);
    CHECK(d.grid.group == "inversion-only");
    CHECK(d.scan.kappa_end == cplx(0.1));
    CHECK_FALSE(d.verify.tolerance.has_value());

    const RunConfig c = parse_config(
        "seed = 7\n[scan]\nkappa_end = [0.1, 0.02]\ntheta = [0.0, 0.3]\ng = 2\n[verify]\nsuites = [\"slope\"]\ntolerance = 1e-6\n");
    CHECK(c.seed == 7);
    CHECK(c.scan.kappa_end == cplx(0.1, 0.02));
    CHECK(c.scan.theta == cplx(0.0, 0.3));
    CHECK(c.scan.g == 2.0);
    CHECK(c.verify.suites == std::vector<std::string>{"slope"});
    CHECK(*c.verify.tolerance == 1e-6);
    CHECK(c.to_json()["scan"]["theta"][1].get<double>() == 0.3);
}

TEST_CASE("config errors are reported as ConfigError") {
    CHECK_THROWS_WITH_AS(parse_config("[model]\ncolour = 1\n"), "config: unknown key model.colour", ConfigError);
    CHECK_THROWS_WITH_AS(parse_config("bogus = 1\n"), "config: unknown key bogus", ConfigError);
    CHECK_THROWS_AS(parse_config("[scan]\ntheta = [1, 2, 3]\n"), ConfigError);
    CHECK_THROWS_AS(parse_config("[grid\n"), ConfigError);
    CHECK_THROWS_AS(parse_config("[fock]\nN_ph = 1.5\n"), ConfigError);
    CHECK_THROWS_AS(validate(parse_config("[scan]\ntheta = [0, 0.8]\n")), ConfigError);
    CHECK_THROWS_AS(validate(parse_config("[grid]\ngroup = \"tetrahedral\"\n")), ConfigError);
    CHECK_THROWS_AS(validate(parse_config("[verify]\ntolerance = 0\n")), ConfigError);
    CHECK_THROWS_AS(validate(parse_config("[grid]\nn_radial = 40\ngroup = \"octahedral\"\n[fock]\nN_ph = 4\n")),
                    ConfigError);
    CHECK_THROWS_WITH_AS(load_config("/nonexistent/dilres.toml"), "config: file not found", ConfigError);
}

TEST_CASE("missing model file: exit 2 with a one-line diagnostic") {
    const fs::path dir = scratch("missing_model");
    const Run r = run_tool("spectrum", dir, "[model]\nkind = \"file\"\npath = \"nope.json\"\n");
    CHECK(r.code == 2);
    CHECK(r.err == "error: model: file not found\n");
}

TEST_CASE("exit codes for malformed invocations") {
    const fs::path dir = scratch("exit_codes");
    CHECK(run_tool("spectrum", dir, "[model]\nkind = \"toy\"\nbad = 1\n").code == 2);
    CHECK(run_tool("verify", dir, "[verify]\nsuites = [\"nonsense\"]\n").code == 2);
    CHECK(run_tool("scan", dir, "[scan]\nlevel = 5\n").code == 2);
    CHECK(run_tool("spectrum", dir, "[grid]\nn_radial = 8\ngroup = \"octahedral\"\n[fock]\nN_ph = 2\n").code == 2);
    const std::string bin = std::string(DILRES_BIN) + " frobnicate 2> /dev/null";
    const int status = std::system(bin.c_str());
    CHECK(WEXITSTATUS(status) == 2);
}

TEST_CASE("spectrum at zero coupling is the tensor-sum spectrum") {
    const fs::path dir = scratch("spectrum_g0");
    RunConfig c = toy_config(dir);
    c.scan.g = 0.0;
    c.scan.theta = cplx(0.0, 0.2);
    REQUIRE(cmd_spectrum(c) == kExitOk);
    const auto rows = read_csv(dir / "spectrum.csv");
    REQUIRE(rows.front() == std::vector<std::string>{"index", "E_re", "E_im", "residual", "cluster", "multiplicity"});

    const ModeGrid grid = build_grid(c.grid);
    const FockBasis basis = build_fock_basis(grid, c.n_ph);
    std::vector<cplx> expect;
    for (double e : {0.0, c.model.delta})
        for (std::size_t s = 0; s < basis.dim(); ++s) {
            double photons = 0.0;
            for (std::size_t i = 0; i < grid.size(); ++i) photons += basis.state(s)[i] * grid[i].omega;
            expect.push_back(e + std::exp(-c.scan.theta) * photons);
        }
    REQUIRE(rows.size() == expect.size() + 1);
    for (std::size_t r = 1; r < rows.size(); ++r) {
        const cplx e(std::stod(rows[r][1]), std::stod(rows[r][2]));
        double nearest = 1e300;
        for (const cplx& x : expect) nearest = std::min(nearest, std::abs(e - x));
        CHECK(nearest < 1e-12);
    }
}

TEST_CASE("reruns are byte-identical and the manifest is complete") {
    const fs::path a = scratch("rerun_a"), b = scratch("rerun_b");
    RunConfig ca = toy_config(a), cb = toy_config(b);
    ca.scan.theta = cb.scan.theta = cplx(0.0, 0.3);
    REQUIRE(cmd_spectrum(ca) == kExitOk);
    REQUIRE(cmd_spectrum(cb) == kExitOk);
    CHECK(slurp(a / "spectrum.csv") == slurp(b / "spectrum.csv"));
    CHECK(slurp(a / "manifest.json") == slurp(b / "manifest.json"));

    const nlohmann::json m = nlohmann::json::parse(slurp(a / "manifest.json"));
    for (const char* key : {"schema_version", "command", "versions", "config", "conventions", "csv_schema", "setup",
                            "spectrum", "outputs"})
        CHECK_MESSAGE(m.contains(key), key);
    CHECK(m["config"]["scan"]["theta"][1].get<double>() == 0.3);
    CHECK(m["conventions"].contains("polarization_gauge"));
    CHECK(m["csv_schema"]["spectrum"]["columns"].size() == 6);
    CHECK_FALSE(m.dump().find("wall") != std::string::npos);
    CHECK(nlohmann::json::parse(slurp(a / "timing.json")).contains("wall_seconds"));
}

TEST_CASE("scan: zero-length path and monotone kappa sweep") {
    const fs::path dir = scratch("scan_zero");
    RunConfig c = toy_config(dir);
    c.scan.steps = 0;
    c.scan.kappa_end = 0.05;
    REQUIRE(cmd_scan(c) == kExitOk);
    CHECK(read_csv(dir / "trajectory.csv").size() == 2);

    const fs::path sweep = scratch("scan_sweep");
    RunConfig s = toy_config(sweep);
    s.scan.steps = 8;
    s.scan.kappa_end = 0.1;
    REQUIRE(cmd_scan(s) == kExitOk);
    const auto rows = read_csv(sweep / "trajectory.csv");
    REQUIRE(rows.size() == 10);
    CHECK(rows.front().size() == 10);
    for (std::size_t r = 2; r < rows.size(); ++r) CHECK(std::stod(rows[r][4]) < std::stod(rows[r - 1][4]));
    const nlohmann::json m = nlohmann::json::parse(slurp(sweep / "manifest.json"));
    CHECK_FALSE(m["aborted"].get<bool>());
    CHECK(m["points"].get<int>() == 9);
}

TEST_CASE("scan records a split when the grid breaks a level's symmetry") {
    // The 2s/2p shell is eightfold at beta = 0; a two-direction grid is not
    // rotation invariant, so the coupling splits it into Kramers pairs.
    const fs::path dir = scratch("scan_split");
    RunConfig c = parse_config(
        "[model]\nkind = \"hydrogen-sp\"\nbeta = 0\n[grid]\nn_radial = 1\n[scan]\nlevel = 1\nkappa_end = 0.3\nsteps = 4\n");
    c.out_dir = dir.string();
    REQUIRE(cmd_scan(c) == kExitOk);
    const nlohmann::json m = nlohmann::json::parse(slurp(dir / "manifest.json"));
    CHECK(m["seed"]["d"].get<int>() == 8);
    CHECK_FALSE(m["events"].empty());
}

TEST_CASE("zeeman term lifts the Kramers-protected degeneracy of the model") {
    ModelSpec spec;
    spec.kind = "hydrogen-sp";
    CHECK(build_model(spec).levels()[0].multiplicity == 2);
    spec.zeeman = 1e-3;
    const AtomModel z = build_model(spec);
    CHECK(z.levels()[0].multiplicity == 1);
    CHECK(z.levels()[1].energy - z.levels()[0].energy == doctest::Approx(2e-3));
    spec.kind = "toy";
    CHECK_THROWS_AS(build_model(spec), ConfigError);
}

TEST_CASE("verify: tolerance override turns passes into failures") {
    const fs::path ok = scratch("verify_ok");
    CHECK(run_tool("verify", ok, "seed = 3\n[verify]\nsuites = [\"fine_structure\"]\n").code == 0);
    const nlohmann::json v = nlohmann::json::parse(slurp(ok / "out" / "verify.json"));
    CHECK(v["pass"].get<bool>());
    CHECK(v["seed"].get<int>() == 3);
    for (const auto& ch : v["checks"]) {
        CHECK(ch.contains("name"));
        CHECK(ch.contains("measured"));
        CHECK(ch.contains("bound"));
        CHECK(ch["suite"].get<std::string>() == "fine_structure");
    }

    const fs::path strict = scratch("verify_strict");
    CHECK(run_tool("verify", strict, "[verify]\nsuites = [\"fine_structure\"]\ntolerance = 1e-16\n").code == 1);
    CHECK_FALSE(nlohmann::json::parse(slurp(strict / "out" / "verify.json"))["pass"].get<bool>());

    // --seed overrides the config seed.
    const fs::path seeded = scratch("verify_seed");
    CHECK(run_tool("verify", seeded, "seed = 3\n[verify]\nsuites = [\"fine_structure\"]\n", "--seed 11").code == 0);
    CHECK(nlohmann::json::parse(slurp(seeded / "out" / "verify.json"))["seed"].get<int>() == 11);
}

}
