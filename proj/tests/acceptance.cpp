// One line per acceptance criterion: the verification suite must pass and
// finish inside its time budget. Exit status is nonzero if any line fails.

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "dilres/cli.hpp"
#include "dilres/verify.hpp"

using namespace dilres;
namespace fs = std::filesystem;

namespace {

struct Criterion {
    const char* suite;
    const char* title;
    double budget_seconds;
};

const Criterion kCriteria[] = {
    {"ccr_fock", "CCR & Fock invariants at 1e-12", 10.0},
    {"symmetry", "rotation/time-reversal residuals <= 1e-10, Kramers pairing", 30.0},
    {"fine_structure", "n=2 multiplicities (2,2,4), pattern (-2,0,1), c_G c_R within 1e-6", 20.0},
    {"resolvent", "measured resolvent suprema <= majorants, non-vacuous", 10.0},
    {"slope", "perturbative slope 2.00 +- 0.05, within 5% of the oracle", 60.0},
    {"theta", "theta-independence deviation decreases under refinement, Im E <= 1e-10", 300.0},
    {"degeneracy", "protected spread <= 1e-9 |H|, broken spread > 1e-5", 120.0},
};

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

bool report(bool pass, const std::string& line) {
    std::printf("[%s] %s\n", pass ? "PASS" : "FAIL", line.c_str());
    std::fflush(stdout);
    return pass;
}

}  // namespace

int main() {
    bool all = true;
    const SuiteOptions options{0, std::nullopt};
    for (const Criterion& c : kCriteria) {
        Suite s;
        std::string error;
        try {
            s = run_suite(c.suite, options);
        } catch (const std::exception& e) {
            error = e.what();
        }
        const bool in_time = s.seconds < c.budget_seconds;
        const bool ok = error.empty() && s.pass() && in_time;
        char timing[96];
        std::snprintf(timing, sizeof timing, " (%.2f s, budget %.0f s)", s.seconds, c.budget_seconds);
        all = report(ok, std::string(c.suite) + ": " + c.title + timing) && all;
        if (!error.empty()) std::printf("       error: %s\n", error.c_str());
        for (const Check& ch : s.checks)
            if (!ch.pass)
                std::printf("       failed check %s: measured %.6g %s %.6g%s\n", ch.name.c_str(), ch.measured,
                            ch.relation.c_str(), ch.bound, ch.error.empty() ? "" : (" (" + ch.error + ")").c_str());
        if (!in_time) std::printf("       over the time budget\n");
    }

    // Determinism: two verify runs with the same configuration and seed.
    {
        const fs::path root = fs::path(DILRES_TEST_TMP) / "acceptance";
        fs::remove_all(root);
        RunConfig cfg = parse_config("seed = 42\n");
        std::vector<std::string> outputs{"verify.json", "manifest.json"};
        bool same = true;
        std::string why;
        try {
            cfg.out_dir = (root / "run1").string();
            const int a = cmd_verify(cfg);
            cfg.out_dir = (root / "run2").string();
            const int b = cmd_verify(cfg);
            if (a != b) {
                same = false;
                why = "exit codes differ";
            }
            for (const std::string& f : outputs) {
                const std::string x = slurp(root / "run1" / f), y = slurp(root / "run2" / f);
                if (x.empty() || x != y) {
                    same = false;
                    why += " " + f + " differs";
                }
            }
        } catch (const std::exception& e) {
            same = false;
            why = e.what();
        }
        all = report(same, "determinism: two verify runs (seed 42) give byte-identical verify.json and manifest.json") && all;
        if (!same) std::printf("       %s\n", why.c_str());
    }
    return all ? 0 : 1;
}
