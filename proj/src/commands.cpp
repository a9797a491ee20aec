#include <Eigen/Core>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <set>

#include "dilres/cli.hpp"
#include "dilres/hamiltonian.hpp"
#include "dilres/spectral.hpp"
#include "dilres/verify.hpp"

namespace dilres {

namespace {

constexpr const char* kVersion = "0.1.0";

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

std::string out_path(const RunConfig& c, const char* file) { return (std::filesystem::path(c.out_dir) / file).string(); }

void write_json(const std::string& path, const nlohmann::json& j) { write_text(path, j.dump(2) + "\n"); }

// Every numerical convention the outputs depend on, so a manifest fully
// describes how its files were produced.
nlohmann::json conventions() {
    return {{"units", "4Ry=1 (hbar = 2m = 1)"},
            {"coupling_prefactor", "exp(-2 theta)"},
            {"cutoff", "gaussian exp(-(k/Lambda)^2)"},
            {"quadrature", "gauss-legendre radial on (0, r_max) x equal-weight direction orbit"},
            {"polarization_gauge", "e1 = khat x z (khat x x if parallel), e2 = khat x e1"},
            {"fock_order", "lexicographic occupations, vacuum first"},
            {"eigensolver", "LAPACK zgeev"},
            {"cluster_tol_rel", 1e-9},
            {"residual_tol_rel", 1e-8},
            {"symmetry_tol", 1e-10},
            {"tracking", {{"gap_ratio", 3.0}, {"max_halvings", 10}, {"split_tol_rel", 1e-9}}},
            {"resolvent_margin", 0.2},
            {"dense_limit", kDenseLimit},
            {"fock_hard_cap", 200000}};
}

nlohmann::json csv_schemas() {
    return {{"spectrum", {{"version", 1}, {"columns", {"index", "E_re", "E_im", "residual", "cluster", "multiplicity"}}}},
            {"trajectory",
             {{"version", 1},
              {"columns",
               {"kappa_re", "kappa_im", "theta_re", "theta_im", "E_re", "E_im", "cluster_spread", "residual", "g",
                "seed_distance"}}}}};
}

nlohmann::json manifest(const RunConfig& c, const std::string& command) {
    nlohmann::json j;
    j["schema_version"] = 1;
    j["command"] = command;
    j["versions"] = {{"dilres", kVersion},
                     {"eigen", std::to_string(EIGEN_WORLD_VERSION) + "." + std::to_string(EIGEN_MAJOR_VERSION) + "." +
                                   std::to_string(EIGEN_MINOR_VERSION)},
                     {"compiler", __VERSION__}};
    j["config"] = c.to_json();
    j["conventions"] = conventions();
    j["csv_schema"] = csv_schemas();
    return j;
}

struct Setup {
    AtomModel model;
    ModeGrid grid;
    FockBasis basis;
};

Setup setup(const RunConfig& c) {
    AtomModel model = build_model(c.model);
    ModeGrid grid = build_grid(c.grid);
    FockBasis basis = build_fock_basis(grid, c.n_ph);
    if (static_cast<double>(model.dim()) * static_cast<double>(basis.dim()) > kDenseLimit)
        throw ConfigError("fock: total dimension above the dense limit " + std::to_string(kDenseLimit));
    if (c.scan.level >= static_cast<int>(model.levels().size())) throw ConfigError("scan: level index out of range");
    return {std::move(model), std::move(grid), std::move(basis)};
}

nlohmann::json describe(const Setup& s) {
    nlohmann::json levels = nlohmann::json::array();
    for (const Level& l : s.model.levels()) levels.push_back({{"energy", l.energy}, {"multiplicity", l.multiplicity}});
    return {{"model", s.model.name()},     {"atom_dim", s.model.dim()}, {"atom_levels", levels},
            {"grid", s.grid.id()},         {"n_modes", s.grid.size()},  {"fock_dim", s.basis.dim()},
            {"dim", s.model.dim() * static_cast<Eigen::Index>(s.basis.dim())}};
}

void prepare_output(const RunConfig& c) {
    std::error_code ec;
    std::filesystem::create_directories(c.out_dir, ec);
    if (ec) throw ConfigError("output: cannot create directory " + c.out_dir);
}

}  // namespace

void write_text(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ConfigError("output: cannot write " + path);
    out << text;
}

int cmd_spectrum(const RunConfig& c) {
    const auto t0 = Clock::now();
    validate(c);
    prepare_output(c);
    const Setup s = setup(c);
    const KappaPair kappa = KappaPair::uniform(c.scan.kappa_end);
    DilatedHamiltonian h;
    nlohmann::json gap_json = nullptr;
    if (c.scan.rescaled) {
        const GapData gap = spectral_gap(s.model, c.scan.level, c.scan.margin);
        gap_json = {{"level", gap.j}, {"delta", gap.delta}, {"delta_check", gap.delta_check}, {"tau", gap.tau}};
        h = assemble_rescaled(s.model, s.grid, s.basis, kappa, c.scan.theta, c.scan.g, gap);
    } else {
        h = assemble_H(s.model, s.grid, s.basis, kappa, c.scan.theta, c.scan.g);
    }
    SpectrumResult r = eigs(h.matrix);
    r.params = h.params.to_json();
    write_text(out_path(c, "spectrum.csv"), spectrum_csv(r));

    nlohmann::json m = manifest(c, "spectrum");
    m["setup"] = describe(s);
    m["gap"] = gap_json;
    m["spectrum"] = to_json(r);
    m["outputs"] = {"spectrum.csv", "manifest.json", "timing.json"};
    write_json(out_path(c, "manifest.json"), m);
    write_json(out_path(c, "timing.json"), {{"wall_seconds", seconds_since(t0)}});
    return kExitOk;
}

int cmd_scan(const RunConfig& c) {
    const auto t0 = Clock::now();
    validate(c);
    prepare_output(c);
    const Setup s = setup(c);
    const PathPoint a{KappaPair::uniform(c.scan.kappa_start), c.scan.theta, c.scan.g};
    const PathPoint b{KappaPair::uniform(c.scan.kappa_end), c.scan.theta, c.scan.g};
    const Seed seed = atomic_seed(s.model, s.basis, c.scan.level);
    const ResonanceTrajectory t =
        track_resonance(presets::dense_builder(s.model, s.grid, s.basis), linear_path(a, b, c.scan.steps), seed);
    write_text(out_path(c, "trajectory.csv"), trajectory_csv(t));

    nlohmann::json m = manifest(c, "scan");
    m["setup"] = describe(s);
    m["seed"] = {{"level", seed.level}, {"d", seed.d}, {"energy", seed.energy.real()}};
    m["events"] = t.events;
    m["aborted"] = t.aborted;
    m["abort_reason"] = t.abort_reason;
    m["points"] = t.points.size();
    m["outputs"] = {"trajectory.csv", "manifest.json", "timing.json"};
    write_json(out_path(c, "manifest.json"), m);
    write_json(out_path(c, "timing.json"), {{"wall_seconds", seconds_since(t0)}});
    if (t.aborted) {
        std::cerr << "error: scan aborted: " << t.abort_reason << "\n";
        return kExitNumericalAbort;
    }
    return kExitOk;
}

int cmd_verify(const RunConfig& c) {
    const auto t0 = Clock::now();
    validate(c);
    std::vector<std::string> names = c.verify.suites.empty() ? default_suite_names() : c.verify.suites;
    const auto known = default_suite_names();
    for (const std::string& n : names)
        if (std::find(known.begin(), known.end(), n) == known.end()) throw ConfigError("verify: unknown suite " + n);
    prepare_output(c);

    const SuiteOptions opts{c.seed, c.verify.tolerance};
    nlohmann::json checks = nlohmann::json::array();
    nlohmann::json timing = {{"suites", nlohmann::json::object()}};
    bool all = true;
    for (const std::string& n : names) {
        const Suite suite = run_suite(n, opts);
        timing["suites"][n] = suite.seconds;
        for (const Check& ch : suite.checks) {
            nlohmann::json j = ch.to_json();
            j["suite"] = n;
            checks.push_back(j);
        }
        all = all && suite.pass();
    }
    write_json(out_path(c, "verify.json"), {{"schema_version", 1}, {"seed", c.seed}, {"pass", all}, {"checks", checks}});
    nlohmann::json m = manifest(c, "verify");
    m["suites"] = names;
    m["outputs"] = {"verify.json", "manifest.json", "timing.json"};
    write_json(out_path(c, "manifest.json"), m);
    timing["wall_seconds"] = seconds_since(t0);
    write_json(out_path(c, "timing.json"), timing);
    return all ? kExitOk : kExitCheckFailure;
}

int run_command(const std::string& name, const RunConfig& config) {
    try {
        if (name == "spectrum") return cmd_spectrum(config);
        if (name == "scan") return cmd_scan(config);
        if (name == "verify") return cmd_verify(config);
        throw ConfigError("cli: unknown command " + name);
    } catch (const ConfigError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitConfigError;
    } catch (const InvalidArgument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitConfigError;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitNumericalAbort;
    }
}

}  // namespace dilres
