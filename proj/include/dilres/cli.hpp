#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "dilres/atom.hpp"
#include "dilres/fock.hpp"
#include "dilres/modes.hpp"
#include "dilres/types.hpp"

namespace dilres {

// Exit codes of the dilres tool.
enum ExitCode : int { kExitOk = 0, kExitCheckFailure = 1, kExitConfigError = 2, kExitNumericalAbort = 3 };

// Configuration problems; always mapped to kExitConfigError.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct ModelSpec {
    std::string kind = "toy";  // toy | hydrogen-sp | hydrogen-fine-structure | file
    double delta = 1.0;        // toy level spacing
    double dipole = 20.0;      // toy D_z = dipole sigma_x
    double Z = 1.0;
    double beta = 1e-3;
    double eps = 0.1;
    double spin = 0.5;
    std::string path;     // model JSON for kind = file
    double zeeman = 0.0;  // symmetry-breaking zeeman * S_z added to h_el
};

struct GridSpec {
    int n_radial = 2;
    double r_max = 4.0;
    std::string group = "inversion-only";
    double lambda = 1.0;
};

struct ScanSpec {
    cplx kappa_start{0.0};
    cplx kappa_end{0.1};
    cplx theta{0.0};
    double g = 1.0;
    int steps = 10;
    int level = 0;
    bool rescaled = false;  // spectrum only: assemble the level-rescaled operator
    double margin = 0.2;
};

struct VerifySpec {
    std::vector<std::string> suites;  // empty: the full default suite
    std::optional<double> tolerance;  // replaces every tolerance-type bound when set
};

struct RunConfig {
    ModelSpec model;
    GridSpec grid;
    int n_ph = 1;
    ScanSpec scan;
    VerifySpec verify;
    std::string out_dir = "out";
    std::uint64_t seed = 0;
    std::string source;  // path the config was read from, if any

    nlohmann::json to_json() const;
};

RunConfig parse_config(const std::string& toml_text, const std::string& source = "<string>");
RunConfig load_config(const std::string& path);
// Checks cross-field preconditions and referenced files; throws ConfigError.
void validate(const RunConfig& config);

AtomModel build_model(const ModelSpec& spec);
ModeGrid build_grid(const GridSpec& spec);

// Commands write their files into config.out_dir and return an exit code.
int cmd_spectrum(const RunConfig& config);
int cmd_scan(const RunConfig& config);
int cmd_verify(const RunConfig& config);

// Dispatches by name and maps exceptions to exit codes, printing a single
// "error: <reason>" line to stderr on failure.
int run_command(const std::string& name, const RunConfig& config);

void write_text(const std::string& path, const std::string& text);

}  // namespace dilres
