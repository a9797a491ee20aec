#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "dilres/atom.hpp"
#include "dilres/hamiltonian.hpp"
#include "dilres/modes.hpp"
#include "dilres/spectral.hpp"

namespace dilres {

struct Check {
    std::string name;
    double measured = 0.0;
    double bound = 0.0;
    std::string relation = "<=";  // pass iff measured <relation> bound
    bool pass = false;
    nlohmann::json detail;
    std::string error;  // set when the check threw

    nlohmann::json to_json() const;
};

Check make_check(std::string name, double measured, double bound, std::string relation = "<=");

struct SuiteOptions {
    std::uint64_t seed = 0;
    // Replaces the bound of every tolerance-type check (residuals, spreads).
    std::optional<double> tolerance;
};

struct Suite {
    std::string name;
    std::vector<Check> checks;
    double seconds = 0.0;  // wall time, kept out of deterministic outputs

    bool pass() const;
};

std::vector<std::string> default_suite_names();
Suite run_suite(const std::string& name, const SuiteOptions& options);

// Individual suites.
std::vector<Check> suite_ccr_fock(const SuiteOptions& o);
std::vector<Check> suite_symmetry(const SuiteOptions& o);
std::vector<Check> suite_fine_structure(const SuiteOptions& o);
std::vector<Check> suite_resolvent(const SuiteOptions& o);
std::vector<Check> suite_slope(const SuiteOptions& o);
std::vector<Check> suite_theta(const SuiteOptions& o);
std::vector<Check> suite_degeneracy(const SuiteOptions& o);

// Builtin parameter presets shared by the suites, the CLI and the tests.
namespace presets {

inline constexpr double kToyDelta = 1.0;
inline constexpr double kToyDipole = 20.0;
inline constexpr double kToyKappa = 0.1;
inline constexpr double kToyRmax = 4.0;
inline constexpr double kToyLambda = 1.0;

AtomModel toy_atom();
ModeGrid toy_grid(int n_radial);
// Dense H(kappa, theta) with coupling g; the arguments must outlive the builder.
Builder dense_builder(const AtomModel& model, const ModeGrid& grid, const FockBasis& basis);

// Distinct hydrogen levels n = 1..n_max from the radial oracle.
std::vector<double> hydrogen_level_set(double Z, int n_max);

}  // namespace presets

}  // namespace dilres
