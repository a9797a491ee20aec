#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "dilres/types.hpp"

namespace dilres {

// Quantum numbers of a basis vector; negative values mean "not applicable".
struct StateLabel {
    std::string name;
    int n = -1;
    int l = -1;
    double j = -1.0;
    double mj = 0.0;
};

struct Level {
    double energy = 0.0;
    int multiplicity = 0;
    std::vector<int> columns;  // eigenvector columns belonging to this level
};

// How the model basis sits inside (real orbitals) x (spin-1/2)^{x N}. Needed
// for rotations and time reversal; models without it only support what does
// not require locating tensor factors.
struct OrbitalStructure {
    std::vector<int> orbital_l;  // per block: 0 (s), 1 (p_x, p_y, p_z), -1 (one real function, no rotation data)
    CMatrix to_product;          // columns: model basis vectors in product coordinates

    int orbital_dim() const;
};

class AtomModel {
public:
    AtomModel(std::string name, CMatrix h_el, std::array<CMatrix, 3> dipole, std::array<CMatrix, 3> spin,
              std::vector<StateLabel> labels = {}, int n_particles = 1, double spin_value = 0.0,
              std::optional<OrbitalStructure> structure = std::nullopt);

    const std::string& name() const { return name_; }
    Eigen::Index dim() const { return h_el_.rows(); }
    const CMatrix& h_el() const { return h_el_; }
    const std::array<CMatrix, 3>& dipole() const { return dipole_; }
    const std::array<CMatrix, 3>& spin() const { return spin_; }
    const std::vector<StateLabel>& labels() const { return labels_; }
    int n_particles() const { return n_particles_; }
    double spin_value() const { return spin_value_; }
    const std::optional<OrbitalStructure>& structure() const { return structure_; }

    const RVector& energies() const { return energies_; }
    const CMatrix& eigenvectors() const { return eigenvectors_; }
    const std::vector<Level>& levels() const { return levels_; }
    // Orthonormal basis of the eigenspace of distinct level j.
    CMatrix level_basis(int j) const;

    // Returns a copy with h_el replaced by h_el + delta (e.g. a symmetry-breaking term).
    AtomModel perturbed(const CMatrix& delta, const std::string& suffix) const;

private:
    std::string name_;
    CMatrix h_el_;
    std::array<CMatrix, 3> dipole_;
    std::array<CMatrix, 3> spin_;
    std::vector<StateLabel> labels_;
    int n_particles_;
    double spin_value_;
    std::optional<OrbitalStructure> structure_;
    RVector energies_;
    CMatrix eigenvectors_;
    std::vector<Level> levels_;
};

// Distinct values of a sorted spectrum, clustered at relative tolerance tol.
std::vector<Level> cluster_levels(const RVector& sorted_energies, double tol = 1e-9);

std::array<CMatrix, 3> pauli_matrices();

// --- radial hydrogen oracle -------------------------------------------------

struct RadialGrid {
    double h = 0.01;
    int n = 0;  // interior points r_i = (i+1) h, i = 0..n-1; Dirichlet at 0 and (n+1) h
    int l = 0;

    double r(int i) const { return (i + 1) * h; }
    double r_max() const { return (n + 1) * h; }
};

RadialGrid make_radial_grid(double r_max, double h, int l);
// A grid adequate for shells up to n_max at charge Z.
RadialGrid default_radial_grid(double Z, int n_max, int l);

struct RadialStates {
    RadialGrid grid;
    RVector energies;
    RMatrix u;  // columns with h * sum u^2 = 1, positive near the origin
    double refinement_shift = 0.0;
};

RadialStates hydrogen_levels(double Z, int l, int n_states, const RadialGrid& grid);

double nu_epsilon(double r, double eps);

// c_R(eps) = <phi_{2,1}| nu_eps |phi_{2,1}> from the radial oracle.
double spin_orbit_radial(double Z, double eps, const RadialGrid& grid);
double spin_orbit_radial(const RadialStates& p_states, int index, double eps);
// The L.S convention constant (L.S = (J^2 - L^2 - S^2)/2 with S^2 = s(s+1)).
inline constexpr double kSpinOrbitCG = 0.5;

// <a| r |b> for radial channel functions on a common grid.
double radial_dipole(const RadialStates& a, int ia, const RadialStates& b, int ib);

struct UncertaintyProbe {
    double lhs = 0.0;  // int |psi|^2 / (4 |x|^2) d^3x
    double rhs = 0.0;  // int |grad psi|^2 d^3x
    bool holds(double tol = 1e-12) const { return lhs <= rhs * (1.0 + tol); }
};
// u is the channel function r psi(r) sampled on the grid interior.
UncertaintyProbe uncertainty_probe(const RVector& u, const RadialGrid& grid);

// --- builtin models ---------------------------------------------------------

// Two-level spin-0 atom: levels {0, delta}, dipole D_z = d sigma_x.
AtomModel toy_two_level(double delta, double d);

// Hydrogen 1s, 2s, 2p_{x,y,z} (real orbitals), optionally times spin-1/2, with
// first-order spin-orbit beta c_R(eps) L.S on the 2p shell.
AtomModel hydrogen_sp(double Z, double spin_value, double beta, double eps, const RadialGrid* grid = nullptr);

struct FineStructureData {
    double c_R = 0.0;
    double c_G = kSpinOrbitCG;
    double E2 = 0.0;
};
// The n = 2 shell in the coupled |l, j, m_j> basis (8 states).
AtomModel fine_structure_model(double Z, double beta, double eps, const RadialGrid& radial,
                               FineStructureData* data = nullptr);

// --- gaps and rescaling -----------------------------------------------------

struct GapData {
    int j = 0;
    double energy = 0.0;
    double delta = 0.0;
    double delta_check = 0.0;
    double tau = 0.0;
    double margin = 0.0;  // the excited-level angle margin used for delta_check
};

GapData spectral_gap(const std::vector<double>& distinct_levels, int j, double margin = 0.2);
GapData spectral_gap(const AtomModel& model, int j, double margin = 0.2);

CMatrix rescaled_atom(const AtomModel& model, const GapData& gap, cplx theta);

// --- serialization ----------------------------------------------------------

nlohmann::json to_json(const AtomModel& model);
AtomModel atom_from_json(const nlohmann::json& j);
nlohmann::json matrix_to_json(const CMatrix& m);
CMatrix matrix_from_json(const nlohmann::json& j);

// Clebsch-Gordan coefficient <j1 m1; j2 m2 | J M> (Condon-Shortley phases).
double clebsch_gordan(double j1, double m1, double j2, double m2, double J, double M);

// Orbital angular momentum L_a on the real Cartesian p triplet: (L_a)_{bc} = -i eps_{abc}.
std::array<CMatrix, 3> p_orbital_angular_momentum();
// Change of basis from spherical |1,m> (m = 1, 0, -1) to Cartesian p_{x,y,z}:
// columns are |1,m> in Cartesian coordinates.
CMatrix spherical_to_cartesian_p();

}  // namespace dilres
