#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "dilres/atom.hpp"
#include "dilres/fock.hpp"
#include "dilres/modes.hpp"
#include "dilres/types.hpp"

namespace dilres {

// Coupling constants of the dipole (k1) and magnetic (k2) terms. Physical
// runs use k1 = k2 = kappa; keeping them separate allows switching either off.
struct KappaPair {
    cplx k1{0.0};
    cplx k2{0.0};

    static KappaPair uniform(cplx k) { return {k, k}; }
    KappaPair conj() const { return {std::conj(k1), std::conj(k2)}; }
};

struct CouplingFunction {
    // G_i(kappa, theta): atomic operator multiplying a*_i.
    std::vector<CMatrix> creation;
    // G_i(conj kappa, conj theta)^dagger: atomic operator multiplying a_i.
    std::vector<CMatrix> annihilation;
    KappaPair kappa;
    cplx theta{0.0};
    // Dilated photon energies e^{-theta} omega_i as seen by the free part of
    // the Hamiltonian this coupling belongs to.
    std::vector<cplx> field_energies;
};

// Per-mode matrices
//   sqrt(w_i) e^{-2 theta} rho(e^{-theta} k_i) omega_i^{-1/2}
//     (k1^3 omega_i i D.eps_i + k2^5 i S.(k_i x eps_i)).
std::vector<CMatrix> coupling_matrices(const AtomModel& model, const ModeGrid& grid, KappaPair kappa, cplx theta);

CouplingFunction coupling_G(const AtomModel& model, const ModeGrid& grid, KappaPair kappa, cplx theta);

// sum_i [annihilation_i (x) a_i + creation_i (x) a*_i] on atom (x) Fock.
SparseCMatrix interaction_W(const CouplingFunction& G, const FockBasis& basis);

struct HamiltonianParams {
    KappaPair kappa;
    cplx theta{0.0};
    double g = 1.0;
    std::string model_id;
    std::string grid_id;
    int n_ph = 0;
    bool rescaled = false;
    int level = -1;
    double delta_check = 0.0;
    double tau = 0.0;

    nlohmann::json to_json() const;
};

inline constexpr Eigen::Index kDenseLimit = 5000;

struct DilatedHamiltonian {
    SparseCMatrix sparse;
    CMatrix matrix;  // dense copy, filled when the dimension is at most kDenseLimit
    HamiltonianParams params;

    Eigen::Index dim() const { return sparse.rows(); }
    bool has_dense() const { return matrix.size() > 0; }
};

DilatedHamiltonian assemble_H(const AtomModel& model, const ModeGrid& grid, const FockBasis& basis, KappaPair kappa,
                              cplx theta, double g);

// e^theta dcheck^{-1} (H(kappa, theta + tau) - E_j): the level-j rescaled operator
// with unit H_f coefficient.
DilatedHamiltonian assemble_rescaled(const AtomModel& model, const ModeGrid& grid, const FockBasis& basis,
                                     KappaPair kappa, cplx theta, double g, const GapData& gap);

// phi (x) Omega for an atomic vector phi.
CVector with_vacuum(const CVector& phi, const FockBasis& basis);
CMatrix with_vacuum(const CMatrix& phis, const FockBasis& basis);

}  // namespace dilres
