#include "dilres/hamiltonian.hpp"

#include <cmath>

namespace dilres {

namespace {

void check_strip(cplx theta) {
    if (std::abs(theta.imag()) >= kPi / 4) throw InvalidArgument("coupling: |Im theta| must be below pi/4");
}

using Triplets = std::vector<Eigen::Triplet<cplx>>;

// a (x) b for a dense atomic block and a sparse Fock operator, appended as triplets.
void add_kron(Triplets& out, const CMatrix& a, const SparseCMatrix& b, cplx scale) {
    const Eigen::Index D = b.rows();
    for (Eigen::Index k = 0; k < b.outerSize(); ++k)
        for (SparseCMatrix::InnerIterator it(b, k); it; ++it)
            for (Eigen::Index alpha = 0; alpha < a.rows(); ++alpha)
                for (Eigen::Index beta = 0; beta < a.cols(); ++beta) {
                    const cplx v = a(alpha, beta);
                    if (v == cplx(0.0)) continue;
                    out.emplace_back(alpha * D + it.row(), beta * D + it.col(), scale * v * it.value());
                }
}

DilatedHamiltonian assemble(const CMatrix& atomic, const CouplingFunction& G, const FockBasis& basis, double g,
                            cplx field_coefficient, const ModeGrid& grid) {
    const Eigen::Index na = atomic.rows();
    const Eigen::Index D = static_cast<Eigen::Index>(basis.dim());
    Triplets trip;
    const SparseCMatrix idF = [&] {
        SparseCMatrix m(D, D);
        m.setIdentity();
        return m;
    }();
    add_kron(trip, atomic, idF, 1.0);
    if (g != 0.0) {
        const SparseCMatrix W = interaction_W(G, basis);
        for (Eigen::Index k = 0; k < W.outerSize(); ++k)
            for (SparseCMatrix::InnerIterator it(W, k); it; ++it) trip.emplace_back(it.row(), it.col(), g * it.value());
    }
    const SparseCMatrix hf = field_energy(basis, grid).matrix;
    add_kron(trip, CMatrix::Identity(na, na), hf, field_coefficient);

    DilatedHamiltonian h;
    h.sparse = SparseCMatrix(na * D, na * D);
    h.sparse.setFromTriplets(trip.begin(), trip.end());
    h.sparse.prune(cplx(0.0), 0.0);
    if (na * D <= kDenseLimit) h.matrix = CMatrix(h.sparse);
    return h;
}

}  // namespace

std::vector<CMatrix> coupling_matrices(const AtomModel& model, const ModeGrid& grid, KappaPair kappa, cplx theta) {
    check_strip(theta);
    const Eigen::Index n = model.dim();
    const cplx k1_3 = std::pow(kappa.k1, 3), k2_5 = std::pow(kappa.k2, 5);
    const cplx prefactor = std::exp(-2.0 * theta);
    std::vector<CMatrix> out;
    out.reserve(grid.size());
    for (const ModeNode& node : grid.nodes()) {
        const cplx scale = std::sqrt(node.weight) * prefactor * grid.cutoff().dilated(theta, node.omega) /
                           std::sqrt(node.omega);
        CMatrix m = CMatrix::Zero(n, n);
        if (k1_3 != cplx(0.0))
            for (int a = 0; a < 3; ++a)
                if (node.eps(a) != 0.0) m += (k1_3 * node.omega * kI * node.eps(a)) * model.dipole()[a];
        if (k2_5 != cplx(0.0)) {
            const Vec3 kxe = node.k.cross(node.eps);
            for (int a = 0; a < 3; ++a)
                if (kxe(a) != 0.0) m += (k2_5 * kI * kxe(a)) * model.spin()[a];
        }
        out.push_back(scale * m);
    }
    return out;
}

CouplingFunction coupling_G(const AtomModel& model, const ModeGrid& grid, KappaPair kappa, cplx theta) {
    CouplingFunction G;
    G.kappa = kappa;
    G.theta = theta;
    G.creation = coupling_matrices(model, grid, kappa, theta);
    const auto bar = coupling_matrices(model, grid, kappa.conj(), std::conj(theta));
    G.annihilation.reserve(bar.size());
    for (const CMatrix& m : bar) G.annihilation.push_back(m.adjoint());
    for (const ModeNode& node : grid.nodes()) G.field_energies.push_back(std::exp(-theta) * node.omega);
    return G;
}

SparseCMatrix interaction_W(const CouplingFunction& G, const FockBasis& basis) {
    if (G.creation.size() != basis.n_modes() || G.annihilation.size() != basis.n_modes())
        throw InvalidArgument("interaction: coupling and basis mode counts differ");
    const Eigen::Index na = G.creation.empty() ? 0 : G.creation.front().rows();
    const Eigen::Index D = static_cast<Eigen::Index>(basis.dim());
    Triplets trip;
    for (std::size_t i = 0; i < basis.n_modes(); ++i) {
        const ModeOperator a = annihilation(basis, i);
        const SparseCMatrix adag = a.matrix.adjoint();
        add_kron(trip, G.annihilation[i], a.matrix, 1.0);
        add_kron(trip, G.creation[i], adag, 1.0);
    }
    SparseCMatrix W(na * D, na * D);
    W.setFromTriplets(trip.begin(), trip.end());
    return W;
}

nlohmann::json HamiltonianParams::to_json() const {
    return {{"kappa1", {kappa.k1.real(), kappa.k1.imag()}},
            {"kappa2", {kappa.k2.real(), kappa.k2.imag()}},
            {"theta", {theta.real(), theta.imag()}},
            {"g", g},
            {"model", model_id},
            {"grid", grid_id},
            {"N_ph", n_ph},
            {"rescaled", rescaled},
            {"level", level},
            {"delta_check", delta_check},
            {"tau", tau}};
}

DilatedHamiltonian assemble_H(const AtomModel& model, const ModeGrid& grid, const FockBasis& basis, KappaPair kappa,
                              cplx theta, double g) {
    if (grid.size() != basis.n_modes()) throw InvalidArgument("hamiltonian: grid and basis sizes differ");
    const CouplingFunction G = coupling_G(model, grid, kappa, theta);
    DilatedHamiltonian h = assemble(model.h_el(), G, basis, g, std::exp(-theta), grid);
    h.params = {kappa, theta, g, model.name(), grid.id(), basis.max_total(), false, -1, 0.0, 0.0};
    return h;
}

DilatedHamiltonian assemble_rescaled(const AtomModel& model, const ModeGrid& grid, const FockBasis& basis,
                                     KappaPair kappa, cplx theta, double g, const GapData& gap) {
    if (grid.size() != basis.n_modes()) throw InvalidArgument("hamiltonian: grid and basis sizes differ");
    if (!(gap.delta_check > 0.0)) throw InvalidArgument("hamiltonian: missing gap data");
    const cplx shifted = theta + gap.tau;
    const cplx f = std::exp(theta) / gap.delta_check;
    CouplingFunction G = coupling_G(model, grid, kappa, shifted);
    // Both parts pick up f: (conj(f) G_bar)^dagger = f G_bar^dagger.
    for (CMatrix& m : G.creation) m *= f;
    for (CMatrix& m : G.annihilation) m *= f;
    for (cplx& e : G.field_energies) e *= f;
    DilatedHamiltonian h = assemble(rescaled_atom(model, gap, theta), G, basis, g, 1.0, grid);
    h.params = {kappa, theta, g, model.name(), grid.id(), basis.max_total(), true, gap.j, gap.delta_check, gap.tau};
    return h;
}

CVector with_vacuum(const CVector& phi, const FockBasis& basis) {
    const Eigen::Index D = static_cast<Eigen::Index>(basis.dim());
    CVector v = CVector::Zero(phi.size() * D);
    for (Eigen::Index a = 0; a < phi.size(); ++a) v(a * D) = phi(a);
    return v;
}

CMatrix with_vacuum(const CMatrix& phis, const FockBasis& basis) {
    CMatrix out(phis.rows() * static_cast<Eigen::Index>(basis.dim()), phis.cols());
    for (Eigen::Index c = 0; c < phis.cols(); ++c) out.col(c) = with_vacuum(CVector(phis.col(c)), basis);
    return out;
}

}  // namespace dilres
