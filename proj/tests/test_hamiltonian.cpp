#include <doctest.h>

#include <algorithm>

#include "dilres/hamiltonian.hpp"
#include "dilres/linalg.hpp"

using namespace dilres;

namespace {

std::vector<cplx> sorted_eigenvalues(const CMatrix& m) {
    const auto ed = linalg::eig_general(m);
    std::vector<cplx> v(ed.values.data(), ed.values.data() + ed.values.size());
    std::sort(v.begin(), v.end(), [](cplx a, cplx b) { return a.real() != b.real() ? a.real() < b.real() : a.imag() < b.imag(); });
    return v;
}

// Direct evaluation of G_i from the mode data.
CMatrix coupling_oracle(const AtomModel& m, const ModeNode& node, const CutoffProfile& rho, KappaPair kappa, cplx theta) {
    const cplx s = std::sqrt(node.weight) * std::exp(-2.0 * theta) * std::exp(-std::pow(std::exp(-theta) * node.omega / rho.lambda, 2)) /
                   std::sqrt(node.omega);
    CMatrix out = CMatrix::Zero(m.dim(), m.dim());
    const Vec3 kxe = node.k.cross(node.eps);
    for (int a = 0; a < 3; ++a) {
        out += std::pow(kappa.k1, 3) * node.omega * kI * node.eps(a) * m.dipole()[a];
        out += std::pow(kappa.k2, 5) * kI * kxe(a) * m.spin()[a];
    }
    return s * out;
}

}  // namespace

TEST_SUITE("hamiltonian") {

TEST_CASE("decoupled spectrum is the tensor sum") {
    const AtomModel atom = toy_two_level(1.0, 2.0);
    const ModeGrid grid = build_mode_grid(2, 2.0, AngularGroup::InversionOnly, 1.0);
    const FockBasis basis = build_fock_basis(grid, 2);
    const cplx theta(0.1, 0.3);
    const DilatedHamiltonian H = assemble_H(atom, grid, basis, KappaPair::uniform(0.5), theta, 0.0);
    REQUIRE(H.has_dense());
    CHECK(H.dim() == 2 * static_cast<Eigen::Index>(basis.dim()));
    std::vector<cplx> expect;
    for (double e : {0.0, 1.0})
        for (std::size_t s = 0; s < basis.dim(); ++s) {
            double photons = 0.0;
            for (std::size_t i = 0; i < grid.size(); ++i) photons += basis.state(s)[i] * grid[i].omega;
            expect.push_back(e + std::exp(-theta) * photons);
        }
    std::sort(expect.begin(), expect.end(), [](cplx a, cplx b) { return a.real() != b.real() ? a.real() < b.real() : a.imag() < b.imag(); });
    const auto got = sorted_eigenvalues(H.matrix);
    REQUIRE(got.size() == expect.size());
    double worst = 0.0;
    for (std::size_t i = 0; i < got.size(); ++i) worst = std::max(worst, std::abs(got[i] - expect[i]));
    CHECK(worst < 1e-12);
}

TEST_CASE("undilated Hamiltonian with real coupling is Hermitian") {
    const AtomModel atom = hydrogen_sp(1.0, 0.5, 1e-3, 0.1);
    const ModeGrid grid = build_mode_grid(1, 1.0, AngularGroup::InversionOnly, 1.0);
    const FockBasis basis = build_fock_basis(grid, 2);
    const CMatrix H = assemble_H(atom, grid, basis, KappaPair::uniform(0.4), 0.0, 1.0).matrix;
    CHECK((H - H.adjoint()).norm() < 1e-14 * H.norm());
    const CMatrix Hd = assemble_H(atom, grid, basis, KappaPair::uniform(0.4), cplx(0.0, 0.3), 1.0).matrix;
    CHECK((Hd - Hd.adjoint()).norm() > 1e-3);
}

TEST_CASE("coupling matrices follow the closed form and the conjugation rule") {
    const AtomModel atom = hydrogen_sp(1.0, 0.5, 0.0, 0.1);
    const ModeGrid grid = build_mode_grid(2, 1.5, AngularGroup::Octahedral, 0.8);
    const KappaPair kappa{cplx(0.3, 0.05), cplx(0.2, -0.1)};
    const cplx theta(0.2, 0.15);
    const CouplingFunction G = coupling_G(atom, grid, kappa, theta);
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const CMatrix c = coupling_oracle(atom, grid[i], grid.cutoff(), kappa, theta);
        CHECK((G.creation[i] - c).norm() < 1e-14 * std::max(1.0, c.norm()));
        const CMatrix a = coupling_oracle(atom, grid[i], grid.cutoff(), kappa.conj(), std::conj(theta)).adjoint();
        CHECK((G.annihilation[i] - a).norm() < 1e-14 * std::max(1.0, a.norm()));
        CHECK(std::abs(G.field_energies[i] - std::exp(-theta) * grid[i].omega) < 1e-15);
    }
    // The dilation prefactor: at fixed cutoff argument the coupling scales with e^{-2 theta}.
    const ModeGrid wide = build_mode_grid(2, 1.5, AngularGroup::Octahedral, 1e6);
    const auto g0 = coupling_matrices(atom, wide, kappa, 0.0);
    const auto g1 = coupling_matrices(atom, wide, kappa, theta);
    for (std::size_t i = 0; i < wide.size(); ++i)
        CHECK((g1[i] - std::exp(-2.0 * theta) * g0[i]).norm() < 1e-10 * std::max(1.0, g0[i].norm()));
    CHECK_THROWS_WITH_AS(coupling_G(atom, grid, kappa, cplx(0.0, kPi / 4)), "coupling: |Im theta| must be below pi/4",
                         InvalidArgument);
}

TEST_CASE("W has the coupling matrices as its one-photon matrix elements") {
    const AtomModel atom = toy_two_level(1.0, 0.7);
    const ModeGrid grid = build_mode_grid(2, 1.0, AngularGroup::InversionOnly, 1.0);
    const FockBasis basis = build_fock_basis(grid, 1);
    const CouplingFunction G = coupling_G(atom, grid, KappaPair::uniform(cplx(0.6, 0.1)), cplx(0.1, 0.2));
    const CMatrix W = CMatrix(interaction_W(G, basis));
    const Eigen::Index D = static_cast<Eigen::Index>(basis.dim());
    for (std::size_t i = 0; i < grid.size(); ++i) {
        Occupation one(grid.size(), 0);
        one[i] = 1;
        const Eigen::Index s = static_cast<Eigen::Index>(basis.find(one).value());
        for (Eigen::Index a = 0; a < 2; ++a)
            for (Eigen::Index b = 0; b < 2; ++b) {
                CHECK(std::abs(W(a * D + s, b * D) - G.creation[i](a, b)) < 1e-15);
                CHECK(std::abs(W(a * D, b * D + s) - G.annihilation[i](a, b)) < 1e-15);
            }
    }
    for (Eigen::Index a = 0; a < 2; ++a)
        for (Eigen::Index b = 0; b < 2; ++b) CHECK(std::abs(W(a * D, b * D)) == 0.0);
    const FockBasis wrong(3, 1);
    CHECK_THROWS_AS(interaction_W(G, wrong), InvalidArgument);
}

TEST_CASE("rescaled operator is an affine image of the dilated Hamiltonian") {
    const AtomModel atom = toy_two_level(1.0, 3.0);
    const ModeGrid grid = build_mode_grid(2, 2.0, AngularGroup::InversionOnly, 1.0);
    const FockBasis basis = build_fock_basis(grid, 2);
    const KappaPair kappa = KappaPair::uniform(0.2);
    for (int level : {0, 1}) {
        const GapData gap = spectral_gap(atom, level, 0.3);
        const cplx theta(0.05, 0.2);
        const DilatedHamiltonian R = assemble_rescaled(atom, grid, basis, kappa, theta, 0.5, gap);
        const DilatedHamiltonian H = assemble_H(atom, grid, basis, kappa, theta + gap.tau, 0.5);
        const Eigen::Index n = H.dim();
        const CMatrix expect = std::exp(theta) / gap.delta_check * (H.matrix - gap.energy * CMatrix::Identity(n, n));
        CHECK((R.matrix - expect).norm() < 1e-12 * std::max(1.0, expect.norm()));
        CHECK(R.params.rescaled);
        CHECK(R.params.level == level);
    }
    CHECK_THROWS_AS(assemble_rescaled(atom, grid, basis, kappa, 0.0, 1.0, GapData{}), InvalidArgument);
}

TEST_CASE("vacuum embedding and parameters") {
    const ModeGrid grid = build_mode_grid(1, 1.0, AngularGroup::InversionOnly, 1.0);
    const FockBasis basis = build_fock_basis(grid, 1);
    CVector phi(2);
    phi << 0.6, cplx(0.0, 0.8);
    const CVector v = with_vacuum(phi, basis);
    CHECK(v.size() == 2 * static_cast<Eigen::Index>(basis.dim()));
    CHECK(v.norm() == doctest::Approx(1.0));
    CHECK(v(static_cast<Eigen::Index>(basis.dim())) == phi(1));
    const DilatedHamiltonian H =
        assemble_H(toy_two_level(1.0, 1.0), grid, basis, KappaPair::uniform(0.1), cplx(0.0, 0.1), 2.0);
    const nlohmann::json p = H.params.to_json();
    CHECK(p["g"].get<double>() == 2.0);
    CHECK(p["N_ph"].get<int>() == 1);
    CHECK(p["theta"][1].get<double>() == 0.1);
    CHECK_THROWS_AS(assemble_H(toy_two_level(1.0, 1.0), grid, FockBasis(3, 1), KappaPair{}, 0.0, 1.0), InvalidArgument);
}

}
