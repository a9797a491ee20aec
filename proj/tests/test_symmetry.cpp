#include <doctest.h>

#include <random>

#include "dilres/hamiltonian.hpp"
#include "dilres/symmetry.hpp"

using namespace dilres;

namespace {

Mat2c random_su2(std::mt19937_64& rng) {
    std::normal_distribution<double> gauss;
    Eigen::Vector4d q(gauss(rng), gauss(rng), gauss(rng), gauss(rng));
    q.normalize();
    Mat2c u;
    u << cplx(q(0), q(3)), cplx(q(2), q(1)), cplx(-q(2), q(1)), cplx(q(0), -q(3));
    return u;
}

FullOperator atom_only(const CMatrix& m, bool antilinear, std::string label) {
    return {m, antilinear, std::move(label)};
}

}  // namespace

TEST_SUITE("symmetry") {

TEST_CASE("SU(2) -> SO(3) is a homomorphism with kernel {+-1}") {
    std::mt19937_64 rng(5);
    for (int trial = 0; trial < 50; ++trial) {
        const Mat2c u = random_su2(rng), v = random_su2(rng);
        const Mat3 ru = su2_to_so3(u), rv = su2_to_so3(v);
        CHECK((ru.transpose() * ru - Mat3::Identity()).norm() < 1e-12);
        CHECK(ru.determinant() == doctest::Approx(1.0));
        CHECK((su2_to_so3(u * v) - ru * rv).norm() < 1e-12);
        CHECK((su2_to_so3(-u) - ru).norm() < 1e-12);
        const Mat2c lift = so3_to_su2(ru);
        CHECK(std::min((lift - u).norm(), (lift + u).norm()) < 1e-12);
    }
    // exp(-i pi/2 sigma_z / 2 * 2) rotates x into y.
    const Mat3 r = su2_to_so3(su2_exp(Vec3::UnitZ(), kPi / 2));
    CHECK((r * Vec3::UnitX() - Vec3::UnitY()).norm() < 1e-14);
    CHECK_THROWS_AS(su2_to_so3(2.0 * Mat2c::Identity()), InvalidArgument);
    CHECK_THROWS_AS(so3_to_su2(-Mat3::Identity()), InvalidArgument);
}

TEST_CASE("electronic time reversal squares to -1 for spin 1/2 and +1 for spin 0") {
    const AtomModel half = hydrogen_sp(1.0, 0.5, 1e-3, 0.1);
    const FullOperator t = atom_only(time_reversal_electron(half), true, "T");
    CHECK((compose(t, t).matrix + CMatrix::Identity(half.dim(), half.dim())).norm() < 1e-14);
    CHECK(check_symmetry(half.h_el(), t) < 1e-14);
    for (int a = 0; a < 3; ++a) {
        // T S T^{-1} = -S; check_symmetry compares with H^dagger, so feed -S and S.
        const FullOperator tt = t;
        const CMatrix s = half.spin()[a];
        const CMatrix conj = tt.matrix * s.conjugate() * tt.matrix.adjoint();
        CHECK((conj + s).norm() < 1e-13);
    }
    const AtomModel zero = hydrogen_sp(1.0, 0.0, 0.0, 0.1);
    const FullOperator t0 = atom_only(time_reversal_electron(zero), true, "T");
    CHECK((compose(t0, t0).matrix - CMatrix::Identity(zero.dim(), zero.dim())).norm() < 1e-14);
}

TEST_CASE("Kramers report: even multiplicities and refusals") {
    const AtomModel half = hydrogen_sp(1.0, 0.5, 1e-3, 0.1);
    const FullOperator t = atom_only(time_reversal_electron(half), true, "T");
    const KramersReport rep = kramers_check(half.h_el(), t);
    CHECK(rep.all_even);
    CHECK(rep.max_self_overlap < 1e-12);

    const AtomModel zero = hydrogen_sp(1.0, 0.0, 0.0, 0.1);
    const FullOperator t0 = atom_only(time_reversal_electron(zero), true, "T");
    CHECK_THROWS_WITH_AS(kramers_check(zero.h_el(), t0), "kramers: T^2 != -1", InvalidArgument);
    CHECK_THROWS_WITH_AS(kramers_check(half.h_el(), atom_only(t.matrix, false, "U")), "kramers: T must be antilinear",
                         InvalidArgument);
    // A Zeeman term breaks time reversal; the report is refused rather than produced.
    const CMatrix zeeman = half.h_el() + 1e-3 * half.spin()[2];
    CHECK(check_symmetry(zeeman, t) > 1e-4);
    CHECK_THROWS_AS(kramers_check(zeeman, t), InvalidArgument);
}

TEST_CASE("random T-invariant matrices have doubly degenerate spectra") {
    std::mt19937_64 rng(9);
    std::normal_distribution<double> gauss;
    CMatrix tm = CMatrix::Zero(6, 6);
    for (int k = 0; k < 3; ++k) {
        tm(2 * k, 2 * k + 1) = 1.0;
        tm(2 * k + 1, 2 * k) = -1.0;
    }
    const FullOperator t{tm, true, "T"};
    for (int trial = 0; trial < 10; ++trial) {
        CMatrix a(6, 6);
        for (Eigen::Index i = 0; i < 6; ++i)
            for (Eigen::Index j = 0; j < 6; ++j) a(i, j) = cplx(gauss(rng), gauss(rng));
        CMatrix h = a + a.adjoint();
        h = 0.5 * (h + tm * h.conjugate() * tm.adjoint()).eval();  // average over {1, T}
        const KramersReport rep = kramers_check(h, t);
        CHECK(rep.all_even);
        CHECK(rep.multiplicities.size() == 3);
    }
}

TEST_CASE("irreducibility of atomic levels under rotations") {
    const AtomModel h = hydrogen_sp(1.0, 0.5, 0.0, 0.1);
    std::vector<FullOperator> gens;
    gens.push_back(atom_only(rotation_electron(h, su2_exp(Vec3::UnitZ(), kPi / 2)), false, "C4z"));
    gens.push_back(atom_only(rotation_electron(h, su2_exp(Vec3(1, 1, 1), 2 * kPi / 3)), false, "C3"));
    CHECK(irreducibility_check(h.level_basis(0), gens) == 1);  // 1s doublet
    CHECK(irreducibility_check(h.level_basis(1), gens) > 1);   // 2s + 2p: reducible
    CHECK_THROWS_AS(irreducibility_check(h.level_basis(0), {atom_only(time_reversal_electron(h), true, "T")}),
                    InvalidArgument);
    CMatrix not_invariant = CMatrix::Zero(h.dim(), 1);
    not_invariant(0) = not_invariant(4) = std::sqrt(0.5);  // 1s,up + 2px,up
    CHECK_THROWS_AS(irreducibility_check(not_invariant, gens), InvalidArgument);
    CHECK_THROWS_AS(rotation_electron(toy_two_level(1.0, 1.0), Mat2c::Identity()), InvalidArgument);
}

TEST_CASE("coupled Hamiltonian commutes with grid rotations and time reversal") {
    const AtomModel h = hydrogen_sp(1.0, 0.5, 1e-3, 0.1);
    const ModeGrid grid = build_mode_grid(1, 1.0, AngularGroup::Octahedral, 1.0);
    const FockBasis basis = build_fock_basis(grid, 1);
    const CMatrix H = assemble_H(h, grid, basis, KappaPair::uniform(0.3), 0.0, 1.0).matrix;
    const double scale = H.norm();
    for (const Vec3& axis : {Vec3::UnitZ(), Vec3::UnitX()}) {
        const FullOperator r = full_operator(rotation_symmetry(h, grid, su2_exp(axis, kPi / 2)), basis);
        CHECK(check_symmetry(H, r) < 1e-12 * scale);
    }
    const FullOperator t = full_operator(time_reversal_symmetry(h, grid), basis);
    CHECK(check_symmetry(H, t) < 1e-12 * scale);
    // A rotation that is not in the octahedral group does not map the grid onto itself.
    CHECK_THROWS_AS(rotation_symmetry(h, grid, su2_exp(Vec3::UnitZ(), 0.3)), InvalidArgument);
    CHECK(symmetry_report_json("T", 0.0, {2, 2}, std::nullopt)["commutant_dim"].is_null());
}

}
