#include "dilres/symmetry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <Eigen/Geometry>

#include "dilres/linalg.hpp"

namespace dilres {

using linalg::kron;

namespace {

void require_unitary(const CMatrix& m, const char* what) {
    if (m.rows() != m.cols() || (m.adjoint() * m - CMatrix::Identity(m.rows(), m.cols())).norm() > 1e-10)
        throw InvalidArgument(std::string("symmetry: ") + what + " is not unitary");
}

// Sign-free spin factor (C^2)^{xN} acting with the same 2x2 matrix on each particle.
CMatrix spin_power(const CMatrix& u, int n) {
    CMatrix out = CMatrix::Identity(1, 1);
    for (int i = 0; i < n; ++i) out = kron(out, u);
    return out;
}

const OrbitalStructure& require_structure(const AtomModel& model) {
    if (!model.structure()) throw InvalidArgument("symmetry: model labels insufficient to locate spin factors");
    return *model.structure();
}

}  // namespace

Mat3 su2_to_so3(const Mat2c& U) {
    if ((U.adjoint() * U - Mat2c::Identity()).norm() > 1e-10) throw InvalidArgument("symmetry: U is not unitary");
    if (std::abs(U.determinant() - 1.0) > 1e-10) throw InvalidArgument("symmetry: det U must be 1");
    const auto s = pauli_matrices();
    Mat3 R;
    for (int l = 0; l < 3; ++l)
        for (int j = 0; j < 3; ++j)
            R(l, j) = 0.5 * (s[l] * U * s[j] * U.adjoint()).trace().real();
    return R;
}

Mat2c su2_exp(const Vec3& axis, double angle) {
    const Vec3 n = axis.normalized();
    const auto s = pauli_matrices();
    Mat2c m = std::cos(angle / 2) * Mat2c::Identity();
    for (int a = 0; a < 3; ++a) m -= kI * std::sin(angle / 2) * n(a) * s[a];
    return m;
}

Mat2c so3_to_su2(const Mat3& R) {
    if ((R.transpose() * R - Mat3::Identity()).norm() > 1e-10 || R.determinant() < 0)
        throw InvalidArgument("symmetry: not a proper rotation");
    const Eigen::Quaterniond q(R);
    const auto s = pauli_matrices();
    Mat2c U = q.w() * Mat2c::Identity();
    U -= kI * (q.x() * s[0] + q.y() * s[1] + q.z() * s[2]);
    return U;
}

CMatrix rotate_photon_modes(const Mat3& R, const ModeGrid& grid) {
    const Mat3 Rinv = R.transpose();
    const auto n = static_cast<Eigen::Index>(grid.size());
    CMatrix m = CMatrix::Zero(n, n);
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const ModeNode& node = grid[i];
        const int src = grid.find_direction(Rinv * grid.directions()[node.direction]);
        if (src < 0) throw InvalidArgument("symmetry: rotation does not preserve the grid directions");
        for (int mu = 1; mu <= 2; ++mu) {
            const std::size_t j = grid.index(src, node.radial, mu);
            m(i, j) = node.eps.dot(R * grid[j].eps);
        }
    }
    return m;
}

PhotonTimeReversal time_reversal_photon(const ModeGrid& grid) {
    const auto n = static_cast<Eigen::Index>(grid.size());
    PhotonTimeReversal t;
    t.k_h = CMatrix::Zero(n, n);
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const ModeNode& node = grid[i];
        const int src = grid.find_direction(-grid.directions()[node.direction]);
        if (src < 0) throw InvalidArgument("symmetry: grid lacks inversion closure");
        for (int mu = 1; mu <= 2; ++mu) {
            const std::size_t j = grid.index(src, node.radial, mu);
            t.k_h(i, j) = node.eps.dot(grid[j].eps);
        }
    }
    return t;
}

CMatrix time_reversal_electron(const AtomModel& model) {
    const OrbitalStructure& st = require_structure(model);
    const CMatrix orb = CMatrix::Identity(st.orbital_dim(), st.orbital_dim());
    CMatrix m_prod;
    if (model.spin_value() == 0.5) {
        // K sigma_2 on each spin: x -> conj(sigma_2 x) = conj(sigma_2) conj(x).
        m_prod = kron(orb, spin_power(pauli_matrices()[1].conjugate(), model.n_particles()));
    } else {
        m_prod = orb;
    }
    const CMatrix& B = st.to_product;
    return B.adjoint() * m_prod * B.conjugate();
}

CMatrix rotation_electron(const AtomModel& model, const Mat2c& U) {
    const OrbitalStructure& st = require_structure(model);
    const Mat3 R = su2_to_so3(U);
    const int od = st.orbital_dim();
    CMatrix orb = CMatrix::Zero(od, od);
    int pos = 0;
    for (int l : st.orbital_l) {
        if (l == 0) {
            orb(pos, pos) = 1.0;
            pos += 1;
        } else if (l == 1) {
            orb.block(pos, pos, 3, 3) = R.cast<cplx>();
            pos += 3;
        } else {
            throw InvalidArgument("symmetry: model has orbitals without rotation data");
        }
    }
    CMatrix r_prod = model.spin_value() == 0.5 ? kron(orb, spin_power(CMatrix(U), model.n_particles())) : orb;
    const CMatrix& B = st.to_product;
    return B.adjoint() * r_prod * B;
}

SymmetryOp rotation_symmetry(const AtomModel& model, const ModeGrid& grid, const Mat2c& U) {
    SymmetryOp s;
    s.atom = {rotation_electron(model, U), false};
    s.photon = {rotate_photon_modes(su2_to_so3(U), grid), false};
    s.label = "R(U)";
    return s;
}

SymmetryOp time_reversal_symmetry(const AtomModel& model, const ModeGrid& grid) {
    SymmetryOp s;
    s.atom = {time_reversal_electron(model), true};
    s.photon = {time_reversal_photon(grid).minus_k_h(), true};
    s.label = "T";
    return s;
}

FullOperator full_operator(const SymmetryOp& s, const FockBasis& basis) {
    if (s.atom.antilinear != s.photon.antilinear)
        throw InvalidArgument("symmetry: atom and photon parts disagree on antilinearity");
    require_unitary(s.atom.matrix, "atom part");
    const ModeOperator gamma = second_quantize(s.photon.matrix, s.photon.antilinear, basis);
    return {kron(s.atom.matrix, gamma.dense()), s.atom.antilinear, s.label};
}

double check_symmetry(const CMatrix& H, const FullOperator& S) {
    if (H.rows() != H.cols() || S.matrix.rows() != H.rows() || S.matrix.cols() != H.cols())
        throw InvalidArgument("symmetry: dimension mismatch");
    // Symmetry operators are products of (signed) permutations and small blocks.
    const SparseCMatrix s = S.matrix.sparseView();
    const SparseCMatrix sa = s.adjoint();
    const CMatrix left = s * (S.antilinear ? CMatrix(H.conjugate()) : H);
    const CMatrix conj = left * sa;
    return S.antilinear ? (conj - H.adjoint()).norm() : (conj - H).norm();
}

FullOperator compose(const FullOperator& a, const FullOperator& b) {
    // (A K^a)(B K^b) x = A (B x)^(conj if a) ...
    FullOperator out;
    out.matrix = a.matrix * (a.antilinear ? CMatrix(b.matrix.conjugate()) : b.matrix);
    out.antilinear = a.antilinear != b.antilinear;
    out.label = a.label + "*" + b.label;
    return out;
}

KramersReport kramers_check(const CMatrix& H, const FullOperator& T, double tol) {
    if (!T.antilinear) throw InvalidArgument("kramers: T must be antilinear");
    const Eigen::Index n = H.rows();
    const double hnorm = std::max(1.0, H.norm());
    const FullOperator t2 = compose(T, T);
    if ((t2.matrix + CMatrix::Identity(n, n)).norm() > 1e-10) throw InvalidArgument("kramers: T^2 != -1");

    KramersReport rep;
    rep.symmetry_residual = check_symmetry(H, T);
    if (rep.symmetry_residual > tol * hnorm)
        throw InvalidArgument("kramers: symmetry residual " + std::to_string(rep.symmetry_residual) +
                              " above tolerance; report refused");

    RVector values;
    CMatrix vectors;
    if ((H - H.adjoint()).norm() <= 1e-12 * hnorm) {
        Eigen::SelfAdjointEigenSolver<CMatrix> es(H);
        values = es.eigenvalues();
        vectors = es.eigenvectors();
    } else {
        const auto ed = linalg::eig_general(H);
        std::vector<Eigen::Index> order(n);
        for (Eigen::Index i = 0; i < n; ++i) order[i] = i;
        std::sort(order.begin(), order.end(), [&](auto a, auto b) { return ed.values(a).real() < ed.values(b).real(); });
        values.resize(n);
        vectors.resize(n, n);
        for (Eigen::Index i = 0; i < n; ++i) {
            values(i) = ed.values(order[i]).real();
            vectors.col(i) = ed.vectors.col(order[i]);
        }
    }
    // Pairs are separated from other levels by far more than their internal
    // spread; cluster at a scale well above tol but below typical level gaps.
    const auto levels = cluster_levels(values, 1e-8);
    rep.all_even = true;
    rep.min_level_gap = std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < levels.size(); ++k) {
        const Level& lv = levels[k];
        rep.multiplicities.push_back(lv.multiplicity);
        rep.all_even = rep.all_even && lv.multiplicity % 2 == 0;
        rep.max_pair_gap = std::max(rep.max_pair_gap, values(lv.columns.back()) - values(lv.columns.front()));
        if (k > 0) rep.min_level_gap = std::min(rep.min_level_gap, lv.energy - levels[k - 1].energy);
    }
    for (Eigen::Index i = 0; i < n; ++i) {
        const CVector v = vectors.col(i);
        const CVector tv = T.matrix * v.conjugate();
        rep.max_self_overlap = std::max(rep.max_self_overlap, std::abs(v.dot(tv)));
    }
    return rep;
}

int irreducibility_check(const CMatrix& basis, const std::vector<FullOperator>& generators, double tol) {
    const Eigen::Index d = basis.cols();
    if (d == 0) throw InvalidArgument("irreducibility: empty subspace");
    if ((basis.adjoint() * basis - CMatrix::Identity(d, d)).norm() > 1e-10)
        throw InvalidArgument("irreducibility: basis is not orthonormal");
    CMatrix stacked(generators.size() * d * d, d * d);
    const CMatrix id = CMatrix::Identity(d, d);
    for (std::size_t g = 0; g < generators.size(); ++g) {
        const FullOperator& op = generators[g];
        if (op.antilinear) throw InvalidArgument("irreducibility: generators must be linear");
        if (op.matrix.rows() != basis.rows()) throw InvalidArgument("irreducibility: dimension mismatch");
        const CMatrix image = op.matrix * basis;
        const CMatrix a = basis.adjoint() * image;
        if ((image - basis * a).norm() > tol * std::max(1.0, op.matrix.norm()))
            throw InvalidArgument("irreducibility: subspace not invariant under " + op.label);
        // vec(A X - X A) = (I (x) A - A^T (x) I) vec(X)
        stacked.middleRows(g * d * d, d * d) = kron(id, a) - kron(a.transpose(), id);
    }
    if (generators.empty()) return static_cast<int>(d * d);
    return static_cast<int>(linalg::null_space(stacked, tol).cols());
}

nlohmann::json symmetry_report_json(const std::string& label, double residual,
                                    const std::vector<int>& multiplicity_table, std::optional<int> commutant_dim) {
    nlohmann::json j = {{"label", label}, {"residual", residual}, {"multiplicity_table", multiplicity_table}};
    j["commutant_dim"] = commutant_dim ? nlohmann::json(*commutant_dim) : nlohmann::json(nullptr);
    return j;
}

}  // namespace dilres
