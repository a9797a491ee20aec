#include "dilres/fock.hpp"

#include <cmath>
#include <functional>

#include <unsupported/Eigen/SparseExtra>

namespace dilres {

double fock_dimension(std::size_t n_modes, int max_total) {
    // C(m+n, n) accumulated in floating point so overflow shows up as a large number.
    double d = 1.0;
    for (int k = 1; k <= max_total; ++k) d = d * static_cast<double>(n_modes + k) / k;
    return std::round(d);
}

FockBasis::FockBasis(std::size_t n_modes, int max_total, std::size_t hard_cap)
    : n_modes_(n_modes), max_total_(max_total) {
    if (max_total < 0) throw InvalidArgument("fock: max_total must be nonnegative");
    if (n_modes == 0) throw InvalidArgument("fock: at least one mode is required");
    if (fock_dimension(n_modes, max_total) > static_cast<double>(hard_cap))
        throw InvalidArgument("fock: dimension exceeds the hard cap of " + std::to_string(hard_cap));

    // Depth-first enumeration with ascending occupation at each position yields
    // lexicographic order directly.
    Occupation cur(n_modes, 0);
    std::function<void(std::size_t, int)> rec = [&](std::size_t pos, int left) {
        if (pos == n_modes) {
            index_.emplace(cur, states_.size());
            states_.push_back(cur);
            totals_.push_back(max_total - left);
            return;
        }
        for (int n = 0; n <= left; ++n) {
            cur[pos] = static_cast<std::uint16_t>(n);
            rec(pos + 1, left - n);
        }
        cur[pos] = 0;
    };
    rec(0, max_total);
}

std::optional<std::size_t> FockBasis::find(const Occupation& n) const {
    auto it = index_.find(n);
    if (it == index_.end()) return std::nullopt;
    return it->second;
}

FockBasis build_fock_basis(const ModeGrid& grid, int max_total, std::size_t hard_cap) {
    return FockBasis(grid.size(), max_total, hard_cap);
}

ModeOperator annihilation(const FockBasis& basis, std::size_t mode) {
    if (mode >= basis.n_modes()) throw InvalidArgument("fock: mode index out of range");
    std::vector<Eigen::Triplet<cplx>> trip;
    for (std::size_t col = 0; col < basis.dim(); ++col) {
        const Occupation& n = basis.state(col);
        if (n[mode] == 0) continue;
        Occupation m = n;
        --m[mode];
        trip.emplace_back(static_cast<int>(*basis.find(m)), static_cast<int>(col), std::sqrt(double(n[mode])));
    }
    ModeOperator op{SparseCMatrix(basis.dim(), basis.dim()), ModeOperator::Kind::Annihilation};
    op.matrix.setFromTriplets(trip.begin(), trip.end());
    return op;
}

ModeOperator creation(const FockBasis& basis, std::size_t mode) {
    ModeOperator op = annihilation(basis, mode);
    op.matrix = SparseCMatrix(op.matrix.adjoint());
    op.kind = ModeOperator::Kind::Creation;
    return op;
}

ModeOperator field_energy(const FockBasis& basis, const ModeGrid& grid) {
    if (grid.size() != basis.n_modes()) throw InvalidArgument("fock: grid and basis sizes differ");
    std::vector<Eigen::Triplet<cplx>> trip;
    for (std::size_t i = 0; i < basis.dim(); ++i) {
        const Occupation& n = basis.state(i);
        double e = 0.0;
        for (std::size_t m = 0; m < n.size(); ++m) e += n[m] * grid[m].omega;
        trip.emplace_back(static_cast<int>(i), static_cast<int>(i), e);
    }
    ModeOperator op{SparseCMatrix(basis.dim(), basis.dim()), ModeOperator::Kind::FieldEnergy};
    op.matrix.setFromTriplets(trip.begin(), trip.end());
    return op;
}

ModeOperator second_quantize(const CMatrix& map, bool antilinear, const FockBasis& basis) {
    const auto m = static_cast<Eigen::Index>(basis.n_modes());
    if (map.rows() != m || map.cols() != m) throw InvalidArgument("fock: one-mode map has the wrong size");
    if ((map.adjoint() * map - CMatrix::Identity(m, m)).norm() > 1e-10)
        throw InvalidArgument("fock: one-mode map is not unitary");

    std::vector<ModeOperator> adag;
    adag.reserve(basis.n_modes());
    for (std::size_t i = 0; i < basis.n_modes(); ++i) adag.push_back(creation(basis, i));

    // Column for |n> is prod_j a*(u e_j)^{n_j} Omega / sqrt(prod n_j!).
    const auto dim = static_cast<Eigen::Index>(basis.dim());
    CMatrix out = CMatrix::Zero(dim, dim);
    for (Eigen::Index col = 0; col < dim; ++col) {
        const Occupation& n = basis.state(col);
        CVector v = CVector::Zero(dim);
        v(0) = 1.0;
        double norm = 1.0;
        for (std::size_t j = 0; j < n.size(); ++j) {
            for (int rep = 0; rep < n[j]; ++rep) {
                CVector next = CVector::Zero(dim);
                for (Eigen::Index i = 0; i < m; ++i)
                    if (map(i, j) != cplx(0.0)) next += map(i, j) * (adag[i].matrix * v);
                v = std::move(next);
                norm *= rep + 1;
            }
        }
        out.col(col) = v / std::sqrt(norm);
    }
    ModeOperator op{out.sparseView(0.0, 0.0), ModeOperator::Kind::SecondQuantized};
    op.antilinear = antilinear;
    return op;
}

SparseCMatrix interior_projector(const FockBasis& basis) {
    std::vector<Eigen::Triplet<cplx>> trip;
    for (std::size_t i = 0; i < basis.dim(); ++i)
        if (basis.total(i) < basis.max_total()) trip.emplace_back(int(i), int(i), 1.0);
    SparseCMatrix p(basis.dim(), basis.dim());
    p.setFromTriplets(trip.begin(), trip.end());
    return p;
}

void save_matrix_market(const SparseCMatrix& m, const std::string& path) {
    if (!Eigen::saveMarket(m, path)) throw std::runtime_error("io: cannot write " + path);
}

}  // namespace dilres
