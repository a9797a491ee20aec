#pragma once

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "dilres/atom.hpp"
#include "dilres/fock.hpp"
#include "dilres/modes.hpp"
#include "dilres/types.hpp"

namespace dilres {

using Mat2c = Eigen::Matrix2cd;

// A linear or antilinear operator written as x -> matrix * x or x -> matrix * conj(x).
struct OperatorPart {
    CMatrix matrix;
    bool antilinear = false;
};

struct SymmetryOp {
    OperatorPart atom;
    OperatorPart photon;  // one-mode map; acts on Fock space through Gamma
    std::string label;
};

// The operator atom (x) Gamma(photon) on the full space, in the same
// (matrix, conjugation flag) form.
struct FullOperator {
    CMatrix matrix;
    bool antilinear = false;
    std::string label;
};

Mat3 su2_to_so3(const Mat2c& U);
// One of the two SU(2) lifts of a rotation.
Mat2c so3_to_su2(const Mat3& R);
Mat2c su2_exp(const Vec3& axis, double angle);  // exp(-i angle n.sigma / 2)

CMatrix rotate_photon_modes(const Mat3& R, const ModeGrid& grid);

struct PhotonTimeReversal {
    CMatrix k_h;  // h -> k_h * conj(h)
    CMatrix minus_k_h() const { return -k_h; }
};
PhotonTimeReversal time_reversal_photon(const ModeGrid& grid);

// T_el = matrix o K in the model basis.
CMatrix time_reversal_electron(const AtomModel& model);
// R_el(U) in the model basis.
CMatrix rotation_electron(const AtomModel& model, const Mat2c& U);

SymmetryOp rotation_symmetry(const AtomModel& model, const ModeGrid& grid, const Mat2c& U);
SymmetryOp time_reversal_symmetry(const AtomModel& model, const ModeGrid& grid);

FullOperator full_operator(const SymmetryOp& s, const FockBasis& basis);

// ||S H S* - H|| (unitary S) or ||S H S* - H^dagger|| (antiunitary S).
double check_symmetry(const CMatrix& H, const FullOperator& S);

// Composition and square of (matrix, flag) operators.
FullOperator compose(const FullOperator& a, const FullOperator& b);

struct KramersReport {
    std::vector<int> multiplicities;
    bool all_even = false;
    double max_pair_gap = 0.0;     // largest spread inside an eigenvalue cluster
    double min_level_gap = 0.0;    // smallest distance between distinct clusters
    double max_self_overlap = 0.0; // max |<psi, T psi>| over eigenvectors
    double symmetry_residual = 0.0;
};
KramersReport kramers_check(const CMatrix& H, const FullOperator& T, double tol = 1e-10);

// Dimension of the commutant of the generators restricted to span(basis).
int irreducibility_check(const CMatrix& basis, const std::vector<FullOperator>& generators, double tol = 1e-9);

nlohmann::json symmetry_report_json(const std::string& label, double residual,
                                    const std::vector<int>& multiplicity_table, std::optional<int> commutant_dim);

}  // namespace dilres
