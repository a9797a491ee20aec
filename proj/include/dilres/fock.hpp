#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "dilres/modes.hpp"
#include "dilres/types.hpp"

namespace dilres {

using Occupation = std::vector<std::uint16_t>;

// Occupation-number basis {n : sum n_i <= max_total}, in lexicographic order
// of the occupation vectors, so the vacuum is state 0.
class FockBasis {
public:
    FockBasis(std::size_t n_modes, int max_total, std::size_t hard_cap = 200000);

    std::size_t n_modes() const { return n_modes_; }
    int max_total() const { return max_total_; }
    std::size_t dim() const { return states_.size(); }
    const Occupation& state(std::size_t i) const { return states_[i]; }
    int total(std::size_t i) const { return totals_[i]; }
    std::optional<std::size_t> find(const Occupation& n) const;

private:
    std::size_t n_modes_;
    int max_total_;
    std::vector<Occupation> states_;
    std::vector<int> totals_;
    std::map<Occupation, std::size_t> index_;
};

// Number of states with total occupation <= n over m modes, C(m+n, n).
double fock_dimension(std::size_t n_modes, int max_total);

FockBasis build_fock_basis(const ModeGrid& grid, int max_total, std::size_t hard_cap = 200000);

struct ModeOperator {
    enum class Kind { Annihilation, Creation, FieldEnergy, SecondQuantized };

    SparseCMatrix matrix;
    Kind kind;
    // Only meaningful for SecondQuantized: the operator is matrix o (complex
    // conjugation of occupation-basis coefficients).
    bool antilinear = false;

    CMatrix dense() const { return CMatrix(matrix); }
};

ModeOperator annihilation(const FockBasis& basis, std::size_t mode);
ModeOperator creation(const FockBasis& basis, std::size_t mode);
ModeOperator field_energy(const FockBasis& basis, const ModeGrid& grid);

// Gamma(u) for a unitary (antilinear == false) or antiunitary one-mode map
// u = map o K. The occupation basis is real, so Gamma(map o K) = Gamma(map) o K.
ModeOperator second_quantize(const CMatrix& map, bool antilinear, const FockBasis& basis);

// Projector onto states whose total occupation is strictly below max_total.
SparseCMatrix interior_projector(const FockBasis& basis);

void save_matrix_market(const SparseCMatrix& m, const std::string& path);

}  // namespace dilres
