#include "dilres/verify.hpp"

namespace dilres::presets {

AtomModel toy_atom() { return toy_two_level(kToyDelta, kToyDipole); }

ModeGrid toy_grid(int n_radial) {
    return build_mode_grid(n_radial, kToyRmax, AngularGroup::InversionOnly, kToyLambda);
}

Builder dense_builder(const AtomModel& model, const ModeGrid& grid, const FockBasis& basis) {
    return [&model, &grid, &basis](const PathPoint& p) {
        DilatedHamiltonian h = assemble_H(model, grid, basis, p.kappa, p.theta, p.g);
        if (!h.has_dense()) throw InvalidArgument("builder: dimension above the dense limit");
        return h.matrix;
    };
}

std::vector<double> hydrogen_level_set(double Z, int n_max) {
    const RadialStates s = hydrogen_levels(Z, 0, n_max, default_radial_grid(Z, n_max, 0));
    return {s.energies.data(), s.energies.data() + s.energies.size()};
}

}  // namespace dilres::presets
