// Finite-difference oracle for the hydrogen radial problem
//   -u'' + l(l+1)/r^2 u - Z/r u = E u,   u(0) = u(r_max) = 0,
// in units 4 Ry = 1 (E_n = -Z^2 / (4 n^2)).

#include <algorithm>
#include <cmath>

#include "dilres/atom.hpp"
#include "dilres/linalg.hpp"

namespace dilres {

namespace {

RadialStates solve_radial(double Z, int l, int n_states, const RadialGrid& grid) {
    if (n_states < 1 || n_states > grid.n) throw InvalidArgument("radial: n_states outside the grid size");
    const double h2 = grid.h * grid.h;
    RVector d(grid.n), e(grid.n - 1);
    for (int i = 0; i < grid.n; ++i) {
        const double r = grid.r(i);
        d(i) = 2.0 / h2 + l * (l + 1) / (r * r) - Z / r;
    }
    e.setConstant(-1.0 / h2);

    RadialStates out;
    out.grid = grid;
    RMatrix v;
    linalg::eig_tridiagonal(d, e, 0, n_states - 1, out.energies, v);
    out.u = v / std::sqrt(grid.h);
    for (int c = 0; c < n_states; ++c) {
        // Fix the sign by the first clearly nonzero sample near the origin.
        const double peak = out.u.col(c).cwiseAbs().maxCoeff();
        for (int i = 0; i < grid.n; ++i)
            if (std::abs(out.u(i, c)) > 1e-6 * peak) {
                if (out.u(i, c) < 0) out.u.col(c) *= -1.0;
                break;
            }
    }
    return out;
}

}  // namespace

RadialGrid make_radial_grid(double r_max, double h, int l) {
    if (!(h > 0.0) || !(r_max > 2 * h)) throw InvalidArgument("radial: need h > 0 and r_max > 2h");
    if (l < 0) throw InvalidArgument("radial: l must be nonnegative");
    RadialGrid g;
    g.h = h;
    g.n = static_cast<int>(std::lround(r_max / h)) - 1;
    g.l = l;
    return g;
}

RadialGrid default_radial_grid(double Z, int n_max, int l) {
    if (!(Z > 0.0)) throw InvalidArgument("radial: Z must be positive");
    return make_radial_grid(40.0 * n_max * n_max / Z, 0.01 / Z, l);
}

RadialStates hydrogen_levels(double Z, int l, int n_states, const RadialGrid& grid) {
    if (!(Z > 0.0)) throw InvalidArgument("radial: Z must be positive");
    if (grid.l != l) throw InvalidArgument("radial: grid channel does not match l");
    RadialStates fine = solve_radial(Z, l, n_states, grid);

    // Same box, doubled spacing: the shift estimates the discretization error.
    RadialGrid coarse = grid;
    coarse.h = 2.0 * grid.h;
    coarse.n = (grid.n + 1) / 2 - 1;
    if (coarse.n >= n_states) {
        const RadialStates c = solve_radial(Z, l, n_states, coarse);
        fine.refinement_shift = (fine.energies - c.energies).cwiseAbs().maxCoeff();
        if (fine.refinement_shift > 1e-4)
            throw NumericalError("radial: grid too coarse (refinement shift " + std::to_string(fine.refinement_shift) +
                                 ")");
    }
    return fine;
}

double nu_epsilon(double r, double eps) {
    if (!(eps > 0.0)) throw InvalidArgument("nu_epsilon: eps must be positive");
    if (r < 0.0) throw InvalidArgument("nu_epsilon: r must be nonnegative");
    return r <= eps ? 1.0 / (eps * eps * eps) : 1.0 / (r * r * r);
}

double spin_orbit_radial(const RadialStates& s, int index, double eps) {
    double sum = 0.0;
    for (int i = 0; i < s.grid.n; ++i) sum += s.u(i, index) * s.u(i, index) * nu_epsilon(s.grid.r(i), eps);
    return s.grid.h * sum;
}

double spin_orbit_radial(double Z, double eps, const RadialGrid& grid) {
    // The 2p state is the lowest l = 1 eigenfunction.
    RadialGrid g = grid;
    g.l = 1;
    return spin_orbit_radial(hydrogen_levels(Z, 1, 1, g), 0, eps);
}

double radial_dipole(const RadialStates& a, int ia, const RadialStates& b, int ib) {
    if (a.grid.n != b.grid.n || a.grid.h != b.grid.h) throw InvalidArgument("radial: states live on different grids");
    double sum = 0.0;
    for (int i = 0; i < a.grid.n; ++i) sum += a.u(i, ia) * b.u(i, ib) * a.grid.r(i);
    return a.grid.h * sum;
}

UncertaintyProbe uncertainty_probe(const RVector& u, const RadialGrid& grid) {
    if (u.size() != grid.n) throw InvalidArgument("uncertainty: function does not match the grid");
    const double peak = u.cwiseAbs().maxCoeff();
    if (peak > 0.0 && std::abs(u(grid.n - 1)) > 1e-8 * peak)
        throw InvalidArgument("uncertainty: function is supported at the grid end");
    // s-wave: psi = u/r, d^3x = 4 pi r^2 dr, u(0) = 0 at the implicit left end.
    UncertaintyProbe p;
    double prev = 0.0, grad = 0.0, pot = 0.0;
    for (int i = 0; i < grid.n; ++i) {
        const double r = grid.r(i);
        pot += u(i) * u(i) / (r * r);
        grad += (u(i) - prev) * (u(i) - prev);
        prev = u(i);
    }
    grad += prev * prev;  // last interval to the Dirichlet end
    p.lhs = 4.0 * kPi * 0.25 * grid.h * pot;
    p.rhs = 4.0 * kPi * grad / grid.h;
    return p;
}

}  // namespace dilres
