// Angular-momentum helpers shared by the atomic models and the symmetry module.

#include <cmath>

#include <gsl/gsl_sf_coupling.h>

#include "dilres/atom.hpp"

namespace dilres {

std::array<CMatrix, 3> pauli_matrices() {
    std::array<CMatrix, 3> s;
    s[0] = CMatrix::Zero(2, 2);
    s[0](0, 1) = s[0](1, 0) = 1.0;
    s[1] = CMatrix::Zero(2, 2);
    s[1](0, 1) = -kI;
    s[1](1, 0) = kI;
    s[2] = CMatrix::Zero(2, 2);
    s[2](0, 0) = 1.0;
    s[2](1, 1) = -1.0;
    return s;
}

double clebsch_gordan(double j1, double m1, double j2, double m2, double J, double M) {
    if (std::abs(m1 + m2 - M) > 1e-12) return 0.0;
    const auto twice = [](double x) { return static_cast<int>(std::lround(2.0 * x)); };
    const double w3j = gsl_sf_coupling_3j(twice(j1), twice(j2), twice(J), twice(m1), twice(m2), -twice(M));
    const int phase_exp = static_cast<int>(std::lround(j1 - j2 + M));
    const double phase = (phase_exp % 2 == 0) ? 1.0 : -1.0;
    return phase * std::sqrt(2.0 * J + 1.0) * w3j;
}

std::array<CMatrix, 3> p_orbital_angular_momentum() {
    std::array<CMatrix, 3> L;
    for (int a = 0; a < 3; ++a) {
        L[a] = CMatrix::Zero(3, 3);
        const int b = (a + 1) % 3, c = (a + 2) % 3;
        L[a](b, c) = -kI;  // -i eps_{abc} with (a,b,c) cyclic
        L[a](c, b) = kI;
    }
    return L;
}

CMatrix spherical_to_cartesian_p() {
    const double s = 1.0 / std::sqrt(2.0);
    CMatrix m = CMatrix::Zero(3, 3);
    // |1,+1> = -(p_x + i p_y)/sqrt2
    m(0, 0) = -s;
    m(1, 0) = -kI * s;
    // |1,0> = p_z
    m(2, 1) = 1.0;
    // |1,-1> = (p_x - i p_y)/sqrt2
    m(0, 2) = s;
    m(1, 2) = -kI * s;
    return m;
}

}  // namespace dilres
