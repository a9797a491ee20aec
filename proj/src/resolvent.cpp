#include <algorithm>
#include <cmath>

#include "dilres/spectral.hpp"

namespace dilres {

namespace {

void check_region(const GapData& gap, ResolventCase c, cplx theta, cplx z, const ResolventRegion& r) {
    const double d = gap.delta / gap.delta_check;
    if (!(r.theta0 > 0.0 && r.theta0 < kPi / 2)) throw InvalidArgument("resolvent: theta0 must lie in (0, pi/2)");
    if (!(r.theta1 > 0.0)) throw InvalidArgument("resolvent: theta1 must be positive");
    if (!(r.rho > 0.0 && r.rho < d)) throw InvalidArgument("resolvent: rho must lie in (0, delta/delta_check)");
    if (std::abs(theta.real()) >= r.theta1) throw InvalidArgument("resolvent: |Re theta| outside the region");
    if (c == ResolventCase::Ground) {
        if (gap.j != 0) throw InvalidArgument("resolvent: ground case needs level 0");
        if (std::abs(theta.imag()) >= r.theta0) throw InvalidArgument("resolvent: |Im theta| outside the region");
        if (std::abs(z) >= r.rho) throw InvalidArgument("resolvent: |z| outside the region");
    } else {
        if (gap.j == 0) throw InvalidArgument("resolvent: excited case needs a level above the ground level");
        if (!(theta.imag() > 0.0 && theta.imag() < r.theta0))
            throw InvalidArgument("resolvent: Im theta outside (0, theta0)");
        if (std::abs(z) >= r.rho * std::sin(theta.imag()))
            throw InvalidArgument("resolvent: |z| outside rho sin(Im theta)");
    }
}

}  // namespace

double resolvent_majorant(const GapData& gap, const std::vector<double>& levels, ResolventCase c, cplx theta,
                          const ResolventRegion& r) {
    const double d = gap.delta / gap.delta_check;
    const double upper = std::exp(-theta.real()) / (d - r.rho * (c == ResolventCase::Ground ? 1.0 : std::sin(theta.imag()))) +
                         1.0 / std::cos(r.theta0);
    if (c == ResolventCase::Ground) return upper;
    // Levels below E_j: bounded through the imaginary part of the denominator.
    const double et = std::exp(theta.real());
    const double s = std::sin(theta.imag());
    const double q1 = 2.0 * et * ((gap.energy - levels.front()) / gap.delta_check + s * r.rho);
    const double lower = std::max(2.0 * (1.0 + 1.0 / q1), (1.0 + q1) / (et * s * (d - r.rho)));
    return upper + lower;
}

ResolventPoint resolvent_bound_check(const std::vector<double>& levels, const GapData& gap, ResolventCase c,
                                     cplx theta, cplx z, const std::vector<double>& q_grid,
                                     const ResolventRegion& region) {
    if (q_grid.empty()) throw InvalidArgument("resolvent: empty q grid");
    for (double q : q_grid)
        if (!(q >= 0.0)) throw InvalidArgument("resolvent: q values must be nonnegative");
    if (gap.j < 0 || gap.j >= static_cast<int>(levels.size())) throw InvalidArgument("resolvent: level out of range");
    check_region(gap, c, theta, z, region);

    const cplx et = std::exp(theta);
    ResolventPoint p;
    std::size_t best = 0;
    for (std::size_t k = 0; k < q_grid.size(); ++k) {
        const double q = q_grid[k];
        double worst = 0.0;
        for (std::size_t i = 0; i < levels.size(); ++i) {
            if (static_cast<int>(i) == gap.j) continue;
            const cplx denom = et * (levels[i] - gap.energy) / gap.delta_check - et * z + q;
            worst = std::max(worst, (q + 1.0) / std::abs(denom));
        }
        if (worst > p.measured) {
            p.measured = worst;
            best = k;
        }
    }
    p.argmax_q = q_grid[best];
    p.interior_sup = q_grid.size() > 2 && best > 0 && best + 1 < q_grid.size();
    p.majorant = resolvent_majorant(gap, levels, c, theta, region);
    p.pass = p.measured <= p.majorant;
    return p;
}

ResolventPoint resolvent_bound_check(const AtomModel& model, const GapData& gap, ResolventCase c, cplx theta, cplx z,
                                     const std::vector<double>& q_grid, const ResolventRegion& region) {
    std::vector<double> levels;
    for (const Level& l : model.levels()) levels.push_back(l.energy);
    return resolvent_bound_check(levels, gap, c, theta, z, q_grid, region);
}

}  // namespace dilres
