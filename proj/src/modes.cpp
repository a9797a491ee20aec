#include "dilres/modes.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <gsl/gsl_integration.h>

namespace dilres {

AngularGroup parse_angular_group(std::string_view name) {
    if (name == "inversion-only" || name == "inversion") return AngularGroup::InversionOnly;
    if (name == "octahedral") return AngularGroup::Octahedral;
    throw InvalidArgument("grid: unknown angular group '" + std::string(name) + "'");
}

std::string to_string(AngularGroup g) {
    return g == AngularGroup::Octahedral ? "octahedral" : "inversion-only";
}

cplx CutoffProfile::dilated(cplx theta, double k) const {
    const cplx x = std::exp(-theta) * k / lambda;
    return std::exp(-x * x);
}

ModeGrid::ModeGrid(std::vector<Vec3> directions, std::vector<double> radii, std::vector<double> radial_weights,
                   AngularGroup group, CutoffProfile cutoff)
    : directions_(std::move(directions)),
      radii_(std::move(radii)),
      radial_weights_(std::move(radial_weights)),
      group_(group),
      cutoff_(cutoff) {
    const double solid_angle = 4.0 * kPi / static_cast<double>(directions_.size());
    nodes_.reserve(directions_.size() * radii_.size() * 2);
    for (std::size_t d = 0; d < directions_.size(); ++d)
        for (std::size_t r = 0; r < radii_.size(); ++r)
            for (int lam = 1; lam <= 2; ++lam) {
                ModeNode n;
                n.k = radii_[r] * directions_[d];
                n.lambda = lam;
                n.weight = radial_weights_[r] * radii_[r] * radii_[r] * solid_angle;
                n.omega = radii_[r];
                n.eps = polarization(n.k, lam);
                n.direction = static_cast<int>(d);
                n.radial = static_cast<int>(r);
                nodes_.push_back(n);
            }
}

int ModeGrid::find_direction(const Vec3& d) const {
    for (std::size_t i = 0; i < directions_.size(); ++i)
        if ((directions_[i] - d).norm() < 1e-10) return static_cast<int>(i);
    return -1;
}

std::string ModeGrid::id() const {
    std::ostringstream os;
    os.precision(17);
    os << to_string(group_) << '/' << directions_.size() << 'x' << radii_.size() << "x2/rmax="
       << (radii_.empty() ? 0.0 : radii_.back()) << "/Lambda=" << cutoff_.lambda;
    return os.str();
}

void gauss_legendre(int n, double a, double b, std::vector<double>& x, std::vector<double>& w) {
    gsl_integration_glfixed_table* table = gsl_integration_glfixed_table_alloc(static_cast<std::size_t>(n));
    if (!table) throw NumericalError("quadrature: Gauss-Legendre table allocation failed");
    x.resize(n);
    w.resize(n);
    for (int i = 0; i < n; ++i) gsl_integration_glfixed_point(a, b, static_cast<std::size_t>(i), &x[i], &w[i], table);
    gsl_integration_glfixed_table_free(table);
    // GSL returns nodes symmetric about the midpoint but not monotone.
    std::vector<std::size_t> order(n);
    for (int i = 0; i < n; ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](std::size_t p, std::size_t q) { return x[p] < x[q]; });
    std::vector<double> xs(n), ws(n);
    for (int i = 0; i < n; ++i) {
        xs[i] = x[order[i]];
        ws[i] = w[order[i]];
    }
    x = std::move(xs);
    w = std::move(ws);
}

ModeGrid build_mode_grid(int n_radial, double r_max, AngularGroup group, double lambda) {
    if (n_radial < 1) throw InvalidArgument("grid: n_radial must be at least 1");
    if (!(r_max > 0.0)) throw InvalidArgument("grid: r_max must be positive");
    if (!(lambda > 0.0)) throw InvalidArgument("grid: Lambda must be positive");

    std::vector<double> r, w;
    gauss_legendre(n_radial, 0.0, r_max, r, w);

    std::vector<Vec3> dirs;
    if (group == AngularGroup::InversionOnly) {
        const Vec3 n = Vec3(1.0, 1.0, 1.0).normalized();
        dirs = {n, -n};
    } else {
        dirs = {Vec3::UnitX(), -Vec3::UnitX(), Vec3::UnitY(), -Vec3::UnitY(), Vec3::UnitZ(), -Vec3::UnitZ()};
    }
    return ModeGrid(std::move(dirs), std::move(r), std::move(w), group, CutoffProfile{lambda});
}

std::vector<Mat3> octahedral_rotations() {
    std::vector<Mat3> out;
    int perm[3] = {0, 1, 2};
    do {
        for (int s = 0; s < 8; ++s) {
            Mat3 m = Mat3::Zero();
            for (int row = 0; row < 3; ++row) m(row, perm[row]) = (s >> row) & 1 ? -1.0 : 1.0;
            if (m.determinant() > 0) out.push_back(m);
        }
    } while (std::next_permutation(perm, perm + 3));
    return out;
}

std::vector<Mat3> grid_rotations(const ModeGrid& grid) {
    if (grid.group() == AngularGroup::Octahedral) return octahedral_rotations();
    return {Mat3::Identity()};
}

Vec3 polarization(const Vec3& k, int lambda) {
    const double norm = k.norm();
    if (!(norm > 0.0)) throw InvalidArgument("polarization: k must be nonzero");
    if (lambda != 1 && lambda != 2) throw InvalidArgument("polarization: lambda must be 1 or 2");
    const Vec3 khat = k / norm;
    Vec3 c = khat.cross(Vec3::UnitZ());
    if (c.norm() < 1e-8) c = khat.cross(Vec3::UnitX());
    const Vec3 e1 = c.normalized();
    return lambda == 1 ? e1 : Vec3(khat.cross(e1));
}

cplx k_theta_radial(cplx theta, double r, const CutoffProfile& cutoff) {
    return std::sqrt(r) * cutoff.dilated(theta, r);
}

std::vector<cplx> k_theta(cplx theta, const ModeGrid& grid) {
    if (std::abs(theta.imag()) >= kPi / 4)
        throw InvalidArgument("k_theta: |Im theta| must be below pi/4 for the Gaussian cutoff");
    std::vector<cplx> out(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) out[i] = k_theta_radial(theta, grid[i].omega, grid.cutoff());
    return out;
}

double mu_norm(std::span<const cplx> values, const ModeGrid& grid, double mu) {
    if (!(mu > 0.0)) throw InvalidArgument("mu_norm: mu must be positive");
    if (values.size() != grid.size()) throw InvalidArgument("mu_norm: value count does not match grid");
    double sum = 0.0;
    for (std::size_t i = 0; i < values.size(); ++i)
        sum += grid[i].weight * std::norm(values[i]) / std::pow(grid[i].omega, 2.0 + 2.0 * mu);
    return std::sqrt(sum);
}

nlohmann::json to_json(const ModeGrid& grid) {
    nlohmann::json nodes = nlohmann::json::array();
    for (const auto& n : grid.nodes())
        nodes.push_back({{"k", {n.k.x(), n.k.y(), n.k.z()}},
                         {"lambda", n.lambda},
                         {"weight", n.weight},
                         {"eps", {n.eps.x(), n.eps.y(), n.eps.z()}}});
    return {{"nodes", nodes},
            {"Lambda", grid.lambda()},
            {"group", to_string(grid.group())},
            {"polarization_gauge", "e1 = khat x e3 / |khat x e3| (fallback e1-axis below 1e-8), e2 = khat x e1"}};
}

}  // namespace dilres
