#pragma once

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "dilres/types.hpp"

namespace dilres {

enum class AngularGroup { InversionOnly, Octahedral };

AngularGroup parse_angular_group(std::string_view name);
std::string to_string(AngularGroup g);

// Gaussian ultraviolet cutoff rho(k) = exp(-(k/Lambda)^2).
struct CutoffProfile {
    double lambda = 1.0;

    double operator()(double k) const { return std::exp(-(k / lambda) * (k / lambda)); }
    // rho(e^{-theta} k), the analytic continuation along the radial ray.
    cplx dilated(cplx theta, double k) const;
};

struct ModeNode {
    Vec3 k;
    int lambda = 1;       // polarization index, 1 or 2
    double weight = 0.0;  // d^3k quadrature weight
    double omega = 0.0;   // |k|
    Vec3 eps;
    int direction = 0;    // index into ModeGrid::directions
    int radial = 0;       // index into ModeGrid::radii
};

// Photon momentum space discretized as (direction orbit) x (radial nodes) x
// (two polarizations). Node index = (direction * n_radial + radial) * 2 + lambda - 1.
class ModeGrid {
public:
    ModeGrid() = default;
    ModeGrid(std::vector<Vec3> directions, std::vector<double> radii, std::vector<double> radial_weights,
             AngularGroup group, CutoffProfile cutoff);

    std::size_t size() const { return nodes_.size(); }
    const ModeNode& operator[](std::size_t i) const { return nodes_[i]; }
    const std::vector<ModeNode>& nodes() const { return nodes_; }

    const std::vector<Vec3>& directions() const { return directions_; }
    const std::vector<double>& radii() const { return radii_; }
    const std::vector<double>& radial_weights() const { return radial_weights_; }
    std::size_t n_radial() const { return radii_.size(); }
    AngularGroup group() const { return group_; }
    const CutoffProfile& cutoff() const { return cutoff_; }
    double lambda() const { return cutoff_.lambda; }

    std::size_t index(std::size_t direction, std::size_t radial, int lambda) const {
        return (direction * radii_.size() + radial) * 2 + static_cast<std::size_t>(lambda - 1);
    }
    // Index of a direction equal to d within 1e-10, or -1.
    int find_direction(const Vec3& d) const;

    // Short identifier used in manifests: "<group>/<n_dirs>x<n_radial>x2/rmax=<..>/Lambda=<..>".
    std::string id() const;

private:
    std::vector<Vec3> directions_;
    std::vector<double> radii_;
    std::vector<double> radial_weights_;
    AngularGroup group_ = AngularGroup::InversionOnly;
    CutoffProfile cutoff_;
    std::vector<ModeNode> nodes_;
};

ModeGrid build_mode_grid(int n_radial, double r_max, AngularGroup group, double lambda);

// Gauss-Legendre nodes and weights on (a, b).
void gauss_legendre(int n, double a, double b, std::vector<double>& x, std::vector<double>& w);

// The 24 proper rotations of the cube (signed permutation matrices, det +1).
std::vector<Mat3> octahedral_rotations();
// The rotations under which the grid's direction set is closed: {1} for
// inversion-only, the 24 octahedral rotations otherwise.
std::vector<Mat3> grid_rotations(const ModeGrid& grid);

Vec3 polarization(const Vec3& k, int lambda);

// K_theta(k) = |k|^{1/2} rho(e^{-theta} k) evaluated at a single radius.
cplx k_theta_radial(cplx theta, double r, const CutoffProfile& cutoff);
std::vector<cplx> k_theta(cplx theta, const ModeGrid& grid);

double mu_norm(std::span<const cplx> values, const ModeGrid& grid, double mu);

nlohmann::json to_json(const ModeGrid& grid);

}  // namespace dilres
