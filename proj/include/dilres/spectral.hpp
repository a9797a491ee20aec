#pragma once

#include <functional>
#include <string>
#include <vector>

#include <json.hpp>

#include "dilres/atom.hpp"
#include "dilres/hamiltonian.hpp"
#include "dilres/types.hpp"

namespace dilres {

// --- eigensolver ------------------------------------------------------------

struct Cluster {
    cplx center{0.0};
    std::vector<int> members;  // indices into SpectrumResult::eigenvalues
    double spread = 0.0;       // largest pairwise distance inside the cluster
};

struct SpectrumResult {
    std::vector<cplx> eigenvalues;  // sorted by real part, then imaginary part
    CMatrix eigenvectors;           // matching right eigenvectors, unit norm
    std::vector<double> residuals;  // ||H v - E v||
    std::vector<Cluster> clusters;
    std::vector<std::string> warnings;
    double matrix_norm = 0.0;  // Frobenius norm of H
    nlohmann::json params;
};

SpectrumResult eigs(const CMatrix& H, double cluster_tol = 1e-9);

// --- resonance continuation -------------------------------------------------

struct PathPoint {
    KappaPair kappa;
    cplx theta{0.0};
    double g = 1.0;
};

PathPoint interpolate(const PathPoint& a, const PathPoint& b, double t);
// n + 1 equally spaced points from a to b (a single point when n == 0).
std::vector<PathPoint> linear_path(const PathPoint& a, const PathPoint& b, int n);

using Builder = std::function<CMatrix(const PathPoint&)>;

struct Seed {
    int level = 0;
    int d = 1;
    CMatrix subspace;  // orthonormal columns in the full space, e.g. phi_j (x) Omega
    cplx energy{0.0};  // eigenvalue of the seed at the decoupled point
};

// The seed for atomic level j of the (unrescaled) Hamiltonian: level basis (x) vacuum.
Seed atomic_seed(const AtomModel& model, const FockBasis& basis, int level);

struct TrackingOptions {
    int max_halvings = 10;
    double gap_ratio = 3.0;
    double split_tol = 1e-9;  // relative to ||H||
};

struct TrajectoryPoint {
    PathPoint point;
    cplx E{0.0};               // cluster mean
    double spread = 0.0;
    double residual = 0.0;     // largest eigenpair residual in the cluster
    int rank = 0;
    double seed_distance = 0.0;  // ||P - P_seed|| (spectral norm of projector difference)
    double matrix_norm = 0.0;
    int halvings = 0;
};

struct ResonanceTrajectory {
    int level = 0;
    int d = 1;
    std::vector<TrajectoryPoint> points;
    std::vector<std::string> events;
    bool aborted = false;
    std::string abort_reason;
};

ResonanceTrajectory track_resonance(const Builder& builder, const std::vector<PathPoint>& path, const Seed& seed,
                                    const TrackingOptions& options = {});

struct ThetaIndependence {
    std::vector<cplx> thetas;
    std::vector<cplx> energies;
    double max_deviation = 0.0;
    std::vector<ResonanceTrajectory> trajectories;
};

// Tracks the seed from kappa = 0 to kappa at each theta (n_steps continuation
// steps) and compares the endpoints.
ThetaIndependence theta_independence(const Builder& builder, KappaPair kappa, double g,
                                     const std::vector<cplx>& theta_grid, const Seed& seed, int n_steps = 4,
                                     const TrackingOptions& options = {});

struct ThetaTrend {
    std::vector<int> n_radial;
    std::vector<double> deviations;
    std::vector<double> max_imag;  // largest Im E over all thetas for each refinement
    bool nonincreasing = false;
};

// Study input for one radial refinement.
struct ThetaStudy {
    Builder builder;
    Seed seed;
};
ThetaTrend theta_independence_trend(const std::function<ThetaStudy(int)>& make, const std::vector<int>& n_radial,
                                    KappaPair kappa, double g, const std::vector<cplx>& theta_grid, int n_steps = 4);

// --- analyticity ------------------------------------------------------------

struct CauchyRiemann {
    double residual = 0.0;       // at step h
    double residual_half = 0.0;  // at step h/2
    double extrapolated = 0.0;   // Richardson-extrapolated residual: what O(h^2) does not explain
    double floor_estimate = 0.0; // Richardson estimate of the O(h^2) stencil error contained in residual
};

CauchyRiemann cauchy_riemann_probe(const std::function<cplx(cplx)>& f, cplx z0, double h);

// --- resolvent bounds -------------------------------------------------------

enum class ResolventCase { Ground, Excited };

struct ResolventRegion {
    double theta0 = 1.0;  // |Im theta| < theta0 (ground) or 0 < Im theta < theta0 (excited)
    double theta1 = 1.0;  // |Re theta| < theta1
    double rho = 0.5;     // ground: |z| < rho; excited: |z| < rho sin(Im theta); rho < delta/delta_check
};

struct ResolventPoint {
    double measured = 0.0;
    double majorant = 0.0;
    bool pass = false;
    double argmax_q = 0.0;
    bool interior_sup = false;  // the q-supremum sits strictly inside q_grid
};

ResolventPoint resolvent_bound_check(const std::vector<double>& levels, const GapData& gap, ResolventCase c,
                                     cplx theta, cplx z, const std::vector<double>& q_grid,
                                     const ResolventRegion& region);
ResolventPoint resolvent_bound_check(const AtomModel& model, const GapData& gap, ResolventCase c, cplx theta, cplx z,
                                     const std::vector<double>& q_grid, const ResolventRegion& region);

double resolvent_majorant(const GapData& gap, const std::vector<double>& levels, ResolventCase c, cplx theta,
                          const ResolventRegion& region);

// --- second-order perturbation theory ---------------------------------------

// Coefficient c with E_j(g) = E_j + c g^2 + O(g^4) for H_el + g W(G) + e^{-theta} H_f,
// from matrix elements of G only.
cplx perturbation2_oracle(const AtomModel& model, const CouplingFunction& G, int level);

// --- output -----------------------------------------------------------------

// 17 significant digits, shortest round-trip not required but stable.
std::string format_double(double x);
std::string spectrum_csv(const SpectrumResult& s);
std::string trajectory_csv(const ResonanceTrajectory& t);
nlohmann::json to_json(const SpectrumResult& s);

// Number of worker threads: DILRES_THREADS if set (>= 1), else hardware concurrency.
unsigned worker_threads();
// Runs f(i) for i in [0, n) on up to worker_threads() threads. Results must be
// written to per-index slots by f.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& f);

}  // namespace dilres
