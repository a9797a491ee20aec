#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "dilres/linalg.hpp"
#include "dilres/spectral.hpp"

namespace dilres {

PathPoint interpolate(const PathPoint& a, const PathPoint& b, double t) {
    PathPoint p;
    p.kappa.k1 = a.kappa.k1 + t * (b.kappa.k1 - a.kappa.k1);
    p.kappa.k2 = a.kappa.k2 + t * (b.kappa.k2 - a.kappa.k2);
    p.theta = a.theta + t * (b.theta - a.theta);
    p.g = a.g + t * (b.g - a.g);
    return p;
}

std::vector<PathPoint> linear_path(const PathPoint& a, const PathPoint& b, int n) {
    if (n < 0) throw InvalidArgument("path: negative step count");
    std::vector<PathPoint> out{a};
    for (int i = 1; i <= n; ++i) out.push_back(interpolate(a, b, static_cast<double>(i) / n));
    return out;
}

Seed atomic_seed(const AtomModel& model, const FockBasis& basis, int level) {
    if (level < 0 || level >= static_cast<int>(model.levels().size()))
        throw InvalidArgument("seed: level index out of range");
    Seed s;
    s.level = level;
    const CMatrix phi = model.level_basis(level);
    s.d = static_cast<int>(phi.cols());
    s.subspace = with_vacuum(phi, basis);
    s.energy = model.levels()[level].energy;
    return s;
}

namespace {

struct Match {
    bool ok = false;
    std::string why;
    std::vector<int> members;
    CMatrix subspace;
    TrajectoryPoint point;
};

// ||P_a - P_b|| for orthogonal projectors onto equal-dimensional spans.
double projector_distance(const CMatrix& qa, const CMatrix& qb) {
    if (qa.cols() != qb.cols()) return 1.0;
    Eigen::JacobiSVD<CMatrix> svd(qa.adjoint() * qb);
    const double smin = std::min(1.0, svd.singularValues().minCoeff());
    return std::sqrt(std::max(0.0, 1.0 - smin * smin));
}

Match match_cluster(const CMatrix& H, const PathPoint& p, const CMatrix& prev, cplx prev_E, int d,
                    const TrackingOptions& opt) {
    Match m;
    const SpectrumResult s = eigs(H);
    const int n = static_cast<int>(s.eigenvalues.size());
    if (n < d) {
        m.why = "matrix smaller than the seed cluster";
        return m;
    }
    // Overlap of each eigenvector's span with the previous cluster subspace.
    std::vector<double> score(n);
    for (int k = 0; k < n; ++k) score[k] = (prev.adjoint() * s.eigenvectors.col(k)).squaredNorm();
    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return score[a] > score[b]; });
    m.members.assign(order.begin(), order.begin() + d);

    cplx sum = 0.0;
    for (int k : m.members) sum += s.eigenvalues[k];
    const cplx E = sum / static_cast<double>(d);
    const double jump = std::abs(E - prev_E);

    if (n > d && score[order[d - 1]] < opt.gap_ratio * score[order[d]]) {
        m.why = "overlap ratio below gap ratio";
        return m;
    }
    double nearest = std::numeric_limits<double>::infinity();
    for (int k = 0; k < n; ++k)
        if (std::find(m.members.begin(), m.members.end(), k) == m.members.end())
            nearest = std::min(nearest, std::abs(s.eigenvalues[k] - E));
    if (nearest < opt.gap_ratio * jump) {
        m.why = "eigenvalue jump comparable to distance from other eigenvalues";
        return m;
    }

    CMatrix v(H.rows(), d);
    for (int c = 0; c < d; ++c) v.col(c) = s.eigenvectors.col(m.members[c]);
    m.subspace = linalg::orthonormal_basis(v, 1e-10);
    m.ok = true;
    TrajectoryPoint& tp = m.point;
    tp.point = p;
    tp.E = E;
    tp.rank = static_cast<int>(m.subspace.cols());
    tp.matrix_norm = s.matrix_norm;
    for (int a : m.members) {
        tp.residual = std::max(tp.residual, s.residuals[a]);
        for (int b : m.members) tp.spread = std::max(tp.spread, std::abs(s.eigenvalues[a] - s.eigenvalues[b]));
    }
    return m;
}

struct Tracker {
    const Builder& builder;
    const TrackingOptions& opt;
    int d;
    CMatrix subspace;
    cplx E;
    PathPoint at;

    // Advances from `at` to `to`, halving the step on ambiguity.
    Match advance(const PathPoint& to, int depth, int& halvings) {
        Match m = match_cluster(builder(to), to, subspace, E, d, opt);
        if (m.ok) return m;
        if (depth >= opt.max_halvings) return m;
        const PathPoint mid = interpolate(at, to, 0.5);
        ++halvings;
        Match half = advance(mid, depth + 1, halvings);
        if (!half.ok) return half;
        subspace = half.subspace;
        E = half.point.E;
        at = mid;
        return advance(to, depth + 1, halvings);
    }
};

}  // namespace

ResonanceTrajectory track_resonance(const Builder& builder, const std::vector<PathPoint>& path, const Seed& seed,
                                    const TrackingOptions& options) {
    if (path.empty()) throw InvalidArgument("tracking: empty path");
    if (seed.d < 1 || seed.subspace.cols() != seed.d) throw InvalidArgument("tracking: seed subspace rank differs from d");
    ResonanceTrajectory t;
    t.level = seed.level;
    t.d = seed.d;
    const CMatrix seed_q = linalg::orthonormal_basis(seed.subspace, 1e-10);
    Tracker tr{builder, options, seed.d, seed_q, seed.energy, path.front()};

    for (std::size_t i = 0; i < path.size(); ++i) {
        int halvings = 0;
        Match m = i == 0 ? match_cluster(builder(path[0]), path[0], seed_q, seed.energy, seed.d, options)
                         : tr.advance(path[i], 0, halvings);
        if (!m.ok) {
            t.aborted = true;
            t.abort_reason = "ambiguous match at path point " + std::to_string(i) + ": " + m.why;
            break;
        }
        if (m.point.rank != seed.d) {
            t.aborted = true;
            t.abort_reason = "projector rank changed at path point " + std::to_string(i);
            break;
        }
        m.point.halvings = halvings;
        m.point.seed_distance = projector_distance(m.subspace, seed_q);
        if (m.point.spread > options.split_tol * std::max(m.point.matrix_norm, 1e-300))
            t.events.push_back("cluster split at path point " + std::to_string(i) + ": spread " +
                               format_double(m.point.spread));
        tr.subspace = m.subspace;
        tr.E = m.point.E;
        tr.at = path[i];
        t.points.push_back(m.point);
    }
    return t;
}

ThetaIndependence theta_independence(const Builder& builder, KappaPair kappa, double g,
                                     const std::vector<cplx>& theta_grid, const Seed& seed, int n_steps,
                                     const TrackingOptions& options) {
    if (theta_grid.empty()) throw InvalidArgument("theta-independence: empty theta grid");
    ThetaIndependence out;
    out.thetas = theta_grid;
    out.energies.resize(theta_grid.size());
    out.trajectories.resize(theta_grid.size());
    parallel_for(theta_grid.size(), [&](std::size_t i) {
        const PathPoint start{KappaPair{}, theta_grid[i], g};
        const PathPoint end{kappa, theta_grid[i], g};
        out.trajectories[i] = track_resonance(builder, linear_path(start, end, n_steps), seed, options);
    });
    for (std::size_t i = 0; i < theta_grid.size(); ++i) {
        const ResonanceTrajectory& t = out.trajectories[i];
        if (t.aborted)
            throw NumericalError("theta-independence: cluster lost at theta = (" + format_double(theta_grid[i].real()) +
                                 ", " + format_double(theta_grid[i].imag()) + "): " + t.abort_reason);
        out.energies[i] = t.points.back().E;
    }
    for (std::size_t i = 0; i < out.energies.size(); ++i)
        for (std::size_t j = i + 1; j < out.energies.size(); ++j)
            out.max_deviation = std::max(out.max_deviation, std::abs(out.energies[i] - out.energies[j]));
    return out;
}

ThetaTrend theta_independence_trend(const std::function<ThetaStudy(int)>& make, const std::vector<int>& n_radial,
                                    KappaPair kappa, double g, const std::vector<cplx>& theta_grid, int n_steps) {
    ThetaTrend trend;
    trend.n_radial = n_radial;
    for (int nr : n_radial) {
        const ThetaStudy study = make(nr);
        const ThetaIndependence ti = theta_independence(study.builder, kappa, g, theta_grid, study.seed, n_steps);
        trend.deviations.push_back(ti.max_deviation);
        double im = -std::numeric_limits<double>::infinity();
        for (const cplx& e : ti.energies) im = std::max(im, e.imag());
        trend.max_imag.push_back(im);
    }
    trend.nonincreasing = true;
    for (std::size_t i = 1; i < trend.deviations.size(); ++i)
        trend.nonincreasing = trend.nonincreasing && trend.deviations[i] <= trend.deviations[i - 1];
    return trend;
}

cplx perturbation2_oracle(const AtomModel& model, const CouplingFunction& G, int level) {
    if (level < 0 || level >= static_cast<int>(model.levels().size()))
        throw InvalidArgument("perturbation: level index out of range");
    if (G.creation.size() != G.annihilation.size() || G.creation.size() != G.field_energies.size())
        throw InvalidArgument("perturbation: inconsistent coupling function");
    const CMatrix& U = model.eigenvectors();
    const RVector& E = model.energies();
    const CMatrix phi = model.level_basis(level);
    const double Ej = model.levels()[level].energy;
    const Eigen::Index d = phi.cols();
    const double scale = std::max(1.0, E.cwiseAbs().maxCoeff());

    // Second-order block B_ab = sum_{i,m} <a|A_i|m><m|C_i|b> / (E_j - E_m - e^{-theta} w_i):
    // one photon is emitted by the creation part and reabsorbed by the annihilation part.
    CMatrix B = CMatrix::Zero(d, d);
    for (std::size_t i = 0; i < G.creation.size(); ++i) {
        const CMatrix left = phi.adjoint() * G.annihilation[i] * U;  // d x n
        const CMatrix right = U.adjoint() * G.creation[i] * phi;     // n x d
        for (Eigen::Index m = 0; m < U.cols(); ++m) {
            const cplx denom = Ej - E(m) - G.field_energies[i];
            if (left.col(m).squaredNorm() == 0.0 || right.row(m).squaredNorm() == 0.0) continue;
            if (std::abs(denom) <= 1e-14 * scale)
                throw NumericalError("perturbation: vanishing denominator at (m, i) = (" + std::to_string(m) + ", " +
                                     std::to_string(i) + ")");
            B += left.col(m) * right.row(m) / denom;
        }
    }
    const cplx c = B.trace() / static_cast<double>(d);
    if (d > 1 && (B - c * CMatrix::Identity(d, d)).norm() > 1e-8 * std::max(1.0, B.norm()))
        throw InvalidArgument("perturbation: degenerate second-order block is not scalar");
    return c;
}

}  // namespace dilres
