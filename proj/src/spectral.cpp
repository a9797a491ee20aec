#include "dilres/spectral.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <numeric>
#include <sstream>
#include <thread>

#include "dilres/linalg.hpp"

namespace dilres {

namespace {

struct UnionFind {
    std::vector<int> parent;
    explicit UnionFind(int n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
    int find(int i) {
        while (parent[i] != i) i = parent[i] = parent[parent[i]];
        return i;
    }
    void unite(int a, int b) { parent[find(a)] = find(b); }
};

}  // namespace

SpectrumResult eigs(const CMatrix& H, double cluster_tol) {
    const auto ed = linalg::eig_general(H);
    const int n = static_cast<int>(H.rows());

    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
        const cplx x = ed.values(a), y = ed.values(b);
        return x.real() != y.real() ? x.real() < y.real() : x.imag() < y.imag();
    });

    SpectrumResult out;
    out.matrix_norm = H.norm();
    out.eigenvalues.resize(n);
    out.eigenvectors.resize(n, n);
    out.residuals.resize(n);
    for (int i = 0; i < n; ++i) {
        out.eigenvalues[i] = ed.values(order[i]);
        out.eigenvectors.col(i) = ed.vectors.col(order[i]).normalized();
        out.residuals[i] = (H * out.eigenvectors.col(i) - out.eigenvalues[i] * out.eigenvectors.col(i)).norm();
    }

    // Clusters: connected components of |E_a - E_b| <= tol * scale. The sort is
    // by real part, so only neighbours within the real-part window are compared.
    double scale = 1.0;
    for (const cplx& e : out.eigenvalues) scale = std::max(scale, std::abs(e));
    const double eps = cluster_tol * scale;
    UnionFind uf(n);
    for (int a = 0; a < n; ++a)
        for (int b = a + 1; b < n && out.eigenvalues[b].real() - out.eigenvalues[a].real() <= eps; ++b)
            if (std::abs(out.eigenvalues[a] - out.eigenvalues[b]) <= eps) uf.unite(a, b);
    std::vector<int> slot(n, -1);
    for (int i = 0; i < n; ++i) {
        const int r = uf.find(i);
        if (slot[r] < 0) {
            slot[r] = static_cast<int>(out.clusters.size());
            out.clusters.emplace_back();
        }
        out.clusters[slot[r]].members.push_back(i);
    }
    for (Cluster& c : out.clusters) {
        cplx sum = 0.0;
        for (int i : c.members) sum += out.eigenvalues[i];
        c.center = sum / static_cast<double>(c.members.size());
        for (int a : c.members)
            for (int b : c.members) c.spread = std::max(c.spread, std::abs(out.eigenvalues[a] - out.eigenvalues[b]));
    }

    const double rtol = 1e-8 * std::max(out.matrix_norm, 1e-300);
    for (int i = 0; i < n; ++i)
        if (out.residuals[i] > rtol)
            out.warnings.push_back("residual " + format_double(out.residuals[i]) + " at eigenvalue " + std::to_string(i));
    for (const Cluster& c : out.clusters) {
        if (c.members.size() < 2) continue;
        CMatrix v(n, static_cast<Eigen::Index>(c.members.size()));
        for (std::size_t k = 0; k < c.members.size(); ++k) v.col(static_cast<Eigen::Index>(k)) = out.eigenvectors.col(c.members[k]);
        Eigen::JacobiSVD<CMatrix> svd(v);
        const RVector& s = svd.singularValues();
        if (s(s.size() - 1) < 1e-6 * s(0))
            out.warnings.push_back("eigenvector conditioning: cluster at " + format_double(c.center.real()) +
                                   " is numerically defective");
    }
    return out;
}

nlohmann::json to_json(const SpectrumResult& s) {
    nlohmann::json clusters = nlohmann::json::array();
    for (const Cluster& c : s.clusters)
        clusters.push_back({{"center", {c.center.real(), c.center.imag()}},
                            {"multiplicity", c.members.size()},
                            {"spread", c.spread}});
    double worst = 0.0;
    for (double r : s.residuals) worst = std::max(worst, r);
    return {{"dimension", s.eigenvalues.size()},
            {"matrix_norm", s.matrix_norm},
            {"max_residual", worst},
            {"clusters", clusters},
            {"warnings", s.warnings},
            {"params", s.params}};
}

std::string format_double(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x == 0.0 ? 0.0 : x);  // no "-0"
    return buf;
}

std::string spectrum_csv(const SpectrumResult& s) {
    std::vector<int> cluster_of(s.eigenvalues.size()), mult(s.eigenvalues.size());
    for (std::size_t c = 0; c < s.clusters.size(); ++c)
        for (int i : s.clusters[c].members) {
            cluster_of[i] = static_cast<int>(c);
            mult[i] = static_cast<int>(s.clusters[c].members.size());
        }
    std::ostringstream os;
    os << "index,E_re,E_im,residual,cluster,multiplicity\n";
    for (std::size_t i = 0; i < s.eigenvalues.size(); ++i)
        os << i << ',' << format_double(s.eigenvalues[i].real()) << ',' << format_double(s.eigenvalues[i].imag()) << ','
           << format_double(s.residuals[i]) << ',' << cluster_of[i] << ',' << mult[i] << '\n';
    return os.str();
}

std::string trajectory_csv(const ResonanceTrajectory& t) {
    std::ostringstream os;
    os << "kappa_re,kappa_im,theta_re,theta_im,E_re,E_im,cluster_spread,residual,g,seed_distance\n";
    for (const TrajectoryPoint& p : t.points)
        os << format_double(p.point.kappa.k1.real()) << ',' << format_double(p.point.kappa.k1.imag()) << ','
           << format_double(p.point.theta.real()) << ',' << format_double(p.point.theta.imag()) << ','
           << format_double(p.E.real()) << ',' << format_double(p.E.imag()) << ',' << format_double(p.spread) << ','
           << format_double(p.residual) << ',' << format_double(p.point.g) << ',' << format_double(p.seed_distance)
           << '\n';
    return os.str();
}

CauchyRiemann cauchy_riemann_probe(const std::function<cplx(cplx)>& f, cplx z0, double h) {
    if (!(h > 0.0)) throw InvalidArgument("cauchy-riemann: step must be positive");
    auto residual = [&](double s) {
        const cplx dx = (f(z0 + s) - f(z0 - s)) / (2.0 * s);
        const cplx dy = (f(z0 + kI * s) - f(z0 - kI * s)) / (2.0 * kI * s);
        if (!std::isfinite(std::abs(dx)) || !std::isfinite(std::abs(dy)))
            throw NumericalError("cauchy-riemann: evaluation failed near the stencil point");
        return dx - dy;
    };
    const cplx d1 = residual(h), d2 = residual(h / 2);
    // For analytic f the difference is h^2 f'''/3 + O(h^4); one Richardson
    // step removes that term and leaves what non-analyticity contributes.
    const cplx extrapolated = (4.0 * d2 - d1) / 3.0;
    CauchyRiemann cr;
    cr.residual = std::abs(d1);
    cr.residual_half = std::abs(d2);
    cr.extrapolated = std::abs(extrapolated);
    cr.floor_estimate = std::abs(d1 - extrapolated);
    return cr;
}

unsigned worker_threads() {
    unsigned n = std::max(1u, std::thread::hardware_concurrency());
    if (const char* env = std::getenv("DILRES_THREADS")) {
        char* end = nullptr;
        const long v = std::strtol(env, &end, 10);
        if (end != env && v >= 1) n = static_cast<unsigned>(v);
    }
    return n;
}

void parallel_for(std::size_t n, const std::function<void(std::size_t)>& f) {
    const unsigned workers = static_cast<unsigned>(std::min<std::size_t>(worker_threads(), n));
    if (workers <= 1) {
        for (std::size_t i = 0; i < n; ++i) f(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr error;
    std::mutex error_mutex;
    auto run = [&] {
        for (std::size_t i; (i = next.fetch_add(1)) < n;) {
            try {
                f(i);
            } catch (...) {
                std::lock_guard lock(error_mutex);
                if (!error) error = std::current_exception();
            }
        }
    };
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < workers; ++t) pool.emplace_back(run);
    for (auto& t : pool) t.join();
    if (error) std::rethrow_exception(error);
}

}  // namespace dilres
