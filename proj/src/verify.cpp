#include "dilres/verify.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <random>

#include "dilres/fock.hpp"
#include "dilres/linalg.hpp"
#include "dilres/symmetry.hpp"

namespace dilres {

namespace {

double tol(const SuiteOptions& o, double fallback) { return o.tolerance.value_or(fallback); }

// Runs body; an exception becomes a failed check carrying the message.
void guarded(std::vector<Check>& out, const std::string& name, const std::function<void()>& body) {
    try {
        body();
    } catch (const std::exception& e) {
        Check c;
        c.name = name;
        c.measured = std::numeric_limits<double>::quiet_NaN();
        c.bound = 0.0;
        c.pass = false;
        c.error = e.what();
        out.push_back(c);
    }
}

double sparse_norm(const SparseCMatrix& m) { return m.norm(); }

std::vector<double> logspace(double a, double b, int n) {
    std::vector<double> v;
    for (int i = 0; i < n; ++i) v.push_back(a * std::pow(b / a, n == 1 ? 0.0 : static_cast<double>(i) / (n - 1)));
    return v;
}

// Least-squares slope of log|y| against log x.
double loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    const double n = static_cast<double>(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double lx = std::log(x[i]), ly = std::log(std::abs(y[i]));
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
    }
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

cplx track_endpoint(const Builder& b, const PathPoint& from, const PathPoint& to, int steps, const Seed& seed) {
    const ResonanceTrajectory t = track_resonance(b, linear_path(from, to, steps), seed);
    if (t.aborted) throw NumericalError("tracking aborted: " + t.abort_reason);
    return t.points.back().E;
}

// --- CCR & Fock ---------------------------------------------------------------

void ccr_checks(std::vector<Check>& out, const SuiteOptions& o, const ModeGrid& grid, int n_ph) {
    const std::string tag = grid.id() + "/N=" + std::to_string(n_ph);
    const FockBasis basis = build_fock_basis(grid, n_ph);
    const double t = tol(o, 1e-12);
    out.push_back(make_check("fock dimension " + tag,
                             std::abs(static_cast<double>(basis.dim()) - fock_dimension(grid.size(), n_ph)), 0.5));

    const std::size_t m = grid.size();
    std::vector<SparseCMatrix> a(m), ad(m);
    for (std::size_t i = 0; i < m; ++i) {
        a[i] = annihilation(basis, i).matrix;
        ad[i] = creation(basis, i).matrix;
    }
    const SparseCMatrix P = interior_projector(basis);
    SparseCMatrix id(basis.dim(), basis.dim());
    id.setIdentity();
    double ccr = 0.0, aa = 0.0, vac = 0.0, adj = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
        adj = std::max(adj, sparse_norm(SparseCMatrix(ad[i] - SparseCMatrix(a[i].adjoint()))));
        vac = std::max(vac, a[i].col(0).norm());
        for (std::size_t j = 0; j < m; ++j) {
            SparseCMatrix c = a[i] * ad[j] - ad[j] * a[i];
            if (i == j) c -= id;
            ccr = std::max(ccr, sparse_norm(SparseCMatrix(P * c * P)));
            aa = std::max(aa, sparse_norm(SparseCMatrix(a[i] * a[j] - a[j] * a[i])));
        }
    }
    out.push_back(make_check("CCR [a_i, a*_j] = delta_ij below the top layer " + tag, ccr, t));
    out.push_back(make_check("[a_i, a_j] = 0 " + tag, aa, t));
    out.push_back(make_check("a_i Omega = 0 " + tag, vac, t));
    out.push_back(make_check("creation is the adjoint of annihilation " + tag, adj, t));

    SparseCMatrix hf(basis.dim(), basis.dim());
    for (std::size_t i = 0; i < m; ++i) hf += grid[i].omega * SparseCMatrix(ad[i] * a[i]);
    out.push_back(make_check("H_f = sum omega_i a*_i a_i " + tag,
                             sparse_norm(SparseCMatrix(hf - field_energy(basis, grid).matrix)), t));

    // Polarizations and the photon representation of the grid's rotation group.
    double pol = 0.0;
    for (const ModeNode& n : grid.nodes()) {
        const ModeNode& other = grid[grid.index(n.direction, n.radial, 3 - n.lambda)];
        pol = std::max({pol, std::abs(n.eps.norm() - 1.0), std::abs(n.eps.dot(n.k)) / n.omega, std::abs(n.eps.dot(other.eps))});
    }
    out.push_back(make_check("polarizations orthonormal and transverse " + tag, pol, t));
    double min_w = std::numeric_limits<double>::infinity();
    for (const ModeNode& n : grid.nodes()) min_w = std::min(min_w, n.weight);
    out.push_back(make_check("quadrature weights positive " + tag, min_w, 0.0, ">"));

    const auto rots = grid_rotations(grid);
    double unitarity = 0.0, homo = 0.0;
    const Mat3& r1 = rots[rots.size() / 3];
    const Mat3& r2 = rots[rots.size() - 1];
    for (const Mat3& r : {r1, r2}) {
        const CMatrix u = rotate_photon_modes(r, grid);
        unitarity = std::max(unitarity, (u.adjoint() * u - CMatrix::Identity(u.rows(), u.cols())).norm());
        const CMatrix g = second_quantize(u, false, basis).dense();
        unitarity = std::max(unitarity, (g.adjoint() * g - CMatrix::Identity(g.rows(), g.cols())).norm());
    }
    const CMatrix u1 = rotate_photon_modes(r1, grid), u2 = rotate_photon_modes(r2, grid);
    homo = std::max(homo, (rotate_photon_modes(r1 * r2, grid) - u1 * u2).norm());
    homo = std::max(homo, (second_quantize(u1 * u2, false, basis).dense() -
                           second_quantize(u1, false, basis).dense() * second_quantize(u2, false, basis).dense())
                              .norm());
    out.push_back(make_check("rotation representation and Gamma unitary " + tag, unitarity, t));
    out.push_back(make_check("rotation representation and Gamma multiplicative " + tag, homo, t));
}

// --- symmetry helpers ----------------------------------------------------------

struct Assembled {
    AtomModel model;
    ModeGrid grid;
    FockBasis basis;
    CMatrix H;
};

Assembled assemble(AtomModel model, ModeGrid grid, int n_ph, double kappa, cplx theta, double g) {
    FockBasis basis = build_fock_basis(grid, n_ph);
    CMatrix H = assemble_H(model, grid, basis, KappaPair::uniform(kappa), theta, g).matrix;
    return {std::move(model), std::move(grid), std::move(basis), std::move(H)};
}

// Two generators of the octahedral rotation group: C4 about z and C3 about (1,1,1).
std::vector<Mat3> octahedral_generators() {
    Mat3 c4, c3;
    c4 << 0, -1, 0, 1, 0, 0, 0, 0, 1;
    c3 << 0, 0, 1, 1, 0, 0, 0, 1, 0;
    return {c4, c3};
}

}  // namespace

nlohmann::json Check::to_json() const {
    nlohmann::json j = {{"name", name}, {"measured", measured}, {"bound", bound}, {"relation", relation}, {"pass", pass}};
    if (!detail.is_null()) j["detail"] = detail;
    if (!error.empty()) j["error"] = error;
    return j;
}

Check make_check(std::string name, double measured, double bound, std::string relation) {
    Check c;
    c.name = std::move(name);
    c.measured = measured;
    c.bound = bound;
    c.relation = std::move(relation);
    if (c.relation == "<=")
        c.pass = measured <= bound;
    else if (c.relation == "<")
        c.pass = measured < bound;
    else if (c.relation == ">")
        c.pass = measured > bound;
    else if (c.relation == ">=")
        c.pass = measured >= bound;
    else
        throw InvalidArgument("check: unknown relation " + c.relation);
    return c;
}

bool Suite::pass() const {
    return !checks.empty() && std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.pass; });
}

std::vector<std::string> default_suite_names() {
    return {"ccr_fock", "symmetry", "fine_structure", "resolvent", "slope", "theta", "degeneracy"};
}

Suite run_suite(const std::string& name, const SuiteOptions& o) {
    Suite s;
    s.name = name;
    const auto t0 = std::chrono::steady_clock::now();
    guarded(s.checks, name, [&] {
        if (name == "ccr_fock")
            s.checks = suite_ccr_fock(o);
        else if (name == "symmetry")
            s.checks = suite_symmetry(o);
        else if (name == "fine_structure")
            s.checks = suite_fine_structure(o);
        else if (name == "resolvent")
            s.checks = suite_resolvent(o);
        else if (name == "slope")
            s.checks = suite_slope(o);
        else if (name == "theta")
            s.checks = suite_theta(o);
        else if (name == "degeneracy")
            s.checks = suite_degeneracy(o);
        else
            throw InvalidArgument("verify: unknown suite " + name);
    });
    s.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return s;
}

std::vector<Check> suite_ccr_fock(const SuiteOptions& o) {
    std::vector<Check> out;
    for (int nr : {1, 3, 6})
        for (int n_ph : {1, 2})
            guarded(out, "ccr inversion n_radial=" + std::to_string(nr),
                    [&] { ccr_checks(out, o, build_mode_grid(nr, 4.0, AngularGroup::InversionOnly, 1.0), n_ph); });
    for (int nr : {1, 2})
        for (int n_ph : {1, 2})
            guarded(out, "ccr octahedral n_radial=" + std::to_string(nr),
                    [&] { ccr_checks(out, o, build_mode_grid(nr, 4.0, AngularGroup::Octahedral, 1.0), n_ph); });
    return out;
}

std::vector<Check> suite_symmetry(const SuiteOptions& o) {
    std::vector<Check> out;
    const double t = tol(o, 1e-10);
    constexpr double kappa = 0.1;

    guarded(out, "time reversal toy", [&] {
        const Assembled a = assemble(presets::toy_atom(), presets::toy_grid(2), 2, kappa, 0.0, 1.0);
        const FullOperator T = full_operator(time_reversal_symmetry(a.model, a.grid), a.basis);
        out.push_back(make_check("time reversal residual, toy x 8 modes", check_symmetry(a.H, T), t));
    });
    guarded(out, "time reversal hydrogen", [&] {
        const Assembled a = assemble(hydrogen_sp(1.0, 0.5, 0.0, 0.1), presets::toy_grid(2), 2, kappa, 0.0, 1.0);
        const FullOperator T = full_operator(time_reversal_symmetry(a.model, a.grid), a.basis);
        Check c = make_check("time reversal residual, sp hydrogen x 8 modes", check_symmetry(a.H, T), t);
        c.detail = {{"dim", a.H.rows()}, {"T^2 = -1", (compose(T, T).matrix + CMatrix::Identity(a.H.rows(), a.H.rows())).norm()}};
        out.push_back(c);
    });
    guarded(out, "rotation hydrogen", [&] {
        const Assembled a = assemble(hydrogen_sp(1.0, 0.5, 1.0, 0.1),
                                     build_mode_grid(1, 1.0, AngularGroup::Octahedral, 1.0), 2, kappa, 0.0, 1.0);
        double worst = 0.0;
        for (const Mat3& R : octahedral_rotations()) {
            const FullOperator S = full_operator(rotation_symmetry(a.model, a.grid, so3_to_su2(R)), a.basis);
            worst = std::max(worst, check_symmetry(a.H, S));
        }
        Check c = make_check("octahedral rotation residual (24 rotations), sp hydrogen x 12 modes", worst, t);
        c.detail = {{"dim", a.H.rows()}};
        out.push_back(c);
    });
    guarded(out, "kramers", [&] {
        std::mt19937_64 rng(o.seed);
        std::normal_distribution<double> gauss;
        const int n = 10;
        FullOperator T;
        T.antilinear = true;
        T.label = "K i sigma_y";
        CMatrix isy(2, 2);
        isy << 0, 1, -1, 0;
        T.matrix = linalg::kron(CMatrix::Identity(n / 2, n / 2), isy);
        double gap = 0.0, resid = 0.0;
        int odd = 0;
        for (int trial = 0; trial < 50; ++trial) {
            CMatrix A(n, n);
            for (Eigen::Index i = 0; i < n; ++i)
                for (Eigen::Index j = 0; j < n; ++j) A(i, j) = cplx(gauss(rng), gauss(rng));
            A = (A + A.adjoint()).eval() / 2.0;
            const CMatrix H = (A + T.matrix * A.conjugate() * T.matrix.adjoint()) / 2.0;
            const KramersReport r = kramers_check(H, T, 1e-10);
            gap = std::max(gap, r.max_pair_gap);
            resid = std::max(resid, r.symmetry_residual);
            odd += static_cast<int>(std::count_if(r.multiplicities.begin(), r.multiplicities.end(),
                                                  [](int m) { return m % 2 != 0; }));
        }
        out.push_back(make_check("Kramers pair gap over 50 random T-symmetric 10x10", gap, t));
        out.push_back(make_check("Kramers odd multiplicities over 50 random T-symmetric 10x10", odd, 0.0));
        out.push_back(make_check("Kramers input symmetry residual", resid, t));
    });
    return out;
}

std::vector<Check> suite_fine_structure(const SuiteOptions& o) {
    std::vector<Check> out;
    guarded(out, "fine structure", [&] {
        constexpr double Z = 1.0, beta = 1e-3, eps = 0.1;
        const RadialGrid grid = default_radial_grid(Z, 2, 1);
        FineStructureData data;
        const AtomModel m = fine_structure_model(Z, beta, eps, grid, &data);
        const auto& levels = m.levels();
        out.push_back(make_check("fine structure: number of distinct eigenvalues", std::abs(double(levels.size()) - 3.0), 0.0));
        if (levels.size() != 3) return;
        std::vector<int> mult;
        for (const Level& l : levels) mult.push_back(l.multiplicity);
        Check cm = make_check("fine structure: multiplicities (2,2,4)", mult == std::vector<int>{2, 2, 4} ? 0.0 : 1.0, 0.0);
        cm.detail = {{"multiplicities", mult}};
        out.push_back(cm);

        // Shifts from the unperturbed n = 2 energy against the pattern (-2, 0, 1).
        const double C = (levels[2].energy - levels[0].energy) / 3.0;
        const double pattern[3] = {-2.0, 0.0, 1.0};
        double dev = 0.0;
        for (int k = 0; k < 3; ++k) dev = std::max(dev, std::abs((levels[k].energy - data.E2) - C * pattern[k]) / std::abs(C));
        Check cp = make_check("fine structure: shift pattern proportional to (-2, 0, 1)", dev, tol(o, 1e-6));
        cp.detail = {{"constant", C}, {"E2", data.E2}};
        out.push_back(cp);

        const double c_R = spin_orbit_radial(Z, eps, grid);
        const double expected = kSpinOrbitCG * c_R;
        Check cr = make_check("fine structure: constant / beta matches c_G c_R(eps) from the radial oracle",
                              std::abs(C / beta - expected) / expected, tol(o, 1e-6));
        cr.detail = {{"constant_over_beta", C / beta}, {"c_G", kSpinOrbitCG}, {"c_R", c_R}};
        out.push_back(cr);
    });
    return out;
}

std::vector<Check> suite_resolvent(const SuiteOptions&) {
    std::vector<Check> out;
    guarded(out, "resolvent scalar example", [&] {
        const GapData gap = spectral_gap(std::vector<double>{0.0, 1.0}, 0);
        const ResolventPoint p =
            resolvent_bound_check({0.0, 1.0}, gap, ResolventCase::Ground, 0.0, 0.0, {0.0}, {1e-9, 1.0, 0.75});
        out.push_back(make_check("resolvent: two-level measured value at q = 0", std::abs(p.measured - 1.0), 1e-15));
        out.push_back(make_check("resolvent: two-level majorant", std::abs(p.majorant - 5.0), 1e-12));
    });
    guarded(out, "resolvent region guard", [&] {
        const GapData gap = spectral_gap(std::vector<double>{0.0, 1.0}, 0);
        bool refused = false;
        try {
            resolvent_bound_check({0.0, 1.0}, gap, ResolventCase::Ground, cplx(0.0, kPi / 2), 0.0, {0.0},
                                  {kPi / 2 - 1e-9, 1.0, 0.5});
        } catch (const InvalidArgument&) {
            refused = true;
        }
        out.push_back(make_check("resolvent: Im theta >= pi/2 refused", refused ? 1.0 : 0.0, 1.0, ">="));
    });

    guarded(out, "resolvent hydrogen audit", [&] {
        const std::vector<double> levels = presets::hydrogen_level_set(1.0, 4);
        std::vector<double> q_grid{0.0};
        for (double q : logspace(1e-3, 1e3, 19)) q_grid.push_back(q);

        struct Region {
            const char* name;
            ResolventCase c;
            int level;
            ResolventRegion r;
        };
        const GapData g0 = spectral_gap(levels, 0);
        const GapData g1 = spectral_gap(levels, 1);
        const Region regions[2] = {
            {"ground", ResolventCase::Ground, 0, {0.6, 0.5, 0.8 * g0.delta / g0.delta_check}},
            {"excited", ResolventCase::Excited, 1, {0.6, 0.5, 0.5}},
        };
        double best_ratio = std::numeric_limits<double>::infinity();
        for (const Region& reg : regions) {
            const GapData gap = reg.level == 0 ? g0 : g1;
            int points = 0, failures = 0, interior = 0;
            double worst = 0.0, region_best = std::numeric_limits<double>::infinity();
            for (double re : {-0.4, -0.2, 0.0, 0.2, 0.4})
                for (double im : {0.25, 0.5}) {
                    const cplx theta(re, reg.c == ResolventCase::Ground ? (re < 0 ? -im : im) : im);
                    const double zmax = reg.c == ResolventCase::Ground ? reg.r.rho : reg.r.rho * std::sin(theta.imag());
                    for (double s : {0.45, 0.9})
                        for (int k = 0; k < 5; ++k) {
                            const cplx z = s * zmax * std::polar(1.0, 2.0 * kPi * k / 5.0);
                            const ResolventPoint p =
                                resolvent_bound_check(levels, gap, reg.c, theta, z, q_grid, reg.r);
                            ++points;
                            failures += p.pass ? 0 : 1;
                            interior += p.interior_sup ? 1 : 0;
                            worst = std::max(worst, p.measured / p.majorant);
                            region_best = std::min(region_best, p.majorant / p.measured);
                        }
                }
            Check c = make_check(std::string("resolvent: measured <= majorant on 10x10x20 grid, ") + reg.name,
                                 worst, 1.0);
            c.detail = {{"points", points},
                        {"failures", failures},
                        {"interior_q_suprema", interior},
                        {"tightest_majorant_over_measured", region_best},
                        {"rho", reg.r.rho},
                        {"theta0", reg.r.theta0},
                        {"theta1", reg.r.theta1},
                        {"delta", gap.delta},
                        {"delta_check", gap.delta_check}};
            out.push_back(c);
            best_ratio = std::min(best_ratio, region_best);
        }
        out.push_back(make_check("resolvent: some point within a factor 10 of the majorant", best_ratio, 10.0));
    });
    return out;
}

std::vector<Check> suite_slope(const SuiteOptions& o) {
    std::vector<Check> out;
    const AtomModel model = presets::toy_atom();
    const ModeGrid grid = presets::toy_grid(2);
    const FockBasis basis = build_fock_basis(grid, 2);
    const Builder build = presets::dense_builder(model, grid, basis);
    const KappaPair kappa = KappaPair::uniform(presets::kToyKappa);

    for (int level : {0, 1}) {
        const cplx theta = level == 0 ? cplx(0.0) : cplx(0.0, 0.4);
        const std::string tag = level == 0 ? "ground, theta = 0" : "excited, theta = 0.4i";
        guarded(out, "slope " + tag, [&] {
            const Seed seed = atomic_seed(model, basis, level);
            const cplx c = perturbation2_oracle(model, coupling_G(model, grid, kappa, theta), level);
            const std::vector<double> gs = logspace(1e-3, 1e-2, 5);
            std::vector<double> shift;
            double rel = 0.0;
            nlohmann::json rows = nlohmann::json::array();
            for (double g : gs) {
                const cplx E = track_endpoint(build, {kappa, theta, 0.0}, {kappa, theta, g}, 2, seed);
                const cplx d = E - seed.energy;
                shift.push_back(std::abs(d));
                rel = std::max(rel, std::abs(d / (c * g * g) - 1.0));
                rows.push_back({g, d.real(), d.imag()});
            }
            const double slope = loglog_slope(gs, shift);
            Check cs = make_check("slope: log-log slope of E(g) - E(0), " + tag, std::abs(slope - 2.0), 0.05);
            cs.detail = {{"slope", slope}, {"coefficient", {c.real(), c.imag()}}, {"shifts", rows}};
            out.push_back(cs);
            out.push_back(make_check("slope: E(g) - E(0) vs c g^2 relative error, " + tag, rel, 0.05));
        });
    }

    guarded(out, "analyticity in kappa", [&] {
        const Seed seed = atomic_seed(model, basis, 1);
        const cplx theta(0.0, 0.4);
        auto E = [&](cplx k) {
            return track_endpoint(build, {KappaPair{}, theta, 1.0}, {KappaPair::uniform(k), theta, 1.0}, 4, seed);
        };
        const CauchyRiemann cr = cauchy_riemann_probe(E, presets::kToyKappa, 1e-3);
        Check c = make_check("analyticity: Cauchy-Riemann residual of tracked E(kappa) beyond the stencil floor",
                             cr.extrapolated, 1e-5);
        c.detail = {{"h", 1e-3},
                    {"residual", cr.residual},
                    {"residual_half_step", cr.residual_half},
                    {"richardson_floor", cr.floor_estimate}};
        out.push_back(c);
    });
    guarded(out, "conjugation", [&] {
        const Seed seed = atomic_seed(model, basis, 1);
        const cplx k(0.1, 0.02);
        auto E = [&](cplx kk) {
            return track_endpoint(build, {KappaPair{}, 0.0, 1.0}, {KappaPair::uniform(kk), 0.0, 1.0}, 4, seed);
        };
        out.push_back(make_check("conjugation: |E(conj kappa) - conj E(kappa)|", std::abs(E(std::conj(k)) - std::conj(E(k))),
                                 tol(o, 1e-10)));
    });
    return out;
}

std::vector<Check> suite_theta(const SuiteOptions& o) {
    std::vector<Check> out;
    const AtomModel model = presets::toy_atom();
    const KappaPair kappa = KappaPair::uniform(presets::kToyKappa);
    const std::vector<cplx> thetas{{0.0, 0.3}, {0.0, 0.4}, {0.0, 0.5}};
    constexpr int kPhotons = 2;

    guarded(out, "theta trend", [&] {
        std::vector<ModeGrid> grids;
        std::vector<FockBasis> bases;
        const std::vector<int> nr{2, 4, 8};
        for (int n : nr) grids.push_back(presets::toy_grid(n));
        for (const ModeGrid& g : grids) bases.push_back(build_fock_basis(g, kPhotons));
        auto make = [&](int n) {
            const std::size_t i = std::find(nr.begin(), nr.end(), n) - nr.begin();
            return ThetaStudy{presets::dense_builder(model, grids[i], bases[i]), atomic_seed(model, bases[i], 1)};
        };
        const ThetaTrend trend = theta_independence_trend(make, nr, kappa, 1.0, thetas, 4);
        double worst_step = -std::numeric_limits<double>::infinity();
        for (std::size_t i = 1; i < trend.deviations.size(); ++i)
            worst_step = std::max(worst_step, trend.deviations[i] - trend.deviations[i - 1]);
        Check c = make_check("theta independence: deviation decreases under radial refinement", worst_step, 0.0, "<");
        c.detail = {{"n_radial", trend.n_radial}, {"deviation", trend.deviations}, {"max_imag", trend.max_imag},
                    {"N_ph", kPhotons}};
        out.push_back(c);
        const double im = *std::max_element(trend.max_imag.begin(), trend.max_imag.end());
        out.push_back(make_check("resonance half-plane: Im E of excited seed", im, 1e-10));
    });

    guarded(out, "theta g = 0", [&] {
        const ModeGrid grid = presets::toy_grid(2);
        const FockBasis basis = build_fock_basis(grid, kPhotons);
        const ThetaIndependence ti = theta_independence(presets::dense_builder(model, grid, basis), kappa, 0.0, thetas,
                                                        atomic_seed(model, basis, 1), 2);
        out.push_back(make_check("theta independence at g = 0", ti.max_deviation, tol(o, 0.0)));
    });

    guarded(out, "ground reality", [&] {
        const ModeGrid grid = presets::toy_grid(2);
        const FockBasis basis = build_fock_basis(grid, 2);
        const Builder b = presets::dense_builder(model, grid, basis);
        const ResonanceTrajectory t = track_resonance(
            b, linear_path({KappaPair{}, 0.0, 1.0}, {kappa, 0.0, 1.0}, 4), atomic_seed(model, basis, 0));
        if (t.aborted) throw NumericalError(t.abort_reason);
        double im = 0.0;
        for (const TrajectoryPoint& p : t.points) im = std::max(im, std::abs(p.E.imag()));
        out.push_back(make_check("ground state: |Im E| along real-kappa path at theta = 0", im, tol(o, 1e-12)));
        Eigen::SelfAdjointEigenSolver<CMatrix> es(b({kappa, 0.0, 1.0}), Eigen::EigenvaluesOnly);
        const double lo = es.eigenvalues()(0);
        out.push_back(make_check("ground state: tracked E equals the bottom of the Hermitian spectrum",
                                 std::abs(t.points.back().E - lo), tol(o, 1e-10)));
    });
    return out;
}

std::vector<Check> suite_degeneracy(const SuiteOptions& o) {
    std::vector<Check> out;
    const ModeGrid grid = build_mode_grid(1, 1.0, AngularGroup::Octahedral, 1.0);
    const FockBasis basis = build_fock_basis(grid, 1);
    const AtomModel model = hydrogen_sp(1.0, 0.5, 1.0, 0.1);
    const PathPoint start{KappaPair{}, 0.0, 1.0}, end{KappaPair::uniform(0.5), 0.0, 1.0};

    guarded(out, "irreducible seed", [&] {
        const Seed seed = atomic_seed(model, basis, 0);
        std::vector<FullOperator> gens;
        for (const Mat3& R : octahedral_generators())
            gens.push_back(full_operator(rotation_symmetry(model, grid, so3_to_su2(R)), basis));
        const int dim = irreducibility_check(seed.subspace, gens);
        Check c = make_check("degeneracy: commutant dimension of the seed under rotations", dim, 1.0);
        c.detail = {{"d", seed.d}};
        out.push_back(c);
    });

    // Both runs start from the unperturbed 1s doublet; under the Zeeman term it
    // must come apart.
    const Seed seed = atomic_seed(model, basis, 0);
    auto run = [&](const AtomModel& m, const std::string& tag, bool protected_case) {
        guarded(out, "degeneracy " + tag, [&] {
            const Builder b = presets::dense_builder(m, grid, basis);
            const ResonanceTrajectory t = track_resonance(b, linear_path(start, end, 9), seed);
            if (t.aborted) throw NumericalError(t.abort_reason);
            double rel = 0.0, spread = 0.0;
            for (const TrajectoryPoint& p : t.points) {
                rel = std::max(rel, p.spread / p.matrix_norm);
                spread = std::max(spread, p.spread);
            }
            if (protected_case) {
                Check c = make_check("degeneracy: protected d = 2 cluster spread / ||H|| along 10-point path", rel,
                                     tol(o, 1e-9));
                c.detail = {{"points", t.points.size()}, {"events", t.events}};
                out.push_back(c);
            } else {
                Check c = make_check("degeneracy: negative control spread with 1e-3 Zeeman term", spread, 1e-5, ">");
                c.detail = {{"split_events", t.events.size()}};
                out.push_back(c);
                out.push_back(make_check("degeneracy: negative control split event recorded",
                                         static_cast<double>(t.events.size()), 0.0, ">"));
            }
        });
    };
    run(model, "protected", true);
    run(model.perturbed(1e-3 * model.spin()[2], "zeeman"), "control", false);
    return out;
}

}  // namespace dilres
