#include <doctest.h>

#include <cmath>
#include <random>

#include "dilres/modes.hpp"

using namespace dilres;

TEST_SUITE("modes") {

TEST_CASE("Gauss-Legendre integrates polynomials of degree 2n-1 exactly") {
    for (int n : {1, 2, 4, 8}) {
        std::vector<double> x, w;
        gauss_legendre(n, 0.0, 3.0, x, w);
        REQUIRE(x.size() == static_cast<std::size_t>(n));
        for (int p = 0; p <= 2 * n - 1; ++p) {
            double sum = 0.0;
            for (int i = 0; i < n; ++i) sum += w[i] * std::pow(x[i], p);
            CHECK(sum == doctest::Approx(std::pow(3.0, p + 1) / (p + 1)).epsilon(1e-13));
        }
        for (int i = 0; i + 1 < n; ++i) CHECK(x[i] < x[i + 1]);
    }
}

TEST_CASE("grid layout, weights and volume") {
    const ModeGrid g = build_mode_grid(3, 2.0, AngularGroup::Octahedral, 1.0);
    CHECK(g.size() == 6 * 3 * 2);
    double volume = 0.0;
    for (std::size_t d = 0; d < g.directions().size(); ++d)
        for (std::size_t r = 0; r < g.n_radial(); ++r)
            for (int l = 1; l <= 2; ++l) {
                const ModeNode& n = g[g.index(d, r, l)];
                CHECK(n.direction == static_cast<int>(d));
                CHECK(n.radial == static_cast<int>(r));
                CHECK(n.lambda == l);
                CHECK(n.omega == doctest::Approx(n.k.norm()));
                CHECK(n.weight > 0.0);
                if (l == 1) volume += n.weight;
            }
    // d^3k over the ball of radius r_max.
    CHECK(volume == doctest::Approx(4.0 * M_PI * 8.0 / 3.0).epsilon(1e-13));
    CHECK(g.id().find("octahedral") != std::string::npos);
}

TEST_CASE("polarizations are orthonormal and transverse for arbitrary directions") {
    std::mt19937_64 rng(7);
    std::normal_distribution<double> gauss;
    std::vector<Vec3> ks{Vec3::UnitZ(), -Vec3::UnitZ(), Vec3(0, 0, 3.5), Vec3(1e-9, 0, 1)};
    for (int i = 0; i < 200; ++i) ks.emplace_back(gauss(rng), gauss(rng), gauss(rng));
    for (const Vec3& k : ks) {
        const Vec3 e1 = polarization(k, 1), e2 = polarization(k, 2);
        CHECK(std::abs(e1.norm() - 1.0) < 1e-14);
        CHECK(std::abs(e2.norm() - 1.0) < 1e-14);
        CHECK(std::abs(e1.dot(e2)) < 1e-14);
        CHECK(std::abs(e1.dot(k)) < 1e-14 * k.norm());
        CHECK(std::abs(e2.dot(k)) < 1e-14 * k.norm());
    }
    CHECK_THROWS_AS(polarization(Vec3::Zero(), 1), InvalidArgument);
    CHECK_THROWS_AS(polarization(Vec3::UnitX(), 3), InvalidArgument);
}

TEST_CASE("octahedral rotations form a group that preserves the grid") {
    const auto rots = octahedral_rotations();
    REQUIRE(rots.size() == 24);
    auto find = [&](const Mat3& m) {
        for (std::size_t i = 0; i < rots.size(); ++i)
            if ((rots[i] - m).norm() < 1e-14) return static_cast<int>(i);
        return -1;
    };
    CHECK(find(Mat3::Identity()) >= 0);
    for (const Mat3& a : rots) {
        CHECK(a.determinant() == doctest::Approx(1.0));
        CHECK(find(a.transpose()) >= 0);
        for (const Mat3& b : rots) CHECK(find(a * b) >= 0);
    }
    const ModeGrid g = build_mode_grid(2, 1.0, AngularGroup::Octahedral, 1.0);
    for (const Mat3& r : grid_rotations(g))
        for (const Vec3& d : g.directions()) CHECK(g.find_direction(r * d) >= 0);
    const ModeGrid inv = build_mode_grid(2, 1.0, AngularGroup::InversionOnly, 1.0);
    CHECK(grid_rotations(inv).size() == 1);
    for (const Vec3& d : inv.directions()) CHECK(inv.find_direction(-d) >= 0);
}

TEST_CASE("input validation") {
    CHECK_THROWS_AS(build_mode_grid(0, 1.0, AngularGroup::InversionOnly, 1.0), InvalidArgument);
    CHECK_THROWS_AS(build_mode_grid(2, -1.0, AngularGroup::InversionOnly, 1.0), InvalidArgument);
    CHECK_THROWS_AS(build_mode_grid(2, 1.0, AngularGroup::InversionOnly, 0.0), InvalidArgument);
    CHECK(parse_angular_group("octahedral") == AngularGroup::Octahedral);
    CHECK(parse_angular_group("inversion-only") == AngularGroup::InversionOnly);
    CHECK_THROWS_WITH_AS(parse_angular_group("icosahedral"), "grid: unknown angular group 'icosahedral'", InvalidArgument);
}

TEST_CASE("dilated cutoff continues the Gaussian") {
    const CutoffProfile rho{1.5};
    for (double k : {0.1, 1.0, 2.7}) {
        CHECK(std::abs(rho.dilated(0.0, k) - rho(k)) < 1e-15);
        const cplx theta(0.2, 0.3);
        const cplx expect = std::exp(-std::pow(std::exp(-theta) * k / 1.5, 2));
        CHECK(std::abs(rho.dilated(theta, k) - expect) < 1e-15);
    }
}

TEST_CASE("K_theta obeys the dilation identity K_{theta+t} = e^{2t} u(t) K_theta") {
    // (u(t) f)(k) = e^{-3t/2} f(e^{-t} k) on radial functions.
    const CutoffProfile rho{1.0};
    for (double t : {-0.3, 0.1, 0.5})
        for (double r : {0.2, 1.0, 3.0}) {
            const cplx theta(0.05, 0.2);
            const cplx lhs = k_theta_radial(theta + t, r, rho);
            const cplx rhs = std::exp(2.0 * t) * std::exp(-1.5 * t) * k_theta_radial(theta, std::exp(-t) * r, rho);
            CHECK(std::abs(lhs - rhs) < 1e-14);
        }
    const ModeGrid g = build_mode_grid(2, 1.0, AngularGroup::InversionOnly, 1.0);
    CHECK_THROWS_AS(k_theta(cplx(0.0, M_PI / 4), g), InvalidArgument);
    CHECK(k_theta(cplx(0.0, 0.3), g).size() == g.size());
}

TEST_CASE("mu norm") {
    const ModeGrid g = build_mode_grid(4, 2.0, AngularGroup::InversionOnly, 1.0);
    std::vector<cplx> v(g.size());
    double expect = 0.0;
    for (std::size_t i = 0; i < g.size(); ++i) {
        v[i] = cplx(1.0, 0.5) * g[i].omega;
        expect += g[i].weight * std::norm(v[i]) / std::pow(g[i].omega, 3.0);
    }
    CHECK(mu_norm(v, g, 0.5) == doctest::Approx(std::sqrt(expect)));
    CHECK_THROWS_AS(mu_norm(v, g, 0.0), InvalidArgument);
    v.pop_back();
    CHECK_THROWS_AS(mu_norm(v, g, 0.5), InvalidArgument);
}

TEST_CASE("grid JSON carries every node") {
    const ModeGrid g = build_mode_grid(2, 1.0, AngularGroup::Octahedral, 2.0);
    const nlohmann::json j = to_json(g);
    CHECK(j["nodes"].size() == g.size());
    CHECK(j["Lambda"].get<double>() == 2.0);
    CHECK(j["group"].get<std::string>() == "octahedral");
    CHECK(j.contains("polarization_gauge"));
}

}
