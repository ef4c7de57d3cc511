#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <cmath>
#include <stdexcept>

#include "xxz/bethe.hpp"

using namespace xxz;

namespace {

constexpr double kPi = 3.14159265358979323846;

// Independent massive-side route: reconstruct the root density in rapidity
// space from its Fourier modes and integrate eps * rho over the periodic
// window by adaptive quadrature.
double massive_energy_by_quadrature(double delta) {
    const Anisotropy a = classify_anisotropy(delta);
    REQUIRE(a.regime == Regime::Massive);
    const double nu = a.nu;
    const double half = massive_box_halfwidth(a);
    auto rho = [nu](double l) {
        double s = 0.5;  // zeroth mode carries e^0 / (1 + e^0)
        for (int k = 1; k <= 400; ++k) {
            const double t = std::exp(-2.0 * k * nu);
            s += 2.0 * t / (1.0 + t * t) * std::cos(2.0 * k * nu * l);
        }
        return (nu / kPi) * s;
    };
    auto integrand = [&](double l) { return magnon_energy(l, a) * rho(l); };
    double error = 0.0;
    const double integral = boost::math::quadrature::gauss_kronrod<double, 31>::integrate(
        integrand, -half, half, 12, 1e-12, &error);
    REQUIRE(error < 1e-8);
    return delta - integral;
}

} // namespace

TEST_CASE("free-fermion energy density is -4/pi") {
    CHECK(thermo_energy(0.0) == doctest::Approx(-4.0 / kPi).epsilon(1e-10));
}

TEST_CASE("isotropic energy density is 1 - 4 ln 2") {
    CHECK(thermo_energy(1.0) == doctest::Approx(1.0 - 4.0 * std::log(2.0)).epsilon(1e-10));
}

TEST_CASE("energy density is continuous through the transition") {
    const double at_point = thermo_energy(1.0);
    CHECK(std::abs(thermo_energy(1.0 + 2e-9) - at_point) < 1e-8);
    CHECK(std::abs(thermo_energy(1.0 - 2e-9) - at_point) < 1e-8);
}

TEST_CASE("finite chains converge to the infinite-volume density") {
    for (double delta : {0.5, 0.8, 2.0}) {
        const double e_infinite = thermo_energy(delta);
        const double e_finite = solve_ground_state(1280, delta).energy_per_site;
        CHECK(std::abs(e_finite - e_infinite) < 1e-4);
    }
}

TEST_CASE("isotropic finite-size extrapolation lands on the integral value") {
    // corrections fall off as 1/N^2, so one Richardson step of the N and 2N
    // densities cancels the leading term
    const double e640 = solve_ground_state(640, 1.0).energy_per_site;
    const double e1280 = solve_ground_state(1280, 1.0).energy_per_site;
    const double extrapolated = e1280 + (e1280 - e640) / 3.0;
    CHECK(std::abs(extrapolated - thermo_energy(1.0)) < 2e-6);
    CHECK(std::abs(e1280 - thermo_energy(1.0)) < 5e-6);
}

TEST_CASE("massive mode sum agrees with direct quadrature of eps * rho") {
    for (double delta : {1.5, 3.0, 8.0}) {
        CHECK(thermo_energy(delta)
              == doctest::Approx(massive_energy_by_quadrature(delta)).epsilon(1e-9));
    }
}

TEST_CASE("energy density decreases monotonically with delta") {
    // dE/d(delta) = G^zz, negative throughout the antiferromagnetic phase
    double prev = thermo_energy(0.0);
    for (double delta : {0.5, 1.0, 2.0, 4.0, 8.0}) {
        const double e = thermo_energy(delta);
        CHECK(e < prev);
        prev = e;
    }
}

TEST_CASE("thermodynamic energy rejects negative anisotropy") {
    CHECK_THROWS_AS(thermo_energy(-0.2), std::invalid_argument);
}
