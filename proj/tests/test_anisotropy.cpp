#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "xxz/anisotropy.hpp"

using xxz::Anisotropy;
using xxz::Regime;
using xxz::classify_anisotropy;

namespace {
constexpr double kPi = 3.14159265358979323846;
}

TEST_CASE("isotropic point carries trivial parameters") {
    const Anisotropy a = classify_anisotropy(1.0);
    CHECK(a.regime == Regime::Isotropic);
    CHECK(a.delta == 1.0);
    CHECK(a.q == 1.0);
    CHECK(a.gamma == 0.0);
    CHECK(a.nu == 0.0);
    CHECK(a.phi == 0.0);
}

TEST_CASE("free-fermion point sits at gamma = pi/4, phi = pi/2") {
    const Anisotropy a = classify_anisotropy(0.0);
    CHECK(a.regime == Regime::Gapless);
    CHECK(a.gamma == doctest::Approx(0.25 * kPi).epsilon(1e-14));
    CHECK(a.phi == doctest::Approx(0.5 * kPi).epsilon(1e-14));
    CHECK(a.q == 1.0);
    CHECK(a.nu == 0.0);
}

TEST_CASE("delta = 1.25 maps to q = 2") {
    const Anisotropy a = classify_anisotropy(1.25);
    CHECK(a.regime == Regime::Massive);
    CHECK(a.q == doctest::Approx(2.0).epsilon(1e-14));
    CHECK(a.nu == doctest::Approx(0.5 * std::log(2.0)).epsilon(1e-14));
    CHECK(a.gamma == 0.0);
}

TEST_CASE("parametrisations invert back to delta") {
    for (double delta : {0.0, 0.1, 0.35, 0.62, 0.9, 0.999}) {
        const Anisotropy a = classify_anisotropy(delta);
        REQUIRE(a.regime == Regime::Gapless);
        CHECK(std::cos(2.0 * a.gamma) == doctest::Approx(delta).epsilon(1e-12));
        CHECK(std::cos(a.phi) == doctest::Approx(delta).epsilon(1e-12));
        CHECK(a.gamma > 0.0);
        CHECK(a.gamma <= 0.25 * kPi);
    }
    for (double delta : {1.0 + 3e-9, 1.001, 1.25, 2.0, 10.0, 2000.0}) {
        const Anisotropy a = classify_anisotropy(delta);
        REQUIRE(a.regime == Regime::Massive);
        CHECK(std::cosh(2.0 * a.nu) == doctest::Approx(delta).epsilon(1e-12));
        CHECK(0.5 * (a.q + 1.0 / a.q) == doctest::Approx(delta).epsilon(1e-12));
        CHECK(a.q >= 1.0);
        CHECK(a.nu > 0.0);
    }
}

TEST_CASE("isotropic window straddles delta = 1 symmetrically") {
    CHECK(classify_anisotropy(1.0 - 1e-10).regime == Regime::Isotropic);
    CHECK(classify_anisotropy(1.0 + 1e-10).regime == Regime::Isotropic);
    CHECK(classify_anisotropy(1.0 - 2e-9).regime == Regime::Gapless);
    CHECK(classify_anisotropy(1.0 + 2e-9).regime == Regime::Massive);
}

TEST_CASE("q stays accurate just above the transition") {
    // the naive sqrt(delta^2 - 1) loses half the digits here
    const Anisotropy a = classify_anisotropy(1.0 + 1e-8);
    const double expected_nu = 0.5 * std::acosh(1.0 + 1e-8);
    CHECK(a.nu == doctest::Approx(expected_nu).epsilon(1e-6));
    CHECK(a.q > 1.0);
}

TEST_CASE("negative and non-finite anisotropies are rejected") {
    CHECK_THROWS_AS(classify_anisotropy(-0.1), std::invalid_argument);
    CHECK_THROWS_AS(classify_anisotropy(-5.0), std::invalid_argument);
    CHECK_THROWS_AS(classify_anisotropy(std::numeric_limits<double>::quiet_NaN()),
                    std::invalid_argument);
    CHECK_THROWS_AS(classify_anisotropy(std::numeric_limits<double>::infinity()),
                    std::invalid_argument);
}

TEST_CASE("regime names are stable identifiers") {
    CHECK(std::string(regime_name(Regime::Gapless)) == "gapless");
    CHECK(std::string(regime_name(Regime::Isotropic)) == "isotropic");
    CHECK(std::string(regime_name(Regime::Massive)) == "massive");
}
