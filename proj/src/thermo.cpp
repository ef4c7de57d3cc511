#include "xxz/bethe.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <cmath>
#include <stdexcept>

#include "xxz/text_format.hpp"

namespace xxz {

namespace {

constexpr double kPi = 3.14159265358979323846;

// Root density of the half-filled ground state.  In these rapidity units the
// same function holds throughout Delta <= 1 (the Fourier transform of the
// density equation gives 1 / (2 cosh w) independently of gamma).
double root_density(double lambda) {
    return 0.25 / std::cosh(0.5 * kPi * lambda);
}

double thermo_energy_smooth(const Anisotropy& a) {
    auto integrand = [&a](double l) { return magnon_energy(l, a) * root_density(l); };
    // the integrand decays like exp(-pi l / 2); beyond l = 40 it is below
    // the double-precision floor
    double error = 0.0;
    const double half = boost::math::quadrature::gauss_kronrod<double, 31>::integrate(
        integrand, 0.0, 40.0, 12, 1e-13, &error);
    if (!(error < 1e-9))
        throw std::runtime_error("thermo_energy: quadrature error estimate "
                                 + detail::format_double(error, 6));
    return a.delta - 2.0 * half;
}

double thermo_energy_massive(const Anisotropy& a) {
    // On the periodic window the density equation a_1 = rho + a_2 * rho is
    // diagonal mode by mode: with a_n's coefficients (nu/pi) e^{-2 n k nu},
    // mode k of rho is (nu/pi) e^{-2 k nu} / (1 + e^{-4 k nu}) and mode k of
    // the magnon energy is 4 sinh(2 nu) e^{-2 k nu}.  The energy integral
    // collapses to 4 sinh(2 nu) sum_k e^{-4 |k| nu} / (1 + e^{-4 |k| nu}).
    const double nu = a.nu;
    const double prefactor = 4.0 * std::sinh(2.0 * nu);
    // terms shrink at least geometrically with ratio e^{-4 nu}, so the tail
    // beyond mode k is bounded by term_k * r / (1 - r); stop once that bound
    // on the neglected energy is negligible even after later differentiation
    const double ratio = std::exp(-4.0 * nu);
    const double tail_factor = prefactor * ratio / (1.0 - ratio);
    double sum = 0.5;  // k = 0 mode
    const long long cap = 10'000'000;
    for (long long k = 1; k <= cap; ++k) {
        const double t = std::exp(-4.0 * k * nu);
        const double term = 2.0 * t / (1.0 + t);
        sum += term;
        if (k >= 64 && tail_factor * term < 1e-12)
            return a.delta - prefactor * sum;
    }
    throw std::runtime_error("thermo_energy: mode sum failed to settle below 1e-12");
}

} // namespace

double thermo_energy(double delta) {
    const Anisotropy a = classify_anisotropy(delta);
    if (a.regime == Regime::Massive)
        return thermo_energy_massive(a);
    return thermo_energy_smooth(a);
}

} // namespace xxz
