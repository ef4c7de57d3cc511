#include "xxz/observables.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace xxz {

namespace {

constexpr double kPi = 3.14159265358979323846;

} // namespace

double concurrence_c0() {
    return 2.0 * std::log(2.0) - 1.0;
}

double concurrence_c1() {
    return 2.0 * std::log(2.0) - 0.5 - 2.0 / kPi - 2.0 / (kPi * kPi);
}

double energy_per_site(int n_sites, double delta, const SolverOptions& options) {
    if (n_sites == kInfiniteChain) return thermo_energy(delta);
    return solve_ground_state(n_sites, delta, options).energy_per_site;
}

double hellmann_feynman_gzz(const std::function<double(double)>& energy_fn,
                            double delta, double step) {
    if (!(step > 0.0))
        throw std::invalid_argument("hellmann_feynman_gzz: step must be positive");
    if (!(delta >= 0.0))
        throw std::invalid_argument("hellmann_feynman_gzz: delta must be non-negative");

    // pick one stencil family for both Richardson levels so their O(h^2)
    // error constants match and cancel
    const bool central = (delta - step >= 0.0);
    auto derivative = [&](double h) {
        if (central)
            return (energy_fn(delta + h) - energy_fn(delta - h)) / (2.0 * h);
        return (-3.0 * energy_fn(delta) + 4.0 * energy_fn(delta + h)
                - energy_fn(delta + 2.0 * h)) / (2.0 * h);
    };
    const double coarse = derivative(step);
    const double fine = derivative(0.5 * step);
    return (4.0 * fine - coarse) / 3.0;
}

double gzz(int n_sites, double delta, double step) {
    return hellmann_feynman_gzz(
        [n_sites](double d) { return energy_per_site(n_sites, d); }, delta, step);
}

double concurrence_xxz(double energy_per_site, double gzz, double delta) {
    if (!(gzz >= -1.0 && gzz <= 1.0))
        throw std::invalid_argument("concurrence_xxz: gzz must lie in [-1, 1]");
    const double value = std::abs(energy_per_site - delta * gzz) - gzz - 1.0;
    return 0.5 * std::max(0.0, value);
}

CorrelationLengthSeries correlation_length_series(double delta, double tol) {
    if (!(delta > 1.0))
        throw std::invalid_argument("correlation_length: defined only for delta > 1, "
                                    "the length diverges at the transition");
    if (!(tol > 0.0))
        throw std::invalid_argument("correlation_length: tolerance must be positive");

    // nu taken directly from delta (no isotropic snapping) so the series
    // degrades gracefully as delta -> 1+
    const double nu = 0.5 * std::log(delta + std::sqrt((delta - 1.0) * (delta + 1.0)));

    const long long cap = 10'000'000;
    double series = 0.0;    // sum of (-1)^n tanh(2 n nu) / n up to n
    double harmonic = 0.0;  // sum of (-1)^n / n up to the same n
    double bound = std::numeric_limits<double>::infinity();
    long long n = 0;
    const double tail_factor = 2.0 / (1.0 - std::exp(-4.0 * nu));
    while (n < cap) {
        // one odd plus one even term per pass keeps the partial sums bracketed
        ++n;
        series -= std::tanh(2.0 * n * nu) / n;
        harmonic -= 1.0 / n;
        ++n;
        series += std::tanh(2.0 * n * nu) / n;
        harmonic += 1.0 / n;

        bound = tail_factor * std::exp(-4.0 * (n + 1) * nu) / (n + 1);
        if (bound < tol) break;
    }
    if (!(bound < tol))
        throw std::runtime_error("correlation_length: series cap reached, achieved tolerance "
                                 + std::to_string(bound));

    CorrelationLengthSeries out;
    // tail of the exact series beyond n equals the alternating harmonic tail
    // -ln 2 - harmonic, up to the bounded tanh correction
    out.inv_xi = nu + series + (-std::log(2.0) - harmonic);
    out.achieved_tol = bound;
    out.terms = n;
    return out;
}

double correlation_length(double delta, double tol) {
    return 1.0 / correlation_length_series(delta, tol).inv_xi;
}

QMap q_map(const Anisotropy& a) {
    QMap m;
    switch (a.regime) {
        case Regime::Isotropic:
            m.q = 1.0;
            m.phi = 0.0;
            break;
        case Regime::Gapless:
            m.q = 1.0;  // modulus of e^{i phi}
            m.phi = a.phi;
            break;
        case Regime::Massive:
            m.q = a.q;
            m.phi = std::nullopt;
            break;
    }
    return m;
}

double concurrence_q_form(double q) {
    if (!(q > 0.0))
        throw std::invalid_argument("concurrence_q_form: q must be positive");
    const double r = std::sqrt(q) - 1.0 / std::sqrt(q);
    const double r2 = r * r;
    return concurrence_c0() - 0.25 * concurrence_c1() * r2 * r2;
}

double concurrence_phi_form(double phi) {
    if (!(phi >= 0.0 && phi <= 0.5 * kPi))
        throw std::invalid_argument("concurrence_phi_form: phi must lie in [0, pi/2]");
    const double s = std::sin(0.5 * phi);
    const double s2 = s * s;
    return concurrence_c0() - 4.0 * concurrence_c1() * s2 * s2;
}

ScalingForms concurrence_scaling_forms(double delta) {
    const Anisotropy a = classify_anisotropy(delta);
    ScalingForms f;
    const double d = delta - 1.0;
    f.quadratic = concurrence_c0() - concurrence_c1() * d * d;
    if (a.regime == Regime::Massive) {
        f.q_form = concurrence_q_form(a.q);
        f.phi_form = std::nullopt;
    } else {
        // unit-modulus q = e^{i phi} gives (q^{1/2} - q^{-1/2})^4 = 16 sin^4(phi/2)
        f.phi_form = concurrence_phi_form(a.phi);
        f.q_form = *f.phi_form;
    }
    return f;
}

} // namespace xxz
