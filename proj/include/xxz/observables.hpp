#pragma once

#include <functional>
#include <optional>

#include "xxz/anisotropy.hpp"
#include "xxz/bethe.hpp"

namespace xxz {

// n_sites value standing for the thermodynamic limit
inline constexpr int kInfiniteChain = 0;

// Exact coefficients of the concurrence scaling law across the transition:
// C0 = 2 ln 2 - 1 at the isotropic point, curvature C1 = 2 ln 2 - 1/2 - 2/pi - 2/pi^2.
double concurrence_c0();
double concurrence_c1();

// E/N at anisotropy delta: Bethe solve for finite even N, integral-equation
// value for n_sites == kInfiniteChain.
double energy_per_site(int n_sites, double delta, const SolverOptions& options = {});

// Nearest-neighbour correlator G^zz = d(E/N)/d(Delta) by Richardson-refined
// finite differences of a caller-supplied energy function: central stencils
// at step and step/2 away from the boundary, second-order one-sided stencils
// when delta < step (the model is only defined for delta >= 0).
double hellmann_feynman_gzz(const std::function<double(double)>& energy_fn,
                            double delta, double step = 1e-4);

double gzz(int n_sites, double delta, double step = 1e-4);

// Ground-state bond concurrence from the energy route,
//   C = max(0, |E/N - Delta G| - G - 1) / 2,
// with E/N and G signed.  Requires G in [-1, 1].
double concurrence_xxz(double energy_per_site, double gzz, double delta);

struct CorrelationLengthSeries {
    double inv_xi = 0.0;
    double achieved_tol = 0.0;  // analytic bound on the truncation error
    long long terms = 0;
};

// 1/xi = nu + sum_{n >= 1} (-1)^n tanh(2 n nu) / n for Delta = cosh(2 nu) > 1.
// Terms are accumulated in consecutive pairs up to n; the remaining tail is
// replaced by the alternating harmonic tail (known in closed form) plus a
// correction bounded by 2 e^{-4(n+1)nu} / ((n+1)(1 - e^{-4 nu})), and the sum
// stops once that bound drops below tol.
CorrelationLengthSeries correlation_length_series(double delta, double tol = 1e-12);

// xi itself; rejects delta <= 1 where the length diverges.
double correlation_length(double delta, double tol = 1e-12);

// Deformation parameter attached to the anisotropy: real q >= 1 for
// Delta >= 1, unit modulus with phase phi = arccos(Delta) for Delta < 1.
struct QMap {
    double q = 1.0;
    std::optional<double> phi;
};

QMap q_map(const Anisotropy& a);

// The three equivalent closed forms of the concurrence scaling law:
//   quadratic  C0 - C1 (Delta - 1)^2
//   q form     C0 - (C1/4) (q^{1/2} - q^{-1/2})^4, invariant under q -> 1/q
//   phi form   C0 - 4 C1 sin^4(phi/2), reported only for Delta <= 1
struct ScalingForms {
    double quadratic = 0.0;
    double q_form = 0.0;
    std::optional<double> phi_form;
};

ScalingForms concurrence_scaling_forms(double delta);
double concurrence_q_form(double q);
double concurrence_phi_form(double phi);

} // namespace xxz
