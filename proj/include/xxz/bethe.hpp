#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "xxz/anisotropy.hpp"

namespace xxz {

// Quantum numbers of the ground state in the half-filled magnon sector:
// I_j = j - (M+1)/2 for j = 1..M with M = N/2.  The set is consecutive and
// symmetric about zero, half-odd-integral for even M and integral for odd M.
struct QuantumNumberSet {
    int n_sites = 0;
    int m_down = 0;
    std::vector<double> numbers;
};

// Requires even n_sites >= 2.
QuantumNumberSet ground_state_quantum_numbers(int n_sites);

struct SolverOptions {
    double tol = 1e-12;     // max-norm target for the residual
    int max_iterations = 200;
    int max_halvings = 30;  // step halvings per damped Newton iteration
};

// Acceptance threshold actually used by the solver: the residual contains the
// term N theta_1 of size O(N pi), so its computed value carries an intrinsic
// rounding uncertainty of a few N ulps (measured up to ~4 N ulps across the
// regimes).  Tolerances below that floor are unreachable in double precision,
// so the solver widens them to max(tol, 16 N eps); with the default tol the
// widening only engages beyond N ~ 280 and stays under 1.5e-11 at N = 4096.
double effective_tolerance(const SolverOptions& options, int n_sites);

struct RapiditySolution {
    Anisotropy anisotropy;
    QuantumNumberSet quantum_numbers;
    std::vector<double> rapidities;   // sorted ascending once converged
    double residual_norm = 0.0;
    double energy = 0.0;
    double energy_per_site = 0.0;
    bool converged = false;
    int iterations = 0;
};

// Thrown when the Newton iteration exhausts its budget; carries the best
// iterate seen so the caller can inspect or restart.
class NonConvergence : public std::runtime_error {
public:
    NonConvergence(const std::string& what, RapiditySolution best)
        : std::runtime_error(what), best_iterate(std::move(best)) {}
    RapiditySolution best_iterate;
};

// Continuous odd branch of the n-magnon scattering phase theta_n(lambda):
//   gapless    2 atan(cot(n gamma) tanh(gamma lambda))
//   isotropic  2 atan(lambda / n)
//   massive    2 atan(coth(n nu) tan(nu lambda)) + winding, so the function
//              increases monotonically across the branch cuts of tan
double scattering_phase(int n, double lambda, const Anisotropy& a);

// d theta_n / d lambda, strictly positive for Delta >= 0
double scattering_phase_prime(int n, double lambda, const Anisotropy& a);

// Logarithmic Bethe equations in residual form,
//   F_j = N theta_1(l_j) - 2 pi I_j - sum_{l != j} theta_2(l_j - l_l)
std::vector<double> bae_residual(const std::vector<double>& candidate,
                                 const QuantumNumberSet& qn,
                                 const Anisotropy& a);

// Interaction-free start: invert N theta_1(lambda) = 2 pi I_j and widen by 2.
std::vector<double> initial_rapidity_guess(const QuantumNumberSet& qn,
                                           const Anisotropy& a);

// Half-width L = pi / (2 nu) of the periodic rapidity window in the massive
// regime; rapidities live in (-L, L].
double massive_box_halfwidth(const Anisotropy& a);

// Energy carried by one magnon of rapidity lambda, strictly positive:
//   gapless    2 sin^2(2 gamma) / (sinh^2(gamma l) + sin^2(gamma))
//   isotropic  8 / (lambda^2 + 1)
//   massive    2 sinh^2(2 nu) / (sinh^2(nu) + sin^2(nu l))
double magnon_energy(double lambda, const Anisotropy& a);

// E = N Delta - sum_j magnon_energy(lambda_j).  Requires a converged solution
// (residual_norm below 1e-8); an empty rapidity set yields the reference
// energy N Delta of the fully polarised state.
double ground_energy(const RapiditySolution& sol);

// Damped Newton iteration from an explicit start.  Returns converged = false
// instead of throwing, so sweeps can flag bad rows and move on.
RapiditySolution solve_from_guess(const std::vector<double>& guess,
                                  const QuantumNumberSet& qn,
                                  const Anisotropy& a,
                                  const SolverOptions& options = {});

// Ground state of the N-site chain at anisotropy delta.  Requires even N in
// [2, 4096]; throws NonConvergence if the iteration cap is reached.
RapiditySolution solve_ground_state(int n_sites, double delta,
                                    const SolverOptions& options = {});

// Solves along a monotone delta grid, seeding each point with the previous
// roots (rescaled by the box-width ratio inside the massive regime) and
// retrying from the cold-start guess before flagging a row as unconverged.
std::vector<RapiditySolution> sweep_continuation(int n_sites,
                                                 const std::vector<double>& delta_grid,
                                                 const SolverOptions& options = {});

// Ground-state energy per site of the infinite chain.
//   Delta <= 1: Delta - 2 * integral of eps(l) rho(l) over l >= 0 with the
//               root density rho(l) = 1 / (4 cosh(pi l / 2))
//   Delta > 1:  the density equation a_1 = rho + a_2 * rho on the periodic
//               window diagonalises mode by mode in Fourier space; the energy
//               series is accumulated until it stops changing
double thermo_energy(double delta);

// JSON text of a solved point: fields n, m, delta, regime, gamma_or_nu,
// quantum_numbers, rapidities, residual_norm, energy, energy_per_site, all
// numbers at 17 significant digits.  Byte-stable across runs.
std::string dump_solution(const RapiditySolution& sol);

} // namespace xxz
