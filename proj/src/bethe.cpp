#include "xxz/bethe.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>

#include "xxz/text_format.hpp"

namespace xxz {

namespace {

constexpr double kPi = 3.14159265358979323846;

// lambda reduced into the periodic window (-half_width, half_width]
double wrap_into_box(double lambda, double half_width) {
    const double period = 2.0 * half_width;
    double y = std::remainder(lambda, period);
    if (y <= -half_width) y += period;
    return y;
}

double max_abs(const std::vector<double>& v) {
    double m = 0.0;
    for (double x : v) m = std::max(m, std::abs(x));
    return m;
}

} // namespace

double effective_tolerance(const SolverOptions& options, int n_sites) {
    return std::max(options.tol,
                    16.0 * n_sites * std::numeric_limits<double>::epsilon());
}

QuantumNumberSet ground_state_quantum_numbers(int n_sites) {
    if (n_sites < 2 || n_sites % 2 != 0)
        throw std::invalid_argument("ground_state_quantum_numbers: n_sites must be even and >= 2");
    QuantumNumberSet qn;
    qn.n_sites = n_sites;
    qn.m_down = n_sites / 2;
    qn.numbers.resize(qn.m_down);
    for (int j = 1; j <= qn.m_down; ++j)
        qn.numbers[j - 1] = j - 0.5 * (qn.m_down + 1);
    return qn;
}

double scattering_phase(int n, double lambda, const Anisotropy& a) {
    switch (a.regime) {
        case Regime::Isotropic:
            return 2.0 * std::atan(lambda / n);
        case Regime::Gapless: {
            const double c = std::cos(n * a.gamma) / std::sin(n * a.gamma);
            return 2.0 * std::atan(c * std::tanh(a.gamma * lambda));
        }
        case Regime::Massive: {
            // principal value plus 2 pi per period of tan, keeping the branch
            // continuous and increasing in lambda
            const double x = std::remainder(a.nu * lambda, kPi);
            const double winding = std::nearbyint((a.nu * lambda - x) / kPi);
            return 2.0 * std::atan(std::tan(x) / std::tanh(n * a.nu)) + 2.0 * kPi * winding;
        }
    }
    return 0.0;
}

double scattering_phase_prime(int n, double lambda, const Anisotropy& a) {
    // closed forms 2 gamma sin(2 n gamma) / (cosh(2 gamma l) - cos(2 n gamma))
    // and its massive analogue, with the denominators rewritten through
    // cosh(2a) - cos(2b) = 2 (sinh^2 a + sin^2 b) to avoid cancellation
    switch (a.regime) {
        case Regime::Isotropic:
            return 2.0 * n / (lambda * lambda + n * n);
        case Regime::Gapless: {
            const double sh = std::sinh(a.gamma * lambda);
            const double sn = std::sin(n * a.gamma);
            return a.gamma * std::sin(2.0 * n * a.gamma) / (sh * sh + sn * sn);
        }
        case Regime::Massive: {
            const double sh = std::sinh(n * a.nu);
            const double sn = std::sin(a.nu * lambda);
            return a.nu * std::sinh(2.0 * n * a.nu) / (sh * sh + sn * sn);
        }
    }
    return 0.0;
}

std::vector<double> bae_residual(const std::vector<double>& candidate,
                                 const QuantumNumberSet& qn,
                                 const Anisotropy& a) {
    const std::size_t m = qn.numbers.size();
    if (candidate.size() != m)
        throw std::invalid_argument("bae_residual: candidate length does not match quantum numbers");
    for (double l : candidate)
        if (!std::isfinite(l))
            throw std::invalid_argument("bae_residual: rapidities must be finite");

    std::vector<double> f(m);
    for (std::size_t j = 0; j < m; ++j) {
        double pair_sum = 0.0;
        for (std::size_t l = 0; l < m; ++l)
            if (l != j)
                pair_sum += scattering_phase(2, candidate[j] - candidate[l], a);
        f[j] = qn.n_sites * scattering_phase(1, candidate[j], a)
             - 2.0 * kPi * qn.numbers[j] - pair_sum;
    }
    return f;
}

std::vector<double> initial_rapidity_guess(const QuantumNumberSet& qn,
                                           const Anisotropy& a) {
    std::vector<double> guess(qn.numbers.size());
    for (std::size_t j = 0; j < guess.size(); ++j) {
        const double t = std::tan(kPi * qn.numbers[j] / qn.n_sites);
        switch (a.regime) {
            case Regime::Isotropic:
                guess[j] = 2.0 * t;
                break;
            case Regime::Gapless:
                guess[j] = 2.0 * std::atanh(t * std::tan(a.gamma)) / a.gamma;
                break;
            case Regime::Massive:
                guess[j] = 2.0 * std::atan(t * std::tanh(a.nu)) / a.nu;
                break;
        }
    }
    return guess;
}

double massive_box_halfwidth(const Anisotropy& a) {
    if (a.regime != Regime::Massive)
        throw std::invalid_argument("massive_box_halfwidth: only defined for Delta > 1");
    return 0.5 * kPi / a.nu;
}

double magnon_energy(double lambda, const Anisotropy& a) {
    switch (a.regime) {
        case Regime::Isotropic:
            return 8.0 / (lambda * lambda + 1.0);
        case Regime::Gapless: {
            const double s2 = std::sin(2.0 * a.gamma);
            const double sh = std::sinh(a.gamma * lambda);
            const double sn = std::sin(a.gamma);
            return 2.0 * s2 * s2 / (sh * sh + sn * sn);
        }
        case Regime::Massive: {
            const double s2 = std::sinh(2.0 * a.nu);
            const double sh = std::sinh(a.nu);
            const double sn = std::sin(a.nu * lambda);
            return 2.0 * s2 * s2 / (sh * sh + sn * sn);
        }
    }
    return 0.0;
}

double ground_energy(const RapiditySolution& sol) {
    if (!(sol.residual_norm < 1e-8))
        throw std::invalid_argument("ground_energy: solution has not converged");
    double sum = 0.0;
    for (double l : sol.rapidities) {
        const double e = magnon_energy(l, sol.anisotropy);
        if (!(e > 0.0))
            throw std::runtime_error("ground_energy: magnon energy must be positive");
        sum += e;
    }
    return sol.anisotropy.delta * sol.quantum_numbers.n_sites - sum;
}

RapiditySolution solve_from_guess(const std::vector<double>& guess,
                                  const QuantumNumberSet& qn,
                                  const Anisotropy& a,
                                  const SolverOptions& options) {
    const int m = static_cast<int>(qn.numbers.size());
    if (static_cast<int>(guess.size()) != m)
        throw std::invalid_argument("solve_from_guess: guess length does not match quantum numbers");

    RapiditySolution sol;
    sol.anisotropy = a;
    sol.quantum_numbers = qn;

    const double tol = effective_tolerance(options, qn.n_sites);
    const bool boxed = (a.regime == Regime::Massive);
    const double box = boxed ? massive_box_halfwidth(a) : 0.0;

    std::vector<double> lambda = guess;
    if (boxed)
        for (double& l : lambda) l = wrap_into_box(l, box);

    std::vector<double> f = bae_residual(lambda, qn, a);
    double fnorm = max_abs(f);

    std::vector<double> best_lambda = lambda;
    double best_norm = fnorm;

    Eigen::MatrixXd jac(m, m);
    Eigen::VectorXd rhs(m);
    std::vector<double> trial(m);

    int iter = 0;
    while (iter < options.max_iterations && !(fnorm < tol)) {
        ++iter;
        // J_jj = N theta_1'(l_j) - sum_{l != j} theta_2'(l_j - l_l),
        // J_jl = theta_2'(l_j - l_l); symmetric and positive definite
        for (int j = 0; j < m; ++j) {
            double diag = qn.n_sites * scattering_phase_prime(1, lambda[j], a);
            for (int l = 0; l < m; ++l) {
                if (l == j) continue;
                const double d = scattering_phase_prime(2, lambda[j] - lambda[l], a);
                jac(j, l) = d;
                diag -= d;
            }
            jac(j, j) = diag;
            rhs(j) = f[j];
        }
        Eigen::VectorXd dx = jac.partialPivLu().solve(rhs);

        // damped step: halve until the residual norm drops; keep the final
        // (shortest) trial even if it never does, so progress cannot stall
        // on an infinite loop
        double step = 1.0;
        std::vector<double> trial_f;
        double trial_norm = std::numeric_limits<double>::infinity();
        for (int h = 0; h <= options.max_halvings; ++h) {
            for (int j = 0; j < m; ++j) {
                trial[j] = lambda[j] - step * dx(j);
                if (boxed) trial[j] = wrap_into_box(trial[j], box);
            }
            trial_f = bae_residual(trial, qn, a);
            trial_norm = max_abs(trial_f);
            if (trial_norm < fnorm) break;
            step *= 0.5;
        }
        lambda = trial;
        f = std::move(trial_f);
        fnorm = trial_norm;
        if (fnorm < best_norm) {
            best_norm = fnorm;
            best_lambda = lambda;
        }
    }

    sol.iterations = iter;
    sol.rapidities = best_lambda;
    sol.residual_norm = best_norm;
    sol.converged = best_norm < tol;
    if (sol.converged) {
        // re-evaluate on the sorted roots; summation order changes the result
        // by a few ulps of N theta_1, well inside the tolerance floor above
        std::sort(sol.rapidities.begin(), sol.rapidities.end());
        sol.residual_norm = max_abs(bae_residual(sol.rapidities, qn, a));
        sol.converged = sol.residual_norm < tol;
    }
    if (sol.converged) {
        sol.energy = ground_energy(sol);
        sol.energy_per_site = sol.energy / qn.n_sites;
    }
    return sol;
}

RapiditySolution solve_ground_state(int n_sites, double delta,
                                    const SolverOptions& options) {
    if (n_sites < 2 || n_sites > 4096 || n_sites % 2 != 0)
        throw std::invalid_argument("solve_ground_state: n_sites must be even, in [2, 4096]");
    const Anisotropy a = classify_anisotropy(delta);
    const QuantumNumberSet qn = ground_state_quantum_numbers(n_sites);
    RapiditySolution sol = solve_from_guess(initial_rapidity_guess(qn, a), qn, a, options);
    if (!sol.converged)
        throw NonConvergence("solve_ground_state: Newton iteration cap reached, residual "
                                 + detail::format_double(sol.residual_norm, 6),
                             std::move(sol));
    return sol;
}

std::vector<RapiditySolution> sweep_continuation(int n_sites,
                                                 const std::vector<double>& delta_grid,
                                                 const SolverOptions& options) {
    if (n_sites < 2 || n_sites > 4096 || n_sites % 2 != 0)
        throw std::invalid_argument("sweep_continuation: n_sites must be even, in [2, 4096]");
    const bool ascending = std::is_sorted(delta_grid.begin(), delta_grid.end());
    const bool descending = std::is_sorted(delta_grid.rbegin(), delta_grid.rend());
    if (!ascending && !descending)
        throw std::invalid_argument("sweep_continuation: delta grid must be monotone");

    std::vector<RapiditySolution> out;
    out.reserve(delta_grid.size());
    if (delta_grid.empty()) return out;

    const QuantumNumberSet qn = ground_state_quantum_numbers(n_sites);
    for (double delta : delta_grid) {
        const Anisotropy a = classify_anisotropy(delta);
        std::vector<double> guess;
        if (!out.empty() && out.back().converged) {
            guess = out.back().rapidities;
            const Anisotropy& prev = out.back().anisotropy;
            if (a.regime == Regime::Massive && prev.regime == Regime::Massive) {
                // rescale with the periodic window so the seed stays inside it
                const double scale = prev.nu / a.nu;
                for (double& l : guess) l *= scale;
            }
        } else {
            guess = initial_rapidity_guess(qn, a);
        }
        RapiditySolution sol = solve_from_guess(guess, qn, a, options);
        if (!sol.converged)
            sol = solve_from_guess(initial_rapidity_guess(qn, a), qn, a, options);
        out.push_back(std::move(sol));
    }
    return out;
}

std::string dump_solution(const RapiditySolution& sol) {
    using detail::format_double;
    auto number_list = [](const std::vector<double>& v) {
        std::string s = "[";
        for (std::size_t i = 0; i < v.size(); ++i) {
            if (i) s += ", ";
            s += format_double(v[i], 17);
        }
        s += "]";
        return s;
    };

    double gamma_or_nu = 0.0;
    if (sol.anisotropy.regime == Regime::Gapless) gamma_or_nu = sol.anisotropy.gamma;
    if (sol.anisotropy.regime == Regime::Massive) gamma_or_nu = sol.anisotropy.nu;

    std::string s = "{\n";
    s += "  \"n\": " + std::to_string(sol.quantum_numbers.n_sites) + ",\n";
    s += "  \"m\": " + std::to_string(sol.quantum_numbers.m_down) + ",\n";
    s += "  \"delta\": " + format_double(sol.anisotropy.delta, 17) + ",\n";
    s += "  \"regime\": \"" + std::string(regime_name(sol.anisotropy.regime)) + "\",\n";
    s += "  \"gamma_or_nu\": " + format_double(gamma_or_nu, 17) + ",\n";
    s += "  \"quantum_numbers\": " + number_list(sol.quantum_numbers.numbers) + ",\n";
    s += "  \"rapidities\": " + number_list(sol.rapidities) + ",\n";
    s += "  \"residual_norm\": " + format_double(sol.residual_norm, 17) + ",\n";
    s += "  \"energy\": " + format_double(sol.energy, 17) + ",\n";
    s += "  \"energy_per_site\": " + format_double(sol.energy_per_site, 17) + "\n";
    s += "}\n";
    return s;
}

} // namespace xxz
