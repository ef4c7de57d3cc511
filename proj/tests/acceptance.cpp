// Acceptance gate: every headline result the toolkit must reproduce, checked
// at its stated tolerance.  One line per criterion, non-zero exit on any
// failure.
#include <Eigen/Dense>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <exception>
#include <functional>
#include <string>
#include <vector>

#include "xxz/bethe.hpp"
#include "xxz/ed.hpp"
#include "xxz/observables.hpp"
#include "xxz/pipeline.hpp"

namespace {

constexpr double kPi = 3.14159265358979323846;

int failures = 0;

std::string num(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.6g", v);
    return buf;
}

void report(int index, const std::string& label, bool pass, const std::string& detail) {
    std::printf("[%s] %2d. %s: %s\n", pass ? "PASS" : "FAIL", index, label.c_str(),
                detail.c_str());
    std::fflush(stdout);
    if (!pass) ++failures;
}

void run(int index, const std::string& label,
         const std::function<std::pair<bool, std::string>()>& body) {
    try {
        const auto [pass, detail] = body();
        report(index, label, pass, detail);
    } catch (const std::exception& e) {
        report(index, label, false, std::string("exception: ") + e.what());
    }
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

} // namespace

int main() {
    using xxz::SweepMethod;

    run(1, "critical-point concurrence, N=1280", [] {
        const auto t0 = std::chrono::steady_clock::now();
        const xxz::SweepTable t = xxz::run_sweep(1280, {1.0}, SweepMethod::Bethe);
        const double elapsed = seconds_since(t0);
        const double c = t.rows.at(0).concurrence;
        const bool pass = t.rows.at(0).converged && c >= 0.381 && c <= 0.391
                          && elapsed < 60.0;
        return std::make_pair(pass, "C = " + num(c) + " (window [0.381, 0.391]), "
                                        + num(elapsed) + " s (limit 60 s)");
    });

    run(2, "quadratic scaling coefficients across the gapless side", [] {
        const auto grid = xxz::make_grid(0.0, 1.3, 0.02);
        const xxz::SweepTable t = xxz::run_sweep(1280, grid, SweepMethod::Bethe);
        const xxz::FitResult fit = xxz::fit_quadratic_scaling(t, 0.0, 1.3);
        const double c0_ref = 2.0 * std::log(2.0) - 1.0;
        const bool pass = std::abs(fit.c0 - c0_ref) < 0.01
                          && std::abs(fit.c1 - 0.047) < 0.01
                          && fit.rms_residual < 1e-3;
        return std::make_pair(pass, "c0 = " + num(fit.c0) + " (ref " + num(c0_ref)
                                        + " +- 0.01), c1 = " + num(fit.c1)
                                        + " (ref 0.047 +- 0.01), rms = "
                                        + num(fit.rms_residual) + " (limit 1e-3)");
    });

    run(3, "free-fermion point in the thermodynamic limit", [] {
        const double e = xxz::thermo_energy(0.0);
        const double g = xxz::gzz(xxz::kInfiniteChain, 0.0);
        const double e_ref = -4.0 / kPi;
        const double g_ref = -4.0 / (kPi * kPi);
        const bool pass = std::abs(e - e_ref) < 1e-6 && std::abs(g - g_ref) < 1e-4;
        return std::make_pair(pass, "energy " + num(e) + " vs " + num(e_ref)
                                        + " (tol 1e-6), correlator " + num(g) + " vs "
                                        + num(g_ref) + " (tol 1e-4)");
    });

    run(4, "concurrence versus inverse correlation length", [] {
        const auto nus = xxz::make_grid(0.05, 1.60, 0.05);
        std::vector<double> grid;
        grid.reserve(nus.size());
        for (double nu : nus) grid.push_back(std::cosh(2.0 * nu));
        const xxz::SweepTable t = xxz::run_sweep(1280, grid, SweepMethod::Bethe);
        const xxz::FitResult fit = xxz::fit_xi_scaling(t);
        const double c0_ref = 2.0 * std::log(2.0) - 1.0;
        const bool pass = std::abs(fit.c1 - (-0.5)) < 0.05
                          && std::abs(fit.c0 - c0_ref) < 0.01;
        return std::make_pair(pass, "slope = " + num(fit.c1)
                                        + " (ref -0.5 +- 0.05), intercept = " + num(fit.c0)
                                        + " (ref " + num(c0_ref) + " +- 0.01), "
                                        + std::to_string(fit.point_count) + " points");
    });

    run(5, "root solver against diagonalisation on small rings", [] {
        double max_de = 0.0, max_dc = 0.0;
        for (int n : {4, 6, 8, 10, 12}) {
            for (double delta : {0.0, 0.5, 1.0, 1.5, 2.0, 4.0}) {
                const double e_ba = xxz::solve_ground_state(n, delta).energy;
                const xxz::GroundStateResult ed = xxz::ground_state_ed(n, delta);
                max_de = std::max(max_de, std::abs(e_ba - ed.energy));
                const xxz::SweepTable t = xxz::run_sweep(n, {delta}, SweepMethod::Bethe);
                const double c_eq = t.rows.at(0).concurrence;
                const double c_w = xxz::wootters_concurrence(xxz::translation_averaged_rdm(ed));
                max_dc = std::max(max_dc, std::abs(c_eq - c_w));
            }
        }
        const bool pass = max_de < 1e-8 && max_dc < 1e-8;
        return std::make_pair(pass, "max |dE| = " + num(max_de)
                                        + ", max |dC| = " + num(max_dc) + " (tol 1e-8)");
    });

    run(6, "loop-algebra rewriting of the Hamiltonian", [] {
        double max_entry = 0.0;
        for (int n : {4, 6, 8}) {
            for (double delta : {1.1, 1.25, 2.0}) {
                const Eigen::MatrixXd a =
                    Eigen::MatrixXd(xxz::build_xxz_hamiltonian_full(n, delta));
                const Eigen::MatrixXd b =
                    Eigen::MatrixXd(xxz::build_tl_hamiltonian(n, delta));
                max_entry = std::max(max_entry, (a - b).cwiseAbs().maxCoeff());
            }
        }
        double max_block = 0.0;
        for (double delta : {1.1, 1.25, 2.0}) {
            const double q = delta + std::sqrt((delta - 1.0) * (delta + 1.0));
            const Eigen::Matrix2d block = xxz::temperley_lieb_block(q);
            Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> eig(block);
            max_block = std::max(max_block, std::abs(eig.eigenvalues()(0) + 2.0 * delta));
            max_block = std::max(max_block, std::abs(eig.eigenvalues()(1)));
            Eigen::Vector2d phi(1.0 / std::sqrt(q), -std::sqrt(q));
            phi.normalize();
            max_block = std::max(max_block,
                                 (block * phi + 2.0 * delta * phi).cwiseAbs().maxCoeff());
        }
        const bool pass = max_entry < 1e-12 && max_block < 1e-12;
        return std::make_pair(pass, "max matrix deviation = " + num(max_entry)
                                        + ", max block deviation = " + num(max_block)
                                        + " (tol 1e-12)");
    });

    run(7, "finite-size collapse of the concurrence", [] {
        const auto grid = xxz::make_grid(1.0, 2.0, 0.05);
        const xxz::SweepTable small = xxz::run_sweep(20, grid, SweepMethod::Bethe);
        const xxz::SweepTable large = xxz::run_sweep(1280, grid, SweepMethod::Bethe);
        double max_gap = 0.0;
        for (std::size_t i = 0; i < grid.size(); ++i)
            max_gap = std::max(max_gap, std::abs(small.rows[i].concurrence
                                                 - large.rows[i].concurrence));
        double lo = 1.0, hi = 0.0;
        for (int n : {20, 40, 80, 160, 320, 640, 1280}) {
            const double c = xxz::run_sweep(n, {1.2}, SweepMethod::Bethe).rows.at(0).concurrence;
            lo = std::min(lo, c);
            hi = std::max(hi, c);
        }
        const bool pass = max_gap < 0.01 && (hi - lo) < 0.01;
        return std::make_pair(pass, "max |C(20) - C(1280)| = " + num(max_gap)
                                        + " over [1, 2], size spread at 1.2 = "
                                        + num(hi - lo) + " (tol 0.01)");
    });

    run(8, "inverse-anisotropy tail of the concurrence", [] {
        const auto grid = xxz::make_grid(10.0, 40.0, 2.0);
        const xxz::SweepTable t = xxz::run_sweep(256, grid, SweepMethod::Bethe);
        double lo = 1e300, hi = 0.0, mean = 0.0;
        for (const xxz::ObservablePoint& p : t.rows) {
            const double v = p.concurrence * p.delta;
            lo = std::min(lo, v);
            hi = std::max(hi, v);
            mean += v;
        }
        mean /= static_cast<double>(t.rows.size());
        const double variation = (hi - lo) / mean;
        const bool pass = variation < 0.10;
        return std::make_pair(pass, "C * Delta in [" + num(lo) + ", " + num(hi)
                                        + "], relative variation = " + num(variation)
                                        + " (limit 0.1)");
    });

    run(9, "even rings outentangle the next odd ring", [] {
        bool pass = true;
        std::string detail;
        for (int n : {4, 6, 8, 10}) {
            const double even = xxz::ed_concurrence(n, 1.0);
            const double odd = xxz::ed_concurrence(n + 1, 1.0);
            pass = pass && even > odd;
            if (!detail.empty()) detail += ", ";
            detail += "C(" + std::to_string(n) + ") = " + num(even) + " vs C("
                      + std::to_string(n + 1) + ") = " + num(odd);
        }
        return std::make_pair(pass, detail);
    });

    run(10, "full concurrence curve, 151 points at N=1280", [] {
        const auto grid = xxz::make_grid(0.0, 3.0, 0.02);
        const auto t0 = std::chrono::steady_clock::now();
        const xxz::SweepTable t = xxz::run_sweep(1280, grid, SweepMethod::Bethe);
        const double elapsed = seconds_since(t0);

        bool all_converged = true;
        std::size_t peak = 0;
        for (std::size_t i = 0; i < t.rows.size(); ++i) {
            all_converged = all_converged && t.rows[i].converged;
            if (t.rows[i].concurrence > t.rows[peak].concurrence) peak = i;
        }
        bool unimodal = true;
        for (std::size_t i = 0; i + 1 < t.rows.size(); ++i) {
            const double step = t.rows[i + 1].concurrence - t.rows[i].concurrence;
            if (i < peak) unimodal = unimodal && step > -1e-12;
            else unimodal = unimodal && step < 1e-12;
        }
        const bool peak_at_transition = std::abs(t.rows[peak].delta - 1.0) < 1e-12;
        const bool pass = all_converged && unimodal && peak_at_transition
                          && elapsed < 1800.0;
        return std::make_pair(pass, "argmax at Delta = " + num(t.rows[peak].delta)
                                        + ", unimodal = " + (unimodal ? "yes" : "no")
                                        + ", " + num(elapsed) + " s (limit 1800 s)");
    });

    if (failures == 0) {
        std::printf("all 10 acceptance criteria passed\n");
        return 0;
    }
    std::printf("%d acceptance criterion(s) failed\n", failures);
    return 1;
}
