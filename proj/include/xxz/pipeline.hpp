#pragma once

#include <optional>
#include <string>
#include <vector>

#include "xxz/bethe.hpp"

namespace xxz {

enum class SweepMethod { Bethe, Thermo, ExactDiag };

struct ObservablePoint {
    double delta = 0.0;
    int n_sites = 0;  // kInfiniteChain (0) marks the thermodynamic limit
    double energy_per_site = 0.0;
    double gzz = 0.0;
    double concurrence = 0.0;       // always the energy-route closed form
    std::optional<double> xi;       // attached whenever delta > 1
    bool converged = true;
};

struct SweepTable {
    SweepMethod provenance = SweepMethod::Bethe;
    std::vector<ObservablePoint> rows;  // sorted by delta, then n_sites
};

struct SweepOptions {
    SolverOptions solver;
    double gzz_step = 1e-4;
    int threads = 1;  // observable evaluations per point run on a worker pool
};

// lo, lo + step, ..., hi (hi included when it falls on the step lattice)
std::vector<double> make_grid(double lo, double hi, double step);

// Observables along an ascending duplicate-free delta grid.  The Bethe route
// solves the chain once per point by continuation, then differentiates the
// energy with reseeded solves; results do not depend on the thread count.
SweepTable run_sweep(int n_sites, const std::vector<double>& delta_grid,
                     SweepMethod method, const SweepOptions& options = {});

enum class FitModel { Quadratic, InverseXi };

struct FitResult {
    FitModel model = FitModel::Quadratic;
    double c0 = 0.0;      // value at the isotropic point / intercept at 1/xi = 0
    double c1 = 0.0;      // quadratic: curvature in (Delta-1)^2; xi fit: slope in 1/xi
    double rms_residual = 0.0;
    double window_lo = 0.0;
    double window_hi = 0.0;
    int point_count = 0;
};

// Least-squares fit of C = c0 - c1 (Delta - 1)^2 over rows with delta inside
// [window_lo, window_hi]; needs at least three converged rows.
FitResult fit_quadratic_scaling(const SweepTable& table,
                                double window_lo, double window_hi);

// Least-squares line C = c0 + c1 / xi over massive rows with 1/xi < 0.25.
FitResult fit_xi_scaling(const SweepTable& table);

// Bethe sweeps repeated across chain sizes (each even, >= 4), merged and
// sorted by (delta, n_sites).
SweepTable finite_size_study(const std::vector<int>& sizes,
                             const std::vector<double>& delta_grid,
                             const SweepOptions& options = {});

struct EvenOddRow {
    int n_sites = 0;
    double energy = 0.0;
    double concurrence = 0.0;  // Wootters value from diagonalisation
    bool degenerate = false;
};

// Exact-diagonalisation concurrence for every size 2..n_max (n_max <= 15).
std::vector<EvenOddRow> even_odd_study(int n_max, double delta);

// CSV with header delta,n_sites,energy_per_site,gzz,concurrence,xi; numbers
// at 12 significant digits, n_sites printed as "inf" for the thermodynamic
// limit, xi and failed-row observables left empty.  Byte-stable across runs.
std::string sweep_csv(const SweepTable& table);

struct FigureParams {
    int n_sites = 1280;
    // concurrence-versus-delta panel
    double delta_lo = 0.0;
    double delta_hi = 3.0;
    double delta_step = 0.02;
    // massive-side panels sample uniformly in nu
    double nu_lo = 0.05;
    double nu_hi = 1.60;
    double nu_step = 0.05;
    // size scan for the finite-size panel
    std::vector<int> sizes = {8, 12, 16, 20, 40, 80, 160, 320, 640, 1280};
    SweepOptions sweep;
};

// figure_id 1: delta,concurrence,energy_per_site,gzz on the delta grid
// figure_id 2: delta,inv_xi,concurrence on the nu grid (Delta = cosh 2 nu)
// figure_id 3: n_sites,delta,xi,concurrence across the size scan
std::string figure_csv(int figure_id, const FigureParams& params = {});

// Writes figure_csv to path; I/O failures are reported with the path.
void write_figure_csv(int figure_id, const FigureParams& params,
                      const std::string& path);

const char* sweep_method_name(SweepMethod m);

} // namespace xxz
