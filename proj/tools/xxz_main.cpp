#include "CLI11.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "xxz/bethe.hpp"
#include "xxz/ed.hpp"
#include "xxz/observables.hpp"
#include "xxz/pipeline.hpp"
#include "xxz/text_format.hpp"

namespace {

using xxz::detail::format_double;

struct DeltaRange {
    double lo = 0.0;
    double hi = 0.0;
    double step = 0.0;
};

DeltaRange parse_range(const std::string& text) {
    const auto first = text.find(':');
    const auto last = text.rfind(':');
    if (first == std::string::npos || last == first)
        throw CLI::ValidationError("--delta-range", "expected lo:hi:step");
    DeltaRange r;
    try {
        r.lo = std::stod(text.substr(0, first));
        r.hi = std::stod(text.substr(first + 1, last - first - 1));
        r.step = std::stod(text.substr(last + 1));
    } catch (const std::exception&) {
        throw CLI::ValidationError("--delta-range", "expected numeric lo:hi:step");
    }
    return r;
}

void emit(const std::string& body, const std::string& out_path) {
    if (out_path.empty()) {
        std::fwrite(body.data(), 1, body.size(), stdout);
        return;
    }
    std::ofstream out(out_path, std::ios::binary);
    if (!out)
        throw std::runtime_error("cannot open '" + out_path + "' for writing");
    out << body;
    if (!out.good())
        throw std::runtime_error("write to '" + out_path + "' failed");
}

std::string csv(double v) { return format_double(v, 12); }

std::string fit_text(const xxz::FitResult& f) {
    std::string s = "model,c0,c1,rms_residual,window_lo,window_hi,point_count\n";
    s += (f.model == xxz::FitModel::Quadratic ? "quadratic" : "inverse_xi");
    s += ',' + csv(f.c0) + ',' + csv(f.c1) + ',' + csv(f.rms_residual) + ','
       + csv(f.window_lo) + ',' + csv(f.window_hi) + ','
       + std::to_string(f.point_count) + '\n';
    return s;
}

bool all_converged(const xxz::SweepTable& table) {
    for (const auto& row : table.rows)
        if (!row.converged) return false;
    return true;
}

int default_threads() {
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : static_cast<int>(hw);
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Ground-state energy, correlations and bond entanglement of the periodic spin-1/2 XXZ chain"};
    app.require_subcommand(1);

    int n_sites = 16;
    int n_max = 11;
    double delta = 1.0;
    double tol = 1e-12;
    std::string range_text;
    std::string method = "bethe";
    std::string out_path;
    int threads = default_threads();
    int figure_id = 1;

    auto* solve = app.add_subcommand("solve", "Solve the Bethe equations at one point, print the JSON record");
    solve->add_option("--n", n_sites, "chain length (even)")->required();
    solve->add_option("--delta", delta, "anisotropy")->required();
    solve->add_option("--tol", tol, "residual tolerance");
    solve->add_option("--out", out_path, "output file (default stdout)");

    auto* sweep = app.add_subcommand("sweep", "Observables along a delta grid, CSV");
    sweep->add_option("--n", n_sites, "chain length (ignored for --method thermo)");
    sweep->add_option("--delta-range", range_text, "grid as lo:hi:step")->required();
    sweep->add_option("--method", method, "bethe | thermo | ed")
        ->check(CLI::IsMember({"bethe", "thermo", "ed"}));
    sweep->add_option("--tol", tol, "solver tolerance");
    sweep->add_option("--threads", threads, "worker threads");
    sweep->add_option("--out", out_path, "output file (default stdout)");

    auto* xi_cmd = app.add_subcommand("xi", "Correlation length for delta > 1, CSV");
    auto* xi_delta = xi_cmd->add_option("--delta", delta, "single anisotropy");
    auto* xi_range = xi_cmd->add_option("--delta-range", range_text, "grid as lo:hi:step");
    xi_cmd->add_option("--tol", tol, "series truncation tolerance");
    xi_cmd->add_option("--out", out_path, "output file (default stdout)");

    auto* fit = app.add_subcommand("fit", "Least-squares fits of the concurrence scaling laws");
    fit->require_subcommand(1);
    auto* fit_quadratic = fit->add_subcommand("quadratic", "C = c0 - c1 (delta - 1)^2 across the transition");
    fit_quadratic->add_option("--n", n_sites, "chain length (default 1280)");
    fit_quadratic->add_option("--delta-range", range_text, "grid as lo:hi:step (default 0:1.3:0.02)");
    fit_quadratic->add_option("--tol", tol, "solver tolerance");
    fit_quadratic->add_option("--threads", threads, "worker threads");
    fit_quadratic->add_option("--out", out_path, "output file (default stdout)");
    auto* fit_xi = fit->add_subcommand("xi", "C = c0 + c1 / xi on the massive side (1/xi < 0.25)");
    fit_xi->add_option("--n", n_sites, "chain length (default 1280)");
    fit_xi->add_option("--delta-range", range_text, "grid as lo:hi:step (default: cosh(2 nu) lattice)");
    fit_xi->add_option("--tol", tol, "solver tolerance");
    fit_xi->add_option("--threads", threads, "worker threads");
    fit_xi->add_option("--out", out_path, "output file (default stdout)");

    auto* ed = app.add_subcommand("ed", "Exact-diagonalisation cross-checks (N <= 20)");
    ed->require_subcommand(1);
    auto* ed_energy = ed->add_subcommand("energy", "ground-state energy in the lowest S^z sector");
    ed_energy->add_option("--n", n_sites, "chain length")->required();
    ed_energy->add_option("--delta", delta, "anisotropy")->required();
    ed_energy->add_option("--out", out_path, "output file (default stdout)");
    auto* ed_conc = ed->add_subcommand("concurrence", "bond concurrence from the reduced density matrix");
    ed_conc->add_option("--n", n_sites, "chain length")->required();
    ed_conc->add_option("--delta", delta, "anisotropy")->required();
    ed_conc->add_option("--out", out_path, "output file (default stdout)");
    auto* ed_evenodd = ed->add_subcommand("evenodd", "concurrence for every size 2..n-max");
    ed_evenodd->add_option("--n-max", n_max, "largest chain length (<= 15)")->required();
    ed_evenodd->add_option("--delta", delta, "anisotropy");
    ed_evenodd->add_option("--out", out_path, "output file (default stdout)");

    auto* figure = app.add_subcommand("figure", "Emit one of the three standard data panels as CSV");
    figure->add_option("id", figure_id, "panel id: 1, 2 or 3")->required()
        ->check(CLI::Range(1, 3));
    figure->add_option("--n", n_sites, "chain length for panels 1 and 2");
    figure->add_option("--threads", threads, "worker threads");
    figure->add_option("--out", out_path, "output file (default fig<id>.csv)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        if (*solve) {
            xxz::SolverOptions opts;
            opts.tol = tol;
            try {
                emit(xxz::dump_solution(xxz::solve_ground_state(n_sites, delta, opts)), out_path);
            } catch (const xxz::NonConvergence& nc) {
                emit(xxz::dump_solution(nc.best_iterate), out_path);
                std::fprintf(stderr, "xxz: %s\n", nc.what());
                return 2;
            }
            return 0;
        }

        if (*sweep) {
            const DeltaRange r = parse_range(range_text);
            xxz::SweepOptions opts;
            opts.solver.tol = tol;
            opts.threads = threads;
            xxz::SweepMethod m = xxz::SweepMethod::Bethe;
            if (method == "thermo") m = xxz::SweepMethod::Thermo;
            if (method == "ed") m = xxz::SweepMethod::ExactDiag;
            const int n_for_sweep = (m == xxz::SweepMethod::Thermo) ? xxz::kInfiniteChain : n_sites;
            const xxz::SweepTable table =
                xxz::run_sweep(n_for_sweep, xxz::make_grid(r.lo, r.hi, r.step), m, opts);
            emit(xxz::sweep_csv(table), out_path);
            if (!all_converged(table)) {
                std::fprintf(stderr, "xxz: some grid points did not converge; rows left empty\n");
                return 2;
            }
            return 0;
        }

        if (*xi_cmd) {
            if (static_cast<bool>(*xi_delta) == static_cast<bool>(*xi_range))
                throw std::invalid_argument("xi: give exactly one of --delta or --delta-range");
            std::vector<double> grid;
            if (*xi_delta) grid.push_back(delta);
            else {
                const DeltaRange r = parse_range(range_text);
                grid = xxz::make_grid(r.lo, r.hi, r.step);
            }
            std::string body = "delta,xi,inv_xi\n";
            for (double d : grid) {
                const auto series = xxz::correlation_length_series(d, tol);
                body += csv(d) + ',' + csv(1.0 / series.inv_xi) + ',' + csv(series.inv_xi) + '\n';
            }
            emit(body, out_path);
            return 0;
        }

        if (*fit_quadratic) {
            DeltaRange r{0.0, 1.3, 0.02};
            if (!range_text.empty()) r = parse_range(range_text);
            if (fit_quadratic->count("--n") == 0) n_sites = 1280;
            xxz::SweepOptions opts;
            opts.solver.tol = tol;
            opts.threads = threads;
            const xxz::SweepTable table =
                xxz::run_sweep(n_sites, xxz::make_grid(r.lo, r.hi, r.step),
                               xxz::SweepMethod::Bethe, opts);
            emit(fit_text(xxz::fit_quadratic_scaling(table, r.lo, r.hi)), out_path);
            return all_converged(table) ? 0 : 2;
        }

        if (*fit_xi) {
            std::vector<double> grid;
            if (!range_text.empty()) {
                const DeltaRange r = parse_range(range_text);
                grid = xxz::make_grid(r.lo, r.hi, r.step);
            } else {
                for (double nu : xxz::make_grid(0.05, 1.60, 0.05))
                    grid.push_back(std::cosh(2.0 * nu));
            }
            if (fit_xi->count("--n") == 0) n_sites = 1280;
            xxz::SweepOptions opts;
            opts.solver.tol = tol;
            opts.threads = threads;
            const xxz::SweepTable table =
                xxz::run_sweep(n_sites, grid, xxz::SweepMethod::Bethe, opts);
            emit(fit_text(xxz::fit_xi_scaling(table)), out_path);
            return all_converged(table) ? 0 : 2;
        }

        if (*ed_energy) {
            const xxz::GroundStateResult g = xxz::ground_state_ed(n_sites, delta);
            std::string body = "n_sites,delta,energy,energy_per_site,second_energy,degenerate\n";
            body += std::to_string(n_sites) + ',' + csv(delta) + ',' + csv(g.energy) + ','
                  + csv(g.energy / n_sites) + ',' + csv(g.second_energy) + ','
                  + (g.degeneracy_flag ? "1" : "0") + '\n';
            emit(body, out_path);
            return 0;
        }

        if (*ed_conc) {
            const xxz::GroundStateResult g = xxz::ground_state_ed(n_sites, delta);
            const double c = xxz::wootters_concurrence(xxz::translation_averaged_rdm(g));
            std::string body = "n_sites,delta,concurrence,gzz,energy_per_site\n";
            body += std::to_string(n_sites) + ',' + csv(delta) + ',' + csv(c) + ','
                  + csv(xxz::gzz_direct(g)) + ',' + csv(g.energy / n_sites) + '\n';
            emit(body, out_path);
            return 0;
        }

        if (*ed_evenodd) {
            std::string body = "n_sites,energy,concurrence,degenerate\n";
            for (const xxz::EvenOddRow& row : xxz::even_odd_study(n_max, delta)) {
                body += std::to_string(row.n_sites) + ',' + csv(row.energy) + ','
                      + csv(row.concurrence) + ',' + (row.degenerate ? "1" : "0") + '\n';
            }
            emit(body, out_path);
            return 0;
        }

        if (*figure) {
            xxz::FigureParams params;
            if (figure->count("--n") > 0) params.n_sites = n_sites;
            params.sweep.threads = threads;
            const std::string path =
                out_path.empty() ? "fig" + std::to_string(figure_id) + ".csv" : out_path;
            xxz::write_figure_csv(figure_id, params, path);
            return 0;
        }
    } catch (const xxz::NonConvergence& e) {
        std::fprintf(stderr, "xxz: %s\n", e.what());
        return 2;
    } catch (const std::invalid_argument& e) {
        std::fprintf(stderr, "xxz: %s\n", e.what());
        return 1;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "xxz: %s\n", e.what());
        return 1;
    }
    return 0;
}
