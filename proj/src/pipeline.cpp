#include "xxz/pipeline.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <fstream>
#include <functional>
#include <mutex>
#include <stdexcept>
#include <thread>

#include "xxz/ed.hpp"
#include "xxz/observables.hpp"
#include "xxz/text_format.hpp"

namespace xxz {

namespace {

// Worker pool over an atomic index; the partition of indices onto threads
// never influences the stored results, so any thread count gives identical
// tables.  The first exception wins and is rethrown on the caller.
void parallel_for(std::size_t count, int threads,
                  const std::function<void(std::size_t)>& body) {
    const int workers = std::max(1, threads);
    if (workers == 1 || count <= 1) {
        for (std::size_t i = 0; i < count; ++i) body(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(workers));
    for (int t = 0; t < workers; ++t) {
        pool.emplace_back([&] {
            for (std::size_t i; (i = next.fetch_add(1)) < count;) {
                try {
                    body(i);
                } catch (...) {
                    const std::lock_guard<std::mutex> lock(failure_mutex);
                    if (!failure) failure = std::current_exception();
                }
            }
        });
    }
    for (auto& th : pool) th.join();
    if (failure) std::rethrow_exception(failure);
}

void check_grid(const std::vector<double>& grid, const char* who) {
    for (std::size_t i = 0; i + 1 < grid.size(); ++i) {
        if (grid[i] > grid[i + 1])
            throw std::invalid_argument(std::string(who) + ": delta grid must be ascending");
        if (grid[i] == grid[i + 1])
            throw std::invalid_argument(std::string(who) + ": duplicate delta in grid");
    }
}

void attach_xi(ObservablePoint& p) {
    if (p.delta > 1.0) p.xi = correlation_length(p.delta);
}

// Energy derivative around one solved chain, each stencil energy reseeded
// from the point's own roots so the whole stencil costs a few warm Newton
// steps.
ObservablePoint bethe_point(const RapiditySolution& sol, const SweepOptions& options) {
    ObservablePoint p;
    p.delta = sol.anisotropy.delta;
    p.n_sites = sol.quantum_numbers.n_sites;
    if (!sol.converged) {
        p.converged = false;
        return p;
    }
    attach_xi(p);
    auto energy_at = [&sol, &options](double d) {
        const Anisotropy a = classify_anisotropy(d);
        std::vector<double> guess = sol.rapidities;
        if (a.regime == Regime::Massive && sol.anisotropy.regime == Regime::Massive) {
            const double scale = sol.anisotropy.nu / a.nu;
            for (double& l : guess) l *= scale;
        }
        RapiditySolution shifted = solve_from_guess(guess, sol.quantum_numbers, a, options.solver);
        if (!shifted.converged)
            throw NonConvergence("run_sweep: stencil solve failed at delta "
                                     + detail::format_double(d, 6),
                                 std::move(shifted));
        return shifted.energy_per_site;
    };
    try {
        p.energy_per_site = sol.energy_per_site;
        p.gzz = hellmann_feynman_gzz(energy_at, p.delta, options.gzz_step);
        p.concurrence = concurrence_xxz(p.energy_per_site, p.gzz, p.delta);
    } catch (const NonConvergence&) {
        p.converged = false;
    }
    return p;
}

ObservablePoint thermo_point(double delta, const SweepOptions& options) {
    ObservablePoint p;
    p.delta = delta;
    p.n_sites = kInfiniteChain;
    p.energy_per_site = thermo_energy(delta);
    p.gzz = hellmann_feynman_gzz([](double d) { return thermo_energy(d); },
                                 delta, options.gzz_step);
    p.concurrence = concurrence_xxz(p.energy_per_site, p.gzz, delta);
    attach_xi(p);
    return p;
}

ObservablePoint ed_point(int n_sites, double delta) {
    ObservablePoint p;
    p.delta = delta;
    p.n_sites = n_sites;
    const GroundStateResult g = ground_state_ed(n_sites, delta);
    p.energy_per_site = g.energy / n_sites;
    p.gzz = gzz_direct(g);
    p.concurrence = concurrence_xxz(p.energy_per_site, p.gzz, delta);
    attach_xi(p);
    return p;
}

} // namespace

const char* sweep_method_name(SweepMethod m) {
    switch (m) {
        case SweepMethod::Bethe:     return "bethe";
        case SweepMethod::Thermo:    return "thermo";
        case SweepMethod::ExactDiag: return "ed";
    }
    return "unknown";
}

std::vector<double> make_grid(double lo, double hi, double step) {
    if (!(step > 0.0))
        throw std::invalid_argument("make_grid: step must be positive");
    if (!(hi >= lo))
        throw std::invalid_argument("make_grid: hi must be >= lo");
    const auto count = static_cast<long long>(std::floor((hi - lo) / step + 0.5)) + 1;
    std::vector<double> grid;
    grid.reserve(static_cast<std::size_t>(count));
    for (long long k = 0; k < count; ++k) {
        const double v = lo + static_cast<double>(k) * step;
        if (v > hi + 0.5 * step) break;
        grid.push_back(v);
    }
    return grid;
}

SweepTable run_sweep(int n_sites, const std::vector<double>& delta_grid,
                     SweepMethod method, const SweepOptions& options) {
    check_grid(delta_grid, "run_sweep");
    SweepTable table;
    table.provenance = method;
    if (delta_grid.empty()) return table;
    table.rows.resize(delta_grid.size());

    switch (method) {
        case SweepMethod::Bethe: {
            const std::vector<RapiditySolution> chain =
                sweep_continuation(n_sites, delta_grid, options.solver);
            parallel_for(delta_grid.size(), options.threads, [&](std::size_t i) {
                table.rows[i] = bethe_point(chain[i], options);
            });
            break;
        }
        case SweepMethod::Thermo: {
            parallel_for(delta_grid.size(), options.threads, [&](std::size_t i) {
                table.rows[i] = thermo_point(delta_grid[i], options);
            });
            break;
        }
        case SweepMethod::ExactDiag: {
            if (n_sites < 2 || n_sites > 20)
                throw std::invalid_argument("run_sweep: exact diagonalisation needs n_sites in [2, 20]");
            parallel_for(delta_grid.size(), options.threads, [&](std::size_t i) {
                table.rows[i] = ed_point(n_sites, delta_grid[i]);
            });
            break;
        }
    }
    return table;
}

namespace {

struct LinePoints {
    std::vector<double> x, y;
};

// ordinary least squares for y = intercept + slope * x
void fit_line(const LinePoints& pts, double& intercept, double& slope, double& rms) {
    const auto m = static_cast<double>(pts.x.size());
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < pts.x.size(); ++i) {
        sx += pts.x[i];
        sy += pts.y[i];
        sxx += pts.x[i] * pts.x[i];
        sxy += pts.x[i] * pts.y[i];
    }
    const double denom = m * sxx - sx * sx;
    if (!(std::abs(denom) > 0.0))
        throw std::invalid_argument("fit: abscissae are collinear, line is undetermined");
    slope = (m * sxy - sx * sy) / denom;
    intercept = (sy - slope * sx) / m;
    double ssr = 0.0;
    for (std::size_t i = 0; i < pts.x.size(); ++i) {
        const double r = pts.y[i] - (intercept + slope * pts.x[i]);
        ssr += r * r;
    }
    rms = std::sqrt(ssr / m);
}

} // namespace

FitResult fit_quadratic_scaling(const SweepTable& table,
                                double window_lo, double window_hi) {
    if (!(window_lo < window_hi))
        throw std::invalid_argument("fit_quadratic_scaling: window must be non-empty");
    LinePoints pts;
    for (const ObservablePoint& p : table.rows) {
        if (!p.converged || p.delta < window_lo || p.delta > window_hi) continue;
        const double d = p.delta - 1.0;
        pts.x.push_back(d * d);
        pts.y.push_back(p.concurrence);
    }
    if (pts.x.size() < 3)
        throw std::invalid_argument("fit_quadratic_scaling: need at least three rows in the window");

    FitResult fit;
    fit.model = FitModel::Quadratic;
    fit.window_lo = window_lo;
    fit.window_hi = window_hi;
    fit.point_count = static_cast<int>(pts.x.size());
    double slope = 0.0;
    fit_line(pts, fit.c0, slope, fit.rms_residual);
    fit.c1 = -slope;  // law is C = c0 - c1 (Delta - 1)^2
    return fit;
}

FitResult fit_xi_scaling(const SweepTable& table) {
    LinePoints pts;
    double lo = 0.25, hi = 0.0;
    for (const ObservablePoint& p : table.rows) {
        if (!p.converged || !p.xi) continue;
        const double inv = 1.0 / *p.xi;
        if (!(inv < 0.25)) continue;
        pts.x.push_back(inv);
        pts.y.push_back(p.concurrence);
        lo = std::min(lo, inv);
        hi = std::max(hi, inv);
    }
    if (pts.x.size() < 3)
        throw std::invalid_argument("fit_xi_scaling: need at least three rows with 1/xi below 0.25");

    FitResult fit;
    fit.model = FitModel::InverseXi;
    fit.window_lo = lo;
    fit.window_hi = hi;
    fit.point_count = static_cast<int>(pts.x.size());
    fit_line(pts, fit.c0, fit.c1, fit.rms_residual);
    return fit;
}

SweepTable finite_size_study(const std::vector<int>& sizes,
                             const std::vector<double>& delta_grid,
                             const SweepOptions& options) {
    if (sizes.empty())
        throw std::invalid_argument("finite_size_study: size list is empty");
    for (int n : sizes)
        if (n < 4 || n % 2 != 0)
            throw std::invalid_argument("finite_size_study: sizes must be even and >= 4");
    check_grid(delta_grid, "finite_size_study");

    std::vector<SweepTable> partial(sizes.size());
    SweepOptions inner = options;
    inner.threads = 1;  // parallelism is spent across sizes here
    parallel_for(sizes.size(), options.threads, [&](std::size_t i) {
        partial[i] = run_sweep(sizes[i], delta_grid, SweepMethod::Bethe, inner);
    });

    SweepTable merged;
    merged.provenance = SweepMethod::Bethe;
    for (const SweepTable& t : partial)
        merged.rows.insert(merged.rows.end(), t.rows.begin(), t.rows.end());
    std::sort(merged.rows.begin(), merged.rows.end(),
              [](const ObservablePoint& a, const ObservablePoint& b) {
                  if (a.delta != b.delta) return a.delta < b.delta;
                  return a.n_sites < b.n_sites;
              });
    return merged;
}

std::vector<EvenOddRow> even_odd_study(int n_max, double delta) {
    if (n_max < 2 || n_max > 15)
        throw std::invalid_argument("even_odd_study: n_max must be in [2, 15]");
    std::vector<EvenOddRow> rows;
    rows.reserve(static_cast<std::size_t>(n_max - 1));
    for (int n = 2; n <= n_max; ++n) {
        const GroundStateResult g = ground_state_ed(n, delta);
        EvenOddRow row;
        row.n_sites = n;
        row.energy = g.energy;
        row.degenerate = g.degeneracy_flag;
        row.concurrence = wootters_concurrence(translation_averaged_rdm(g));
        rows.push_back(row);
    }
    return rows;
}

namespace {

std::string csv_number(double v) { return detail::format_double(v, 12); }

void append_point_row(std::string& out, const ObservablePoint& p) {
    out += csv_number(p.delta);
    out += ',';
    out += (p.n_sites == kInfiniteChain) ? "inf" : std::to_string(p.n_sites);
    if (p.converged) {
        out += ',' + csv_number(p.energy_per_site);
        out += ',' + csv_number(p.gzz);
        out += ',' + csv_number(p.concurrence);
    } else {
        out += ",,,";
    }
    out += ',';
    if (p.xi) out += csv_number(*p.xi);
    out += '\n';
}

} // namespace

std::string sweep_csv(const SweepTable& table) {
    std::string out = "delta,n_sites,energy_per_site,gzz,concurrence,xi\n";
    for (const ObservablePoint& p : table.rows) append_point_row(out, p);
    return out;
}

std::string figure_csv(int figure_id, const FigureParams& params) {
    switch (figure_id) {
        case 1: {
            const auto grid = make_grid(params.delta_lo, params.delta_hi, params.delta_step);
            const SweepTable t = run_sweep(params.n_sites, grid, SweepMethod::Bethe, params.sweep);
            std::string out = "delta,concurrence,energy_per_site,gzz\n";
            for (const ObservablePoint& p : t.rows) {
                out += csv_number(p.delta) + ',' + csv_number(p.concurrence) + ','
                     + csv_number(p.energy_per_site) + ',' + csv_number(p.gzz) + '\n';
            }
            return out;
        }
        case 2: {
            const auto nus = make_grid(params.nu_lo, params.nu_hi, params.nu_step);
            std::vector<double> grid;
            grid.reserve(nus.size());
            for (double nu : nus) grid.push_back(std::cosh(2.0 * nu));
            const SweepTable t = run_sweep(params.n_sites, grid, SweepMethod::Bethe, params.sweep);
            std::string out = "delta,inv_xi,concurrence\n";
            for (const ObservablePoint& p : t.rows) {
                out += csv_number(p.delta) + ',' + csv_number(p.xi ? 1.0 / *p.xi : 0.0) + ','
                     + csv_number(p.concurrence) + '\n';
            }
            return out;
        }
        case 3: {
            const auto nus = make_grid(params.nu_lo, params.nu_hi, params.nu_step);
            std::vector<double> grid;
            grid.reserve(nus.size());
            for (double nu : nus) grid.push_back(std::cosh(2.0 * nu));
            const SweepTable t = finite_size_study(params.sizes, grid, params.sweep);
            std::string out = "n_sites,delta,xi,concurrence\n";
            for (const ObservablePoint& p : t.rows) {
                out += std::to_string(p.n_sites) + ',' + csv_number(p.delta) + ','
                     + (p.xi ? csv_number(*p.xi) : std::string()) + ','
                     + csv_number(p.concurrence) + '\n';
            }
            return out;
        }
        default:
            throw std::invalid_argument("figure_csv: figure id must be 1, 2 or 3");
    }
}

void write_figure_csv(int figure_id, const FigureParams& params,
                      const std::string& path) {
    const std::string body = figure_csv(figure_id, params);
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw std::runtime_error("write_figure_csv: cannot open '" + path + "' for writing");
    out << body;
    if (!out.good())
        throw std::runtime_error("write_figure_csv: write to '" + path + "' failed");
}

} // namespace xxz
