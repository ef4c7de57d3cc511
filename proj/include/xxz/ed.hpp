#pragma once

#include <Eigen/Dense>
#include <Eigen/SparseCore>

#include <complex>
#include <cstdint>
#include <vector>

namespace xxz {

// Basis of one total-S^z sector of the N-site chain.  Bit l of a pattern set
// means a down spin on site l; patterns are stored sorted ascending.
// sz_twice is 2 S^z_total and must have the parity of n_sites.
struct SectorBasis {
    int n_sites = 0;
    int sz_twice = 0;
    std::vector<std::uint32_t> states;

    int n_down() const { return (n_sites - sz_twice) / 2; }
    std::size_t dimension() const { return states.size(); }
    std::size_t index_of(std::uint32_t pattern) const;
};

// Requires 2 <= n_sites <= 20 and |sz_twice| <= n_sites with matching parity.
SectorBasis make_sector_basis(int n_sites, int sz_twice);

// H = sum_l [ sx_l sx_{l+1} + sy_l sy_{l+1} + delta sz_l sz_{l+1} ] with
// periodic closure, restricted to the sector.  Off-diagonal flip elements are
// 2, diagonal elements are delta * (+-1 per bond); for N = 2 both ring bonds
// coincide and every element is doubled.
Eigen::SparseMatrix<double> build_xxz_hamiltonian(int n_sites, double delta,
                                                  const SectorBasis& sector);

// Same operator on the full 2^N space, basis index = bit pattern.
Eigen::SparseMatrix<double> build_xxz_hamiltonian_full(int n_sites, double delta);

// Two-site generator T on span{|ud>, |du>}: [[-1/q, 1], [1, -q]].
Eigen::Matrix2d temperley_lieb_block(double q);

// N delta * identity + 2 sum_l T_{l,l+1} on the full 2^N space; requires
// delta >= 1 so q = delta + sqrt(delta^2 - 1) is real.  Coincides entrywise
// with build_xxz_hamiltonian_full.
Eigen::SparseMatrix<double> build_tl_hamiltonian(int n_sites, double delta);

struct GroundStateResult {
    SectorBasis basis;
    double energy = 0.0;
    double second_energy = 0.0;   // next eigenvalue inside the sector
    Eigen::VectorXd vector;       // normalised; largest-magnitude entry positive
    bool degeneracy_flag = false; // second_energy - energy < 1e-8
    double residual = 0.0;        // || H v - E v ||_2
};

// Lowest eigenpair in the S^z = 0 sector (even N) or the 2 S^z = +1 sector
// (odd N), where the global minimum lies for delta >= 0.  Dense solve up to
// sector dimension 1000, restarted Lanczos with full reorthogonalisation and
// a fixed deterministic start beyond that.
GroundStateResult ground_state_ed(int n_sites, double delta);

// Reduced state of two qubits in the basis |uu>, |ud>, |du>, |dd>.
struct TwoQubitDensityMatrix {
    Eigen::Matrix4cd entries = Eigen::Matrix4cd::Zero();

    double u_plus() const { return entries(0, 0).real(); }
    double w1() const { return entries(1, 1).real(); }
    double w2() const { return entries(2, 2).real(); }
    double u_minus() const { return entries(3, 3).real(); }
    std::complex<double> z() const { return entries(1, 2); }
};

// Partial trace onto the bond (site, site+1), 1-based, periodic.  When the
// ground state is degenerate (degeneracy_flag), the result depends on the
// deterministic eigenvector choice above; translation_averaged_rdm restores
// a translation-invariant bond state in that case.
TwoQubitDensityMatrix two_site_rdm(const GroundStateResult& g, int site);
TwoQubitDensityMatrix translation_averaged_rdm(const GroundStateResult& g);

// Concurrence from the spin-flipped spectrum: eigenvalues of
// rho (sy x sy) rho* (sy x sy), square roots sorted descending, then
// max(0, s1 - s2 - s3 - s4).
double wootters_concurrence(const TwoQubitDensityMatrix& rho);

// Same quantity through the closed form 2 max(0, |z| - sqrt(u+ u-)) valid
// for states commuting with parity sz x sz.
double concurrence_closed_form(const TwoQubitDensityMatrix& rho);

// <sz_l sz_{l+1}> averaged over the ring (exact translation average).
double gzz_direct(const GroundStateResult& g);

// Wootters concurrence of the translation-averaged bond state.
double ed_concurrence(int n_sites, double delta);

} // namespace xxz
