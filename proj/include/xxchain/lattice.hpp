#ifndef XXCHAIN_LATTICE_HPP
#define XXCHAIN_LATTICE_HPP

#include "xxchain/record.hpp"
#include "xxchain/types.hpp"

#include <Eigen/Dense>

namespace xxchain {

// State in the one-flipped-spin sector: amplitudes indexed like the chain
// (vector index = site + (n_sites-1)/2).
using State = Eigen::VectorXcd;

// Single-particle Hamiltonian matrix: diagonal omega0 with -alpha_i/2 at the
// defect sites, hopping -1/2 between neighbours (and across the seam for a
// ring). Defects outside the chain are a configuration error.
Eigen::MatrixXd build_hamiltonian(const ChainSpec& spec, const DefectConfig& defects);

struct Spectrum {
    Eigen::VectorXd energies; // ascending
    Eigen::MatrixXd states;   // orthonormal columns
};

// Dense symmetric eigensolve; uses the tridiagonal fast path when the matrix
// has no couplings beyond nearest neighbours (open chain). Throws on
// non-symmetric input.
Spectrum diagonalize(const Eigen::MatrixXd& h);

// e^{-iHt} |initial> on a grid of times, via the spectral decomposition.
// Column k of the result is the state at times[k].
Eigen::MatrixXcd propagate(const Spectrum& spectrum, const State& initial,
                           const Eigen::VectorXd& times);

// Matrix elements <r| e^{-iHt} |s> over a time grid (cheap row of propagate).
Eigen::VectorXcd propagator_element(const Spectrum& spectrum, int s_index, int r_index,
                                    const Eigen::VectorXd& times);

// Pairwise concurrence 2 |b_i b_j| of a normalized single-excitation state.
double concurrence_pair(const State& state, int i_index, int j_index);

// Time before which a finite-chain simulation cannot tell the boundary from
// an infinite chain: shortest seam/wall round trip from the active sites,
// at unit front speed.
double oracle_horizon(const ChainSpec& spec, const DefectConfig& defects, int sender,
                      int receiver);

// Transfer concurrence C_r(t) = |<r| e^{-iHt} |s>| on the finite chain.
// Sets horizon_ok = false when max(times) exceeds the boundary horizon.
TransferRecord transfer_concurrence_oracle(const ChainSpec& spec, const DefectConfig& defects,
                                           int sender, int receiver,
                                           const Eigen::VectorXd& times);

} // namespace xxchain

#endif
