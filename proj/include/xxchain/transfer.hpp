#ifndef XXCHAIN_TRANSFER_HPP
#define XXCHAIN_TRANSFER_HPP

#include "xxchain/bound.hpp"
#include "xxchain/record.hpp"

#include <optional>
#include <vector>

namespace xxchain {

inline constexpr int kDefaultQuadNodes = 4096;

// Stationary scattering state of the band at parameter theta in (-pi, pi):
// plane-wave magnon plus defect-scattered corrections (distorted spin wave).
struct BandAmplitude {
    double theta = 0.0;
    double energy = 0.0; // omega0 - cos(theta)
    int window_first = 0;
    Eigen::VectorXcd g; // <n|psi_theta>, 1/sqrt(2 pi) normalization
};

// g_n over [window_lo, window_hi]. theta = 0, +-pi are band edges and rejected.
BandAmplitude band_amplitude(const DefectConfig& defects, double omega0, double theta,
                             int window_lo, int window_hi);

struct TransferOptions {
    int quad_nodes = kDefaultQuadNodes;
    bool self_check = true; // node-doubling drift probe on a coarse time subgrid
};

// Transfer amplitude through the infinite chain,
//   f_{s->r}(t) = sum_loc e^{-i E_loc t} b_r b_s
//              + int dtheta e^{-i E(theta) t} g_r(theta) g_s(theta)*,
// with the band integral done by a midpoint rule on a uniform theta grid
// (periodic integrand, endpoints excluded). The discrete sum over localized
// levels uses find_bound_states.
TransferRecord transfer_amplitude(const DefectConfig& defects, double omega0, int sender,
                                  int receiver, const Eigen::VectorXd& times,
                                  const TransferOptions& opts = {});

// Bound + band weight of |site>: sum_loc b_site^2 + int dtheta |g_site|^2.
// Equals 1 when the scattering basis is complete.
double state_completeness(const DefectConfig& defects, double omega0, int site,
                          int quad_nodes = kDefaultQuadNodes);

// Dominant oscillation period of a uniformly sampled series, from the first
// autocorrelation peak with parabolic refinement. Requires >= 2 periods of
// data; returns 0 when no peak is found.
double measure_period(const Eigen::VectorXd& times, const Eigen::VectorXd& series);

struct RabiReport {
    double omega_r = 0.0;      // splitting E_loc2 - E_loc1
    double period = 0.0;       // measured period of C_{l1}(t)
    double max_c_receiver = 0.0;
    TransferRecord c_l1;       // sender = receiver = l1
    TransferRecord c_l2;       // receiver = l2
    Eigen::VectorXd predicted_c_l1; // |cos(omega_r t / 2)|
    Eigen::VectorXd predicted_c_l2; // |sin(omega_r t / 2)|
};

// Two-level exchange between the defects with the excitation launched at l1.
// Throws protocol_error unless exactly two discrete levels exist. The
// harmonic approximants run at half the splitting: two-level interference
// gives C_{l1} ~ |cos(E21 t / 2)| with period 2 pi / E21.
RabiReport rabi_analysis(const DefectConfig& defects, double omega0,
                         const Eigen::VectorXd& times, const TransferOptions& opts = {});

struct SiteTimeMap {
    int window_first = 0;
    Eigen::VectorXd times;
    Eigen::MatrixXd c; // (site, time) -> C_n(t)
};

// C_n(t) = |f_{s->n}(t)| for every site in the window.
SiteTimeMap entanglement_map(const DefectConfig& defects, double omega0, int sender,
                             const Eigen::VectorXd& times, int window_lo, int window_hi,
                             const TransferOptions& opts = {});

struct TrapReport {
    Eigen::VectorXd envelope;  // non-increasing trapped-concurrence envelope
    double residual = 0.0;     // mean envelope over the final 20%
    double parabola_coeff = 0.0; // t^2 coefficient of the short-time fit
    double parabola_c0 = 0.0;
    double fit_rms = 0.0;      // rms misfit of the short-time parabola
};

// Envelope analysis of a trapped-concurrence record. x_demod is the reduced
// energy of the discrete level whose phase factor drives the superimposed
// oscillation (the symmetric one). Demodulating by that phase splits the
// amplitude into a static trapped weight c plus the decaying band remnant;
// the envelope is c + |h - c|. Pass the level's squared sender amplitude as
// trapped_weight when known (exact c); otherwise it is estimated from the
// late-time mean, which needs a record long enough for the band to dephase.
// The short-time fit is c0 + c2 t^2 over the initial 10% of the record.
TrapReport trap_metrics(const TransferRecord& record, double x_demod,
                        double trapped_weight = -1.0);

struct GapScaling {
    std::vector<std::pair<int, double>> e21; // (d, splitting)
    std::vector<int> excluded;               // d values with < 2 levels
    double slope = 0.0;                      // of ln E21 vs d
    double intercept = 0.0;
    double r2 = 0.0;
};

// Splitting of the two discrete levels versus defect distance at equal
// strengths, with a linear fit of ln E21 against d.
GapScaling gap_scaling(double alpha, const std::vector<int>& d_range, double omega0 = 2.0);

} // namespace xxchain

#endif
