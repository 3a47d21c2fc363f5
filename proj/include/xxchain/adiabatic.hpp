#ifndef XXCHAIN_ADIABATIC_HPP
#define XXCHAIN_ADIABATIC_HPP

#include "xxchain/bound.hpp"
#include "xxchain/lattice.hpp"

#include <vector>

namespace xxchain {

enum class SweepShape { linear, smoothstep };

// Counter-sweeping defect strengths: alpha1 descends alpha_max -> alpha_min,
// alpha2 = alpha1 mirrored in time, both passing through crossing_alpha at
// t = T/2. Each half is interpolated by the chosen shape; smoothstep has zero
// slope at the endpoints and at the crossing.
struct Schedule {
    double duration = 0.0;
    double alpha_max = 0.0;
    double alpha_min = 0.0;
    double crossing_alpha = 0.0;
    SweepShape shape = SweepShape::smoothstep;

    double alpha1(double t) const;
    double alpha2(double t) const { return alpha1(duration - t); }
    double alpha1_dot(double t) const;
    double alpha2_dot(double t) const { return -alpha1_dot(duration - t); }
};

Schedule make_schedule(SweepShape shape, double alpha_max, double alpha_min, double duration,
                       double crossing_alpha);

// Instantaneous protection gap of the ground level: the splitting to the
// second discrete level when it exists, otherwise the distance to the lower
// band edge (the nearest excitation is then a spin wave).
struct GapInfo {
    double gap = 0.0;
    bool is_splitting = false; // false: measured to the band edge
};

GapInfo instantaneous_gap(const DefectConfig& defects, double omega0);

struct SweepResult {
    Eigen::VectorXd sample_times;
    Eigen::MatrixXcd trajectory;  // sampled states, column per sample
    double fidelity = 0.0;        // |<l2|psi(T)>|^2
    double gs_fidelity = 0.0;     // overlap^2 with the final instantaneous ground state
    double max_adiabatic_param = 0.0;
    double min_gap = 0.0;
    double norm_drift = 0.0;
    State final_state;
};

struct SweepOptions {
    double dt = 0.005;
    bool self_check = true; // step-halving probe on the final fidelity
    int samples = 200;      // trajectory/diagnostic sampling resolution
};

// Integrates the single-excitation Schroedinger equation with the scheduled
// defect strengths (classical 4th-order one-step method on H(t), with the
// uniform omega0 phase factored out exactly). Throws numerical_error when
// halving dt moves the fidelity by more than 1e-6.
SweepResult propagate_time_dependent(const ChainSpec& spec, const DefectConfig& sites,
                                     const Schedule& schedule, const State& initial,
                                     const SweepOptions& opts = {});

// max over sampled t of |<psi2| dH/dt |psi1>| / E21^2 between the two
// instantaneous discrete levels; samples where fewer than two levels exist
// (near the crossing at small crossing_alpha) are excluded and counted.
struct AdiabaticityMetric {
    double value = 0.0;
    int excluded_samples = 0;
};

AdiabaticityMetric adiabaticity_metric(const Schedule& schedule, const DefectConfig& sites,
                                       double omega0, int samples = 400);

// Ground-state amplitude profile of the schedule endpoint (or any frozen
// configuration), embedded in the finite chain; the natural initial state
// for a sweep.
State embedded_ground_state(const ChainSpec& spec, const DefectConfig& defects);

// Retention of an excitation parked at site r under frozen final fields:
// 1 - max over the trailing fifth of [0, t_max] of |<r|psi(t)>|^2, starting
// from |r>. Decreases as the final local field grows.
double decoupling_check(const ChainSpec& spec, const DefectConfig& final_defects, int r,
                        double t_max = 250.0);

} // namespace xxchain

#endif
