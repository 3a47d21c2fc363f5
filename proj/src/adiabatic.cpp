#include "xxchain/adiabatic.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace xxchain {

namespace {

const cplx kI(0.0, 1.0);

double shape_s(SweepShape shape, double x) {
    x = std::clamp(x, 0.0, 1.0);
    return shape == SweepShape::linear ? x : x * x * (3.0 - 2.0 * x);
}

double shape_ds(SweepShape shape, double x) {
    if (x < 0.0 || x > 1.0) return 0.0;
    return shape == SweepShape::linear ? 1.0 : 6.0 * x * (1.0 - x);
}

// -i (H(t) - omega0) phi with the nearest-neighbour stencil; defect pulls
// are applied on top. Keeping omega0 out leaves only the band dynamics and
// improves the integrator's effective spectral radius.
void apply_rhs(const ChainSpec& spec, const DefectConfig& sites, double a1, double a2,
               const Eigen::VectorXcd& phi, Eigen::VectorXcd& out) {
    const int n = spec.n_sites;
    out[0] = -0.5 * phi[1];
    out[n - 1] = -0.5 * phi[n - 2];
    for (int i = 1; i + 1 < n; ++i) out[i] = -0.5 * (phi[i - 1] + phi[i + 1]);
    if (spec.boundary == Boundary::ring) {
        out[0] += -0.5 * phi[n - 1];
        out[n - 1] += -0.5 * phi[0];
    }
    out[spec.index(sites.l1)] -= 0.5 * a1 * phi[spec.index(sites.l1)];
    out[spec.index(sites.l2)] -= 0.5 * a2 * phi[spec.index(sites.l2)];
    out *= -kI;
}

struct RawSweep {
    Eigen::VectorXd sample_times;
    Eigen::MatrixXcd trajectory;
    Eigen::VectorXcd final_phi;
    double norm_drift = 0.0;
};

RawSweep integrate(const ChainSpec& spec, const DefectConfig& sites, const Schedule& sch,
                   const State& initial, double dt, int samples) {
    const int n = spec.n_sites;
    const long steps = std::max(1L, std::lround(std::ceil(sch.duration / dt)));
    const double h = sch.duration / static_cast<double>(steps);
    samples = static_cast<int>(std::min<long>(samples, steps));

    RawSweep out;
    out.sample_times.resize(samples + 1);
    out.trajectory.resize(n, samples + 1);

    Eigen::VectorXcd phi = initial;
    Eigen::VectorXcd k1(n), k2(n), k3(n), k4(n), tmp(n);
    long next_sample = 0;
    for (long step = 0; step <= steps; ++step) {
        const double t = h * static_cast<double>(step);
        if (step * samples >= next_sample * steps) {
            out.sample_times[next_sample] = t;
            // the uniform omega0 phase was factored out of the integration
            out.trajectory.col(next_sample) = std::exp(-kI * (spec.omega0 * t)) * phi;
            out.norm_drift = std::max(out.norm_drift, std::abs(phi.norm() - 1.0));
            ++next_sample;
        }
        if (step == steps) break;

        const double tm = t + 0.5 * h, te = t + h;
        apply_rhs(spec, sites, sch.alpha1(t), sch.alpha2(t), phi, k1);
        tmp = phi + (0.5 * h) * k1;
        apply_rhs(spec, sites, sch.alpha1(tm), sch.alpha2(tm), tmp, k2);
        tmp = phi + (0.5 * h) * k2;
        apply_rhs(spec, sites, sch.alpha1(tm), sch.alpha2(tm), tmp, k3);
        tmp = phi + h * k3;
        apply_rhs(spec, sites, sch.alpha1(te), sch.alpha2(te), tmp, k4);
        phi += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    }
    out.final_phi = std::exp(-kI * (spec.omega0 * sch.duration)) * phi;
    return out;
}

} // namespace

double Schedule::alpha1(double t) const {
    const double half = duration / 2.0;
    if (t <= half) {
        const double x = shape_s(shape, t / half);
        return alpha_max + (crossing_alpha - alpha_max) * x;
    }
    const double x = shape_s(shape, (t - half) / half);
    return crossing_alpha + (alpha_min - crossing_alpha) * x;
}

double Schedule::alpha1_dot(double t) const {
    const double half = duration / 2.0;
    if (t <= half)
        return (crossing_alpha - alpha_max) * shape_ds(shape, t / half) / half;
    return (alpha_min - crossing_alpha) * shape_ds(shape, (t - half) / half) / half;
}

Schedule make_schedule(SweepShape shape, double alpha_max, double alpha_min, double duration,
                       double crossing_alpha) {
    if (!(alpha_max > crossing_alpha && crossing_alpha > alpha_min && alpha_min > 0.0))
        throw std::invalid_argument(
            "make_schedule: need alpha_max > crossing_alpha > alpha_min > 0");
    if (!(duration > 0.0))
        throw std::invalid_argument("make_schedule: duration must be positive");
    Schedule s;
    s.duration = duration;
    s.alpha_max = alpha_max;
    s.alpha_min = alpha_min;
    s.crossing_alpha = crossing_alpha;
    s.shape = shape;
    return s;
}

GapInfo instantaneous_gap(const DefectConfig& defects, double omega0) {
    const auto levels = find_bound_states(defects, omega0);
    GapInfo g;
    if (levels.size() >= 2) {
        g.gap = levels[1].energy - levels[0].energy;
        g.is_splitting = true;
    } else if (levels.size() == 1) {
        // distance from the single level to its nearest band edge
        const double x = levels[0].x_loc;
        g.gap = x < 0 ? -1.0 - x : x - 1.0;
        g.is_splitting = false;
    }
    return g;
}

State embedded_ground_state(const ChainSpec& spec, const DefectConfig& defects) {
    spec.validate();
    const auto levels = find_bound_states(defects, spec.omega0);
    if (levels.empty())
        throw protocol_error("embedded_ground_state: no discrete level to start from");
    const BoundState& gs = levels.front();
    State psi = State::Zero(spec.n_sites);
    for (int i = 0; i < gs.b.size(); ++i) {
        const int site = gs.window_first + i;
        if (spec.contains(site)) psi[spec.index(site)] = gs.b[i];
    }
    psi /= psi.norm();
    return psi;
}

SweepResult propagate_time_dependent(const ChainSpec& spec, const DefectConfig& sites,
                                     const Schedule& schedule, const State& initial,
                                     const SweepOptions& opts) {
    spec.validate();
    if (std::abs(initial.norm() - 1.0) > 1e-10)
        throw std::invalid_argument("propagate_time_dependent: initial state not normalized");
    if (!spec.contains(sites.l1) || !spec.contains(sites.l2))
        throw std::invalid_argument("propagate_time_dependent: defect site outside the chain");

    const RawSweep raw = integrate(spec, sites, schedule, initial, opts.dt, opts.samples);

    DefectConfig final_cfg = sites;
    final_cfg.alpha1 = schedule.alpha1(schedule.duration);
    final_cfg.alpha2 = schedule.alpha2(schedule.duration);
    const State gs_final = embedded_ground_state(spec, final_cfg);

    auto fidelities = [&](const Eigen::VectorXcd& phi, double& site_f, double& gs_f) {
        site_f = std::norm(phi[spec.index(sites.l2)]);
        gs_f = std::norm(gs_final.dot(phi));
    };

    SweepResult res;
    res.sample_times = raw.sample_times;
    res.trajectory = raw.trajectory;
    res.final_state = raw.final_phi;
    res.norm_drift = raw.norm_drift;
    fidelities(raw.final_phi, res.fidelity, res.gs_fidelity);

    if (opts.self_check) {
        const RawSweep fine = integrate(spec, sites, schedule, initial, opts.dt / 2.0, 2);
        double site_f = 0, gs_f = 0;
        fidelities(fine.final_phi, site_f, gs_f);
        const double drift =
            std::max(std::abs(site_f - res.fidelity), std::abs(gs_f - res.gs_fidelity));
        if (drift > 1e-6)
            throw numerical_error("propagate_time_dependent: step-size self-check failed, "
                                  "fidelity drift " +
                                  std::to_string(drift) + "; retry with dt <= " +
                                  std::to_string(opts.dt / 2.0));
    }

    const auto metric = adiabaticity_metric(schedule, sites, spec.omega0);
    res.max_adiabatic_param = metric.value;

    double min_gap = std::numeric_limits<double>::infinity();
    for (int i = 0; i <= 100; ++i) {
        DefectConfig cfg = sites;
        const double t = schedule.duration * i / 100.0;
        cfg.alpha1 = schedule.alpha1(t);
        cfg.alpha2 = schedule.alpha2(t);
        min_gap = std::min(min_gap, instantaneous_gap(cfg, spec.omega0).gap);
    }
    res.min_gap = min_gap;
    return res;
}

AdiabaticityMetric adiabaticity_metric(const Schedule& schedule, const DefectConfig& sites,
                                       double omega0, int samples) {
    AdiabaticityMetric out;
    for (int i = 1; i < samples; ++i) {
        const double t = schedule.duration * i / samples;
        DefectConfig cfg = sites;
        cfg.alpha1 = schedule.alpha1(t);
        cfg.alpha2 = schedule.alpha2(t);
        const auto levels = find_bound_states(cfg, omega0);
        if (levels.size() < 2) {
            ++out.excluded_samples;
            continue;
        }
        const double e21 = levels[1].energy - levels[0].energy;
        const double me =
            0.5 * schedule.alpha1_dot(t) * levels[1].amplitude(cfg.l1) * levels[0].amplitude(cfg.l1) +
            0.5 * schedule.alpha2_dot(t) * levels[1].amplitude(cfg.l2) * levels[0].amplitude(cfg.l2);
        out.value = std::max(out.value, std::abs(me) / (e21 * e21));
    }
    return out;
}

double decoupling_check(const ChainSpec& spec, const DefectConfig& final_defects, int r,
                        double t_max) {
    spec.validate();
    if (!spec.contains(r))
        throw std::invalid_argument("decoupling_check: site outside the chain");
    const Spectrum sp = diagonalize(build_hamiltonian(spec, final_defects));
    const int ri = spec.index(r);
    const int nt = 2000;
    Eigen::VectorXd times(nt);
    for (int k = 0; k < nt; ++k) times[k] = 0.8 * t_max + 0.2 * t_max * k / (nt - 1);
    const Eigen::VectorXcd amp = propagator_element(sp, ri, ri, times);
    double peak = 0.0;
    for (int k = 0; k < nt; ++k) peak = std::max(peak, std::norm(amp[k]));
    return 1.0 - peak;
}

} // namespace xxchain
