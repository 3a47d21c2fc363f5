#include "xxchain/transfer.hpp"

#include <algorithm>
#include <cmath>

namespace xxchain {

namespace {

const cplx kI(0.0, 1.0);

// Per-node quadrature data: g_n(theta) = (e^{i n theta}
//   + c1 e^{i theta0 |n-l1|} + c2 e^{i theta0 |n-l2|}) / sqrt(2 pi),
// where c_i collects the retarded propagator prefactor and the T-matrix
// acting on the incident plane wave.
struct Node {
    double theta = 0.0;
    double theta0 = 0.0; // |theta|
    double energy = 0.0;
    double weight = 0.0;
    cplx c1, c2;
};

std::vector<Node> quad_nodes_for(const DefectConfig& defects, double omega0, int m) {
    if (m < 8)
        throw std::invalid_argument("quadrature: need at least 8 nodes");
    std::vector<Node> nodes(m);
    const double h = 2.0 * M_PI / m;
    for (int k = 0; k < m; ++k) {
        Node& nd = nodes[k];
        nd.theta = -M_PI + (k + 0.5) * h;
        nd.theta0 = std::abs(nd.theta);
        nd.energy = omega0 - std::cos(nd.theta);
        nd.weight = h;
        const EnergyPoint pt = energy_point(-std::cos(nd.theta0));
        const ScatteringData sc = scattering_data(defects, pt);
        const cplx t11 = sc.t1 / sc.denom;
        const cplx t22 = sc.t2 / sc.denom;
        const cplx t12 = sc.t1 * sc.t2 * sc.g12 / sc.denom;
        const cplx pre = -kI / std::sin(nd.theta0);
        const cplx e1 = std::exp(kI * (nd.theta * defects.l1));
        const cplx e2 = std::exp(kI * (nd.theta * defects.l2));
        nd.c1 = pre * (t11 * e1 + t12 * e2);
        nd.c2 = pre * (t12 * e1 + t22 * e2);
    }
    return nodes;
}

cplx g_site(const Node& nd, const DefectConfig& defects, int n) {
    const cplx pw = std::exp(kI * (nd.theta * n));
    const cplx s1 = nd.c1 * std::exp(kI * (nd.theta0 * std::abs(n - defects.l1)));
    const cplx s2 = nd.c2 * std::exp(kI * (nd.theta0 * std::abs(n - defects.l2)));
    return (pw + s1 + s2) / std::sqrt(2.0 * M_PI);
}

// f(t) for one pair, given weighted band products and the discrete levels.
Eigen::VectorXcd assemble_series(const std::vector<BoundState>& levels, int s, int r,
                                 const Eigen::ArrayXd& band_energy,
                                 const Eigen::ArrayXcd& band_product,
                                 const Eigen::VectorXd& times) {
    Eigen::VectorXcd f(times.size());
    for (Eigen::Index k = 0; k < times.size(); ++k) {
        const double t = times[k];
        cplx val = (band_product * (-kI * t * band_energy).exp()).sum();
        for (const auto& lvl : levels)
            val += std::exp(-kI * (lvl.energy * t)) * lvl.amplitude(r) * lvl.amplitude(s);
        f[k] = val;
    }
    return f;
}

struct BandPair {
    Eigen::ArrayXd energy;
    Eigen::ArrayXcd product; // weight * g_r conj(g_s)
};

BandPair band_pair(const DefectConfig& defects, double omega0, int s, int r, int m) {
    const auto nodes = quad_nodes_for(defects, omega0, m);
    BandPair bp;
    bp.energy.resize(m);
    bp.product.resize(m);
    for (int k = 0; k < m; ++k) {
        bp.energy[k] = nodes[k].energy;
        bp.product[k] =
            nodes[k].weight * g_site(nodes[k], defects, r) * std::conj(g_site(nodes[k], defects, s));
    }
    return bp;
}

double linear_fit_r2(const std::vector<double>& xs, const std::vector<double>& ys, double& slope,
                     double& intercept) {
    const double n = static_cast<double>(xs.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (size_t i = 0; i < xs.size(); ++i) {
        sx += xs[i];
        sy += ys[i];
        sxx += xs[i] * xs[i];
        sxy += xs[i] * ys[i];
    }
    slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    intercept = (sy - slope * sx) / n;
    double ss_res = 0, ss_tot = 0;
    const double mean = sy / n;
    for (size_t i = 0; i < xs.size(); ++i) {
        const double fit = slope * xs[i] + intercept;
        ss_res += (ys[i] - fit) * (ys[i] - fit);
        ss_tot += (ys[i] - mean) * (ys[i] - mean);
    }
    return ss_tot > 0 ? 1.0 - ss_res / ss_tot : 1.0;
}

} // namespace

BandAmplitude band_amplitude(const DefectConfig& defects, double omega0, double theta,
                             int window_lo, int window_hi) {
    defects.validate();
    if (theta == 0.0 || std::abs(theta) >= M_PI)
        throw std::domain_error("band_amplitude: theta at a band edge");
    if (window_hi < window_lo)
        throw std::invalid_argument("band_amplitude: empty window");

    Node nd;
    nd.theta = theta;
    nd.theta0 = std::abs(theta);
    nd.energy = omega0 - std::cos(theta);
    const EnergyPoint pt = energy_point(-std::cos(nd.theta0));
    const ScatteringData sc = scattering_data(defects, pt);
    const cplx t11 = sc.t1 / sc.denom;
    const cplx t22 = sc.t2 / sc.denom;
    const cplx t12 = sc.t1 * sc.t2 * sc.g12 / sc.denom;
    const cplx pre = -kI / std::sin(nd.theta0);
    const cplx e1 = std::exp(kI * (theta * defects.l1));
    const cplx e2 = std::exp(kI * (theta * defects.l2));
    nd.c1 = pre * (t11 * e1 + t12 * e2);
    nd.c2 = pre * (t12 * e1 + t22 * e2);

    BandAmplitude ba;
    ba.theta = theta;
    ba.energy = nd.energy;
    ba.window_first = window_lo;
    ba.g.resize(window_hi - window_lo + 1);
    for (int n = window_lo; n <= window_hi; ++n)
        ba.g[n - window_lo] = g_site(nd, defects, n);
    return ba;
}

TransferRecord transfer_amplitude(const DefectConfig& defects, double omega0, int sender,
                                  int receiver, const Eigen::VectorXd& times,
                                  const TransferOptions& opts) {
    defects.validate();
    const auto levels = find_bound_states(defects, omega0);
    const BandPair bp = band_pair(defects, omega0, sender, receiver, opts.quad_nodes);

    TransferRecord rec;
    rec.sender = sender;
    rec.receiver = receiver;
    rec.omega0 = omega0;
    rec.times = times;
    rec.method = Method::analytic;
    rec.f = assemble_series(levels, sender, receiver, bp.energy, bp.product, times);
    rec.concurrence = rec.f.cwiseAbs();

    if (opts.self_check && times.size() > 0) {
        const Eigen::Index stride = std::max<Eigen::Index>(1, times.size() / 64);
        Eigen::VectorXd coarse(((times.size() - 1) / stride) + 1);
        for (Eigen::Index k = 0, j = 0; k < times.size(); k += stride, ++j) coarse[j] = times[k];
        const BandPair bp2 = band_pair(defects, omega0, sender, receiver, 2 * opts.quad_nodes);
        const Eigen::VectorXcd ref =
            assemble_series(levels, sender, receiver, bp2.energy, bp2.product, coarse);
        double drift = 0.0;
        for (Eigen::Index k = 0, j = 0; k < times.size(); k += stride, ++j)
            drift = std::max(drift, std::abs(rec.concurrence[k] - std::abs(ref[j])));
        rec.selfcheck_drift = drift;
        rec.selfcheck_ok = drift <= 1e-4;
    }
    return rec;
}

double state_completeness(const DefectConfig& defects, double omega0, int site, int quad_nodes) {
    const auto levels = find_bound_states(defects, omega0);
    double total = 0.0;
    for (const auto& lvl : levels) total += lvl.amplitude(site) * lvl.amplitude(site);
    const auto nodes = quad_nodes_for(defects, omega0, quad_nodes);
    for (const auto& nd : nodes) total += nd.weight * std::norm(g_site(nd, defects, site));
    return total;
}

double measure_period(const Eigen::VectorXd& times, const Eigen::VectorXd& series) {
    const Eigen::Index n = times.size();
    if (n < 16) return 0.0;
    const double dt = times[1] - times[0];
    Eigen::VectorXd s = series.array() - series.mean();
    const Eigen::Index jmax = n / 2;
    Eigen::VectorXd r(jmax);
    for (Eigen::Index j = 0; j < jmax; ++j) {
        double acc = 0.0;
        for (Eigen::Index i = 0; i + j < n; ++i) acc += s[i] * s[i + j];
        r[j] = acc / static_cast<double>(n - j);
    }
    // first dip below zero, then the dominant peak after it; keep clear of
    // the window end, where clipped peaks distort the maximum
    Eigen::Index j0 = 1;
    while (j0 < jmax && r[j0] > 0) ++j0;
    if (j0 >= jmax - 2) return 0.0;
    const Eigen::Index jcap = jmax - std::max<Eigen::Index>(2, jmax / 50);
    Eigen::Index jpk = j0;
    for (Eigen::Index j = j0; j < jcap; ++j)
        if (r[j] > r[jpk]) jpk = j;
    if (jpk <= 0 || jpk >= jmax - 1) return 0.0;
    // the global maximum may sit on a multiple of the fundamental; fold it
    // down whenever a comparable peak lives at an integer fraction of the lag
    for (bool reduced = true; reduced;) {
        reduced = false;
        for (int k = 2; k <= 5 && !reduced; ++k) {
            const Eigen::Index j2 = jpk / k;
            if (j2 < 2 || 2 * j2 < j0) continue;
            const Eigen::Index rad = std::max<Eigen::Index>(2, jpk / 20);
            Eigen::Index jl = j2;
            for (Eigen::Index j = std::max<Eigen::Index>(1, j2 - rad);
                 j <= std::min(jmax - 2, j2 + rad); ++j)
                if (r[j] > r[jl]) jl = j;
            const bool local_max = r[jl] >= r[jl - 1] && r[jl] >= r[jl + 1];
            if (local_max && r[jl] > 0.55 * r[jpk]) {
                jpk = jl;
                reduced = true;
            }
        }
    }
    // parabolic refinement around the peak
    const double num = r[jpk - 1] - r[jpk + 1];
    const double den = r[jpk - 1] - 2.0 * r[jpk] + r[jpk + 1];
    const double shift = den != 0.0 ? 0.5 * num / den : 0.0;
    return (static_cast<double>(jpk) + shift) * dt;
}

RabiReport rabi_analysis(const DefectConfig& defects, double omega0,
                         const Eigen::VectorXd& times, const TransferOptions& opts) {
    const auto levels = find_bound_states(defects, omega0);
    if (levels.size() != 2)
        throw protocol_error("Rabi transfer unavailable: need exactly two discrete levels, found " +
                             std::to_string(levels.size()));
    RabiReport rep;
    rep.omega_r = levels[1].energy - levels[0].energy;
    rep.c_l1 = transfer_amplitude(defects, omega0, defects.l1, defects.l1, times, opts);
    rep.c_l2 = transfer_amplitude(defects, omega0, defects.l1, defects.l2, times, opts);
    rep.period = measure_period(times, rep.c_l1.concurrence);
    rep.max_c_receiver = rep.c_l2.concurrence.maxCoeff();
    rep.predicted_c_l1 = (times.array() * (rep.omega_r / 2.0)).cos().abs();
    rep.predicted_c_l2 = (times.array() * (rep.omega_r / 2.0)).sin().abs();
    return rep;
}

SiteTimeMap entanglement_map(const DefectConfig& defects, double omega0, int sender,
                             const Eigen::VectorXd& times, int window_lo, int window_hi,
                             const TransferOptions& opts) {
    defects.validate();
    if (window_hi < window_lo)
        throw std::invalid_argument("entanglement_map: empty window");
    const auto levels = find_bound_states(defects, omega0);
    const auto nodes = quad_nodes_for(defects, omega0, opts.quad_nodes);
    const int m = opts.quad_nodes;
    const int w = window_hi - window_lo + 1;

    Eigen::ArrayXcd gs(m);
    Eigen::ArrayXd energy(m);
    for (int k = 0; k < m; ++k) {
        gs[k] = std::conj(g_site(nodes[k], defects, sender)) * nodes[k].weight;
        energy[k] = nodes[k].energy;
    }
    Eigen::MatrixXcd prod(w, m); // site-resolved weighted band products
    for (int i = 0; i < w; ++i)
        for (int k = 0; k < m; ++k)
            prod(i, k) = g_site(nodes[k], defects, window_lo + i) * gs[k];

    SiteTimeMap map;
    map.window_first = window_lo;
    map.times = times;
    map.c.resize(w, times.size());
    Eigen::VectorXcd phase(m);
    for (Eigen::Index k = 0; k < times.size(); ++k) {
        const double t = times[k];
        phase = (-kI * t * energy).exp();
        Eigen::VectorXcd f = prod * phase;
        for (const auto& lvl : levels) {
            const cplx ph = std::exp(-kI * (lvl.energy * t)) * lvl.amplitude(sender);
            for (int i = 0; i < w; ++i) f[i] += ph * lvl.amplitude(window_lo + i);
        }
        map.c.col(k) = f.cwiseAbs();
    }
    return map;
}

TrapReport trap_metrics(const TransferRecord& record, double x_demod, double trapped_weight) {
    const Eigen::Index n = record.times.size();
    if (n < 32)
        throw std::invalid_argument("trap_metrics: record too short");
    if (record.f.size() != n)
        throw std::invalid_argument("trap_metrics: record must carry the complex amplitude");
    const double dt = record.times[1] - record.times[0];
    const double t_fast = 2.0 * M_PI / std::max(1e-9, std::abs(x_demod));
    const Eigen::Index win = std::max<Eigen::Index>(1, static_cast<Eigen::Index>(t_fast / dt));

    // Undo the discrete-level phase: h(t) = f(t) e^{+i E_loc t} splits into
    // the static trapped weight c (the level's share of the overlap) plus the
    // decaying band remnant. The smooth trapped-concurrence curve is then
    // c + |h - c|, free of the level-band beat that modulates |f| itself.
    const double e_demod = record.omega0 + x_demod;
    Eigen::VectorXcd h(n);
    for (Eigen::Index i = 0; i < n; ++i)
        h[i] = record.f[i] * std::exp(cplx(0.0, e_demod * record.times[i]));
    // with no weight supplied, fall back to the late-time mean, which is
    // reliable once the band term has dephased within the record
    const cplx c_est = trapped_weight >= 0.0 ? cplx(trapped_weight, 0.0)
                                             : h.tail(n / 3).mean();
    const double c_mag = std::abs(c_est);

    TrapReport rep;
    rep.envelope.resize(n);
    for (Eigen::Index i = 0; i < n; ++i) rep.envelope[i] = c_mag + std::abs(h[i] - c_est);
    // residual wiggle from the finite-window estimate of c: smooth over one
    // beat period, then enforce the monotone decay
    Eigen::VectorXd smooth(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        const Eigen::Index hi = std::min(n, i + win + 1);
        double mx = 0.0;
        for (Eigen::Index j = i; j < hi; ++j) mx = std::max(mx, rep.envelope[j]);
        smooth[i] = mx;
    }
    rep.envelope[0] = smooth[0];
    for (Eigen::Index i = 1; i < n; ++i)
        rep.envelope[i] = std::min(smooth[i], rep.envelope[i - 1]);

    // short-time parabola c0 + c2 t^2 over the first 10%
    const Eigen::Index nfit = std::max<Eigen::Index>(8, n / 10);
    double s0 = 0, s2 = 0, s4 = 0, sy = 0, sy2 = 0;
    for (Eigen::Index i = 0; i < nfit; ++i) {
        const double t2 = record.times[i] * record.times[i];
        s0 += 1.0;
        s2 += t2;
        s4 += t2 * t2;
        sy += rep.envelope[i];
        sy2 += rep.envelope[i] * t2;
    }
    const double det = s0 * s4 - s2 * s2;
    if (std::abs(det) < 1e-30)
        throw numerical_error("trap_metrics: degenerate short-time fit");
    rep.parabola_c0 = (s4 * sy - s2 * sy2) / det;
    rep.parabola_coeff = (s0 * sy2 - s2 * sy) / det;
    double rss = 0.0;
    for (Eigen::Index i = 0; i < nfit; ++i) {
        const double fit = rep.parabola_c0 + rep.parabola_coeff * record.times[i] * record.times[i];
        rss += (rep.envelope[i] - fit) * (rep.envelope[i] - fit);
    }
    rep.fit_rms = std::sqrt(rss / static_cast<double>(nfit));

    const Eigen::Index tail = std::max<Eigen::Index>(1, n / 5);
    rep.residual = rep.envelope.tail(tail).mean();
    return rep;
}

GapScaling gap_scaling(double alpha, const std::vector<int>& d_range, double omega0) {
    GapScaling gs;
    std::vector<double> xs, ys;
    for (int d : d_range) {
        DefectConfig cfg{0, d, alpha, alpha};
        const auto levels = find_bound_states(cfg, omega0);
        if (levels.size() != 2) {
            gs.excluded.push_back(d);
            continue;
        }
        const double e21 = levels[1].energy - levels[0].energy;
        gs.e21.emplace_back(d, e21);
        xs.push_back(d);
        ys.push_back(std::log(e21));
    }
    if (xs.size() >= 2)
        gs.r2 = linear_fit_r2(xs, ys, gs.slope, gs.intercept);
    return gs;
}

} // namespace xxchain
